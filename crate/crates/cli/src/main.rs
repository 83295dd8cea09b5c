//! `qgrass` — JSON command-line front end for the curve-counting engine.
//!
//! Subcommands map one-to-one onto the library: `degree` cross-checks the
//! five counting routes, `poset` dumps the quantum Plucker index poset,
//! `qlr` prints quantum Littlewood-Richardson tables, `vi` evaluates the
//! residue formula exactly and in floating point, `ideal` reports the
//! initial-ideal combinatorics, `poleplace` solves static pole placement
//! instances on `Grass(2, 4)`, and `verify` runs the engine's verification
//! suites.
//!
//! Output is one JSON document on stdout with canonically ordered keys; big
//! integers are decimal strings, rationals are `"num/den"` strings, and
//! floats are fixed-precision scientific strings, so identical invocations
//! are byte-identical (pass `--pretty` for an indented rendering).  Results
//! can be cached under `--cache-dir` (or `$QGRASS_CACHE_DIR`); cached runs
//! replay the originally printed bytes.
//!
//! Exit codes: 0 success (including a reported degeneracy), 1 disagreement
//! or failed verification, 2 invalid input, 3 cap exceeded, 4 internal
//! error.

mod cache;

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qgrass::closed::{closed_degree, windowed_degree};
use qgrass::qring::{degree_via_pieri, qlr_table};
use qgrass::residue::{d_exact, d_numeric};
use qgrass::variety::{
    initial_ideal_gens, interpolate_quadrics, random_static_instance, sr_decomposition,
    static_compensators_grass24, MPlane,
};
use qgrass::verify::{run_all, run_named, CRITERIA};
use qgrass::{Context, Error};

use cache::{CacheKey, CachedResult};

#[derive(Parser)]
#[command(name = "qgrass", version, about = "Exact curve counts on Grassmannians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Emit canonical single-line JSON (the default output format).
    #[arg(long, global = true)]
    json: bool,

    /// Indent the JSON for human readers (ignored when --json is given).
    #[arg(long, global = true)]
    pretty: bool,

    /// Cache directory; caching is disabled when neither this flag nor
    /// QGRASS_CACHE_DIR is set.
    #[arg(long, global = true, env = "QGRASS_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Recompute even if a cached result exists, and do not write one.
    #[arg(long, global = true)]
    no_cache: bool,

    /// On a cache hit, recompute anyway and fail unless the stored bytes
    /// match the recomputation.
    #[arg(long, global = true)]
    cache_selftest: bool,

    /// Seed for the randomized operations (verify, ideal --quadrics,
    /// poleplace --random).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest poset the chain-counting routes will traverse.
    #[arg(long, global = true, default_value_t = 50_000)]
    cap_poset: i64,

    /// Largest number of facets the Stanley-Reisner report will enumerate
    /// (the count itself is always exact).
    #[arg(long, global = true, default_value_t = 10_000)]
    cap_facets: usize,

    /// Largest number of critical points the residue routes will sum over.
    #[arg(long, global = true, default_value_t = 100_000)]
    cap_points: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Count degree-q rational curves on Grass(p, m+p) meeting
    /// q(m+p) + mp general Schubert conditions.
    Degree {
        m: i64,
        p: i64,
        q: i64,
        /// Which counting route(s) to run; `all` cross-checks every route.
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
    },
    /// Summarize (or fully dump) the quantum Plucker index poset C^q_{m,p}.
    Poset {
        m: i64,
        p: i64,
        q: i64,
        /// Emit every element with rank, window sequence, covers, and chain
        /// count.
        #[arg(long)]
        dump: bool,
    },
    /// Quantum Littlewood-Richardson table for two level-0 classes.
    Qlr {
        /// First column set, e.g. "1,3".
        #[arg(long)]
        alpha: String,
        /// Second column set, e.g. "2,4".
        #[arg(long)]
        beta: String,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        p: i64,
    },
    /// Evaluate the residue formula exactly and in floating point at a
    /// window sequence K.
    Vi {
        /// The window sequence, e.g. "1,2".
        #[arg(long = "K")]
        k: String,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        p: i64,
    },
    /// Initial-ideal generators and Stanley-Reisner data; optionally
    /// interpolate the quadrics through the variety.
    Ideal {
        m: i64,
        p: i64,
        q: i64,
        /// Report the Hilbert function for degrees 0..=t_max.
        #[arg(long, default_value_t = 6)]
        t_max: u32,
        /// Interpolate the quadric equations from random curves (seeded).
        #[arg(long)]
        quadrics: bool,
        /// Sample count for interpolation (default: just above the floor).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Solve a static pole placement instance on Grass(2, 4): four 2-planes
    /// with distinct torus parameters.
    Poleplace {
        /// A 4x2 plane as semicolon-separated rows of rationals, e.g.
        /// "1,0;0,1;2,3;4,5"; give the flag four times.
        #[arg(long)]
        plane: Vec<String>,
        /// The four torus parameters, e.g. "1,2,3,4".
        #[arg(long)]
        s: Option<String>,
        /// Solve a random rational instance instead (seeded).
        #[arg(long)]
        random: bool,
    },
    /// Run the verification suites and report one line per criterion.
    Verify {
        /// Verification domain (only "default" is defined).
        #[arg(long, default_value = "default")]
        grid: String,
        /// Run a single named criterion instead of the full suite.
        #[arg(long)]
        criterion: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Saturated-chain count in the index poset.
    Chains,
    /// Closed product/sum formula.
    Closed,
    /// Windowed sum of Schubert degrees.
    Windowed,
    /// Exact residue (Vafa-Intriligator) sum.
    Vi,
    /// Hyperplane-power coefficient in the quantum ring.
    Ring,
    /// Every route, cross-checked.
    All,
}

impl Method {
    fn label(self) -> &'static str {
        match self {
            Method::Chains => "chains",
            Method::Closed => "closed",
            Method::Windowed => "windowed",
            Method::Vi => "vi",
            Method::Ring => "ring",
            Method::All => "all",
        }
    }
}

struct Outcome {
    body: Value,
    exit: i32,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(&cli));
}

fn run(cli: &Cli) -> i32 {
    let key = cache_key(&cli.command, &cli.global);
    let cache_dir = if cli.global.no_cache { None } else { cli.global.cache_dir.as_deref() };

    if let Some(dir) = cache_dir {
        if let Some(hit) = cache::lookup(dir, &key) {
            if cli.global.cache_selftest {
                let fresh = render(&cli.command, &cli.global);
                if fresh.output != hit.output || fresh.exit != hit.exit {
                    let body = json!({
                        "error": {
                            "kind": "internal",
                            "message": "cache self-test failed: stored bytes differ from recomputation",
                        }
                    });
                    emit(&body.to_string());
                    return 4;
                }
            }
            emit(&printable(&hit.output, &cli.global));
            return hit.exit;
        }
    }

    let result = render(&cli.command, &cli.global);
    if let Some(dir) = cache_dir {
        if let Err(e) = cache::store(dir, &key, &result) {
            eprintln!("warning: could not write cache entry: {e}");
        }
    }
    emit(&printable(&result.output, &cli.global));
    result.exit
}

/// The cache always holds canonical single-line bytes; `--pretty` re-indents
/// them at print time (unless `--json` pins the canonical form).
fn printable(canonical: &str, g: &Global) -> String {
    if g.pretty && !g.json {
        if let Ok(v) = serde_json::from_str::<Value>(canonical) {
            if let Ok(pretty) = serde_json::to_string_pretty(&v) {
                return pretty;
            }
        }
    }
    canonical.to_string()
}

/// Prints one line to stdout; a closed pipe (e.g. `| head`) is not an
/// error worth a panic, it just means nobody is reading anymore.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|()| out.flush());
}

fn render(cmd: &Command, g: &Global) -> CachedResult {
    match execute(cmd, g) {
        Ok(outcome) => CachedResult { output: outcome.body.to_string(), exit: outcome.exit },
        Err(e) => {
            let (kind, exit) = match &e {
                Error::Invalid(_) => ("invalid", 2),
                Error::Degenerate(_) => ("degenerate", 1),
                Error::CapExceeded(_) => ("cap", 3),
                Error::Internal(_) => ("internal", 4),
            };
            let body = json!({"error": {"kind": kind, "message": e.to_string()}});
            CachedResult { output: body.to_string(), exit }
        }
    }
}

/// Canonical cache identity of an invocation: the subcommand name plus every
/// parameter that can influence the output, including the seed and caps.
fn cache_key(cmd: &Command, g: &Global) -> CacheKey {
    let caps = json!({
        "facets": g.cap_facets,
        "points": g.cap_points,
        "poset": g.cap_poset,
    });
    let (op, params): (&'static str, Value) = match cmd {
        Command::Degree { m, p, q, method } => (
            "degree",
            json!({"caps": caps, "m": m, "method": method.label(), "p": p, "q": q}),
        ),
        Command::Poset { m, p, q, dump } => {
            ("poset", json!({"caps": caps, "dump": dump, "m": m, "p": p, "q": q}))
        }
        Command::Qlr { alpha, beta, m, p } => {
            ("qlr", json!({"alpha": alpha, "beta": beta, "m": m, "p": p}))
        }
        Command::Vi { k, m, p } => ("vi", json!({"K": k, "caps": caps, "m": m, "p": p})),
        Command::Ideal { m, p, q, t_max, quadrics, samples } => (
            "ideal",
            json!({
                "caps": caps, "m": m, "p": p, "q": q, "quadrics": quadrics,
                "samples": samples, "seed": g.seed, "t_max": t_max,
            }),
        ),
        Command::Poleplace { plane, s, random } => (
            "poleplace",
            json!({"plane": plane, "random": random, "s": s, "seed": g.seed}),
        ),
        Command::Verify { grid, criterion } => {
            ("verify", json!({"criterion": criterion, "grid": grid, "seed": g.seed}))
        }
    };
    CacheKey { op, params }
}

fn execute(cmd: &Command, g: &Global) -> Result<Outcome, Error> {
    match cmd {
        Command::Degree { m, p, q, method } => cmd_degree(*m, *p, *q, *method, g),
        Command::Poset { m, p, q, dump } => cmd_poset(*m, *p, *q, *dump, g),
        Command::Qlr { alpha, beta, m, p } => cmd_qlr(alpha, beta, *m, *p),
        Command::Vi { k, m, p } => cmd_vi(k, *m, *p, g),
        Command::Ideal { m, p, q, t_max, quadrics, samples } => {
            cmd_ideal(*m, *p, *q, *t_max, *quadrics, *samples, g)
        }
        Command::Poleplace { plane, s, random } => cmd_poleplace(plane, s.as_deref(), *random, g),
        Command::Verify { grid, criterion } => cmd_verify(grid, criterion.as_deref(), g),
    }
}

fn binomial(n: i64, k: i64) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Fixed-precision rendering for the few floating-point values that appear
/// in output (so identical runs are byte-identical).
fn ffloat(x: f64) -> String {
    format!("{x:.15e}")
}

fn parse_i64_list(text: &str, what: &str) -> Result<Vec<i64>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Invalid(format!("{what}: '{t}' is not an integer")))
        })
        .collect()
}

fn parse_rational(text: &str, what: &str) -> Result<BigRational, Error> {
    BigRational::from_str(text.trim())
        .map_err(|_| Error::Invalid(format!("{what}: '{text}' is not a rational (use n or n/d)")))
}

fn cmd_degree(m: i64, p: i64, q: i64, method: Method, g: &Global) -> Result<Outcome, Error> {
    let ctx = Context::new(m, p, q)?;
    let top = ctx.max_index().to_window(ctx.n());
    let requested: Vec<Method> = match method {
        Method::All => vec![Method::Chains, Method::Closed, Method::Windowed, Method::Vi, Method::Ring],
        single => vec![single],
    };
    let mut values: Vec<(&'static str, BigInt)> = Vec::new();
    for route in requested {
        let value = match route {
            Method::Chains => {
                if ctx.size() > g.cap_poset {
                    return Err(Error::CapExceeded(format!(
                        "poset has {} elements, above --cap-poset {}",
                        ctx.size(),
                        g.cap_poset
                    )));
                }
                ctx.degree()
            }
            Method::Closed => closed_degree(m, p, q)?,
            Method::Windowed => windowed_degree(&top, m, p)?,
            Method::Vi => {
                ensure_points_cap(ctx.n(), p, g)?;
                d_exact(top.seq(), m, p)?
            }
            Method::Ring => degree_via_pieri(m, p, q)?,
            Method::All => unreachable!("expanded above"),
        };
        values.push((route.label(), value));
    }
    let agree = values.windows(2).all(|w| w[0].1 == w[1].1);
    let value = &values[0].1;
    let methods: Value =
        values.iter().map(|(label, v)| (label.to_string(), json!(v.to_string()))).collect();
    let body = json!({
        "op": "degree",
        "m": m,
        "p": p,
        "q": q,
        "method": method.label(),
        "methods": methods,
        "value": value.to_string(),
        "agree": agree,
        "parity": if value.is_odd() { "odd" } else { "even" },
    });
    Ok(Outcome { body, exit: i32::from(!agree) })
}

fn cmd_poset(m: i64, p: i64, q: i64, dump: bool, g: &Global) -> Result<Outcome, Error> {
    let ctx = Context::new(m, p, q)?;
    if ctx.size() > g.cap_poset {
        return Err(Error::CapExceeded(format!(
            "poset has {} elements, above --cap-poset {}",
            ctx.size(),
            g.cap_poset
        )));
    }
    let mut body = json!({
        "op": "poset",
        "m": m,
        "p": p,
        "q": q,
        "size": ctx.size(),
        "top_rank": ctx.top_rank(),
        "degree": ctx.degree().to_string(),
    });
    if dump {
        body["elements"] = ctx.dump();
    }
    Ok(Outcome { body, exit: 0 })
}

fn cmd_qlr(alpha: &str, beta: &str, m: i64, p: i64) -> Result<Outcome, Error> {
    let alpha = parse_i64_list(alpha, "--alpha")?;
    let beta = parse_i64_list(beta, "--beta")?;
    let table = qlr_table(&alpha, &beta, m, p)?;
    let mut body = table.to_json();
    body["op"] = json!("qlr");
    Ok(Outcome { body, exit: 0 })
}

fn ensure_points_cap(n: i64, p: i64, g: &Global) -> Result<(), Error> {
    let points = binomial(n, p);
    if points > BigInt::from(g.cap_points) {
        return Err(Error::CapExceeded(format!(
            "residue sum ranges over {points} critical points, above --cap-points {}",
            g.cap_points
        )));
    }
    Ok(())
}

fn cmd_vi(k: &str, m: i64, p: i64, g: &Global) -> Result<Outcome, Error> {
    let k = parse_i64_list(k, "--K")?;
    ensure_points_cap(m + p, p, g)?;
    let exact = d_exact(&k, m, p)?;
    let numeric = d_numeric(&k, m, p)?;
    let body = json!({
        "op": "vi",
        "K": k,
        "m": m,
        "p": p,
        "exact": exact.to_string(),
        "numeric": {
            "re": ffloat(numeric.value.re),
            "im": ffloat(numeric.value.im),
            "imag_residual": ffloat(numeric.imag_residual),
            "rounding_residual": ffloat(numeric.rounding_residual),
        },
    });
    Ok(Outcome { body, exit: 0 })
}

fn cmd_ideal(
    m: i64,
    p: i64,
    q: i64,
    t_max: u32,
    quadrics: bool,
    samples: Option<usize>,
    g: &Global,
) -> Result<Outcome, Error> {
    let ctx = Context::new(m, p, q)?;
    let generators: Vec<Value> = initial_ideal_gens(&ctx)
        .iter()
        .map(|(a, b)| json!([a.to_json(), b.to_json()]))
        .collect();
    let sr = sr_decomposition(&ctx, g.cap_facets, t_max)?;
    let basis = if quadrics {
        let samples = match samples {
            Some(count) => count,
            None => {
                // default: a little above the sample floor (the library
                // rejects anything below it)
                let floor: usize = ctx
                    .multichain_count(2)
                    .to_string()
                    .parse()
                    .map_err(|_| Error::CapExceeded("interpolation floor overflows usize".into()))?;
                floor + 10
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
        Some(interpolate_quadrics(&ctx, samples, &mut rng)?.to_json())
    } else {
        None
    };
    let body = json!({
        "op": "ideal",
        "m": m,
        "p": p,
        "q": q,
        "generators": generators,
        "sr": sr.to_json(),
        "quadrics": basis,
    });
    Ok(Outcome { body, exit: 0 })
}

fn parse_plane(text: &str) -> Result<MPlane, Error> {
    let rows: Vec<Vec<BigRational>> = text
        .split(';')
        .map(|row| {
            row.split(',').map(|entry| parse_rational(entry, "--plane entry")).collect()
        })
        .collect::<Result<_, _>>()?;
    MPlane::new(rows)
}

fn cmd_poleplace(
    planes: &[String],
    s: Option<&str>,
    random: bool,
    g: &Global,
) -> Result<Outcome, Error> {
    let data: Vec<(MPlane, BigRational)> = if random {
        if !planes.is_empty() || s.is_some() {
            return Err(Error::Invalid(
                "--random draws its own instance; drop --plane/--s".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
        random_static_instance(&mut rng)
    } else {
        if planes.len() != 4 {
            return Err(Error::Invalid(format!(
                "need --plane four times (got {}) or --random",
                planes.len()
            )));
        }
        let s = parse_i64_like_rationals(s.ok_or_else(|| {
            Error::Invalid("need --s with four torus parameters, e.g. --s 1,2,3,4".into())
        })?)?;
        if s.len() != 4 {
            return Err(Error::Invalid(format!("--s needs four parameters, got {}", s.len())));
        }
        planes
            .iter()
            .map(|text| parse_plane(text))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .zip(s)
            .collect()
    };
    let instance = json!({
        "planes": data
            .iter()
            .map(|(l, _)| {
                l.entries()
                    .iter()
                    .map(|row| row.iter().map(BigRational::to_string).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>(),
        "s": data.iter().map(|(_, s)| s.to_string()).collect::<Vec<_>>(),
    });
    let body = match static_compensators_grass24(&data) {
        Ok(report) => json!({
            "op": "poleplace",
            "instance": instance,
            "degenerate": false,
            "report": report.to_json(),
        }),
        Err(Error::Degenerate(reason)) => json!({
            "op": "poleplace",
            "instance": instance,
            "degenerate": true,
            "reason": reason,
        }),
        Err(e) => return Err(e),
    };
    Ok(Outcome { body, exit: 0 })
}

fn parse_i64_like_rationals(text: &str) -> Result<Vec<BigRational>, Error> {
    text.split(',').map(|t| parse_rational(t, "--s entry")).collect()
}

fn cmd_verify(grid: &str, criterion: Option<&str>, g: &Global) -> Result<Outcome, Error> {
    if grid != "default" {
        return Err(Error::Invalid(format!(
            "unknown grid '{grid}'; only 'default' is defined"
        )));
    }
    let results = match criterion {
        Some(name) => vec![run_named(name, g.seed).ok_or_else(|| {
            Error::Invalid(format!(
                "unknown criterion '{name}'; expected one of: {}",
                CRITERIA.join(", ")
            ))
        })?],
        None => run_all(g.seed),
    };
    let all_passed = results.iter().all(|r| r.passed);
    let body = json!({
        "op": "verify",
        "grid": grid,
        "seed": g.seed,
        "criteria": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "all_passed": all_passed,
    });
    Ok(Outcome { body, exit: i32::from(!all_passed) })
}
