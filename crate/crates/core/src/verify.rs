//! Engine-wide verification suites.
//!
//! Every guarantee the crate makes is packaged here as one named check over
//! a fixed, documented domain: the five degree routes must agree grid-wide,
//! the count functions must satisfy their recursion and boundary laws, the
//! quantum ring must be a commutative associative ring whose classical slice
//! matches tableau combinatorics, the residue sums must reproduce the exact
//! integers, and the geometric side (boundary maps, pole placement, quadric
//! interpolation, the static solver) must satisfy its defining identities on
//! random inputs.
//!
//! Checks return a [`CriterionResult`] instead of panicking, so the same
//! suite backs both the integration tests and the command-line `verify`
//! subcommand.  Randomized checks take an explicit seed and are fully
//! deterministic for a fixed seed.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::closed::{
    closed_degree, grassmann_degree, recursion_report, schubert_degree, windowed_degree,
};
use crate::error::{internal, Error, Result};
use crate::poset::{chain_count, Context, QIndex, WindowSeq};
use crate::qring::{
    chain_identity, degree_via_pieri, lr_coeff, qlr_table, quantum_product, subset_to_partition,
    RingElem,
};
use crate::residue::{correlator, d_exact, d_numeric, delta, ClassSpec};
use crate::upoly::UniPoly;
use crate::variety::{
    boundary_map, grass24_quadric, hyperplane_form, hyperplane_poly, initial_ideal_gens,
    interpolate_quadrics, plucker_coords, pole_placement_map, random_integer_curve,
    random_mplane, random_plucker_vector, random_static_instance,
    static_compensators_grass24, QuadExt,
};

/// Outcome of one verification criterion: a stable name, a verdict, and a
/// one-line human-readable account of what was checked.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl CriterionResult {
    /// `PASS name: details` / `FAIL name: details`, one line.
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} {}: {}", self.name, self.details)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "details": self.details,
        })
    }
}

fn outcome(name: &'static str, run: Result<String>) -> CriterionResult {
    match run {
        Ok(details) => CriterionResult { name, passed: true, details },
        Err(e) => CriterionResult { name, passed: false, details: e.to_string() },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(internal(msg()))
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    let mut acc = 1i64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The standard verification grid: every `(m, p, q)` with `2 <= m+p <= 7`,
/// `1 <= p <= m`, `0 <= q <= 3`, and poset size at most 5000.
pub fn degree_grid() -> Vec<(i64, i64, i64)> {
    let mut grid = Vec::new();
    for n in 2..=7 {
        for p in 1..=n / 2 {
            let m = n - p;
            for q in 0..=3 {
                if binomial(n, p) * (q + 1) <= 5000 {
                    grid.push((m, p, q));
                }
            }
        }
    }
    grid
}

/// The five routes to `d(m, p; q)` agree on the whole grid: saturated-chain
/// count, closed formula, windowed Schubert sum, exact residue sum, and the
/// hyperplane-power coefficient in the quantum ring.
pub fn five_route_degree_agreement() -> CriterionResult {
    outcome("five_route_degree_agreement", (|| {
        let grid = degree_grid();
        for &(m, p, q) in &grid {
            let ctx = Context::new(m, p, q)?;
            let chains = ctx.degree();
            let top = ctx.max_index().to_window(ctx.n());
            let routes = [
                ("closed formula", closed_degree(m, p, q)?),
                ("windowed sum", windowed_degree(&top, m, p)?),
                ("residue sum", d_exact(top.seq(), m, p)?),
                ("ring power", degree_via_pieri(m, p, q)?),
            ];
            for (label, value) in routes {
                ensure(value == chains, || {
                    format!("({m},{p},{q}): {label} gives {value}, chain count gives {chains}")
                })?;
            }
        }
        Ok(format!("all five routes agree on {} grid points", grid.len()))
    })())
}

/// The anchor value: `d(3, 2; 1) = 55` by every route.
pub fn anchor_degree_55() -> CriterionResult {
    outcome("anchor_degree_55", (|| {
        let (m, p, q) = (3, 2, 1);
        let ctx = Context::new(m, p, q)?;
        let top = ctx.max_index().to_window(ctx.n());
        let routes = [
            ("chain count", ctx.degree()),
            ("closed formula", closed_degree(m, p, q)?),
            ("windowed sum", windowed_degree(&top, m, p)?),
            ("residue sum", d_exact(top.seq(), m, p)?),
            ("ring power", degree_via_pieri(m, p, q)?),
        ];
        let fifty_five = BigInt::from(55);
        for (label, value) in routes {
            ensure(value == fifty_five, || format!("{label} gives {value}, expected 55"))?;
        }
        Ok("d(3,2;1) = 55 by chain count, closed formula, windowed sum, residue sum, and ring power".into())
    })())
}

/// Per-element agreement on whole posets: for every index of `C^1_{3,2}` and
/// `C^1_{2,2}`, the chain count to it equals the windowed sum, the exact
/// residue value, and the ratio-form residue value at its window sequence.
pub fn per_element_degrees() -> CriterionResult {
    outcome("per_element_degrees", (|| {
        let mut checked = 0usize;
        for (m, p) in [(3i64, 2i64), (2, 2)] {
            let ctx = Context::new(m, p, 1)?;
            let bottom = ctx.min_index();
            for x in ctx.elements() {
                let w = x.to_window(ctx.n());
                let chains = chain_count(&ctx, &x, &bottom)?;
                let routes = [
                    ("windowed sum", windowed_degree(&w, m, p)?),
                    ("residue sum", d_exact(w.seq(), m, p)?),
                    ("ratio form", delta(&x, m, p)?),
                ];
                for (label, value) in routes {
                    ensure(value == chains, || {
                        format!("({m},{p}) at {w:?}: {label} gives {value}, chains give {chains}")
                    })?;
                }
                checked += 1;
            }
        }
        Ok(format!("all four per-element routes agree on {checked} poset elements"))
    })())
}

/// At `q = 0` the count is the degree of the Grassmannian itself, including
/// the classical values `deg Grass(2, 4) = 2` and `deg Grass(2, 5) = 5`.
pub fn classical_limit() -> CriterionResult {
    outcome("classical_limit", (|| {
        let mut shapes = 0usize;
        for &(m, p, q) in &degree_grid() {
            if q != 0 {
                continue;
            }
            let ctx = Context::new(m, p, 0)?;
            let classical = grassmann_degree(m, p)?;
            ensure(ctx.degree() == classical, || {
                format!("({m},{p}): d(m,p;0) = {} but deg Grass = {}", ctx.degree(), classical)
            })?;
            shapes += 1;
        }
        ensure(grassmann_degree(2, 2)? == BigInt::from(2), || {
            format!("deg Grass(2,4) = {}, expected 2", grassmann_degree(2, 2).unwrap())
        })?;
        ensure(grassmann_degree(3, 2)? == BigInt::from(5), || {
            format!("deg Grass(2,5) = {}, expected 5", grassmann_degree(3, 2).unwrap())
        })?;
        Ok(format!(
            "d(m,p;0) equals the Grassmannian degree on {shapes} shapes; Grass(2,4) -> 2, Grass(2,5) -> 5"
        ))
    })())
}

/// The recursion/boundary law suite on all weakly increasing sequences of
/// rank at most 20 for `(m,p)` in `{(2,2),(3,2),(4,2),(3,3)}`.  The windowed
/// sum and the exact residue sum must satisfy the recursion, the initial
/// condition, and all three vanishing conditions; the plain alternating
/// Schubert degree satisfies all but the window-edge condition (repairing
/// that failure is precisely what the windowed sum is for).
pub fn recursion_boundary_suite() -> CriterionResult {
    outcome("recursion_boundary_suite", (|| {
        let max_rank = 20;
        let mut sequences = 0usize;
        for (m, p) in [(2i64, 2i64), (3, 2), (4, 2), (3, 3)] {
            let rep = recursion_report(schubert_degree, m, p, max_rank);
            ensure(rep.passed(false), || {
                format!("plain Schubert degree breaks the suite at ({m},{p}): {rep:?}")
            })?;
            ensure(!rep.window_edge_failures.is_empty(), || {
                format!(
                    "plain Schubert degree unexpectedly satisfies the window-edge condition at ({m},{p})"
                )
            })?;
            sequences += rep.checked;

            let windowed = |s: &[i64]| match WindowSeq::new(s.to_vec(), m + p) {
                Ok(w) => windowed_degree(&w, m, p).expect("valid shape"),
                Err(_) => BigInt::zero(),
            };
            let rep = recursion_report(windowed, m, p, max_rank);
            ensure(rep.passed(true), || {
                format!("windowed sum breaks the suite at ({m},{p}): {rep:?}")
            })?;

            let residue = |s: &[i64]| d_exact(s, m, p).expect("valid shape");
            let rep = recursion_report(residue, m, p, max_rank);
            ensure(rep.passed(true), || {
                format!("residue sum breaks the suite at ({m},{p}): {rep:?}")
            })?;
        }
        Ok(format!(
            "recursion, initial, and boundary laws hold for all three count functions over 4 shapes ({sequences} sequences per function)"
        ))
    })())
}

/// The floating residue sum lands within `1e-6` (absolute or relative,
/// whichever is larger) of the exact residue value at the top window
/// sequence of every grid point.
pub fn float_vs_exact() -> CriterionResult {
    outcome("float_vs_exact", (|| {
        let mut worst = 0f64;
        let grid = degree_grid();
        for &(m, p, q) in &grid {
            let ctx = Context::new(m, p, q)?;
            if binomial(ctx.n(), p) > 100_000 {
                continue;
            }
            let top = ctx.max_index().to_window(ctx.n());
            let exact = d_exact(top.seq(), m, p)?;
            let approx = d_numeric(top.seq(), m, p)?;
            let exact_f = exact.to_f64().unwrap_or(f64::INFINITY);
            let err = (approx.value - Complex64::new(exact_f, 0.0)).norm();
            let tol = 1e-6f64.max(1e-6 * exact_f.abs());
            ensure(err < tol, || {
                format!("({m},{p},{q}): |numeric - exact| = {err:.3e} exceeds {tol:.3e}")
            })?;
            worst = worst.max(err / tol.max(f64::MIN_POSITIVE));
        }
        Ok(format!(
            "floating residue sums match exact values on {} grid points (worst residual at {:.1e} of tolerance)",
            grid.len(),
            worst
        ))
    })())
}

/// Symbolic identities in the Chern basis: the power-sum gradient identity
/// for all partials, for `p <= 4` and `m + p <= 9`; the Vandermonde Jacobian
/// determinant for `p <= 5`; and the elementary/complete truncation identity
/// up to degree 12 for `p <= 4`.
pub fn symbolic_identities() -> CriterionResult {
    outcome("symbolic_identities", (|| {
        use crate::symmetric::{eh_identity_holds, power_sum_gradient_holds, vandermonde_jacobian_holds};
        let mut gradient_shapes = 0usize;
        for p in 1..=4i64 {
            for m in 1..=(9 - p) {
                ensure(power_sum_gradient_holds(m, p), || {
                    format!("power-sum gradient identity fails at (m,p) = ({m},{p})")
                })?;
                gradient_shapes += 1;
            }
        }
        for p in 1..=5usize {
            ensure(vandermonde_jacobian_holds(p), || {
                format!("Vandermonde Jacobian identity fails at p = {p}")
            })?;
        }
        for p in 1..=4usize {
            ensure(eh_identity_holds(p, 12), || {
                format!("e/h truncation identity fails at p = {p}")
            })?;
        }
        Ok(format!(
            "power-sum gradient on {gradient_shapes} shapes, Jacobian determinant to p = 5, e/h truncation to degree 12 for p <= 4"
        ))
    })())
}

/// A uniformly random basis class `q^a sigma_alpha` with level `a <= 2`.
fn random_class(m: i64, p: i64, rng: &mut ChaCha8Rng) -> Result<RingElem> {
    let n = m + p;
    let mut pool: Vec<i64> = (1..=n).collect();
    pool.shuffle(rng);
    let mut alpha: Vec<i64> = pool.into_iter().take(p as usize).collect();
    alpha.sort_unstable();
    RingElem::class(m, p, &QIndex::new(alpha, rng.gen_range(0..=2))?)
}

/// Ring laws and classical comparisons: commutativity and associativity on
/// 100 random basis-class triples per Grassmannian in `{Grass(2,4),
/// Grass(2,5), Grass(3,6)}`; the level-0 slice of every quantum
/// Littlewood-Richardson table on `Grass(2,4)` and `Grass(2,5)` equals the
/// tableau-counting oracle; and the square of the point class on
/// `Grass(2,4)` is exactly `q^2`.
pub fn quantum_ring_laws(seed: u64) -> CriterionResult {
    outcome("quantum_ring_laws", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (p, n) in [(2i64, 4i64), (2, 5), (3, 6)] {
            let m = n - p;
            for trial in 0..100 {
                let x = random_class(m, p, &mut rng)?;
                let y = random_class(m, p, &mut rng)?;
                let z = random_class(m, p, &mut rng)?;
                let xy = quantum_product(&x, &y);
                ensure(xy == quantum_product(&y, &x), || {
                    format!("commutativity fails on Grass({p},{n}) trial {trial}: {x:?} * {y:?}")
                })?;
                ensure(
                    quantum_product(&xy, &z) == quantum_product(&x, &quantum_product(&y, &z)),
                    || format!("associativity fails on Grass({p},{n}) trial {trial}"),
                )?;
            }
        }

        let mut tables = 0usize;
        for (m, p) in [(2i64, 2i64), (3, 2)] {
            let n = m + p;
            for alpha in (1..=n).combinations(p as usize) {
                for beta in (1..=n).combinations(p as usize) {
                    let table = qlr_table(&alpha, &beta, m, p)?;
                    let lam = subset_to_partition(&alpha);
                    let mu = subset_to_partition(&beta);
                    for gamma in (1..=n).combinations(p as usize) {
                        let nu = subset_to_partition(&gamma);
                        ensure(table.coeff(&gamma, 0) == lr_coeff(&lam, &mu, &nu), || {
                            format!(
                                "classical slice of N^{gamma:?}_({alpha:?},{beta:?}) on Grass({p},{n}) disagrees with the tableau count"
                            )
                        })?;
                    }
                    tables += 1;
                }
            }
        }

        let point = RingElem::class(2, 2, &QIndex::new(vec![3, 4], 0)?)?;
        let q_squared = RingElem::class(2, 2, &QIndex::new(vec![1, 2], 2)?)?;
        ensure(quantum_product(&point, &point) == q_squared, || {
            "the point class on Grass(2,4) does not square to q^2".into()
        })?;

        Ok(format!(
            "ring laws on 300 random triples, {tables} classical tables match the tableau oracle, point class squares to q^2"
        ))
    })())
}

/// The chain/Littlewood-Richardson identity
/// `sum_alpha f^alpha N^gamma_(alpha, beta) = f^gamma_beta` on 50 random
/// comparable pairs `beta <= gamma` (with `l` the rank gap) per Grassmannian.
pub fn chain_lr_identity(seed: u64) -> CriterionResult {
    outcome("chain_lr_identity", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0usize;
        for (m, p) in [(2i64, 2i64), (3, 2), (3, 3)] {
            let ctx = Context::new(m, p, 2)?;
            let elements = ctx.elements();
            for _ in 0..50 {
                let gamma = elements[rng.gen_range(0..elements.len())].clone();
                let mut beta = gamma.clone();
                for _ in 0..rng.gen_range(0..=8) {
                    let covers = ctx.lower_covers(&beta);
                    if covers.is_empty() {
                        break;
                    }
                    beta = covers[rng.gen_range(0..covers.len())].clone();
                }
                let l = ctx.rank(&gamma) - ctx.rank(&beta);
                let (lhs, rhs) = chain_identity(&beta, l, &gamma, m, p)?;
                ensure(lhs == rhs, || {
                    format!(
                        "chain identity fails on ({m},{p}) for beta = {beta:?}, gamma = {gamma:?}, l = {l}: {lhs} != {rhs}"
                    )
                })?;
                checked += 1;
            }
        }
        Ok(format!("chain identity holds on {checked} random comparable pairs across 3 shapes"))
    })())
}

/// Residue-formula correlators: the empty genus-1 correlator counts the
/// critical points (`binomial(n, p)`), and the genus-0 power
/// `<c_1^N>_0` reproduces `d(m, p; q)` with rounding residual below `1e-6`
/// (absolute or relative, whichever is larger — the grid reaches
/// `d(4,3;3) = 11336411576`, where one ulp already exceeds `1e-6`), for
/// every grid point.
pub fn vi_correlators() -> CriterionResult {
    outcome("vi_correlators", (|| {
        let grid = degree_grid();
        let mut worst = 0f64;
        for &(m, p, q) in &grid {
            let n = m + p;
            if q == 0 {
                let empty = correlator(&[], 1, m, p)?;
                let expected = binomial(n, p) as f64;
                let err = (empty.value - Complex64::new(expected, 0.0)).norm();
                ensure(err < 1e-6, || {
                    format!("<>_1 on ({m},{p}) is {} but should be {expected}", empty.value)
                })?;
            }
            let steps = q * n + m * p;
            let classes = vec![ClassSpec::Special(1); steps as usize];
            let power = correlator(&classes, 0, m, p)?;
            let exact = closed_degree(m, p, q)?;
            ensure(power.degree == Some(q), || {
                format!("<c_1^{steps}>_0 on ({m},{p}) selects degree {:?}, expected {q}", power.degree)
            })?;
            ensure(power.exact.as_ref() == Some(&exact), || {
                format!(
                    "exact pathway of <c_1^{steps}>_0 on ({m},{p}) gives {:?}, expected {exact}",
                    power.exact
                )
            })?;
            let residual = power.rounding_residual.max(power.imag_residual);
            let tol = 1e-6f64.max(1e-6 * power.value.re.abs());
            ensure(residual < tol, || {
                format!("<c_1^{steps}>_0 on ({m},{p}) has rounding residual {residual:.3e} (tolerance {tol:.3e})")
            })?;
            let rounded = BigInt::from(power.value.re.round() as i64);
            ensure(rounded == exact, || {
                format!("<c_1^{steps}>_0 on ({m},{p}) rounds to {rounded}, expected {exact}")
            })?;
            worst = worst.max(residual / tol);
        }
        Ok(format!(
            "genus-1 point counts and genus-0 hyperplane powers match on {} grid points (worst residual at {:.1e} of tolerance)",
            grid.len(),
            worst
        ))
    })())
}

/// Geometric identities of the space of curves: the boundary-map pullback of
/// a hyperplane form factors exactly; the pole placement map applied to
/// Plucker coordinates equals the closed-loop determinant; and quadric
/// interpolation recovers the Plucker relation on `Grass(2,4)` together with
/// the incomparable-pair dimension counts.
pub fn variety_geometry(seed: u64) -> CriterionResult {
    outcome("variety_geometry", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shapes = [(2i64, 2i64, 1i64), (3, 2, 1), (2, 2, 2)];

        for &(m, p, q) in &shapes {
            let target = Context::new(m, p, q)?;
            let source = Context::new(m, p, q - 1)?;
            let n = target.n();
            for trial in 0..20 {
                let x = random_plucker_vector(&source, &mut rng);
                let (mut a, mut b) = (0i64, 0i64);
                while a == 0 && b == 0 {
                    a = rng.gen_range(-9..=9);
                    b = rng.gen_range(-9..=9);
                }
                let (a, b) = (BigRational::from_integer(a.into()), BigRational::from_integer(b.into()));
                let l = random_mplane(n as usize, m as usize, &mut rng);
                let image = boundary_map(&target, &a, &b, &x)?;
                let lhs = hyperplane_poly(&target, &l, &image)?;
                let factor =
                    UniPoly::constant(a.clone()) - UniPoly::monomial(b.clone(), n as usize);
                let rhs = factor * hyperplane_poly(&source, &l, &x)?;
                ensure(lhs == rhs, || {
                    format!("pullback factorization fails at ({m},{p},{q}) trial {trial}")
                })?;
            }
        }

        for &(m, p, q) in &shapes {
            let ctx = Context::new(m, p, q)?;
            let n = ctx.n() as usize;
            let mut done = 0;
            while done < 20 {
                let curve = random_integer_curve(&ctx, &mut rng);
                let feedback: Vec<Vec<UniPoly>> = (0..n)
                    .map(|_| {
                        (0..m as usize)
                            .map(|_| {
                                UniPoly::from_int_coeffs(&[
                                    rng.gen_range(-9..=9),
                                    rng.gen_range(-9..=9),
                                ])
                            })
                            .collect()
                    })
                    .collect();
                // rank-deficient feedback draws are rejected by the
                // constructor; simply redraw
                let Ok(map) = pole_placement_map(&ctx, feedback) else { continue };
                let z = plucker_coords(&curve)?;
                ensure(map.apply(&z)? == map.closed_loop_determinant(&curve)?, || {
                    format!("pole placement identity fails at ({m},{p},{q})")
                })?;
                done += 1;
            }
        }

        let plane = Context::new(2, 2, 0)?;
        let basis = interpolate_quadrics(&plane, 30, &mut rng)?;
        ensure(basis.dim() == 1, || {
            format!("Grass(2,4) interpolation found {} quadrics, expected 1", basis.dim())
        })?;
        let qi = |a: i64, b: i64| QIndex::new(vec![a, b], 0).expect("valid index");
        let one = BigRational::one();
        let expected: BTreeMap<(QIndex, QIndex), BigRational> = [
            ((qi(1, 2), qi(3, 4)), one.clone()),
            ((qi(1, 3), qi(2, 4)), -one.clone()),
            ((qi(1, 4), qi(2, 3)), one.clone()),
        ]
        .into();
        ensure(*basis.forms()[0].terms() == expected, || {
            "interpolation did not recover the Plucker relation on Grass(2,4)".into()
        })?;

        for (m, p, q) in [(2i64, 2i64, 0i64), (2, 2, 1)] {
            let ctx = Context::new(m, p, q)?;
            let needed: usize = ctx.multichain_count(2).to_string().parse().expect("small count");
            let basis = interpolate_quadrics(&ctx, needed + 10, &mut rng)?;
            let gens = initial_ideal_gens(&ctx);
            ensure(basis.dim() == gens.len(), || {
                format!(
                    "({m},{p},{q}): interpolated {} quadrics, expected {} incomparable pairs",
                    basis.dim(),
                    gens.len()
                )
            })?;
            let mut pivots = basis.pivot_pairs();
            pivots.sort();
            let mut expected = gens;
            expected.sort();
            ensure(pivots == expected, || {
                format!("({m},{p},{q}): interpolation pivots differ from the incomparable pairs")
            })?;
        }

        Ok("pullback factorization and pole placement identity on 60 random inputs each; interpolation recovers the Plucker relation and both dimension counts".into())
    })())
}

/// The static solver on 100 random rational instances: at least 95 must be
/// generic (a kernel line in `P^5` carrying exactly 2 solutions counted with
/// multiplicity), every returned solution must satisfy all five equations
/// exactly in its quadratic extension, and the rest must be reported as
/// degenerate rather than failing.
pub fn static_pole_placement(seed: u64) -> CriterionResult {
    outcome("static_pole_placement", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = Context::new(2, 2, 0)?;
        let order: Vec<QIndex> = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
            .iter()
            .map(|&(a, b)| QIndex::new(vec![a, b], 0))
            .collect::<Result<_>>()?;
        let mut generic = 0usize;
        let mut degenerate = 0usize;
        let mut real_total = 0usize;
        for trial in 0..100 {
            let data = random_static_instance(&mut rng);
            let report = match static_compensators_grass24(&data) {
                Ok(report) => report,
                Err(Error::Degenerate(_)) => {
                    degenerate += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            ensure(report.kernel.len() == 2, || {
                format!("trial {trial}: kernel dimension {} after a generic solve", report.kernel.len())
            })?;
            let multiplicity: u32 = report.solutions.iter().map(|s| s.multiplicity).sum();
            ensure(multiplicity == 2, || {
                format!("trial {trial}: solution multiplicities sum to {multiplicity}, expected 2")
            })?;
            // independent exact re-verification of every solution
            for sol in &report.solutions {
                ensure(!sol.coords.iter().all(QuadExt::is_zero), || {
                    format!("trial {trial}: zero vector returned as a solution")
                })?;
                ensure(grass24_quadric(&sol.coords).is_zero(), || {
                    format!("trial {trial}: solution misses the Plucker quadric")
                })?;
                for (i, (l, s)) in data.iter().enumerate() {
                    let form = hyperplane_form(&ctx, s, l)?;
                    let mut acc = QuadExt::zero();
                    for (coord, key) in sol.coords.iter().zip(&order) {
                        acc = acc + coord.scale(&form.coeff(key));
                    }
                    ensure(acc.is_zero(), || {
                        format!("trial {trial}: solution misses incidence condition {i}")
                    })?;
                }
            }
            real_total += report.real_solutions as usize;
            generic += 1;
        }
        ensure(generic + degenerate == 100, || "instance accounting is off".into())?;
        ensure(generic >= 95, || {
            format!("only {generic} of 100 instances were generic (need 95)")
        })?;
        Ok(format!(
            "{generic} generic instances (all solutions re-verified exactly, {real_total} real solutions overall), {degenerate} degenerate"
        ))
    })())
}

/// The criterion names [`run_all`] executes, in order.
pub const CRITERIA: [&str; 12] = [
    "five_route_degree_agreement",
    "anchor_degree_55",
    "per_element_degrees",
    "classical_limit",
    "recursion_boundary_suite",
    "float_vs_exact",
    "symbolic_identities",
    "quantum_ring_laws",
    "chain_lr_identity",
    "vi_correlators",
    "variety_geometry",
    "static_pole_placement",
];

/// Runs a single criterion by its name in [`CRITERIA`]; `None` for an
/// unknown name.  Randomized criteria derive their streams from `seed`
/// exactly as [`run_all`] does.
pub fn run_named(name: &str, seed: u64) -> Option<CriterionResult> {
    Some(match name {
        "five_route_degree_agreement" => five_route_degree_agreement(),
        "anchor_degree_55" => anchor_degree_55(),
        "per_element_degrees" => per_element_degrees(),
        "classical_limit" => classical_limit(),
        "recursion_boundary_suite" => recursion_boundary_suite(),
        "float_vs_exact" => float_vs_exact(),
        "symbolic_identities" => symbolic_identities(),
        "quantum_ring_laws" => quantum_ring_laws(seed.wrapping_add(1)),
        "chain_lr_identity" => chain_lr_identity(seed.wrapping_add(2)),
        "vi_correlators" => vi_correlators(),
        "variety_geometry" => variety_geometry(seed.wrapping_add(3)),
        "static_pole_placement" => static_pole_placement(seed.wrapping_add(4)),
        _ => return None,
    })
}

/// Runs the full criterion suite in order.  Randomized criteria derive their
/// streams from `seed`, so a fixed seed reproduces the run exactly.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|name| run_named(name, seed).expect("registered name")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_respects_the_stated_bounds() {
        let grid = degree_grid();
        assert!(grid.contains(&(1, 1, 0)));
        assert!(grid.contains(&(3, 2, 1)));
        assert!(grid.contains(&(4, 3, 3)));
        for &(m, p, q) in &grid {
            assert!(p >= 1 && p <= m);
            assert!((2..=7).contains(&(m + p)));
            assert!((0..=3).contains(&q));
            let ctx = Context::new(m, p, q).unwrap();
            assert!(ctx.size() <= 5000);
        }
        // every admissible (m, p) appears with all four q values here
        assert_eq!(grid.len(), 4 * 12);
    }

    #[test]
    fn binomial_helper_matches_pascal() {
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 0), 1);
    }

    #[test]
    fn anchor_criterion_passes_and_reports() {
        let result = anchor_degree_55();
        assert!(result.passed, "{}", result.details);
        assert!(result.line().starts_with("PASS anchor_degree_55:"));
        assert_eq!(result.to_json()["passed"], serde_json::Value::Bool(true));
    }

    #[test]
    fn unknown_criterion_names_are_rejected() {
        assert!(run_named("no_such_criterion", 0).is_none());
        assert_eq!(CRITERIA.len(), 12);
    }

    #[test]
    fn failures_render_as_fail_lines() {
        let result = outcome("sample", Err(internal("broken invariant")));
        assert!(!result.passed);
        assert_eq!(result.line(), "FAIL sample: internal consistency failure: broken invariant");
    }
}
