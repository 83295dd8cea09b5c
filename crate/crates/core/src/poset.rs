//! The graded poset of quantum Plucker indices.
//!
//! Fix integers `m, p >= 1` and `q >= 0`, and write `n = m + p`.  The poset
//! `C` studied here consists of pairs `alpha^(a)` where `alpha` is a strictly
//! increasing `p`-tuple drawn from `{1, ..., n}` and `0 <= a <= q` is a level.
//! The partial order is
//!
//! ```text
//! alpha^(a) <= beta^(b)   iff   a <= b  and  alpha_i <= beta_{(b-a)+i}
//!                               for all i = 1, ..., p - (b - a)
//! ```
//!
//! (no index conditions when `b - a >= p`).  `C` is a distributive lattice,
//! graded by
//!
//! ```text
//! rank(alpha^(a)) = a(m+p) + sum_i (alpha_i - i),
//! ```
//!
//! with minimum `(1,...,p)^(0)` and maximum `(m+1,...,m+p)^(q)` of rank
//! `N = q(m+p) + mp`.
//!
//! # Window form
//!
//! Every index has an equivalent *window form*: a strictly increasing tuple
//! `i_1 < i_2 < ... < i_p` of positive integers confined to a window of width
//! `m + p`, i.e. `i_p < i_1 + m + p`.  Writing `a = pl + r` with
//! `0 <= r < p`, the translation is
//!
//! ```text
//! w_k = l(m+p) + alpha_{r+k}          for 1 <= k <= p - r,
//! w_k = (l+1)(m+p) + alpha_{k-p+r}    for p - r < k <= p.
//! ```
//!
//! This is an order isomorphism onto window sequences ordered componentwise,
//! and it preserves rank: `sum_k (w_k - k) = rank(alpha^(a))`.  In window
//! form the cover relation is transparent — `y` is covered by `x` exactly
//! when the window form of `y` is obtained from that of `x` by decrementing a
//! single entry — which makes saturated-chain counting a straightforward
//! memoized recursion.
//!
//! The number of saturated chains from the minimum to `alpha^(a)` is the
//! degree of the corresponding projective variety of polynomial matrices; for
//! the maximum it is the curve count `d(m, p; q)`.  See [`Context::degree`].

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{internal, invalid, Result};

/// Ambient parameters `(m, p, q)` fixing one poset `C` of quantum Plucker
/// indices for the Grassmannian `Grass(p, m+p)` and curve degree `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Context {
    m: i64,
    p: i64,
    q: i64,
}

/// A quantum Plucker index `alpha^(a)`: a strictly increasing tuple `alpha`
/// of positive integers together with a level `a >= 0`.
///
/// Shape constraints (strict increase, positivity) are enforced at
/// construction; membership in a particular poset (entries at most `m + p`,
/// level at most `q`) is checked by [`Context::validate`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QIndex {
    alpha: Vec<i64>,
    level: i64,
}

/// A window sequence: strictly increasing positive integers
/// `w_1 < ... < w_p` with `w_p < w_1 + n`.  The width `n` is supplied by the
/// caller at construction and not stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WindowSeq {
    seq: Vec<i64>,
}

impl QIndex {
    pub fn new(alpha: Vec<i64>, level: i64) -> Result<Self> {
        if alpha.is_empty() {
            return Err(invalid("index tuple must be non-empty"));
        }
        if alpha[0] < 1 {
            return Err(invalid(format!("index entries must be positive, got {alpha:?}")));
        }
        if !alpha.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid(format!("index tuple must be strictly increasing, got {alpha:?}")));
        }
        if level < 0 {
            return Err(invalid(format!("level must be non-negative, got {level}")));
        }
        Ok(QIndex { alpha, level })
    }

    pub fn alpha(&self) -> &[i64] {
        &self.alpha
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn p(&self) -> i64 {
        self.alpha.len() as i64
    }

    /// `rank(alpha^(a)) = a*n + sum_i (alpha_i - i)` for window width `n`.
    pub fn rank(&self, n: i64) -> i64 {
        let base: i64 = self.alpha.iter().enumerate().map(|(i, &v)| v - (i as i64 + 1)).sum();
        self.level * n + base
    }

    /// Window form of this index for window width `n`.
    pub fn to_window(&self, n: i64) -> WindowSeq {
        let p = self.p();
        let l = self.level.div_euclid(p);
        let r = self.level.rem_euclid(p);
        let mut seq = Vec::with_capacity(self.alpha.len());
        for k in 1..=p {
            if k <= p - r {
                seq.push(l * n + self.alpha[(r + k - 1) as usize]);
            } else {
                seq.push((l + 1) * n + self.alpha[(k - p + r - 1) as usize]);
            }
        }
        WindowSeq { seq }
    }

    /// JSON form `{"alpha": [...], "level": a}`.
    pub fn to_json(&self) -> Value {
        json!({ "alpha": self.alpha, "level": self.level })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let alpha = v
            .get("alpha")
            .and_then(Value::as_array)
            .ok_or_else(|| invalid("index JSON must carry an \"alpha\" array"))?
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| invalid("\"alpha\" entries must be integers")))
            .collect::<Result<Vec<_>>>()?;
        let level = v
            .get("level")
            .and_then(Value::as_i64)
            .ok_or_else(|| invalid("index JSON must carry an integer \"level\""))?;
        QIndex::new(alpha, level)
    }
}

impl WindowSeq {
    /// Validates the window condition for width `n`.
    pub fn new(seq: Vec<i64>, n: i64) -> Result<Self> {
        if seq.is_empty() {
            return Err(invalid("window sequence must be non-empty"));
        }
        if seq[0] < 1 {
            return Err(invalid(format!("window entries must be positive, got {seq:?}")));
        }
        if !seq.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid(format!("window sequence must be strictly increasing, got {seq:?}")));
        }
        if seq[seq.len() - 1] >= seq[0] + n {
            return Err(invalid(format!(
                "window violation: last entry {} >= first entry {} + {n}",
                seq[seq.len() - 1],
                seq[0]
            )));
        }
        Ok(WindowSeq { seq })
    }

    pub fn seq(&self) -> &[i64] {
        &self.seq
    }

    pub fn p(&self) -> i64 {
        self.seq.len() as i64
    }

    /// `sum_k (w_k - k)`; equals the rank of the corresponding index.
    pub fn rank(&self) -> i64 {
        self.seq.iter().enumerate().map(|(i, &v)| v - (i as i64 + 1)).sum()
    }

    /// Componentwise comparison; equivalent to the poset order on indices.
    pub fn leq(&self, other: &WindowSeq) -> bool {
        self.seq.len() == other.seq.len()
            && self.seq.iter().zip(&other.seq).all(|(a, b)| a <= b)
    }

    /// Inverse of [`QIndex::to_window`] for width `n`.
    ///
    /// Each entry decomposes uniquely as `w_k = c_k * n + d_k` with
    /// `1 <= d_k <= n`; the level is `sum_k c_k` and `alpha` is the sorted
    /// tuple of the `d_k` (the window condition forces them to be distinct).
    pub fn to_index(&self, n: i64) -> Result<QIndex> {
        let mut level = 0;
        let mut alpha = Vec::with_capacity(self.seq.len());
        for &w in &self.seq {
            let c = (w - 1).div_euclid(n);
            level += c;
            alpha.push(w - c * n);
        }
        alpha.sort_unstable();
        if !alpha.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid(format!(
                "window sequence {:?} has repeated residues modulo {n}",
                self.seq
            )));
        }
        let idx = QIndex::new(alpha, level)?;
        // Round-trip guard: the translation must be a bijection.
        if idx.to_window(n) != *self {
            return Err(internal(format!(
                "window translation failed to round-trip on {:?} (width {n})",
                self.seq
            )));
        }
        Ok(idx)
    }
}

impl Context {
    pub fn new(m: i64, p: i64, q: i64) -> Result<Self> {
        if m < 1 || p < 1 {
            return Err(invalid(format!("need m >= 1 and p >= 1, got m={m}, p={p}")));
        }
        if q < 0 {
            return Err(invalid(format!("need q >= 0, got q={q}")));
        }
        Ok(Context { m, p, q })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Window width `n = m + p`.
    pub fn n(&self) -> i64 {
        self.m + self.p
    }

    /// Rank of the maximum: `N = q(m+p) + mp`.
    pub fn top_rank(&self) -> i64 {
        self.q * self.n() + self.m * self.p
    }

    /// Number of elements, `(q+1) * C(m+p, p)`.
    pub fn size(&self) -> i64 {
        (self.q + 1) * num_integer::binomial(self.n(), self.p)
    }

    /// The minimum element `(1, ..., p)^(0)`.
    pub fn min_index(&self) -> QIndex {
        QIndex { alpha: (1..=self.p).collect(), level: 0 }
    }

    /// The maximum element `(m+1, ..., m+p)^(q)`.
    pub fn max_index(&self) -> QIndex {
        QIndex { alpha: (self.m + 1..=self.n()).collect(), level: self.q }
    }

    /// Checks membership of `x` in this poset.
    pub fn validate(&self, x: &QIndex) -> Result<()> {
        if x.p() != self.p {
            return Err(invalid(format!("expected a {}-tuple, got {:?}", self.p, x.alpha)));
        }
        if *x.alpha.last().unwrap() > self.n() {
            return Err(invalid(format!("index entries must be at most {}, got {:?}", self.n(), x.alpha)));
        }
        if x.level > self.q {
            return Err(invalid(format!("level must be at most {}, got {}", self.q, x.level)));
        }
        Ok(())
    }

    pub fn rank(&self, x: &QIndex) -> i64 {
        x.rank(self.n())
    }

    /// The partial order, straight from the definition.
    pub fn leq(&self, x: &QIndex, y: &QIndex) -> bool {
        if x.level > y.level {
            return false;
        }
        let shift = (y.level - x.level) as usize;
        let p = self.p as usize;
        if shift >= p {
            return true;
        }
        (0..p - shift).all(|i| x.alpha[i] <= y.alpha[shift + i])
    }

    /// All `y` covered by `x` (i.e. `y < x` with rank exactly one lower).
    ///
    /// In window form these are the decrements of a single entry that keep
    /// the sequence strictly increasing, positive, and inside the window.
    pub fn lower_covers(&self, x: &QIndex) -> Vec<QIndex> {
        let n = self.n();
        let w = x.to_window(n);
        let p = w.seq.len();
        let mut out = Vec::new();
        for k in 0..p {
            let mut cand = w.seq.clone();
            cand[k] -= 1;
            if k > 0 && cand[k] <= cand[k - 1] {
                continue; // entries would collide
            }
            if cand[0] < 1 {
                continue; // positivity lost
            }
            if cand[p - 1] >= cand[0] + n {
                continue; // window violated (possible only when k == 0)
            }
            let y = WindowSeq { seq: cand }
                .to_index(n)
                .expect("single decrement of a valid window sequence stays translatable");
            out.push(y);
        }
        out
    }

    /// Greatest lower bound.  Computed componentwise in window form; if that
    /// ever failed to produce a valid element, falls back to exhaustive
    /// search (and reports an internal error if no unique bound exists).
    pub fn meet(&self, x: &QIndex, y: &QIndex) -> Result<QIndex> {
        self.validate(x)?;
        self.validate(y)?;
        let n = self.n();
        let a = x.to_window(n);
        let b = y.to_window(n);
        let seq: Vec<i64> = a.seq.iter().zip(&b.seq).map(|(u, v)| *u.min(v)).collect();
        match WindowSeq::new(seq, n).and_then(|w| w.to_index(n)) {
            Ok(z) if self.validate(&z).is_ok() => Ok(z),
            _ => {
                eprintln!("poset: componentwise meet fell back to exhaustive search");
                self.extreme_bound(x, y, true)
            }
        }
    }

    /// Least upper bound; dual to [`Context::meet`].
    pub fn join(&self, x: &QIndex, y: &QIndex) -> Result<QIndex> {
        self.validate(x)?;
        self.validate(y)?;
        let n = self.n();
        let a = x.to_window(n);
        let b = y.to_window(n);
        let seq: Vec<i64> = a.seq.iter().zip(&b.seq).map(|(u, v)| *u.max(v)).collect();
        match WindowSeq::new(seq, n).and_then(|w| w.to_index(n)) {
            Ok(z) if self.validate(&z).is_ok() => Ok(z),
            _ => {
                eprintln!("poset: componentwise join fell back to exhaustive search");
                self.extreme_bound(x, y, false)
            }
        }
    }

    /// Exhaustive greatest lower / least upper bound.
    fn extreme_bound(&self, x: &QIndex, y: &QIndex, lower: bool) -> Result<QIndex> {
        let bounds: Vec<QIndex> = self
            .elements()
            .into_iter()
            .filter(|z| {
                if lower {
                    self.leq(z, x) && self.leq(z, y)
                } else {
                    self.leq(x, z) && self.leq(y, z)
                }
            })
            .collect();
        let best = bounds
            .iter()
            .max_by_key(|z| if lower { self.rank(z) } else { -self.rank(z) })
            .cloned()
            .ok_or_else(|| internal("bounded lattice has no candidate bound"))?;
        for z in &bounds {
            let ok = if lower { self.leq(z, &best) } else { self.leq(&best, z) };
            if !ok {
                return Err(internal("no unique extreme bound; lattice structure violated"));
            }
        }
        Ok(best)
    }

    /// All elements in canonical order: increasing rank, ties broken by the
    /// lexicographic order of the window form.
    pub fn elements(&self) -> Vec<QIndex> {
        let n = self.n();
        let mut out = Vec::with_capacity(self.size() as usize);
        for level in 0..=self.q {
            for alpha in (1..=n).combinations(self.p as usize) {
                out.push(QIndex { alpha, level });
            }
        }
        out.sort_by_cached_key(|x| (self.rank(x), x.to_window(n).seq));
        out
    }

    /// Number of saturated chains from the minimum to the maximum; this is
    /// the curve count `d(m, p; q)`.
    pub fn degree(&self) -> BigInt {
        let mut counter = ChainCounter::new(self, self.min_index());
        counter.count(&self.max_index())
    }

    /// Number of multichains `x_1 <= x_2 <= ... <= x_t` of length `t`.
    ///
    /// This equals the Hilbert function (at degree `t`) of the
    /// Stanley-Reisner ring of the order complex; see
    /// [`crate::variety::sr_decomposition`].
    pub fn multichain_count(&self, t: u32) -> BigInt {
        if t == 0 {
            return BigInt::one();
        }
        let elems = self.elements();
        let k = elems.len();
        // below[i] = indices j with elems[j] <= elems[i]
        let below: Vec<Vec<usize>> = (0..k)
            .map(|i| (0..k).filter(|&j| self.leq(&elems[j], &elems[i])).collect())
            .collect();
        let mut f = vec![BigInt::one(); k];
        for _ in 1..t {
            f = (0..k)
                .map(|i| below[i].iter().map(|&j| &f[j]).sum())
                .collect();
        }
        f.iter().sum()
    }

    /// Canonical JSON dump: an array over [`Context::elements`] where each
    /// entry carries the index, its rank, its window form (`"jseq"`), the
    /// positions of its lower covers within the same array, and the exact
    /// count of saturated chains from the minimum (decimal string).
    pub fn dump(&self) -> Value {
        let n = self.n();
        let elems = self.elements();
        let pos: HashMap<&QIndex, usize> = elems.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let mut counter = ChainCounter::new(self, self.min_index());
        let entries: Vec<Value> = elems
            .iter()
            .map(|x| {
                let mut covers: Vec<usize> = self
                    .lower_covers(x)
                    .iter()
                    .map(|y| pos[y])
                    .collect();
                covers.sort_unstable();
                json!({
                    "alpha": x.alpha,
                    "level": x.level,
                    "rank": self.rank(x),
                    "jseq": x.to_window(n).seq,
                    "covers": covers,
                    "chains": counter.count(x).to_string(),
                })
            })
            .collect();
        Value::Array(entries)
    }
}

/// Memoized counter for saturated chains above a fixed bottom element.
///
/// The recursion follows lower covers: the number of saturated chains from
/// `bottom` to `x` is the sum over covers `y` of `x` of the count for `y`,
/// with base case 1 at `bottom` itself and 0 once `x` is not above `bottom`.
pub struct ChainCounter<'a> {
    ctx: &'a Context,
    bottom: QIndex,
    memo: HashMap<QIndex, BigInt>,
}

impl<'a> ChainCounter<'a> {
    pub fn new(ctx: &'a Context, bottom: QIndex) -> Self {
        ChainCounter { ctx, bottom, memo: HashMap::new() }
    }

    pub fn count(&mut self, top: &QIndex) -> BigInt {
        if *top == self.bottom {
            return BigInt::one();
        }
        if !self.ctx.leq(&self.bottom, top) {
            return BigInt::zero();
        }
        if let Some(v) = self.memo.get(top) {
            return v.clone();
        }
        let total: BigInt = self
            .ctx
            .lower_covers(top)
            .into_iter()
            .map(|y| self.count(&y))
            .sum();
        self.memo.insert(top.clone(), total.clone());
        total
    }
}

/// Saturated-chain count between two comparable elements (0 if incomparable).
pub fn chain_count(ctx: &Context, top: &QIndex, bottom: &QIndex) -> Result<BigInt> {
    ctx.validate(top)?;
    ctx.validate(bottom)?;
    Ok(ChainCounter::new(ctx, bottom.clone()).count(top))
}
