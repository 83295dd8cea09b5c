//! The space of degree-`q` maps `P^1 -> Grass(p, K^{m+p})` as a projective
//! variety in quantum Plucker space: coordinates of explicit polynomial
//! curves, hyperplane sections from incidence conditions, the boundary map,
//! initial-ideal and Stanley-Reisner combinatorics, quadric interpolation,
//! and a static pole-placement solver on `Grass(2, K^4)`.
//!
//! Conventions.  A curve is an `(m+p) x p` matrix `M(s)` of univariate
//! polynomials whose maximal minors `M_alpha(s)` all have degree at most
//! `q`, not all zero; its quantum Plucker coordinate `z_{alpha^(a)}` is the
//! coefficient of `s^a` in `M_alpha(s)`.  An `m`-plane is an `(m+p) x m`
//! rational matrix `L` of full column rank, with signed Plucker coordinate
//!
//! ```text
//!     L_alpha = (-1)^(alpha_1+...+alpha_p - binom(p+1,2))
//!               det(L restricted to the rows NOT in alpha),
//! ```
//!
//! the sign being the one produced by Laplace expansion along the first
//! block of columns, so that `det [M : L] = sum_alpha M_alpha L_alpha`.
//!
//! The one-parameter torus acts on `K^(m+p)` by `s.e_i = s^(m+p-i) e_i`;
//! complementary minors pick up `(s.L)_alpha = s^(binom(m,2)+|alpha|)
//! L_alpha`, which is exactly what turns the incidence condition
//! "`M(s^(m+p))` meets `s.L`" into the hyperplane form
//!
//! ```text
//!     Phi(s, L)  =  sum_{alpha^(a)}  z_{alpha^(a)} L_alpha s^rank(alpha^(a)),
//!     det [M(s^(m+p)) : s.L]  =  s^binom(m,2) * Phi(s, L)(z(M)).
//! ```
//!
//! The boundary of the compactified space is swept out by
//!
//! ```text
//!     pi([A : B], x)_{alpha^(a)}  =  A x_{alpha^(a)} - B x_{alpha^(a-1)},
//! ```
//!
//! applied to degree-(q-1) vectors `x` (missing levels read as zero); the
//! hyperplane forms factor through it as `Phi o pi = (A - B s^(m+p)) Phi'`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::closed::compositions;
use crate::error::{degenerate, internal, invalid, Result};
use crate::linalg::{det, nullspace, nullspace_fraction_free, rref, Ring};
use crate::poset::{Context, QIndex};
use crate::upoly::UniPoly;

fn bigrat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn rat_pow(base: &BigRational, exp: i64) -> BigRational {
    debug_assert!(exp >= 0);
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Poset elements in the fixed coordinate order used throughout this
/// module: by level, then lexicographically.  This is a linear extension of
/// the partial order (strictly smaller elements come strictly earlier).
fn coordinate_order(ctx: &Context) -> Vec<QIndex> {
    let mut elems = ctx.elements();
    elems.sort_by_key(|e| (e.level(), e.alpha().to_vec()));
    elems
}

/// The maximal minor of `entries` on the rows *not* in `alpha` (1-based),
/// carrying the Laplace-expansion sign `(-1)^(sum alpha - binom(p+1,2))`.
fn complementary_signed_minor<T: Ring>(entries: &[Vec<T>], alpha: &[i64]) -> T {
    let n = entries.len() as i64;
    let sub: Vec<Vec<T>> = (1..=n)
        .filter(|i| !alpha.contains(i))
        .map(|i| entries[(i - 1) as usize].clone())
        .collect();
    let d = det(&sub);
    let p = alpha.len() as i64;
    let sign = alpha.iter().sum::<i64>() - p * (p + 1) / 2;
    if sign % 2 == 0 {
        d
    } else {
        T::zero() - d
    }
}

// ---------------------------------------------------------------------------
// Curves and their Plucker coordinates
// ---------------------------------------------------------------------------

/// A degree-`q` rational curve in `Grass(p, K^(m+p))`, presented as an
/// `(m+p) x p` matrix of polynomials in `s` whose maximal minors have
/// degree at most `q` and do not all vanish.  Minors are computed once at
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrixCurve {
    ctx: Context,
    entries: Vec<Vec<UniPoly>>,
    minors: BTreeMap<Vec<i64>, UniPoly>,
}

impl PolyMatrixCurve {
    pub fn new(ctx: Context, entries: Vec<Vec<UniPoly>>) -> Result<Self> {
        let n = ctx.n() as usize;
        let p = ctx.p() as usize;
        if entries.len() != n || entries.iter().any(|row| row.len() != p) {
            return Err(invalid(format!("curve matrix must be {n} x {p}")));
        }
        let mut minors = BTreeMap::new();
        let mut some_nonzero = false;
        for alpha in (1..=ctx.n()).combinations(p) {
            let sub: Vec<Vec<UniPoly>> =
                alpha.iter().map(|&i| entries[(i - 1) as usize].clone()).collect();
            let minor = det(&sub);
            if let Some(deg) = minor.degree() {
                some_nonzero = true;
                if deg as i64 > ctx.q() {
                    return Err(invalid(format!(
                        "minor {alpha:?} has degree {deg}, above the curve degree {}",
                        ctx.q()
                    )));
                }
            }
            minors.insert(alpha, minor);
        }
        if !some_nonzero {
            return Err(invalid("all maximal minors vanish"));
        }
        Ok(PolyMatrixCurve { ctx, entries, minors })
    }

    pub fn context(&self) -> Context {
        self.ctx
    }

    pub fn entries(&self) -> &[Vec<UniPoly>] {
        &self.entries
    }

    /// All maximal minors, keyed by the (1-based) row subset.
    pub fn minors(&self) -> &BTreeMap<Vec<i64>, UniPoly> {
        &self.minors
    }

    pub fn minor(&self, alpha: &[i64]) -> Result<&UniPoly> {
        self.minors
            .get(alpha)
            .ok_or_else(|| invalid(format!("no maximal minor indexed by {alpha:?}")))
    }

    /// Monic greatest common divisor of all maximal minors.  A non-constant
    /// factor means every minor vanishes at a common point of `P^1`: the
    /// curve is a boundary point of the compactified space.
    pub fn common_minor_factor(&self) -> UniPoly {
        let mut g = UniPoly::default();
        for minor in self.minors.values() {
            if !minor.is_zero() {
                g = UniPoly::gcd(&g, minor);
                if g.degree() == Some(0) {
                    break;
                }
            }
        }
        g
    }
}

/// A point of quantum Plucker space with exact rational coordinates, not
/// identically zero; equality of the underlying geometric points is
/// projective ([`PluckerVector::projectively_equal`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluckerVector {
    ctx: Context,
    coords: BTreeMap<QIndex, BigRational>,
}

impl PluckerVector {
    pub fn new(ctx: &Context, coords: BTreeMap<QIndex, BigRational>) -> Result<Self> {
        let coords: BTreeMap<QIndex, BigRational> =
            coords.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        for key in coords.keys() {
            ctx.validate(key)?;
        }
        if coords.is_empty() {
            return Err(invalid("coordinate vector is identically zero"));
        }
        Ok(PluckerVector { ctx: *ctx, coords })
    }

    pub fn context(&self) -> Context {
        self.ctx
    }

    /// The coordinate at `key`, zero when absent.
    pub fn get(&self, key: &QIndex) -> BigRational {
        self.coords.get(key).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coords(&self) -> &BTreeMap<QIndex, BigRational> {
        &self.coords
    }

    pub fn scale(&self, c: &BigRational) -> Result<Self> {
        if c.is_zero() {
            return Err(invalid("projective points cannot be scaled by zero"));
        }
        Ok(PluckerVector {
            ctx: self.ctx,
            coords: self.coords.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        })
    }

    /// Equality up to a global nonzero scalar.
    pub fn projectively_equal(&self, other: &Self) -> bool {
        if self.ctx != other.ctx {
            return false;
        }
        // Anchor at the first nonzero coordinate of `self`; all 2x2 cross
        // products with the anchor must vanish.
        let (anchor, pivot) = self.coords.iter().next().expect("nonzero by construction");
        let other_pivot = other.get(anchor);
        if other_pivot.is_zero() {
            return false;
        }
        let keys: BTreeSet<&QIndex> = self.coords.keys().chain(other.coords.keys()).collect();
        keys.into_iter()
            .all(|k| &self.get(k) * &other_pivot == &other.get(k) * pivot)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.ctx.m(),
            "p": self.ctx.p(),
            "q": self.ctx.q(),
            "coordinates": self
                .coords
                .iter()
                .map(|(k, v)| json!({"index": k.to_json(), "value": v.to_string()}))
                .collect::<Vec<_>>(),
        })
    }
}

/// The quantum Plucker coordinates of a curve: `z_{alpha^(a)}` is the
/// coefficient of `s^a` in the minor `M_alpha(s)`.
pub fn plucker_coords(curve: &PolyMatrixCurve) -> Result<PluckerVector> {
    let ctx = curve.context();
    let mut coords = BTreeMap::new();
    for (alpha, minor) in curve.minors() {
        for level in 0..=ctx.q() {
            let c = minor.coeff(level as usize);
            if !c.is_zero() {
                coords.insert(QIndex::new(alpha.clone(), level)?, c);
            }
        }
    }
    PluckerVector::new(&ctx, coords)
}

/// A random curve with integer coefficients in `[-20, 20]`: column degrees
/// are a random composition of `q`, which keeps every maximal minor within
/// degree `q`.  Samples whose minors share a non-constant factor (boundary
/// points of the compactified space) are rejected and redrawn.
pub fn random_integer_curve(ctx: &Context, rng: &mut impl Rng) -> PolyMatrixCurve {
    let n = ctx.n() as usize;
    let column_degrees = compositions(ctx.q(), ctx.p() as usize);
    for _ in 0..10_000 {
        let degs = &column_degrees[rng.gen_range(0..column_degrees.len())];
        let entries: Vec<Vec<UniPoly>> = (0..n)
            .map(|_| {
                degs.iter()
                    .map(|&d| {
                        let coeffs: Vec<i64> =
                            (0..=d).map(|_| rng.gen_range(-20..=20)).collect();
                        UniPoly::from_int_coeffs(&coeffs)
                    })
                    .collect()
            })
            .collect();
        let Ok(curve) = PolyMatrixCurve::new(*ctx, entries) else { continue };
        if curve.common_minor_factor().degree().unwrap_or(0) == 0 {
            return curve;
        }
    }
    unreachable!("random integer matrices are interior curves with overwhelming probability");
}

/// A random rational point of quantum Plucker space (small integer
/// coordinates, not required to lie on the variety).
pub fn random_plucker_vector(ctx: &Context, rng: &mut impl Rng) -> PluckerVector {
    loop {
        let coords: BTreeMap<QIndex, BigRational> = ctx
            .elements()
            .into_iter()
            .filter_map(|e| {
                let v = rng.gen_range(-9..=9i64);
                (v != 0).then(|| (e, bigrat(v)))
            })
            .collect();
        if let Ok(vector) = PluckerVector::new(ctx, coords) {
            return vector;
        }
    }
}

// ---------------------------------------------------------------------------
// m-planes, the torus action, and hyperplane forms
// ---------------------------------------------------------------------------

/// An `m`-dimensional subspace of `K^(m+p)`, presented as an `(m+p) x m`
/// rational matrix of full column rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPlane {
    entries: Vec<Vec<BigRational>>,
    m: usize,
}

impl MPlane {
    pub fn new(entries: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = entries.len();
        let m = entries.first().map_or(0, Vec::len);
        if m == 0 || n <= m || entries.iter().any(|row| row.len() != m) {
            return Err(invalid("plane matrix must be (m+p) x m with m >= 1, p >= 1"));
        }
        let mut work = entries.clone();
        if rref(&mut work).len() != m {
            return Err(invalid("plane matrix must have full column rank"));
        }
        Ok(MPlane { entries, m })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        MPlane::new(rows.iter().map(|r| r.iter().map(|&x| bigrat(x)).collect()).collect())
    }

    /// Ambient dimension `m + p`.
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    /// Subspace dimension `m`.
    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    /// Whether no maximal minor vanishes.
    pub fn is_totally_generic(&self) -> bool {
        let n = self.entries.len() as i64;
        let p = (self.entries.len() - self.m) as i64;
        (1..=n)
            .combinations(p as usize)
            .all(|alpha| !complementary_signed_minor(&self.entries, &alpha).is_zero())
    }

    /// The signed Plucker coordinate `L_alpha` for a `p`-subset `alpha`:
    /// the complementary maximal minor with the Laplace-expansion sign.
    pub fn plucker_signed(&self, alpha: &[i64]) -> Result<BigRational> {
        let n = self.entries.len() as i64;
        let p = (self.entries.len() - self.m) as i64;
        if alpha.len() as i64 != p
            || alpha.windows(2).any(|w| w[0] >= w[1])
            || alpha.first().is_some_and(|&a| a < 1)
            || alpha.last().is_some_and(|&a| a > n)
        {
            return Err(invalid(format!("not a strictly increasing {p}-subset of 1..={n}: {alpha:?}")));
        }
        Ok(complementary_signed_minor(&self.entries, alpha))
    }
}

/// The torus twist `s.L`: row `i` (1-based) is scaled by `s^(m+p-i)`.
pub fn torus_scale(s: &BigRational, l: &MPlane) -> Result<MPlane> {
    if s.is_zero() {
        return Err(invalid("torus elements are nonzero"));
    }
    let n = l.rows() as i64;
    let entries = l
        .entries()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let factor = rat_pow(s, n - 1 - i as i64);
            row.iter().map(|x| x * &factor).collect()
        })
        .collect();
    MPlane::new(entries)
}

/// A finitely supported linear form on quantum Plucker space.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearForm {
    coeffs: BTreeMap<QIndex, BigRational>,
}

impl LinearForm {
    pub fn coeffs(&self) -> &BTreeMap<QIndex, BigRational> {
        &self.coeffs
    }

    pub fn coeff(&self, key: &QIndex) -> BigRational {
        self.coeffs.get(key).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn apply(&self, z: &PluckerVector) -> BigRational {
        self.coeffs.iter().map(|(k, c)| c * &z.get(k)).sum()
    }
}

/// The hyperplane of curves `M` with `M(s^(m+p))` meeting `s.L`: the linear
/// form with coefficient `L_alpha s^rank(alpha^(a))` at `z_{alpha^(a)}`.
/// `s = 0` is allowed and leaves only the minimal coordinate.
pub fn hyperplane_form(ctx: &Context, s: &BigRational, l: &MPlane) -> Result<LinearForm> {
    if l.rows() != ctx.n() as usize || l.cols() != ctx.m() as usize {
        return Err(invalid(format!(
            "plane shape {} x {} does not match Grass({}, K^{})",
            l.rows(),
            l.cols(),
            ctx.p(),
            ctx.n()
        )));
    }
    let mut minor_cache: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    let mut coeffs = BTreeMap::new();
    for e in ctx.elements() {
        let l_alpha = minor_cache
            .entry(e.alpha().to_vec())
            .or_insert_with(|| {
                complementary_signed_minor(l.entries(), e.alpha())
            })
            .clone();
        let c = l_alpha * rat_pow(s, ctx.rank(&e));
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
    }
    Ok(LinearForm { coeffs })
}

/// The hyperplane form as a polynomial in `s` with the coordinates already
/// substituted: `Phi(s, L)(z) = sum z_{alpha^(a)} L_alpha s^rank(alpha^(a))`.
pub fn hyperplane_poly(ctx: &Context, l: &MPlane, z: &PluckerVector) -> Result<UniPoly> {
    if l.rows() != ctx.n() as usize || l.cols() != ctx.m() as usize {
        return Err(invalid("plane shape does not match the Grassmannian"));
    }
    if z.context() != *ctx {
        return Err(invalid("coordinate vector does not match the context"));
    }
    let mut minor_cache: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    let mut acc = UniPoly::default();
    for (key, value) in z.coords() {
        let l_alpha = minor_cache
            .entry(key.alpha().to_vec())
            .or_insert_with(|| complementary_signed_minor(l.entries(), key.alpha()))
            .clone();
        acc = acc + UniPoly::monomial(value * l_alpha, ctx.rank(key) as usize);
    }
    Ok(acc)
}

/// The full incidence determinant `det [M(s^(m+p)) : s.L]` as an exact
/// polynomial in `s` (columns of the curve with `s -> s^(m+p)` substituted,
/// columns of the plane twisted row-wise by the torus).  Equals
/// `s^binom(m,2) * Phi(s, L)(z(M))`.
pub fn incidence_determinant(curve: &PolyMatrixCurve, l: &MPlane) -> Result<UniPoly> {
    let ctx = curve.context();
    let n = ctx.n() as usize;
    if l.rows() != n || l.cols() != ctx.m() as usize {
        return Err(invalid("plane shape does not match the curve"));
    }
    let mat: Vec<Vec<UniPoly>> = (0..n)
        .map(|i| {
            let mut row: Vec<UniPoly> =
                curve.entries()[i].iter().map(|f| f.compose_power(n)).collect();
            row.extend(
                l.entries()[i]
                    .iter()
                    .map(|c| UniPoly::monomial(c.clone(), n - 1 - i)),
            );
            row
        })
        .collect();
    Ok(det(&mat))
}

// ---------------------------------------------------------------------------
// Boundary map
// ---------------------------------------------------------------------------

/// The boundary map `pi([A : B], x)` carrying a degree-`(q-1)` coordinate
/// vector and a point of `P^1` to the degree-`q` vector
/// `A x_{alpha^(a)} - B x_{alpha^(a-1)}` (missing levels read as zero).
/// `ctx` is the target (degree-`q`) context.
pub fn boundary_map(
    ctx: &Context,
    a_coef: &BigRational,
    b_coef: &BigRational,
    x: &PluckerVector,
) -> Result<PluckerVector> {
    if ctx.q() == 0 {
        return Err(invalid("degree 0 spaces have no boundary recursion"));
    }
    if a_coef.is_zero() && b_coef.is_zero() {
        return Err(invalid("the point [A : B] of P^1 must be nonzero"));
    }
    let source = Context::new(ctx.m(), ctx.p(), ctx.q() - 1)?;
    if x.context() != source {
        return Err(invalid(format!(
            "input vector has degree {}, expected {}",
            x.context().q(),
            ctx.q() - 1
        )));
    }
    let mut coords = BTreeMap::new();
    for e in ctx.elements() {
        let level = e.level();
        let mut value = BigRational::zero();
        if level < ctx.q() {
            value += a_coef * x.get(&e);
        }
        if level > 0 {
            let below = QIndex::new(e.alpha().to_vec(), level - 1)?;
            value -= b_coef * x.get(&below);
        }
        if !value.is_zero() {
            coords.insert(e, value);
        }
    }
    PluckerVector::new(ctx, coords)
}

// ---------------------------------------------------------------------------
// Initial ideal and Stanley-Reisner combinatorics
// ---------------------------------------------------------------------------

/// Leading pairs of the degree-2 straightening relations: all unordered
/// incomparable pairs of the index poset, in coordinate order.
pub fn initial_ideal_gens(ctx: &Context) -> Vec<(QIndex, QIndex)> {
    let elems = coordinate_order(ctx);
    let mut gens = Vec::new();
    for (i, u) in elems.iter().enumerate() {
        for v in elems.iter().skip(i + 1) {
            if !ctx.leq(u, v) && !ctx.leq(v, u) {
                gens.push((u.clone(), v.clone()));
            }
        }
    }
    gens
}

/// The Stanley-Reisner data of the initial ideal: the simplicial complex
/// whose faces are chains, with facets the maximal chains.
#[derive(Debug, Clone)]
pub struct SrReport {
    /// Number of facets; equals the degree of the variety.
    pub facet_count: BigInt,
    /// Facets as bottom-to-top maximal chains, when the count is within the
    /// enumeration cap.
    pub facets: Option<Vec<Vec<QIndex>>>,
    /// Common facet size `N + 1` (the complex is pure).
    pub facet_size: i64,
    /// Values `H(0), ..., H(t_max)` of the Hilbert function: standard
    /// monomials of degree `t` are multichains of length `t`.
    pub hilbert: Vec<BigInt>,
}

impl SrReport {
    pub fn to_json(&self) -> Value {
        json!({
            "facet_count": self.facet_count.to_string(),
            "facet_size": self.facet_size,
            "facets": self.facets.as_ref().map(|fs| {
                fs.iter()
                    .map(|chain| chain.iter().map(QIndex::to_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            }),
            "hilbert": self.hilbert.iter().map(BigInt::to_string).collect::<Vec<_>>(),
        })
    }
}

/// Computes the Stanley-Reisner decomposition data.  Facets are enumerated
/// only when their number is at most `facet_cap` (the count is exact either
/// way); the Hilbert function is reported for degrees `0..=t_max`.
pub fn sr_decomposition(ctx: &Context, facet_cap: usize, t_max: u32) -> Result<SrReport> {
    let count = ctx.degree();
    let facet_size = ctx.top_rank() + 1;
    let facets = if count <= BigInt::from(facet_cap) {
        let elems = coordinate_order(ctx);
        let mut upper: BTreeMap<QIndex, Vec<QIndex>> = BTreeMap::new();
        for e in &elems {
            for c in ctx.lower_covers(e) {
                upper.entry(c).or_default().push(e.clone());
            }
        }
        let mut found = Vec::new();
        let top = ctx.max_index();
        let mut stack = vec![vec![ctx.min_index()]];
        while let Some(chain) = stack.pop() {
            let last = chain.last().expect("chains are nonempty");
            if *last == top {
                found.push(chain);
                continue;
            }
            for next in upper.get(last).into_iter().flatten() {
                let mut ext = chain.clone();
                ext.push(next.clone());
                stack.push(ext);
            }
        }
        if BigInt::from(found.len()) != count {
            return Err(internal(format!(
                "maximal chain enumeration found {} chains, counting says {}",
                found.len(),
                count
            )));
        }
        if found.iter().any(|c| c.len() as i64 != facet_size) {
            return Err(internal("a maximal chain has the wrong length; the complex must be pure"));
        }
        found.sort();
        Some(found)
    } else {
        None
    };
    let hilbert = (0..=t_max).map(|t| ctx.multichain_count(t)).collect();
    Ok(SrReport { facet_count: count, facets, facet_size, hilbert })
}

// ---------------------------------------------------------------------------
// Quadric interpolation
// ---------------------------------------------------------------------------

/// A quadratic form on quantum Plucker space, stored as coefficients on
/// unordered coordinate pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    terms: BTreeMap<(QIndex, QIndex), BigRational>,
}

impl QuadraticForm {
    pub fn terms(&self) -> &BTreeMap<(QIndex, QIndex), BigRational> {
        &self.terms
    }

    pub fn eval(&self, z: &PluckerVector) -> BigRational {
        self.terms.iter().map(|((u, v), c)| c * &z.get(u) * &z.get(v)).sum()
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .terms
            .iter()
            .map(|((u, v), c)| json!({
                "first": u.to_json(),
                "second": v.to_json(),
                "coefficient": c.to_string(),
            }))
            .collect::<Vec<_>>())
    }
}

/// A reduced basis of the quadrics vanishing on the variety, echelonised
/// against the monomial order that makes straightening relations visible:
/// columns are unordered pairs sorted by positions (descending), so the
/// pivot of each basis row is its poset-incomparable leading pair.
#[derive(Debug, Clone)]
pub struct QuadricBasis {
    ctx: Context,
    elements: Vec<QIndex>,
    monomials: Vec<(usize, usize)>,
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl QuadricBasis {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The leading (pivot) pair of each basis row.
    pub fn pivot_pairs(&self) -> Vec<(QIndex, QIndex)> {
        self.pivots
            .iter()
            .map(|&c| {
                let (i, j) = self.monomials[c];
                (self.elements[i].clone(), self.elements[j].clone())
            })
            .collect()
    }

    pub fn forms(&self) -> Vec<QuadraticForm> {
        self.rows
            .iter()
            .map(|row| {
                let terms = row
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(col, c)| {
                        let (i, j) = self.monomials[col];
                        ((self.elements[i].clone(), self.elements[j].clone()), c.clone())
                    })
                    .collect();
                QuadraticForm { terms }
            })
            .collect()
    }

    pub fn vanishes_on(&self, z: &PluckerVector) -> bool {
        self.forms().iter().all(|f| f.eval(z).is_zero())
    }

    /// Checks the straightening shape of every basis row: pivot coefficient
    /// `1` on an incomparable pair `{g, d}` (and the pivot set is exactly
    /// the set of incomparable pairs), coefficient `-1` on `{meet, join}`,
    /// and every other term `{a, b}` with `a` strictly below the meet and
    /// `b` strictly above the join.
    pub fn verify_straightening(&self) -> Result<()> {
        let position: BTreeMap<&QIndex, usize> =
            self.elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let column: BTreeMap<(usize, usize), usize> =
            self.monomials.iter().enumerate().map(|(c, &m)| (m, c)).collect();
        let incomparable: BTreeSet<(usize, usize)> = initial_ideal_gens(&self.ctx)
            .into_iter()
            .map(|(u, v)| {
                let (i, j) = (position[&u], position[&v]);
                (i.min(j), i.max(j))
            })
            .collect();
        let pivot_pairs: BTreeSet<(usize, usize)> =
            self.pivots.iter().map(|&c| self.monomials[c]).collect();
        if pivot_pairs != incomparable {
            return Err(internal(format!(
                "leading pairs do not match the incomparable pairs: {} vs {}",
                pivot_pairs.len(),
                incomparable.len()
            )));
        }
        for (row, &pivot_col) in self.rows.iter().zip(&self.pivots) {
            if !row[pivot_col].is_one() {
                return Err(internal("echelon row without unit pivot"));
            }
            let (gi, gj) = self.monomials[pivot_col];
            let (g, d) = (&self.elements[gi], &self.elements[gj]);
            let meet = self.ctx.meet(g, d)?;
            let join = self.ctx.join(g, d)?;
            let mj_col = column[&(position[&meet], position[&join])];
            if row[mj_col] != -BigRational::one() {
                return Err(internal(format!(
                    "straightening of {g:?} {d:?} lacks the meet-join term with coefficient -1"
                )));
            }
            for (col, coeff) in row.iter().enumerate() {
                if coeff.is_zero() || col == pivot_col || col == mj_col {
                    continue;
                }
                let (i, j) = self.monomials[col];
                let (a, b) = (&self.elements[i], &self.elements[j]);
                let below = self.ctx.leq(a, &meet) && *a != meet;
                let above = self.ctx.leq(&join, b) && *b != join;
                if !below || !above {
                    return Err(internal(format!(
                        "straightening of {g:?} {d:?} has a stray term at {a:?} {b:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.ctx.m(),
            "p": self.ctx.p(),
            "q": self.ctx.q(),
            "dimension": self.dim(),
            "forms": self.forms().iter().map(QuadraticForm::to_json).collect::<Vec<_>>(),
        })
    }
}

fn quadric_samples(
    ctx: &Context,
    elements: &[QIndex],
    monomials: &[(usize, usize)],
    samples: usize,
    rng: &mut impl Rng,
) -> Vec<Vec<BigRational>> {
    (0..samples)
        .map(|_| {
            let z = plucker_coords(&random_integer_curve(ctx, rng))
                .expect("random curves have coordinates");
            let values: Vec<BigRational> = elements.iter().map(|e| z.get(e)).collect();
            monomials.iter().map(|&(i, j)| &values[i] * &values[j]).collect()
        })
        .collect()
}

fn echelonise(kernel: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut rows = kernel;
    let pivots = rref(&mut rows);
    rows.truncate(pivots.len());
    (rows, pivots)
}

/// Recovers the quadrics through the variety by exact interpolation:
/// evaluates all degree-2 monomials at `samples` random integer curves, and
/// echelonises the kernel.  Two independent sample batches must produce the
/// same kernel; the result is verified to be in straightening form.
pub fn interpolate_quadrics(
    ctx: &Context,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<QuadricBasis> {
    let elements = coordinate_order(ctx);
    let dim = elements.len();
    if dim > 40 {
        return Err(crate::error::Error::CapExceeded(format!(
            "interpolation over {dim} coordinates ({} monomials) is above the supported size",
            dim * (dim + 1) / 2
        )));
    }
    let standard = ctx.multichain_count(2);
    if BigInt::from(samples) < standard {
        return Err(invalid(format!(
            "need at least {standard} samples (the degree-2 coordinate-ring dimension), got {samples}"
        )));
    }
    // Columns: unordered position pairs, both positions descending, so that
    // straightening leading terms come first.
    let mut monomials = Vec::with_capacity(dim * (dim + 1) / 2);
    for i in (0..dim).rev() {
        for j in (i..dim).rev() {
            monomials.push((i, j));
        }
    }

    for _ in 0..4 {
        let (rows_a, pivots_a) = echelonise(nullspace_fraction_free(&quadric_samples(
            ctx, &elements, &monomials, samples, &mut *rng,
        )));
        let (rows_b, _) = echelonise(nullspace_fraction_free(&quadric_samples(
            ctx, &elements, &monomials, samples, &mut *rng,
        )));
        if rows_a != rows_b {
            continue;
        }
        let basis = QuadricBasis {
            ctx: *ctx,
            elements: elements.clone(),
            monomials: monomials.clone(),
            rows: rows_a,
            pivots: pivots_a,
        };
        basis.verify_straightening()?;
        return Ok(basis);
    }
    Err(degenerate("interpolation samples failed to stabilise after 4 batch pairs"))
}

// ---------------------------------------------------------------------------
// Pole placement
// ---------------------------------------------------------------------------

/// The linear projection sending a curve's coordinate vector to its
/// closed-loop determinant against a fixed polynomial `(m+p) x m` matrix
/// `L(s)`:
///
/// ```text
///     z  |->  sum_{alpha^(a)} z_{alpha^(a)} s^a L_alpha(s)
///          =  det [M(s) : L(s)]   when z = z(M).
/// ```
#[derive(Debug, Clone)]
pub struct PolePlacementMap {
    ctx: Context,
    entries: Vec<Vec<UniPoly>>,
    minors: BTreeMap<Vec<i64>, UniPoly>,
}

/// Builds the pole placement map of `L(s)`; the matrix must have generic
/// rank `m` (some maximal minor nonzero as a polynomial).
pub fn pole_placement_map(ctx: &Context, entries: Vec<Vec<UniPoly>>) -> Result<PolePlacementMap> {
    let n = ctx.n() as usize;
    let m = ctx.m() as usize;
    if entries.len() != n || entries.iter().any(|row| row.len() != m) {
        return Err(invalid(format!("feedback matrix must be {n} x {m}")));
    }
    let mut minors = BTreeMap::new();
    let mut some_nonzero = false;
    for alpha in (1..=ctx.n()).combinations(ctx.p() as usize) {
        let minor = complementary_signed_minor(&entries, &alpha);
        some_nonzero |= !minor.is_zero();
        minors.insert(alpha, minor);
    }
    if !some_nonzero {
        return Err(invalid("feedback matrix must have generic rank m"));
    }
    Ok(PolePlacementMap { ctx: *ctx, entries, minors })
}

impl PolePlacementMap {
    pub fn context(&self) -> Context {
        self.ctx
    }

    /// Applies the projection to a coordinate vector (linear in `z`).
    pub fn apply(&self, z: &PluckerVector) -> Result<UniPoly> {
        if z.context() != self.ctx {
            return Err(invalid("coordinate vector does not match the context"));
        }
        let mut acc = UniPoly::default();
        for (key, value) in z.coords() {
            let l_alpha = &self.minors[key.alpha()];
            acc = acc + l_alpha.scale(value).shift(key.level() as usize);
        }
        Ok(acc)
    }

    /// The closed-loop determinant `det [M(s) : L(s)]`, computed directly.
    pub fn closed_loop_determinant(&self, curve: &PolyMatrixCurve) -> Result<UniPoly> {
        if curve.context() != self.ctx {
            return Err(invalid("curve does not match the context"));
        }
        let mat: Vec<Vec<UniPoly>> = curve
            .entries()
            .iter()
            .zip(&self.entries)
            .map(|(mrow, lrow)| mrow.iter().chain(lrow).cloned().collect())
            .collect();
        Ok(det(&mat))
    }
}

// ---------------------------------------------------------------------------
// Quadratic extensions and the static Grass(2,4) solver
// ---------------------------------------------------------------------------

/// The rational square root of a non-negative rational, when it exists.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    (&sn * &sn == *r.numer() && &sd * &sd == *r.denom())
        .then(|| BigRational::new(sn, sd))
}

/// An element `a + b sqrt(d)` of a quadratic extension of the rationals.
/// Normalised on construction: square radicands are folded into the
/// rational part, so `a + b sqrt(d) = 0` iff `a = b = 0`.  Arithmetic
/// requires compatible radicands (a purely rational operand is compatible
/// with everything).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
    d: BigRational,
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational, d: BigRational) -> Self {
        if b.is_zero() || d.is_zero() {
            return QuadExt { a, b: BigRational::zero(), d: BigRational::zero() };
        }
        match rational_sqrt(&d) {
            Some(r) => QuadExt { a: a + b * r, b: BigRational::zero(), d: BigRational::zero() },
            None => QuadExt { a, b, d },
        }
    }

    pub fn rational(a: BigRational) -> Self {
        QuadExt { a, b: BigRational::zero(), d: BigRational::zero() }
    }

    /// `sqrt(d)` as an extension element.
    pub fn root_of(d: BigRational) -> Self {
        QuadExt::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> &BigRational {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Real as a number: rational, or with a positive radicand.
    pub fn is_real(&self) -> bool {
        self.b.is_zero() || self.d.is_positive()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QuadExt::new(&self.a * c, &self.b * c, self.d.clone())
    }

    fn joint_radicand(&self, other: &Self) -> BigRational {
        if self.b.is_zero() {
            other.d.clone()
        } else {
            assert!(
                other.b.is_zero() || self.d == other.d,
                "incompatible radicands {} and {}",
                self.d,
                other.d
            );
            self.d.clone()
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rational": self.a.to_string(),
            "radical": self.b.to_string(),
            "radicand": self.d.to_string(),
        })
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: QuadExt) -> QuadExt {
        let d = self.joint_radicand(&rhs);
        QuadExt::new(self.a + rhs.a, self.b + rhs.b, d)
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        self + (-rhs)
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: QuadExt) -> QuadExt {
        let d = self.joint_radicand(&rhs);
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &d;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadExt::new(a, b, d)
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// The Plucker quadric of `Grass(2, K^4)` on coordinates in the fixed
/// order `(1,2), (1,3), (1,4), (2,3), (2,4), (3,4)`.
pub(crate) fn grass24_quadric<T: Ring>(z: &[T]) -> T {
    z[0].clone() * z[5].clone() - z[1].clone() * z[4].clone() + z[2].clone() * z[3].clone()
}

/// One solution of a static pole placement instance, with coordinates in a
/// quadratic extension of the rationals.
#[derive(Debug, Clone)]
pub struct StaticSolution {
    /// Coordinates in the order `(1,2), (1,3), (1,4), (2,3), (2,4), (3,4)`.
    pub coords: Vec<QuadExt>,
    pub multiplicity: u32,
}

/// The outcome of a static pole placement solve on `Grass(2, K^4)`.
#[derive(Debug, Clone)]
pub struct StaticReport {
    /// Basis of the common kernel of the four incidence forms.
    pub kernel: Vec<Vec<BigRational>>,
    /// The restriction of the Plucker quadric to the kernel line, as the
    /// binary form `c0 x^2 + c1 x y + c2 y^2`.
    pub binary_form: (BigRational, BigRational, BigRational),
    pub discriminant: BigRational,
    /// Distinct solutions; multiplicities sum to 2.
    pub solutions: Vec<StaticSolution>,
    /// Distinct real solutions (2, 1, or 0 by the sign of the discriminant).
    pub real_solutions: u32,
}

impl StaticReport {
    pub fn to_json(&self) -> Value {
        json!({
            "kernel_dimension": self.kernel.len(),
            "binary_form": [
                self.binary_form.0.to_string(),
                self.binary_form.1.to_string(),
                self.binary_form.2.to_string(),
            ],
            "discriminant": self.discriminant.to_string(),
            "real_solutions": self.real_solutions,
            "solutions": self
                .solutions
                .iter()
                .map(|s| json!({
                    "multiplicity": s.multiplicity,
                    "coordinates": s.coords.iter().map(QuadExt::to_json).collect::<Vec<_>>(),
                }))
                .collect::<Vec<_>>(),
        })
    }
}

/// Solves a static pole placement instance on `Grass(2, K^4)`: find the
/// 2-planes meeting the four given 2-planes `L_i`, each condition twisted
/// by the torus parameter `s_i`.  The four incidence forms cut a line in
/// `P^5` (anything else is reported as degenerate); the Plucker quadric
/// restricts to a binary quadratic on it whose two roots (with
/// multiplicity) are the solutions.  Every returned solution is verified
/// exactly against all five equations.
pub fn static_compensators_grass24(data: &[(MPlane, BigRational)]) -> Result<StaticReport> {
    if data.len() != 4 {
        return Err(invalid(format!("need exactly 4 conditions, got {}", data.len())));
    }
    for (i, (l, s)) in data.iter().enumerate() {
        if l.rows() != 4 || l.cols() != 2 {
            return Err(invalid(format!("plane {i} is {} x {}, expected 4 x 2", l.rows(), l.cols())));
        }
        for (_, t) in data.iter().skip(i + 1) {
            if s == t {
                return Err(invalid(format!("torus parameters must be distinct, {s} repeats")));
            }
        }
    }
    let ctx = Context::new(2, 2, 0)?;
    let elems = coordinate_order(&ctx);
    let rows: Vec<Vec<BigRational>> = data
        .iter()
        .map(|(l, s)| {
            let form = hyperplane_form(&ctx, s, l)?;
            Ok(elems.iter().map(|e| form.coeff(e)).collect())
        })
        .collect::<Result<_>>()?;
    let kernel = nullspace(&rows);
    if kernel.len() != 2 {
        return Err(degenerate(format!(
            "incidence forms cut a subspace of dimension {}, expected a line in P^5",
            kernel.len()
        )));
    }
    let (v, w) = (&kernel[0], &kernel[1]);
    let qv = grass24_quadric(v);
    let qw = grass24_quadric(w);
    let vw: Vec<BigRational> = v.iter().zip(w).map(|(a, b)| a + b).collect();
    let polar = grass24_quadric(&vw) - &qv - &qw;
    if qv.is_zero() && qw.is_zero() && polar.is_zero() {
        return Err(degenerate("the quadric vanishes on the whole kernel line"));
    }
    let discriminant = &polar * &polar - bigrat(4) * &qv * &qw;

    // Projective roots (x : y) of  qv x^2 + polar xy + qw y^2.
    let one = || QuadExt::rational(BigRational::one());
    let zero = QuadExt::zero;
    let root_pairs: Vec<((QuadExt, QuadExt), u32)> = if !qw.is_zero() {
        let scale = (bigrat(2) * &qw).recip();
        let minus_polar = QuadExt::rational(-&polar);
        if discriminant.is_zero() {
            vec![((one(), minus_polar.scale(&scale)), 2)]
        } else {
            let root = QuadExt::root_of(discriminant.clone());
            vec![
                ((one(), (minus_polar.clone() + root.clone()).scale(&scale)), 1),
                ((one(), (minus_polar - root).scale(&scale)), 1),
            ]
        }
    } else if !qv.is_zero() {
        // The form is x (qv x + polar y); one root at (0 : 1).
        if polar.is_zero() {
            vec![((zero(), one()), 2)]
        } else {
            vec![
                ((zero(), one()), 1),
                ((one(), QuadExt::rational(-(&qv / &polar))), 1),
            ]
        }
    } else {
        // qv = qw = 0, polar != 0: the form is  polar * x y.
        vec![((one(), zero()), 1), ((zero(), one()), 1)]
    };

    let solutions: Vec<StaticSolution> = root_pairs
        .into_iter()
        .map(|((x, y), multiplicity)| {
            let coords = v
                .iter()
                .zip(w)
                .map(|(vj, wj)| x.scale(vj) + y.scale(wj))
                .collect();
            StaticSolution { coords, multiplicity }
        })
        .collect();

    for sol in &solutions {
        if !grass24_quadric(&sol.coords).is_zero() {
            return Err(internal("a solution violates the Plucker quadric"));
        }
        for row in &rows {
            let residual: QuadExt = row
                .iter()
                .zip(&sol.coords)
                .fold(QuadExt::zero(), |acc, (c, z)| acc + z.scale(c));
            if !residual.is_zero() {
                return Err(internal("a solution violates an incidence form"));
            }
        }
        if sol.coords.iter().all(Zero::is_zero) {
            return Err(internal("a solution collapsed to the zero vector"));
        }
    }

    let real_solutions = if discriminant.is_positive() {
        2
    } else if discriminant.is_zero() {
        1
    } else {
        0
    };
    Ok(StaticReport {
        kernel,
        binary_form: (qv, polar, qw),
        discriminant,
        solutions,
        real_solutions,
    })
}

/// A random full-rank plane with integer entries in `[-20, 20]`.
pub fn random_mplane(n: usize, m: usize, rng: &mut impl Rng) -> MPlane {
    loop {
        let entries: Vec<Vec<i64>> =
            (0..n).map(|_| (0..m).map(|_| rng.gen_range(-20..=20)).collect()).collect();
        if let Ok(plane) = MPlane::from_int_rows(&entries) {
            return plane;
        }
    }
}

/// A random static pole placement instance on `Grass(2, K^4)`: four random
/// integer 2-planes with distinct small torus parameters.
pub fn random_static_instance(rng: &mut impl Rng) -> Vec<(MPlane, BigRational)> {
    let mut params = Vec::new();
    while params.len() < 4 {
        let s = rng.gen_range(-12..=12i64);
        if !params.contains(&s) {
            params.push(s);
        }
    }
    params.into_iter().map(|s| (random_mplane(4, 2, rng), bigrat(s))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn ctx(m: i64, p: i64, q: i64) -> Context {
        Context::new(m, p, q).unwrap()
    }

    fn qi(alpha: &[i64], level: i64) -> QIndex {
        QIndex::new(alpha.to_vec(), level).unwrap()
    }

    /// An (n x m) plane with Vandermonde rows: all maximal minors nonzero.
    fn vandermonde_plane(n: usize, m: usize) -> MPlane {
        MPlane::new(
            (1..=n as i64)
                .map(|i| (0..m as u32).map(|j| bigrat(i.pow(j))).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn plucker_of_coordinate_block_is_an_indicator() {
        let c = ctx(2, 2, 0);
        let mut entries = vec![vec![UniPoly::default(); 2]; 4];
        entries[0][0] = UniPoly::one();
        entries[1][1] = UniPoly::one();
        let curve = PolyMatrixCurve::new(c, entries).unwrap();
        let z = plucker_coords(&curve).unwrap();
        assert_eq!(z.coords().len(), 1);
        assert_eq!(z.get(&qi(&[1, 2], 0)), BigRational::one());
    }

    #[test]
    fn plucker_scales_by_the_determinant_on_basis_changes() {
        let c = ctx(2, 2, 1);
        let mut r = rng(11);
        let curve = random_integer_curve(&c, &mut r);
        // Right-multiply by a constant matrix of determinant 13.
        let g = [[3i64, 1], [2, 5]];
        let entries: Vec<Vec<UniPoly>> = curve
            .entries()
            .iter()
            .map(|row| {
                (0..2)
                    .map(|k| {
                        row[0].scale(&bigrat(g[0][k])) + row[1].scale(&bigrat(g[1][k]))
                    })
                    .collect()
            })
            .collect();
        let moved = PolyMatrixCurve::new(c, entries).unwrap();
        let z = plucker_coords(&curve).unwrap();
        let zg = plucker_coords(&moved).unwrap();
        assert_eq!(zg, z.scale(&bigrat(13)).unwrap());
        assert!(zg.projectively_equal(&z));
        assert!(z.projectively_equal(&zg));
    }

    #[test]
    fn curve_validation_rejects_bad_input() {
        let c = ctx(2, 2, 0);
        assert!(PolyMatrixCurve::new(c, vec![vec![UniPoly::default(); 2]; 4]).is_err());
        // Degree-1 entries make some minor degree 1 > q = 0.
        let mut entries = vec![vec![UniPoly::one(); 2]; 4];
        entries[0][0] = UniPoly::variable();
        entries[1][1] = UniPoly::from_int_coeffs(&[2]);
        assert!(PolyMatrixCurve::new(c, entries).is_err());
        assert!(PolyMatrixCurve::new(c, vec![vec![UniPoly::one(); 2]; 3]).is_err());
    }

    #[test]
    fn projective_equality_discriminates() {
        let c = ctx(2, 2, 0);
        let z1 = PluckerVector::new(
            &c,
            [(qi(&[1, 2], 0), bigrat(2)), (qi(&[1, 3], 0), bigrat(4))].into(),
        )
        .unwrap();
        let z2 = z1.scale(&bigrat(-3)).unwrap();
        let z3 = PluckerVector::new(
            &c,
            [(qi(&[1, 2], 0), bigrat(2)), (qi(&[1, 4], 0), bigrat(4))].into(),
        )
        .unwrap();
        assert!(z1.projectively_equal(&z2));
        assert!(!z1.projectively_equal(&z3));
        assert!(!z3.projectively_equal(&z1));
    }

    #[test]
    fn torus_action_is_a_group_action_on_planes() {
        let l = vandermonde_plane(5, 3);
        assert_eq!(torus_scale(&BigRational::one(), &l).unwrap(), l);
        let s = bigrat(2);
        let t = BigRational::new(BigInt::from(-1), BigInt::from(3));
        let st = torus_scale(&s, &torus_scale(&t, &l).unwrap()).unwrap();
        assert_eq!(st, torus_scale(&(s * t), &l).unwrap());
        assert!(torus_scale(&BigRational::zero(), &l).is_err());
    }

    #[test]
    fn torus_twist_scales_minors_by_a_rank_offset() {
        // (s.L)_alpha / L_alpha = s^(binom(m,2) + |alpha|).
        for (m, p) in [(2usize, 2usize), (3, 2), (2, 3)] {
            let n = m + p;
            let l = vandermonde_plane(n, m);
            assert!(l.is_totally_generic());
            let s = BigRational::new(BigInt::from(3), BigInt::from(2));
            let twisted = torus_scale(&s, &l).unwrap();
            let offset = (m * (m - 1) / 2) as i64;
            for alpha in (1..=n as i64).combinations(p) {
                let weight: i64 =
                    alpha.iter().enumerate().map(|(i, &a)| a - 1 - i as i64).sum();
                assert_eq!(
                    twisted.plucker_signed(&alpha).unwrap(),
                    l.plucker_signed(&alpha).unwrap() * rat_pow(&s, offset + weight),
                    "alpha = {alpha:?}"
                );
            }
        }
    }

    #[test]
    fn incidence_determinant_matches_the_hyperplane_form() {
        let mut r = rng(23);
        for (m, p, q) in [(2, 2, 1), (3, 2, 1), (2, 2, 2)] {
            let c = ctx(m, p, q);
            for _ in 0..5 {
                let curve = random_integer_curve(&c, &mut r);
                let l = random_mplane(c.n() as usize, m as usize, &mut r);
                let z = plucker_coords(&curve).unwrap();
                let lhs = incidence_determinant(&curve, &l).unwrap();
                let rhs = hyperplane_poly(&c, &l, &z)
                    .unwrap()
                    .shift((m * (m - 1) / 2) as usize);
                assert_eq!(lhs, rhs, "({m},{p},{q})");
            }
        }
    }

    #[test]
    fn hyperplane_form_evaluates_the_symbolic_polynomial() {
        let c = ctx(2, 2, 1);
        let mut r = rng(5);
        let l = random_mplane(4, 2, &mut r);
        let z = random_plucker_vector(&c, &mut r);
        let phi = hyperplane_poly(&c, &l, &z).unwrap();
        for s in [bigrat(0), bigrat(1), bigrat(-2), BigRational::new(5.into(), 3.into())] {
            let form = hyperplane_form(&c, &s, &l).unwrap();
            assert_eq!(form.apply(&z), phi.eval(&s));
        }
    }

    #[test]
    fn hyperplane_form_at_zero_keeps_only_the_minimum() {
        let c = ctx(3, 2, 2);
        let l = vandermonde_plane(5, 3);
        let form = hyperplane_form(&c, &BigRational::zero(), &l).unwrap();
        assert_eq!(form.coeffs().len(), 1);
        assert_eq!(form.coeff(&c.min_index()), l.plucker_signed(&[1, 2]).unwrap());
    }

    #[test]
    fn hyperplane_form_on_a_downset_has_the_predicted_leading_term() {
        let c = ctx(2, 2, 1);
        let top = qi(&[1, 3], 1);
        let l = vandermonde_plane(4, 2);
        let mut r = rng(7);
        let coords: BTreeMap<QIndex, BigRational> = c
            .elements()
            .into_iter()
            .filter(|e| c.leq(e, &top))
            .map(|e| {
                let v = if e == top { 5 } else { r.gen_range(-9..=9) };
                (e, bigrat(v))
            })
            .collect();
        let z = PluckerVector::new(&c, coords).unwrap();
        let phi = hyperplane_poly(&c, &l, &z).unwrap();
        let rank = c.rank(&top);
        assert_eq!(phi.degree(), Some(rank as usize));
        assert_eq!(phi.coeff(rank as usize), bigrat(5) * l.plucker_signed(&[1, 3]).unwrap());
    }

    #[test]
    fn boundary_pullback_factors_through_the_hyperplane_form() {
        let mut r = rng(41);
        for (m, p, q) in [(2, 2, 1), (3, 2, 1), (2, 2, 2)] {
            let target = ctx(m, p, q);
            let source = ctx(m, p, q - 1);
            for _ in 0..5 {
                let x = random_plucker_vector(&source, &mut r);
                let (a, b) = (bigrat(r.gen_range(-5..=5)), bigrat(r.gen_range(1..=5)));
                let l = random_mplane(target.n() as usize, m as usize, &mut r);
                let image = boundary_map(&target, &a, &b, &x).unwrap();
                let lhs = hyperplane_poly(&target, &l, &image).unwrap();
                let factor = UniPoly::constant(a.clone())
                    - UniPoly::monomial(b.clone(), target.n() as usize);
                let rhs = factor * hyperplane_poly(&source, &l, &x).unwrap();
                assert_eq!(lhs, rhs, "({m},{p},{q})");
            }
        }
    }

    #[test]
    fn boundary_at_b_zero_embeds_levels() {
        let target = ctx(2, 2, 2);
        let source = ctx(2, 2, 1);
        let mut r = rng(43);
        let x = random_plucker_vector(&source, &mut r);
        let image = boundary_map(&target, &BigRational::one(), &BigRational::zero(), &x).unwrap();
        assert_eq!(image.coords().len(), x.coords().len());
        for (k, v) in x.coords() {
            assert_eq!(image.get(&qi(k.alpha(), k.level())), *v);
        }
    }

    #[test]
    fn boundary_image_is_a_minor_rescaled_curve() {
        // pi([A : B], z(M)) is the coordinate vector of the curve whose
        // minors are (A - B s) M_alpha(s); concretely, M with one column
        // scaled by (A - B s).
        let mut r = rng(47);
        for (m, p, q) in [(2, 2, 1), (2, 2, 2), (3, 2, 1)] {
            let target = ctx(m, p, q);
            let source = ctx(m, p, q - 1);
            let base = random_integer_curve(&source, &mut r);
            let (a, b) = (bigrat(3), bigrat(2));
            let section = UniPoly::from_coeffs(vec![a.clone(), -b.clone()]);
            let entries: Vec<Vec<UniPoly>> = base
                .entries()
                .iter()
                .map(|row| {
                    let mut row = row.clone();
                    row[0] = row[0].clone() * section.clone();
                    row
                })
                .collect();
            let scaled = PolyMatrixCurve::new(target, entries).unwrap();
            let image =
                boundary_map(&target, &a, &b, &plucker_coords(&base).unwrap()).unwrap();
            assert_eq!(image, plucker_coords(&scaled).unwrap());
        }
    }

    #[test]
    fn boundary_map_rejects_bad_input() {
        let c0 = ctx(2, 2, 0);
        let c1 = ctx(2, 2, 1);
        let mut r = rng(3);
        let x = random_plucker_vector(&c0, &mut r);
        assert!(boundary_map(&c0, &bigrat(1), &bigrat(0), &x).is_err());
        assert!(boundary_map(&c1, &bigrat(0), &bigrat(0), &x).is_err());
        let wrong = random_plucker_vector(&c1, &mut r);
        assert!(boundary_map(&c1, &bigrat(1), &bigrat(1), &wrong).is_err());
    }

    #[test]
    fn incomparable_pairs_of_small_posets() {
        assert!(initial_ideal_gens(&ctx(3, 1, 2)).is_empty());
        let classical = initial_ideal_gens(&ctx(2, 2, 0));
        assert_eq!(classical, vec![(qi(&[1, 4], 0), qi(&[2, 3], 0))]);
        // Brute-force oracle on the 12-element degree-1 poset.
        let c = ctx(2, 2, 1);
        let elems = coordinate_order(&c);
        let mut expected = 0;
        for (i, u) in elems.iter().enumerate() {
            for v in elems.iter().skip(i + 1) {
                if !c.leq(u, v) && !c.leq(v, u) {
                    expected += 1;
                }
            }
        }
        assert_eq!(expected, 3);
        assert_eq!(initial_ideal_gens(&c).len(), expected);
    }

    #[test]
    fn stanley_reisner_facets_are_the_maximal_chains() {
        let c = ctx(3, 2, 1);
        let report = sr_decomposition(&c, 100, 2).unwrap();
        assert_eq!(report.facet_count, BigInt::from(55));
        assert_eq!(report.facet_size, 12);
        let facets = report.facets.as_ref().unwrap();
        assert_eq!(facets.len(), 55);
        for chain in facets {
            assert_eq!(chain.len(), 12);
            assert_eq!(chain[0], c.min_index());
            assert_eq!(chain[11], c.max_index());
            for pair in chain.windows(2) {
                assert!(c.leq(&pair[0], &pair[1]));
                assert_eq!(c.rank(&pair[1]) - c.rank(&pair[0]), 1);
            }
        }
        assert_eq!(report.hilbert[0], BigInt::one());
        assert_eq!(report.hilbert[1], BigInt::from(20));
    }

    #[test]
    fn stanley_reisner_respects_the_facet_cap() {
        let report = sr_decomposition(&ctx(3, 2, 1), 10, 0).unwrap();
        assert_eq!(report.facet_count, BigInt::from(55));
        assert!(report.facets.is_none());
    }

    #[test]
    fn hilbert_values_count_multichains_brute_force() {
        for c in [ctx(2, 2, 0), ctx(2, 2, 1), ctx(2, 1, 2)] {
            let elems = coordinate_order(&c);
            let report = sr_decomposition(&c, 0, 3).unwrap();
            // Degree-2 oracle: unordered comparable pairs, including squares.
            let mut pairs = BigInt::zero();
            for (i, u) in elems.iter().enumerate() {
                for v in elems.iter().skip(i) {
                    if c.leq(u, v) || c.leq(v, u) {
                        pairs += 1;
                    }
                }
            }
            assert_eq!(report.hilbert[2], pairs, "H(2) for {c:?}");
            // Degree-3 oracle: weakly increasing comparable triples.
            let mut triples = BigInt::zero();
            for (i, u) in elems.iter().enumerate() {
                for (jo, v) in elems.iter().enumerate().skip(i) {
                    if !(c.leq(u, v) || c.leq(v, u)) {
                        continue;
                    }
                    for w in elems.iter().skip(jo) {
                        let uw = c.leq(u, w) || c.leq(w, u);
                        let vw = c.leq(v, w) || c.leq(w, v);
                        if uw && vw {
                            triples += 1;
                        }
                    }
                }
            }
            assert_eq!(report.hilbert[3], triples, "H(3) for {c:?}");
        }
    }

    #[test]
    fn interpolation_recovers_the_classical_plucker_relation() {
        let c = ctx(2, 2, 0);
        let basis = interpolate_quadrics(&c, 30, &mut rng(101)).unwrap();
        assert_eq!(basis.dim(), 1);
        let form = &basis.forms()[0];
        let expected: BTreeMap<(QIndex, QIndex), BigRational> = [
            ((qi(&[1, 2], 0), qi(&[3, 4], 0)), bigrat(1)),
            ((qi(&[1, 3], 0), qi(&[2, 4], 0)), bigrat(-1)),
            ((qi(&[1, 4], 0), qi(&[2, 3], 0)), bigrat(1)),
        ]
        .into();
        assert_eq!(*form.terms(), expected);
    }

    #[test]
    fn interpolation_matches_the_incomparable_pair_count() {
        let mut r = rng(103);
        for (m, p, q) in [(2, 2, 0), (2, 2, 1)] {
            let c = ctx(m, p, q);
            let needed: usize = c.multichain_count(2).to_string().parse().unwrap();
            let basis = interpolate_quadrics(&c, needed + 10, &mut r).unwrap();
            let gens = initial_ideal_gens(&c);
            assert_eq!(basis.dim(), gens.len(), "({m},{p},{q})");
            let mut pivots = basis.pivot_pairs();
            pivots.sort();
            let mut expected = gens;
            expected.sort();
            assert_eq!(pivots, expected);
            // Holdout validation on fresh curves.
            for _ in 0..50 {
                let z = plucker_coords(&random_integer_curve(&c, &mut r)).unwrap();
                assert!(basis.vanishes_on(&z));
            }
        }
    }

    #[test]
    fn interpolation_enforces_the_sample_floor() {
        assert!(interpolate_quadrics(&ctx(2, 2, 0), 5, &mut rng(1)).is_err());
    }

    #[test]
    fn pole_placement_agrees_with_the_closed_loop_determinant() {
        let mut r = rng(59);
        for (m, p, q) in [(2, 2, 1), (3, 2, 1), (2, 2, 2), (2, 2, 0)] {
            let c = ctx(m, p, q);
            let n = c.n() as usize;
            for _ in 0..5 {
                let curve = random_integer_curve(&c, &mut r);
                let feedback: Vec<Vec<UniPoly>> = (0..n)
                    .map(|_| {
                        (0..m as usize)
                            .map(|_| {
                                UniPoly::from_int_coeffs(&[
                                    r.gen_range(-9..=9),
                                    r.gen_range(-9..=9),
                                ])
                            })
                            .collect()
                    })
                    .collect();
                let Ok(map) = pole_placement_map(&c, feedback) else { continue };
                let z = plucker_coords(&curve).unwrap();
                assert_eq!(
                    map.apply(&z).unwrap(),
                    map.closed_loop_determinant(&curve).unwrap(),
                    "({m},{p},{q})"
                );
            }
        }
    }

    #[test]
    fn pole_placement_is_linear() {
        let c = ctx(2, 2, 1);
        let mut r = rng(61);
        let feedback: Vec<Vec<UniPoly>> = (0..4)
            .map(|_| (0..2).map(|_| UniPoly::from_int_coeffs(&[r.gen_range(-9..=9), 1])).collect())
            .collect();
        let map = pole_placement_map(&c, feedback).unwrap();
        let z1 = random_plucker_vector(&c, &mut r);
        let z2 = random_plucker_vector(&c, &mut r);
        let mut sum = z1.coords().clone();
        for (k, v) in z2.coords() {
            *sum.entry(k.clone()).or_insert_with(BigRational::zero) += v;
        }
        let sum = PluckerVector::new(&c, sum).unwrap();
        assert_eq!(
            map.apply(&sum).unwrap(),
            map.apply(&z1).unwrap() + map.apply(&z2).unwrap()
        );
        assert_eq!(
            map.apply(&z1.scale(&bigrat(7)).unwrap()).unwrap(),
            map.apply(&z1).unwrap().scale(&bigrat(7))
        );
    }

    #[test]
    fn pole_placement_rejects_rank_deficient_feedback() {
        let c = ctx(2, 2, 0);
        let rows = vec![vec![UniPoly::one(), UniPoly::one()]; 4];
        assert!(pole_placement_map(&c, rows).is_err());
    }

    #[test]
    fn quadratic_extension_arithmetic() {
        let root2 = QuadExt::root_of(bigrat(2));
        assert_eq!(root2.clone() * root2.clone(), QuadExt::rational(bigrat(2)));
        let x = QuadExt::new(bigrat(1), bigrat(3), bigrat(2)); // 1 + 3 sqrt(2)
        let conj = QuadExt::new(bigrat(1), bigrat(-3), bigrat(2));
        assert_eq!(x.clone() * conj.clone(), QuadExt::rational(bigrat(-17)));
        assert!((x.clone() - x.clone()).is_zero());
        // Square radicands collapse to rationals.
        assert_eq!(QuadExt::root_of(bigrat(9)), QuadExt::rational(bigrat(3)));
        assert_eq!(
            QuadExt::root_of(BigRational::new(4.into(), 9.into())),
            QuadExt::rational(BigRational::new(2.into(), 3.into()))
        );
        assert!(QuadExt::root_of(bigrat(-4)).radicand() == &bigrat(-4));
        assert!(!QuadExt::root_of(bigrat(-4)).is_real());
        assert!(rational_sqrt(&bigrat(8)).is_none());
    }

    #[test]
    fn static_solver_counts_two_on_generic_data() {
        let mut r = rng(71);
        let mut two_count = 0;
        for _ in 0..20 {
            let data = random_static_instance(&mut r);
            match static_compensators_grass24(&data) {
                Ok(report) => {
                    let total: u32 = report.solutions.iter().map(|s| s.multiplicity).sum();
                    assert_eq!(total, 2);
                    assert_eq!(report.kernel.len(), 2);
                    two_count += 1;
                }
                Err(crate::Error::Degenerate(_)) => {}
                Err(e) => panic!("unexpected failure: {e}"),
            }
        }
        assert!(two_count >= 18, "only {two_count}/20 instances were generic");
    }

    #[test]
    fn static_solver_finds_complex_pairs() {
        let mut r = rng(73);
        let mut seen_negative = false;
        for _ in 0..200 {
            let data = random_static_instance(&mut r);
            if let Ok(report) = static_compensators_grass24(&data) {
                if report.discriminant.is_negative() {
                    assert_eq!(report.real_solutions, 0);
                    assert_eq!(report.solutions.len(), 2);
                    for sol in &report.solutions {
                        assert!(sol.coords.iter().any(|c| !c.is_real()));
                    }
                    seen_negative = true;
                    break;
                }
            }
        }
        assert!(seen_negative, "no complex instance found in 200 draws");
    }

    #[test]
    fn static_solver_torus_data_gives_two_real_solutions() {
        let l = MPlane::from_int_rows(&[
            vec![1, 1],
            vec![1, 2],
            vec![1, 3],
            vec![1, 4],
        ])
        .unwrap();
        assert!(l.is_totally_generic());
        let spreads = [[1i64, 2, 3, 4], [1, 2, 4, 8], [1, 3, 9, 27]];
        let mut all_real = 0;
        for spread in spreads {
            let data: Vec<(MPlane, BigRational)> =
                spread.iter().map(|&s| (l.clone(), bigrat(s))).collect();
            let report = static_compensators_grass24(&data).unwrap();
            let total: u32 = report.solutions.iter().map(|s| s.multiplicity).sum();
            assert_eq!(total, 2);
            if report.real_solutions == 2 {
                all_real += 1;
            }
        }
        assert!(all_real >= 1, "no spread produced an all-real instance");
    }

    #[test]
    fn static_solver_rejects_degenerate_data() {
        let l = vandermonde_plane(4, 2);
        // Repeated torus parameter.
        let data: Vec<(MPlane, BigRational)> =
            [1, 1, 2, 3].iter().map(|&s| (l.clone(), bigrat(s))).collect();
        assert!(matches!(
            static_compensators_grass24(&data),
            Err(crate::Error::Invalid(_))
        ));
        // Four distinct parameters but only wrong plane shape.
        let bad = vandermonde_plane(5, 3);
        let data: Vec<(MPlane, BigRational)> =
            [1, 2, 3, 4].iter().map(|&s| (bad.clone(), bigrat(s))).collect();
        assert!(static_compensators_grass24(&data).is_err());
    }

    #[test]
    fn random_curves_satisfy_the_interpolated_quadrics() {
        let c = ctx(2, 2, 1);
        let mut r = rng(107);
        let basis = interpolate_quadrics(&c, 85, &mut r).unwrap();
        for _ in 0..10 {
            let z = plucker_coords(&random_integer_curve(&c, &mut r)).unwrap();
            assert!(basis.vanishes_on(&z));
        }
    }
}
