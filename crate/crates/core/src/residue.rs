//! Roots-of-unity residue evaluation of Gromov-Witten invariants on
//! `Grass(p, m+p)`.
//!
//! # Critical points
//!
//! The quantum potential `QW(x) = sum_j x_j^{n+1}/(n+1) + (-1)^p x_j`
//! (`n = m + p`) has `dQW = 0` exactly at `p`-tuples of `n`-th roots of
//! `(-1)^{p+1}`; restricting to tuples of *distinct* roots and forgetting
//! the order gives the `binomial(n, p)` critical points of the potential in
//! the elementary-symmetric coordinates `c_i = e_i(x)`
//! ([`critical_points`]).
//!
//! # The function D
//!
//! For an integer `p`-tuple `K`, with the sum running over `p`-subsets
//! `x = (y_{i_1}, ..., y_{i_p})` of the roots,
//!
//! ```text
//! D(K) = (-1)^C(p,2)/n^p * sum  (x_1...x_p) (x_1+...+x_p)^L
//!                               det(x_j^{n-k_i}) det(x_i^{p-j}),
//! L = sum_j (k_j - j).
//! ```
//!
//! [`d_numeric`] evaluates this floating sum directly.  [`d_exact`] is the
//! integer-arithmetic evaluation: expanding `(x_1+...+x_p)^L` through the
//! index-lowering identity `(sum x) det(x_j^{n-k_i}) = sum_a det` with `k_a`
//! decremented, and collapsing each resulting sum of determinant pairs by
//! Cauchy-Binet, leaves
//!
//! ```text
//! D(K) = (-1)^C(p,2)/n^p * sum_{b_1+...+b_p=L}  L!/(b_1!...b_p!) *
//!        det[ P(n+p - (k_i - b_i) - (j-1)) ]_{i,j=1..p}
//! ```
//!
//! where `P(b)`, the sum of the `b`-th powers of all `n` roots, is
//! `(-1)^{(p+1)a} n` when `b = an` and `0` otherwise.  (With `L = 0` this is
//! the single power-sum determinant; the composition sum is what extends it
//! to positive rank.)  The division by `n^p` is asserted exact.
//!
//! `D` satisfies the same recursion, initial and boundary conditions as the
//! degree function on window sequences, so `D(J(alpha^(a)))` is the degree
//! of the quantum Schubert variety — in particular `D(J(max))` is
//! `d(m, p; q)`, the residue route to the curve count.
//!
//! # Correlators
//!
//! [`correlator`] evaluates
//!
//! ```text
//! <X_1,...,X_l>_g = (-1)^{C(p,2)(g-1)} sum_{dQW=0} J^{g-1} X_1(x)...X_l(x),
//! J = det(d^2 QW/dc_i dc_j) = n^p/((x_1...x_p) Delta^2),
//! ```
//!
//! gated to zero unless `sum codim = d*n + mp(1-g)` for an integer `d >= 0`.
//! When `g = 0` and the classes are one Schur class `S_B` (default: the
//! identity) times a power of `c_1`, the invariant is also computed exactly
//! as `D(J(((B dual))^(d)))`.

use std::f64::consts::PI;

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::closed::compositions;
use crate::error::{internal, invalid, Result};
use crate::linalg::det;
use crate::poset::QIndex;
use crate::qring::dual_subset;

/// The `n`-th roots of `(-1)^{p+1}` (`n = m + p`), ordered by increasing
/// argument: `y_k = exp(i pi (2k + delta)/n)` with `delta = 0` for odd `p`
/// and `1` for even `p`.
pub fn roots_of_unity(m: i64, p: i64) -> Result<Vec<Complex64>> {
    if m < 1 || p < 1 {
        return Err(invalid(format!("need m, p >= 1, got ({m},{p})")));
    }
    let n = m + p;
    let delta = if p % 2 == 0 { 1 } else { 0 };
    Ok((0..n)
        .map(|k| Complex64::from_polar(1.0, PI * (2 * k + delta) as f64 / n as f64))
        .collect())
}

/// One critical point of the quantum potential: an unordered `p`-subset of
/// the roots, kept as sorted indices plus the root values.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub subset: Vec<usize>,
    pub coords: Vec<Complex64>,
}

/// All `binomial(n, p)` critical points, subsets in lexicographic order.
pub fn critical_points(m: i64, p: i64) -> Result<Vec<CriticalPoint>> {
    let roots = roots_of_unity(m, p)?;
    let n = roots.len();
    if (p as usize) > n {
        return Err(invalid(format!("p = {p} exceeds the number of roots {n}")));
    }
    Ok((0..n)
        .combinations(p as usize)
        .map(|subset| CriticalPoint {
            coords: subset.iter().map(|&i| roots[i]).collect(),
            subset,
        })
        .collect())
}

/// Sum of the `b`-th powers of all `n`-th roots of `(-1)^{p+1}`:
/// `(-1)^{(p+1)a} n` if `b = an` for an integer `a` (of any sign), else 0.
fn power_sum(b: i64, n: i64, p: i64) -> BigInt {
    if b.rem_euclid(n) != 0 {
        return BigInt::zero();
    }
    let a = b / n;
    if ((p + 1) * a).rem_euclid(2) == 1 {
        BigInt::from(-n)
    } else {
        BigInt::from(n)
    }
}

fn neg_one_pow(e: i64) -> BigInt {
    if e.rem_euclid(2) == 1 {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

/// Exact integer value of `D(K)` via the composition-expanded power-sum
/// determinant.  Total on integer `p`-tuples: sequences of negative rank
/// evaluate to 0, and repeated or out-of-range entries vanish through the
/// determinants (antisymmetry and the boundary conditions).
pub fn d_exact(k: &[i64], m: i64, p: i64) -> Result<BigInt> {
    if m < 1 || p < 1 {
        return Err(invalid(format!("need m, p >= 1, got ({m},{p})")));
    }
    if k.len() != p as usize {
        return Err(invalid(format!("expected a {p}-tuple, got {k:?}")));
    }
    let n = m + p;
    let pu = p as usize;
    let rank: i64 = k.iter().enumerate().map(|(i, &v)| v - (i as i64 + 1)).sum();
    if rank < 0 {
        return Ok(BigInt::zero());
    }
    let mut fact = vec![BigInt::one()];
    for i in 1..=rank {
        let last = fact.last().unwrap() * i;
        fact.push(last);
    }
    let mut total = BigInt::zero();
    for b in compositions(rank, pu) {
        let mut mult = fact[rank as usize].clone();
        for &bi in &b {
            mult /= &fact[bi as usize];
        }
        let mat: Vec<Vec<BigInt>> = (0..pu)
            .map(|i| (0..pu).map(|j| power_sum(n + p - (k[i] - b[i]) - j as i64, n, p)).collect())
            .collect();
        total += mult * det(&mat);
    }
    total *= neg_one_pow(p * (p - 1) / 2);
    let denom = BigInt::from(n).pow(p as u32);
    let (quot, rem) = total.div_rem(&denom);
    if !rem.is_zero() {
        return Err(internal(format!("power-sum determinant for {k:?} not divisible by {n}^{p}")));
    }
    Ok(quot)
}

/// Floating evaluation with residual report.
#[derive(Debug, Clone, Copy)]
pub struct NumericValue {
    pub value: Complex64,
    /// `|Im value|` — should be at rounding level for real quantities
    pub imag_residual: f64,
    /// distance from `Re value` to the nearest integer
    pub rounding_residual: f64,
}

impl NumericValue {
    fn of(value: Complex64) -> Self {
        NumericValue {
            value,
            imag_residual: value.im.abs(),
            rounding_residual: (value.re - value.re.round()).abs(),
        }
    }
}

/// `z^e` for integer `e` of any sign (unit-safe: negative powers invert).
fn cpow(z: Complex64, e: i64) -> Complex64 {
    if e < 0 {
        return cpow(z, -e).finv();
    }
    let mut base = z;
    let mut e = e as u64;
    let mut acc = Complex64::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

fn vandermonde(x: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            acc *= x[i] - x[j];
        }
    }
    acc
}

fn elementary_symmetric(x: &[Complex64], upto: usize) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); upto + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for &xi in x {
        for i in (1..=upto).rev() {
            let lower = e[i - 1];
            e[i] += xi * lower;
        }
    }
    e
}

/// Floating `D(K)` as the literal sum over critical points.
pub fn d_numeric(k: &[i64], m: i64, p: i64) -> Result<NumericValue> {
    if k.len() != p as usize {
        return Err(invalid(format!("expected a {p}-tuple, got {k:?}")));
    }
    let n = m + p;
    let pu = p as usize;
    let rank: i64 = k.iter().enumerate().map(|(i, &v)| v - (i as i64 + 1)).sum();
    if rank < 0 {
        return Err(invalid(format!("sequence rank must be non-negative, got {k:?}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for point in critical_points(m, p)? {
        let x = &point.coords;
        let prod: Complex64 = x.iter().product();
        let s: Complex64 = x.iter().sum();
        let det1: Vec<Vec<Complex64>> =
            (0..pu).map(|i| (0..pu).map(|j| cpow(x[j], n - k[i])).collect()).collect();
        let det2: Vec<Vec<Complex64>> =
            (0..pu).map(|i| (0..pu).map(|j| cpow(x[i], p - 1 - j as i64)).collect()).collect();
        sum += prod * cpow(s, rank) * det(&det1) * det(&det2);
    }
    let sign = if (p * (p - 1) / 2).rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    Ok(NumericValue::of(sum * sign / (n as f64).powi(p as i32)))
}

/// The degree of the quantum Schubert variety of `alpha^(a)`, computed
/// exactly as `D(J(alpha^(a)))`.
pub fn delta(idx: &QIndex, m: i64, p: i64) -> Result<BigInt> {
    if idx.p() != p || *idx.alpha().last().unwrap() > m + p {
        return Err(invalid(format!("index {idx:?} is not valid for Grass({p}, {})", m + p)));
    }
    d_exact(idx.to_window(m + p).seq(), m, p)
}

/// The same quantity by the direct floating residue sum
/// `(-1)^C(p,2) sum_{dQW=0} c_1^rank S_{alpha dual} / J` with
/// `S_{alpha dual} = det(x_j^{n-alpha_i})/Delta` and
/// `J = n^p/((x_1...x_p) Delta^2)`.
pub fn delta_float(idx: &QIndex, m: i64, p: i64) -> Result<NumericValue> {
    if idx.p() != p || *idx.alpha().last().unwrap() > m + p {
        return Err(invalid(format!("index {idx:?} is not valid for Grass({p}, {})", m + p)));
    }
    let n = m + p;
    let pu = p as usize;
    let alpha = idx.alpha();
    let rank = idx.level() * n + alpha.iter().enumerate().map(|(i, &v)| v - (i as i64 + 1)).sum::<i64>();
    let np = (n as f64).powi(p as i32);
    let mut sum = Complex64::new(0.0, 0.0);
    for point in critical_points(m, p)? {
        let x = &point.coords;
        let dlt = vandermonde(x);
        let prod: Complex64 = x.iter().product();
        let jac = np / (prod * dlt * dlt);
        let alt: Vec<Vec<Complex64>> =
            (0..pu).map(|i| (0..pu).map(|j| cpow(x[j], n - alpha[i])).collect()).collect();
        let schur_dual = det(&alt) / dlt;
        let c1: Complex64 = x.iter().sum();
        sum += cpow(c1, rank) * schur_dual / jac;
    }
    let sign = if (p * (p - 1) / 2).rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    Ok(NumericValue::of(sum * sign))
}

/// A cohomology class insertable into a correlator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassSpec {
    /// the special Schubert class `c_i` (`1 <= i <= p`), codimension `i`
    Special(i64),
    /// the Schur class `S_I` for a strictly increasing `I` in `[1, n]`,
    /// codimension `sum (i_j - j)`
    Schur(Vec<i64>),
    /// the Jacobian class `J`, codimension `mp`
    Jacobian,
}

impl ClassSpec {
    fn codim(&self, m: i64, p: i64) -> i64 {
        match self {
            ClassSpec::Special(i) => *i,
            ClassSpec::Schur(seq) => seq.iter().enumerate().map(|(j, &v)| v - (j as i64 + 1)).sum(),
            ClassSpec::Jacobian => m * p,
        }
    }

    fn validate(&self, m: i64, p: i64) -> Result<()> {
        let n = m + p;
        match self {
            ClassSpec::Special(i) => {
                if !(1..=p).contains(i) {
                    return Err(invalid(format!("special class index must be in 1..={p}, got {i}")));
                }
            }
            ClassSpec::Schur(seq) => {
                if seq.len() != p as usize
                    || !seq.windows(2).all(|w| w[0] < w[1])
                    || seq[0] < 1
                    || *seq.last().unwrap() > n
                {
                    return Err(invalid(format!(
                        "Schur class needs a strictly increasing {p}-tuple in [1, {n}], got {seq:?}"
                    )));
                }
            }
            ClassSpec::Jacobian => {}
        }
        Ok(())
    }

    fn eval(&self, x: &[Complex64], m: i64, p: i64) -> Complex64 {
        let n = m + p;
        let pu = p as usize;
        match self {
            ClassSpec::Special(i) => elementary_symmetric(x, pu)[*i as usize],
            ClassSpec::Schur(seq) => {
                let alt: Vec<Vec<Complex64>> =
                    (0..pu).map(|k| (0..pu).map(|j| cpow(x[k], seq[j] - 1)).collect()).collect();
                let sign = if (p * (p - 1) / 2).rem_euclid(2) == 1 { -1.0 } else { 1.0 };
                sign * det(&alt) / vandermonde(x)
            }
            ClassSpec::Jacobian => {
                let dlt = vandermonde(x);
                let prod: Complex64 = x.iter().product();
                (n as f64).powi(p as i32) / (prod * dlt * dlt)
            }
        }
    }
}

/// An evaluated Gromov-Witten correlator.
#[derive(Debug, Clone)]
pub struct Correlator {
    pub genus: i64,
    /// the curve degree selected by the codimension condition; `None` when
    /// no non-negative integer works (value is then exactly 0)
    pub degree: Option<i64>,
    pub value: Complex64,
    /// exact integer value where the `D`-pathway applies (genus 0, at most
    /// one Schur class, all other classes `c_1`), and for gated zeros
    pub exact: Option<BigInt>,
    pub imag_residual: f64,
    pub rounding_residual: f64,
}

/// Evaluates `<X_1, ..., X_l>_g` by the residue sum over critical points.
pub fn correlator(classes: &[ClassSpec], genus: i64, m: i64, p: i64) -> Result<Correlator> {
    if genus < 0 {
        return Err(invalid(format!("genus must be non-negative, got {genus}")));
    }
    for class in classes {
        class.validate(m, p)?;
    }
    let n = m + p;
    let codim: i64 = classes.iter().map(|c| c.codim(m, p)).sum();
    let excess = codim - m * p * (1 - genus);
    if excess < 0 || excess % n != 0 {
        return Ok(Correlator {
            genus,
            degree: None,
            value: Complex64::new(0.0, 0.0),
            exact: Some(BigInt::zero()),
            imag_residual: 0.0,
            rounding_residual: 0.0,
        });
    }
    let d = excess / n;

    let np = (n as f64).powi(p as i32);
    let mut sum = Complex64::new(0.0, 0.0);
    for point in critical_points(m, p)? {
        let x = &point.coords;
        let dlt = vandermonde(x);
        let prod: Complex64 = x.iter().product();
        let jac = np / (prod * dlt * dlt);
        let mut term = cpow(jac, genus - 1);
        for class in classes {
            term *= class.eval(x, m, p);
        }
        sum += term;
    }
    let sign = if ((p * (p - 1) / 2) * (genus - 1)).rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    let numeric = NumericValue::of(sum * sign);

    // exact route: <S_B c_1^l>_0 = D(J((B dual)^(d)))
    let mut exact = None;
    if genus == 0 {
        let mut schur: Option<&[i64]> = None;
        let mut pathway = true;
        for class in classes {
            match class {
                ClassSpec::Special(1) => {}
                ClassSpec::Schur(seq) if schur.is_none() => schur = Some(seq),
                _ => {
                    pathway = false;
                    break;
                }
            }
        }
        if pathway {
            let base: Vec<i64> = (1..=p).collect();
            let alpha = dual_subset(schur.unwrap_or(&base), n);
            let idx = QIndex::new(alpha, d)?;
            exact = Some(d_exact(idx.to_window(n).seq(), m, p)?);
        }
    }

    Ok(Correlator {
        genus,
        degree: Some(d),
        value: numeric.value,
        exact,
        imag_residual: numeric.imag_residual,
        rounding_residual: numeric.rounding_residual,
    })
}

/// Largest residual, over all critical points, of the quantum cohomology
/// relations: `|h_j(x)|` for `m+1 <= j <= n-1` and `|h_n(x) - (-1)^{p+1}|`.
pub fn critical_residual(m: i64, p: i64) -> Result<f64> {
    let n = m + p;
    let pu = p as usize;
    let target = if p % 2 == 0 { -1.0 } else { 1.0 };
    let mut worst = 0.0f64;
    for point in critical_points(m, p)? {
        let e = elementary_symmetric(&point.coords, pu);
        // h_j from the e's by h_j = sum_{i=1..min(j,p)} (-1)^{i+1} e_i h_{j-i}
        let mut h = vec![Complex64::new(0.0, 0.0); (n + 1) as usize];
        h[0] = Complex64::new(1.0, 0.0);
        for j in 1..=n as usize {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 1..=j.min(pu) {
                let term = e[i] * h[j - i];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            h[j] = acc;
        }
        for j in (m + 1)..n {
            worst = worst.max(h[j as usize].norm());
        }
        worst = worst.max((h[n as usize] - target).norm());
    }
    Ok(worst)
}

/// Largest residual, over all critical points, of the chain-rule identity
/// `det(Hess_x QW) / det(de_i/dx_j)^2 = n^p / ((x_1...x_p) Delta^2)`, with
/// both determinants computed from the explicitly differentiated matrices.
pub fn jacobian_identity_residual(m: i64, p: i64) -> Result<f64> {
    let n = m + p;
    let pu = p as usize;
    let np = (n as f64).powi(p as i32);
    let mut worst = 0.0f64;
    for point in critical_points(m, p)? {
        let x = &point.coords;
        // Hessian of QW in the x's: diagonal with entries n x_i^{n-1}
        let hess: Vec<Vec<Complex64>> = (0..pu)
            .map(|i| {
                (0..pu)
                    .map(|j| if i == j { n as f64 * cpow(x[i], n - 1) } else { Complex64::new(0.0, 0.0) })
                    .collect()
            })
            .collect();
        // de_i/dx_j = e_{i-1}(x with x_j removed)
        let jacmat: Vec<Vec<Complex64>> = (1..=pu)
            .map(|i| {
                (0..pu)
                    .map(|j| {
                        let rest: Vec<Complex64> =
                            x.iter().enumerate().filter(|&(t, _)| t != j).map(|(_, &v)| v).collect();
                        elementary_symmetric(&rest, pu)[i - 1]
                    })
                    .collect()
            })
            .collect();
        let dj = det(&jacmat);
        let quotient = det(&hess) / (dj * dj);
        let dlt = vandermonde(x);
        let prod: Complex64 = x.iter().product();
        let closed_form = np / (prod * dlt * dlt);
        let scale = closed_form.norm().max(1.0);
        worst = worst.max((quotient - closed_form).norm() / scale);
    }
    Ok(worst)
}
