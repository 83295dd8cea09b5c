//! Symmetric functions in the Chern basis `c_1, ..., c_p` and in root
//! variables `x_1, ..., x_p`.
//!
//! Conventions (`n = m + p` where relevant):
//!
//! * `c_i` is the `i`-th elementary symmetric polynomial of the roots, so
//!   substituting `c_i -> e_i(x)` turns a [`SymPoly`] into an [`XPoly`];
//!   `c_i = 0` for `i > p`.
//! * Complete homogeneous `h_j` satisfies
//!
//!   ```text
//!   h_j - c_1 h_{j-1} + c_2 h_{j-2} - ... + (-1)^j c_j = 0,   h_0 = 1,
//!   ```
//!
//!   equivalently the generating-series identity
//!   `(sum_r h_r (-t)^r) * (sum_r e_r t^r) = 1` ([`eh_identity_holds`]).
//! * Power sums `p_r` come from Newton's identities, the logarithmic
//!   derivative of the generating series of the `e_r`.
//! * Schur polynomials are determinants of `h`'s: for a strictly increasing
//!   sequence `I = (i_1 < ... < i_p)`,
//!
//!   ```text
//!   S_I = det( h_{i_k - j} )_{k,j = 1..p}
//!   ```
//!
//!   ([`schur_in_c`]), and at *points* the same function is the quotient of
//!   alternants `det(x_k^{i_j - 1}) * (-1)^{p(p-1)/2} / prod_{k<l}(x_k - x_l)`
//!   ([`schur_alternant`]).
//!
//! The two gradient identities at the heart of the residue formulas are
//! verified exactly here: the partial derivatives of the power sum
//! `P_{n+1}` with respect to the `c_j` are (up to sign and the factor `n+1`)
//! the `h_{n+1-j}` ([`power_sum_gradient_holds`]), and the Jacobian matrix
//! `(d c_i / d x_j)` has determinant equal to the Vandermonde product
//! ([`vandermonde_jacobian_holds`]).

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::linalg;

/// Sparse polynomial in `c_1, ..., c_p` with integer coefficients, graded by
/// `deg c_i = i`.  Keys are exponent vectors of length `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

/// Sparse polynomial in `x_1, ..., x_p` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

macro_rules! poly_common {
    ($T:ident) => {
        impl $T {
            pub fn zero_in(vars: usize) -> Self {
                $T { vars, terms: BTreeMap::new() }
            }

            pub fn one_in(vars: usize) -> Self {
                let mut t = BTreeMap::new();
                t.insert(vec![0; vars], BigInt::one());
                $T { vars, terms: t }
            }

            pub fn constant(vars: usize, c: BigInt) -> Self {
                let mut out = Self::zero_in(vars);
                if !c.is_zero() {
                    out.terms.insert(vec![0; vars], c);
                }
                out
            }

            /// The variable with 1-based index `i`.
            pub fn var(vars: usize, i: usize) -> Self {
                assert!(1 <= i && i <= vars, "variable index out of range");
                let mut e = vec![0; vars];
                e[i - 1] = 1;
                let mut t = BTreeMap::new();
                t.insert(e, BigInt::one());
                $T { vars, terms: t }
            }

            pub fn vars(&self) -> usize {
                self.vars
            }

            pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
                &self.terms
            }

            pub fn num_terms(&self) -> usize {
                self.terms.len()
            }

            fn insert_term(&mut self, exp: Vec<u32>, coeff: BigInt) {
                if coeff.is_zero() {
                    return;
                }
                match self.terms.entry(exp) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += coeff;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(coeff);
                    }
                }
            }

            pub fn scale(&self, c: &BigInt) -> Self {
                if c.is_zero() {
                    return Self::zero_in(self.vars);
                }
                $T {
                    vars: self.vars,
                    terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
                }
            }

            pub fn pow(&self, k: u32) -> Self {
                let mut acc = Self::one_in(self.vars);
                for _ in 0..k {
                    acc = acc * self.clone();
                }
                acc
            }

            /// Evaluation at exact rational points (1-based variable order).
            pub fn eval(&self, at: &[BigRational]) -> BigRational {
                assert_eq!(at.len(), self.vars);
                let mut acc = BigRational::zero();
                for (e, coeff) in &self.terms {
                    let mut term = BigRational::from(coeff.clone());
                    for (x, &k) in at.iter().zip(e) {
                        for _ in 0..k {
                            term *= x;
                        }
                    }
                    acc += term;
                }
                acc
            }
        }

        impl Add for $T {
            type Output = $T;
            fn add(self, rhs: $T) -> $T {
                // a bare Zero::zero() carries no variable count; unify
                if self.terms.is_empty() && self.vars == 0 {
                    return rhs;
                }
                if rhs.terms.is_empty() && rhs.vars == 0 {
                    return self;
                }
                assert_eq!(self.vars, rhs.vars, "mixed variable counts");
                let mut out = self;
                for (e, c) in rhs.terms {
                    out.insert_term(e, c);
                }
                out
            }
        }

        impl Sub for $T {
            type Output = $T;
            fn sub(self, rhs: $T) -> $T {
                self + (-rhs)
            }
        }

        impl Neg for $T {
            type Output = $T;
            fn neg(self) -> $T {
                $T {
                    vars: self.vars,
                    terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
                }
            }
        }

        impl Mul for $T {
            type Output = $T;
            fn mul(self, rhs: $T) -> $T {
                if self.terms.is_empty() || rhs.terms.is_empty() {
                    return $T::zero_in(self.vars.max(rhs.vars));
                }
                assert_eq!(self.vars, rhs.vars, "mixed variable counts");
                let mut out = $T::zero_in(self.vars);
                for (ea, ca) in &self.terms {
                    for (eb, cb) in &rhs.terms {
                        let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                        out.insert_term(exp, ca * cb);
                    }
                }
                out
            }
        }

        impl Zero for $T {
            fn zero() -> Self {
                // variable count is fixed per computation; a free-standing
                // zero uses 0 variables and unifies on first addition
                $T { vars: 0, terms: BTreeMap::new() }
            }
            fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }
        }
    };
}

poly_common!(SymPoly);
poly_common!(XPoly);

impl SymPoly {
    /// Graded degree (`deg c_i = i`) if homogeneous, else `None`.
    /// The zero polynomial reports `Some(0)`.
    pub fn graded_degree(&self) -> Option<i64> {
        let mut deg: Option<i64> = None;
        for e in self.terms.keys() {
            let d: i64 = e.iter().enumerate().map(|(i, &k)| (i as i64 + 1) * k as i64).sum();
            match deg {
                None => deg = Some(d),
                Some(old) if old != d => return None,
                _ => {}
            }
        }
        deg.or(Some(0))
    }

    /// Formal partial derivative with respect to `c_j` (1-based).
    pub fn partial(&self, j: usize) -> SymPoly {
        assert!(1 <= j && j <= self.vars);
        let mut out = SymPoly::zero_in(self.vars);
        for (e, c) in &self.terms {
            let k = e[j - 1];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[j - 1] -= 1;
            out.insert_term(e2, c * BigInt::from(k));
        }
        out
    }

    /// Substitutes `c_i -> e_i(x_1, ..., x_p)`.
    pub fn to_xpoly(&self) -> XPoly {
        let p = self.vars;
        let es: Vec<XPoly> = (1..=p).map(|i| e_in_x(i as i64, p)).collect();
        let mut out = XPoly::zero_in(p);
        for (e, c) in &self.terms {
            let mut term = XPoly::constant(p, c.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term * es[i].clone();
                }
            }
            out = out + term;
        }
        out
    }
}

impl XPoly {
    /// True when invariant under every adjacent transposition of variables.
    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.vars.saturating_sub(1) {
            let swapped: BTreeMap<Vec<u32>, BigInt> = self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.swap(i, i + 1);
                    (e2, c.clone())
                })
                .collect();
            if swapped != self.terms {
                return false;
            }
        }
        true
    }
}

/// Elementary symmetric polynomial `e_i(x_1, ..., x_p)`; zero when `i > p`,
/// one when `i = 0`.
pub fn e_in_x(i: i64, p: usize) -> XPoly {
    if i < 0 || i as usize > p {
        return XPoly::zero_in(p);
    }
    if i == 0 {
        return XPoly::one_in(p);
    }
    let mut out = XPoly::zero_in(p);
    for subset in (0..p).combinations(i as usize) {
        let mut e = vec![0u32; p];
        for v in subset {
            e[v] = 1;
        }
        out.insert_term(e, BigInt::one());
    }
    out
}

/// Complete homogeneous `h_j(x_1, ..., x_p)` by direct monomial enumeration
/// (all multisets of size `j`); zero for `j < 0`.
pub fn h_in_x(j: i64, p: usize) -> XPoly {
    if j < 0 {
        return XPoly::zero_in(p);
    }
    let mut out = XPoly::zero_in(p);
    let mut exp = vec![0u32; p];
    fn rec(out: &mut XPoly, exp: &mut Vec<u32>, var: usize, left: u32, p: usize) {
        if var == p - 1 {
            exp[var] = left;
            let e = exp.clone();
            out.insert_term(e, BigInt::one());
            exp[var] = 0;
            return;
        }
        for k in 0..=left {
            exp[var] = k;
            rec(out, exp, var + 1, left - k, p);
        }
        exp[var] = 0;
    }
    rec(&mut out, &mut exp, 0, j as u32, p);
    out
}

/// All `h_0, ..., h_max` in the Chern basis, from the defining recursion
/// `h_j = sum_{i=1}^{min(j,p)} (-1)^{i+1} c_i h_{j-i}`.
pub fn h_in_c_upto(max: usize, p: usize) -> Vec<SymPoly> {
    let mut hs: Vec<SymPoly> = Vec::with_capacity(max + 1);
    hs.push(SymPoly::one_in(p));
    for j in 1..=max {
        let mut acc = SymPoly::zero_in(p);
        for i in 1..=j.min(p) {
            let term = SymPoly::var(p, i) * hs[j - i].clone();
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        hs.push(acc);
    }
    hs
}

/// `h_j` in the Chern basis; zero for `j < 0`.
pub fn h_in_c(j: i64, p: usize) -> SymPoly {
    if j < 0 {
        return SymPoly::zero_in(p);
    }
    h_in_c_upto(j as usize, p).pop().unwrap()
}

/// Power sum `p_r` in the Chern basis via Newton's identities:
/// `p_r = sum_{i=1}^{min(r-1,p)} (-1)^{i-1} c_i p_{r-i} + (-1)^{r-1} r c_r`
/// (last term only when `r <= p`).
pub fn power_sum_in_c(r: i64, p: usize) -> SymPoly {
    assert!(r >= 1, "power sums start at p_1");
    let r = r as usize;
    let mut ps: Vec<SymPoly> = Vec::with_capacity(r + 1);
    ps.push(SymPoly::zero_in(p)); // unused slot p_0
    for k in 1..=r {
        let mut acc = SymPoly::zero_in(p);
        for i in 1..k.min(p + 1) {
            let term = SymPoly::var(p, i) * ps[k - i].clone();
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        if k <= p {
            let lead = SymPoly::var(p, k).scale(&BigInt::from(k));
            acc = if k % 2 == 1 { acc + lead } else { acc - lead };
        }
        ps.push(acc);
    }
    ps.pop().unwrap()
}

/// Schur polynomial of the strictly increasing sequence `I` in the Chern
/// basis: `det(h_{i_k - j})`, expanded by memoized minors.
pub fn schur_in_c(seq: &[i64], p: usize) -> Result<SymPoly> {
    if seq.len() != p {
        return Err(invalid(format!("expected a length-{p} sequence, got {seq:?}")));
    }
    if !seq.windows(2).all(|w| w[0] < w[1]) || seq[0] < 1 {
        return Err(invalid(format!("sequence must be strictly increasing and positive, got {seq:?}")));
    }
    let max_h = (seq[p - 1] - 1).max(0) as usize;
    let hs = h_in_c_upto(max_h, p);
    let h = |idx: i64| -> SymPoly {
        if idx < 0 {
            SymPoly::zero_in(p)
        } else {
            hs[idx as usize].clone()
        }
    };
    let mat: Vec<Vec<SymPoly>> = (0..p)
        .map(|k| (0..p).map(|j| h(seq[k] - (j as i64 + 1))).collect())
        .collect();
    Ok(linalg::det(&mat))
}

/// Schur value at distinct points, as the quotient of alternants:
/// numerator `det(x_k^{exponents})` with exponents `i_j - 1` in increasing
/// order carries a column-reversal sign `(-1)^{p(p-1)/2}` relative to the
/// textbook arrangement; the denominator is `prod_{k<l} (x_k - x_l)`.
pub fn schur_alternant(seq: &[i64], pts: &[BigRational]) -> Result<BigRational> {
    let p = pts.len();
    if seq.len() != p {
        return Err(invalid(format!("sequence length {} != point count {p}", seq.len())));
    }
    if !seq.windows(2).all(|w| w[0] < w[1]) || seq[0] < 1 {
        return Err(invalid(format!("sequence must be strictly increasing and positive, got {seq:?}")));
    }
    let mut denom = BigRational::one();
    for k in 0..p {
        for l in k + 1..p {
            let d = &pts[k] - &pts[l];
            if d.is_zero() {
                return Err(invalid("alternant quotient needs distinct points"));
            }
            denom *= d;
        }
    }
    let mat: Vec<Vec<BigRational>> = pts
        .iter()
        .map(|x| {
            seq.iter()
                .map(|&i| {
                    let mut acc = BigRational::one();
                    for _ in 0..(i - 1) {
                        acc *= x;
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let num = linalg::det(&mat);
    let sign =
        if (p * (p - 1) / 2).is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
    Ok(sign * num / denom)
}

/// Verifies `(sum_r h_r (-t)^r)(sum_r e_r t^r) = 1` in the `x`-variables up
/// to degree `max_deg`, with `h` enumerated directly (independently of the
/// Chern-basis recursion).
pub fn eh_identity_holds(p: usize, max_deg: i64) -> bool {
    for d in 1..=max_deg {
        let mut acc = XPoly::zero_in(p);
        for i in 0..=d {
            let term = h_in_x(i, p) * e_in_x(d - i, p);
            acc = if i % 2 == 0 { acc + term } else { acc - term };
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

/// Verifies `d(P_{n+1})/d c_j = (-1)^{1+j} (n+1) h_{n+1-j}` for all
/// `j = 1..p`, where `n = m + p`.  (Equivalently: the `h`-relations cutting
/// out the cohomology ring are the gradient of the single potential
/// `P_{n+1}/(n+1)`; working with `P_{n+1}` itself keeps coefficients
/// integral.)
pub fn power_sum_gradient_holds(m: i64, p: i64) -> bool {
    let n = m + p;
    let pw = power_sum_in_c(n + 1, p as usize);
    for j in 1..=p {
        let lhs = pw.partial(j as usize);
        let h = h_in_c(n + 1 - j, p as usize).scale(&BigInt::from(n + 1));
        let rhs = if (1 + j) % 2 == 0 { h } else { -h };
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Verifies `det(d c_i / d x_j) = prod_{i<j} (x_i - x_j)` where
/// `c_i = e_i(x)`, using `d e_i / d x_j = e_{i-1}(x with x_j omitted)`.
pub fn vandermonde_jacobian_holds(p: usize) -> bool {
    // entry (i, j): derivative of e_i with respect to x_j
    let mat: Vec<Vec<XPoly>> = (1..=p)
        .map(|i| {
            (0..p)
                .map(|j| {
                    // e_{i-1} of the variables excluding x_j, embedded in p vars
                    let mut out = XPoly::zero_in(p);
                    let others: Vec<usize> = (0..p).filter(|&v| v != j).collect();
                    for subset in others.iter().combinations(i - 1) {
                        let mut e = vec![0u32; p];
                        for &&v in subset.iter() {
                            e[v] = 1;
                        }
                        out.insert_term(e, BigInt::one());
                    }
                    out
                })
                .collect()
        })
        .collect();
    let lhs = linalg::det(&mat);
    let mut rhs = XPoly::one_in(p);
    for i in 0..p {
        for j in i + 1..p {
            rhs = rhs * (XPoly::var(p, i + 1) - XPoly::var(p, j + 1));
        }
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn h_in_c_small_cases() {
        // p = 2: h_1 = c_1, h_2 = c_1^2 - c_2, h_3 = c_1^3 - 2 c_1 c_2
        let h1 = h_in_c(1, 2);
        assert_eq!(h1, SymPoly::var(2, 1));
        let h2 = h_in_c(2, 2);
        let expect = SymPoly::var(2, 1) * SymPoly::var(2, 1) - SymPoly::var(2, 2);
        assert_eq!(h2, expect);
        let h3 = h_in_c(3, 2);
        let c1 = SymPoly::var(2, 1);
        let c2 = SymPoly::var(2, 2);
        let expect3 = c1.clone() * c1.clone() * c1.clone() - (c1 * c2).scale(&BigInt::from(2));
        assert_eq!(h3, expect3);
        assert!(h_in_c(-1, 2).is_zero());
        assert_eq!(h_in_c(0, 2), SymPoly::one_in(2));
    }

    #[test]
    fn h_in_c_expands_to_complete_homogeneous() {
        for p in 1..=3usize {
            for j in 0..=6i64 {
                assert_eq!(
                    h_in_c(j, p).to_xpoly(),
                    h_in_x(j, p),
                    "h_{j} in {p} variables"
                );
            }
        }
    }

    #[test]
    fn h_is_homogeneous() {
        for j in 0..=7 {
            assert_eq!(h_in_c(j, 3).graded_degree(), Some(if j == 0 { 0 } else { j }));
        }
    }

    #[test]
    fn power_sums_small() {
        // p_1 = c_1, p_2 = c_1^2 - 2 c_2
        assert_eq!(power_sum_in_c(1, 2), SymPoly::var(2, 1));
        let p2 = power_sum_in_c(2, 2);
        let expect = SymPoly::var(2, 1) * SymPoly::var(2, 1) - SymPoly::var(2, 2).scale(&BigInt::from(2));
        assert_eq!(p2, expect);
        // numeric: p_3(2, 3) = 8 + 27
        let p3 = power_sum_in_c(3, 2);
        assert_eq!(p3.to_xpoly().eval(&[r(2), r(3)]), r(35));
    }

    #[test]
    fn power_sums_match_direct_evaluation() {
        let pts = [r(2), r(-1), r(4)];
        for rr in 1..=7i64 {
            let sym = power_sum_in_c(rr, 3).to_xpoly();
            let direct: BigRational = pts
                .iter()
                .map(|x| {
                    let mut acc = BigRational::one();
                    for _ in 0..rr {
                        acc *= x;
                    }
                    acc
                })
                .sum();
            assert_eq!(sym.eval(&[r(2), r(-1), r(4)]), direct);
        }
    }

    #[test]
    fn schur_identity_and_single_rows() {
        // S_(1,2,...,p) = 1
        for p in 1..=4 {
            let seq: Vec<i64> = (1..=p as i64).collect();
            assert_eq!(schur_in_c(&seq, p).unwrap(), SymPoly::one_in(p));
        }
        // S_(1,3) = h_1 (partition (1)) in p = 2
        assert_eq!(schur_in_c(&[1, 3], 2).unwrap(), h_in_c(1, 2));
        // graded degree equals sum(i_j - j)
        assert_eq!(schur_in_c(&[2, 4], 2).unwrap().graded_degree(), Some(3));
        assert_eq!(schur_in_c(&[1, 2, 6], 3).unwrap().graded_degree(), Some(3));
    }

    #[test]
    fn schur_in_c_matches_alternant_at_points() {
        let pts = vec![r(2), r(3), r(5)];
        let evals: Vec<BigRational> = (1..=3).map(|i| e_in_x(i, 3).eval(&pts)).collect();
        for seq in [[1i64, 2, 3], [1, 2, 5], [2, 3, 4], [1, 4, 6], [3, 5, 7]] {
            let via_c = schur_in_c(&seq, 3).unwrap().eval(&evals);
            let via_alt = schur_alternant(&seq, &pts).unwrap();
            assert_eq!(via_c, via_alt, "mismatch at {seq:?}");
        }
    }

    #[test]
    fn alternant_of_identity_sequence_is_one() {
        for p in 1..=4usize {
            let seq: Vec<i64> = (1..=p as i64).collect();
            let pts: Vec<BigRational> = (0..p).map(|k| r(k as i64 * 3 + 2)).collect();
            assert_eq!(schur_alternant(&seq, &pts).unwrap(), BigRational::one());
        }
        // repeated points are rejected
        assert!(schur_alternant(&[1, 2], &[r(1), r(1)]).is_err());
    }

    #[test]
    fn eh_identity() {
        for p in 1..=4 {
            assert!(eh_identity_holds(p, 2 * (p as i64 + 4)), "E-H identity fails for p={p}");
        }
    }

    #[test]
    fn gradient_identity() {
        for (m, p) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2), (5, 2), (2, 3), (4, 3), (5, 4)] {
            assert!(power_sum_gradient_holds(m, p), "gradient identity fails at ({m},{p})");
        }
    }

    #[test]
    fn jacobian_identity() {
        for p in 1..=5 {
            assert!(vandermonde_jacobian_holds(p), "Jacobian identity fails at p={p}");
        }
    }

    #[test]
    fn symmetry_detection() {
        assert!(e_in_x(2, 3).is_symmetric());
        assert!(h_in_x(3, 3).is_symmetric());
        assert!((h_in_x(2, 3) * e_in_x(1, 3)).is_symmetric());
        assert!(!XPoly::var(3, 1).is_symmetric());
    }
}
