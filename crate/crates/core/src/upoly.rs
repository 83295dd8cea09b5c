//! Dense univariate polynomials over the exact rationals.
//!
//! Used for the variable `s` of polynomial matrices (entries of curves
//! `P^1 -> Grass(p, m+p)` in local coordinates) and for hyperplane forms as
//! polynomials in `s`.  Degrees stay small (at most a few dozen), so a dense
//! coefficient vector with trimmed trailing zeros is the right shape.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Polynomial `c_0 + c_1 s + ... + c_d s^d`; the zero polynomial has an
/// empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| BigRational::from(BigInt::from(c))).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    /// The monomial `c * s^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return UniPoly::default();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    pub fn variable() -> Self {
        UniPoly::monomial(BigRational::one(), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Multiplication by `s^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return UniPoly::default();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return UniPoly::default();
        }
        UniPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    /// The substitution `s -> s^k`, stretching coefficient indices by `k`.
    /// `k = 0` collapses to the constant `p(1)`.
    pub fn compose_power(&self, k: usize) -> Self {
        if k == 0 {
            return UniPoly::constant(self.eval(&BigRational::one()));
        }
        if self.is_zero() {
            return UniPoly::default();
        }
        let mut coeffs = vec![BigRational::zero(); k * (self.coeffs.len() - 1) + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[k * i] = c.clone();
        }
        UniPoly { coeffs }
    }

    /// Euclidean division; `None` when the divisor is zero.
    pub fn div_rem(&self, divisor: &UniPoly) -> Option<(UniPoly, UniPoly)> {
        let dd = divisor.degree()?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.clone();
        let mut quo = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let f = &rem.coeffs[rd] / &lead;
            quo[rd - dd] = f.clone();
            let sub = divisor.scale(&f).shift(rd - dd);
            rem = rem - sub;
        }
        Some((UniPoly::from_coeffs(quo), rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let (mut f, mut g) = (a.clone(), b.clone());
        while !g.is_zero() {
            let (_, r) = f.div_rem(&g).expect("nonzero divisor");
            f = g;
            g = r;
        }
        match f.degree() {
            Some(d) => {
                let lead = f.coeffs[d].recip();
                f.scale(&lead)
            }
            None => f,
        }
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: UniPoly) -> UniPoly {
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.into_iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.into_iter().enumerate() {
            coeffs[i] += c;
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: UniPoly) -> UniPoly {
        self + (-rhs)
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.into_iter().map(Neg::neg).collect() }
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::default();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Zero for UniPoly {
    fn zero() -> Self {
        UniPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for UniPoly {
    fn one() -> Self {
        UniPoly::constant(BigRational::one())
    }
}

impl std::iter::Sum for UniPoly {
    fn sum<I: Iterator<Item = UniPoly>>(iter: I) -> UniPoly {
        iter.fold(UniPoly::default(), Add::add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn arithmetic_and_eval() {
        let f = UniPoly::from_int_coeffs(&[1, 2]); // 1 + 2s
        let g = UniPoly::from_int_coeffs(&[-1, 2]); // -1 + 2s
        let prod = f.clone() * g.clone();
        assert_eq!(prod, UniPoly::from_int_coeffs(&[-1, 0, 4])); // 4s^2 - 1
        assert_eq!(prod.eval(&r(3)), r(35));
        assert_eq!((f.clone() + g.clone()).degree(), Some(1));
        assert!((f.clone() - f.clone()).is_zero());
        assert_eq!(f.shift(2), UniPoly::from_int_coeffs(&[0, 0, 1, 2]));
    }

    #[test]
    fn determinant_of_poly_matrix() {
        // det [[s, 1], [1, s]] = s^2 - 1
        let s = UniPoly::variable();
        let one = UniPoly::one();
        let m = vec![vec![s.clone(), one.clone()], vec![one.clone(), s.clone()]];
        assert_eq!(crate::linalg::det(&m), UniPoly::from_int_coeffs(&[-1, 0, 1]));
    }

    #[test]
    fn power_substitution() {
        let f = UniPoly::from_int_coeffs(&[1, 2, 3]); // 1 + 2s + 3s^2
        assert_eq!(f.compose_power(2), UniPoly::from_int_coeffs(&[1, 0, 2, 0, 3]));
        assert_eq!(f.compose_power(1), f);
        assert_eq!(f.compose_power(0), UniPoly::from_int_coeffs(&[6]));
        assert!(UniPoly::default().compose_power(3).is_zero());
    }

    #[test]
    fn euclidean_division_and_gcd() {
        let f = UniPoly::from_int_coeffs(&[-1, 0, 1]); // (s-1)(s+1)
        let g = UniPoly::from_int_coeffs(&[1, 1]); // s + 1
        let (q, rem) = f.div_rem(&g).unwrap();
        assert_eq!(q, UniPoly::from_int_coeffs(&[-1, 1]));
        assert!(rem.is_zero());
        assert!(f.div_rem(&UniPoly::default()).is_none());

        let a = f.clone() * UniPoly::from_int_coeffs(&[3, 3]); // 3(s+1)^2 (s-1)
        let b = g.clone() * UniPoly::from_int_coeffs(&[0, 7]); // 7s(s+1)
        assert_eq!(UniPoly::gcd(&a, &b), g);
        assert_eq!(UniPoly::gcd(&UniPoly::default(), &b.scale(&r(2))), {
            // monic normalisation of b
            UniPoly::from_int_coeffs(&[0, 1, 1])
        });
        assert!(UniPoly::gcd(&UniPoly::default(), &UniPoly::default()).is_zero());
    }
}
