//! Small exact linear algebra: determinants over any commutative ring and
//! reduced row echelon / kernel computations over the rationals.
//!
//! Matrices here are tiny (determinants up to 6x6, kernels of a few hundred
//! columns), so clarity beats asymptotics: determinants expand by minors with
//! memoization on column subsets, elimination is plain fraction-exact
//! Gauss-Jordan.

use std::collections::HashMap;
use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Everything a minor expansion needs.  Blanket-implemented; holds for
/// `BigInt`, `BigRational`, `Complex64`, and the polynomial types in this
/// crate.
pub trait Ring: Clone + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {}
impl<T: Clone + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T>> Ring for T {}

/// Determinant by minor expansion along rows, memoized on the set of unused
/// columns.  `mat` must be square.
pub fn det<T: Ring>(mat: &[Vec<T>]) -> T {
    let n = mat.len();
    assert!(n <= 32, "minor expansion is for small matrices");
    assert!(mat.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        panic!("determinant of an empty matrix is not defined here");
    }
    let mut memo: HashMap<u32, T> = HashMap::new();
    det_rec(mat, (1u32 << n) - 1, &mut memo)
}

fn det_rec<T: Ring>(mat: &[Vec<T>], cols: u32, memo: &mut HashMap<u32, T>) -> T {
    let n = mat.len();
    let remaining = cols.count_ones() as usize;
    let row = n - remaining; // expand along this row
    if remaining == 1 {
        let j = cols.trailing_zeros() as usize;
        return mat[row][j].clone();
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = T::zero();
    let mut sign_pos = true;
    for j in 0..n {
        if cols & (1 << j) == 0 {
            continue;
        }
        if !mat[row][j].is_zero() {
            let minor = det_rec(mat, cols & !(1 << j), memo);
            let term = mat[row][j].clone() * minor;
            acc = if sign_pos { acc + term } else { acc - term };
        }
        sign_pos = !sign_pos;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// In-place Gauss-Jordan reduction; returns the pivot columns.
pub fn rref(mat: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        // prefer the entry of smallest magnitude... any nonzero works; take
        // the first to keep the reduction deterministic.
        let Some(pr) = (r..rows).find(|&i| !mat[i][c].is_zero()) else { continue };
        mat.swap(r, pr);
        let inv = mat[r][c].recip();
        for v in mat[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, pv) in row.iter_mut().zip(&pivot_row) {
                    *x -= pv * &f;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Canonical basis of the right kernel `{ v : mat v = 0 }`.  One basis vector
/// per free column, with a 1 in the free position; deterministic given the
/// input order.
pub fn nullspace(mat: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    if mat.is_empty() {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut work: Vec<Vec<BigRational>> = mat.to_vec();
    let pivots = rref(&mut work);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; cols];
        for &c in &pivots {
            s[c] = true;
        }
        s
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Kernel basis with the same convention as [`nullspace`] (a unit in each
/// free position), computed by integer-preserving elimination: rows are
/// cleared of denominators and stripped of content after every step, so the
/// per-operation rational gcd cost of Gauss-Jordan never appears.  Use this
/// for dense systems with more than a handful of columns.
pub fn nullspace_fraction_free(mat: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    use num_bigint::BigInt;
    if mat.is_empty() {
        return Vec::new();
    }
    let cols = mat[0].len();

    let strip = |row: &mut Vec<BigInt>| {
        let mut g = BigInt::zero();
        for x in row.iter() {
            g = num_integer::gcd(g, x.clone());
            if g.is_one() {
                return;
            }
        }
        if !g.is_zero() && !g.is_one() {
            for x in row.iter_mut() {
                *x = &*x / &g;
            }
        }
    };

    let mut rows: Vec<Vec<BigInt>> = mat
        .iter()
        .map(|row| {
            let mut lcm = BigInt::one();
            for x in row {
                lcm = num_integer::lcm(lcm, x.denom().clone());
            }
            let mut scaled: Vec<BigInt> =
                row.iter().map(|x| (x.numer() * &lcm) / x.denom()).collect();
            strip(&mut scaled);
            scaled
        })
        .collect();

    // Fraction-free row echelon form (Bareiss): the update
    // `a_ij <- (pivot a_ij - a_ic a_rj) / previous_pivot` divides exactly,
    // and keeps every entry the size of a minor of the input.
    let nrows = rows.len();
    let mut pivot_steps: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut prev_pivot = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pr);
        let pivot_row = rows[r].clone();
        let pivot = pivot_row[c].clone();
        for row in rows.iter_mut().skip(r + 1) {
            let factor = row[c].clone();
            for (x, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = (&*x * &pivot - pv * &factor) / &prev_pivot;
            }
        }
        prev_pivot = pivot;
        pivot_steps.push((r, c));
        r += 1;
    }

    // Back-substitute rationally, once per free column.
    let pivot_cols: Vec<usize> = pivot_steps.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for &(row, col) in pivot_steps.iter().rev() {
            if col > free {
                continue;
            }
            let mut acc = BigRational::zero();
            for j in col + 1..=free {
                if !rows[row][j].is_zero() && !v[j].is_zero() {
                    acc += BigRational::from(rows[row][j].clone()) * &v[j];
                }
            }
            v[col] = -acc / BigRational::from(rows[row][col].clone());
        }
        basis.push(v);
    }
    basis
}

/// Scales a rational vector to coprime integer entries with a positive
/// leading coefficient (projective normal form); no-op on the zero vector.
pub fn normalize_primitive(v: &mut [BigRational]) {
    use num_bigint::BigInt;
    let mut lcm = BigInt::one();
    for x in v.iter() {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let mut gcd = BigInt::zero();
    for x in v.iter() {
        gcd = num_integer::gcd(gcd, (x.numer() * &lcm) / x.denom());
    }
    if gcd.is_zero() {
        return;
    }
    let scale = BigRational::new(lcm, gcd);
    let mut seen_leading = false;
    let mut flip = false;
    for x in v.iter_mut() {
        *x *= &scale;
        if !seen_leading && !x.is_zero() {
            seen_leading = true;
            flip = x.is_negative();
        }
        if flip {
            *x = -x.clone();
        }
    }
}
