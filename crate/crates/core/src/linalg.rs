//! Small exact linear algebra over the rationals, used for dominance-order
//! tests, Gram matrices of weight pairings, and solving for quantization
//! matrices. Sizes here are tiny, so plain Gaussian elimination is fine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Dense rational matrix, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rat>,
}

impl RatMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                *m.at_mut(i, j) = rat(*v);
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.at(i, k).is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = self.at(i, k) * other.at(k, j);
                    *out.at_mut(i, j) += v;
                }
            }
        }
        out
    }

    /// Inverse, if the matrix is square and nonsingular.
    pub fn inverse(&self) -> Option<RatMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                    inv.data.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a.at(col, col).clone();
            for j in 0..n {
                *a.at_mut(col, j) /= p.clone();
                *inv.at_mut(col, j) /= p.clone();
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for j in 0..n {
                    let va = a.at(col, j).clone();
                    let vi = inv.at(col, j).clone();
                    *a.at_mut(r, j) -= &f * va;
                    *inv.at_mut(r, j) -= &f * vi;
                }
            }
        }
        Some(inv)
    }
}

/// Solve `A x = b` exactly. Returns `None` when the system is inconsistent.
/// When the system is underdetermined, free variables are set to zero.
pub fn solve(a: &RatMat, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows, b.len());
    let rows = a.rows;
    let cols = a.cols;
    let mut m = RatMat::zero(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            *m.at_mut(i, j) = a.at(i, j).clone();
        }
        *m.at_mut(i, cols) = b[i].clone();
    }
    let mut pivot_col_of_row = vec![usize::MAX; rows];
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m.at(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..=cols {
                m.data.swap(row * (cols + 1) + j, p * (cols + 1) + j);
            }
        }
        let pv = m.at(row, col).clone();
        for j in col..=cols {
            *m.at_mut(row, j) /= pv.clone();
        }
        for r in 0..rows {
            if r == row || m.at(r, col).is_zero() {
                continue;
            }
            let f = m.at(r, col).clone();
            for j in col..=cols {
                let v = m.at(row, j).clone();
                *m.at_mut(r, j) -= &f * v;
            }
        }
        pivot_col_of_row[row] = col;
        row += 1;
        if row == rows {
            break;
        }
    }
    // inconsistency: a zero row with nonzero rhs
    for r in row..rows {
        if !m.at(r, cols).is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for r in 0..row {
        x[pivot_col_of_row[r]] = m.at(r, cols).clone();
    }
    Some(x)
}

/// Integer value of a rational, if it is integral and fits in `i64`.
pub fn as_i64(r: &Rat) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    let n = r.to_integer();
    i64::try_from(&n).ok()
}

/// Least common multiple of the denominators of a slice of rationals.
pub fn common_denominator(vals: &[Rat]) -> BigInt {
    let mut l = BigInt::one();
    for v in vals {
        l = num_integer::lcm(l, v.denom().abs());
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_unique() {
        let a = RatMat::from_int_rows(&[vec![2, 1], vec![1, -1]]);
        let b = vec![rat(5), vec![rat(1)][0].clone()];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = RatMat::from_int_rows(&[vec![1, 1], vec![2, 2]]);
        assert!(solve(&a, &[rat(1), rat(3)]).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = RatMat::from_int_rows(&[vec![2, -1], vec![-1, 2]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMat::identity(2));
    }
}
