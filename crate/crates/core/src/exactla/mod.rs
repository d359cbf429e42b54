//! Exact rational linear algebra.
//!
//! Two engines live here. [`RationalMatrix`] is a dense row-major matrix used
//! for the small quotient-coordinate computations (everything of size at most
//! a few dozen). [`EchelonBasis`] is an incremental sparse row echelon form
//! used for the large graded pieces of the form complexes. Both use
//! deterministic pivoting: the first nonzero entry in canonical column order.

mod sparse;

pub use sparse::{EchelonBasis, Reduction, SparseVec};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`. Panics on a zero denominator.
pub fn qf(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from integer rows. All rows must have equal length.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged integer rows");
            data.extend(row.iter().map(|&x| q(x)));
        }
        RationalMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RationalMatrix {
            rows: r,
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Reduced row echelon form together with the pivot columns.
    ///
    /// Pivot rows are chosen as the first row (top to bottom) with a nonzero
    /// entry in the current column.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] *= &inv;
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let t = &factor * &m[(r, j)];
                        m[(i, j)] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column, in
    /// increasing free-column order.
    pub fn kernel_basis(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                let x = &r[(i, free)];
                if !x.is_zero() {
                    v[p] = -x;
                }
            }
            basis.push(v);
        }
        Subspace::from_independent(self.cols, basis)
    }

    /// Some `x` with `self * x = b`, or `None` when the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let bcol = RationalMatrix {
            rows: self.rows,
            cols: 1,
            data: b.to_vec(),
        };
        let (r, pivots) = self.hcat(&bcol)?.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Ok(Some(x))
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// A linear subspace of `Q^ambient_dim` given by linearly independent
/// basis columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RationalMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RationalMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RationalMatrix::identity(ambient_dim),
        }
    }

    fn from_independent(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Self {
        let basis = RationalMatrix::from_columns(&vectors, ambient_dim)
            .expect("basis vectors have the ambient dimension");
        Subspace { ambient_dim, basis }
    }

    /// Span of arbitrary vectors. Keeps, in order, each vector that is
    /// independent of the ones kept before it.
    pub fn spanned_by(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        let mut ech = EchelonBasis::new(ambient_dim);
        let mut kept = Vec::new();
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
            if ech.insert(SparseVec::from_dense(v)).is_some() {
                kept.push(v.clone());
            }
        }
        Ok(Self::from_independent(ambient_dim, kept))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.columns()
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        self.basis.solve(v)
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::spanned_by(self.ambient_dim, &vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let a = self.dim();
        let mut neg_b = other.basis.clone();
        for x in neg_b.data.iter_mut() {
            *x = -x.clone();
        }
        let ker = self.basis.hcat(&neg_b)?.kernel_basis();
        let vectors: Vec<Vec<Rational>> = ker
            .basis_vectors()
            .into_iter()
            .map(|kv| self.basis.mul_vec(&kv[..a]).expect("shapes agree"))
            .collect();
        Subspace::spanned_by(self.ambient_dim, &vectors)
    }

    /// Preimage `{v : map * v ∈ self}` of this subspace under `map`.
    pub fn preimage(&self, map: &RationalMatrix) -> Result<Subspace> {
        if map.rows() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: map.rows(),
            });
        }
        let n = map.cols();
        let mut neg = self.basis.clone();
        for x in neg.data.iter_mut() {
            *x = -x.clone();
        }
        let ker = map.hcat(&neg)?.kernel_basis();
        let vectors: Vec<Vec<Rational>> = ker
            .basis_vectors()
            .into_iter()
            .map(|kv| kv[..n].to_vec())
            .collect();
        Subspace::spanned_by(n, &vectors)
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }
}

pub fn rank(m: &RationalMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &RationalMatrix) -> Subspace {
    m.kernel_basis()
}

pub fn solve(m: &RationalMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    m.solve(b)
}

pub fn membership(v: &[Rational], s: &Subspace) -> Result<bool> {
    s.contains(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RationalMatrix::identity(3)), 3);
        assert_eq!(rank(&RationalMatrix::zeros(2, 2)), 0);
        assert_eq!(rank(&RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]));
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&qv(&[2, -1])).unwrap());
        assert_eq!(kernel_basis(&RationalMatrix::identity(4)).dim(), 0);
        let k = kernel_basis(&RationalMatrix::from_i64_rows(&[&[1, 1, 1]]));
        assert_eq!(k.dim(), 2);
    }

    #[test]
    fn solve_examples() {
        let b = qv(&[3, -7, 1]);
        assert_eq!(solve(&RationalMatrix::identity(3), &b).unwrap(), Some(b));
        let m = RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&m, &qv(&[1, 3])).unwrap(), None);
        let m = RationalMatrix::from_i64_rows(&[&[1, 1]]);
        let x = solve(&m, &qv(&[2])).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), qv(&[2]));
        assert!(matches!(
            solve(&m, &qv(&[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let s = Subspace::spanned_by(2, &[qv(&[0, 1])]).unwrap();
        assert!(membership(&qv(&[0, 0]), &s).unwrap());
        assert!(!membership(&qv(&[1, 0]), &s).unwrap());
        let s = Subspace::spanned_by(3, &[qv(&[1, 2, 3]), qv(&[0, 1, 1])]).unwrap();
        for v in s.basis_vectors() {
            assert!(membership(&v, &s).unwrap());
        }
        assert!(membership(&qv(&[1]), &s).is_err());
    }

    #[test]
    fn intersection_and_preimage() {
        let a = Subspace::spanned_by(3, &[qv(&[1, 0, 0]), qv(&[0, 1, 0])]).unwrap();
        let b = Subspace::spanned_by(3, &[qv(&[0, 1, 0]), qv(&[0, 0, 1])]).unwrap();
        let i = a.intersection(&b).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&qv(&[0, 5, 0])).unwrap());
        assert_eq!(a.sum(&b).unwrap().dim(), 3);
        // x -> (x0 + x1, 0, 0) maps into span(e0) everywhere.
        let m = RationalMatrix::from_i64_rows(&[&[1, 1], &[0, 0], &[0, 0]]);
        let pre = Subspace::spanned_by(3, &[qv(&[1, 0, 0])])
            .unwrap()
            .preimage(&m)
            .unwrap();
        assert_eq!(pre.dim(), 2);
        let pre = Subspace::zero(3).preimage(&m).unwrap();
        assert_eq!(pre.dim(), 1);
    }
}
