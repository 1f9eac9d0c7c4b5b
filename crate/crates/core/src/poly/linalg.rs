//! Exact rational matrices, fraction-free integer elimination, and a
//! complete-pivoting numeric kernel for multiprecision complex matrices.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::complex::{ComplexMP, Float};
use super::rational::Rational;
use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
    }

    pub fn from_cols(cols: &[Vec<Rational>]) -> Self {
        Self::from_rows(cols.to_vec()).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i)).collect()
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

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows);
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let prod = a * &o[(k, j)];
                    m[(i, j)] += prod;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| (0..self.cols).fold(Rational::zero(), |acc, j| acc + &self[(i, j)] * &v[j])).collect()
    }

    /// `vᵀ M`.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.rows, v.len());
        (0..self.cols).map(|j| (0..self.rows).fold(Rational::zero(), |acc, i| acc + &v[i] * &self[(i, j)])).collect()
    }

    pub fn add(&self, o: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
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
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let d = &f * &m[(r, j)];
                        m[(i, j)] -= d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Basis of `{y : yᵀ M = 0}`.
    pub fn left_nullspace(&self) -> Vec<Vec<Rational>> {
        self.transpose().nullspace()
    }

    /// Nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        (0..pivots.len()).map(|i| r.row(i)).collect()
    }

    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            let inv = piv.recip();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let d = &f * &m[(c, j)];
                    m[(i, j)] -= d;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DependentBasis);
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// One solution of `M x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn to_complex(&self, prec: usize) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|q| ComplexMP::from_rational(q, prec)).collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant of an integer matrix by Bareiss fraction-free elimination.
/// Row updates below the pivot run through [`par::for_each_mut`].
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>, exec: Exec) -> Result<BigInt> {
    let n = m.len();
    if let Some(bad) = m.iter().find(|r| r.len() != n) {
        return Err(Error::NonSquare { rows: n, cols: bad.len() });
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        let prev_ref = &prev;
        par::for_each_mut(exec, rest, |_, row| {
            let f = row[k].clone();
            for j in k + 1..n {
                let v = pivot * &row[j] - &f * &pivot_row[j];
                row[j] = v / prev_ref;
            }
            row[k] = BigInt::zero();
        });
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

/// Clears denominators row by row and returns the integer matrix plus the
/// product of the row multipliers, so `det(M) = det(int) / multiplier`.
pub fn integerize(m: &QMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut mult = BigInt::one();
    let rows = (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let den = super::rational::common_denominator(row.iter());
            mult *= &den;
            row.iter().map(|q| (q * Rational::from_integer(den.clone())).to_integer()).collect()
        })
        .collect();
    (rows, mult)
}

/// Exact determinant through Bareiss on the integerized matrix.
pub fn det_fraction_free(m: &QMatrix, exec: Exec) -> Result<Rational> {
    if m.rows != m.cols {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let (ints, mult) = integerize(m);
    Ok(Rational::new(bareiss_det(ints, exec)?, mult))
}

/// Dense row-major multiprecision complex matrix.
#[derive(Clone, Debug)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexMP>,
}

impl CMatrix {
    pub fn from_rows(rows: Vec<Vec<ComplexMP>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        CMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        CMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn to_rows(&self) -> Vec<Vec<ComplexMP>> {
        self.data.chunks(self.cols.max(1)).map(<[ComplexMP]>::to_vec).collect()
    }

    pub fn mul_vec(&self, v: &[ComplexMP]) -> Vec<ComplexMP> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = &self[(i, 0)] * &v[0];
                for j in 1..self.cols {
                    acc = &acc + &(&self[(i, j)] * &v[j]);
                }
                acc
            })
            .collect()
    }

    /// Elimination with complete pivoting. Returns `(rank, nullspace basis,
    /// smallest rejected pivot modulus relative to the largest entry)`. Pivots
    /// below `tol` times the largest entry count as zero.
    pub fn nullspace_with_tol(&self, tol: &Float) -> (usize, Vec<Vec<ComplexMP>>, Float) {
        let mut m = self.clone();
        let (r, c) = (m.rows, m.cols);
        let mut colperm: Vec<usize> = (0..c).collect();
        let scale = m.data.iter().map(|z| z.abs()).fold(None::<Float>, |acc, a| match acc {
            Some(b) if b >= a => Some(b),
            _ => Some(a),
        });
        let prec = m.data.iter().map(ComplexMP::precision).max().unwrap_or(super::complex::MIN_PRECISION);
        let zero = super::complex::float_zero(prec);
        let scale = scale.unwrap_or_else(|| zero.clone());
        let threshold = &scale * tol;
        let mut rank = 0;
        let mut rejected = zero.clone();
        while rank < r.min(c) {
            let mut best = (rank, rank);
            let mut best_abs = zero.clone();
            for i in rank..r {
                for j in rank..c {
                    let a = m[(i, j)].abs();
                    if a > best_abs {
                        best_abs = a;
                        best = (i, j);
                    }
                }
            }
            if best_abs <= threshold || best_abs == zero {
                rejected = if scale == zero { zero.clone() } else { best_abs / &scale };
                break;
            }
            let (pi, pj) = best;
            m.swap_rows(rank, pi);
            m.swap_cols(rank, pj);
            colperm.swap(rank, pj);
            let inv = m[(rank, rank)].inv();
            for j in rank..c {
                let v = &m[(rank, j)] * &inv;
                m[(rank, j)] = v;
            }
            for i in 0..r {
                if i == rank {
                    continue;
                }
                let f = m[(i, rank)].clone();
                if f.is_exact_zero() {
                    continue;
                }
                for j in rank..c {
                    let d = &f * &m[(rank, j)];
                    let v = &m[(i, j)] - &d;
                    m[(i, j)] = v;
                }
            }
            rank += 1;
        }
        let mut basis = Vec::new();
        for f in rank..c {
            let mut v = vec![ComplexMP::zero(prec); c];
            v[colperm[f]] = ComplexMP::one(prec);
            for i in 0..rank {
                v[colperm[i]] = -m[(i, f)].clone();
            }
            basis.push(v);
        }
        (rank, basis, rejected)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = ComplexMP;
    fn index(&self, (i, j): (usize, usize)) -> &ComplexMP {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexMP {
        &mut self.data[i * self.cols + j]
    }
}

/// Cross product of two vectors in a 3-dimensional space (exact).
pub fn cross3(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

pub fn cross3_c(a: &[ComplexMP], b: &[ComplexMP]) -> Vec<ComplexMP> {
    vec![&(&a[1] * &b[2]) - &(&a[2] * &b[1]), &(&a[2] * &b[0]) - &(&a[0] * &b[2]), &(&a[0] * &b[1]) - &(&a[1] * &b[0])]
}

/// Whether every entry is zero.
pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Largest absolute entry as f64, handy in diagnostics.
pub fn max_abs_f64(v: &[Rational]) -> f64 {
    use num_traits::ToPrimitive;
    v.iter().map(|q| q.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::complex::pow2;
    use crate::poly::rational::{int, rat};

    #[test]
    fn rank_nullspace_det() {
        let m = QMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vec(&m.mul_vec(&ns[0])));
        assert_eq!(m.det().unwrap(), int(0));
        let a = QMatrix::from_i64(&[&[2, -1, 0], &[1, 3, 5], &[0, 4, -2]]);
        assert_eq!(a.det().unwrap(), int(-54));
        assert_eq!(a.mul(&a.inverse().unwrap()), QMatrix::identity(3));
    }

    #[test]
    fn bareiss_matches_gauss() {
        let a = QMatrix::from_rows(vec![
            vec![rat(1, 2), int(3), int(-1), int(4)],
            vec![int(2), rat(-5, 3), int(0), int(1)],
            vec![int(0), int(1), rat(7, 4), int(-2)],
            vec![int(3), int(0), int(2), int(5)],
        ]);
        let g = a.det().unwrap();
        assert_eq!(det_fraction_free(&a, Exec::Sequential).unwrap(), g);
        assert_eq!(det_fraction_free(&a, Exec::Parallel).unwrap(), g);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = QMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(m.solve(&[int(1), int(3)]).is_none());
        let x = m.solve(&[int(1), int(2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![int(1), int(2)]);
    }

    #[test]
    fn numeric_nullspace() {
        let m = QMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).to_complex(256);
        let (rank, ns, _) = m.nullspace_with_tol(&pow2(-200, 256));
        assert_eq!(rank, 2);
        let r = m.mul_vec(&ns[0]);
        assert!(r.iter().all(|z| z.abs() < pow2(-220, 256)));
    }
}
