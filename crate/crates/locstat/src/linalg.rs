//! Dense matrix support: symmetric eigensolvers (cyclic Jacobi for full
//! decompositions, Lanczos for extreme eigenvalues of large operators),
//! LU determinants/solves, and power iteration.
//!
//! Everything here is self-contained; the matrices this crate works with are
//! desk-scale (n up to a few thousand), so simplicity and testability win
//! over tuned BLAS.

use crate::error::{Error, Result};

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    /// All-ones matrix.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![1.0; rows * cols] }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&mut self, a: f64) {
        for x in &mut self.data {
            *x *= a;
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Mat, a: f64) {
        assert_eq!(self.data.len(), other.data.len());
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
    }

    /// Frobenius inner product `tr(self^T other)`.
    pub fn dot(&self, other: &Mat) -> f64 {
        assert_eq!(self.data.len(), other.data.len());
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn trace(&self) -> f64 {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self[(i, i)]).sum()
    }

    /// `self * v` for a vector `v`.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }

    /// Dense product `self * other`.
    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        // i-k-j order keeps the inner loop contiguous.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let out_row = out.row_mut(i);
                for j in 0..other.cols {
                    out_row[j] += a * orow[j];
                }
            }
        }
        out
    }

    pub fn symmetrize(&mut self) {
        assert_eq!(self.rows, self.cols);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let m = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = m;
                self[(j, i)] = m;
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors in the columns of
/// the returned matrix, sorted by descending eigenvalue. Sweeps run until the
/// off-diagonal Frobenius norm falls below `1e-10` times the matrix scale.
pub fn jacobi_eigen(a: &Mat) -> Result<(Vec<f64>, Mat)> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    let mut v = Mat::identity(n);
    let scale = m.max_abs().max(1e-300);
    let tol = 1e-10 * scale;
    let max_sweeps = 50;

    for _ in 0..max_sweeps {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        if off.sqrt() <= tol {
            let mut pairs: Vec<(f64, usize)> =
                (0..n).map(|i| (m[(i, i)], i)).collect();
            pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
            let eigs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let mut vecs = Mat::zeros(n, n);
            for (col, &(_, src)) in pairs.iter().enumerate() {
                for r in 0..n {
                    vecs[(r, col)] = v[(r, src)];
                }
            }
            return Ok((eigs, vecs));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= tol / (n as f64) {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::Numerical(
        "jacobi eigensolver did not converge within 50 sweeps".into(),
    ))
}

/// A symmetric linear operator given by its action on a vector.
pub trait SymOp {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[f64], out: &mut [f64]);
}

impl SymOp for Mat {
    fn dim(&self) -> usize {
        self.rows
    }
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.matvec(v));
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Extreme eigenvalues `(lambda_min, lambda_max)` of a symmetric operator via
/// Lanczos with full reorthogonalization.
///
/// Ritz values of the tridiagonal matrix always lie inside the true spectrum,
/// so `lambda_min` is reported from above and `lambda_max` from below; with
/// the iteration counts used here the extreme Ritz values are converged far
/// beyond the tolerances this crate tests at.
pub fn lanczos_extremes<O: SymOp>(op: &O, max_iter: usize, seed: u64) -> Result<(f64, f64)> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::Numerical("lanczos on empty operator".into()));
    }
    let steps = max_iter.min(n);
    // Deterministic pseudo-random start vector.
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut q = vec![0.0f64; n];
    for x in q.iter_mut() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        *x = (state as f64 / u64::MAX as f64) - 0.5;
    }
    let nq = norm(&q);
    for x in q.iter_mut() {
        *x /= nq;
    }

    let mut basis: Vec<Vec<f64>> = vec![q.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0f64; n];

    for j in 0..steps {
        op.apply(&basis[j], &mut w);
        let alpha = dot(&w, &basis[j]);
        alphas.push(alpha);
        for (wi, qi) in w.iter_mut().zip(&basis[j]) {
            *wi -= alpha * qi;
        }
        if j > 0 {
            let beta_prev = betas[j - 1];
            for (wi, qi) in w.iter_mut().zip(&basis[j - 1]) {
                *wi -= beta_prev * qi;
            }
        }
        // Full reorthogonalization keeps the Ritz values honest.
        for b in &basis {
            let c = dot(&w, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
        let beta = norm(&w);
        if beta < 1e-13 || j + 1 == steps {
            break;
        }
        betas.push(beta);
        let next: Vec<f64> = w.iter().map(|x| x / beta).collect();
        basis.push(next);
    }

    let k = alphas.len();
    let mut tri = Mat::zeros(k, k);
    for i in 0..k {
        tri[(i, i)] = alphas[i];
        if i + 1 < k {
            tri[(i, i + 1)] = betas[i];
            tri[(i + 1, i)] = betas[i];
        }
    }
    let (eigs, _) = jacobi_eigen(&tri)?;
    let max = *eigs.first().ok_or_else(|| Error::Numerical("empty lanczos tridiagonal".into()))?;
    let min = *eigs.last().unwrap();
    Ok((min, max))
}

/// Largest-magnitude eigenvalue estimate of a symmetric operator by power
/// iteration. Converges from below; returns the signed Rayleigh quotient at
/// the final iterate together with its magnitude.
pub fn power_iteration<O: SymOp>(
    op: &O,
    max_iter: usize,
    tol: f64,
    seed: u64,
) -> Result<(f64, f64)> {
    let n = op.dim();
    let mut state = seed.wrapping_mul(0x2545f4914f6cdd1d).wrapping_add(7);
    let mut v = vec![0.0f64; n];
    for x in v.iter_mut() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        *x = (state as f64 / u64::MAX as f64) - 0.5;
    }
    let nv = norm(&v);
    for x in v.iter_mut() {
        *x /= nv;
    }
    let mut w = vec![0.0f64; n];
    let mut last = 0.0;
    for it in 0..max_iter {
        op.apply(&v, &mut w);
        let growth = norm(&w);
        if growth < 1e-300 {
            return Ok((0.0, 0.0));
        }
        let rayleigh = dot(&w, &v);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / growth;
        }
        if it > 4 && (growth - last).abs() <= tol * growth.max(1.0) {
            return Ok((rayleigh, growth));
        }
        last = growth;
    }
    let rayleigh = {
        op.apply(&v, &mut w);
        dot(&w, &v)
    };
    Ok((rayleigh, last))
}

/// LU decomposition with partial pivoting; returns the determinant.
pub fn lu_det(a: &Mat) -> Result<f64> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    let mut det = 1.0f64;
    for col in 0..n {
        let mut piv = col;
        let mut best = m[(col, col)].abs();
        for r in (col + 1)..n {
            if m[(r, col)].abs() > best {
                best = m[(r, col)].abs();
                piv = r;
            }
        }
        if best == 0.0 {
            return Ok(0.0);
        }
        if piv != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(piv, j)];
                m[(piv, j)] = tmp;
            }
            det = -det;
        }
        det *= m[(col, col)];
        let inv = 1.0 / m[(col, col)];
        for r in (col + 1)..n {
            let f = m[(r, col)] * inv;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                m[(r, j)] -= f * m[(col, j)];
            }
        }
    }
    Ok(det)
}

/// Solve `a x = b` for square `a` by Gaussian elimination with partial
/// pivoting; `b` holds one right-hand side per column.
pub fn lu_solve(a: &Mat, b: &Mat) -> Result<Mat> {
    assert_eq!(a.rows, a.cols);
    assert_eq!(a.rows, b.rows);
    let n = a.rows;
    let k = b.cols;
    let mut m = a.clone();
    let mut rhs = b.clone();
    for col in 0..n {
        let mut piv = col;
        let mut best = m[(col, col)].abs();
        for r in (col + 1)..n {
            if m[(r, col)].abs() > best {
                best = m[(r, col)].abs();
                piv = r;
            }
        }
        if best < 1e-300 {
            return Err(Error::Numerical("singular matrix in lu_solve".into()));
        }
        if piv != col {
            for j in 0..n {
                m.data.swap(col * n + j, piv * n + j);
            }
            for j in 0..k {
                rhs.data.swap(col * k + j, piv * k + j);
            }
        }
        let inv = 1.0 / m[(col, col)];
        for r in (col + 1)..n {
            let f = m[(r, col)] * inv;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                m[(r, j)] -= f * m[(col, j)];
            }
            for j in 0..k {
                rhs[(r, j)] -= f * rhs[(col, j)];
            }
        }
    }
    let mut x = Mat::zeros(n, k);
    for j in 0..k {
        for r in (0..n).rev() {
            let mut acc = rhs[(r, j)];
            for c in (r + 1)..n {
                acc -= m[(r, c)] * x[(c, j)];
            }
            x[(r, j)] = acc / m[(r, r)];
        }
    }
    Ok(x)
}

/// Inverse of a small square matrix.
pub fn inverse(a: &Mat) -> Result<Mat> {
    lu_solve(a, &Mat::identity(a.rows))
}
