//! Dense real matrices: Householder orthonormalisation and a symmetric
//! eigenvalue solver (Householder tridiagonalisation + implicit QL).

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum LinalgError {
    #[error("expected {expected} entries for a {n}x{n} matrix, got {got}")]
    Shape {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("QL iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Row-major `n x n` matrix.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(LinalgError::Shape {
                n,
                expected: n * n,
                got: data.len(),
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for (l, &a) in self.row(i).iter().enumerate() {
                for (o, b) in out_row.iter_mut().zip(rhs.row(l)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        SquareMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, rhs: &SquareMatrix) -> f64 {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&rhs.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `max |a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i]).abs());
            }
        }
        worst
    }

    /// Replace with `(A + A^T) / 2`; the result is exactly symmetric.
    pub fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                let avg = 0.5 * (self.data[i * n + j] + self.data[j * n + i]);
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg;
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n.min(8) {
            writeln!(f, "  {:?}", &self.row(i)[..self.n.min(8)])?;
        }
        Ok(())
    }
}

/// Dot product with eight independent partial sums, combined in a fixed
/// order so results do not depend on the target's vector width.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 8];
    let mut ca = a.chunks_exact(8);
    let mut cb = b.chunks_exact(8);
    for (x, y) in (&mut ca).zip(&mut cb) {
        for l in 0..8 {
            acc[l] += x[l] * y[l];
        }
    }
    let mut tail = 0.0;
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        tail += x * y;
    }
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + tail
}

/// `y -= alpha * x`.
#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi -= alpha * xi;
    }
}

/// Householder vector for `x`: returns `(beta, alpha)` and overwrites `x`
/// with `v` such that `(I - beta v v^T) x = alpha e_1`. `alpha` carries the
/// sign opposite to `x[0]`, so no cancellation occurs in `v[0]`.
fn householder(x: &mut [f64]) -> (f64, f64) {
    let norm = dot(x, x).sqrt();
    if norm == 0.0 {
        return (0.0, 0.0);
    }
    let alpha = if x[0] >= 0.0 { -norm } else { norm };
    x[0] -= alpha;
    let vtv = dot(x, x);
    if vtv == 0.0 {
        return (0.0, alpha);
    }
    (2.0 / vtv, alpha)
}

/// Orthonormalises the `k` columns of a column-major `n x k` matrix by
/// Householder QR and returns the explicit `n x k` factor `Q` (column-major),
/// each column multiplied by the sign of the matching diagonal entry of `R`
/// so that `R` has a positive diagonal. The result depends only on the input
/// columns, so the first `j` columns of `Q` come from the first `j` input
/// columns alone.
pub fn orthonormalize_columns(n: usize, k: usize, mut a: Vec<f64>) -> Vec<f64> {
    assert!(
        k <= n && a.len() == n * k,
        "need an n x k matrix with k <= n"
    );
    let mut betas = vec![0.0; k];
    let mut signs = vec![1.0; k];
    for j in 0..k {
        let (head, tail) = a.split_at_mut((j + 1) * n);
        let v = &mut head[j * n + j..];
        let (beta, alpha) = householder(v);
        betas[j] = beta;
        signs[j] = if alpha < 0.0 { -1.0 } else { 1.0 };
        if beta == 0.0 {
            continue;
        }
        for col in tail.chunks_exact_mut(n) {
            let target = &mut col[j..];
            let s = beta * dot(v, target);
            axpy(s, v, target);
        }
    }
    // Backward accumulation of H_0 ... H_{k-1} applied to the first k
    // columns of the identity.
    let mut q = vec![0.0; n * k];
    for j in 0..k {
        q[j * n + j] = 1.0;
    }
    for j in (0..k).rev() {
        let beta = betas[j];
        if beta == 0.0 {
            continue;
        }
        let v = &a[j * n + j..(j + 1) * n];
        for col in q[j * n..].chunks_exact_mut(n) {
            let target = &mut col[j..];
            let s = beta * dot(v, target);
            axpy(s, v, target);
        }
    }
    for (col, sign) in q.chunks_exact_mut(n).zip(&signs) {
        if *sign < 0.0 {
            col.iter_mut().for_each(|x| *x = -*x);
        }
    }
    q
}

/// Symmetric tridiagonal matrix: `diag[i]` and `off[i]` coupling `i, i + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// Householder reduction `A = Q T Q^T` (only `T` is kept).
pub fn tridiagonalize(a: &SquareMatrix) -> Tridiagonal {
    let n = a.n;
    let mut m = a.data.clone();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut p = vec![0.0; n];
    for j in 0..n.saturating_sub(2) {
        let (upper, lower) = m.split_at_mut((j + 1) * n);
        let row_j = &mut upper[j * n..];
        diag[j] = row_j[j];
        let v = &mut row_j[j + 1..];
        let (beta, alpha) = householder(v);
        if beta == 0.0 {
            off[j] = if alpha == 0.0 { v[0] } else { alpha };
            continue;
        }
        off[j] = alpha;
        let v: &[f64] = v;
        let size = n - j - 1;
        // p = beta * B v, with B the trailing block (rows live in `lower`)
        for (i, pi) in p[..size].iter_mut().enumerate() {
            let row = &lower[i * n + j + 1..(i + 1) * n];
            *pi = beta * dot(row, v);
        }
        let k = 0.5 * beta * dot(&p[..size], v);
        for (pi, vi) in p[..size].iter_mut().zip(v) {
            *pi -= k * vi;
        }
        // B -= v w^T + w v^T with w = p
        for i in 0..size {
            let row = &mut lower[i * n + j + 1..(i + 1) * n];
            let (vi, wi) = (v[i], p[i]);
            for ((r, &vj), &wj) in row.iter_mut().zip(v).zip(&p[..size]) {
                *r -= vi * wj + wi * vj;
            }
        }
    }
    if n >= 2 {
        diag[n - 2] = m[(n - 2) * n + n - 2];
        diag[n - 1] = m[(n - 1) * n + n - 1];
        off[n - 2] = m[(n - 2) * n + n - 1];
    } else if n == 1 {
        diag[0] = m[0];
    }
    Tridiagonal { diag, off }
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL with
/// Wilkinson-type shifts, ascending. An off-diagonal entry is deflated when
/// `|e_i| <= 1e-14 (|d_i| + |d_{i+1}|)`; at most `30 n` sweeps in total.
pub fn tridiagonal_eigenvalues(t: &Tridiagonal) -> Result<Vec<f64>> {
    let n = t.diag.len();
    let mut d = t.diag.clone();
    let mut e = t.off.clone();
    e.push(0.0);
    let max_sweeps = 30 * n.max(1);
    let mut sweeps = 0;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= 1e-14 * scale || e[m].abs() <= f64::MIN_POSITIVE {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > max_sweeps {
                return Err(LinalgError::NoConvergence(max_sweeps));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// All eigenvalues of a symmetric matrix, ascending. The input is accepted
/// when `max |a_ij - a_ji| <= 1e-10 max(1, max |a_ij|)` and symmetrised
/// before reduction.
pub fn symmetric_eigenvalues(a: &SquareMatrix) -> Result<Vec<f64>> {
    if a.data.iter().any(|x| !x.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    let asym = a.asymmetry();
    if asym > 1e-10 * a.max_abs().max(1.0) {
        return Err(LinalgError::NotSymmetric(asym));
    }
    if asym == 0.0 {
        return tridiagonal_eigenvalues(&tridiagonalize(a));
    }
    let mut sym = a.clone();
    sym.symmetrize();
    tridiagonal_eigenvalues(&tridiagonalize(&sym))
}
