//! Dense row-major complex matrices and the Hermitian eigensolver every
//! matrix function routes through.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Eigenvalues of Hermitian inputs in `[-CLAMP_TOL, 0)` are treated as zero
/// by the PSD matrix functions.
pub const CLAMP_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// `|psi><psi|` for a column vector given as a slice.
    pub fn outer(psi: &[C64]) -> Self {
        let n = psi.len();
        Self::from_fn(n, n, |r, c| psi[r] * psi[c].conj())
    }

    /// Projector onto a computational basis vector.
    pub fn basis_projector(dim: usize, index: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m[(index, index)] = ONE;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_c(C64::new(s, 0.0))
    }

    pub fn scale_c(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `Tr[self * other]` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.cols, other.rows);
        debug_assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self[(r1, c1)];
                if a == ZERO {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        out[(r1 * other.rows + r2, c1 * other.cols + c2)] = a * other[(r2, c2)];
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation `|M - M^dagger|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5)
    }

    /// Eigendecomposition of the Hermitian part of `self` by cyclic complex
    /// Jacobi rotations. Eigenvalues ascend; eigenvectors are the columns.
    pub fn eigh(&self) -> HermitianEigen {
        assert!(self.is_square(), "eigh needs a square matrix");
        let n = self.rows;
        let mut a = self.hermitian_part();
        let mut v = Self::identity(n);
        for _sweep in 0..100 {
            let mut off = 0.0;
            let mut diag = 0.0;
            for p in 0..n {
                diag += a[(p, p)].norm_sqr();
                for q in (p + 1)..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off <= 1e-32 * diag || off < 1e-300 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let r = apq.norm();
                    if r < 1e-300 {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let phase_conj = (apq / r).conj();
                    let zeta = (aqq - app) / (2.0 * r);
                    let t = if zeta == 0.0 {
                        1.0
                    } else {
                        zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // a <- a G, with G[:,p] = c e_p - s e^{-i phi} e_q,
                    // G[:,q] = s e_p + c e^{-i phi} e_q
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)] * phase_conj;
                        a[(k, p)] = akp * c - akq * s;
                        a[(k, q)] = akp * s + akq * c;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)] * phase_conj.conj();
                        a[(p, k)] = apk * c - aqk * s;
                        a[(q, k)] = apk * s + aqk * c;
                    }
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)] * phase_conj;
                        v[(k, p)] = vkp * c - vkq * s;
                        v[(k, q)] = vkp * s + vkq * c;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
        let values = order.iter().map(|&i| a[(i, i)].re).collect();
        let vectors = Self::from_fn(n, n, |r, c| v[(r, order[c])]);
        HermitianEigen { values, vectors }
    }

    pub fn eigenvalues_hermitian(&self) -> Vec<f64> {
        self.eigh().values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigh().values.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigh().values.last().copied().unwrap_or(0.0)
    }

    /// `V f(Lambda) V^dagger` for the Hermitian part of `self`.
    pub fn map_hermitian(&self, f: impl Fn(f64) -> f64) -> Self {
        self.eigh().reconstruct_with(f)
    }

    /// Principal square root of a PSD matrix, clamping slightly negative
    /// eigenvalues to zero.
    pub fn sqrt_psd(&self) -> Self {
        self.map_hermitian(|x| x.max(0.0).sqrt())
    }

    /// Schatten 1-norm `Tr sqrt(M^dagger M)`.
    pub fn schatten1(&self) -> f64 {
        if self.is_square() && self.is_hermitian(1e-13 * (1.0 + self.max_abs())) {
            return self.eigh().values.iter().map(|x| x.abs()).sum();
        }
        let g = &self.adjoint() * self;
        g.eigh().values.iter().map(|x| x.max(0.0).sqrt()).sum()
    }

    /// Normalised trace norm `||M||_Tr = ||M||_1 / 2`.
    pub fn trace_norm(&self) -> f64 {
        0.5 * self.schatten1()
    }

    /// Lower-triangular `L` with `L L^dagger = self`, or `None` when the
    /// Hermitian part is not positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        let n = self.rows;
        let mut l = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if d.is_nan() || d <= 0.0 {
                return None;
            }
            let d = d.sqrt();
            l[(j, j)] = C64::new(d, 0.0);
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / d;
            }
        }
        Some(l)
    }

    /// Inverse of a lower-triangular matrix.
    pub fn lower_triangular_inverse(&self) -> Self {
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        for j in 0..n {
            inv[(j, j)] = ONE / self[(j, j)];
            for i in (j + 1)..n {
                let mut s = ZERO;
                for k in j..i {
                    s += self[(i, k)] * inv[(k, j)];
                }
                inv[(i, j)] = -s / self[(i, i)];
            }
        }
        inv
    }

    /// Inverse of a Hermitian positive definite matrix.
    pub fn inverse_hpd(&self) -> Option<Self> {
        let l = self.cholesky()?;
        let linv = l.lower_triangular_inverse();
        Some(&linv.adjoint() * &linv)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let row = &self.data[r * self.cols..(r + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `<u| self |v>`.
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let w = self.apply(v);
        u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}

/// Result of [`ComplexMatrix::eigh`].
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in fv.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let a = v[(r, k)] * w;
                for c in 0..n {
                    out[(r, c)] += a * v[(c, k)].conj();
                }
            }
        }
        out
    }

    /// Projector onto the span of eigenvectors whose eigenvalue passes `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> ComplexMatrix {
        self.reconstruct_with(|x| if keep(x) { 1.0 } else { 0.0 })
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Flat offsets of every multi-index over the subsystems in `which`.
fn offsets(dims: &[usize], which: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut out = vec![0usize];
    for &s in which {
        let mut next = Vec::with_capacity(out.len() * dims[s]);
        for &o in &out {
            for d in 0..dims[s] {
                next.push(o + d * st[s]);
            }
        }
        out = next;
    }
    out
}

fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{} does not match subsystem dims {:?}",
            m.rows(),
            m.cols(),
            dims
        )));
    }
    Ok(())
}

/// Partial trace keeping the subsystems in `keep` (sorted, deduplicated).
/// Returns the marginal and its dimension profile.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<(ComplexMatrix, Vec<usize>)> {
    check_dims(m, dims)?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::SubsystemOutOfRange {
            index: bad,
            count: dims.len(),
        });
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let ko = offsets(dims, &keep);
    let to = offsets(dims, &traced);
    let n = ko.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (a, &ka) in ko.iter().enumerate() {
        for (b, &kb) in ko.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &to {
                acc += m[(ka + t, kb + t)];
            }
            out[(a, b)] = acc;
        }
    }
    let kept_dims = keep.iter().map(|&k| dims[k]).collect();
    Ok((out, kept_dims))
}

/// Reorders tensor factors: new subsystem `i` is old subsystem `perm[i]`.
pub fn permute_subsystems(m: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "permutation {perm:?} for {} subsystems",
            dims.len()
        )));
    }
    for &p in perm {
        if p >= dims.len() || seen[p] {
            return Err(Error::DimensionMismatch(format!("invalid permutation {perm:?}")));
        }
        seen[p] = true;
    }
    let map = offsets(dims, perm);
    let n = map.len();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| m[(map[r], map[c])]))
}

fn split_around(dims: &[usize], k: usize) -> (usize, usize, usize) {
    let left: usize = dims[..k].iter().product();
    let right: usize = dims[k + 1..].iter().product();
    (left, dims[k], right)
}

/// `(I ⊗ op ⊗ I) m` with `op` acting on subsystem `k`.
pub fn apply_left_on(m: &ComplexMatrix, dims: &[usize], k: usize, op: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    if k >= dims.len() {
        return Err(Error::SubsystemOutOfRange {
            index: k,
            count: dims.len(),
        });
    }
    let (left, dk, right) = split_around(dims, k);
    if op.rows() != dk || op.cols() != dk {
        return Err(Error::DimensionMismatch(format!(
            "operator of size {} on subsystem of dim {dk}",
            op.rows()
        )));
    }
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for l in 0..left {
        for t in 0..right {
            for a in 0..dk {
                let row_out = (l * dk + a) * right + t;
                for b in 0..dk {
                    let w = op[(a, b)];
                    if w == ZERO {
                        continue;
                    }
                    let row_in = (l * dk + b) * right + t;
                    for c in 0..n {
                        out[(row_out, c)] += w * m[(row_in, c)];
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `m (I ⊗ op ⊗ I)` with `op` acting on subsystem `k`.
pub fn apply_right_on(m: &ComplexMatrix, dims: &[usize], k: usize, op: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    if k >= dims.len() {
        return Err(Error::SubsystemOutOfRange {
            index: k,
            count: dims.len(),
        });
    }
    let (left, dk, right) = split_around(dims, k);
    if op.rows() != dk || op.cols() != dk {
        return Err(Error::DimensionMismatch(format!(
            "operator of size {} on subsystem of dim {dk}",
            op.rows()
        )));
    }
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for l in 0..left {
            for t in 0..right {
                for b in 0..dk {
                    let x = m[(r, (l * dk + b) * right + t)];
                    if x == ZERO {
                        continue;
                    }
                    for a in 0..dk {
                        out[(r, (l * dk + a) * right + t)] += x * op[(b, a)];
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `(I ⊗ U ⊗ I) m (I ⊗ U ⊗ I)^dagger`.
pub fn conjugate_on(m: &ComplexMatrix, dims: &[usize], k: usize, u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let left = apply_left_on(m, dims, k, u)?;
    apply_right_on(&left, dims, k, &u.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut state = seed;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let g = ComplexMatrix::from_fn(n, n, |_, _| C64::new(next(), next()));
        g.hermitian_part()
    }

    #[test]
    fn eigh_reconstructs_and_is_unitary() {
        for n in [1, 2, 3, 5, 8, 16] {
            let h = sample_hermitian(n, n as u64 + 3);
            let e = h.eigh();
            let rec = e.reconstruct_with(|x| x);
            assert!(rec.max_abs_diff(&h) < 1e-13, "n={n}");
            let vv = &e.vectors.adjoint() * &e.vectors;
            assert!(vv.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-13);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eigh_handles_degenerate_spectrum() {
        let m = ComplexMatrix::identity(4).scale(0.25);
        let e = m.eigh();
        assert!(e.values.iter().all(|&v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn cholesky_inverse() {
        let h = sample_hermitian(6, 11);
        let pd = &(&h * &h) + &ComplexMatrix::identity(6);
        let inv = pd.inverse_hpd().unwrap();
        let prod = &pd * &inv;
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-12);
        assert!(h.scale(0.0).cholesky().is_none());
    }

    #[test]
    fn subsystem_application_matches_kron() {
        let a = sample_hermitian(2, 1);
        let m = sample_hermitian(12, 2);
        let dims = [3, 2, 2];
        let full = ComplexMatrix::identity(3).kron(&a).kron(&ComplexMatrix::identity(2));
        let want = &full * &m;
        let got = apply_left_on(&m, &dims, 1, &a).unwrap();
        assert!(got.max_abs_diff(&want) < 1e-14);
        let want_r = &m * &full;
        let got_r = apply_right_on(&m, &dims, 1, &a).unwrap();
        assert!(got_r.max_abs_diff(&want_r) < 1e-14);
    }

    #[test]
    fn permutation_of_product_operator() {
        let a = sample_hermitian(2, 5);
        let b = sample_hermitian(3, 6);
        let ab = a.kron(&b);
        let ba = permute_subsystems(&ab, &[2, 3], &[1, 0]).unwrap();
        assert!(ba.max_abs_diff(&b.kron(&a)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_index() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_trace(&m, &[2, 2], &[2]),
            Err(Error::SubsystemOutOfRange { .. })
        ));
    }

    #[test]
    fn schatten_norm_of_non_hermitian() {
        // singular values of [[0, 2], [0, 0]] are {2, 0}
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = C64::new(2.0, 0.0);
        assert!((m.schatten1() - 2.0).abs() < 1e-14);
    }
}
