//! Dense primal-dual interior point method for
//!
//! ```text
//!   minimise Tr σ        subject to  I_A ⊗ σ - C ⪰ 0
//!   maximise Tr[C X]     subject to  X ⪰ 0,  Tr_A X = I_B
//! ```
//!
//! with `C` Hermitian on `A ⊗ B`. For a state `C = rho`, the optimum is
//! `2^{-H_min(A|B)}`. The method uses the HKM search direction with a
//! Mehrotra predictor-corrector, starting from a strictly feasible pair,
//! and finishes by projecting both iterates onto their feasible sets so the
//! reported bracket is rigorous up to rounding.

use crate::error::{Error, Result};
use crate::linalg::matrix::{self, ComplexMatrix, C64, ZERO};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdpOptions {
    /// Target for `Tr σ - Tr[C X]` after projection.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 200,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    /// Optimal `σ` on `B`.
    pub sigma: ComplexMatrix,
    /// `Tr σ`, an upper bound on the optimum.
    pub primal_value: f64,
    /// Dual certificate `X` on `A ⊗ B` with `Tr_A X = I`.
    pub dual: ComplexMatrix,
    /// `Tr[C X]`, a lower bound on the optimum.
    pub dual_value: f64,
    pub gap: f64,
    pub iterations: usize,
    pub dims: (usize, usize),
}

impl SdpSolution {
    /// `λ_min(I ⊗ σ - C)`.
    pub fn primal_slack(&self, c: &ComplexMatrix) -> f64 {
        let (da, _) = self.dims;
        (&ComplexMatrix::identity(da).kron(&self.sigma) - c).min_eigenvalue()
    }

    /// `(λ_min(X), λ_min(I - Tr_A X))`.
    pub fn dual_slack(&self) -> (f64, f64) {
        let (da, db) = self.dims;
        let n = matrix::partial_trace(&self.dual, &[da, db], &[1]).expect("dims").0;
        (
            self.dual.min_eigenvalue(),
            (&ComplexMatrix::identity(db) - &n).min_eigenvalue(),
        )
    }
}

/// Orthonormal Hermitian basis of `db x db` matrices, each stored as its
/// nonzero entries.
fn hermitian_basis(db: usize) -> Vec<Vec<(usize, usize, C64)>> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(db * db);
    for i in 0..db {
        basis.push(vec![(i, i, C64::new(1.0, 0.0))]);
    }
    for i in 0..db {
        for j in (i + 1)..db {
            basis.push(vec![(i, j, C64::new(r, 0.0)), (j, i, C64::new(r, 0.0))]);
            basis.push(vec![(i, j, C64::new(0.0, r)), (j, i, C64::new(0.0, -r))]);
        }
    }
    basis
}

struct Problem<'a> {
    c: &'a ComplexMatrix,
    da: usize,
    db: usize,
    basis: Vec<Vec<(usize, usize, C64)>>,
    b: Vec<f64>,
}

impl Problem<'_> {
    fn sigma(&self, y: &[f64]) -> ComplexMatrix {
        let mut s = ComplexMatrix::zeros(self.db, self.db);
        for (f, &yk) in self.basis.iter().zip(y) {
            for &(i, j, v) in f {
                s[(i, j)] += v * yk;
            }
        }
        s
    }

    /// `Re Tr[F_k T]` for every basis element.
    fn coords(&self, t: &ComplexMatrix) -> Vec<f64> {
        self.basis
            .iter()
            .map(|f| f.iter().map(|&(i, j, v)| (v * t[(j, i)]).re).sum())
            .collect()
    }

    fn tr_a(&self, m: &ComplexMatrix) -> ComplexMatrix {
        matrix::partial_trace(m, &[self.da, self.db], &[1]).expect("dims").0
    }

    fn lift(&self, sigma: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::identity(self.da).kron(sigma)
    }

    /// `M_kl = Re Tr[(I ⊗ F_k) X (I ⊗ F_l) S^{-1}]`.
    fn schur(&self, x: &ComplexMatrix, sinv: &ComplexMatrix) -> Vec<f64> {
        let (da, db) = (self.da, self.db);
        // q[(i2, t)][(q, p)] = sum_{a, a2} X[(a,q),(a2,i2)] S^{-1}[(a2,t),(a,p)]
        let mut q = vec![ZERO; db * db * db * db];
        for i2 in 0..db {
            for t in 0..db {
                for qq in 0..db {
                    for p in 0..db {
                        let mut acc = ZERO;
                        for a in 0..da {
                            for a2 in 0..da {
                                acc += x[(a * db + qq, a2 * db + i2)] * sinv[(a2 * db + t, a * db + p)];
                            }
                        }
                        q[((i2 * db + t) * db + qq) * db + p] = acc;
                    }
                }
            }
        }
        let m = self.basis.len();
        let mut out = vec![0.0; m * m];
        for (l, fl) in self.basis.iter().enumerate() {
            for (k, fk) in self.basis.iter().enumerate().skip(l) {
                let mut acc = ZERO;
                for &(i2, t, g) in fl {
                    for &(p, qq, f) in fk {
                        acc += f * g * q[((i2 * db + t) * db + qq) * db + p];
                    }
                }
                out[k * m + l] = acc.re;
                out[l * m + k] = acc.re;
            }
        }
        out
    }
}

/// Solves `M z = r` for symmetric positive definite `M`, with a small
/// diagonal shift if rounding breaks definiteness.
fn solve_spd(m: &[f64], n: usize, r: &[f64]) -> Option<Vec<f64>> {
    let scale = (0..n).map(|i| m[i * n + i].abs()).fold(0.0, f64::max).max(1e-300);
    for shift in [0.0, 1e-14, 1e-12, 1e-10] {
        let mut l = vec![0.0; n * n];
        let mut ok = true;
        'outer: for j in 0..n {
            let mut d = m[j * n + j] + shift * scale;
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if d.is_nan() || d <= 0.0 {
                ok = false;
                break 'outer;
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in (j + 1)..n {
                let mut s = m[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        if !ok {
            continue;
        }
        let mut z = r.to_vec();
        for i in 0..n {
            for k in 0..i {
                z[i] -= l[i * n + k] * z[k];
            }
            z[i] /= l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                z[i] -= l[k * n + i] * z[k];
            }
            z[i] /= l[i * n + i];
        }
        return Some(z);
    }
    None
}

/// Largest `α` with `X + α ΔX ⪰ 0`, given the Cholesky factor of `X`.
fn max_step(chol: &ComplexMatrix, dx: &ComplexMatrix) -> f64 {
    let linv = chol.lower_triangular_inverse();
    let w = &(&linv * dx) * &linv.adjoint();
    let lmin = w.hermitian_part().min_eigenvalue();
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

fn finalize(p: &Problem, x: &ComplexMatrix, sigma: &ComplexMatrix, iterations: usize) -> SdpSolution {
    let n = p.tr_a(x).hermitian_part();
    let n_isqrt = n
        .eigh()
        .reconstruct_with(|l| if l > 0.0 { 1.0 / l.sqrt() } else { 0.0 });
    let lift = p.lift(&n_isqrt);
    let xp = (&(&lift * x) * &lift).hermitian_part();
    let mut sig = sigma.hermitian_part();
    let slack = (&p.lift(&sig) - p.c).min_eigenvalue();
    if slack < 0.0 {
        sig += &ComplexMatrix::identity(p.db).scale(-slack);
    }
    let primal = sig.trace().re;
    let dual = p.c.trace_product(&xp).re;
    SdpSolution {
        sigma: sig,
        primal_value: primal,
        dual: xp,
        dual_value: dual,
        gap: (primal - dual).max(0.0),
        iterations,
        dims: (p.da, p.db),
    }
}

/// Solves the program for a Hermitian `C` on `da x db`.
pub fn solve(c: &ComplexMatrix, da: usize, db: usize, opts: SdpOptions) -> Result<SdpSolution> {
    if !c.is_square() || c.rows() != da * db || da == 0 || db == 0 {
        return Err(Error::DimensionMismatch(format!(
            "SDP operand {}x{} for dims {da} x {db}",
            c.rows(),
            c.cols()
        )));
    }
    let dev = c.hermitian_deviation();
    if dev > 1e-10 * c.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let c = c.hermitian_part();
    let basis = hermitian_basis(db);
    let b: Vec<f64> = basis
        .iter()
        .map(|f| f.iter().filter(|e| e.0 == e.1).map(|e| e.2.re).sum())
        .collect();
    let p = Problem {
        c: &c,
        da,
        db,
        basis,
        b,
    };
    let nn = (da * db) as f64;
    let m = p.basis.len();

    let mut x = ComplexMatrix::identity(da * db).scale(1.0 / da as f64);
    let start = c.max_eigenvalue().max(0.0) + 1.0;
    let mut y = vec![0.0; m];
    y[..db].fill(start);
    let mut best: Option<SdpSolution> = None;

    for it in 0..opts.max_iters {
        let sigma = p.sigma(&y);
        let s = (&p.lift(&sigma) - &c).hermitian_part();
        let primal = sigma.trace().re;
        let dual = c.trace_product(&x).re;
        if primal - dual <= 0.5 * opts.tol {
            let sol = finalize(&p, &x, &sigma, it);
            if sol.gap <= opts.tol {
                return Ok(sol);
            }
            best = Some(sol);
        }
        let (Some(sinv), Some(xchol), Some(schol)) = (s.inverse_hpd(), x.cholesky(), s.cholesky()) else {
            break;
        };
        let mu = s.trace_product(&x).re / nn;
        let ax = p.coords(&p.tr_a(&x));
        let rp: Vec<f64> = p.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let schur = p.schur(&x, &sinv);

        let direction = |r: &ComplexMatrix| -> Option<(Vec<f64>, ComplexMatrix, ComplexMatrix)> {
            let ar = p.coords(&p.tr_a(r));
            let rhs: Vec<f64> = ar.iter().zip(&rp).map(|(a, r)| a - r).collect();
            let dy = solve_spd(&schur, m, &rhs)?;
            let ds = p.lift(&p.sigma(&dy));
            let dx = (r - &(&(&x * &ds) * &sinv)).hermitian_part();
            Some((dy, ds, dx))
        };

        // predictor
        let r_aff = -&x;
        let Some((_, ds_a, dx_a)) = direction(&r_aff) else {
            break;
        };
        let ap = (0.98 * max_step(&xchol, &dx_a)).min(1.0);
        let ad = (0.98 * max_step(&schol, &ds_a)).min(1.0);
        let x_aff = &x + &dx_a.scale(ap);
        let s_aff = &s + &ds_a.scale(ad);
        let mu_aff = s_aff.trace_product(&x_aff).re / nn;
        let centering = if mu > 0.0 {
            (mu_aff / mu).clamp(0.0, 1.0).powi(3)
        } else {
            0.0
        };

        // corrector
        let r_c = &(&sinv.scale(centering * mu) - &x) - &(&(&dx_a * &ds_a) * &sinv);
        let Some((dy, ds, dx)) = direction(&r_c) else { break };
        let ap = (0.98 * max_step(&xchol, &dx)).min(1.0);
        let ad = (0.98 * max_step(&schol, &ds)).min(1.0);
        x = (&x + &dx.scale(ap)).hermitian_part();
        for (yk, dk) in y.iter_mut().zip(&dy) {
            *yk += ad * dk;
        }
    }

    let sigma = p.sigma(&y);
    let sol = finalize(&p, &x, &sigma, opts.max_iters);
    let sol = match best {
        Some(b) if b.gap < sol.gap => b,
        _ => sol,
    };
    if sol.gap <= opts.tol {
        Ok(sol)
    } else {
        Err(Error::NoConvergence {
            iterations: sol.iterations,
            lower: sol.dual_value,
            upper: sol.primal_value,
        })
    }
}
