//! Quantum channels stored as normalised Choi states
//! `J = (id ⊗ Φ)(phi+)`, input factor first.

use super::matrix::{self, ComplexMatrix, ZERO};
use super::state::{DensityOperator, PSD_TOL, TRACE_TOL};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ChoiChannel {
    choi: DensityOperator,
    in_dims: Vec<usize>,
    out_dims: Vec<usize>,
}

impl ChoiChannel {
    /// Validates complete positivity and trace preservation of a
    /// normalised Choi state with profile `[in.., out..]`.
    pub fn from_choi(choi: ComplexMatrix, in_dims: Vec<usize>, out_dims: Vec<usize>) -> Result<Self> {
        let d_in: usize = in_dims.iter().product();
        let d_out: usize = out_dims.iter().product();
        if choi.rows() != d_in * d_out || !choi.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix {}x{} for channel {d_in} -> {d_out}",
                choi.rows(),
                choi.cols()
            )));
        }
        let dev = choi.hermitian_deviation();
        if dev > 1e-12 {
            return Err(Error::NotHermitian(dev));
        }
        let choi = choi.hermitian_part();
        let min = choi.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix not PSD (min eigenvalue {min:e})"
            )));
        }
        let (marg, _) = matrix::partial_trace(&choi, &[d_in, d_out], &[0])?;
        let omega = ComplexMatrix::identity(d_in).scale(1.0 / d_in as f64);
        let err = marg.max_abs_diff(&omega);
        if err > TRACE_TOL {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving (deviation {err:e})"
            )));
        }
        let mut dims = in_dims.clone();
        dims.extend_from_slice(&out_dims);
        Ok(Self {
            choi: DensityOperator::from_parts_unchecked(choi, dims, true),
            in_dims,
            out_dims,
        })
    }

    /// Builds the Choi state of a linear map given by its action on matrix
    /// units `|i><j|`.
    pub fn from_map(
        in_dims: Vec<usize>,
        out_dims: Vec<usize>,
        map: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    ) -> Result<Self> {
        let d_in: usize = in_dims.iter().product();
        let d_out: usize = out_dims.iter().product();
        let mut j = ComplexMatrix::zeros(d_in * d_out, d_in * d_out);
        for i in 0..d_in {
            for k in 0..d_in {
                let mut unit = ComplexMatrix::zeros(d_in, d_in);
                unit[(i, k)] = matrix::ONE;
                let img = map(&unit);
                if img.rows() != d_out || img.cols() != d_out {
                    return Err(Error::DimensionMismatch("map output has wrong dimension".into()));
                }
                for a in 0..d_out {
                    for b in 0..d_out {
                        j[(i * d_out + a, k * d_out + b)] = img[(a, b)] / d_in as f64;
                    }
                }
            }
        }
        Self::from_choi(j, in_dims, out_dims)
    }

    pub fn from_kraus(in_dims: Vec<usize>, out_dims: Vec<usize>, kraus: &[ComplexMatrix]) -> Result<Self> {
        Self::from_map(in_dims, out_dims, |x| {
            let d_out = kraus[0].rows();
            let mut acc = ComplexMatrix::zeros(d_out, d_out);
            for k in kraus {
                acc += &(&(k * x) * &k.adjoint());
            }
            acc
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            choi: DensityOperator::max_entangled(d),
            in_dims: vec![d],
            out_dims: vec![d],
        }
    }

    /// The completely depolarising channel, Choi state `omega ⊗ omega`.
    pub fn depolarizing(d_in: usize, d_out: usize) -> Self {
        Self {
            choi: DensityOperator::maximally_mixed(vec![d_in, d_out]),
            in_dims: vec![d_in],
            out_dims: vec![d_out],
        }
    }

    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        let d = u.rows();
        Self::from_kraus(vec![d], vec![d], std::slice::from_ref(u))
    }

    /// Partial trace keeping the input subsystems listed in `keep`.
    pub fn partial_trace(in_dims: Vec<usize>, keep: &[usize]) -> Result<Self> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let out_dims: Vec<usize> = keep.iter().map(|&k| in_dims[k]).collect();
        let dims = in_dims.clone();
        Self::from_map(in_dims, out_dims, |x| {
            matrix::partial_trace(x, &dims, &keep).expect("validated dims").0
        })
    }

    pub fn choi(&self) -> &DensityOperator {
        &self.choi
    }

    pub fn in_dims(&self) -> &[usize] {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &[usize] {
        &self.out_dims
    }

    pub fn d_in(&self) -> usize {
        self.in_dims.iter().product()
    }

    pub fn d_out(&self) -> usize {
        self.out_dims.iter().product()
    }

    /// `Φ(|i><j|) = d_in * J_{(i,.),(j,.)}`.
    fn unit_image(&self, i: usize, j: usize) -> ComplexMatrix {
        let d_in = self.d_in() as f64;
        let d_out = self.d_out();
        let c = self.choi.matrix();
        ComplexMatrix::from_fn(d_out, d_out, |a, b| c[(i * d_out + a, j * d_out + b)] * d_in)
    }

    /// Linear extension of the channel to an arbitrary square matrix.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d_in = self.d_in();
        if x.rows() != d_in || x.cols() != d_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input dimension {d_in}, operand {}x{}",
                x.rows(),
                x.cols()
            )));
        }
        let d_out = self.d_out();
        let c = self.choi.matrix();
        let mut out = ComplexMatrix::zeros(d_out, d_out);
        for i in 0..d_in {
            for j in 0..d_in {
                let w = x[(i, j)] * d_in as f64;
                if w == ZERO {
                    continue;
                }
                for a in 0..d_out {
                    for b in 0..d_out {
                        out[(a, b)] += w * c[(i * d_out + a, j * d_out + b)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Φ(rho) = d_in Tr_in[(rho^T ⊗ I) J]`.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let out = self.apply_matrix(rho.matrix())?;
        Ok(DensityOperator::from_parts_unchecked(
            out,
            self.out_dims.clone(),
            rho.is_normalized(),
        ))
    }

    /// `(id ⊗ Φ ⊗ id)(rho)` with the channel acting on subsystem `k`; the
    /// output factors replace subsystem `k` in place.
    pub fn apply_on_subsystem(&self, rho: &DensityOperator, k: usize) -> Result<DensityOperator> {
        let dims = rho.dims();
        if k >= dims.len() {
            return Err(Error::SubsystemOutOfRange {
                index: k,
                count: dims.len(),
            });
        }
        if dims[k] != self.d_in() {
            return Err(Error::DimensionMismatch(format!(
                "subsystem {k} has dimension {}, channel expects {}",
                dims[k],
                self.d_in()
            )));
        }
        let left: usize = dims[..k].iter().product();
        let right: usize = dims[k + 1..].iter().product();
        let d_in = self.d_in();
        let d_out = self.d_out();
        let m = rho.matrix();
        let images: Vec<Vec<ComplexMatrix>> = (0..d_in)
            .map(|i| (0..d_in).map(|j| self.unit_image(i, j)).collect())
            .collect();
        let n_out = left * d_out * right;
        let mut out = ComplexMatrix::zeros(n_out, n_out);
        let idx_in = |l: usize, a: usize, t: usize| (l * d_in + a) * right + t;
        let idx_out = |l: usize, a: usize, t: usize| (l * d_out + a) * right + t;
        for l1 in 0..left {
            for t1 in 0..right {
                for l2 in 0..left {
                    for t2 in 0..right {
                        for i in 0..d_in {
                            for j in 0..d_in {
                                let w = m[(idx_in(l1, i, t1), idx_in(l2, j, t2))];
                                if w == ZERO {
                                    continue;
                                }
                                let img = &images[i][j];
                                for a in 0..d_out {
                                    for b in 0..d_out {
                                        out[(idx_out(l1, a, t1), idx_out(l2, b, t2))] += w * img[(a, b)];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut new_dims: Vec<usize> = dims[..k].to_vec();
        new_dims.extend_from_slice(&self.out_dims);
        new_dims.extend_from_slice(&dims[k + 1..]);
        Ok(DensityOperator::from_parts_unchecked(
            out,
            new_dims,
            rho.is_normalized(),
        ))
    }

    /// `p Φ + (1 - p) Ψ`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if self.in_dims != other.in_dims || self.out_dims != other.out_dims {
            return Err(Error::DimensionMismatch("mixing channels of different shape".into()));
        }
        let m = &self.choi.matrix().scale(p) + &other.choi.matrix().scale(1.0 - p);
        Self::from_choi(m, self.in_dims.clone(), self.out_dims.clone())
    }

    /// The same channel with its output regrouped into factors `dims`.
    pub fn reshaped_output(&self, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != self.d_out() {
            return Err(Error::DimensionMismatch("output regrouping changes dimension".into()));
        }
        ChoiChannel::from_choi(self.choi().matrix().clone(), self.in_dims().to_vec(), dims)
    }

    /// `U Φ(.) U^dagger` for a unitary on the whole output.
    pub fn followed_by_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        let full = ComplexMatrix::identity(self.d_in()).kron(u);
        let m = &(&full * self.choi.matrix()) * &full.adjoint();
        Self::from_choi(m, self.in_dims.clone(), self.out_dims.clone())
    }
}

/// The operator exchanging two equal-dimensional tensor factors.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            s[(a * d + b, b * d + a)] = matrix::ONE;
        }
    }
    s
}
