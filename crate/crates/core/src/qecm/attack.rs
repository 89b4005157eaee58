//! Cloning attacks and their correspondence with game strategies.
//!
//! For a channel `Φ: A -> BC` with Choi state `J`, Alice measuring
//! `A^U_x` on the input half of `J` leaves `B C` in `Φ(σ_x^{Ū}) / 2`,
//! because `Tr_A[(P ⊗ I) J] = Φ(P^T) / d`. Question `U` of the game is
//! therefore answered with the attack's measurements for key `Ū`.

use rayon::prelude::*;

use super::game::{MoEGame, Strategy};
use super::povm::BinaryPovm;
use super::scheme::{Estimate, QecmScheme};
use crate::error::{Error, Result};
use crate::linalg::channel::ChoiChannel;
use crate::linalg::matrix::{self, ComplexMatrix};
use crate::linalg::state::{DensityOperator, TRACE_TOL};

#[derive(Clone, Debug)]
pub struct CloningAttack {
    pub channel: ChoiChannel,
    /// Indexed like the scheme's key list.
    pub bob: Vec<BinaryPovm>,
    pub charlie: Vec<BinaryPovm>,
}

impl CloningAttack {
    pub fn validate(&self, scheme: &QecmScheme) -> Result<()> {
        let out = self.channel.out_dims();
        if self.channel.d_in() != scheme.dim() || out.len() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "attack channel {:?} -> {:?} for a {}-qubit scheme",
                self.channel.in_dims(),
                out,
                scheme.n()
            )));
        }
        if self.bob.len() != scheme.keys().len() || self.charlie.len() != scheme.keys().len() {
            return Err(Error::DimensionMismatch("one measurement per key required".into()));
        }
        for (p, d) in [(&self.bob, out[0]), (&self.charlie, out[1])] {
            for m in p {
                if m.dim() != d {
                    return Err(Error::DimensionMismatch("measurement dimension".into()));
                }
                BinaryPovm::new(m.element(0).clone(), m.element(1).clone())?;
            }
        }
        Ok(())
    }

    /// Ciphertext goes to Bob, who decrypts; Charlie holds `|0>` and always
    /// answers 0.
    pub fn forward_to_bob(scheme: &QecmScheme) -> Result<Self> {
        let d = scheme.dim();
        let zero = ComplexMatrix::basis_projector(2, 0);
        let channel = ChoiChannel::from_map(vec![d], vec![d, 2], |x| x.kron(&zero))?;
        Ok(Self {
            channel,
            bob: scheme.keys().iter().map(|k| scheme.decryption_povm(k)).collect(),
            charlie: vec![BinaryPovm::constant(2, 0); scheme.keys().len()],
        })
    }

    /// Both parties answer with independent coin flips.
    pub fn coin_flips(scheme: &QecmScheme) -> Self {
        let k = scheme.keys().len();
        Self {
            channel: ChoiChannel::depolarizing(scheme.dim(), 4)
                .reshaped_output(vec![2, 2])
                .expect("4 = 2 x 2"),
            bob: vec![BinaryPovm::coin(2); k],
            charlie: vec![BinaryPovm::coin(2); k],
        }
    }
}

/// Per-key success `1/2 sum_x Tr[(B_x ⊗ C_x) Φ(σ_x)]`.
pub fn per_key_success(scheme: &QecmScheme, attack: &CloningAttack) -> Result<Vec<f64>> {
    attack.validate(scheme)?;
    let plain = [scheme.plaintext_matrix(0), scheme.plaintext_matrix(1)];
    scheme
        .keys()
        .par_iter()
        .enumerate()
        .map(|(k, key)| {
            let ud = key.unitary.adjoint();
            let mut v = 0.0;
            for (x, p) in plain.iter().enumerate() {
                let ct = &(&key.unitary * p) * &ud;
                let out = attack.channel.apply_matrix(&ct)?;
                let bc = attack.bob[k].element(x).kron(attack.charlie[k].element(x));
                v += 0.5 * bc.trace_product(&out).re;
            }
            Ok(v)
        })
        .collect()
}

/// `E_k E_x Tr[(B^k_x ⊗ C^k_x) Φ(σ^k_x)]`.
pub fn cloning_success(scheme: &QecmScheme, attack: &CloningAttack) -> Result<Estimate> {
    let vals = per_key_success(scheme, attack)?;
    Ok(Estimate::from_values(&vals, scheme.is_exhaustive()))
}

/// Maps every key to the position of its complex conjugate.
fn conjugate_permutation(scheme: &QecmScheme) -> Result<Vec<usize>> {
    scheme
        .keys()
        .iter()
        .map(|k| {
            scheme
                .key_index(&k.element.complex_conjugate())
                .ok_or_else(|| Error::Domain("key space is not closed under complex conjugation".into()))
        })
        .collect()
}

/// The entanglement-based strategy with state `J` and each question `U`
/// answered by the attack's measurements for key `Ū`.
pub fn strategy_from_attack(scheme: &QecmScheme, attack: &CloningAttack) -> Result<Strategy> {
    attack.validate(scheme)?;
    let perm = conjugate_permutation(scheme)?;
    let out = attack.channel.out_dims();
    let state = attack.channel.choi().regroup(vec![scheme.dim(), out[0], out[1]])?;
    Ok(Strategy {
        state,
        bob: perm.iter().map(|&j| attack.bob[j].clone()).collect(),
        charlie: perm.iter().map(|&j| attack.charlie[j].clone()).collect(),
    })
}

/// Inverse of [`strategy_from_attack`]; requires `rho_A = omega`.
pub fn attack_from_strategy(scheme: &QecmScheme, game: &MoEGame, strat: &Strategy) -> Result<CloningAttack> {
    strat.validate(game)?;
    if game.num_questions() != scheme.keys().len() {
        return Err(Error::DimensionMismatch("game and scheme differ in key count".into()));
    }
    let dims = strat.state.dims().to_vec();
    let marg = strat.state.partial_trace(&[0])?;
    let omega = DensityOperator::maximally_mixed(vec![dims[0]]);
    let dev = marg.matrix().max_abs_diff(omega.matrix());
    if dev > TRACE_TOL {
        return Err(Error::InvalidChannel(format!(
            "strategy state has a non-uniform A marginal (deviation {dev:e})"
        )));
    }
    let channel = ChoiChannel::from_choi(strat.state.matrix().clone(), vec![dims[0]], vec![dims[1], dims[2]])?;
    let perm = conjugate_permutation(scheme)?;
    // conjugation is an involution, so the same permutation inverts itself
    Ok(CloningAttack {
        channel,
        bob: perm.iter().map(|&j| strat.bob[j].clone()).collect(),
        charlie: perm.iter().map(|&j| strat.charlie[j].clone()).collect(),
    })
}

/// `||J - SWAP_BC J SWAP_BC||_Tr` for a channel with output `B ⊗ C`.
pub fn choi_swap_symmetry(chan: &ChoiChannel) -> Result<f64> {
    let out = chan.out_dims();
    if out.len() != 2 || out[0] != out[1] {
        return Err(Error::DimensionMismatch(format!(
            "swap symmetry needs two equal output factors, got {out:?}"
        )));
    }
    let dims = [chan.d_in(), out[0], out[1]];
    let j = chan.choi().matrix();
    let swapped = matrix::permute_subsystems(j, &dims, &[0, 2, 1])?;
    Ok((j - &swapped).trace_norm())
}

/// `(Φ + SWAP ∘ Φ) / 2`.
pub fn symmetrize(chan: &ChoiChannel) -> Result<ChoiChannel> {
    let out = chan.out_dims();
    if out.len() != 2 || out[0] != out[1] {
        return Err(Error::DimensionMismatch(
            "symmetrisation needs equal output factors".into(),
        ));
    }
    let swap = crate::linalg::channel::swap_operator(out[0]);
    let swapped = chan.followed_by_unitary(&swap)?;
    chan.mix(&swapped, 0.5)
}
