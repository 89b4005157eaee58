//! Monogamy-of-entanglement games and tripartite strategies.

use rayon::prelude::*;

use super::povm::BinaryPovm;
use super::scheme::QecmScheme;
use crate::clifford::{clifford_to_unitary, CliffordElement};
use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, ZERO};
use crate::linalg::state::DensityOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameKind {
    Bb84,
    CliffordScheme,
}

/// Uniformly weighted questions, each with a projective measurement for
/// Alice on register `A`.
#[derive(Clone, Debug)]
pub struct MoEGame {
    dim_a: usize,
    alice: Vec<BinaryPovm>,
    keys: Option<Vec<CliffordElement>>,
}

impl MoEGame {
    pub fn new(alice: Vec<BinaryPovm>) -> Result<Self> {
        let dim_a = alice
            .first()
            .ok_or_else(|| Error::Domain("a game needs at least one question".into()))?
            .dim();
        for m in &alice {
            if m.dim() != dim_a {
                return Err(Error::DimensionMismatch("questions act on different registers".into()));
            }
            m.check_projective()?;
        }
        Ok(Self {
            dim_a,
            alice,
            keys: None,
        })
    }

    pub fn build(kind: GameKind, n: usize) -> Result<Self> {
        match kind {
            GameKind::Bb84 if n == 1 => Ok(Self::bb84()),
            GameKind::Bb84 => Err(Error::Unsupported(format!("the BB84 game has one qubit, got n = {n}"))),
            GameKind::CliffordScheme => Self::from_scheme(&QecmScheme::exhaustive(n)?),
        }
    }

    /// Computational and Hadamard basis on one qubit.
    pub fn bb84() -> Self {
        let keys = vec![CliffordElement::identity(1), CliffordElement::hadamard(1, 0)];
        let alice = keys
            .iter()
            .map(|k| {
                let u = clifford_to_unitary(k).expect("one qubit");
                let p = &(&u * &ComplexMatrix::basis_projector(2, 0)) * &u.adjoint();
                BinaryPovm::from_projector(p.hermitian_part()).expect("projector")
            })
            .collect();
        Self {
            dim_a: 2,
            alice,
            keys: Some(keys),
        }
    }

    /// One question per key, Alice measuring `{U(|b><b| ⊗ I)U^dagger}`.
    pub fn from_scheme(scheme: &QecmScheme) -> Result<Self> {
        let alice = scheme.keys().iter().map(|k| scheme.decryption_povm(k)).collect();
        Ok(Self {
            dim_a: scheme.dim(),
            alice,
            keys: Some(scheme.keys().iter().map(|k| k.element.clone()).collect()),
        })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn num_questions(&self) -> usize {
        self.alice.len()
    }

    pub fn alice(&self) -> &[BinaryPovm] {
        &self.alice
    }

    /// Clifford labels of the questions, when the game comes from a scheme.
    pub fn keys(&self) -> Option<&[CliffordElement]> {
        self.keys.as_deref()
    }
}

#[derive(Clone, Debug)]
pub struct Strategy {
    pub state: DensityOperator,
    pub bob: Vec<BinaryPovm>,
    pub charlie: Vec<BinaryPovm>,
}

impl Strategy {
    /// Checks the state profile `[dA, dB, dC]` and one measurement per
    /// question for each player.
    pub fn validate(&self, game: &MoEGame) -> Result<()> {
        let dims = self.state.dims();
        if dims.len() != 3 || dims[0] != game.dim_a() {
            return Err(Error::DimensionMismatch(format!(
                "strategy state dims {:?} for Alice dimension {}",
                dims,
                game.dim_a()
            )));
        }
        if self.bob.len() != game.num_questions() || self.charlie.len() != game.num_questions() {
            return Err(Error::DimensionMismatch("one measurement per question required".into()));
        }
        for (p, d) in [(&self.bob, dims[1]), (&self.charlie, dims[2])] {
            for m in p {
                if m.dim() != d {
                    return Err(Error::DimensionMismatch("measurement dimension".into()));
                }
                BinaryPovm::new(m.element(0).clone(), m.element(1).clone())?;
            }
        }
        Ok(())
    }
}

/// `Tr_1[(op ⊗ I) m]` for `m` on `d1 x d2`.
pub(crate) fn contract_first(m: &ComplexMatrix, d1: usize, d2: usize, op: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d2, d2);
    for a in 0..d1 {
        for a2 in 0..d1 {
            let w = op[(a2, a)];
            if w == ZERO {
                continue;
            }
            for i in 0..d2 {
                for j in 0..d2 {
                    out[(i, j)] += w * m[(a * d2 + i, a2 * d2 + j)];
                }
            }
        }
    }
    out
}

/// `Tr_2[(I ⊗ op) m]` for `m` on `d1 x d2`.
pub(crate) fn contract_second(m: &ComplexMatrix, d1: usize, d2: usize, op: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d1, d1);
    for c in 0..d2 {
        for c2 in 0..d2 {
            let w = op[(c2, c)];
            if w == ZERO {
                continue;
            }
            for i in 0..d1 {
                for j in 0..d1 {
                    out[(i, j)] += w * m[(i * d2 + c, j * d2 + c2)];
                }
            }
        }
    }
    out
}

/// `E_theta sum_x Tr[(A_x ⊗ B_x ⊗ C_x) rho]`.
pub fn winning_probability(game: &MoEGame, strat: &Strategy) -> Result<f64> {
    strat.validate(game)?;
    Ok(per_question_values(game, strat).iter().sum::<f64>() / game.num_questions() as f64)
}

pub(crate) fn per_question_values(game: &MoEGame, strat: &Strategy) -> Vec<f64> {
    let dims = strat.state.dims();
    let (da, db, dc) = (dims[0], dims[1], dims[2]);
    let rho = strat.state.matrix();
    (0..game.num_questions())
        .into_par_iter()
        .map(|q| {
            (0..2)
                .map(|x| {
                    let r = contract_first(rho, da, db * dc, game.alice()[q].element(x));
                    let bc = strat.bob[q].element(x).kron(strat.charlie[q].element(x));
                    bc.trace_product(&r).re
                })
                .sum::<f64>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn game_shapes() {
        let g = MoEGame::build(GameKind::Bb84, 1).unwrap();
        assert_eq!(g.num_questions(), 2);
        for m in g.alice() {
            assert!((m.element(0).trace().re - 1.0).abs() < 1e-12);
        }
        let c1 = MoEGame::build(GameKind::CliffordScheme, 1).unwrap();
        assert_eq!(c1.num_questions(), 24);
        assert!(c1.alice().iter().all(|m| (m.element(0).trace().re - 1.0).abs() < 1e-12));
        let c2 = MoEGame::build(GameKind::CliffordScheme, 2).unwrap();
        assert!(c2
            .alice()
            .iter()
            .all(|m| m.is_projective() && (m.element(1).trace().re - 2.0).abs() < 1e-12));
        assert!(MoEGame::build(GameKind::Bb84, 2).is_err());
    }

    #[test]
    fn uniform_guessing_and_classical_copy() {
        let g = MoEGame::bb84();
        let strat = Strategy {
            state: DensityOperator::maximally_mixed(vec![2, 2, 2]),
            bob: vec![BinaryPovm::coin(2); 2],
            charlie: vec![BinaryPovm::coin(2); 2],
        };
        assert!((winning_probability(&g, &strat).unwrap() - 0.25).abs() < 1e-15);

        let single = MoEGame::new(vec![
            BinaryPovm::from_projector(ComplexMatrix::basis_projector(2, 0)).unwrap()
        ])
        .unwrap();
        let mut m = ComplexMatrix::zeros(8, 8);
        m[(0, 0)] = crate::linalg::matrix::C64::new(0.5, 0.0);
        m[(7, 7)] = crate::linalg::matrix::C64::new(0.5, 0.0);
        let z = BinaryPovm::from_projector(ComplexMatrix::basis_projector(2, 0)).unwrap();
        let strat = Strategy {
            state: DensityOperator::new(m, vec![2, 2, 2]).unwrap(),
            bob: vec![z.clone()],
            charlie: vec![z],
        };
        assert!((winning_probability(&single, &strat).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn contractions_match_partial_traces() {
        use crate::linalg::matrix::partial_trace;
        use crate::linalg::random::random_density;
        let mut r = crate::rng::from_seed(1);
        let rho = random_density(vec![2, 3], 6, &mut r).into_matrix();
        let id2 = ComplexMatrix::identity(2);
        let id3 = ComplexMatrix::identity(3);
        let a = contract_first(&rho, 2, 3, &id2);
        assert!(a.max_abs_diff(&partial_trace(&rho, &[2, 3], &[1]).unwrap().0) < 1e-14);
        let b = contract_second(&rho, 2, 3, &id3);
        assert!(b.max_abs_diff(&partial_trace(&rho, &[2, 3], &[0]).unwrap().0) < 1e-14);
        let p = ComplexMatrix::basis_projector(2, 1);
        let direct = partial_trace(&(&p.kron(&id3) * &rho), &[2, 3], &[1]).unwrap().0;
        assert!(contract_first(&rho, 2, 3, &p).max_abs_diff(&direct) < 1e-14);
    }
}
