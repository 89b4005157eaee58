//! Single-bit Clifford encryption: `sigma_x = |x><x| ⊗ I / 2^(n-1)`,
//! ciphertext `U sigma_x U^dagger`, decryption by undoing `U` and reading
//! the first qubit.

use std::collections::HashMap;

use super::povm::BinaryPovm;
use crate::clifford::{clifford_to_unitary, enumerate_clifford, CliffordElement};
use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::state::DensityOperator;
use crate::rng;

/// Largest key space that is enumerated exhaustively.
pub const EXHAUSTIVE_MAX_QUBITS: usize = 2;

#[derive(Clone, Debug)]
pub struct Key {
    pub element: CliffordElement,
    pub unitary: ComplexMatrix,
}

impl Key {
    pub fn new(element: CliffordElement) -> Result<Self> {
        let unitary = clifford_to_unitary(&element)?;
        Ok(Self { element, unitary })
    }
}

#[derive(Clone, Debug)]
pub struct QecmScheme {
    n: usize,
    keys: Vec<Key>,
    exhaustive: bool,
    index: HashMap<CliffordElement, usize>,
}

/// Average over keys: exact for an enumerated key space, otherwise a sample
/// mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: Option<f64>,
    pub samples: usize,
}

impl Estimate {
    pub fn from_values(values: &[f64], exact: bool) -> Self {
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let std_error = if exact || values.len() < 2 {
            None
        } else {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
            Some((var / k).sqrt())
        };
        Self {
            value: mean,
            std_error,
            samples: values.len(),
        }
    }

    /// Half-width of the normal 95% interval, zero when exact.
    pub fn ci95(&self) -> f64 {
        self.std_error.map_or(0.0, |s| 1.96 * s)
    }
}

impl QecmScheme {
    /// All `|C_n / U(1)|` keys; `n` in `1..=2`.
    pub fn exhaustive(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("scheme needs at least one qubit".into()));
        }
        let keys = enumerate_clifford(n)?
            .into_iter()
            .map(Key::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_keys(n, keys, true))
    }

    /// `count` keys drawn uniformly with the given seed.
    pub fn sampled(n: usize, count: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("scheme needs at least one qubit".into()));
        }
        if count == 0 {
            return Err(Error::Domain("sampled key space must be nonempty".into()));
        }
        let mut r = rng::from_seed(seed);
        let keys = (0..count)
            .map(|_| Key::new(CliffordElement::random(n, &mut r)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_keys(n, keys, false))
    }

    /// Exhaustive keys when feasible, otherwise `samples` sampled keys.
    pub fn build(n: usize, samples: usize, seed: u64) -> Result<Self> {
        if n <= EXHAUSTIVE_MAX_QUBITS {
            Self::exhaustive(n)
        } else {
            Self::sampled(n, samples, seed)
        }
    }

    fn from_keys(n: usize, keys: Vec<Key>, exhaustive: bool) -> Self {
        let index = keys.iter().enumerate().map(|(i, k)| (k.element.clone(), i)).collect();
        Self {
            n,
            keys,
            exhaustive,
            index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive
    }

    pub fn key_index(&self, element: &CliffordElement) -> Option<usize> {
        self.index.get(element).copied()
    }

    pub fn plaintext_matrix(&self, x: usize) -> ComplexMatrix {
        let d = self.dim();
        let half = d / 2;
        let w = 1.0 / half as f64;
        let diag: Vec<f64> = (0..d).map(|i| if i / half == (x & 1) { w } else { 0.0 }).collect();
        ComplexMatrix::from_real_diagonal(&diag)
    }

    pub fn plaintext(&self, x: usize) -> DensityOperator {
        DensityOperator::from_parts_unchecked(self.plaintext_matrix(x), vec![2; self.n], true)
    }

    fn check_key(&self, key: &Key) -> Result<()> {
        if key.element.n() != self.n || key.unitary.rows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "key on {} qubits for a {}-qubit scheme",
                key.element.n(),
                self.n
            )));
        }
        Ok(())
    }

    pub fn encrypt(&self, key: &Key, x: usize) -> Result<DensityOperator> {
        self.check_key(key)?;
        self.plaintext(x).conjugate(&key.unitary)
    }

    /// Alice's measurement `{U(|b><b| ⊗ I)U^dagger}`.
    pub fn decryption_povm(&self, key: &Key) -> BinaryPovm {
        let d = self.dim() as f64;
        let u = &key.unitary;
        let ud = u.adjoint();
        let mut e = [0usize, 1].map(|b| (&(u * &self.plaintext_matrix(b)) * &ud).scale(d / 2.0));
        for m in e.iter_mut() {
            *m = m.hermitian_part();
        }
        let [e0, e1] = e;
        BinaryPovm::from_parts_unchecked(e0, e1)
    }

    /// Outcome distribution of decrypting `ct` with `key`.
    pub fn decrypt(&self, key: &Key, ct: &DensityOperator) -> Result<[f64; 2]> {
        self.check_key(key)?;
        if ct.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "ciphertext of dimension {} for a {}-qubit scheme",
                ct.dim(),
                self.n
            )));
        }
        let povm = self.decryption_povm(key);
        Ok([ct.expectation(povm.element(0)), ct.expectation(povm.element(1))])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plaintexts() {
        let s1 = QecmScheme::exhaustive(1).unwrap();
        assert!(
            s1.plaintext(0)
                .matrix()
                .max_abs_diff(&ComplexMatrix::basis_projector(2, 0))
                < 1e-15
        );
        assert!(
            s1.plaintext(1)
                .matrix()
                .max_abs_diff(&ComplexMatrix::basis_projector(2, 1))
                < 1e-15
        );
        let s2 = QecmScheme::exhaustive(2).unwrap();
        let p = s2.plaintext(0);
        assert!((p.trace() - 1.0).abs() < 1e-15);
        assert_eq!(p.eigenvalues().iter().filter(|&&l| l > 1e-12).count(), 2);
        for s in [&s1, &s2] {
            assert!(s.plaintext_matrix(0).trace_product(&s.plaintext_matrix(1)).norm() < 1e-15);
        }
    }

    #[test]
    fn hadamard_key_gives_plus() {
        let s = QecmScheme::exhaustive(1).unwrap();
        let key = Key::new(CliffordElement::hadamard(1, 0)).unwrap();
        let ct = s.encrypt(&key, 0).unwrap();
        let plus = ComplexMatrix::from_fn(2, 2, |_, _| crate::linalg::matrix::C64::new(0.5, 0.0));
        assert!(ct.matrix().max_abs_diff(&plus) < 1e-15);
        let id = Key::new(CliffordElement::identity(1)).unwrap();
        assert!(
            s.encrypt(&id, 1)
                .unwrap()
                .matrix()
                .max_abs_diff(s.plaintext(1).matrix())
                < 1e-15
        );
    }

    #[test]
    fn correctness_and_mixed_ciphertext() {
        for n in 1..=2 {
            let s = QecmScheme::exhaustive(n).unwrap();
            let omega = DensityOperator::maximally_mixed(vec![2; n]);
            for key in s.keys() {
                for x in 0..2 {
                    let p = s.decrypt(key, &s.encrypt(key, x).unwrap()).unwrap();
                    assert!((p[x] - 1.0).abs() < 1e-9 && p[1 - x].abs() < 1e-9);
                }
                let q = s.decrypt(key, &omega).unwrap();
                assert!((q[0] - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn wrong_key_matches_born_rule() {
        let s = QecmScheme::exhaustive(1).unwrap();
        let keys = s.keys();
        for (a, b) in [(0usize, 5usize), (3, 17), (10, 23)] {
            let ct = s.encrypt(&keys[a], 0).unwrap();
            let p = s.decrypt(&keys[b], &ct).unwrap();
            let v = keys[b].unitary.column(0);
            let born = ct.matrix().sandwich(&v, &v).re;
            assert!((p[0] - born).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_qubits_rejected() {
        assert!(QecmScheme::exhaustive(0).is_err());
        assert!(QecmScheme::sampled(0, 4, 1).is_err());
    }
}
