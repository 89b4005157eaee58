//! Unitary matrices from tableaux.
//!
//! `U|0..0>` is the joint +1 eigenvector of the Z-generator images, and
//! `U|b> = prod_{j in b} (U X_j U^dagger) U|0..0>`. This fixes `U` up to a
//! global phase, which is then canonicalised.

use super::pauli::Pauli;
use super::tableau::CliffordElement;
use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64, ZERO};

pub const MAX_SYNTH_QUBITS: usize = 6;

/// Rotates the global phase so the first entry (row-major) with modulus
/// above `1e-9` is positive real.
pub fn canonicalize_phase(u: &mut ComplexMatrix) {
    let pivot = u.data().iter().copied().find(|z| z.norm() > 1e-9);
    if let Some(p) = pivot {
        let rot = p.conj() / p.norm();
        *u = u.scale_c(rot);
    }
}

pub fn clifford_to_unitary(c: &CliffordElement) -> Result<ComplexMatrix> {
    let n = c.n();
    if n > MAX_SYNTH_QUBITS {
        return Err(Error::Unsupported(format!(
            "matrix synthesis is capped at {MAX_SYNTH_QUBITS} qubits, got {n}"
        )));
    }
    let d = 1usize << n;
    let z_images: Vec<Pauli> = (0..n).map(|j| c.generator_image(n + j)).collect();
    let threshold = 0.5 / d as f64;
    let mut psi0 = None;
    for k in 0..d {
        let mut v = vec![ZERO; d];
        v[k] = C64::new(1.0, 0.0);
        for q in &z_images {
            let qv = q.apply(n, &v);
            for (a, b) in v.iter_mut().zip(qv) {
                *a = (*a + b) * 0.5;
            }
        }
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm2 >= threshold {
            let s = norm2.sqrt();
            psi0 = Some(v.into_iter().map(|z| z / s).collect::<Vec<_>>());
            break;
        }
    }
    let psi0 = psi0.ok_or_else(|| Error::Domain("stabiliser images have no common eigenvector".into()))?;
    let mut u = ComplexMatrix::zeros(d, d);
    for b in 0..d {
        let mut col = psi0.clone();
        for j in 0..n {
            // qubit j is bit n-1-j of the basis index
            if b >> (n - 1 - j) & 1 == 1 {
                col = c.generator_image(j).apply(n, &col);
            }
        }
        for (r, z) in col.into_iter().enumerate() {
            u[(r, b)] = z;
        }
    }
    canonicalize_phase(&mut u);
    Ok(u)
}
