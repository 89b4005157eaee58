//! Pauli operators `i^k X^x Z^z` on up to 32 qubits, stored as bitmasks.
//!
//! Bit `j` of a mask addresses qubit `j`; qubit 0 is the most significant
//! bit of a computational basis index.

use crate::linalg::matrix::{ComplexMatrix, C64, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pauli {
    pub x: u64,
    pub z: u64,
    /// Power of `i` in front of `X^x Z^z`, mod 4.
    pub phase: u8,
}

const I_POWERS: [C64; 4] = [
    C64::new(1.0, 0.0),
    C64::new(0.0, 1.0),
    C64::new(-1.0, 0.0),
    C64::new(0.0, -1.0),
];

impl Pauli {
    pub const IDENTITY: Pauli = Pauli { x: 0, z: 0, phase: 0 };

    /// The Hermitian Pauli with support `(x, z)`, negated when `negative`.
    pub fn hermitian(x: u64, z: u64, negative: bool) -> Self {
        let phase = ((x & z).count_ones() as u8 + if negative { 2 } else { 0 }) % 4;
        Pauli { x, z, phase }
    }

    pub fn x_on(j: usize) -> Self {
        Pauli::hermitian(1 << j, 0, false)
    }

    pub fn z_on(j: usize) -> Self {
        Pauli::hermitian(0, 1 << j, false)
    }

    /// `(i^a X^x1 Z^z1)(i^b X^x2 Z^z2) = i^(a+b) (-1)^|z1&x2| X^(x1^x2) Z^(z1^z2)`.
    pub fn product(self, other: Pauli) -> Pauli {
        let sign = if !(self.z & other.x).count_ones().is_multiple_of(2) {
            2
        } else {
            0
        };
        Pauli {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + sign) % 4,
        }
    }

    pub fn commutes_with(&self, other: &Pauli) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + 4 - (self.x & self.z).count_ones() % 4).is_multiple_of(2)
    }

    /// For a Hermitian Pauli: whether it is `-1` times the positive one.
    pub fn is_negative(&self) -> bool {
        (self.phase as u32 + 4 - (self.x & self.z).count_ones() % 4) % 4 == 2
    }

    pub fn negate(self) -> Pauli {
        Pauli {
            phase: (self.phase + 2) % 4,
            ..self
        }
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Applies the operator to a state vector of `n` qubits.
    pub fn apply(&self, n: usize, v: &[C64]) -> Vec<C64> {
        let xm = to_index_mask(self.x, n);
        let zm = to_index_mask(self.z, n);
        let coeff = I_POWERS[self.phase as usize];
        let mut out = vec![ZERO; v.len()];
        for (b, amp) in v.iter().enumerate() {
            let s = if (zm & b as u64).count_ones() % 2 == 1 {
                -coeff
            } else {
                coeff
            };
            out[b ^ xm as usize] = s * amp;
        }
        out
    }

    pub fn matrix(&self, n: usize) -> ComplexMatrix {
        let d = 1usize << n;
        let xm = to_index_mask(self.x, n) as usize;
        let zm = to_index_mask(self.z, n);
        let coeff = I_POWERS[self.phase as usize];
        let mut m = ComplexMatrix::zeros(d, d);
        for b in 0..d {
            let s = if (zm & b as u64).count_ones() % 2 == 1 {
                -coeff
            } else {
                coeff
            };
            m[(b ^ xm, b)] = s;
        }
        m
    }

    pub fn label(&self, n: usize) -> String {
        let mut s = String::new();
        if self.is_hermitian() {
            s.push(if self.is_negative() { '-' } else { '+' });
        } else {
            s.push_str(if self.is_negative_imag() { "-i" } else { "+i" });
        }
        for j in 0..n {
            let xb = self.x >> j & 1 == 1;
            let zb = self.z >> j & 1 == 1;
            s.push(match (xb, zb) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            });
        }
        s
    }

    fn is_negative_imag(&self) -> bool {
        (self.phase as u32 + 4 - (self.x & self.z).count_ones() % 4) % 4 == 3
    }
}

/// Maps a qubit mask to the corresponding mask on basis indices.
pub fn to_index_mask(mask: u64, n: usize) -> u64 {
    let mut out = 0u64;
    for j in 0..n {
        if mask >> j & 1 == 1 {
            out |= 1 << (n - 1 - j);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_products() {
        let x = Pauli::x_on(0);
        let z = Pauli::z_on(0);
        let y = Pauli::hermitian(1, 1, false);
        assert_eq!(y.matrix(1)[(1, 0)], C64::new(0.0, 1.0));
        assert_eq!(y.matrix(1)[(0, 1)], C64::new(0.0, -1.0));
        // XZ = -iY
        let xz = x.product(z);
        let p = &x.matrix(1) * &z.matrix(1);
        assert!(xz.matrix(1).max_abs_diff(&p) < 1e-15);
        assert!(!x.commutes_with(&z));
        assert!(!xz.is_hermitian());
    }

    #[test]
    fn product_matches_matrices() {
        let n = 3;
        for a in 0..64u64 {
            for b in [5u64, 17, 42, 63] {
                let p = Pauli {
                    x: a & 7,
                    z: a >> 3,
                    phase: (a % 4) as u8,
                };
                let q = Pauli {
                    x: b & 7,
                    z: b >> 3,
                    phase: 1,
                };
                let lhs = p.product(q).matrix(n);
                let rhs = &p.matrix(n) * &q.matrix(n);
                assert!(lhs.max_abs_diff(&rhs) < 1e-15);
                let v: Vec<C64> = (0..8).map(|k| C64::new(k as f64, 1.0)).collect();
                let av = p.apply(n, &v);
                let mv = p.matrix(n).apply(&v);
                for (s, t) in av.iter().zip(&mv) {
                    assert!((s - t).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        let x0 = Pauli::x_on(0).matrix(2);
        assert_eq!(x0[(2, 0)], C64::new(1.0, 0.0));
        assert_eq!(Pauli::hermitian(1, 1, true).label(2), "-YI");
    }
}
