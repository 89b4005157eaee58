//! Clifford group elements in tableau form.
//!
//! A symplectic vector is packed into a `u64`: bit `j` holds the X part on
//! qubit `j`, bit `n + j` the Z part. Column `c < n` is the image of `X_c`
//! under conjugation, column `n + j` the image of `Z_j`; the phase bit
//! marks a negative sign on that image.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::pauli::Pauli;
use crate::error::{Error, Result};

/// Largest qubit count the packed representation supports.
pub const MAX_TABLEAU_QUBITS: usize = 31;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliffordElement {
    n: usize,
    columns: Vec<u64>,
    phases: Vec<bool>,
}

/// Binary symplectic product `<u, v>` on `n` qubits.
pub fn symplectic_product(u: u64, v: u64, n: usize) -> bool {
    let mask = (1u64 << n) - 1;
    let (ux, uz) = (u & mask, u >> n);
    let (vx, vz) = (v & mask, v >> n);
    ((ux & vz).count_ones() + (uz & vx).count_ones()) % 2 == 1
}

fn split(v: u64, n: usize) -> (u64, u64) {
    let mask = (1u64 << n) - 1;
    (v & mask, v >> n)
}

fn pack(x: u64, z: u64, n: usize) -> u64 {
    x | (z << n)
}

impl CliffordElement {
    /// Validates symplecticity of the columns.
    pub fn from_parts(n: usize, columns: Vec<u64>, phases: Vec<bool>) -> Result<Self> {
        if n == 0 || n > MAX_TABLEAU_QUBITS {
            return Err(Error::Unsupported(format!("tableau on {n} qubits")));
        }
        if columns.len() != 2 * n || phases.len() != 2 * n {
            return Err(Error::DimensionMismatch(format!(
                "{n}-qubit tableau needs {} columns and phases",
                2 * n
            )));
        }
        let c = Self { n, columns, phases };
        if !c.is_symplectic() {
            return Err(Error::Domain("columns do not preserve the symplectic form".into()));
        }
        Ok(c)
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..2 * n).map(|c| 1u64 << c).collect();
        Self {
            n,
            columns,
            phases: vec![false; 2 * n],
        }
    }

    pub fn hadamard(n: usize, q: usize) -> Self {
        let mut c = Self::identity(n);
        c.columns.swap(q, n + q);
        c
    }

    /// `S = diag(1, i)`: X -> Y, Z -> Z.
    pub fn phase_gate(n: usize, q: usize) -> Self {
        let mut c = Self::identity(n);
        c.columns[q] = pack(1 << q, 1 << q, n);
        c
    }

    /// CNOT with control `ctrl` and target `tgt`.
    pub fn cnot(n: usize, ctrl: usize, tgt: usize) -> Self {
        let mut c = Self::identity(n);
        c.columns[ctrl] = pack((1 << ctrl) | (1 << tgt), 0, n);
        c.columns[n + tgt] = pack(0, (1 << ctrl) | (1 << tgt), n);
        c
    }

    /// Pauli `X^x Z^z` viewed as a Clifford: flips the sign of generators
    /// it anticommutes with.
    pub fn pauli(n: usize, x: u64, z: u64) -> Self {
        let mut c = Self::identity(n);
        let p = Pauli::hermitian(x, z, false);
        for g in 0..2 * n {
            c.phases[g] = !p.commutes_with(&c.generator(g));
        }
        c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    pub fn phases(&self) -> &[bool] {
        &self.phases
    }

    /// Entry `(row, col)` of the `2n x 2n` binary symplectic matrix.
    pub fn symplectic_matrix(&self) -> Vec<Vec<u8>> {
        (0..2 * self.n)
            .map(|r| self.columns.iter().map(|c| (c >> r & 1) as u8).collect())
            .collect()
    }

    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        for a in 0..2 * n {
            for b in 0..2 * n {
                let omega = a.abs_diff(b) == n;
                if symplectic_product(self.columns[a], self.columns[b], n) != omega {
                    return false;
                }
            }
        }
        true
    }

    fn generator(&self, g: usize) -> Pauli {
        if g < self.n {
            Pauli::x_on(g)
        } else {
            Pauli::z_on(g - self.n)
        }
    }

    /// The Hermitian Pauli `U g U^dagger` for generator `g`.
    pub fn generator_image(&self, g: usize) -> Pauli {
        let (x, z) = split(self.columns[g], self.n);
        Pauli::hermitian(x, z, self.phases[g])
    }

    /// `U P U^dagger` for an arbitrary Pauli.
    pub fn conjugate_pauli(&self, p: Pauli) -> Pauli {
        let mut acc = Pauli {
            x: 0,
            z: 0,
            phase: p.phase,
        };
        for j in 0..self.n {
            if p.x >> j & 1 == 1 {
                acc = acc.product(self.generator_image(j));
            }
        }
        for j in 0..self.n {
            if p.z >> j & 1 == 1 {
                acc = acc.product(self.generator_image(self.n + j));
            }
        }
        acc
    }

    fn from_images(n: usize, images: impl Iterator<Item = Pauli>) -> Self {
        let mut columns = Vec::with_capacity(2 * n);
        let mut phases = Vec::with_capacity(2 * n);
        for p in images {
            debug_assert!(p.is_hermitian());
            columns.push(pack(p.x, p.z, n));
            phases.push(p.is_negative());
        }
        Self { n, columns, phases }
    }

    /// The element acting as `U_self U_other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_images(
            self.n,
            (0..2 * self.n).map(|g| self.conjugate_pauli(other.generator_image(g))),
        )
    }

    pub fn inverse(&self) -> Self {
        let n = self.n;
        let partner = |i: usize| if i < n { i + n } else { i - n };
        let columns: Vec<u64> = (0..2 * n)
            .map(|g| {
                let e = 1u64 << g;
                (0..2 * n)
                    .filter(|&i| symplectic_product(self.columns[partner(i)], e, n))
                    .fold(0u64, |acc, i| acc | 1 << i)
            })
            .collect();
        let mut inv = Self {
            n,
            columns,
            phases: vec![false; 2 * n],
        };
        let residual = self.compose(&inv);
        inv.phases = residual.phases;
        inv
    }

    /// Tableau of the entrywise complex conjugate `Ū`.
    pub fn complex_conjugate(&self) -> Self {
        let mut c = self.clone();
        for g in 0..2 * self.n {
            let (x, z) = split(self.columns[g], self.n);
            if (x & z).count_ones() % 2 == 1 {
                c.phases[g] = !c.phases[g];
            }
        }
        c
    }

    /// Uniformly random element of the Clifford group modulo phase.
    ///
    /// Columns are drawn pair by pair: a random vector is projected onto the
    /// symplectic complement of the pairs chosen so far, then a partner with
    /// unit symplectic product is drawn from the same complement. Each step
    /// has a number of outcomes independent of earlier choices, so every
    /// symplectic matrix is equally likely.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || n > MAX_TABLEAU_QUBITS {
            return Err(Error::Unsupported(format!("sampling on {n} qubits")));
        }
        let full = if 2 * n == 64 { u64::MAX } else { (1u64 << (2 * n)) - 1 };
        let mut columns = vec![0u64; 2 * n];
        let mut pairs: Vec<(u64, u64)> = Vec::with_capacity(n);
        let project = |mut x: u64, pairs: &[(u64, u64)]| {
            for &(v, w) in pairs {
                let a = symplectic_product(x, w, n);
                let b = symplectic_product(x, v, n);
                if a {
                    x ^= v;
                }
                if b {
                    x ^= w;
                }
            }
            x
        };
        for j in 0..n {
            let v = loop {
                let v = project(rng.random::<u64>() & full, &pairs);
                if v != 0 {
                    break v;
                }
            };
            let w = loop {
                let w = project(rng.random::<u64>() & full, &pairs);
                if symplectic_product(v, w, n) {
                    break w;
                }
            };
            columns[j] = v;
            columns[n + j] = w;
            pairs.push((v, w));
        }
        let phases = (0..2 * n).map(|_| rng.random::<bool>()).collect();
        Ok(Self { n, columns, phases })
    }

    pub fn to_record(&self) -> TableauRecord {
        TableauRecord {
            n: self.n,
            symplectic: self.symplectic_matrix(),
            phases: self.phases.iter().map(|&b| b as u8).collect(),
        }
    }
}

/// Serialisable tableau.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauRecord {
    pub n: usize,
    pub symplectic: Vec<Vec<u8>>,
    pub phases: Vec<u8>,
}

impl TableauRecord {
    pub fn to_element(&self) -> Result<CliffordElement> {
        let n = self.n;
        if self.symplectic.len() != 2 * n || self.symplectic.iter().any(|r| r.len() != 2 * n) {
            return Err(Error::DimensionMismatch("symplectic matrix must be 2n x 2n".into()));
        }
        let columns = (0..2 * n)
            .map(|c| (0..2 * n).fold(0u64, |acc, r| acc | ((self.symplectic[r][c] as u64 & 1) << r)))
            .collect();
        let phases = self.phases.iter().map(|&b| b != 0).collect();
        CliffordElement::from_parts(n, columns, phases)
    }
}
