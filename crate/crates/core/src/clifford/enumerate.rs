//! Exhaustive listing of small Clifford groups.

use super::tableau::{symplectic_product, CliffordElement};
use crate::error::{Error, Result};

/// `2^(n^2 + 2n) prod_{j=1..n} (4^j - 1)`.
pub fn clifford_group_order(n: u32) -> u128 {
    let mut order: u128 = 1 << (n * n + 2 * n);
    for j in 1..=n {
        order *= (1u128 << (2 * j)) - 1;
    }
    order
}

/// All symplectic column sets on `n` qubits, in lexicographic order of
/// choices.
fn symplectic_bases(n: usize) -> Vec<Vec<u64>> {
    let dim = 1u64 << (2 * n);
    let mut out = Vec::new();
    let mut cols = vec![0u64; 2 * n];
    fn rec(j: usize, n: usize, dim: u64, cols: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if j == n {
            out.push(cols.clone());
            return;
        }
        let orth = |x: u64, cols: &[u64]| {
            (0..j).all(|k| !symplectic_product(x, cols[k], n) && !symplectic_product(x, cols[n + k], n))
        };
        for v in 1..dim {
            if !orth(v, cols) {
                continue;
            }
            for w in 1..dim {
                if !orth(w, cols) || !symplectic_product(v, w, n) {
                    continue;
                }
                cols[j] = v;
                cols[n + j] = w;
                rec(j + 1, n, dim, cols, out);
            }
        }
        cols[j] = 0;
        cols[n + j] = 0;
    }
    rec(0, n, dim, &mut cols, &mut out);
    out
}

/// Every Clifford element on `n` qubits modulo global phase.
pub fn enumerate_clifford(n: usize) -> Result<Vec<CliffordElement>> {
    if !(1..=2).contains(&n) {
        return Err(Error::Unsupported(format!(
            "enumeration supports n in {{1, 2}}, got {n}"
        )));
    }
    let mut out = Vec::new();
    for cols in symplectic_bases(n) {
        for bits in 0..(1u32 << (2 * n)) {
            let phases = (0..2 * n).map(|g| bits >> g & 1 == 1).collect();
            out.push(CliffordElement::from_parts(n, cols.clone(), phases)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn orders() {
        assert_eq!(clifford_group_order(1), 24);
        assert_eq!(clifford_group_order(2), 11520);
        assert_eq!(enumerate_clifford(1).unwrap().len(), 24);
        let two = enumerate_clifford(2).unwrap();
        assert_eq!(two.len(), 11520);
        let set: HashSet<_> = two.iter().collect();
        assert_eq!(set.len(), 11520);
    }

    #[test]
    fn contains_hadamard() {
        let h = CliffordElement::hadamard(1, 0);
        assert!(enumerate_clifford(1).unwrap().contains(&h));
    }

    #[test]
    fn out_of_range() {
        assert!(enumerate_clifford(3).is_err());
        assert!(enumerate_clifford(0).is_err());
    }
}
