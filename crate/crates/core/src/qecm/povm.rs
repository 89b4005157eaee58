//! Two-outcome measurements.

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;

pub const POVM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct BinaryPovm {
    elements: [ComplexMatrix; 2],
}

impl BinaryPovm {
    /// Checks positivity of both elements and completeness.
    pub fn new(e0: ComplexMatrix, e1: ComplexMatrix) -> Result<Self> {
        let d = e0.rows();
        if !e0.is_square() || e1.rows() != d || e1.cols() != d {
            return Err(Error::DimensionMismatch("POVM elements differ in shape".into()));
        }
        for e in [&e0, &e1] {
            let dev = e.hermitian_deviation();
            if dev > 1e-12 {
                return Err(Error::NotHermitian(dev));
            }
            let min = e.min_eigenvalue();
            if min < -POVM_TOL {
                return Err(Error::InvalidMeasurement(format!("element has eigenvalue {min:e}")));
            }
        }
        let dev = (&e0 + &e1).max_abs_diff(&ComplexMatrix::identity(d));
        if dev > POVM_TOL {
            return Err(Error::InvalidMeasurement(format!(
                "elements sum to identity only within {dev:e}"
            )));
        }
        Ok(Self {
            elements: [e0.hermitian_part(), e1.hermitian_part()],
        })
    }

    /// `{P, I - P}` for an orthogonal projector `P`.
    pub fn from_projector(p: ComplexMatrix) -> Result<Self> {
        let comp = &ComplexMatrix::identity(p.rows()) - &p;
        let m = Self::new(p, comp)?;
        m.check_projective()?;
        Ok(m)
    }

    pub(crate) fn from_parts_unchecked(e0: ComplexMatrix, e1: ComplexMatrix) -> Self {
        Self { elements: [e0, e1] }
    }

    /// Always answers `bit`.
    pub fn constant(d: usize, bit: usize) -> Self {
        let mut e = [ComplexMatrix::zeros(d, d), ComplexMatrix::zeros(d, d)];
        e[bit & 1] = ComplexMatrix::identity(d);
        Self { elements: e }
    }

    /// Answers a fair coin flip.
    pub fn coin(d: usize) -> Self {
        let h = ComplexMatrix::identity(d).scale(0.5);
        Self {
            elements: [h.clone(), h],
        }
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn element(&self, x: usize) -> &ComplexMatrix {
        &self.elements[x]
    }

    pub fn elements(&self) -> &[ComplexMatrix; 2] {
        &self.elements
    }

    pub fn check_projective(&self) -> Result<()> {
        for e in &self.elements {
            let dev = (e * e).max_abs_diff(e);
            if dev > POVM_TOL {
                return Err(Error::InvalidMeasurement(format!(
                    "element is not a projector ({dev:e})"
                )));
            }
        }
        Ok(())
    }

    pub fn is_projective(&self) -> bool {
        self.check_projective().is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let p = ComplexMatrix::basis_projector(2, 0);
        let m = BinaryPovm::from_projector(p.clone()).unwrap();
        assert!(m.is_projective());
        assert!(BinaryPovm::coin(2).check_projective().is_err());
        assert!(matches!(
            BinaryPovm::new(p.clone(), p),
            Err(Error::InvalidMeasurement(_))
        ));
    }
}
