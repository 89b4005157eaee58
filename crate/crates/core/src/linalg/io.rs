//! JSON interchange for matrices and states:
//! `{"dims":[...],"re":[...],"im":[...]}`, row-major.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64};
use super::state::DensityOperator;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    #[serde(rename = "schemaVersion", default = "default_schema")]
    pub schema_version: u32,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

impl MatrixRecord {
    pub fn from_matrix(m: &ComplexMatrix, dims: &[usize]) -> Self {
        Self {
            dims: dims.to_vec(),
            re: m.data().iter().map(|z| z.re).collect(),
            im: m.data().iter().map(|z| z.im).collect(),
            schema_version: SCHEMA_VERSION,
        }
    }

    pub fn from_state(rho: &DensityOperator) -> Self {
        Self::from_matrix(rho.matrix(), rho.dims())
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let d: usize = self.dims.iter().product();
        if self.re.len() != d * d || self.im.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} need {} entries, got re={} im={}",
                self.dims,
                d * d,
                self.re.len(),
                self.im.len()
            )));
        }
        let data = self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)).collect();
        ComplexMatrix::from_vec(d, d, data)
    }

    /// Validates the record as a normalised state. Invalid states are
    /// rejected rather than repaired.
    pub fn to_state(&self) -> Result<DensityOperator> {
        DensityOperator::new(self.to_matrix()?, self.dims.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub fn read_state(path: &Path) -> Result<DensityOperator> {
    let text = std::fs::read_to_string(path)?;
    MatrixRecord::from_json(&text)?.to_state()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn bit_exact_round_trip() {
        let vals = [
            0.1,
            -0.0,
            1.0 / 3.0,
            5e-324,
            f64::MAX,
            -2.5e-17,
            0.7071067811865476,
            1e300,
        ];
        let m = ComplexMatrix::from_fn(4, 4, |r, c| C64::new(vals[(r + c) % 8], vals[(r * 3 + c) % 8]));
        let rec = MatrixRecord::from_matrix(&m, &[2, 2]);
        let back = MatrixRecord::from_json(&rec.to_json().unwrap()).unwrap();
        let m2 = back.to_matrix().unwrap();
        for (a, b) in m.data().iter().zip(m2.data()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn accepts_plain_format_without_schema() {
        let rec = MatrixRecord::from_json(r#"{"dims":[2],"re":[1,0,0,0],"im":[0,0,0,0]}"#).unwrap();
        let rho = rec.to_state().unwrap();
        assert_eq!(rho.dims(), &[2]);
    }

    #[test]
    fn wrong_entry_count() {
        let rec = MatrixRecord::from_json(r#"{"dims":[2],"re":[1,0,0],"im":[0,0,0]}"#).unwrap();
        assert!(matches!(rec.to_matrix(), Err(Error::DimensionMismatch(_))));
    }
}
