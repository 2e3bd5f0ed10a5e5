//! JSON forms of vectors and matrices: real parts and optional imaginary
//! parts, matrices row-major.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Field, FieldKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorData {
    pub rows: usize,
    pub cols: usize,
    pub entries_real: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries_imag: Option<Vec<f64>>,
}

impl OperatorData {
    pub fn from_matrix<S: Field>(m: &DMatrix<S>) -> Self {
        let mut re = Vec::with_capacity(m.len());
        let mut im = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)].to_c64();
                re.push(z.re);
                im.push(z.im);
            }
        }
        OperatorData {
            rows: m.nrows(),
            cols: m.ncols(),
            entries_real: re,
            entries_imag: (S::KIND == FieldKind::Complex).then_some(im),
        }
    }

    pub fn field(&self) -> FieldKind {
        if self.entries_imag.is_some() {
            FieldKind::Complex
        } else {
            FieldKind::Real
        }
    }

    pub fn to_matrix<S: Field>(&self) -> Result<DMatrix<S>> {
        let n = self.rows * self.cols;
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidParameter(
                "operator must have positive dimensions".into(),
            ));
        }
        if self.entries_real.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.entries_real.len(),
            });
        }
        if let Some(im) = &self.entries_imag {
            if im.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: im.len(),
                });
            }
            if S::KIND == FieldKind::Real && im.iter().any(|&v| v != 0.0) {
                return Err(Error::FieldMismatch {
                    space: "real",
                    scalars: "complex",
                });
            }
        }
        if let Some(k) = self.entries_real.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        Ok(DMatrix::from_fn(self.rows, self.cols, |i, j| {
            let k = i * self.cols + j;
            let im = self.entries_imag.as_ref().map_or(0.0, |v| v[k]);
            S::from_c64(Complex64::new(self.entries_real[k], im))
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorData {
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl VectorData {
    pub fn from_vector<S: Field>(v: &DVector<S>) -> Self {
        let re = v.iter().map(|z| z.to_c64().re).collect();
        let im = (S::KIND == FieldKind::Complex).then(|| v.iter().map(|z| z.to_c64().im).collect());
        VectorData { re, im }
    }

    pub fn to_vector<S: Field>(&self) -> Result<DVector<S>> {
        if let Some(im) = &self.im {
            if im.len() != self.re.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.re.len(),
                    found: im.len(),
                });
            }
            if S::KIND == FieldKind::Real && im.iter().any(|&v| v != 0.0) {
                return Err(Error::FieldMismatch {
                    space: "real",
                    scalars: "complex",
                });
            }
        }
        Ok(DVector::from_fn(self.re.len(), |i, _| {
            let im = self.im.as_ref().map_or(0.0, |v| v[i]);
            S::from_c64(Complex64::new(self.re[i], im))
        }))
    }
}

pub fn serialize_matrix<S: Field, Ser: Serializer>(
    m: &DMatrix<S>,
    s: Ser,
) -> std::result::Result<Ser::Ok, Ser::Error> {
    OperatorData::from_matrix(m).serialize(s)
}

pub fn serialize_vector<S: Field, Ser: Serializer>(
    v: &DVector<S>,
    s: Ser,
) -> std::result::Result<Ser::Ok, Ser::Error> {
    VectorData::from_vector(v).serialize(s)
}

pub fn serialize_opt_vector<S: Field, Ser: Serializer>(
    v: &Option<DVector<S>>,
    s: Ser,
) -> std::result::Result<Ser::Ok, Ser::Error> {
    v.as_ref().map(VectorData::from_vector).serialize(s)
}

/// Writes JSON with every float printed to 17 significant digits.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
        value: f64,
    ) -> std::io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
        value: f32,
    ) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_precision_round_trips() {
        let x = [0.1f64, 1.0 / 3.0, -2.5e-300, 12345.678];
        let s = to_json_string(&x).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x.to_vec());
    }

    #[test]
    fn operator_data_is_row_major() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let d = OperatorData::from_matrix(&m);
        assert_eq!(d.entries_real, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(d.to_matrix::<f64>().unwrap(), m);
    }

    #[test]
    fn imaginary_parts_rejected_for_real() {
        let d = OperatorData {
            rows: 1,
            cols: 1,
            entries_real: vec![1.0],
            entries_imag: Some(vec![0.5]),
        };
        assert!(d.to_matrix::<f64>().is_err());
        assert!(d.to_matrix::<Complex64>().is_ok());
    }
}
