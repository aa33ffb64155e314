//! JSON interchange: matrices as separate row-major `re`/`im` arrays,
//! spectra as `{"p": [...]}`, and a writer that prints every float with 17
//! significant digits so doubles round-trip exactly.

use std::io::{self, Write};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::matrix::ComplexMatrix;
use crate::states::Spectrum;

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let mut re = vec![vec![0.0; n]; n];
        let mut im = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let z = self.entry(i, j);
                re[i][j] = z.re;
                im[i][j] = z.im;
            }
        }
        MatrixJson { dim: n, re, im }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        ComplexMatrix::from_parts(raw.dim, &raw.re, &raw.im).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumJson {
    p: Vec<f64>,
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    serde_json::from_str(text).map_err(|e| Error::InvalidState {
        reason: format!("malformed state JSON: {}", e),
    })
}

pub fn parse_spectrum(text: &str) -> Result<Spectrum> {
    let raw: SpectrumJson = serde_json::from_str(text).map_err(|e| Error::InvalidSpectrum {
        reason: format!("malformed spectrum JSON: {}", e),
    })?;
    Spectrum::new(raw.p)
}

pub fn spectrum_to_value(p: &Spectrum) -> serde_json::Value {
    serde_json::json!({ "p": p.values() })
}

/// Serialize with floats rendered as `{:.16e}` (17 significant digits).
pub fn to_string_sig17<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter);
    value.serialize(&mut ser).map_err(|e| Error::InvalidState {
        reason: format!("serialization failed: {}", e),
    })?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{:.16e}", value)
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{:e}", value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::C64;
    use crate::numerics::random::random_density;

    #[test]
    fn matrix_round_trip_is_exact() {
        let m = ComplexMatrix::new(random_density(4, 3, 42).into_raw()).unwrap();
        let text = to_string_sig17(&m).unwrap();
        let back = parse_matrix(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn matrix_format_fields() {
        let m = ComplexMatrix::from_fn(2, |i, j| {
            C64::new((i * 2 + j) as f64, -((i * 2 + j) as f64))
        })
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_string_sig17(&m).unwrap()).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["re"][1][0].as_f64().unwrap(), 2.0);
        assert_eq!(v["im"][1][0].as_f64().unwrap(), -2.0);
    }

    #[test]
    fn malformed_inputs_surface_as_errors() {
        assert!(parse_matrix("{").is_err());
        assert!(parse_matrix(r#"{"dim": 2, "re": [[1, 0]], "im": [[0, 0]]}"#).is_err());
        assert!(parse_spectrum(r#"{"p": [0.9, 0.2]}"#).is_err());
        assert!(parse_spectrum(r#"{"p": [0.5, 0.5]}"#).is_ok());
    }

    #[test]
    fn seventeen_digit_floats() {
        let text = to_string_sig17(&serde_json::json!({ "x": 0.1 })).unwrap();
        assert_eq!(text, r#"{"x":1.0000000000000001e-1}"#);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["x"].as_f64().unwrap(), 0.1);
    }
}
