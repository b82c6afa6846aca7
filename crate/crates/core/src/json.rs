//! JSON shapes shared by the command line and the Python bindings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polycore::RealMatrix;
use crate::real::Real;
use crate::spectra::Spp;

/// `{"n": 3, "entries": [[1, "1/2", 0], ...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<Real>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &RealMatrix) -> Self {
        MatrixFile { n: m.rows, entries: m.to_rows() }
    }

    pub fn to_matrix(&self) -> Result<RealMatrix> {
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(Error::Dimension(format!("expected a {0}x{0} matrix", self.n)));
        }
        Matrix::from_rows(self.entries.clone())
    }

    /// Like [`MatrixFile::to_matrix`], additionally requiring ones on the
    /// diagonal and zeros below it.
    pub fn to_unit_upper(&self) -> Result<RealMatrix> {
        let m = self.to_matrix()?;
        if !m.is_unit_upper_triangular() {
            return Err(Error::Invalid("matrix is not unit upper triangular".into()));
        }
        Ok(m)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn spp_to_json(s: &Spp) -> Value {
    serde_json::to_value(s).expect("spectral pairs serialize")
}

pub fn spp_from_json(v: &Value) -> Result<Spp> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
}

/// Rounds every non-integer JSON number to `digits` decimals.
pub fn with_precision(v: Value, digits: usize) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            let t = format!("{x:.digits$}");
            t.parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map(Value::Number)
                .unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(|x| with_precision(x, digits)).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, with_precision(x, digits))).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spp_shape() {
        let s = Spp::from_list(&[(Real::frac(1, 2), 0), (Real::frac(-1, 2), 2)]);
        let v = spp_to_json(&s);
        assert_eq!(
            v.to_string(),
            r#"[{"alpha":"-1/2","level":2,"mult":1},{"alpha":"1/2","level":0,"mult":1}]"#
        );
        assert_eq!(spp_from_json(&v).unwrap(), s);
    }

    #[test]
    fn matrix_file() {
        let f = MatrixFile::parse(r#"{"n":2,"entries":[[1,"1/2"],[0,1]]}"#).unwrap();
        let m = f.to_unit_upper().unwrap();
        assert_eq!(*m.get(0, 1), Real::frac(1, 2));
        let back = serde_json::to_string(&MatrixFile::from_matrix(&m)).unwrap();
        assert_eq!(back, r#"{"n":2,"entries":[["1","1/2"],["0","1"]]}"#);
        assert_eq!(MatrixFile::parse(&back).unwrap(), f);
        assert!(MatrixFile::parse(r#"{"n":3,"entries":[[1]]}"#).unwrap().to_matrix().is_err());
        assert!(MatrixFile::parse(r#"{"n":2,"entries":[[1,0],[2,1]]}"#).unwrap().to_unit_upper().is_err());
    }

    #[test]
    fn precision() {
        let v = serde_json::json!({"x": 0.123456789, "n": 3, "l": [1.5, "1/3"]});
        assert_eq!(with_precision(v, 3).to_string(), r#"{"l":[1.5,"1/3"],"n":3,"x":0.123}"#);
    }
}
