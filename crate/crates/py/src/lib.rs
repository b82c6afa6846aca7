//! Python bindings. Every function returns a JSON string so the Python side
//! sees the same shapes as the command line tool.

use serde_json::{json, Value};

use spectral_stokes::hor::{predicted_signature, recipe_spectral_pairs, recipe_spectrum, scal_to_poly, HorScal};
use spectral_stokes::real::parse_real_list;
use spectral_stokes::{chain, lowdim, selftest, Real, Result};

fn value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

pub fn solve2_json(a: &str) -> Result<String> {
    let a: Real = a.parse()?;
    Ok(value(&lowdim::solve2(&a)?).to_string())
}

pub fn chain_verify_json(a: &[i64]) -> Result<String> {
    Ok(value(&chain::verify_spectrum_shift(a)?).to_string())
}

pub fn hor_spectrum_json(k: u8, beta: &str) -> Result<String> {
    let b = HorScal { k, beta: parse_real_list(beta)? };
    scal_to_poly(&b)?;
    let alphas = recipe_spectrum(&b);
    Ok(json!({
        "k": k,
        "spectrum": value(&alphas),
        "spp": value(&recipe_spectral_pairs(&b)?),
        "signature": value(&predicted_signature(&alphas)),
    })
    .to_string())
}

pub fn selftest_json(criterion: usize) -> String {
    value(&selftest::run(criterion)).to_string()
}

#[cfg(feature = "extension-module")]
mod module {
    use pyo3::exceptions::PyValueError;
    use pyo3::prelude::*;

    fn err(e: ::spectral_stokes::Error) -> PyErr {
        PyValueError::new_err(e.to_string())
    }

    /// Angles and classification for the 2x2 Stokes matrix with entry `a`.
    #[pyfunction]
    fn solve2(a: &str) -> PyResult<String> {
        super::solve2_json(a).map_err(err)
    }

    #[pyfunction]
    fn chain_verify(a: Vec<i64>) -> PyResult<String> {
        super::chain_verify_json(&a).map_err(err)
    }

    /// `beta` is a comma separated list such as `"1/3,2/3"`.
    #[pyfunction]
    fn hor_spectrum(k: u8, beta: &str) -> PyResult<String> {
        super::hor_spectrum_json(k, beta).map_err(err)
    }

    #[pyfunction]
    fn selftest(criterion: usize) -> PyResult<String> {
        if !(1..=9).contains(&criterion) {
            return Err(PyValueError::new_err("criterion must be in 1..=9"));
        }
        Ok(super::selftest_json(criterion))
    }

    #[pymodule]
    fn spectral_stokes(m: &Bound<'_, PyModule>) -> PyResult<()> {
        m.add_function(wrap_pyfunction!(solve2, m)?)?;
        m.add_function(wrap_pyfunction!(chain_verify, m)?)?;
        m.add_function(wrap_pyfunction!(hor_spectrum, m)?)?;
        m.add_function(wrap_pyfunction!(selftest, m)?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve2_row() {
        let v: Value = serde_json::from_str(&solve2_json("-2").unwrap()).unwrap();
        assert_eq!(v["beta1"], "0");
        assert!(solve2_json("5").is_err());
    }

    #[test]
    fn chain_and_hor() {
        let v: Value = serde_json::from_str(&chain_verify_json(&[3, 2]).unwrap()).unwrap();
        assert_eq!(v["holds"], true);
        let v: Value = serde_json::from_str(&hor_spectrum_json(1, "1/3,2/3").unwrap()).unwrap();
        assert_eq!(v["spectrum"].as_array().unwrap().len(), 2);
    }
}
