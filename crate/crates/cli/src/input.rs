//! Readers for the JSON inputs taken by the subcommands.

use std::io::Read;
use std::path::Path;

use bergman_core::fields::RealLinearVectorField;
use bergman_core::poly::{parse_rational, GaussianRational, MixedPolynomial};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::Value;

use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Reads a file, or standard input for `-`.
pub fn read_source(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("cannot read stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
    }
}

fn parse_json(text: &str, what: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| usage(format!("malformed {what}: {e}")))
}

pub fn read_polynomial(path: &Path) -> Result<MixedPolynomial, CliError> {
    let text = read_source(path)?;
    MixedPolynomial::from_json(&text).map_err(|e| usage(format!("malformed polynomial: {e}")))
}

/// `"p/q"`, an integer, or a float taken at its exact binary value.
fn rational(v: &Value) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| usage(e.to_string())),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else {
                let f = n.as_f64().ok_or_else(|| usage("bad number"))?;
                BigRational::from_float(f).ok_or_else(|| usage("non-finite number"))
            }
        }
        _ => Err(usage(format!("expected a rational, got {v}"))),
    }
}

/// A real rational matrix given as rows, or as one flat row-major array of
/// square length.
pub fn rational_matrix(v: &Value) -> Result<Vec<Vec<BigRational>>, CliError> {
    let arr = v.as_array().ok_or_else(|| usage("matrix must be a JSON array"))?;
    if arr.iter().all(Value::is_array) {
        arr.iter()
            .map(|row| row.as_array().expect("checked").iter().map(rational).collect())
            .collect()
    } else {
        let flat: Vec<BigRational> = arr.iter().map(rational).collect::<Result<_, _>>()?;
        let k = (flat.len() as f64).sqrt().round() as usize;
        if k * k != flat.len() {
            return Err(usage(format!("flat matrix of length {} is not square", flat.len())));
        }
        Ok(flat.chunks(k).map(|c| c.to_vec()).collect())
    }
}

pub fn read_field(path: &Path) -> Result<RealLinearVectorField, CliError> {
    let v = parse_json(&read_source(path)?, "matrix")?;
    RealLinearVectorField::new(rational_matrix(&v)?).map_err(|e| usage(e.to_string()))
}

/// A JSON array of matrices.
pub fn read_fields(path: &Path) -> Result<Vec<RealLinearVectorField>, CliError> {
    let v = parse_json(&read_source(path)?, "field list")?;
    let arr = v.as_array().ok_or_else(|| usage("field list must be a JSON array of matrices"))?;
    arr.iter()
        .map(|m| RealLinearVectorField::new(rational_matrix(m)?).map_err(|e| usage(e.to_string())))
        .collect()
}

/// A number or `[re, im]`.
fn complex(v: &Value) -> Result<Complex64, CliError> {
    let num = |x: &Value| x.as_f64().ok_or_else(|| usage(format!("expected a number, got {x}")));
    match v {
        Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(num(&pair[0])?, num(&pair[1])?)),
        _ => Ok(Complex64::new(num(v)?, 0.0)),
    }
}

pub fn complex_matrix(text: &str) -> Result<nalgebra::DMatrix<Complex64>, CliError> {
    let v = parse_json(text, "matrix")?;
    let rows = v.as_array().ok_or_else(|| usage("matrix must be an array of rows"))?;
    let k = rows.len();
    let mut entries = Vec::with_capacity(k * k);
    for row in rows {
        let row = row.as_array().ok_or_else(|| usage("matrix rows must be arrays"))?;
        if row.len() != k {
            return Err(usage("matrix must be square"));
        }
        for e in row {
            entries.push(complex(e)?);
        }
    }
    if k == 0 {
        return Err(usage("matrix must be non-empty"));
    }
    Ok(nalgebra::DMatrix::from_row_slice(k, k, &entries))
}

/// Reads a matrix from a path, or parses the argument itself when it starts
/// with `[`.
pub fn inline_or_file(arg: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('[') {
        Ok(arg.to_string())
    } else {
        read_source(Path::new(arg))
    }
}

pub fn complex_point(text: &str) -> Result<Vec<Complex64>, CliError> {
    let v = parse_json(text, "point")?;
    let arr = v.as_array().ok_or_else(|| usage("point must be a JSON array"))?;
    arr.iter().map(complex).collect()
}

/// Each coordinate is a rational or `[re, im]` of rationals.
pub fn exact_point(text: &str) -> Result<Vec<GaussianRational>, CliError> {
    let v = parse_json(text, "point")?;
    let arr = v.as_array().ok_or_else(|| usage("point must be a JSON array"))?;
    arr.iter()
        .map(|c| match c {
            Value::Array(pair) if pair.len() == 2 => Ok(GaussianRational::new(rational(&pair[0])?, rational(&pair[1])?)),
            _ => Ok(GaussianRational::new(rational(c)?, BigRational::zero())),
        })
        .collect()
}

pub fn real_vector(text: &str) -> Result<Vec<f64>, CliError> {
    let v = parse_json(text, "vector")?;
    match &v {
        Value::Array(arr) => arr.iter().map(|x| x.as_f64().ok_or_else(|| usage("expected numbers"))).collect(),
        Value::Number(n) => Ok(vec![n.as_f64().ok_or_else(|| usage("bad number"))?]),
        _ => Err(usage("vector must be a number or an array of numbers")),
    }
}

/// `c0,c1,…` with each coefficient real or `re:im`.
pub fn poly_coefficients(s: &str) -> Result<Vec<Complex64>, CliError> {
    s.split(',')
        .map(|c| {
            let c = c.trim();
            let (re, im) = c.split_once(':').unwrap_or((c, "0"));
            let p = |x: &str| x.trim().parse::<f64>().map_err(|_| usage(format!("bad coefficient {c:?}")));
            Ok(Complex64::new(p(re)?, p(im)?))
        })
        .collect()
}
