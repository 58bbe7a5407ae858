//! JSON file formats for slice and cube functions, level weight tables and
//! Fourier tables. Every number is stored as an exact `p/q` string.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cube::{CubeFunction, FourierExpansion};
use crate::error::{Result, SliceError};
use crate::harmonic::LevelWeights;
use crate::rational::{format_q, parse_q, to_f64, Q};
use crate::slice::{make_domain, SliceFunction};

#[derive(Serialize, Deserialize)]
struct SliceFile {
    kind: String,
    n: usize,
    ell: usize,
    values: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CubeFile {
    kind: String,
    n: usize,
    values: Vec<String>,
}

#[derive(Deserialize)]
struct KindProbe {
    kind: String,
}

/// A function read from disk, whichever kind it is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionFile {
    Slice(SliceFunction),
    Cube(CubeFunction),
}

fn parse_values(values: &[String]) -> Result<Vec<Q>> {
    values.iter().map(|v| parse_q(v)).collect()
}

fn render_values(values: &[Q]) -> Vec<String> {
    values.iter().map(format_q).collect()
}

fn to_pretty(value: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn slice_to_json(f: &SliceFunction) -> Result<String> {
    let dom = f.domain();
    to_pretty(&SliceFile {
        kind: "slice".into(),
        n: dom.n(),
        ell: dom.ell(),
        values: render_values(f.values()),
    })
}

pub fn cube_to_json(f: &CubeFunction) -> Result<String> {
    to_pretty(&CubeFile {
        kind: "cube".into(),
        n: f.n(),
        values: render_values(f.values()),
    })
}

fn wrong_kind(expected: &str, got: &str) -> SliceError {
    SliceError::Parse {
        pos: 0,
        msg: format!("expected kind \"{expected}\", found \"{got}\""),
    }
}

pub fn slice_from_json(text: &str) -> Result<SliceFunction> {
    let file: SliceFile = serde_json::from_str(text)?;
    if file.kind != "slice" {
        return Err(wrong_kind("slice", &file.kind));
    }
    let dom = make_domain(file.n, file.ell)?;
    SliceFunction::new(dom, parse_values(&file.values)?)
}

pub fn cube_from_json(text: &str) -> Result<CubeFunction> {
    let file: CubeFile = serde_json::from_str(text)?;
    if file.kind != "cube" {
        return Err(wrong_kind("cube", &file.kind));
    }
    CubeFunction::new(file.n, parse_values(&file.values)?)
}

/// Reads either kind, dispatching on the `kind` field.
pub fn function_from_json(text: &str) -> Result<FunctionFile> {
    let probe: KindProbe = serde_json::from_str(text)?;
    match probe.kind.as_str() {
        "slice" => Ok(FunctionFile::Slice(slice_from_json(text)?)),
        "cube" => Ok(FunctionFile::Cube(cube_from_json(text)?)),
        other => Err(wrong_kind("slice\" or \"cube", other)),
    }
}

pub fn write_slice(path: impl AsRef<Path>, f: &SliceFunction) -> Result<()> {
    fs::write(path, slice_to_json(f)?)?;
    Ok(())
}

pub fn write_cube(path: impl AsRef<Path>, f: &CubeFunction) -> Result<()> {
    fs::write(path, cube_to_json(f)?)?;
    Ok(())
}

pub fn read_function(path: impl AsRef<Path>) -> Result<FunctionFile> {
    function_from_json(&fs::read_to_string(path)?)
}

pub fn read_slice(path: impl AsRef<Path>) -> Result<SliceFunction> {
    match read_function(path)? {
        FunctionFile::Slice(f) => Ok(f),
        FunctionFile::Cube(_) => Err(wrong_kind("slice", "cube")),
    }
}

pub fn read_cube(path: impl AsRef<Path>) -> Result<CubeFunction> {
    match read_function(path)? {
        FunctionFile::Cube(f) => Ok(f),
        FunctionFile::Slice(_) => Err(wrong_kind("cube", "slice")),
    }
}

#[derive(Serialize)]
struct WeightRow {
    level: usize,
    weight: String,
    approx: f64,
}

#[derive(Serialize)]
struct WeightTable {
    kind: &'static str,
    n: usize,
    ell: usize,
    levels: Vec<WeightRow>,
    total: String,
}

/// Level weights as a JSON table.
pub fn level_weights_to_json(n: usize, ell: usize, w: &LevelWeights) -> Result<String> {
    let levels = w
        .weights
        .iter()
        .enumerate()
        .map(|(level, v)| WeightRow {
            level,
            weight: format_q(v),
            approx: to_f64(v),
        })
        .collect();
    to_pretty(&WeightTable {
        kind: "level-weights",
        n,
        ell,
        levels,
        total: format_q(&w.total()),
    })
}

#[derive(Serialize, Deserialize)]
struct FourierRow {
    mask: u64,
    coefficient: String,
}

#[derive(Serialize, Deserialize)]
struct FourierTable {
    kind: String,
    n: usize,
    coefficients: Vec<FourierRow>,
}

/// Nonzero Fourier coefficients as `(subset bitmask, p/q)` rows.
pub fn fourier_to_json(e: &FourierExpansion) -> Result<String> {
    let coefficients = e
        .nonzero()
        .into_iter()
        .map(|(mask, c)| FourierRow {
            mask,
            coefficient: format_q(c),
        })
        .collect();
    to_pretty(&FourierTable {
        kind: "fourier".into(),
        n: e.n(),
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn slice_round_trip_is_exact() {
        let d = make_domain(5, 2).unwrap();
        let mut k = 0;
        let f = SliceFunction::from_fn(&d, |_| {
            k += 1;
            frac(k * 7 - 30, k + 2)
        });
        let text = slice_to_json(&f).unwrap();
        assert!(text.contains("\"kind\": \"slice\""));
        let back = slice_from_json(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(slice_to_json(&back).unwrap(), text);
    }

    #[test]
    fn cube_round_trip_and_kind_check() {
        let f = CubeFunction::majority(3).unwrap();
        let text = cube_to_json(&f).unwrap();
        assert_eq!(cube_from_json(&text).unwrap(), f);
        assert!(slice_from_json(&text).is_err());
        assert_eq!(function_from_json(&text).unwrap(), FunctionFile::Cube(f));
    }

    #[test]
    fn rejects_wrong_length() {
        let text = r#"{"kind":"slice","n":3,"ell":1,"values":["1/1","0/1"]}"#;
        assert!(slice_from_json(text).is_err());
    }
}
