//! Wavefunction files: a JSON document holding the grid and the interleaved
//! `(re, im)` samples, either as a number array or as base64 of little-endian
//! f64 values; plus a CSV export for plotting.

use std::io::Write;
use std::path::Path;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{GridSpec, GriddedWaveFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    #[default]
    Array,
    Base64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Body {
    Array(Vec<f64>),
    Base64(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct WaveFile {
    grid: GridSpec,
    encoding: Encoding,
    data: Body,
}

pub fn to_json(wf: &GriddedWaveFunction, encoding: Encoding) -> Result<String> {
    let flat: Vec<f64> = wf.amplitudes.iter().flat_map(|a| [a.re, a.im]).collect();
    let data = match encoding {
        Encoding::Array => Body::Array(flat),
        Encoding::Base64 => {
            let bytes: Vec<u8> = flat.iter().flat_map(|v| v.to_le_bytes()).collect();
            Body::Base64(STANDARD.encode(bytes))
        }
    };
    Ok(serde_json::to_string(&WaveFile { grid: wf.grid.clone(), encoding, data })?)
}

pub fn from_json(text: &str) -> Result<GriddedWaveFunction> {
    let file: WaveFile = serde_json::from_str(text)?;
    file.grid.validate()?;
    let flat: Vec<f64> = match (file.encoding, file.data) {
        (Encoding::Array, Body::Array(v)) => v,
        (Encoding::Base64, Body::Base64(s)) => {
            let bytes = STANDARD.decode(s.as_bytes()).map_err(|e| Error::Invalid(format!("base64: {e}")))?;
            if bytes.len() % 8 != 0 {
                return Err(Error::Invalid("base64 body is not a whole number of f64 values".into()));
            }
            bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect()
        }
        (enc, _) => return Err(Error::Invalid(format!("data does not match encoding {enc:?}"))),
    };
    if flat.len() != 2 * file.grid.len() {
        return Err(Error::Dimension(format!(
            "grid has {} samples but the body holds {} values",
            file.grid.len(),
            flat.len()
        )));
    }
    let amps = flat.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
    GriddedWaveFunction::new(file.grid, amps)
}

pub fn read(path: &Path) -> Result<GriddedWaveFunction> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn write(path: &Path, wf: &GriddedWaveFunction, encoding: Encoding) -> Result<()> {
    std::fs::write(path, to_json(wf, encoding)?)?;
    Ok(())
}

/// Columns `i0..i{n-1}, x0..x{n-1}, re, im`, one row per sample.
pub fn write_csv<W: Write>(mut out: W, wf: &GriddedWaveFunction) -> Result<()> {
    let n = wf.n();
    let header: Vec<String> = (0..n)
        .map(|i| format!("i{i}"))
        .chain((0..n).map(|i| format!("x{i}")))
        .chain(["re".to_string(), "im".to_string()])
        .collect();
    writeln!(out, "{}", header.join(","))?;
    let mut idx = vec![0; n];
    for (k, a) in wf.amplitudes.iter().enumerate() {
        wf.grid.unflatten(k, &mut idx);
        let mut fields: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        fields.extend((0..n).map(|ax| format!("{}", wf.grid.coord(ax, idx[ax]))));
        fields.push(format!("{}", a.re));
        fields.push(format!("{}", a.im));
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}
