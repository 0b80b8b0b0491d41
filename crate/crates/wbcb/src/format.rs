//! Codebook JSON and CSV writers.
//!
//! Codebook layout:
//!
//! ```json
//! {"version":1,"config":{"f_c_hz":..,"b_hz":..,"n":..,"l":..},
//!  "delta_omega":..,"boundaries_rad":[..],"beams":[[[re,im],..],..]}
//! ```
//!
//! Every float is written with 17 significant digits, so reading a file and
//! writing it back reproduces it byte for byte.

use std::io::{self, Write};

use num_complex::Complex;
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;
use wbcb_core::zones::ZonePartition;
use wbcb_core::{BeamVector, Codebook, Error as CoreError, SystemConfig};

use crate::error::CliError;

pub const SCHEMA_VERSION: u64 = 1;

/// Compact output with floats as `d.dddddddddddddddde±x`.
struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

#[derive(Serialize)]
struct ConfigBlock {
    f_c_hz: f64,
    b_hz: f64,
    n: usize,
    l: usize,
}

#[derive(Serialize)]
struct CodebookFile<'a> {
    version: u64,
    config: ConfigBlock,
    delta_omega: f64,
    boundaries_rad: &'a [f64],
    beams: Vec<Vec<[f64; 2]>>,
}

/// Serializes `cb` under `cfg`'s carrier and bandwidth, newline-terminated.
pub fn codebook_to_json(cfg: &SystemConfig, cb: &Codebook) -> Vec<u8> {
    let file = CodebookFile {
        version: SCHEMA_VERSION,
        config: ConfigBlock {
            f_c_hz: cfg.carrier_hz,
            b_hz: cfg.bandwidth_hz,
            n: cb.elements(),
            l: cb.len(),
        },
        delta_omega: cb.partition.delta_omega,
        boundaries_rad: &cb.partition.boundaries,
        beams: cb
            .beams
            .iter()
            .map(|b| b.weights().iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    };
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    file.serialize(&mut ser).expect("in-memory serialization");
    out.push(b'\n');
    out
}

/// A codebook file together with the system it was written for. Grid sizes not
/// stored in the file take their defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedCodebook {
    pub system: SystemConfig,
    pub codebook: Codebook,
}

fn at(pointer: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{pointer}: {msg}"))
}

fn field<'a>(v: &'a Value, pointer: &str) -> Result<&'a Value, CliError> {
    v.pointer(pointer).ok_or_else(|| at(pointer, "missing"))
}

fn number(v: &Value, pointer: &str) -> Result<f64, CliError> {
    field(v, pointer)?
        .as_f64()
        .ok_or_else(|| at(pointer, "expected a number"))
}

fn count(v: &Value, pointer: &str) -> Result<usize, CliError> {
    field(v, pointer)?
        .as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| at(pointer, "expected a non-negative integer"))
}

fn array<'a>(v: &'a Value, pointer: &str, len: usize) -> Result<&'a [Value], CliError> {
    let a = field(v, pointer)?
        .as_array()
        .ok_or_else(|| at(pointer, "expected an array"))?;
    if a.len() != len {
        return Err(at(pointer, format!("expected {len} entries, found {}", a.len())));
    }
    Ok(a)
}

/// Parses and validates a codebook file, reporting the JSON pointer of the
/// first offending field.
pub fn codebook_from_json(text: &str) -> Result<LoadedCodebook, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| at("", e))?;
    if !v.is_object() {
        return Err(at("", "expected an object"));
    }
    let version = count(&v, "/version")?;
    if version as u64 != SCHEMA_VERSION {
        return Err(at("/version", format!("unsupported version {version}")));
    }
    let fc = number(&v, "/config/f_c_hz")?;
    let b = number(&v, "/config/b_hz")?;
    let n = count(&v, "/config/n")?;
    let l = count(&v, "/config/l")?;
    let system = SystemConfig::new(fc, b, n, l).map_err(|e| at("/config", e))?;
    let delta_omega = number(&v, "/delta_omega")?;

    let boundaries = array(&v, "/boundaries_rad", l + 1)?
        .iter()
        .enumerate()
        .map(|(i, b)| b.as_f64().ok_or_else(|| at(&format!("/boundaries_rad/{i}"), "expected a number")))
        .collect::<Result<Vec<f64>, _>>()?;
    let partition =
        ZonePartition::from_boundaries(&system, boundaries, delta_omega).map_err(|e| at("/boundaries_rad", e))?;

    let mut beams = Vec::with_capacity(l);
    for (i, beam) in array(&v, "/beams", l)?.iter().enumerate() {
        let ptr = format!("/beams/{i}");
        let entries = array(beam, "", n).map_err(|_| at(&ptr, format!("expected an array of {n} entries")))?;
        let mut weights = Vec::with_capacity(n);
        for (k, e) in entries.iter().enumerate() {
            let p = format!("{ptr}/{k}");
            let pair = e
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| at(&p, "expected [re, im]"))?;
            let re = pair[0].as_f64().ok_or_else(|| at(&format!("{p}/0"), "expected a number"))?;
            let im = pair[1].as_f64().ok_or_else(|| at(&format!("{p}/1"), "expected a number"))?;
            weights.push(Complex::new(re, im));
        }
        let w = BeamVector::new(weights).map_err(|e| match e {
            CoreError::ModulusViolation { index, .. } => at(&format!("{ptr}/{index}"), e),
            other => at(&ptr, other),
        })?;
        beams.push(w);
    }
    let codebook = Codebook::new(beams, partition, None).map_err(|e| at("/beams", e))?;
    Ok(LoadedCodebook { system, codebook })
}

/// Shortest representation that reads back to the same `f64`.
pub fn csv_float(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use wbcb_core::narrowband::narrowband_codebook;

    fn sample() -> (SystemConfig, Codebook) {
        let cfg = SystemConfig::new(140e9, 10e9, 4, 3).unwrap();
        let cb = narrowband_codebook(&cfg).unwrap();
        (cfg, cb)
    }

    #[test]
    fn float_format() {
        let mut out = Vec::new();
        FixedFloats.write_f64(&mut out, 140e9).unwrap();
        assert_eq!(out, b"1.4000000000000000e11");
        let mut out = Vec::new();
        FixedFloats.write_f64(&mut out, -0.001).unwrap();
        assert_eq!(out, b"-1.0000000000000000e-3");
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let (cfg, cb) = sample();
        let a = codebook_to_json(&cfg, &cb);
        assert!(a.starts_with(br#"{"version":1,"config":{"f_c_hz":1.4000000000000000e11"#));
        assert_eq!(*a.last().unwrap(), b'\n');
        let loaded = codebook_from_json(std::str::from_utf8(&a).unwrap()).unwrap();
        assert_eq!(loaded.codebook.beams, cb.beams);
        assert_eq!(loaded.codebook.partition, cb.partition);
        assert_eq!(codebook_to_json(&loaded.system, &loaded.codebook), a);
    }

    fn corrupt(edit: impl Fn(&mut Value)) -> String {
        let (cfg, cb) = sample();
        let mut v: Value = serde_json::from_slice(&codebook_to_json(&cfg, &cb)).unwrap();
        edit(&mut v);
        let err = codebook_from_json(&v.to_string()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        err.to_string()
    }

    #[test]
    fn errors_name_the_field() {
        assert!(corrupt(|v| v["version"] = 2.into()).contains("/version"));
        assert!(corrupt(|v| v["config"]["n"] = "x".into()).contains("/config/n"));
        assert!(corrupt(|v| v["beams"][1][2][0] = 5.0.into()).contains("/beams/1/2"));
        assert!(corrupt(|v| v["beams"][0][3] = Value::Null).contains("/beams/0/3"));
        assert!(corrupt(|v| v["boundaries_rad"][1] = 0.0.into()).contains("/boundaries_rad"));
        assert!(corrupt(|v| {
            v.as_object_mut().unwrap().remove("delta_omega");
        })
        .contains("/delta_omega"));
        assert!(codebook_from_json("[1]").is_err());
        assert!(codebook_from_json("{").is_err());
    }
}
