//! CSV and JSON trajectory output.
//!
//! Numbers use the shortest decimal form that parses back to the same `f64`,
//! so emitted files are deterministic and round-trip losslessly.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::propagator::Trajectory;

pub const COLUMNS: [&str; 19] = [
    "t",
    "env_s",
    "env_p",
    "re_field_s",
    "re_field_p",
    "rho_aa",
    "rho_bb",
    "rho_cc",
    "re_rho_ab",
    "im_rho_ab",
    "re_rho_cb",
    "im_rho_cb",
    "re_rho_ac",
    "im_rho_ac",
    "re_theta_s",
    "im_theta_s",
    "re_theta_p",
    "im_theta_p",
    "theta_eff",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmitFormat {
    Csv,
    Json,
}

impl std::str::FromStr for EmitFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(EmitFormat::Csv),
            "json" => Ok(EmitFormat::Json),
            other => Err(Error::invalid(
                "format",
                format!("unknown format `{other}`"),
            )),
        }
    }
}

impl EmitFormat {
    pub fn extension(self) -> &'static str {
        match self {
            EmitFormat::Csv => "csv",
            EmitFormat::Json => "json",
        }
    }
}

/// One output row in [`COLUMNS`] order.
pub fn row(traj: &Trajectory, i: usize) -> [f64; 19] {
    let o = &traj.observables[i];
    let a = &traj.areas[i];
    let [fs, fp] = traj.fields[i];
    let [es, ep] = traj.envelopes[i];
    [
        traj.times[i],
        es,
        ep,
        fs.re,
        fp.re,
        o.rho_aa,
        o.rho_bb,
        o.rho_cc,
        o.rho_ab.re,
        o.rho_ab.im,
        o.rho_cb.re,
        o.rho_cb.im,
        o.rho_ac.re,
        o.rho_ac.im,
        a.theta_s.re,
        a.theta_s.im,
        a.theta_p.re,
        a.theta_p.im,
        a.effective(),
    ]
}

fn fmt(v: f64) -> String {
    if v.is_finite() {
        let mut buf = ryu::Buffer::new();
        buf.format_finite(v).to_string()
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn write_csv(traj: &Trajectory, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "{}", COLUMNS.join(","))?;
    for i in 0..traj.len() {
        let line: Vec<String> = row(traj, i).iter().map(|&v| fmt(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// The JSON document: `{"metadata": {..., "columns": [...]}, "rows": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmittedTable {
    pub metadata: Value,
    pub rows: Vec<Vec<f64>>,
}

pub fn write_json(traj: &Trajectory, metadata: Value, out: &mut dyn Write) -> Result<()> {
    let mut meta = match metadata {
        Value::Object(m) => m,
        Value::Null => serde_json::Map::new(),
        other => {
            let mut m = serde_json::Map::new();
            m.insert("info".into(), other);
            m
        }
    };
    meta.insert("columns".into(), serde_json::to_value(COLUMNS)?);
    meta.insert("n_rows".into(), Value::from(traj.len()));
    let table = EmittedTable {
        metadata: Value::Object(meta),
        rows: (0..traj.len()).map(|i| row(traj, i).to_vec()).collect(),
    };
    serde_json::to_writer(&mut *out, &table)?;
    writeln!(out)?;
    Ok(())
}

/// Writes `traj` to `out`; `metadata` is embedded in JSON output only.
pub fn emit(
    traj: &Trajectory,
    format: EmitFormat,
    metadata: Value,
    out: &mut dyn Write,
) -> Result<()> {
    match format {
        EmitFormat::Csv => write_csv(traj, out),
        EmitFormat::Json => write_json(traj, metadata, out),
    }
}

pub fn read_json(input: &mut dyn Read) -> Result<EmittedTable> {
    Ok(serde_json::from_reader(input)?)
}
