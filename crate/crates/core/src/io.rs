//! JSON and CSV encodings of [`BehaviorBox`].
//!
//! JSON: `{"p": [[p00, p01, p10, p11], ...]}` with one inner row per setting
//! in order `(x,y) = (0,0), (0,1), (1,0), (1,1)` and, inside a row, outputs
//! in order `(a,b) = (0,0), (0,1), (1,0), (1,1)`. CSV: header `x,y,a,b,p`
//! and one line per entry in the same `(x, y, a, b)` order.
//!
//! Floats are written in shortest round-trip form, so decoding an encoded
//! box reproduces it exactly.

use std::io::{Read, Write};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::BehaviorBox;
use crate::scalar::Scalar;

pub const CSV_HEADER: [&str; 5] = ["x", "y", "a", "b", "p"];

#[derive(Serialize, Deserialize)]
struct BoxRows<T> {
    p: [[T; 4]; 4],
}

impl<T: Scalar + Serialize> Serialize for BehaviorBox<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let flat = self.as_array();
        let mut p = [[T::zero(); 4]; 4];
        for (k, row) in p.iter_mut().enumerate() {
            row.copy_from_slice(&flat[4 * k..4 * k + 4]);
        }
        BoxRows { p }.serialize(serializer)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for BehaviorBox<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = BoxRows::<T>::deserialize(deserializer)?;
        let mut flat = [T::zero(); 16];
        for (k, row) in rows.p.iter().enumerate() {
            flat[4 * k..4 * k + 4].copy_from_slice(row);
        }
        BehaviorBox::new(flat).map_err(serde::de::Error::custom)
    }
}

pub fn to_json<T: Scalar + Serialize>(bx: &BehaviorBox<T>) -> Result<String> {
    Ok(serde_json::to_string(bx)?)
}

pub fn from_json<T: Scalar + DeserializeOwned>(text: &str) -> Result<BehaviorBox<T>> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_csv<T: Scalar, W: Write>(bx: &BehaviorBox<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for (i, p) in bx.as_array().iter().enumerate() {
        let (x, y, a, b) = (i >> 3, (i >> 2) & 1, (i >> 1) & 1, i & 1);
        w.write_record([
            x.to_string(),
            y.to_string(),
            a.to_string(),
            b.to_string(),
            p.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn to_csv<T: Scalar>(bx: &BehaviorBox<T>) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(bx, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Reads a box from CSV. Rows may appear in any order but all 16
/// `(x, y, a, b)` combinations must be present exactly once.
pub fn read_csv<T: Scalar + FromStr, R: Read>(input: R) -> Result<BehaviorBox<T>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().map(str::trim).ne(CSV_HEADER) {
        return Err(Error::Parse(format!(
            "expected header x,y,a,b,p, got {header:?}"
        )));
    }
    let mut p = [T::zero(); 16];
    let mut seen = [false; 16];
    for rec in r.records() {
        let rec = rec?;
        let bit = |k: usize| -> Result<usize> {
            match rec.get(k).map(str::trim) {
                Some("0") => Ok(0),
                Some("1") => Ok(1),
                other => Err(Error::Parse(format!(
                    "expected a bit in column {k}, got {other:?}"
                ))),
            }
        };
        let (x, y, a, b) = (bit(0)?, bit(1)?, bit(2)?, bit(3)?);
        let raw = rec.get(4).unwrap_or("").trim();
        let v = raw
            .parse::<T>()
            .map_err(|_| Error::Parse(format!("bad probability {raw:?}")))?;
        let i = crate::model::flat_index(a, b, x, y);
        if seen[i] {
            return Err(Error::Parse(format!(
                "duplicate row x={x} y={y} a={a} b={b}"
            )));
        }
        seen[i] = true;
        p[i] = v;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::Parse(format!(
            "missing row x={} y={} a={} b={}",
            missing >> 3,
            (missing >> 2) & 1,
            (missing >> 1) & 1,
            missing & 1
        )));
    }
    BehaviorBox::new(p)
}

pub fn from_csv<T: Scalar + FromStr>(text: &str) -> Result<BehaviorBox<T>> {
    read_csv(text.as_bytes())
}
