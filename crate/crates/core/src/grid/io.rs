//! Flat dumps of grid functions, one complex value per point in canonical order.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::function::GridFunction;
use super::space::Space;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"FFRG";

#[derive(Serialize, Deserialize)]
struct Row {
    index: usize,
    re: f64,
    im: f64,
}

/// CSV with header `index,re,im`.
pub fn write_csv<W: Write>(f: &GridFunction, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (index, v) in f.values().iter().enumerate() {
        w.serialize(Row { index, re: v.re, im: v.im })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(space: &Space, input: R) -> Result<GridFunction> {
    let mut r = csv::Reader::from_reader(input);
    let mut values = Vec::with_capacity(space.size());
    for (k, row) in r.deserialize::<Row>().enumerate() {
        let row = row?;
        if row.index != k {
            return Err(Error::Mismatch(format!("row {k} carries index {}", row.index)));
        }
        values.push(Complex64::new(row.re, row.im));
    }
    GridFunction::from_values(space, values)
}

/// Little-endian binary: magic, `p`, `ℓ`, `d` as u32, then `(re, im)` f64 pairs.
pub fn write_binary<W: Write>(f: &GridFunction, mut out: W) -> Result<()> {
    let field = f.space().field();
    out.write_all(MAGIC)?;
    for v in [field.characteristic(), field.degree(), f.space().dim() as u32] {
        out.write_all(&v.to_le_bytes())?;
    }
    for v in f.values() {
        out.write_all(&v.re.to_le_bytes())?;
        out.write_all(&v.im.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_binary<R: Read>(space: &Space, mut input: R) -> Result<GridFunction> {
    let mut head = [0u8; 16];
    input.read_exact(&mut head)?;
    if &head[..4] != MAGIC {
        return Err(Error::Mismatch("not a grid dump".into()));
    }
    let word = |k: usize| u32::from_le_bytes(head[4 + 4 * k..8 + 4 * k].try_into().unwrap());
    let field = space.field();
    if (word(0), word(1), word(2) as usize) != (field.characteristic(), field.degree(), space.dim()) {
        return Err(Error::Mismatch(format!("dump is for p={} ℓ={} d={}", word(0), word(1), word(2))));
    }
    let mut values = Vec::with_capacity(space.size());
    let mut buf = [0u8; 16];
    for _ in 0..space.size() {
        input.read_exact(&mut buf)?;
        let re = f64::from_le_bytes(buf[..8].try_into().unwrap());
        let im = f64::from_le_bytes(buf[8..].try_into().unwrap());
        values.push(Complex64::new(re, im));
    }
    GridFunction::from_values(space, values)
}
