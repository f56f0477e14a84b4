//! Flat binary field container plus JSON sidecar.
//!
//! Layout (little-endian): the 8-byte magic `RLXFLD01`, then `n: u64`, `k: u64`,
//! `dims: [u64; n]`, `h: f64`, `lo: [f64; n]`, `hi: [f64; n]`, then the
//! `Π dims × k` node values row-major (last axis fastest), components
//! contiguous. The sidecar `<file>.json` records the domain kind and node counts.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::domain::{build_domain, DomainKind, DomainSpec};
use super::field::Field;
use crate::{Error, Result};

const MAGIC: &[u8; 8] = b"RLXFLD01";

#[derive(Debug, Clone, PartialEq)]
pub struct RawField {
    pub n: usize,
    pub k: usize,
    pub dims: Vec<usize>,
    pub h: f64,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub n: usize,
    pub k: usize,
    pub dims: Vec<usize>,
    pub h: f64,
    pub domain: DomainKind,
    pub interior_nodes: usize,
    pub boundary_nodes: usize,
    #[serde(default)]
    pub meta: serde_json::Value,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn encode(u: &Field) -> Vec<u8> {
    let g = &u.domain().grid;
    let mut buf = Vec::with_capacity(64 + 8 * u.raw().len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(g.n as u64).to_le_bytes());
    buf.extend_from_slice(&(u.k() as u64).to_le_bytes());
    for &d in &g.dims {
        buf.extend_from_slice(&(d as u64).to_le_bytes());
    }
    buf.extend_from_slice(&g.h.to_le_bytes());
    for v in g.lo.iter().chain(&g.hi).chain(u.raw()) {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take8(&mut self) -> std::result::Result<[u8; 8], String> {
        let s = self
            .bytes
            .get(self.pos..self.pos + 8)
            .ok_or_else(|| format!("truncated at byte {}", self.pos))?;
        self.pos += 8;
        Ok(s.try_into().unwrap())
    }

    fn u64(&mut self) -> std::result::Result<usize, String> {
        Ok(u64::from_le_bytes(self.take8()?) as usize)
    }

    fn f64(&mut self) -> std::result::Result<f64, String> {
        Ok(f64::from_le_bytes(self.take8()?))
    }

    fn f64s(&mut self, count: usize) -> std::result::Result<Vec<f64>, String> {
        (0..count).map(|_| self.f64()).collect()
    }
}

pub fn decode(bytes: &[u8]) -> std::result::Result<RawField, String> {
    let mut r = Reader { bytes, pos: 0 };
    if &r.take8()? != MAGIC {
        return Err("bad magic".into());
    }
    let n = r.u64()?;
    let k = r.u64()?;
    if !(1..=3).contains(&n) || k == 0 || k > 64 {
        return Err(format!("implausible header n = {n}, k = {k}"));
    }
    let dims = (0..n).map(|_| r.u64()).collect::<std::result::Result<Vec<_>, _>>()?;
    let h = r.f64()?;
    let lo = r.f64s(n)?;
    let hi = r.f64s(n)?;
    let count = dims
        .iter()
        .try_fold(k, |acc, &d| acc.checked_mul(d))
        .filter(|&c| c.checked_mul(8).is_some_and(|b| b <= bytes.len()))
        .ok_or("payload size does not fit the file")?;
    let values = r.f64s(count)?;
    if r.pos != bytes.len() {
        return Err(format!("{} trailing bytes", bytes.len() - r.pos));
    }
    Ok(RawField {
        n,
        k,
        dims,
        h,
        lo,
        hi,
        values,
    })
}

/// Writes the container and its sidecar; `meta` is stored verbatim.
pub fn write_field(path: &Path, u: &Field, meta: serde_json::Value) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(&encode(u))?;
    w.flush()?;
    let dom = u.domain();
    let side = Sidecar {
        n: dom.n(),
        k: u.k(),
        dims: dom.grid.dims.clone(),
        h: dom.h(),
        domain: dom.kind.clone(),
        interior_nodes: dom.interior().len(),
        boundary_nodes: dom.boundary().len(),
        meta,
    };
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&side)?)?;
    Ok(())
}

pub fn read_raw(path: &Path) -> Result<RawField> {
    let bytes = fs::read(path)?;
    decode(&bytes).map_err(|reason| Error::FieldFormat {
        path: path.to_path_buf(),
        reason,
    })
}

/// Reads a field and rebuilds its domain from the sidecar.
pub fn read_field(path: &Path) -> Result<Field> {
    let raw = read_raw(path)?;
    let side: Sidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
    if side.n != raw.n || side.k != raw.k || side.dims != raw.dims {
        return Err(Error::FieldFormat {
            path: path.to_path_buf(),
            reason: "sidecar does not match the container header".into(),
        });
    }
    let dom = build_domain(&DomainSpec {
        kind: side.domain,
        lo: raw.lo.clone(),
        hi: raw.hi.clone(),
        h: raw.h,
    })?;
    if dom.grid.dims != raw.dims {
        return Err(Error::FieldFormat {
            path: path.to_path_buf(),
            reason: "rebuilt grid has different dimensions".into(),
        });
    }
    Field::from_values(Arc::new(dom), raw.k, raw.values)
}
