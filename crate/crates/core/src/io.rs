//! Binary file formats. All integers and values are little-endian.
//!
//! - `.dnst`: `"DNS1"`, `u32` order `N`, `N` x `u64` dims, then the values in flat
//!   order.
//! - `.ttv`: `"TTV1"`, `u32` `N`, then per core a `u64` triple `(R_left, I, R_right)`,
//!   the core values, and one orthogonality byte (0 none, 1 left, 2 right).
//! - `.ttm`: `"TTM1"`, `u32` `N`, then per core a `u64` quadruple
//!   `(R_left, I, J, R_right)` and the core values.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::limits;
use crate::linops::TtMatrix;
use crate::tensor::{DenseTensor, Shape};
use crate::tt::{Orth, TtCore, TtTensor};

const DNST: &[u8; 4] = b"DNS1";
const TTV: &[u8; 4] = b"TTV1";
const TTM: &[u8; 4] = b"TTM1";

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    format: &'static str,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8], format: &'static str, magic: &[u8; 4]) -> Result<Self> {
        let mut r = Reader { buf, pos: 0, format };
        let m = r.take(4, "magic")?;
        if m != magic {
            return Err(r.err(format!(
                "bad magic {:?}, expected {:?}",
                String::from_utf8_lossy(m),
                String::from_utf8_lossy(magic)
            )));
        }
        Ok(r)
    }

    fn err(&self, reason: String) -> Error {
        Error::Format { format: self.format, reason }
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(self.err(format!("truncated while reading {what} at byte {}", self.pos)));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn dim(&mut self, what: &str) -> Result<usize> {
        let v = u64::from_le_bytes(self.take(8, what)?.try_into().unwrap());
        if v == 0 {
            return Err(self.err(format!("{what} is zero")));
        }
        usize::try_from(v).map_err(|_| self.err(format!("{what} = {v} does not fit in memory")))
    }

    fn values(&mut self, dims: &[usize], what: &str) -> Result<Vec<f64>> {
        let count = limits::element_count(dims);
        limits::check_elements(count)?;
        let remaining = (self.buf.len() - self.pos) as u128;
        if count * 8 > remaining {
            return Err(self.err(format!(
                "{what} needs {count} values, only {} bytes remain",
                remaining
            )));
        }
        let bytes = self.take(count as usize * 8, what)?;
        Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn finish(self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(self.err(format!("{} trailing bytes", self.buf.len() - self.pos)));
        }
        Ok(())
    }
}

fn put_dims(out: &mut Vec<u8>, dims: &[usize]) {
    for &d in dims {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
}

fn put_values(out: &mut Vec<u8>, v: &[f64]) {
    for x in v {
        out.extend_from_slice(&x.to_le_bytes());
    }
}

fn put_order(out: &mut Vec<u8>, n: usize) -> Result<()> {
    let n = u32::try_from(n).map_err(|_| Error::invalid(format!("order {n} does not fit in u32")))?;
    out.extend_from_slice(&n.to_le_bytes());
    Ok(())
}

pub fn dense_to_bytes(x: &DenseTensor) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(8 + 8 * x.order() + 8 * x.len());
    out.extend_from_slice(DNST);
    put_order(&mut out, x.order())?;
    put_dims(&mut out, x.dims());
    put_values(&mut out, x.data());
    Ok(out)
}

pub fn dense_from_bytes(buf: &[u8]) -> Result<DenseTensor> {
    let mut r = Reader::new(buf, "dnst", DNST)?;
    let n = r.u32("order")? as usize;
    let mut dims = Vec::with_capacity(n.min(64));
    for k in 0..n {
        dims.push(r.dim(&format!("dim {k}"))?);
    }
    Shape::new(&dims).map_err(|e| r.err(e.to_string()))?;
    let values = r.values(&dims, "values")?;
    r.finish()?;
    DenseTensor::new(&dims, values)
}

pub fn tt_to_bytes(x: &TtTensor) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(8 + x.storage_bytes() + 25 * x.order());
    out.extend_from_slice(TTV);
    put_order(&mut out, x.order())?;
    for c in x.cores() {
        put_dims(&mut out, c.tensor().dims());
        put_values(&mut out, c.data());
        out.push(match c.orth() {
            Orth::None => 0,
            Orth::Left => 1,
            Orth::Right => 2,
        });
    }
    Ok(out)
}

pub fn tt_from_bytes(buf: &[u8]) -> Result<TtTensor> {
    let mut r = Reader::new(buf, "ttv", TTV)?;
    let n = r.u32("order")? as usize;
    if n == 0 {
        return Err(r.err("order is zero".into()));
    }
    let mut cores = Vec::with_capacity(n.min(1024));
    for k in 0..n {
        let dims = [
            r.dim(&format!("core {k} left rank"))?,
            r.dim(&format!("core {k} mode size"))?,
            r.dim(&format!("core {k} right rank"))?,
        ];
        let values = r.values(&dims, &format!("core {k} values"))?;
        let orth = match r.u8(&format!("core {k} orthogonality flag"))? {
            0 => Orth::None,
            1 => Orth::Left,
            2 => Orth::Right,
            b => return Err(r.err(format!("core {k} orthogonality flag is {b}, expected 0, 1 or 2"))),
        };
        cores.push(TtCore::from_values(dims[0], dims[1], dims[2], values)?.with_orth(orth));
    }
    r.finish()?;
    TtTensor::from_cores(cores)
}

pub fn ttm_to_bytes(a: &TtMatrix) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(8 + a.storage_bytes() + 32 * a.order());
    out.extend_from_slice(TTM);
    put_order(&mut out, a.order())?;
    for c in a.cores() {
        put_dims(&mut out, c.tensor().dims());
        put_values(&mut out, c.data());
    }
    Ok(out)
}

pub fn ttm_from_bytes(buf: &[u8]) -> Result<TtMatrix> {
    let mut r = Reader::new(buf, "ttm", TTM)?;
    let n = r.u32("order")? as usize;
    if n == 0 {
        return Err(r.err("order is zero".into()));
    }
    let mut cores = Vec::with_capacity(n.min(1024));
    for k in 0..n {
        let dims = [
            r.dim(&format!("core {k} left rank"))?,
            r.dim(&format!("core {k} output size"))?,
            r.dim(&format!("core {k} input size"))?,
            r.dim(&format!("core {k} right rank"))?,
        ];
        let values = r.values(&dims, &format!("core {k} values"))?;
        cores.push(DenseTensor::new(&dims, values)?);
    }
    r.finish()?;
    TtMatrix::new(cores)
}

pub fn write_dense(path: impl AsRef<Path>, x: &DenseTensor) -> Result<()> {
    Ok(fs::write(path, dense_to_bytes(x)?)?)
}

pub fn read_dense(path: impl AsRef<Path>) -> Result<DenseTensor> {
    dense_from_bytes(&fs::read(path)?)
}

pub fn write_tt(path: impl AsRef<Path>, x: &TtTensor) -> Result<()> {
    Ok(fs::write(path, tt_to_bytes(x)?)?)
}

pub fn read_tt(path: impl AsRef<Path>) -> Result<TtTensor> {
    tt_from_bytes(&fs::read(path)?)
}

pub fn write_ttm(path: impl AsRef<Path>, a: &TtMatrix) -> Result<()> {
    Ok(fs::write(path, ttm_to_bytes(a)?)?)
}

pub fn read_ttm(path: impl AsRef<Path>) -> Result<TtMatrix> {
    ttm_from_bytes(&fs::read(path)?)
}
