//! The NCFK binary container for kernels, plane functions and line functions.
//!
//! ```text
//! magic   "NCFK"              4 bytes
//! version u32                 currently 1
//! kind    u8                  1 kernel, 2 plane, 3 line
//! rows    u32
//! cols    u32                 1 for a line
//! spacing f64 × (1 | 2 | 1)   h; h_x, h_y; h
//! payload (re f64, im f64) × rows·cols, row-major
//! ```
//!
//! Everything is little-endian. Readers reject wrong magic, unknown versions
//! or kinds, inconsistent shapes, short payloads and trailing bytes.

use std::io::{Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{LineGrid, PlaneFunction, PlaneGrid, SampledFunction1D};
use crate::operator::KernelOperator;

pub const MAGIC: &[u8; 4] = b"NCFK";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum NcfkData {
    Kernel(KernelOperator),
    Plane(PlaneFunction),
    Line(SampledFunction1D),
}

impl NcfkData {
    pub fn kind(&self) -> u8 {
        match self {
            NcfkData::Kernel(_) => 1,
            NcfkData::Plane(_) => 2,
            NcfkData::Line(_) => 3,
        }
    }
}

fn put_matrix(out: &mut Vec<u8>, m: &DMatrix<Complex64>) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.extend_from_slice(&m[(i, j)].re.to_le_bytes());
            out.extend_from_slice(&m[(i, j)].im.to_le_bytes());
        }
    }
}

pub fn to_bytes(data: &NcfkData) -> Vec<u8> {
    let (rows, cols, spacings): (usize, usize, Vec<f64>) = match data {
        NcfkData::Kernel(k) => (k.grid().n(), k.grid().n(), vec![k.grid().h()]),
        NcfkData::Plane(p) => (p.grid().x.n(), p.grid().y.n(), vec![p.grid().x.h(), p.grid().y.h()]),
        NcfkData::Line(l) => (l.grid().n(), 1, vec![l.grid().h()]),
    };
    let mut out = Vec::with_capacity(17 + 8 * spacings.len() + 16 * rows * cols);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(data.kind());
    out.extend_from_slice(&(rows as u32).to_le_bytes());
    out.extend_from_slice(&(cols as u32).to_le_bytes());
    for s in spacings {
        out.extend_from_slice(&s.to_le_bytes());
    }
    match data {
        NcfkData::Kernel(k) => put_matrix(&mut out, k.kernel()),
        NcfkData::Plane(p) => put_matrix(&mut out, p.values()),
        NcfkData::Line(l) => {
            for z in l.values() {
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }
        }
    }
    out
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::Format(format!(
                "truncated input: needed {n} bytes at offset {}, {} left",
                self.pos,
                self.buf.len() - self.pos
            )));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn complex(&mut self) -> Result<Complex64> {
        Ok(Complex64::new(self.f64()?, self.f64()?))
    }
}

fn grid_from(n: usize, h: f64) -> Result<LineGrid> {
    LineGrid::explicit(n, h).map_err(|e| Error::Format(format!("invalid grid in header: {e}")))
}

pub fn from_bytes(buf: &[u8]) -> Result<NcfkData> {
    let mut c = Cursor { buf, pos: 0 };
    if c.take(4)? != MAGIC {
        return Err(Error::Format("bad magic, expected \"NCFK\"".into()));
    }
    let version = c.u32()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let kind = c.take(1)?[0];
    let rows = c.u32()? as usize;
    let cols = c.u32()? as usize;
    let spacing_count = match kind {
        1 | 3 => 1,
        2 => 2,
        k => return Err(Error::Format(format!("unknown kind {k}"))),
    };
    let spacings = (0..spacing_count).map(|_| c.f64()).collect::<Result<Vec<_>>>()?;
    let expected = rows
        .checked_mul(cols)
        .and_then(|e| e.checked_mul(16))
        .ok_or_else(|| Error::Format("dimensions overflow".into()))?;
    let remaining = buf.len() - c.pos;
    if remaining != expected {
        return Err(Error::Format(format!(
            "payload is {remaining} bytes, header requires {expected}"
        )));
    }
    let read_matrix = |c: &mut Cursor| -> Result<DMatrix<Complex64>> {
        let mut m = DMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = c.complex()?;
            }
        }
        Ok(m)
    };
    let data = match kind {
        1 => {
            if rows != cols {
                return Err(Error::Format(format!("kernel must be square, got {rows}×{cols}")));
            }
            let g = grid_from(rows, spacings[0])?;
            NcfkData::Kernel(KernelOperator::new(g, read_matrix(&mut c)?)?)
        }
        2 => {
            let pg = PlaneGrid::new(grid_from(rows, spacings[0])?, grid_from(cols, spacings[1])?);
            NcfkData::Plane(PlaneFunction::new(pg, read_matrix(&mut c)?)?)
        }
        _ => {
            if cols != 1 {
                return Err(Error::Format(format!("line data must have one column, got {cols}")));
            }
            let g = grid_from(rows, spacings[0])?;
            let v = (0..rows).map(|_| c.complex()).collect::<Result<Vec<_>>>()?;
            NcfkData::Line(SampledFunction1D::new(g, v)?)
        }
    };
    Ok(data)
}

pub fn write_ncfk<W: Write>(mut w: W, data: &NcfkData) -> Result<()> {
    w.write_all(&to_bytes(data))?;
    Ok(())
}

pub fn read_ncfk<R: Read>(mut r: R) -> Result<NcfkData> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    from_bytes(&buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let g = LineGrid::self_dual(8).unwrap();
        let f = SampledFunction1D::zeros(g);
        let b = to_bytes(&NcfkData::Line(f));
        assert_eq!(&b[..4], b"NCFK");
        assert_eq!(u32::from_le_bytes(b[4..8].try_into().unwrap()), 1);
        assert_eq!(b[8], 3);
        assert_eq!(u32::from_le_bytes(b[9..13].try_into().unwrap()), 8);
        assert_eq!(u32::from_le_bytes(b[13..17].try_into().unwrap()), 1);
        assert_eq!(f64::from_le_bytes(b[17..25].try_into().unwrap()), g.h());
        assert_eq!(b.len(), 25 + 16 * 8);
    }

    #[test]
    fn rejects_malformed() {
        let g = LineGrid::self_dual(8).unwrap();
        let good = to_bytes(&NcfkData::Kernel(KernelOperator::identity(g)));
        assert!(from_bytes(&good).is_ok());
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(from_bytes(&bad), Err(Error::Format(_))));
        let mut long = good.clone();
        long.push(0);
        assert!(from_bytes(&long).is_err());
        assert!(from_bytes(&good[..good.len() - 1]).is_err());
        let mut kind = good.clone();
        kind[8] = 9;
        assert!(from_bytes(&kind).is_err());
        assert!(from_bytes(b"NC").is_err());
    }
}
