//! QGRID binary files and CSV export.
//!
//! QGRID layout (little-endian): magic `QGRD`, `u32` version (1), `u32 nx`,
//! `u32 ny`, `f64 x0, dx, y0, dy`, then `nx·ny` quaternions as four `f64`
//! `(w, i, j, k)`, x-major (`ix * ny + iy`).

use crate::error::{Error, Result};
use crate::grid::{GridAxis, QSignal};
use crate::quat::Quaternion;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

pub const QGRID_MAGIC: &[u8; 4] = b"QGRD";
pub const QGRID_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 4 * 8;

pub fn write_qgrid<W: Write>(mut w: W, ax_x: &GridAxis, ax_y: &GridAxis, values: &[Quaternion]) -> Result<()> {
    if values.len() != ax_x.count * ax_y.count {
        return Err(Error::LengthMismatch {
            expected: ax_x.count * ax_y.count,
            got: values.len(),
        });
    }
    let to_u32 = |n: usize| u32::try_from(n).map_err(|_| Error::Format(format!("axis count {n} too large")));
    let mut buf = Vec::with_capacity(HEADER_LEN + values.len() * 32);
    buf.extend_from_slice(QGRID_MAGIC);
    buf.extend_from_slice(&QGRID_VERSION.to_le_bytes());
    buf.extend_from_slice(&to_u32(ax_x.count)?.to_le_bytes());
    buf.extend_from_slice(&to_u32(ax_y.count)?.to_le_bytes());
    for v in [ax_x.start, ax_x.step, ax_y.start, ax_y.step] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for q in values {
        for c in q.to_array() {
            buf.extend_from_slice(&c.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

pub fn read_qgrid<R: Read>(mut r: R) -> Result<(GridAxis, GridAxis, Vec<Quaternion>)> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    parse_qgrid(&bytes)
}

pub fn parse_qgrid(bytes: &[u8]) -> Result<(GridAxis, GridAxis, Vec<Quaternion>)> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "{} bytes is shorter than the header",
            bytes.len()
        )));
    }
    if &bytes[0..4] != QGRID_MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != QGRID_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let (nx, ny) = (u32_at(8) as usize, u32_at(12) as usize);
    let ax_x = GridAxis::new(f64_at(16), f64_at(24), nx).map_err(|e| Error::Format(e.to_string()))?;
    let ax_y = GridAxis::new(f64_at(32), f64_at(40), ny).map_err(|e| Error::Format(e.to_string()))?;
    let n = nx
        .checked_mul(ny)
        .ok_or_else(|| Error::Format("grid size overflows".into()))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != n * 32 {
        return Err(Error::Format(format!(
            "payload is {} bytes, expected {}",
            payload.len(),
            n * 32
        )));
    }
    let values = payload
        .chunks_exact(32)
        .map(|c| {
            let f = |i: usize| f64::from_le_bytes(c[8 * i..8 * i + 8].try_into().unwrap());
            Quaternion::new(f(0), f(1), f(2), f(3))
        })
        .collect();
    Ok((ax_x, ax_y, values))
}

impl QSignal {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        write_qgrid(BufWriter::new(file), &self.ax_x, &self.ax_y, &self.values)
    }

    /// Load a QGRID file; quadrature weights are reset to the default rule.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let (ax_x, ax_y, values) = read_qgrid(BufReader::new(file))?;
        QSignal::from_values(ax_x, ax_y, values)
    }

    /// CSV with header `x,y,w,i,j,k`, one row per node in storage order.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_grid_csv(w, &self.ax_x, &self.ax_y, &self.values)
    }
}

pub fn write_grid_csv<W: Write>(w: W, ax_x: &GridAxis, ax_y: &GridAxis, values: &[Quaternion]) -> Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "x,y,w,i,j,k")?;
    for ix in 0..ax_x.count {
        for iy in 0..ax_y.count {
            let q = values[ix * ax_y.count + iy];
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{:e},{:e}",
                ax_x.coord(ix),
                ax_y.coord(iy),
                q.w,
                q.x,
                q.y,
                q.z
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_rejects() {
        let a = GridAxis::symmetric(1.0, 3).unwrap();
        let b = GridAxis::new(0.25, 0.5, 2).unwrap();
        let s = QSignal::from_fn(a, b, |x, y| Quaternion::new(x, y, x * y, -1.0 / 3.0));
        let mut buf = Vec::new();
        write_qgrid(&mut buf, &s.ax_x, &s.ax_y, &s.values).unwrap();
        assert_eq!(buf.len(), 48 + 6 * 32);
        assert_eq!(&buf[..4], b"QGRD");
        let (ax, ay, v) = parse_qgrid(&buf).unwrap();
        assert_eq!((ax, ay), (a, b));
        assert_eq!(v, s.values);

        assert!(matches!(parse_qgrid(&buf[..40]), Err(Error::Format(_))));
        assert!(matches!(parse_qgrid(&buf[..buf.len() - 1]), Err(Error::Format(_))));
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(parse_qgrid(&bad), Err(Error::Format(_))));
        let mut bad = buf;
        bad[4] = 2;
        assert!(matches!(parse_qgrid(&bad), Err(Error::Format(_))));
    }

    #[test]
    fn csv_layout() {
        let a = GridAxis::symmetric(1.0, 3).unwrap();
        let s = QSignal::from_fn(a, a, |x, y| Quaternion::new(x, y, 0.0, 1.0));
        let mut out = Vec::new();
        s.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "x,y,w,i,j,k");
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[2], "-1e0,0e0,-1e0,0e0,0e0,1e0");
    }
}
