//! Binary wavefunction snapshots ("QWV1"): magic, dimensionality byte,
//! per-axis grid descriptor (n, min, max), time stamp, then interleaved
//! (re, im) f64 amplitudes — everything little-endian, row-major.

use crate::error::{QwvError, Result};
use crate::grid::{Grid, Grid1D, Grid2D};
use crate::wavefunction::WaveFunction;
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"QWV1";

fn corrupt(path: &Path, offset: u64, detail: &str) -> QwvError {
    QwvError::CorruptFile {
        path: path.display().to_string(),
        offset,
        detail: detail.to_string(),
    }
}

fn axes_of(grid: &Grid) -> Vec<&Grid1D> {
    match grid {
        Grid::One(g) => vec![g],
        // R is the slow (outer) axis of the row-major layout
        Grid::Two(g) => vec![&g.r, &g.z],
    }
}

/// Header length in bytes for a given dimensionality.
pub fn header_len(dim: usize) -> u64 {
    (4 + 1 + dim * 24 + 8) as u64
}

/// Write a snapshot atomically (temp file in the same directory, then
/// rename).
pub fn write_snapshot(path: &Path, psi: &WaveFunction, time: f64) -> Result<()> {
    let axes = axes_of(psi.grid());
    let mut buf = Vec::with_capacity(header_len(axes.len()) as usize + 16 * psi.amps().len());
    buf.extend_from_slice(MAGIC);
    buf.push(axes.len() as u8);
    for ax in &axes {
        buf.extend_from_slice(&(ax.n() as u64).to_le_bytes());
        buf.extend_from_slice(&ax.x_min().to_le_bytes());
        buf.extend_from_slice(&ax.x_max().to_le_bytes());
    }
    buf.extend_from_slice(&time.to_le_bytes());
    for a in psi.amps() {
        buf.extend_from_slice(&a.re.to_le_bytes());
        buf.extend_from_slice(&a.im.to_le_bytes());
    }

    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().map(|s| s.to_string_lossy()).unwrap_or_default()
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(&buf)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Read a snapshot back; any size/magic mismatch is a corrupt-file error
/// carrying the byte offset — no partial state is returned.
pub fn read_snapshot(path: &Path) -> Result<(WaveFunction, f64)> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;

    let need = |off: u64, n: usize, what: &str| -> Result<()> {
        if (off as usize) + n > bytes.len() {
            Err(corrupt(path, off, &format!("truncated while reading {what}")))
        } else {
            Ok(())
        }
    };
    let mut off: u64 = 0;
    need(off, 4, "magic")?;
    if &bytes[..4] != MAGIC {
        return Err(corrupt(path, 0, "bad magic (expected QWV1)"));
    }
    off = 4;
    need(off, 1, "dimensionality")?;
    let dim = bytes[4] as usize;
    if dim != 1 && dim != 2 {
        return Err(corrupt(path, off, &format!("dimensionality byte {dim} not in {{1, 2}}")));
    }
    off = 5;

    let mut axes = Vec::with_capacity(dim);
    for _ in 0..dim {
        need(off, 24, "grid descriptor")?;
        let o = off as usize;
        let n = u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap()) as usize;
        let min = f64::from_le_bytes(bytes[o + 8..o + 16].try_into().unwrap());
        let max = f64::from_le_bytes(bytes[o + 16..o + 24].try_into().unwrap());
        let grid = Grid1D::new(n, min, max)
            .map_err(|e| corrupt(path, off, &format!("invalid grid descriptor: {e}")))?;
        axes.push(grid);
        off += 24;
    }
    need(off, 8, "time stamp")?;
    let o = off as usize;
    let time = f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    off += 8;

    let total: usize = axes.iter().map(Grid1D::n).product();
    let expected = off + 16 * total as u64;
    if bytes.len() as u64 != expected {
        return Err(corrupt(
            path,
            off,
            &format!("file size {} != header + 16·{total} = {expected}", bytes.len()),
        ));
    }
    let mut amps = Vec::with_capacity(total);
    let mut o = off as usize;
    for _ in 0..total {
        let re = f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let im = f64::from_le_bytes(bytes[o + 8..o + 16].try_into().unwrap());
        amps.push(Complex64::new(re, im));
        o += 16;
    }
    let grid = match dim {
        1 => Grid::One(axes.pop().unwrap()),
        _ => {
            let z = axes.pop().unwrap();
            let r = axes.pop().unwrap();
            Grid::Two(Grid2D::new(z, r).map_err(|e| corrupt(path, 5, &format!("{e}")))?)
        }
    };
    Ok((WaveFunction::new(grid, amps)?, time))
}
