//! Field serialization.
//!
//! Binary layout (all little-endian):
//!
//! ```text
//! magic   5 bytes  "HMHD1"
//! version u8       1
//! n       u32      modes per axis
//! L       f64      box scale
//! dealias u8       0 = two-thirds, 1 = zero-pad 3/2
//! ncomp   u8       1 (scalar) or 3 (vector)
//! real    u8       1 if the field is real-valued
//! prec    u8       8 (f64)
//! per component: mean (re, im), then n^3 coefficients (re, im) row-major
//! ```
//!
//! A CSV debug export lists the nonzero modes as `m1,m2,m3,re,im`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::field::SpectralField;
use crate::grid::{DealiasRule, Grid};
use crate::vector::SpectralVectorField;
use crate::{Error, Result};

const MAGIC: &[u8; 5] = b"HMHD1";
const VERSION: u8 = 1;

fn write_header<W: Write>(w: &mut W, grid: &Grid, ncomp: u8, real: bool) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION])?;
    w.write_all(&(grid.n as u32).to_le_bytes())?;
    w.write_all(&grid.box_scale.to_le_bytes())?;
    let dealias = match grid.dealias {
        DealiasRule::TwoThirds => 0u8,
        DealiasRule::ZeroPad3Halves => 1u8,
    };
    w.write_all(&[dealias, ncomp, real as u8, 8])?;
    Ok(())
}

fn write_component<W: Write>(w: &mut W, f: &SpectralField) -> Result<()> {
    w.write_all(&f.mean().re.to_le_bytes())?;
    w.write_all(&f.mean().im.to_le_bytes())?;
    let mut buf = Vec::with_capacity(f.coeffs().len() * 16);
    for c in f.coeffs() {
        buf.extend_from_slice(&c.re.to_le_bytes());
        buf.extend_from_slice(&c.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_header<R: Read>(r: &mut R) -> Result<(Grid, u8, bool)> {
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let mut b1 = [0u8; 1];
    r.read_exact(&mut b1)?;
    if b1[0] != VERSION {
        return Err(Error::Format(format!("unsupported version {}", b1[0])));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4) as usize;
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let box_scale = f64::from_le_bytes(b8);
    let mut tail = [0u8; 4];
    r.read_exact(&mut tail)?;
    let dealias = match tail[0] {
        0 => DealiasRule::TwoThirds,
        1 => DealiasRule::ZeroPad3Halves,
        d => return Err(Error::Format(format!("unknown dealias rule {d}"))),
    };
    if tail[3] != 8 {
        return Err(Error::Format(format!("unsupported precision {}", tail[3])));
    }
    let grid = Grid::new(n, box_scale, dealias)
        .map_err(|e| Error::Format(format!("bad grid in header: {e}")))?;
    Ok((grid, tail[1], tail[2] != 0))
}

fn read_component<R: Read>(r: &mut R, grid: Grid, real: bool) -> Result<SpectralField> {
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let mean_re = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let mean_im = f64::from_le_bytes(b8);
    let mut buf = vec![0u8; grid.len() * 16];
    r.read_exact(&mut buf)?;
    let coeffs: Vec<Complex64> = buf
        .chunks_exact(16)
        .map(|ch| {
            Complex64::new(
                f64::from_le_bytes(ch[0..8].try_into().unwrap()),
                f64::from_le_bytes(ch[8..16].try_into().unwrap()),
            )
        })
        .collect();
    let mut f = SpectralField::from_coeffs(grid, coeffs, real)?;
    f.set_coeff([0, 0, 0], Complex64::new(mean_re, mean_im));
    f.mean_subtracted = false;
    Ok(f)
}

pub fn write_field(path: &Path, field: &SpectralField) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_header(&mut w, field.grid(), 1, field.is_real())?;
    write_component(&mut w, field)?;
    w.flush()?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<SpectralField> {
    let mut r = BufReader::new(File::open(path)?);
    let (grid, ncomp, real) = read_header(&mut r)?;
    if ncomp != 1 {
        return Err(Error::Format(format!("expected scalar field, found {ncomp} components")));
    }
    read_component(&mut r, grid, real)
}

pub fn write_vector_field(path: &Path, v: &SpectralVectorField) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_header(&mut w, v.grid(), 3, v.is_real())?;
    for i in 0..3 {
        write_component(&mut w, v.component(i))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_vector_field(path: &Path) -> Result<SpectralVectorField> {
    let mut r = BufReader::new(File::open(path)?);
    let (grid, ncomp, real) = read_header(&mut r)?;
    if ncomp != 3 {
        return Err(Error::Format(format!("expected vector field, found {ncomp} components")));
    }
    SpectralVectorField::new([
        read_component(&mut r, grid, real)?,
        read_component(&mut r, grid, real)?,
        read_component(&mut r, grid, real)?,
    ])
}

/// Write the nonzero modes of a field as CSV rows `m1,m2,m3,re,im`.
pub fn export_csv(path: &Path, field: &SpectralField) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "m1,m2,m3,re,im")?;
    let grid = *field.grid();
    for (i1, i2, i3) in grid.indices() {
        let c = field.coeffs()[grid.flat(i1, i2, i3)];
        if c.norm() > 0.0 {
            writeln!(
                w,
                "{},{},{},{:e},{:e}",
                grid.wavenumber(i1),
                grid.wavenumber(i2),
                grid.wavenumber(i3),
                c.re,
                c.im
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn scalar_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.hmhd");
        let g = Grid::new(8, 1.5, DealiasRule::ZeroPad3Halves).unwrap();
        let mut f = synth::random_field(g, 3, 3);
        f.set_coeff([0, 0, 0], Complex64::new(0.25, 0.0));
        write_field(&path, &f).unwrap();
        let back = read_field(&path).unwrap();
        assert_eq!(back.grid(), f.grid());
        assert!(back.is_real());
        assert_eq!(back.mean(), Complex64::new(0.25, 0.0));
        assert!(back.relative_error(&f).unwrap() == 0.0);
    }

    #[test]
    fn vector_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.hmhd");
        let g = Grid::new(8, 1.0, DealiasRule::TwoThirds).unwrap();
        let v = synth::random_divfree_field(g, 9, 3);
        write_vector_field(&path, &v).unwrap();
        let back = read_vector_field(&path).unwrap();
        assert!(back.relative_error(&v).unwrap() == 0.0);
        assert!(read_field(&path).is_err());
    }

    #[test]
    fn rejects_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.hmhd");
        std::fs::write(&path, b"not a field file").unwrap();
        assert!(matches!(read_field(&path), Err(Error::Format(_))));
    }
}
