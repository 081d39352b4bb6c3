//! Cell-centered 2-D scalar fields on uniform square-cell grids, with the
//! flat binary checkpoint format and CSV export.

use crate::error::{Error, Result};
use crate::geom::Vec2;
use std::io::{Read, Write};
use std::path::Path;

/// Grid geometry: `nx * ny` square cells of spacing `h`, lower-left corner at
/// `origin`. Cell (i, j) is centered at `origin + ((i+1/2)h, (j+1/2)h)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub origin: Vec2,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, h: f64, origin: Vec2) -> Result<GridSpec> {
        if nx < 8 || ny < 8 {
            return Err(Error::InvalidInput(format!(
                "grid must be at least 8x8, got {nx}x{ny}"
            )));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidInput(format!("grid spacing h = {h}")));
        }
        Ok(GridSpec { nx, ny, h, origin })
    }

    /// Square domain [0, side]^2 with nx = ny = n.
    pub fn square(n: usize, side: f64) -> Result<GridSpec> {
        GridSpec::new(n, n, side / n as f64, Vec2::ZERO)
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize) -> Vec2 {
        Vec2::new(
            self.origin.x + (i as f64 + 0.5) * self.h,
            self.origin.y + (j as f64 + 0.5) * self.h,
        )
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Extent of the domain rectangle.
    pub fn upper(&self) -> Vec2 {
        Vec2::new(
            self.origin.x + self.nx as f64 * self.h,
            self.origin.y + self.ny as f64 * self.h,
        )
    }

    /// Cell containing a point, clamped to the grid.
    pub fn locate(&self, p: Vec2) -> (usize, usize) {
        let fi = ((p.x - self.origin.x) / self.h - 0.5).floor();
        let fj = ((p.y - self.origin.y) / self.h - 0.5).floor();
        let i = fi.clamp(0.0, (self.nx - 1) as f64) as usize;
        let j = fj.clamp(0.0, (self.ny - 1) as f64) as usize;
        (i, j)
    }
}

/// Cell-centered scalar samples over a [`GridSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: GridSpec) -> ScalarField {
        ScalarField {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: GridSpec, c: f64) -> ScalarField {
        ScalarField {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(Vec2) -> f64) -> ScalarField {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                values.push(f(grid.center(i, j)));
            }
        }
        ScalarField { grid, values }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.grid.idx(i, j);
        self.values[k] = v;
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Bilinear interpolation at a point (clamped to the cell-center lattice).
    pub fn interp(&self, p: Vec2) -> f64 {
        let g = &self.grid;
        let fx = ((p.x - g.origin.x) / g.h - 0.5).clamp(0.0, (g.nx - 1) as f64);
        let fy = ((p.y - g.origin.y) / g.h - 0.5).clamp(0.0, (g.ny - 1) as f64);
        let i0 = (fx.floor() as usize).min(g.nx - 2);
        let j0 = (fy.floor() as usize).min(g.ny - 2);
        let tx = fx - i0 as f64;
        let ty = fy - j0 as f64;
        let v00 = self.at(i0, j0);
        let v10 = self.at(i0 + 1, j0);
        let v01 = self.at(i0, j0 + 1);
        let v11 = self.at(i0 + 1, j0 + 1);
        v00 * (1.0 - tx) * (1.0 - ty)
            + v10 * tx * (1.0 - ty)
            + v01 * (1.0 - tx) * ty
            + v11 * tx * ty
    }

    /// Flat binary checkpoint: 32-byte header (magic "FFLD", nx u16, ny u16,
    /// h f64, origin 2x f64, all little-endian) then nx*ny f64 values,
    /// row-major from the bottom row.
    pub fn write_binary<W: Write>(&self, w: &mut W) -> Result<()> {
        let g = &self.grid;
        if g.nx > u16::MAX as usize || g.ny > u16::MAX as usize {
            return Err(Error::InvalidInput(
                "grid too large for checkpoint format (u16 sizes)".into(),
            ));
        }
        w.write_all(b"FFLD")?;
        w.write_all(&(g.nx as u16).to_le_bytes())?;
        w.write_all(&(g.ny as u16).to_le_bytes())?;
        w.write_all(&g.h.to_le_bytes())?;
        w.write_all(&g.origin.x.to_le_bytes())?;
        w.write_all(&g.origin.y.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(r: &mut R) -> Result<ScalarField> {
        let mut header = [0u8; 32];
        r.read_exact(&mut header)?;
        if &header[0..4] != b"FFLD" {
            return Err(Error::InvalidInput("bad checkpoint magic".into()));
        }
        let nx = u16::from_le_bytes([header[4], header[5]]) as usize;
        let ny = u16::from_le_bytes([header[6], header[7]]) as usize;
        let h = f64::from_le_bytes(header[8..16].try_into().unwrap());
        let ox = f64::from_le_bytes(header[16..24].try_into().unwrap());
        let oy = f64::from_le_bytes(header[24..32].try_into().unwrap());
        let grid = GridSpec::new(nx, ny, h, Vec2::new(ox, oy))?;
        let mut buf = vec![0u8; nx * ny * 8];
        r.read_exact(&mut buf)?;
        let values = buf
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(ScalarField { grid, values })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_binary(&mut f)
    }

    pub fn load(path: &Path) -> Result<ScalarField> {
        let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
        ScalarField::read_binary(&mut f)
    }

    /// CSV export (x,y,value) for plotting.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "x,y,value")?;
        for j in 0..self.grid.ny {
            for i in 0..self.grid.nx {
                let c = self.grid.center(i, j);
                writeln!(w, "{},{},{}", c.x, c.y, self.at(i, j))?;
            }
        }
        Ok(())
    }
}

/// Cell-centered vector samples (used for gradients and fluxes).
#[derive(Clone, Debug)]
pub struct VectorField {
    pub grid: GridSpec,
    pub values: Vec<Vec2>,
}

impl VectorField {
    pub fn zeros(grid: GridSpec) -> VectorField {
        VectorField {
            grid,
            values: vec![Vec2::ZERO; grid.len()],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Vec2 {
        self.values[self.grid.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Vec2) {
        let k = self.grid.idx(i, j);
        self.values[k] = v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_roundtrip_is_exact() {
        let grid = GridSpec::new(9, 12, 0.125, Vec2::new(-1.0, 2.5)).unwrap();
        let f = ScalarField::from_fn(grid, |p| (p.x * 37.1).sin() + p.y);
        let mut buf = Vec::new();
        f.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 32 + 9 * 12 * 8);
        let g = ScalarField::read_binary(&mut buf.as_slice()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn header_is_32_bytes_with_magic() {
        let grid = GridSpec::new(8, 8, 1.0, Vec2::ZERO).unwrap();
        let f = ScalarField::zeros(grid);
        let mut buf = Vec::new();
        f.write_binary(&mut buf).unwrap();
        assert_eq!(&buf[0..4], b"FFLD");
        assert_eq!(buf.len(), 32 + 64 * 8);
    }

    #[test]
    fn rejects_tiny_grids() {
        assert!(GridSpec::new(4, 20, 0.1, Vec2::ZERO).is_err());
    }

    #[test]
    fn interp_reproduces_linear_fields() {
        let grid = GridSpec::new(16, 16, 0.25, Vec2::ZERO).unwrap();
        let f = ScalarField::from_fn(grid, |p| 2.0 * p.x - 3.0 * p.y + 0.5);
        let q = Vec2::new(1.33, 2.17);
        assert!((f.interp(q) - (2.0 * q.x - 3.0 * q.y + 0.5)).abs() < 1e-12);
    }
}
