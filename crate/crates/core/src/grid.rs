//! Grid geometry, complex field storage, linear indexing, and norms.
//!
//! All grids are regular with the same spatial step `h` on every axis and
//! points stored in row-major order (last axis fastest).

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 3;

/// Regular grid geometry in 1, 2, or 3 dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    d: usize,
    n: Vec<usize>,
    xmin: Vec<f64>,
    h: f64,
}

impl GridSpec {
    /// Grid from point counts. Requires `n >= 5` on every axis (the compact
    /// fourth-order scheme needs two interior layers) and `h > 0`.
    pub fn new(n: &[usize], xmin: &[f64], h: f64) -> Result<Self> {
        let d = n.len();
        if d == 0 || d > MAX_DIM {
            return Err(Error::InvalidGrid(format!("dimension {d} not in 1..=3")));
        }
        if xmin.len() != d {
            return Err(Error::InvalidGrid("xmin length != dimension".into()));
        }
        if h.is_nan() || h <= 0.0 || !h.is_finite() {
            return Err(Error::InvalidGrid(format!("h = {h} must be positive")));
        }
        if n.iter().any(|&ni| ni < 5) {
            return Err(Error::InvalidGrid(format!(
                "need at least 5 points per axis, got {n:?}"
            )));
        }
        Ok(GridSpec {
            d,
            n: n.to_vec(),
            xmin: xmin.to_vec(),
            h,
        })
    }

    /// Grid from physical extents. `xmax - xmin` must be an integer multiple
    /// of `h` to 1e-12 relative tolerance.
    pub fn from_extent(xmin: &[f64], xmax: &[f64], h: f64) -> Result<Self> {
        if xmin.len() != xmax.len() {
            return Err(Error::InvalidGrid("xmin/xmax length mismatch".into()));
        }
        let mut n = Vec::with_capacity(xmin.len());
        for (&lo, &hi) in xmin.iter().zip(xmax) {
            let span = hi - lo;
            if span.is_nan() || span <= 0.0 {
                return Err(Error::InvalidGrid(format!("empty extent [{lo}, {hi}]")));
            }
            let steps = span / h;
            let rounded = steps.round();
            if (steps - rounded).abs() > 1e-12 * steps.max(1.0) {
                return Err(Error::InvalidGrid(format!(
                    "extent [{lo}, {hi}] is not a multiple of h = {h}"
                )));
            }
            n.push(rounded as usize + 1);
        }
        GridSpec::new(&n, xmin, h)
    }

    /// Symmetric grid `[-half_width, half_width]^d`.
    pub fn centered(d: usize, half_width: f64, h: f64) -> Result<Self> {
        let xmin = vec![-half_width; d];
        let xmax = vec![half_width; d];
        GridSpec::from_extent(&xmin, &xmax, h)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn shape(&self) -> &[usize] {
        &self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn xmin(&self) -> &[f64] {
        &self.xmin
    }

    pub fn xmax(&self, axis: usize) -> f64 {
        self.xmin[axis] + (self.n[axis] - 1) as f64 * self.h
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major strides, one per axis.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.d];
        for ax in (0..self.d.saturating_sub(1)).rev() {
            s[ax] = s[ax + 1] * self.n[ax + 1];
        }
        s
    }

    /// Row-major flat index of a multi-index.
    pub fn linear_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.d || idx.iter().zip(&self.n).any(|(&i, &ni)| i >= ni) {
            return Err(Error::OutOfBounds {
                index: idx.to_vec(),
                shape: self.n.clone(),
            });
        }
        let mut flat = 0;
        for (&i, &ni) in idx.iter().zip(&self.n) {
            flat = flat * ni + i;
        }
        Ok(flat)
    }

    /// Inverse of [`linear_index`](Self::linear_index).
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        debug_assert!(flat < self.len());
        let mut idx = vec![0; self.d];
        for ax in (0..self.d).rev() {
            idx[ax] = flat % self.n[ax];
            flat /= self.n[ax];
        }
        idx
    }

    /// Physical coordinates of a grid point.
    pub fn coord(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .zip(&self.xmin)
            .map(|(&i, &lo)| lo + i as f64 * self.h)
            .collect()
    }

    pub fn coord_flat(&self, flat: usize) -> Vec<f64> {
        self.coord(&self.multi_index(flat))
    }
}

/// Classification of a single grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Interior,
    NearBoundary,
    Boundary,
}

/// Partition of grid points into boundary, near-boundary (one layer in) and
/// interior, with each boundary point's inward neighbor.
///
/// At 2D/3D corners and edges the inward neighbor steps one point inward on
/// every offending axis (diagonally inward).
#[derive(Debug, Clone)]
pub struct BoundaryClassification {
    pub class: Vec<PointClass>,
    /// Flat indices of boundary points.
    pub boundary: Vec<usize>,
    /// Inward neighbor of each boundary point, parallel to `boundary`.
    pub inward: Vec<usize>,
    /// Flat indices of all non-boundary points (near-boundary plus interior).
    pub non_boundary: Vec<usize>,
}

impl BoundaryClassification {
    pub fn count(&self, which: PointClass) -> usize {
        self.class.iter().filter(|&&c| c == which).count()
    }
}

/// Partition all points of `grid` by distance from the boundary.
pub fn classify_points(grid: &GridSpec) -> BoundaryClassification {
    let total = grid.len();
    let d = grid.dim();
    let n = grid.shape().to_vec();
    let mut class = Vec::with_capacity(total);
    let mut boundary = Vec::new();
    let mut inward = Vec::new();
    let mut non_boundary = Vec::new();

    let mut idx = vec![0usize; d];
    for flat in 0..total {
        let on_face = idx.iter().zip(&n).any(|(&i, &ni)| i == 0 || i == ni - 1);
        if on_face {
            class.push(PointClass::Boundary);
            boundary.push(flat);
            let step: Vec<usize> = idx
                .iter()
                .zip(&n)
                .map(|(&i, &ni)| {
                    if i == 0 {
                        1
                    } else if i == ni - 1 {
                        ni - 2
                    } else {
                        i
                    }
                })
                .collect();
            inward.push(grid.linear_index(&step).expect("inward neighbor in bounds"));
        } else {
            let near = idx.iter().zip(&n).any(|(&i, &ni)| i == 1 || i == ni - 2);
            class.push(if near {
                PointClass::NearBoundary
            } else {
                PointClass::Interior
            });
            non_boundary.push(flat);
        }
        // row-major increment
        for ax in (0..d).rev() {
            idx[ax] += 1;
            if idx[ax] < n[ax] {
                break;
            }
            idx[ax] = 0;
        }
    }

    BoundaryClassification {
        class,
        boundary,
        inward,
        non_boundary,
    }
}

/// Complex wavefunction sampled on a grid.
#[derive(Debug, Clone)]
pub struct ComplexField {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
    /// Set once a non-finite value has been observed; the field is then
    /// treated as blown up rather than an error so threshold searches can
    /// observe divergence.
    pub diverged: bool,
}

impl ComplexField {
    pub fn zeros(grid: GridSpec) -> Self {
        let len = grid.len();
        ComplexField {
            grid,
            values: vec![Complex64::new(0.0, 0.0); len],
            diverged: false,
        }
    }

    pub fn from_values(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "value count {} != grid size {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(ComplexField {
            grid,
            values,
            diverged: false,
        })
    }

    /// Sample a function of physical coordinates over the grid.
    pub fn sample(grid: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let values = (0..grid.len())
            .map(|flat| f(&grid.coord_flat(flat)))
            .collect();
        ComplexField {
            grid,
            values,
            diverged: false,
        }
    }
}

/// max |psi|^2 and discrete L2 mass h^d * sum |psi|^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldNorms {
    pub max_sq: f64,
    pub l2_mass: f64,
    pub finite: bool,
}

pub fn field_norms(field: &ComplexField) -> FieldNorms {
    let mut max_sq = 0.0f64;
    let mut sum = 0.0f64;
    let mut finite = true;
    for v in &field.values {
        let sq = v.norm_sqr();
        if !sq.is_finite() {
            finite = false;
        }
        if sq > max_sq {
            max_sq = sq;
        }
        sum += sq;
    }
    let hd = field.grid.h().powi(field.grid.dim() as i32);
    FieldNorms {
        max_sq,
        l2_mass: hd * sum,
        finite,
    }
}

/// Equation parameters: dispersion `a > 0`, nonlinearity `s`, and the
/// external potential sampled on the grid.
#[derive(Debug, Clone)]
pub struct PhysParams {
    pub a: f64,
    pub s: f64,
    pub v: Vec<f64>,
}

impl PhysParams {
    pub fn new(a: f64, s: f64, v: Vec<f64>, grid: &GridSpec) -> Result<Self> {
        if a.is_nan() || a <= 0.0 || !a.is_finite() {
            return Err(Error::InvalidParams(format!("a = {a} must be positive")));
        }
        if !s.is_finite() {
            return Err(Error::InvalidParams("s must be finite".into()));
        }
        if v.len() != grid.len() {
            return Err(Error::InvalidParams(format!(
                "potential has {} values, grid has {} points",
                v.len(),
                grid.len()
            )));
        }
        Ok(PhysParams { a, s, v })
    }

    /// Potential-free parameters.
    pub fn uniform(a: f64, s: f64, grid: &GridSpec) -> Result<Self> {
        PhysParams::new(a, s, vec![0.0; grid.len()], grid)
    }
}

const SNAPSHOT_MAGIC: &str = "NLSEFIELD";

/// Write a field snapshot: one text header line
/// `NLSEFIELD d=<d> n=<n1[,n2[,n3]]> h=<h>` followed by interleaved
/// little-endian 64-bit floats (re, im) in row-major order.
pub fn write_snapshot<W: Write>(field: &ComplexField, mut w: W) -> Result<()> {
    let n = field
        .grid
        .shape()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",");
    writeln!(
        w,
        "{SNAPSHOT_MAGIC} d={} n={} h={}",
        field.grid.dim(),
        n,
        field.grid.h()
    )?;
    for v in &field.values {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

/// Read a snapshot written by [`write_snapshot`]. The header carries only
/// shape and step, so the domain is reconstructed centered on the origin.
pub fn read_snapshot<R: BufRead>(mut r: R) -> Result<ComplexField> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let header = header.trim_end();
    let mut d = None;
    let mut n: Option<Vec<usize>> = None;
    let mut h = None;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(SNAPSHOT_MAGIC) {
        return Err(Error::Snapshot("missing NLSEFIELD magic".into()));
    }
    for part in parts {
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| Error::Snapshot(format!("bad header token {part:?}")))?;
        match key {
            "d" => d = Some(val.parse::<usize>().map_err(|e| Error::Snapshot(e.to_string()))?),
            "n" => {
                let counts = val
                    .split(',')
                    .map(|v| v.parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::Snapshot(e.to_string()))?;
                n = Some(counts);
            }
            "h" => h = Some(val.parse::<f64>().map_err(|e| Error::Snapshot(e.to_string()))?),
            _ => return Err(Error::Snapshot(format!("unknown header key {key:?}"))),
        }
    }
    let (d, n, h) = match (d, n, h) {
        (Some(d), Some(n), Some(h)) => (d, n, h),
        _ => return Err(Error::Snapshot("incomplete header".into())),
    };
    if n.len() != d {
        return Err(Error::Snapshot(format!(
            "header d={d} disagrees with {} axis counts",
            n.len()
        )));
    }
    let xmin: Vec<f64> = n.iter().map(|&ni| -0.5 * (ni - 1) as f64 * h).collect();
    let grid = GridSpec::new(&n, &xmin, h)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut buf = [0u8; 16];
    for _ in 0..grid.len() {
        r.read_exact(&mut buf)
            .map_err(|_| Error::Snapshot("truncated payload".into()))?;
        let re = f64::from_le_bytes(buf[..8].try_into().unwrap());
        let im = f64::from_le_bytes(buf[8..].try_into().unwrap());
        values.push(Complex64::new(re, im));
    }
    let mut field = ComplexField::from_values(grid, values)?;
    field.diverged = !field_norms(&field).finite;
    Ok(field)
}
