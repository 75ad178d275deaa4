//! Explicit scheme matrices on small grids for spectral verification:
//! Gershgorin disk extraction, circulant spectra, and a dense symmetric
//! eigenvalue oracle (cyclic Jacobi rotations).
//!
//! The matrix A is defined by dPsi/dt = (i a / h^2) A Psi with frozen
//! coefficients L (diagonal), B (boundary rows), and D (boundary Laplacian
//! entries feeding the 2SHOC near-boundary rows). These matrices are
//! desk-scale verification artifacts; the integrator never forms them.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::boundary::BoundaryKind;
use crate::error::{Error, Result};
use crate::grid::{classify_points, BoundaryClassification, GridSpec};
use crate::laplacian::{self, SchemeOrder};

/// Memory guard for dense construction (about a 15^3 grid).
pub const DENSE_LIMIT: usize = 3500;

/// Sparse real scheme matrix with its provenance.
#[derive(Debug, Clone)]
pub struct SchemeMatrix {
    pub n: usize,
    /// (row, col, value) triplets, column-major build order.
    pub entries: Vec<(usize, usize, f64)>,
    pub scheme: SchemeOrder,
    pub kind: BoundaryKind,
    pub grid: GridSpec,
}

impl SchemeMatrix {
    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n);
        for &(i, j, v) in &self.entries {
            m.data[i * self.n + j] += v;
        }
        m
    }

    /// y = A x for complex x.
    pub fn mul_complex(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for &(i, j, v) in &self.entries {
            y[i] += x[j] * v;
        }
        y
    }
}

/// Simple row-major dense matrix.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                dev = dev.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        dev
    }
}

/// Apply the frozen-coefficient scheme operator A to a real vector.
#[allow(clippy::too_many_arguments)]
fn apply_frozen(
    scheme: SchemeOrder,
    kind: BoundaryKind,
    grid: &GridSpec,
    class: &BoundaryClassification,
    l: &[f64],
    b: &[f64],
    d: &[f64],
    v: &[f64],
    psi_c: &mut [Complex64],
    dbuf: &mut [Complex64],
    lapbuf: &mut [Complex64],
    out: &mut [f64],
) {
    let h2 = grid.h() * grid.h();
    for (c, &x) in psi_c.iter_mut().zip(v) {
        *c = Complex64::new(x, 0.0);
    }
    if kind == BoundaryKind::Periodic {
        laplacian::cd_periodic(psi_c, grid, dbuf);
        let lap: &[Complex64] = match scheme {
            SchemeOrder::Cd2 => dbuf,
            SchemeOrder::Shoc4 => {
                laplacian::shoc_step2_periodic(dbuf, psi_c, grid, lapbuf);
                lapbuf
            }
        };
        for i in 0..v.len() {
            out[i] = h2 * lap[i].re + l[i] * v[i];
        }
        return;
    }
    laplacian::cd_nonboundary(psi_c, grid, class, dbuf);
    laplacian::fill_boundary_from_db(psi_c, d, class, grid.h(), dbuf);
    let lap: &[Complex64] = match scheme {
        SchemeOrder::Cd2 => dbuf,
        SchemeOrder::Shoc4 => {
            laplacian::shoc_step2_nonboundary(dbuf, psi_c, grid, class, lapbuf);
            lapbuf
        }
    };
    for &i in &class.non_boundary {
        out[i] = h2 * lap[i].re + l[i] * v[i];
    }
    for (k, &bp) in class.boundary.iter().enumerate() {
        out[bp] = b[k] * v[bp];
    }
}

/// Build A explicitly by applying the frozen operator to every basis
/// vector. `l` spans the whole grid; `b` and `d` are per boundary point in
/// classification order (ignored for periodic).
pub fn build_a(
    scheme: SchemeOrder,
    kind: BoundaryKind,
    grid: &GridSpec,
    l: &[f64],
    b: &[f64],
    d: &[f64],
) -> Result<SchemeMatrix> {
    let n = grid.len();
    if n > DENSE_LIMIT {
        return Err(Error::OversizeGrid {
            points: n,
            limit: DENSE_LIMIT,
        });
    }
    let class = classify_points(grid);
    if kind != BoundaryKind::Periodic
        && (b.len() != class.boundary.len() || d.len() != class.boundary.len())
    {
        return Err(Error::InvalidParams(format!(
            "boundary coefficient count {} != boundary point count {}",
            b.len(),
            class.boundary.len()
        )));
    }
    let mut entries = Vec::new();
    let mut basis = vec![0.0f64; n];
    let mut col = vec![0.0f64; n];
    let z = vec![Complex64::new(0.0, 0.0); n];
    let mut psi_c = z.clone();
    let mut dbuf = z.clone();
    let mut lapbuf = z;
    for j in 0..n {
        basis[j] = 1.0;
        apply_frozen(
            scheme, kind, grid, &class, l, b, d, &basis, &mut psi_c, &mut dbuf, &mut lapbuf,
            &mut col,
        );
        for (i, &v) in col.iter().enumerate() {
            if v != 0.0 {
                entries.push((i, j, v));
            }
        }
        basis[j] = 0.0;
        col.iter_mut().for_each(|x| *x = 0.0);
    }
    Ok(SchemeMatrix {
        n,
        entries,
        scheme,
        kind,
        grid: grid.clone(),
    })
}

/// Interior submatrix A' (boundary rows and columns deleted) plus the flat
/// grid index of each retained row. Fails if A' is not symmetric, which
/// indicates a stencil bug.
pub fn extract_interior(a: &SchemeMatrix) -> Result<(DenseMatrix, Vec<usize>)> {
    if a.kind == BoundaryKind::Periodic {
        return Err(Error::InvalidParams(
            "interior extraction applies to non-periodic boundaries".into(),
        ));
    }
    let class = classify_points(&a.grid);
    let mut keep = vec![usize::MAX; a.n];
    let mut rows = Vec::new();
    for (new, &old) in class.non_boundary.iter().enumerate() {
        keep[old] = new;
        rows.push(old);
    }
    let m = rows.len();
    let mut out = DenseMatrix::zeros(m);
    for &(i, j, v) in &a.entries {
        if keep[i] != usize::MAX && keep[j] != usize::MAX {
            out.data[keep[i] * m + keep[j]] += v;
        }
    }
    let dev = out.max_asymmetry();
    if dev > 1e-12 {
        return Err(Error::Asymmetric { deviation: dev });
    }
    Ok((out, rows))
}

/// Check the block-triangular split: with boundary rows first, the
/// boundary-to-interior block must be exactly zero (boundary rows are
/// diagonal-only).
pub fn boundary_rows_are_diagonal(a: &SchemeMatrix) -> bool {
    let class = classify_points(&a.grid);
    let mut is_boundary = vec![false; a.n];
    for &b in &class.boundary {
        is_boundary[b] = true;
    }
    a.entries
        .iter()
        .all(|&(i, j, _)| !is_boundary[i] || i == j)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GershgorinDisk {
    pub center: f64,
    pub radius: f64,
}

pub fn gershgorin_disks(m: &DenseMatrix) -> Vec<GershgorinDisk> {
    (0..m.n)
        .map(|i| {
            let mut radius = 0.0;
            for j in 0..m.n {
                if j != i {
                    radius += m.get(i, j).abs();
                }
            }
            GershgorinDisk {
                center: m.get(i, i),
                radius,
            }
        })
        .collect()
}

/// Upper bound on the spectral radius: max over disks of
/// max(|center - radius|, |center + radius|).
pub fn gershgorin_bound(m: &DenseMatrix) -> f64 {
    gershgorin_disks(m)
        .iter()
        .map(|d| (d.center - d.radius).abs().max((d.center + d.radius).abs()))
        .fold(0.0, f64::max)
}

/// Round to exact twelfths; the scheme entries are all integer multiples
/// of 1/12.
fn to_twelfths(x: f64) -> Result<i64> {
    let scaled = x * 12.0;
    let rounded = scaled.round();
    if (scaled - rounded).abs() > 1e-6 {
        return Err(Error::InvalidParams(format!(
            "value {x} is not a multiple of 1/12"
        )));
    }
    Ok(rounded as i64)
}

/// Unique symbolic Gershgorin forms of an interior matrix: each row's
/// (diagonal minus its local L value, radius) as exact twelfths.
pub fn unique_forms(m: &DenseMatrix, l_at_rows: &[f64]) -> Result<BTreeSet<(i64, i64)>> {
    assert_eq!(m.n, l_at_rows.len());
    let mut set = BTreeSet::new();
    for (i, disk) in gershgorin_disks(m).iter().enumerate() {
        set.insert((
            to_twelfths(disk.center - l_at_rows[i])?,
            to_twelfths(disk.radius)?,
        ));
    }
    Ok(set)
}

/// Eigenvalues of the circulant matrix with first column `c`:
/// `lambda_j = sum_m c_{(N - m) mod N} omega_j^m`, omega_j = e^{2 pi i j / N}.
pub fn circulant_eigs(c: &[f64]) -> Vec<Complex64> {
    let n = c.len();
    (0..n)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..n {
                let omega =
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j * m % n) as f64 / n as f64);
                acc += c[(n - m) % n] * omega;
            }
            acc
        })
        .collect()
}

/// First column of the periodic LSE scheme matrix for a 1D grid of size n.
pub fn circulant_column(scheme: SchemeOrder, n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n];
    match scheme {
        SchemeOrder::Cd2 => {
            c[0] = -2.0;
            c[1] = 1.0;
            c[n - 1] = 1.0;
        }
        SchemeOrder::Shoc4 => {
            c[0] = -15.0 / 6.0;
            c[1] = 4.0 / 3.0;
            c[2] = -1.0 / 12.0;
            c[n - 2] = -1.0 / 12.0;
            c[n - 1] = 4.0 / 3.0;
        }
    }
    c
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(m: &DenseMatrix) -> Result<Vec<f64>> {
    let sym_dev = m.max_asymmetry();
    if sym_dev > 1e-12 {
        return Err(Error::Asymmetric { deviation: sym_dev });
    }
    let n = m.n;
    let mut a = m.data.clone();
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let tol = 1e-14 * frob;
    const MAX_SWEEPS: usize = 100;
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        let off = (2.0 * off).sqrt();
        if off <= tol {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= tol / (n as f64) {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rows/columns p and q
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[p * n + k] = a[k * n + p];
                        a[k * n + q] = s * akp + c * akq;
                        a[q * n + k] = a[k * n + q];
                    }
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut off = 0.0f64;
    for p in 0..n {
        for q in (p + 1)..n {
            off += a[p * n + q] * a[p * n + q];
        }
    }
    Err(Error::EigenConvergence {
        sweeps: MAX_SWEEPS,
        off_norm: (2.0 * off).sqrt(),
    })
}

/// Spectral radius of a symmetric matrix.
pub fn max_abs_eig(m: &DenseMatrix) -> Result<f64> {
    Ok(jacobi_eigenvalues(m)?
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max))
}
