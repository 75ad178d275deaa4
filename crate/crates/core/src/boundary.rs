//! Boundary-condition coefficients.
//!
//! Each non-periodic boundary condition is expressed two ways: as a
//! time-derivative entry `dPsi/dt|_b = (i a / h^2) B_b Psi_b`, and as a
//! Laplacian value `lap(Psi)_b = D_b Psi_b / h^2`. Both coefficients are
//! real. Dirichlet has `B_b = 0`, Laplacian-zero has `D_b = 0`, and MSD
//! derives both from the inward neighbor, which must be evaluated by the
//! interior scheme first.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BoundaryClassification, GridSpec, PhysParams};

/// Minimum |psi| at the inward neighbor for the MSD quotient; below it the
/// coefficient falls back to 0 and a warning counter is bumped.
pub const MSD_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Dirichlet,
    Msd,
    #[serde(rename = "l0")]
    LaplacianZero,
    Periodic,
}

impl FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(BoundaryKind::Dirichlet),
            "msd" => Ok(BoundaryKind::Msd),
            "l0" => Ok(BoundaryKind::LaplacianZero),
            "periodic" => Ok(BoundaryKind::Periodic),
            other => Err(Error::Config(format!(
                "unknown boundary kind {other:?} (expected dirichlet|msd|l0|periodic)"
            ))),
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundaryKind::Dirichlet => "dirichlet",
            BoundaryKind::Msd => "msd",
            BoundaryKind::LaplacianZero => "l0",
            BoundaryKind::Periodic => "periodic",
        };
        f.write_str(s)
    }
}

/// Per-boundary-point coefficients, parallel to
/// [`BoundaryClassification::boundary`].
#[derive(Debug, Clone, Default)]
pub struct BoundaryCoeffs {
    pub b: Vec<f64>,
    pub d: Vec<f64>,
    /// Number of MSD evaluations that hit the degenerate-quotient fallback.
    pub msd_fallbacks: usize,
}

/// Time-derivative coefficients `B_b`.
///
/// `psi_t` must hold the interior-scheme time derivative at least at the
/// inward neighbors (only read for MSD).
pub fn compute_bb(
    kind: BoundaryKind,
    psi: &[Complex64],
    psi_t: &[Complex64],
    params: &PhysParams,
    grid: &GridSpec,
    class: &BoundaryClassification,
) -> Result<Vec<f64>> {
    let mut warn = 0;
    let b = compute_bb_counted(kind, psi, psi_t, params, grid, class, &mut warn);
    Ok(b)
}

pub(crate) fn compute_bb_counted(
    kind: BoundaryKind,
    psi: &[Complex64],
    psi_t: &[Complex64],
    params: &PhysParams,
    grid: &GridSpec,
    class: &BoundaryClassification,
    msd_fallbacks: &mut usize,
) -> Vec<f64> {
    let h2a = grid.h() * grid.h() / params.a;
    class
        .boundary
        .iter()
        .zip(&class.inward)
        .map(|(&b, &inw)| match kind {
            BoundaryKind::Dirichlet | BoundaryKind::Periodic => 0.0,
            BoundaryKind::LaplacianZero => {
                h2a * (params.s * psi[b].norm_sqr() - params.v[b])
            }
            BoundaryKind::Msd => {
                let denom = psi[inw];
                if denom.norm() < MSD_TOLERANCE {
                    *msd_fallbacks += 1;
                    0.0
                } else {
                    h2a * (psi_t[inw] / denom).im
                }
            }
        })
        .collect()
}

/// Laplacian coefficients `D_b`.
///
/// `lap` must hold the second-order Laplacian at least at the inward
/// neighbors (only read for MSD).
pub fn compute_db(
    kind: BoundaryKind,
    psi: &[Complex64],
    lap: &[Complex64],
    params: &PhysParams,
    grid: &GridSpec,
    class: &BoundaryClassification,
) -> Result<Vec<f64>> {
    let mut warn = 0;
    Ok(compute_db_counted(
        kind, psi, lap, params, grid, class, &mut warn,
    ))
}

pub(crate) fn compute_db_counted(
    kind: BoundaryKind,
    psi: &[Complex64],
    lap: &[Complex64],
    params: &PhysParams,
    grid: &GridSpec,
    class: &BoundaryClassification,
    msd_fallbacks: &mut usize,
) -> Vec<f64> {
    let h2 = grid.h() * grid.h();
    class
        .boundary
        .iter()
        .zip(&class.inward)
        .map(|(&b, &inw)| match kind {
            BoundaryKind::LaplacianZero | BoundaryKind::Periodic => 0.0,
            BoundaryKind::Dirichlet => {
                (h2 / params.a) * (params.v[b] - params.s * psi[b].norm_sqr())
            }
            BoundaryKind::Msd => {
                let denom = psi[inw];
                if denom.norm() < MSD_TOLERANCE {
                    *msd_fallbacks += 1;
                    0.0
                } else {
                    let n_b = params.s * psi[b].norm_sqr() - params.v[b];
                    let n_in = params.s * psi[inw].norm_sqr() - params.v[inw];
                    h2 * ((Complex64::i() * lap[inw] / denom).im + (n_in - n_b) / params.a)
                }
            }
        })
        .collect()
}

/// Wrap a multi-index by a signed offset with periodic wraparound per axis.
pub fn periodic_neighbor(idx: &[usize], offset: &[isize], grid: &GridSpec) -> Vec<usize> {
    idx.iter()
        .zip(offset)
        .zip(grid.shape())
        .map(|((&i, &off), &ni)| {
            let ni = ni as isize;
            (((i as isize + off) % ni + ni) % ni) as usize
        })
        .collect()
}
