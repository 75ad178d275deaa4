//! JSON run configuration: either a named preset or an explicit
//! grid/physics/initial-condition description, plus solver options.
//! Unknown keys are rejected so typos fail loudly.

use serde::Deserialize;

use crate::boundary::BoundaryKind;
use crate::error::{Error, Result};
use crate::experiments::{self, Preset};
use crate::grid::{ComplexField, GridSpec, PhysParams};
use crate::laplacian::SchemeOrder;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub xmin: Vec<f64>,
    pub xmax: Vec<f64>,
    pub h: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum PotentialConfig {
    None,
    /// V = r^2 / a (the trap used by the 3D preset).
    Harmonic,
    Table { values: Vec<f64> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum InitialConfig {
    Zero,
    BrightSoliton { omega: f64 },
    VortexPair { m: u32, omega: f64, x0: f64 },
    KickedGaussian,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Named preset; mutually exclusive with the explicit fields below.
    pub preset: Option<String>,
    pub grid: Option<GridConfig>,
    pub a: Option<f64>,
    pub s: Option<f64>,
    pub potential: Option<PotentialConfig>,
    pub initial: Option<InitialConfig>,
    /// "cd2" | "shoc4" (default cd2).
    pub scheme: Option<String>,
    /// "dirichlet" | "msd" | "l0" | "periodic"; defaults to the preset's
    /// boundary condition, or dirichlet for explicit configs.
    pub boundary: Option<String>,
    /// Explicit time step; mutually exclusive with `k_fraction`.
    pub k: Option<f64>,
    /// Time step as a fraction of the linearized bound.
    pub k_fraction: Option<f64>,
    pub t_end: Option<f64>,
    /// Record cadence for the time series (steps per row, default 10).
    pub monitor_every: Option<usize>,
}

/// A config resolved to concrete objects ready to integrate.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub grid: GridSpec,
    pub params: PhysParams,
    pub field: ComplexField,
    pub scheme: SchemeOrder,
    pub boundary: BoundaryKind,
    pub k: Option<f64>,
    pub k_fraction: Option<f64>,
    pub t_end: f64,
    pub monitor_every: usize,
}

impl ResolvedRun {
    /// Linear and linearized bounds for this run's frozen initial state.
    pub fn stability_report(&self) -> Result<crate::stability::StabilityReport> {
        let l = crate::stability::compute_l(&self.field.values, &self.params, self.grid.h());
        let b = if self.boundary == BoundaryKind::Periodic {
            Vec::new()
        } else {
            let class = crate::grid::classify_points(&self.grid);
            let rhs = crate::integrator::nlse_rhs(&self.field, &self.params, self.scheme, self.boundary);
            crate::boundary::compute_bb(
                self.boundary,
                &self.field.values,
                &rhs.values,
                &self.params,
                &self.grid,
                &class,
            )?
        };
        crate::stability::linearized_bound(
            &l,
            &b,
            self.grid.dim(),
            self.scheme,
            self.grid.h(),
            self.params.a,
        )
    }

    /// Concrete time step: explicit `k` wins, otherwise a fraction of the
    /// linearized bound (default 0.9).
    pub fn effective_k(&self) -> Result<f64> {
        if let Some(k) = self.k {
            if k <= 0.0 {
                return Err(Error::Config("k must be positive".into()));
            }
            return Ok(k);
        }
        let frac = self.k_fraction.unwrap_or(0.9);
        if frac <= 0.0 {
            return Err(Error::Config("k_fraction must be positive".into()));
        }
        Ok(frac * self.stability_report()?.k_linz)
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn resolve(&self) -> Result<ResolvedRun> {
        if self.k.is_some() && self.k_fraction.is_some() {
            return Err(Error::Config(
                "specify either k or k_fraction, not both".into(),
            ));
        }
        let (grid, params, field, preset_boundary) = match (&self.preset, &self.grid) {
            (Some(name), None) => {
                if self.a.is_some()
                    || self.s.is_some()
                    || self.potential.is_some()
                    || self.initial.is_some()
                {
                    return Err(Error::Config(
                        "preset configs must not override a/s/potential/initial".into(),
                    ));
                }
                let Preset {
                    grid,
                    params,
                    field,
                    boundary,
                    ..
                } = experiments::preset(name)?;
                (grid, params, field, Some(boundary))
            }
            (None, Some(gc)) => {
                let grid = GridSpec::from_extent(&gc.xmin, &gc.xmax, gc.h)?;
                let a = self.a.unwrap_or(1.0);
                let s = self.s.unwrap_or(0.0);
                let v = match &self.potential {
                    None | Some(PotentialConfig::None) => vec![0.0; grid.len()],
                    Some(PotentialConfig::Harmonic) => (0..grid.len())
                        .map(|i| grid.coord_flat(i).iter().map(|c| c * c).sum::<f64>() / a)
                        .collect(),
                    Some(PotentialConfig::Table { values }) => values.clone(),
                };
                let params = PhysParams::new(a, s, v, &grid)?;
                let field = match &self.initial {
                    None | Some(InitialConfig::Zero) => ComplexField::zeros(grid.clone()),
                    Some(InitialConfig::BrightSoliton { omega }) => {
                        experiments::bright_soliton(&grid, *omega, s, a)?
                    }
                    Some(InitialConfig::VortexPair { m, omega, x0 }) => {
                        let profile = experiments::default_vortex_profile(*m, *omega, s, a)?;
                        experiments::vortex_pair(&grid, &profile, *m, *x0)?
                    }
                    Some(InitialConfig::KickedGaussian) => {
                        experiments::kicked_gaussian(&grid, a)?.0
                    }
                };
                (grid, params, field, None)
            }
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "specify either a preset or an explicit grid, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config("config needs a preset or a grid".into()))
            }
        };
        let scheme = self
            .scheme
            .as_deref()
            .map(str::parse)
            .transpose()?
            .unwrap_or(SchemeOrder::Cd2);
        let boundary = match &self.boundary {
            Some(s) => s.parse()?,
            None => preset_boundary.unwrap_or(BoundaryKind::Dirichlet),
        };
        Ok(ResolvedRun {
            grid,
            params,
            field,
            scheme,
            boundary,
            k: self.k,
            k_fraction: self.k_fraction,
            t_end: self.t_end.unwrap_or(10.0),
            monitor_every: self.monitor_every.unwrap_or(10),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_config_resolves() {
        let cfg = RunConfig::from_json(r#"{"preset": "soliton1d", "t_end": 100.0}"#).unwrap();
        let run = cfg.resolve().unwrap();
        assert_eq!(run.grid.shape(), &[101]);
        assert_eq!(run.boundary, BoundaryKind::Dirichlet);
        assert_eq!(run.scheme, SchemeOrder::Cd2);
        assert_eq!(run.t_end, 100.0);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = RunConfig::from_json(r#"{"preset": "soliton1d", "stepsize": 0.01}"#);
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn explicit_grid_with_soliton() {
        let cfg = RunConfig::from_json(
            r#"{
                "grid": {"xmin": [-10.0], "xmax": [10.0], "h": 0.2},
                "a": 1.0, "s": 1.0,
                "initial": {"kind": "bright_soliton", "omega": 1.0},
                "scheme": "shoc4", "boundary": "l0", "k": 0.01
            }"#,
        )
        .unwrap();
        let run = cfg.resolve().unwrap();
        assert_eq!(run.scheme, SchemeOrder::Shoc4);
        assert_eq!(run.boundary, BoundaryKind::LaplacianZero);
        assert_eq!(run.k, Some(0.01));
        assert!(run.field.values.iter().any(|v| v.norm() > 1.0));
    }

    #[test]
    fn conflicting_step_policies_rejected() {
        let cfg =
            RunConfig::from_json(r#"{"preset": "soliton1d", "k": 0.01, "k_fraction": 0.9}"#)
                .unwrap();
        assert!(cfg.resolve().is_err());
    }

    #[test]
    fn preset_plus_grid_rejected() {
        let cfg = RunConfig::from_json(
            r#"{"preset": "soliton1d", "grid": {"xmin": [-1.0], "xmax": [1.0], "h": 0.2}}"#,
        )
        .unwrap();
        assert!(cfg.resolve().is_err());
    }

    #[test]
    fn bad_potential_table_rejected() {
        let cfg = RunConfig::from_json(
            r#"{
                "grid": {"xmin": [-1.0], "xmax": [1.0], "h": 0.2},
                "potential": {"kind": "table", "values": [1.0, 2.0]}
            }"#,
        )
        .unwrap();
        assert!(cfg.resolve().is_err());
    }
}
