//! RK4 time-stepping of the NLSE right-hand side, blow-up detection, and
//! the empirical stability-threshold search.

use std::io::Write;

use num_complex::Complex64;

use crate::boundary::{self, BoundaryKind};
use crate::error::{Error, Result};
use crate::grid::{
    classify_points, BoundaryClassification, ComplexField, GridSpec, PhysParams,
};
use crate::laplacian::{self, SchemeOrder};

/// One NLSE problem: grid, parameters, scheme, and boundary kind, with the
/// point classification computed once.
pub struct Problem {
    pub grid: GridSpec,
    pub params: PhysParams,
    pub scheme: SchemeOrder,
    pub kind: BoundaryKind,
    pub class: BoundaryClassification,
}

/// Reusable stage buffers for [`Problem::rhs`] and [`Problem::rk4_step`].
pub struct Scratch {
    d: Vec<Complex64>,
    lap: Vec<Complex64>,
    stage: Vec<Complex64>,
    f: Vec<Complex64>,
    acc: Vec<Complex64>,
    pub msd_fallbacks: usize,
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); n];
        Scratch {
            d: z.clone(),
            lap: z.clone(),
            stage: z.clone(),
            f: z.clone(),
            acc: z,
            msd_fallbacks: 0,
        }
    }
}

impl Problem {
    pub fn new(
        grid: GridSpec,
        params: PhysParams,
        scheme: SchemeOrder,
        kind: BoundaryKind,
    ) -> Self {
        let class = classify_points(&grid);
        Problem {
            grid,
            params,
            scheme,
            kind,
            class,
        }
    }

    /// dPsi/dt = i (a lap(Psi) - V Psi + s |Psi|^2 Psi) at interior and
    /// near-boundary points; boundary points get (i a / h^2) B_b Psi_b,
    /// with MSD coefficients computed after the interior pass.
    pub fn rhs(&self, psi: &[Complex64], scratch: &mut Scratch, out: &mut [Complex64]) {
        let a = self.params.a;
        let s = self.params.s;
        let v = &self.params.v;
        let h = self.grid.h();

        if self.kind == BoundaryKind::Periodic {
            laplacian::cd_periodic(psi, &self.grid, &mut scratch.d);
            let lap: &[Complex64] = match self.scheme {
                SchemeOrder::Cd2 => &scratch.d,
                SchemeOrder::Shoc4 => {
                    laplacian::shoc_step2_periodic(&scratch.d, psi, &self.grid, &mut scratch.lap);
                    &scratch.lap
                }
            };
            for i in 0..psi.len() {
                let p = psi[i];
                out[i] = Complex64::i() * (a * lap[i] - v[i] * p + s * p.norm_sqr() * p);
            }
            return;
        }

        // step 1: second-order Laplacian at non-boundary points, then the
        // boundary D_b form (MSD reads the inward-neighbor value just
        // computed, so ordering matters)
        laplacian::cd_nonboundary(psi, &self.grid, &self.class, &mut scratch.d);
        let db = boundary::compute_db_counted(
            self.kind,
            psi,
            &scratch.d,
            &self.params,
            &self.grid,
            &self.class,
            &mut scratch.msd_fallbacks,
        );
        laplacian::fill_boundary_from_db(psi, &db, &self.class, h, &mut scratch.d);

        let lap: &[Complex64] = match self.scheme {
            SchemeOrder::Cd2 => &scratch.d,
            SchemeOrder::Shoc4 => {
                laplacian::shoc_step2_nonboundary(
                    &scratch.d,
                    psi,
                    &self.grid,
                    &self.class,
                    &mut scratch.lap,
                );
                &scratch.lap
            }
        };

        for &i in &self.class.non_boundary {
            let p = psi[i];
            out[i] = Complex64::i() * (a * lap[i] - v[i] * p + s * p.norm_sqr() * p);
        }

        match self.kind {
            BoundaryKind::Dirichlet => {
                for &b in &self.class.boundary {
                    out[b] = Complex64::new(0.0, 0.0);
                }
            }
            BoundaryKind::LaplacianZero => {
                for &b in &self.class.boundary {
                    let p = psi[b];
                    out[b] = Complex64::i() * (s * p.norm_sqr() - v[b]) * p;
                }
            }
            BoundaryKind::Msd => {
                // interior time derivative first, then the boundary overwrite
                for (&b, &inw) in self.class.boundary.iter().zip(&self.class.inward) {
                    let denom = psi[inw];
                    if denom.norm() < boundary::MSD_TOLERANCE {
                        scratch.msd_fallbacks += 1;
                        out[b] = Complex64::new(0.0, 0.0);
                    } else {
                        let omega = (out[inw] / denom).im;
                        out[b] = Complex64::i() * omega * psi[b];
                    }
                }
            }
            BoundaryKind::Periodic => unreachable!(),
        }
    }

    /// Classic four-stage RK4 update in place. Boundary derivatives are
    /// re-evaluated per stage.
    pub fn rk4_step(&self, psi: &mut [Complex64], k: f64, scratch: &mut Scratch) {
        let n = psi.len();
        // stage 1
        let mut f = std::mem::take(&mut scratch.f);
        let mut acc = std::mem::take(&mut scratch.acc);
        let mut stage = std::mem::take(&mut scratch.stage);

        self.rhs(psi, scratch, &mut f);
        acc.copy_from_slice(&f);
        for i in 0..n {
            stage[i] = psi[i] + (0.5 * k) * f[i];
        }
        // stage 2
        self.rhs(&stage, scratch, &mut f);
        for i in 0..n {
            acc[i] += 2.0 * f[i];
            stage[i] = psi[i] + (0.5 * k) * f[i];
        }
        // stage 3
        self.rhs(&stage, scratch, &mut f);
        for i in 0..n {
            acc[i] += 2.0 * f[i];
            stage[i] = psi[i] + k * f[i];
        }
        // stage 4
        self.rhs(&stage, scratch, &mut f);
        for i in 0..n {
            acc[i] += f[i];
            psi[i] += (k / 6.0) * acc[i];
        }

        scratch.f = f;
        scratch.acc = acc;
        scratch.stage = stage;
    }
}

/// Convenience wrapper evaluating the right-hand side as a field.
pub fn nlse_rhs(
    psi: &ComplexField,
    params: &PhysParams,
    scheme: SchemeOrder,
    kind: BoundaryKind,
) -> ComplexField {
    let problem = Problem::new(psi.grid.clone(), params.clone(), scheme, kind);
    let mut scratch = Scratch::new(psi.values.len());
    let mut out = vec![Complex64::new(0.0, 0.0); psi.values.len()];
    problem.rhs(&psi.values, &mut scratch, &mut out);
    ComplexField::from_values(psi.grid.clone(), out).expect("same grid")
}

#[derive(Debug, Clone)]
pub struct StepConfig {
    pub k: f64,
    pub t_end: f64,
    pub scheme: SchemeOrder,
    pub boundary: BoundaryKind,
    /// Steps between monitor records.
    pub monitor_every: usize,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub times: Vec<f64>,
    pub max_sq: Vec<f64>,
    pub l2_mass: Vec<f64>,
    pub diverged: bool,
    pub steps: usize,
}

impl RunRecord {
    /// CSV columns `t,max_psi_sq,l2_mass,diverged`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,max_psi_sq,l2_mass,diverged")?;
        for i in 0..self.times.len() {
            writeln!(
                w,
                "{},{},{},{}",
                self.times[i],
                self.max_sq[i],
                self.l2_mass[i],
                self.diverged && i + 1 == self.times.len()
            )?;
        }
        Ok(())
    }
}

/// Blow-up detector: max |psi|^2 exceeds 10x its initial value, or any
/// value is non-finite.
pub const BLOWUP_FACTOR: f64 = 10.0;

/// Secondary instability detector: L^2 mass growth beyond 5%. RK4 below
/// the stability threshold is very slightly dissipative, so sustained mass
/// growth only occurs when an unstable mode is being amplified. This
/// catches instabilities whose amplitude saturates below the 10x cutoff
/// (the 1D focusing soliton disintegrates into bounded radiation while its
/// mass climbs steadily).
pub const MASS_GROWTH_FACTOR: f64 = 1.05;

/// Step from t=0 to `t_end` (or divergence), recording monitors.
pub fn integrate(
    psi0: &ComplexField,
    cfg: &StepConfig,
    params: &PhysParams,
) -> (RunRecord, ComplexField) {
    assert!(cfg.k > 0.0 && cfg.t_end > 0.0, "k and t_end must be positive");
    let problem = Problem::new(psi0.grid.clone(), params.clone(), cfg.scheme, cfg.boundary);
    let mut psi = psi0.values.clone();
    let mut scratch = Scratch::new(psi.len());

    let hd = psi0.grid.h().powi(psi0.grid.dim() as i32);
    let monitor = |psi: &[Complex64]| -> (f64, f64, bool) {
        let mut max_sq = 0.0f64;
        let mut sum = 0.0f64;
        let mut finite = true;
        for v in psi {
            let sq = v.norm_sqr();
            if !sq.is_finite() {
                finite = false;
            }
            if sq > max_sq {
                max_sq = sq;
            }
            sum += sq;
        }
        (max_sq, hd * sum, finite)
    };

    let (max0, mass0, finite0) = monitor(&psi);
    let cutoff = BLOWUP_FACTOR * max0;
    let mass_cutoff = MASS_GROWTH_FACTOR * mass0;
    let mut record = RunRecord {
        times: vec![0.0],
        max_sq: vec![max0],
        l2_mass: vec![mass0],
        diverged: !finite0,
        steps: 0,
    };
    if record.diverged {
        let mut field = ComplexField::from_values(psi0.grid.clone(), psi).expect("same grid");
        field.diverged = true;
        return (record, field);
    }

    let n_steps = (cfg.t_end / cfg.k).ceil() as usize;
    let cadence = cfg.monitor_every.max(1);
    for step in 1..=n_steps {
        problem.rk4_step(&mut psi, cfg.k, &mut scratch);
        record.steps = step;
        let (max_sq, mass, finite) = monitor(&psi);
        let t = step as f64 * cfg.k;
        let blown = !finite
            || (max0 > 0.0 && max_sq > cutoff)
            || (mass0 > 0.0 && mass > mass_cutoff);
        if step % cadence == 0 || blown || step == n_steps {
            record.times.push(t);
            record.max_sq.push(max_sq);
            record.l2_mass.push(mass);
        }
        if blown {
            record.diverged = true;
            break;
        }
    }

    let mut field = ComplexField::from_values(psi0.grid.clone(), psi).expect("same grid");
    field.diverged = record.diverged;
    (record, field)
}

#[derive(Debug, Clone)]
pub struct ThresholdResult {
    /// Largest time-step that stayed stable to `t_end`.
    pub k_num: f64,
    /// Smallest time-step observed to diverge.
    pub k_unstable: f64,
    pub probes: usize,
}

/// Bisect for the empirical stability threshold between a stable `k_lo`
/// and an unstable `k_hi`, widening the bracket first if the endpoints do
/// not classify as expected. `digits` is the number of significant figures
/// to resolve.
#[allow(clippy::too_many_arguments)]
pub fn find_threshold(
    psi0: &ComplexField,
    params: &PhysParams,
    scheme: SchemeOrder,
    boundary: BoundaryKind,
    k_lo: f64,
    k_hi: f64,
    t_end: f64,
    digits: u32,
) -> Result<ThresholdResult> {
    if !(k_lo > 0.0 && k_hi > k_lo) {
        return Err(Error::SearchFailure(format!(
            "need 0 < k_lo < k_hi, got [{k_lo}, {k_hi}]"
        )));
    }
    if t_end.is_nan() || t_end <= 0.0 {
        return Err(Error::SearchFailure("t_end must be positive".into()));
    }
    let mut probes = 0usize;
    let mut stable = |k: f64| -> bool {
        probes += 1;
        let cfg = StepConfig {
            k,
            t_end,
            scheme,
            boundary,
            monitor_every: usize::MAX,
        };
        let (record, _) = integrate(psi0, &cfg, params);
        !record.diverged
    };

    let mut lo = k_lo;
    let mut hi = k_hi;
    const WIDEN_LIMIT: usize = 60;
    let mut tries = 0;
    while !stable(lo) {
        hi = lo;
        lo *= 0.7;
        tries += 1;
        if tries > WIDEN_LIMIT {
            return Err(Error::SearchFailure(
                "no stable lower endpoint found after widening".into(),
            ));
        }
    }
    tries = 0;
    while stable(hi) {
        lo = hi;
        hi *= 1.4;
        tries += 1;
        if tries > WIDEN_LIMIT {
            return Err(Error::SearchFailure(
                "no unstable upper endpoint found after widening".into(),
            ));
        }
    }

    let rel_tol = 10f64.powi(-(digits as i32));
    while hi - lo > rel_tol * lo {
        let mid = 0.5 * (lo + hi);
        if stable(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    Ok(ThresholdResult {
        k_num: lo,
        k_unstable: hi,
        probes,
    })
}
