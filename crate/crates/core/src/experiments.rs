//! Initial-condition families and named parameter presets: the 1D bright
//! soliton, the 2D co-winding vortex pair (radial profile solved by Newton
//! relaxation), and the 3D kicked Gaussian in a harmonic trap.

use num_complex::Complex64;

use crate::boundary::BoundaryKind;
use crate::error::{Error, Result};
use crate::grid::{ComplexField, GridSpec, PhysParams};

/// Bright soliton `Psi(x, 0) = sqrt(2 Omega / s) sech(sqrt(Omega / a) x)`.
///
/// A standing solution of the focusing 1D equation; requires `Omega/s > 0`
/// and `Omega/a > 0` for a real amplitude and width.
pub fn bright_soliton(grid: &GridSpec, omega: f64, s: f64, a: f64) -> Result<ComplexField> {
    if grid.dim() != 1 {
        return Err(Error::InvalidParams("bright soliton is one-dimensional".into()));
    }
    if omega / s <= 0.0 || omega / a <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "soliton requires Omega/s > 0 and Omega/a > 0 (got Omega={omega}, s={s}, a={a})"
        )));
    }
    let amp = (2.0 * omega / s).sqrt();
    let width = (omega / a).sqrt();
    Ok(ComplexField::sample(grid.clone(), |x| {
        Complex64::new(amp / (width * x[0]).cosh(), 0.0)
    }))
}

/// Tabulated radial vortex profile f(r) on a uniform mesh `r = i * dr`.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub dr: f64,
    pub values: Vec<f64>,
    pub f_inf: f64,
    pub m: u32,
}

impl RadialProfile {
    pub fn r_max(&self) -> f64 {
        self.dr * (self.values.len() - 1) as f64
    }

    /// Cubic (4-point Lagrange) interpolation; beyond the table the profile
    /// has saturated to the background value.
    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= self.r_max() {
            return self.f_inf;
        }
        let t = r / self.dr;
        let i = (t.floor() as usize).clamp(1, self.values.len() - 3);
        let u = t - i as f64;
        let (fm, f0, f1, f2) = (
            self.values[i - 1],
            self.values[i],
            self.values[i + 1],
            self.values[i + 2],
        );
        // Lagrange basis on nodes -1, 0, 1, 2
        fm * (-u * (u - 1.0) * (u - 2.0) / 6.0)
            + f0 * ((u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0)
            + f1 * (-(u + 1.0) * u * (u - 2.0) / 2.0)
            + f2 * ((u + 1.0) * u * (u - 1.0) / 6.0)
    }
}

pub const PROFILE_R_MAX: f64 = 20.0;
pub const PROFILE_MESH: f64 = 1e-3;
const PROFILE_RESIDUAL_TOL: f64 = 1e-8;
const PROFILE_MAX_NEWTON: usize = 60;

/// Solve `a (f'' + f'/r - m^2 f / r^2) - Omega f + s f^3 = 0` with
/// `f(0) = 0` and `f(R_max) = f_inf = sqrt(Omega/s)` by Newton relaxation
/// on a second-order discretization (tridiagonal Jacobian, Thomas solve).
pub fn vortex_profile(
    m: u32,
    omega: f64,
    s: f64,
    a: f64,
    r_max: f64,
    dr: f64,
) -> Result<RadialProfile> {
    if omega / s <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "vortex background requires Omega/s > 0 (got Omega={omega}, s={s})"
        )));
    }
    if a <= 0.0 || r_max <= 0.0 || dr <= 0.0 || r_max / dr < 10.0 {
        return Err(Error::InvalidParams("degenerate radial mesh".into()));
    }
    let f_inf = (omega / s).sqrt();
    let n = (r_max / dr).round() as usize;
    let mut f = vec![0.0f64; n + 1];
    for (i, fi) in f.iter_mut().enumerate() {
        let r = i as f64 * dr;
        // smooth seed with the correct r^m core behavior and background tail
        *fi = f_inf * (r / (r * r + m as f64 * m as f64).sqrt()).powi(m as i32);
    }
    f[n] = f_inf;

    let inner = n - 1;
    let mut res = vec![0.0f64; inner];
    let mut lower = vec![0.0f64; inner];
    let mut diag = vec![0.0f64; inner];
    let mut upper = vec![0.0f64; inner];
    let mut history = Vec::new();

    let residual = |f: &[f64], res: &mut [f64]| {
        for i in 1..n {
            let r = i as f64 * dr;
            let fpp = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (dr * dr);
            let fp = (f[i + 1] - f[i - 1]) / (2.0 * dr);
            res[i - 1] = a * (fpp + fp / r - (m as f64 * m as f64) * f[i] / (r * r))
                - omega * f[i]
                + s * f[i] * f[i] * f[i];
        }
    };

    for _ in 0..PROFILE_MAX_NEWTON {
        residual(&f, &mut res);
        let max_res = res.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        history.push(max_res);
        if max_res <= PROFILE_RESIDUAL_TOL {
            return Ok(RadialProfile {
                dr,
                values: f,
                f_inf,
                m,
            });
        }
        for i in 1..n {
            let r = i as f64 * dr;
            lower[i - 1] = a * (1.0 / (dr * dr) - 1.0 / (2.0 * dr * r));
            diag[i - 1] = a * (-2.0 / (dr * dr) - (m as f64 * m as f64) / (r * r)) - omega
                + 3.0 * s * f[i] * f[i];
            upper[i - 1] = a * (1.0 / (dr * dr) + 1.0 / (2.0 * dr * r));
        }
        // Thomas solve J delta = -res
        let mut cp = vec![0.0f64; inner];
        let mut dp = vec![0.0f64; inner];
        cp[0] = upper[0] / diag[0];
        dp[0] = -res[0] / diag[0];
        for i in 1..inner {
            let denom = diag[i] - lower[i] * cp[i - 1];
            cp[i] = upper[i] / denom;
            dp[i] = (-res[i] - lower[i] * dp[i - 1]) / denom;
        }
        let mut delta = dp;
        for i in (0..inner - 1).rev() {
            delta[i] -= cp[i] * delta[i + 1];
        }
        for i in 1..n {
            f[i] += delta[i - 1];
        }
    }
    Err(Error::ProfileConvergence { history })
}

/// Profile with the default mesh (`R_max = 20`, `dr = 1e-3`).
pub fn default_vortex_profile(m: u32, omega: f64, s: f64, a: f64) -> Result<RadialProfile> {
    vortex_profile(m, omega, s, a, PROFILE_R_MAX, PROFILE_MESH)
}

/// Co-winding vortex pair at `(+-x0, 0)`:
/// `Psi = f(r1) f(r2) exp[i m (theta1 + theta2)]`.
pub fn vortex_pair(
    grid: &GridSpec,
    profile: &RadialProfile,
    m: u32,
    x0: f64,
) -> Result<ComplexField> {
    if grid.dim() != 2 {
        return Err(Error::InvalidParams("vortex pair is two-dimensional".into()));
    }
    let h = grid.h();
    for center in [x0, -x0] {
        if center < grid.xmin()[0] + h || center > grid.xmax(0) - h {
            return Err(Error::InvalidParams(format!(
                "vortex center ({center}, 0) not in the grid interior"
            )));
        }
        if grid.xmin()[1] + h > 0.0 || grid.xmax(1) - h < 0.0 {
            return Err(Error::InvalidParams(
                "vortex center (x0, 0) not in the grid interior".into(),
            ));
        }
    }
    let mf = m as f64;
    Ok(ComplexField::sample(grid.clone(), |x| {
        let (dx1, dx2, y) = (x[0] - x0, x[0] + x0, x[1]);
        let r1 = dx1.hypot(y);
        let r2 = dx2.hypot(y);
        let theta = y.atan2(dx1) + y.atan2(dx2);
        Complex64::from_polar(profile.eval(r1) * profile.eval(r2), mf * theta)
    }))
}

/// Kicked Gaussian `Psi = exp(-r^2/(2a)) exp(-i x / 2)` with its harmonic
/// trap potential `V = r^2 / a`.
pub fn kicked_gaussian(grid: &GridSpec, a: f64) -> Result<(ComplexField, Vec<f64>)> {
    if a <= 0.0 {
        return Err(Error::InvalidParams("kicked Gaussian requires a > 0".into()));
    }
    let field = ComplexField::sample(grid.clone(), |x| {
        let r2: f64 = x.iter().map(|c| c * c).sum();
        Complex64::from_polar((-r2 / (2.0 * a)).exp(), -x[0] / 2.0)
    });
    let v = (0..grid.len())
        .map(|i| grid.coord_flat(i).iter().map(|c| c * c).sum::<f64>() / a)
        .collect();
    Ok((field, v))
}

/// A fully specified named experiment: grid, physics, initial field, and
/// the boundary condition used for it.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub grid: GridSpec,
    pub params: PhysParams,
    pub field: ComplexField,
    pub boundary: BoundaryKind,
}

pub const PRESET_NAMES: &[&str] = &["soliton1d", "vortexpair2d", "gaussian3d"];

/// Build a preset by name. All presets use h = 1/5 and a = 1.
pub fn preset(name: &str) -> Result<Preset> {
    let h = 0.2;
    match name {
        "soliton1d" => {
            let grid = GridSpec::from_extent(&[-10.0], &[10.0], h)?;
            let params = PhysParams::uniform(1.0, 1.0, &grid)?;
            let field = bright_soliton(&grid, 1.0, params.s, params.a)?;
            Ok(Preset {
                name: "soliton1d",
                grid,
                params,
                field,
                boundary: BoundaryKind::Dirichlet,
            })
        }
        "vortexpair2d" => {
            let grid = GridSpec::from_extent(&[-12.0, -12.0], &[12.0, 12.0], h)?;
            let params = PhysParams::uniform(1.0, -1.0, &grid)?;
            let profile = default_vortex_profile(1, -1.0, -1.0, 1.0)?;
            let field = vortex_pair(&grid, &profile, 1, 4.0)?;
            Ok(Preset {
                name: "vortexpair2d",
                grid,
                params,
                field,
                boundary: BoundaryKind::Msd,
            })
        }
        "gaussian3d" => {
            let grid = GridSpec::from_extent(&[-3.0; 3], &[3.0; 3], h)?;
            let (field, v) = kicked_gaussian(&grid, 1.0)?;
            let params = PhysParams::new(1.0, 0.0, v, &grid)?;
            Ok(Preset {
                name: "gaussian3d",
                grid,
                params,
                field,
                boundary: BoundaryKind::Dirichlet,
            })
        }
        other => Err(Error::Config(format!(
            "unknown preset {other:?} (expected one of {PRESET_NAMES:?})"
        ))),
    }
}
