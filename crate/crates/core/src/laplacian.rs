//! Discrete Laplacians: second-order central difference (CD2) and the
//! two-step fourth-order high-order compact scheme (2SHOC) in 1/2/3
//! dimensions.
//!
//! 2SHOC is kept as the literal two-step composition: step 1 is the CD2
//! Laplacian (with the boundary's `D_b` form applied at boundary points),
//! step 2 combines the step-1 field with the wavefunction. On interior
//! points the composition is equivalent to the standard wide fourth-order
//! stencil; that equivalence is tested, not assumed.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryCoeffs;
use crate::error::{Error, Result};
use crate::grid::{BoundaryClassification, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeOrder {
    Cd2,
    Shoc4,
}

impl FromStr for SchemeOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cd2" => Ok(SchemeOrder::Cd2),
            "shoc4" => Ok(SchemeOrder::Shoc4),
            other => Err(Error::Config(format!(
                "unknown scheme {other:?} (expected cd2|shoc4)"
            ))),
        }
    }
}

impl fmt::Display for SchemeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeOrder::Cd2 => "cd2",
            SchemeOrder::Shoc4 => "shoc4",
        })
    }
}

/// CD2 Laplacian at all non-boundary points; boundary entries of `out` are
/// left untouched. Non-boundary points have all axis neighbors in bounds.
pub(crate) fn cd_nonboundary(
    psi: &[Complex64],
    grid: &GridSpec,
    class: &BoundaryClassification,
    out: &mut [Complex64],
) {
    let strides = grid.strides();
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let two_d = 2.0 * grid.dim() as f64;
    match strides.len() {
        1 => {
            for &f in &class.non_boundary {
                out[f] = (psi[f - 1] + psi[f + 1] - two_d * psi[f]) * inv_h2;
            }
        }
        2 => {
            let (s0, s1) = (strides[0], strides[1]);
            for &f in &class.non_boundary {
                out[f] = (psi[f - s0] + psi[f + s0] + psi[f - s1] + psi[f + s1]
                    - two_d * psi[f])
                    * inv_h2;
            }
        }
        _ => {
            let (s0, s1, s2) = (strides[0], strides[1], strides[2]);
            for &f in &class.non_boundary {
                out[f] = (psi[f - s0]
                    + psi[f + s0]
                    + psi[f - s1]
                    + psi[f + s1]
                    + psi[f - s2]
                    + psi[f + s2]
                    - two_d * psi[f])
                    * inv_h2;
            }
        }
    }
}

/// Wrapped flat neighbor one step along `axis` (`dir` is +1 or -1).
#[inline]
fn wrap_step(idx: &[usize], flat: usize, axis: usize, dir: isize, n: &[usize], s: &[usize]) -> usize {
    let ni = n[axis];
    if dir > 0 {
        if idx[axis] + 1 == ni {
            flat - (ni - 1) * s[axis]
        } else {
            flat + s[axis]
        }
    } else if idx[axis] == 0 {
        flat + (ni - 1) * s[axis]
    } else {
        flat - s[axis]
    }
}

/// CD2 Laplacian with periodic wraparound at every point.
pub(crate) fn cd_periodic(psi: &[Complex64], grid: &GridSpec, out: &mut [Complex64]) {
    let strides = grid.strides();
    let n = grid.shape();
    let d = grid.dim();
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let two_d = 2.0 * d as f64;
    let mut idx = vec![0usize; d];
    for flat in 0..psi.len() {
        let mut acc = -two_d * psi[flat];
        for ax in 0..d {
            acc += psi[wrap_step(&idx, flat, ax, 1, n, &strides)];
            acc += psi[wrap_step(&idx, flat, ax, -1, n, &strides)];
        }
        out[flat] = acc * inv_h2;
        for ax in (0..d).rev() {
            idx[ax] += 1;
            if idx[ax] < n[ax] {
                break;
            }
            idx[ax] = 0;
        }
    }
}

/// Write the boundary `D_b` form into the Laplacian field:
/// `out[b] = D_b psi_b / h^2`.
pub(crate) fn fill_boundary_from_db(
    psi: &[Complex64],
    d_coeffs: &[f64],
    class: &BoundaryClassification,
    h: f64,
    out: &mut [Complex64],
) {
    let inv_h2 = 1.0 / (h * h);
    for (&b, &db) in class.boundary.iter().zip(d_coeffs) {
        out[b] = psi[b] * (db * inv_h2);
    }
}

/// 2SHOC step 2 at all non-boundary points. `dfield` is the step-1 result
/// with boundary entries already carrying the `D_b` form.
pub(crate) fn shoc_step2_nonboundary(
    dfield: &[Complex64],
    psi: &[Complex64],
    grid: &GridSpec,
    class: &BoundaryClassification,
    out: &mut [Complex64],
) {
    let strides = grid.strides();
    let c6h2 = 1.0 / (6.0 * grid.h() * grid.h());
    match strides.len() {
        1 => {
            for &f in &class.non_boundary {
                out[f] = dfield[f] * (7.0 / 6.0)
                    - (dfield[f - 1] + dfield[f + 1]) * (1.0 / 12.0);
            }
        }
        2 => {
            let (s0, s1) = (strides[0], strides[1]);
            for &f in &class.non_boundary {
                let dsum = dfield[f - s0] + dfield[f + s0] + dfield[f - s1] + dfield[f + s1];
                let corners = psi[f - s0 - s1]
                    + psi[f - s0 + s1]
                    + psi[f + s0 - s1]
                    + psi[f + s0 + s1];
                out[f] =
                    dfield[f] - dsum * (1.0 / 12.0) + (corners - 4.0 * psi[f]) * c6h2;
            }
        }
        _ => {
            let (s0, s1, s2) = (strides[0], strides[1], strides[2]);
            for &f in &class.non_boundary {
                let dsum = dfield[f - s0]
                    + dfield[f + s0]
                    + dfield[f - s1]
                    + dfield[f + s1]
                    + dfield[f - s2]
                    + dfield[f + s2];
                let edges = psi[f - s0 - s1]
                    + psi[f - s0 + s1]
                    + psi[f + s0 - s1]
                    + psi[f + s0 + s1]
                    + psi[f - s0 - s2]
                    + psi[f - s0 + s2]
                    + psi[f + s0 - s2]
                    + psi[f + s0 + s2]
                    + psi[f - s1 - s2]
                    + psi[f - s1 + s2]
                    + psi[f + s1 - s2]
                    + psi[f + s1 + s2];
                out[f] = dfield[f] * (10.0 / 12.0) - dsum * (1.0 / 12.0)
                    + (edges - 12.0 * psi[f]) * c6h2;
            }
        }
    }
}

/// 2SHOC step 2 with periodic wraparound at every point.
pub(crate) fn shoc_step2_periodic(
    dfield: &[Complex64],
    psi: &[Complex64],
    grid: &GridSpec,
    out: &mut [Complex64],
) {
    let strides = grid.strides();
    let n = grid.shape();
    let d = grid.dim();
    let c6h2 = 1.0 / (6.0 * grid.h() * grid.h());
    let mut idx = vec![0usize; d];
    for flat in 0..psi.len() {
        let mut dsum = Complex64::new(0.0, 0.0);
        for ax in 0..d {
            dsum += dfield[wrap_step(&idx, flat, ax, 1, n, &strides)];
            dsum += dfield[wrap_step(&idx, flat, ax, -1, n, &strides)];
        }
        let value = match d {
            1 => dfield[flat] * (7.0 / 6.0) - dsum * (1.0 / 12.0),
            _ => {
                let mut cross = Complex64::new(0.0, 0.0);
                let mut pairs = 0.0;
                for a in 0..d {
                    for b in (a + 1)..d {
                        for (da, db) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                            let via = wrap_step(&idx, flat, a, da, n, &strides);
                            // decode of the intermediate index is only needed on axis b
                            let mut idx2 = idx.clone();
                            idx2[a] = (idx[a] as isize + da).rem_euclid(n[a] as isize) as usize;
                            cross += psi[wrap_step(&idx2, via, b, db, n, &strides)];
                        }
                        pairs += 1.0;
                    }
                }
                let center_d = if d == 2 { 1.0 } else { 10.0 / 12.0 };
                dfield[flat] * center_d - dsum * (1.0 / 12.0)
                    + (cross - 4.0 * pairs * psi[flat]) * c6h2
            }
        };
        out[flat] = value;
        for ax in (0..d).rev() {
            idx[ax] += 1;
            if idx[ax] < n[ax] {
                break;
            }
            idx[ax] = 0;
        }
    }
}

/// Second-order Laplacian field. For non-periodic boundaries the boundary
/// entries carry the `D_b` form `D_b psi_b / h^2` taken from `coeffs`.
pub fn cd_laplacian(
    psi: &[Complex64],
    grid: &GridSpec,
    class: &BoundaryClassification,
    periodic: bool,
    coeffs: Option<&BoundaryCoeffs>,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    if periodic {
        cd_periodic(psi, grid, &mut out);
    } else {
        cd_nonboundary(psi, grid, class, &mut out);
        if let Some(c) = coeffs {
            fill_boundary_from_db(psi, &c.d, class, grid.h(), &mut out);
        }
    }
    out
}

/// Fourth-order 2SHOC Laplacian field. Boundary entries of the output carry
/// the same `D_b` form as step 1.
pub fn shoc_laplacian(
    psi: &[Complex64],
    grid: &GridSpec,
    class: &BoundaryClassification,
    periodic: bool,
    coeffs: Option<&BoundaryCoeffs>,
) -> Vec<Complex64> {
    let dfield = cd_laplacian(psi, grid, class, periodic, coeffs);
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    if periodic {
        shoc_step2_periodic(&dfield, psi, grid, &mut out);
    } else {
        shoc_step2_nonboundary(&dfield, psi, grid, class, &mut out);
        for &b in &class.boundary {
            out[b] = dfield[b];
        }
    }
    out
}

/// Dimensionless 1D 2SHOC row weights at a point adjacent to the boundary,
/// given the boundary's `D_b`: weights on `(psi_b, psi_i, psi_{i+1},
/// psi_{i+2})` of the combined scheme scaled by `h^2`.
pub fn near_boundary_row_coeffs(d_b: f64) -> [f64; 4] {
    [(14.0 - d_b) / 12.0, -29.0 / 12.0, 4.0 / 3.0, -1.0 / 12.0]
}

/// Dimensionless interior 1D 2SHOC row, the standard wide stencil.
pub fn interior_row_coeffs() -> [f64; 5] {
    [-1.0 / 12.0, 4.0 / 3.0, -30.0 / 12.0, 4.0 / 3.0, -1.0 / 12.0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{classify_points, ComplexField, PhysParams};

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn constant_field_periodic_gives_zero() {
        for shape in [vec![8], vec![6, 7], vec![5, 5, 5]] {
            let g = GridSpec::new(&shape, &vec![0.0; shape.len()], 0.1).unwrap();
            let c = classify_points(&g);
            let psi = vec![re(2.5); g.len()];
            let cd = cd_laplacian(&psi, &g, &c, true, None);
            let sh = shoc_laplacian(&psi, &g, &c, true, None);
            for v in cd.iter().chain(&sh) {
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cd_exact_on_quadratic() {
        let g = GridSpec::from_extent(&[-1.0], &[1.0], 0.1).unwrap();
        let c = classify_points(&g);
        let f = ComplexField::sample(g.clone(), |x| re(x[0] * x[0]));
        let lap = cd_laplacian(&f.values, &g, &c, false, None);
        for &i in &c.non_boundary {
            assert!((lap[i].re - 2.0).abs() < 1e-11);
        }
    }

    #[test]
    fn cd_on_quartic_has_known_error() {
        // psi = x^4: CD gives 12 x^2 + 2 h^2 exactly.
        let h = 0.1;
        let g = GridSpec::from_extent(&[-1.0], &[1.0], h).unwrap();
        let c = classify_points(&g);
        let f = ComplexField::sample(g.clone(), |x| re(x[0].powi(4)));
        let lap = cd_laplacian(&f.values, &g, &c, false, None);
        for &i in &c.non_boundary {
            let x = g.coord_flat(i)[0];
            let expect = 12.0 * x * x + 2.0 * h * h;
            assert!((lap[i].re - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn shoc_exact_on_quartic_interior() {
        // Fourth-order scheme has zero truncation error when the sixth
        // derivative vanishes; x^4 interior values must be 12 x^2.
        let g = GridSpec::from_extent(&[-1.0], &[1.0], 0.1).unwrap();
        let c = classify_points(&g);
        let f = ComplexField::sample(g.clone(), |x| re(x[0].powi(4)));
        let d = crate::boundary::BoundaryCoeffs {
            b: vec![0.0; 2],
            d: vec![0.0; 2],
            msd_fallbacks: 0,
        };
        let lap = shoc_laplacian(&f.values, &g, &c, false, Some(&d));
        use crate::grid::PointClass;
        for (i, &cls) in c.class.iter().enumerate() {
            if cls == PointClass::Interior {
                let x = g.coord_flat(i)[0];
                assert!(
                    (lap[i].re - 12.0 * x * x).abs() < 1e-9,
                    "x={x} got {} want {}",
                    lap[i].re,
                    12.0 * x * x
                );
            }
        }
    }

    /// Wide-stencil fourth-order Laplacian with periodic wrap; independent
    /// oracle for the two-step composition.
    fn wide_stencil_periodic(psi: &[Complex64], grid: &GridSpec) -> Vec<Complex64> {
        let n = grid.shape();
        let d = grid.dim();
        let strides = grid.strides();
        let inv = 1.0 / (12.0 * grid.h() * grid.h());
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for flat in 0..psi.len() {
            let idx = grid.multi_index(flat);
            let mut acc = re(-30.0 * d as f64) * psi[flat];
            for ax in 0..d {
                let ni = n[ax] as isize;
                for (off, w) in [(-2isize, -1.0), (-1, 16.0), (1, 16.0), (2, -1.0)] {
                    let j = ((idx[ax] as isize + off).rem_euclid(ni)) as usize;
                    let nb = flat as isize + (j as isize - idx[ax] as isize) * strides[ax] as isize;
                    acc += psi[nb as usize] * w;
                }
            }
            out[flat] = acc * inv;
        }
        out
    }

    #[test]
    fn shoc_equals_wide_stencil_on_periodic_grids() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for shape in [vec![12], vec![7, 9], vec![5, 6, 7]] {
            let g = GridSpec::new(&shape, &vec![0.0; shape.len()], 0.2).unwrap();
            let c = classify_points(&g);
            let psi: Vec<Complex64> = (0..g.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let sh = shoc_laplacian(&psi, &g, &c, true, None);
            let wide = wide_stencil_periodic(&psi, &g);
            let scale = wide.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for (a, b) in sh.iter().zip(&wide) {
                assert!((a - b).norm() <= 1e-12 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn linearity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let g = GridSpec::new(&[6, 7], &[0.0, 0.0], 0.25).unwrap();
        let c = classify_points(&g);
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Complex64> {
            (0..g.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        };
        let p1 = mk(&mut rng);
        let p2 = mk(&mut rng);
        let (alpha, beta) = (0.7, -1.3);
        let combo: Vec<Complex64> = p1
            .iter()
            .zip(&p2)
            .map(|(&a, &b)| a * alpha + b * beta)
            .collect();
        // fixed coefficients: l0-style zero D on the boundary
        let d = crate::boundary::BoundaryCoeffs {
            b: vec![0.0; c.boundary.len()],
            d: vec![0.0; c.boundary.len()],
            msd_fallbacks: 0,
        };
        for scheme in [SchemeOrder::Cd2, SchemeOrder::Shoc4] {
            let apply = |v: &[Complex64]| match scheme {
                SchemeOrder::Cd2 => cd_laplacian(v, &g, &c, false, Some(&d)),
                SchemeOrder::Shoc4 => shoc_laplacian(v, &g, &c, false, Some(&d)),
            };
            let l1 = apply(&p1);
            let l2 = apply(&p2);
            let lc = apply(&combo);
            for i in 0..g.len() {
                let want = l1[i] * alpha + l2[i] * beta;
                assert!((lc[i] - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn convergence_orders_on_sin_products() {
        // halving h reduces max interior error by ~4 (CD2) and ~16 (SHOC4)
        for (d, half) in [(1usize, 3.0f64), (2, 3.0)] {
            let errs: Vec<(f64, f64)> = [0.1f64, 0.05]
                .iter()
                .map(|&h| {
                    let g = GridSpec::centered(d, half, h).unwrap();
                    let c = classify_points(&g);
                    let f = ComplexField::sample(g.clone(), |x| {
                        re(x.iter().map(|&xi| xi.sin()).product())
                    });
                    let exact: Vec<f64> = (0..g.len())
                        .map(|i| {
                            let x = g.coord_flat(i);
                            -(d as f64) * x.iter().map(|&xi| xi.sin()).product::<f64>()
                        })
                        .collect();
                    let zero = crate::boundary::BoundaryCoeffs {
                        b: vec![0.0; c.boundary.len()],
                        d: vec![0.0; c.boundary.len()],
                        msd_fallbacks: 0,
                    };
                    let cd = cd_laplacian(&f.values, &g, &c, false, Some(&zero));
                    let sh = shoc_laplacian(&f.values, &g, &c, false, Some(&zero));
                    use crate::grid::PointClass;
                    let mut e_cd = 0.0f64;
                    let mut e_sh = 0.0f64;
                    for (i, &cls) in c.class.iter().enumerate() {
                        if cls == PointClass::Interior {
                            e_cd = e_cd.max((cd[i].re - exact[i]).abs());
                            e_sh = e_sh.max((sh[i].re - exact[i]).abs());
                        }
                    }
                    (e_cd, e_sh)
                })
                .collect();
            let cd_factor = errs[0].0 / errs[1].0;
            let sh_factor = errs[0].1 / errs[1].1;
            assert!(
                (cd_factor - 4.0).abs() < 0.2,
                "cd factor {cd_factor} in {d}D"
            );
            assert!(
                (sh_factor - 16.0).abs() < 1.6,
                "shoc factor {sh_factor} in {d}D"
            );
        }
    }

    #[test]
    fn near_boundary_rows_match_combined_matrix() {
        let d0 = 0.37;
        let row = near_boundary_row_coeffs(d0);
        assert!((row[0] - (14.0 - d0) / 12.0).abs() < 1e-15);
        assert!((row[1] + 29.0 / 12.0).abs() < 1e-15);
        assert!((row[2] - 4.0 / 3.0).abs() < 1e-15);
        assert!((row[3] + 1.0 / 12.0).abs() < 1e-15);
        // L0 boundary: D_0 = 0 -> weight on psi_0 is 14/12
        assert!((near_boundary_row_coeffs(0.0)[0] - 14.0 / 12.0).abs() < 1e-15);
        let int = interior_row_coeffs();
        assert_eq!(int[2], -2.5);
    }

    #[test]
    fn dirichlet_boundary_entries_carry_db_form() {
        let g = GridSpec::new(&[9], &[0.0], 0.2).unwrap();
        let c = classify_points(&g);
        let f = ComplexField::sample(g.clone(), |x| re(1.0 + x[0]));
        let p = PhysParams::new(1.0, 0.5, vec![1.5; 9], &g).unwrap();
        let d = crate::boundary::compute_db(
            crate::boundary::BoundaryKind::Dirichlet,
            &f.values,
            &f.values,
            &p,
            &g,
            &c,
        )
        .unwrap();
        let coeffs = crate::boundary::BoundaryCoeffs {
            b: vec![0.0; 2],
            d,
            msd_fallbacks: 0,
        };
        let lap = cd_laplacian(&f.values, &g, &c, false, Some(&coeffs));
        let inv_h2 = 1.0 / 0.04;
        for (k, &b) in c.boundary.iter().enumerate() {
            let want = f.values[b] * (coeffs.d[k] * inv_h2);
            assert!((lap[b] - want).norm() < 1e-13);
        }
    }
}
