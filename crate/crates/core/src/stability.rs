//! Closed-form stability machinery: Runge-Kutta amplification polynomials,
//! the imaginary-axis bound sqrt(8), linear bounds per scheme/dimension,
//! the frozen-coefficient L vector, the G offset tables, and the full
//! linearized time-step bound with its binding term.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::PhysParams;
use crate::laplacian::SchemeOrder;

/// Truncated exponential series through `p^order / order!`; the RK
/// amplification polynomial for orders 1..=4.
pub fn amplification(p: Complex64, order: u8) -> Complex64 {
    assert!((1..=4).contains(&order), "order must be in 1..=4");
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..=order as i32 {
        term *= p / k as f64;
        sum += term;
    }
    sum
}

/// |R(k lambda)|^2 for RK4 evaluated from the closed-form expansion in
/// |lambda| and Re(lambda). For purely imaginary lambda this reduces to
/// `1 + k^8 |l|^8 / 576 - k^6 |l|^6 / 72`.
pub fn amplification_mod_sq(lambda: Complex64, k: f64) -> f64 {
    let m2 = lambda.norm_sqr();
    let re = lambda.re;
    let k2 = k * k;
    let k3 = k2 * k;
    let k4 = k2 * k2;
    let k6 = k4 * k2;
    let k8 = k4 * k4;
    let m4 = m2 * m2;
    let m6 = m4 * m2;
    let m8 = m4 * m4;
    1.0 + k8 * m8 / 576.0 - k6 * m6 / 72.0
        + (k6 * m6 / 6.0 - k4 * m4 + 24.0) * (k / 12.0) * re
        + (k4 * m4 + 24.0) * (k2 / 12.0) * re * re
        + (k2 * m2 + 4.0) * (k3 / 3.0) * re * re * re
        + (2.0 * k4 / 3.0) * re * re * re * re
}

/// Linear (L = 0, B = 0) bound: `h^2 / (d sqrt(2) a)` for CD2 and 3/4 of
/// that for 2SHOC.
pub fn linear_bound(scheme: SchemeOrder, d: usize, h: f64, a: f64) -> f64 {
    assert!((1..=3).contains(&d), "dimension must be 1, 2, or 3");
    let base = h * h / (d as f64 * 2.0f64.sqrt() * a);
    match scheme {
        SchemeOrder::Cd2 => base,
        SchemeOrder::Shoc4 => 0.75 * base,
    }
}

/// G offsets in exact twelfths, per dimension and scheme. The bound
/// denominator pairs every `L_i` against every entry.
pub fn g_table_twelfths(d: usize, scheme: SchemeOrder) -> &'static [i64] {
    match (d, scheme) {
        (1, SchemeOrder::Cd2) => &[48, 36, 12, 0],
        (1, SchemeOrder::Shoc4) => &[64, 63, 46, 12, -3, -4],
        (2, SchemeOrder::Cd2) => &[96, 84, 72, 24, 12, 0],
        (2, SchemeOrder::Shoc4) => &[128, 127, 126, 110, 109, 92, 24, 9, 8, -6, -7, -8],
        (3, SchemeOrder::Cd2) => &[144, 132, 120, 108, 36, 24, 12, 0],
        (3, SchemeOrder::Shoc4) => &[
            192, 191, 190, 189, 174, 173, 172, 156, 155, 138, 36, 21, 20, 6, 5, 4, -9, -10,
            -11, -12,
        ],
        _ => panic!("dimension must be 1, 2, or 3"),
    }
}

/// Gershgorin disk forms of the interior scheme matrix as exact twelfths:
/// (diagonal offset below `L_i`, radius). The G table is the set of
/// `-offset +- radius` over these forms.
pub fn disk_forms_twelfths(d: usize, scheme: SchemeOrder) -> &'static [(i64, i64)] {
    match (d, scheme) {
        (1, SchemeOrder::Cd2) => &[(-24, 12), (-24, 24)],
        (1, SchemeOrder::Shoc4) => &[(-30, 33), (-30, 34), (-29, 17)],
        (2, SchemeOrder::Cd2) => &[(-48, 24), (-48, 36), (-48, 48)],
        (2, SchemeOrder::Shoc4) => &[
            (-60, 66),
            (-60, 67),
            (-60, 68),
            (-58, 34),
            (-59, 50),
            (-59, 51),
        ],
        (3, SchemeOrder::Cd2) => &[(-72, 36), (-72, 48), (-72, 60), (-72, 72)],
        (3, SchemeOrder::Shoc4) => &[
            (-90, 99),
            (-90, 100),
            (-90, 101),
            (-90, 102),
            (-88, 67),
            (-88, 68),
            (-87, 51),
            (-89, 83),
            (-89, 84),
            (-89, 85),
        ],
        _ => panic!("dimension must be 1, 2, or 3"),
    }
}

/// Frozen-coefficient interior terms `L_i = (h^2 / a)(s |psi_i|^2 - V_i)`
/// over the entire grid.
pub fn compute_l(psi: &[Complex64], params: &PhysParams, h: f64) -> Vec<f64> {
    let h2a = h * h / params.a;
    psi.iter()
        .zip(&params.v)
        .map(|(p, &v)| h2a * (params.s * p.norm_sqr() - v))
        .collect()
}

/// Which term of the bound denominator attained the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BindingTerm {
    /// A boundary value |B_b| dominated.
    Boundary { index: usize, value: f64 },
    /// A pair |L_i - G_j| dominated; `g_twelfths` identifies the G entry.
    Interior {
        l_index: usize,
        g_twelfths: i64,
        value: f64,
    },
}

impl BindingTerm {
    pub fn value(&self) -> f64 {
        match *self {
            BindingTerm::Boundary { value, .. } => value,
            BindingTerm::Interior { value, .. } => value,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub k_lin: f64,
    pub k_linz: f64,
    pub binding: BindingTerm,
    pub scheme: SchemeOrder,
    pub d: usize,
    pub h: f64,
    pub a: f64,
}

/// Full linearized bound `k < sqrt(8) h^2 / (a M)` with
/// `M = max{ max |B_b|, max over all (i, j) |L_i - G_j| }`.
pub fn linearized_bound(
    l: &[f64],
    b_values: &[f64],
    d: usize,
    scheme: SchemeOrder,
    h: f64,
    a: f64,
) -> Result<StabilityReport> {
    let g = g_table_twelfths(d, scheme);
    let mut binding: Option<BindingTerm> = None;

    for (i, &b) in b_values.iter().enumerate() {
        let v = b.abs();
        if binding.is_none_or(|t| v > t.value()) {
            binding = Some(BindingTerm::Boundary { index: i, value: v });
        }
    }
    // Only the extreme L values can attain the max against any fixed G.
    let candidates = l
        .iter()
        .enumerate()
        .fold(None::<((usize, f64), (usize, f64))>, |acc, (i, &li)| {
            Some(match acc {
                None => ((i, li), (i, li)),
                Some((lo, hi)) => (
                    if li < lo.1 { (i, li) } else { lo },
                    if li > hi.1 { (i, li) } else { hi },
                ),
            })
        });
    if let Some((lo, hi)) = candidates {
        for &(idx, li) in &[lo, hi] {
            for &gj in g {
                let v = (li - gj as f64 / 12.0).abs();
                if binding.is_none_or(|t| v > t.value()) {
                    binding = Some(BindingTerm::Interior {
                        l_index: idx,
                        g_twelfths: gj,
                        value: v,
                    });
                }
            }
        }
    }

    let binding = binding.ok_or(Error::EmptyBound)?;
    let m = binding.value();
    if m == 0.0 {
        return Err(Error::EmptyBound);
    }
    Ok(StabilityReport {
        k_lin: linear_bound(scheme, d, h, a),
        k_linz: 8.0f64.sqrt() * h * h / (a * m),
        binding,
        scheme,
        d,
        h,
        a,
    })
}

/// Exhaustive evaluation of every (L_i, G_j) pair; reference path for the
/// extreme-value shortcut used by [`linearized_bound`].
pub fn linearized_bound_exhaustive(
    l: &[f64],
    b_values: &[f64],
    d: usize,
    scheme: SchemeOrder,
    h: f64,
    a: f64,
) -> Result<StabilityReport> {
    let g = g_table_twelfths(d, scheme);
    let mut binding: Option<BindingTerm> = None;
    for (i, &b) in b_values.iter().enumerate() {
        let v = b.abs();
        if binding.is_none_or(|t| v > t.value()) {
            binding = Some(BindingTerm::Boundary { index: i, value: v });
        }
    }
    for (i, &li) in l.iter().enumerate() {
        for &gj in g {
            let v = (li - gj as f64 / 12.0).abs();
            if binding.is_none_or(|t| v > t.value()) {
                binding = Some(BindingTerm::Interior {
                    l_index: i,
                    g_twelfths: gj,
                    value: v,
                });
            }
        }
    }
    let binding = binding.ok_or(Error::EmptyBound)?;
    let m = binding.value();
    if m == 0.0 {
        return Err(Error::EmptyBound);
    }
    Ok(StabilityReport {
        k_lin: linear_bound(scheme, d, h, a),
        k_linz: 8.0f64.sqrt() * h * h / (a * m),
        binding,
        scheme,
        d,
        h,
        a,
    })
}
