//! Two-mode separability conditions. Mode 0 is `a`, mode 1 is `b`, and
//! partial transposition acts on `b`.

use std::fmt;

use num_complex::Complex64;

use super::report::{kv, pt_product_report, WitnessReport};
use crate::algebra::named::{h_x, h_y, j_x, j_y, k_x, k_y, k_z, l_x, l_y, l_z, n_mn, n_plus};
use crate::algebra::OperatorPoly;
use crate::error::{Error, Result};
use crate::fock::{variance_of, Moments};

/// Number of `r` values in `duan_epr_scan`.
pub const DUAN_SCAN_POINTS: usize = 41;

fn require_two_modes<M: Moments + ?Sized>(state: &M) -> Result<()> {
    if state.mode_count() == 2 {
        Ok(())
    } else {
        Err(Error::Dimension { expected: 2, found: state.mode_count() })
    }
}

fn require_orders(m: u32, n: u32) -> Result<()> {
    if m == 0 || n == 0 {
        Err(Error::InvalidParameter(format!("orders must be >= 1, got m={m}, n={n}")))
    } else {
        Ok(())
    }
}

/// `(a† + a)/√2` on `mode`.
fn position(mode: usize) -> OperatorPoly {
    OperatorPoly::creation(2, mode)
        .checked_add(&OperatorPoly::annihilation(2, mode))
        .expect("two modes")
        .scale_real(std::f64::consts::FRAC_1_SQRT_2)
}

/// `i(a† − a)/√2` on `mode`.
fn momentum(mode: usize) -> OperatorPoly {
    OperatorPoly::creation(2, mode)
        .checked_sub(&OperatorPoly::annihilation(2, mode))
        .expect("two modes")
        .scale(Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2))
}

/// EPR-type sum of quadrature variances: `(Δu)² + (Δv)² ≥ r² + 1/r²` with
/// `u = r·x_a + x_b/r`, `v = r·p_a − p_b/r`.
pub fn duan_epr<M: Moments + ?Sized>(state: &M, r: f64) -> Result<WitnessReport> {
    require_two_modes(state)?;
    if r == 0.0 || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("r must be finite and nonzero, got {r}")));
    }
    let u = position(0).scale_real(r).checked_add(&position(1).scale_real(1.0 / r))?;
    let v = momentum(0).scale_real(r).checked_sub(&momentum(1).scale_real(1.0 / r))?;
    let lhs = variance_of(state, &u)? + variance_of(state, &v)?;
    WitnessReport::new("duan_epr", lhs, r * r + 1.0 / (r * r), vec![kv("r", r)])
}

/// `duan_epr` over 41 log-spaced `r ∈ [0.1, 10]`, returning the smallest margin.
pub fn duan_epr_scan<M: Moments + ?Sized>(state: &M) -> Result<WitnessReport> {
    let mut best: Option<WitnessReport> = None;
    for i in 0..DUAN_SCAN_POINTS {
        let exponent = -1.0 + 2.0 * i as f64 / (DUAN_SCAN_POINTS - 1) as f64;
        let rep = duan_epr(state, 10f64.powf(exponent))?;
        if best.as_ref().is_none_or(|b| rep.margin < b.margin) {
            best = Some(rep);
        }
    }
    Ok(best.expect("non-empty scan"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

/// `(ΔK_axis)² ≥ ¼`, the PT image of `(ΔJ_axis)²_{ρ^PT} ≥ 0`.
pub fn hz_kvariance<M: Moments + ?Sized>(state: &M, axis: Axis) -> Result<WitnessReport> {
    require_two_modes(state)?;
    let k = match axis {
        Axis::X => k_x(),
        Axis::Y => k_y(),
    };
    WitnessReport::new("hz_kvariance", variance_of(state, &k)?, 0.25, vec![kv("axis", axis)])
}

/// `[(ΔK_x)² − ¼][(ΔK_y)² − ¼] ≥ (1/16)|⟨N_a − N_b⟩|²`, from `[J_x, J_y] = iJ_z` under PT.
pub fn su2_hur<M: Moments + ?Sized>(state: &M) -> Result<WitnessReport> {
    require_two_modes(state)?;
    let vx = variance_of(state, &k_x())? - 0.25;
    let vy = variance_of(state, &k_y())? - 0.25;
    let diff = OperatorPoly::number(2, 0).checked_sub(&OperatorPoly::number(2, 1))?;
    let rhs = state.expect(&diff)?.norm_sqr() / 16.0;
    pt_product_report("su2_hur", vx, vy, rhs, vec![])
}

/// `[(ΔJ_y)² + ¼](ΔK_z)² ≥ ¼|⟨J_x⟩|²`, from `[K_y, K_z] = iK_x` under PT.
pub fn jykz<M: Moments + ?Sized>(state: &M) -> Result<WitnessReport> {
    require_two_modes(state)?;
    let vy = variance_of(state, &j_y())? + 0.25;
    let vz = variance_of(state, &k_z())?;
    let rhs = 0.25 * state.expect(&j_x())?.norm_sqr();
    pt_product_report("jykz", vy, vz, rhs, vec![])
}

/// `[(ΔH_x)² − ⟨N_mn⟩][(ΔH_y)² − ⟨N_mn⟩] ≥ ¼|⟨L_z⟩|²`.
pub fn lh_hur<M: Moments + ?Sized>(state: &M, m: u32, n: u32) -> Result<WitnessReport> {
    require_two_modes(state)?;
    require_orders(m, n)?;
    let nmn = state.expect(&n_mn(m, n))?.re;
    let vx = variance_of(state, &h_x(m, n))? - nmn;
    let vy = variance_of(state, &h_y(m, n))? - nmn;
    let rhs = 0.25 * state.expect(&l_z(m, n))?.norm_sqr();
    pt_product_report("lh_hur", vx, vy, rhs, vec![kv("m", m), kv("n", n)])
}

/// `[(ΔL_y)² + ⟨N_mn⟩](ΔN₊)² ≥ ¼|⟨L_x⟩|²` with `N₊ = (n·a†a + m·b†b)/2mn`.
pub fn nplus<M: Moments + ?Sized>(state: &M, m: u32, n: u32) -> Result<WitnessReport> {
    require_two_modes(state)?;
    require_orders(m, n)?;
    let nmn = state.expect(&n_mn(m, n))?.re;
    let vy = variance_of(state, &l_y(m, n))? + nmn;
    let vplus = variance_of(state, &n_plus(m, n))?;
    let rhs = 0.25 * state.expect(&l_x(m, n))?.norm_sqr();
    pt_product_report("nplus", vy, vplus, rhs, vec![kv("m", m), kv("n", n)])
}
