//! Closed-form polynomial surrogates mapping the FAS geometry (N, W)
//! directly to fitted EVD parameters, bypassing per-configuration Monte
//! Carlo and MLE.
//!
//! Each target is a cubic in the monomial basis
//! {1, W, N, W², WN, N², W²N, WN², N³}. The coefficients are fixed
//! constants obtained by regressing ML fits over a (W, N) grid with
//! W ∈ [0.5, 5] and adjacent-port spacing ρ = W/(N−1) ∈ [0.05, 0.5];
//! outside that box the cubics extrapolate badly, so evaluation refuses
//! out-of-range inputs unless explicitly overridden.

use crate::evd::{GevParams, GumbelParams};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SurrogateError {
    #[error("n_ports must be at least 2, got {0}")]
    TooFewPorts(usize),
    #[error(
        "aperture W = {w} outside the fitted range [{min}, {max}] \
         (pass the override to extrapolate)"
    )]
    ApertureOutOfRange { w: f64, min: f64, max: f64 },
    #[error(
        "port spacing rho = W/(N-1) = {rho} outside the fitted range \
         [{min}, {max}] (pass the override to extrapolate)"
    )]
    SpacingOutOfRange { rho: f64, min: f64, max: f64 },
}

/// Whether out-of-range (N, W) pairs are rejected or knowingly
/// extrapolated (the CLI's `--force-surrogate`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangePolicy {
    Enforce,
    Override,
}

/// The fitted box: W ∈ [0.5, 5], ρ = W/(N−1) ∈ [0.05, 0.5].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityRange {
    pub w_min: f64,
    pub w_max: f64,
    pub rho_min: f64,
    pub rho_max: f64,
}

pub const VALIDITY: ValidityRange =
    ValidityRange { w_min: 0.5, w_max: 5.0, rho_min: 0.05, rho_max: 0.5 };

/// Monomial basis shared by all five targets.
pub const MONOMIAL_BASIS: [&str; 9] =
    ["1", "W", "N", "W^2", "W*N", "N^2", "W^2*N", "W*N^2", "N^3"];

/// Coefficient table over `MONOMIAL_BASIS` for each fitted target.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SurrogateCoefficients {
    pub gumbel_scale: [f64; 9],
    pub gumbel_location: [f64; 9],
    pub gev_shape: [f64; 9],
    pub gev_scale: [f64; 9],
    pub gev_location: [f64; 9],
}

pub const COEFFICIENTS: SurrogateCoefficients = SurrogateCoefficients {
    // a_N
    gumbel_scale: [
        0.3928, -0.03528, 0.0009585, 0.002817, 0.0003703, -2.94e-5, -4.659e-5,
        8.07e-7, 1.289e-7,
    ],
    // b_N
    gumbel_location: [
        0.9261, 0.2629, 0.007106, -0.0335, -0.000859, -9.37e-5, 0.0004863,
        -2.84e-5, 1.192e-6,
    ],
    // ξ
    gev_shape: [
        -0.1235, 0.001014, -8.942e-6, 0.0007796, -8.619e-5, 1.867e-6, 1.867e-6,
        2.332e-6, -6.288e-8,
    ],
    // ã_N
    gev_scale: [
        0.4039, -0.03814, 0.0008851, 0.003338, 0.0003779, -2.798e-5, -5.65e-5,
        1.552e-6, 1.004e-7,
    ],
    // b̃_N
    gev_location: [
        0.9346, 0.2511, 0.009196, -0.03177, -0.0006431, -0.000144, 0.0004325,
        -2.548e-5, 1.404e-6,
    ],
};

/// Grouped Horner evaluation: a polynomial in W whose coefficients are
/// Horner polynomials in N.
pub(crate) fn eval_poly(c: &[f64; 9], n_ports: usize, w: f64) -> f64 {
    let n = n_ports as f64;
    let c0 = c[0] + n * (c[2] + n * (c[5] + n * c[8]));
    let c1 = c[1] + n * (c[4] + n * c[7]);
    let c2 = c[3] + n * c[6];
    c0 + w * (c1 + w * c2)
}

/// Ok iff W ∈ [0.5, 5] and ρ = W/(N−1) ∈ [0.05, 0.5] (bounds inclusive).
pub fn validity_check(n_ports: usize, aperture_w: f64) -> Result<(), SurrogateError> {
    if n_ports < 2 {
        return Err(SurrogateError::TooFewPorts(n_ports));
    }
    if !(VALIDITY.w_min..=VALIDITY.w_max).contains(&aperture_w) {
        return Err(SurrogateError::ApertureOutOfRange {
            w: aperture_w,
            min: VALIDITY.w_min,
            max: VALIDITY.w_max,
        });
    }
    let rho = aperture_w / (n_ports - 1) as f64;
    if !(VALIDITY.rho_min..=VALIDITY.rho_max).contains(&rho) {
        return Err(SurrogateError::SpacingOutOfRange {
            rho,
            min: VALIDITY.rho_min,
            max: VALIDITY.rho_max,
        });
    }
    Ok(())
}

/// Gumbel (a_N, b_N) at (N, W).
pub fn gumbel_params_surrogate(
    n_ports: usize,
    aperture_w: f64,
    policy: RangePolicy,
) -> Result<GumbelParams, SurrogateError> {
    if policy == RangePolicy::Enforce {
        validity_check(n_ports, aperture_w)?;
    } else if n_ports < 2 {
        return Err(SurrogateError::TooFewPorts(n_ports));
    }
    let scale = eval_poly(&COEFFICIENTS.gumbel_scale, n_ports, aperture_w);
    let location = eval_poly(&COEFFICIENTS.gumbel_location, n_ports, aperture_w);
    debug_assert!(
        policy == RangePolicy::Override || scale > 0.0,
        "in-range surrogate scale must be positive"
    );
    Ok(GumbelParams { location, scale })
}

/// GEV (ξ, ã_N, b̃_N) at (N, W).
pub fn gev_params_surrogate(
    n_ports: usize,
    aperture_w: f64,
    policy: RangePolicy,
) -> Result<GevParams, SurrogateError> {
    if policy == RangePolicy::Enforce {
        validity_check(n_ports, aperture_w)?;
    } else if n_ports < 2 {
        return Err(SurrogateError::TooFewPorts(n_ports));
    }
    let shape = eval_poly(&COEFFICIENTS.gev_shape, n_ports, aperture_w);
    let scale = eval_poly(&COEFFICIENTS.gev_scale, n_ports, aperture_w);
    let location = eval_poly(&COEFFICIENTS.gev_location, n_ports, aperture_w);
    debug_assert!(
        policy == RangePolicy::Override || scale > 0.0,
        "in-range surrogate scale must be positive"
    );
    Ok(GevParams { shape, location, scale })
}

/// Machine-readable coefficient export (`surrogate_coefficients.json`)
/// so downstream tooling can audit the table.
pub fn coefficients_json() -> String {
    #[derive(Serialize)]
    struct Export {
        basis: [&'static str; 9],
        coefficients: SurrogateCoefficients,
        validity: ValidityRange,
    }
    serde_json::to_string_pretty(&Export {
        basis: MONOMIAL_BASIS,
        coefficients: COEFFICIENTS,
        validity: VALIDITY,
    })
    .expect("static table serializes")
}

pub fn write_coefficients_json(path: &std::path::Path) -> std::io::Result<()> {
    std::fs::write(path, coefficients_json())
}
