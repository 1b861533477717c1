//! The extreme value family used to model the FAS channel maximum: Gumbel
//! and GEV (Fréchet/Weibull reachable through the GEV shape sign), plus the
//! iid-Rayleigh normalizing constants and the von Mises domain-of-attraction
//! diagnostic.
//!
//! Shape convention: ξ > 0 is Fréchet-type, ξ = 0 Gumbel, ξ < 0
//! Weibull-type with finite upper endpoint b − a/ξ. The normalizing
//! parameters (a_N, b_N) of the maximum are identified with the scale and
//! location of the fitted distribution.

use crate::chansim::SampleSet;
use crate::numeric::compensated_sum;
use crate::specfun::ln_gamma;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Euler–Mascheroni constant, 20 digits (rounds to the nearest double).
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.57721566490153286061;

/// Below this |ξ| the GEV formulas switch to their Gumbel limits.
pub const GUMBEL_LIMIT_SHAPE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum EvdError {
    #[error("scale must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("quantile probability must lie in (0,1), got {0}")]
    BadProbability(f64),
    #[error("log-likelihood needs a nonempty sample set")]
    EmptySampleSet,
    #[error("n_ports must be at least 2 for the iid normalizers, got {0}")]
    TooFewPorts(usize),
    #[error("density vanishes inside the finite-difference stencil at x = {0}")]
    ZeroDensity(f64),
}

/// Gumbel location/scale (b_N, a_N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GumbelParams {
    pub location: f64,
    pub scale: f64,
}

impl GumbelParams {
    pub fn new(location: f64, scale: f64) -> Result<Self, EvdError> {
        if !location.is_finite() {
            return Err(EvdError::NonFinite { name: "location", value: location });
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(EvdError::BadScale(scale));
        }
        Ok(Self { location, scale })
    }
}

/// GEV shape/location/scale (ξ, b̃_N, ã_N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GevParams {
    pub shape: f64,
    pub location: f64,
    pub scale: f64,
}

impl GevParams {
    pub fn new(shape: f64, location: f64, scale: f64) -> Result<Self, EvdError> {
        if !shape.is_finite() {
            return Err(EvdError::NonFinite { name: "shape", value: shape });
        }
        if !location.is_finite() {
            return Err(EvdError::NonFinite { name: "location", value: location });
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(EvdError::BadScale(scale));
        }
        Ok(Self { shape, location, scale })
    }

    /// Whether x satisfies the support condition 1 + ξ(x−b)/a > 0.
    pub fn supports(&self, x: f64) -> bool {
        if self.shape.abs() < GUMBEL_LIMIT_SHAPE {
            return true;
        }
        1.0 + self.shape * (x - self.location) / self.scale > 0.0
    }
}

/// Either family, tagged for serialization as
/// `{"family":"gumbel"|"gev","location":…,"scale":…[,"shape":…]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum EvdParams {
    Gumbel { location: f64, scale: f64 },
    Gev { location: f64, scale: f64, shape: f64 },
}

impl From<GumbelParams> for EvdParams {
    fn from(p: GumbelParams) -> Self {
        EvdParams::Gumbel { location: p.location, scale: p.scale }
    }
}

impl From<GevParams> for EvdParams {
    fn from(p: GevParams) -> Self {
        EvdParams::Gev { location: p.location, scale: p.scale, shape: p.shape }
    }
}

impl EvdParams {
    pub fn cdf(&self, x: f64) -> f64 {
        match self.typed() {
            TypedParams::Gumbel(p) => gumbel_cdf(&p, x),
            TypedParams::Gev(p) => gev_cdf(&p, x),
        }
    }

    pub fn quantile(&self, q: f64) -> Result<f64, EvdError> {
        match self.typed() {
            TypedParams::Gumbel(p) => gumbel_quantile(&p, q),
            TypedParams::Gev(p) => gev_quantile(&p, q),
        }
    }

    fn typed(&self) -> TypedParams {
        match *self {
            EvdParams::Gumbel { location, scale } => {
                TypedParams::Gumbel(GumbelParams { location, scale })
            }
            EvdParams::Gev { location, scale, shape } => {
                TypedParams::Gev(GevParams { shape, location, scale })
            }
        }
    }
}

enum TypedParams {
    Gumbel(GumbelParams),
    Gev(GevParams),
}

/// A mean that may be infinite (GEV with ξ ≥ 1). Kept as an explicit
/// variant so capacity consumers must handle the unbounded branch instead
/// of silently propagating a floating-point infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MeanValue {
    Finite(f64),
    Unbounded,
}

impl MeanValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            MeanValue::Finite(v) => Some(v),
            MeanValue::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, MeanValue::Unbounded)
    }
}

// ---------------------------------------------------------------------------
// Gumbel
// ---------------------------------------------------------------------------

pub fn gumbel_cdf(p: &GumbelParams, x: f64) -> f64 {
    let u = (x - p.location) / p.scale;
    (-(-u).exp()).exp()
}

pub fn gumbel_pdf(p: &GumbelParams, x: f64) -> f64 {
    let u = (x - p.location) / p.scale;
    ((-u) - (-u).exp()).exp() / p.scale
}

pub fn gumbel_quantile(p: &GumbelParams, q: f64) -> Result<f64, EvdError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(EvdError::BadProbability(q));
    }
    Ok(p.location - p.scale * (-q.ln()).ln())
}

pub fn gumbel_mean(p: &GumbelParams) -> f64 {
    p.location + p.scale * EULER_GAMMA
}

/// Σ_i ln f(x_i; b, a) over the sample set.
pub fn gumbel_loglik(p: &GumbelParams, s: &SampleSet) -> Result<f64, EvdError> {
    if s.values().is_empty() {
        return Err(EvdError::EmptySampleSet);
    }
    let inv_a = 1.0 / p.scale;
    let ln_a = p.scale.ln();
    Ok(compensated_sum(s.values().iter().map(|&x| {
        let u = (x - p.location) * inv_a;
        -ln_a - u - (-u).exp()
    })))
}

// ---------------------------------------------------------------------------
// GEV
// ---------------------------------------------------------------------------

/// GEV CDF with the Gumbel limit at |ξ| < 1e-12 and the tail conventions
/// outside the support: 0 below a Fréchet lower endpoint, 1 above a
/// Weibull upper endpoint. `ln_1p` keeps t^{−1/ξ} cancellation-free for
/// small shapes.
pub fn gev_cdf(p: &GevParams, x: f64) -> f64 {
    let u = (x - p.location) / p.scale;
    if p.shape.abs() < GUMBEL_LIMIT_SHAPE {
        return (-(-u).exp()).exp();
    }
    let t = 1.0 + p.shape * u;
    if t <= 0.0 {
        return if p.shape > 0.0 { 0.0 } else { 1.0 };
    }
    (-(-(p.shape * u).ln_1p() / p.shape).exp()).exp()
}

/// GEV density; zero outside the support.
pub fn gev_pdf(p: &GevParams, x: f64) -> f64 {
    let u = (x - p.location) / p.scale;
    if p.shape.abs() < GUMBEL_LIMIT_SHAPE {
        return ((-u) - (-u).exp()).exp() / p.scale;
    }
    let t = 1.0 + p.shape * u;
    if t <= 0.0 {
        return 0.0;
    }
    let ln_t = (p.shape * u).ln_1p();
    let pow = (-ln_t / p.shape).exp(); // t^{-1/ξ}
    ((-1.0 - 1.0 / p.shape) * ln_t).exp() * (-pow).exp() / p.scale
}

pub fn gev_quantile(p: &GevParams, q: f64) -> Result<f64, EvdError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(EvdError::BadProbability(q));
    }
    let ln_ln = (-q.ln()).ln();
    if p.shape.abs() < GUMBEL_LIMIT_SHAPE {
        return Ok(p.location - p.scale * ln_ln);
    }
    // ((−ln q)^{−ξ} − 1)/ξ via expm1 for seam continuity
    Ok(p.location + p.scale * (-p.shape * ln_ln).exp_m1() / p.shape)
}

/// GEV mean: b + a(Γ(1−ξ)−1)/ξ for ξ < 1, the Gumbel value at ξ = 0,
/// and the explicit unbounded signal for ξ ≥ 1.
pub fn gev_mean(p: &GevParams) -> MeanValue {
    if p.shape >= 1.0 {
        return MeanValue::Unbounded;
    }
    if p.shape.abs() < GUMBEL_LIMIT_SHAPE {
        return MeanValue::Finite(p.location + p.scale * EULER_GAMMA);
    }
    // (Γ(1−ξ) − 1)/ξ = expm1(ln Γ(1−ξ))/ξ, stable down to the seam
    let lg = ln_gamma(1.0 - p.shape).expect("1 - shape > 0");
    MeanValue::Finite(p.location + p.scale * lg.exp_m1() / p.shape)
}

/// Σ_i ln f(x_i; ξ, b, a); −∞ when any sample leaves the support.
pub fn gev_loglik(p: &GevParams, s: &SampleSet) -> Result<f64, EvdError> {
    if s.values().is_empty() {
        return Err(EvdError::EmptySampleSet);
    }
    if p.shape.abs() < GUMBEL_LIMIT_SHAPE {
        return gumbel_loglik(&GumbelParams { location: p.location, scale: p.scale }, s);
    }
    let inv_a = 1.0 / p.scale;
    let ln_a = p.scale.ln();
    let xi = p.shape;
    let c = -1.0 - 1.0 / xi;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in s.values() {
        let arg = xi * ((x - p.location) * inv_a);
        if arg <= -1.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let ln_t = arg.ln_1p();
        let term = -ln_a + c * ln_t - (-ln_t / xi).exp();
        let s_new = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - s_new) + term;
        } else {
            comp += (term - s_new) + sum;
        }
        sum = s_new;
    }
    Ok(sum + comp)
}

// ---------------------------------------------------------------------------
// iid-Rayleigh baseline
// ---------------------------------------------------------------------------

/// Normalizing constants of the maximum of N iid Rayleigh(σ) envelopes:
/// â_N = σ/√(2 ln N), b̂_N = σ√(2 ln N). The product â_N·b̂_N = σ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IidBaseline {
    pub a_hat: f64,
    pub b_hat: f64,
    pub n_ports: usize,
}

pub fn iid_rayleigh_normalizers(n_ports: usize, sigma: f64) -> Result<IidBaseline, EvdError> {
    if n_ports < 2 {
        return Err(EvdError::TooFewPorts(n_ports));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(EvdError::BadScale(sigma));
    }
    let root = (2.0 * (n_ports as f64).ln()).sqrt();
    Ok(IidBaseline { a_hat: sigma / root, b_hat: sigma * root, n_ports })
}

impl IidBaseline {
    /// The baseline read as a Gumbel law (location b̂_N, scale â_N).
    pub fn as_gumbel(&self) -> GumbelParams {
        GumbelParams { location: self.b_hat, scale: self.a_hat }
    }
}

// ---------------------------------------------------------------------------
// von Mises condition
// ---------------------------------------------------------------------------

/// Central-difference estimate of d/dx[(1−F(x))/f(x)]; the Gumbel domain of
/// attraction requires this to vanish toward the upper endpoint.
/// The step is h = max(1e-4, 1e-4·x) unless the caller overrides it.
pub fn von_mises_check(
    cdf: impl Fn(f64) -> f64,
    pdf: impl Fn(f64) -> f64,
    x: f64,
    step: Option<f64>,
) -> Result<f64, EvdError> {
    let h = step.unwrap_or_else(|| (1e-4f64).max(1e-4 * x));
    let (f_hi, f_lo) = (pdf(x + h), pdf(x - h));
    // NaN densities must fail the gate too, hence the negated comparison
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(f_hi > 0.0 && f_lo > 0.0) {
        return Err(EvdError::ZeroDensity(x));
    }
    let g_hi = (1.0 - cdf(x + h)) / f_hi;
    let g_lo = (1.0 - cdf(x - h)) / f_lo;
    Ok((g_hi - g_lo) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chansim::{SampleMeta, SampleSet};
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn meta() -> SampleMeta {
        SampleMeta { n_ports: 2, aperture_w: 1.0, rayleigh_scale: 0.5, seed: 0 }
    }

    fn uniform(rng: &mut ChaCha8Rng) -> f64 {
        ((rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
            .max(f64::MIN_POSITIVE)
    }

    #[test]
    fn gumbel_cdf_known_points() {
        let p = GumbelParams::new(1.5, 0.3).unwrap();
        assert!((gumbel_cdf(&p, 1.5) - (-1.0f64).exp()).abs() < 1e-15);
        let median_x = 1.5 - 0.3 * (2.0f64.ln()).ln();
        assert!((gumbel_cdf(&p, median_x) - 0.5).abs() < 1e-14);
        assert_eq!(gumbel_cdf(&p, -1e308), 0.0);
        assert!((gumbel_cdf(&p, 1e308) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gumbel_quantile_inverts_cdf() {
        let p = GumbelParams::new(0.7, 1.9).unwrap();
        let q = gumbel_quantile(&p, (-1.0f64).exp()).unwrap();
        assert!((q - 0.7).abs() < 1e-14);
        assert!(gumbel_quantile(&p, 0.0).is_err());
        assert!(gumbel_quantile(&p, 1.0).is_err());
    }

    #[test]
    fn gumbel_mean_is_euler_scaled() {
        let p = GumbelParams::new(0.0, 1.0).unwrap();
        assert!((gumbel_mean(&p) - EULER_GAMMA).abs() < 1e-16);
    }

    #[test]
    fn gumbel_pdf_mass_over_wide_window() {
        // Simpson quadrature of the pdf over [b−20a, b+20a] equals the exact
        // window mass to 1e-10; the window itself misses e^{-20} ≈ 2.06e-9
        // of upper-tail mass, so the total is 1 only to ~1e-8.
        let p = GumbelParams::new(2.0, 0.5).unwrap();
        let (a, b, n) = (2.0 - 10.0, 2.0 + 10.0, 80_000usize);
        let h = (b - a) / n as f64;
        let mut s = gumbel_pdf(&p, a) + gumbel_pdf(&p, b);
        for i in 1..n {
            s += gumbel_pdf(&p, a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let quad = s * h / 3.0;
        let exact = gumbel_cdf(&p, b) - gumbel_cdf(&p, a);
        assert!((quad - exact).abs() < 1e-10, "quad-vs-exact {}", (quad - exact).abs());
        assert!((quad - 1.0).abs() < 1e-8, "quad-vs-one {}", (quad - 1.0).abs());
    }

    #[test]
    fn gev_reduces_to_gumbel_at_zero_shape() {
        let g = GumbelParams::new(1.2, 0.4).unwrap();
        let v = GevParams::new(0.0, 1.2, 0.4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = 1.2 + 4.0 * (uniform(&mut rng) - 0.3);
            assert!((gev_cdf(&v, x) - gumbel_cdf(&g, x)).abs() < 1e-9);
            assert!((gev_pdf(&v, x) - gumbel_pdf(&g, x)).abs() < 1e-9);
        }
    }

    #[test]
    fn gev_weibull_upper_endpoint() {
        let p = GevParams::new(-0.12, 1.0, 0.4).unwrap();
        let endpoint = 1.0 + 0.4 / 0.12;
        assert_eq!(gev_cdf(&p, endpoint + 1e-9), 1.0);
        assert_eq!(gev_pdf(&p, endpoint + 1e-9), 0.0);
        // Fréchet lower endpoint
        let f = GevParams::new(0.3, 1.0, 0.4).unwrap();
        let lower = 1.0 - 0.4 / 0.3;
        assert_eq!(gev_cdf(&f, lower - 1e-9), 0.0);
    }

    #[test]
    fn gev_shape_seam_is_continuous() {
        let near = GevParams::new(1e-10, 0.9, 0.35).unwrap();
        let zero = GevParams::new(0.0, 0.9, 0.35).unwrap();
        for i in 0..100 {
            let x = 0.2 + i as f64 * 0.03;
            assert!(
                (gev_cdf(&near, x) - gev_cdf(&zero, x)).abs() < 1e-8,
                "x={x}"
            );
        }
    }

    #[test]
    fn gev_quantile_round_trips_on_support() {
        for xi in [-0.2, 0.0, 0.2] {
            let p = GevParams::new(xi, 1.1, 0.45).unwrap();
            for i in 1..40 {
                let q = i as f64 / 40.0;
                let x = gev_quantile(&p, q).unwrap();
                let back = gev_cdf(&p, x);
                assert!((back - q).abs() < 1e-10, "xi={xi} q={q}: {back}");
            }
        }
    }

    #[test]
    fn gev_mean_branches() {
        let gum = GevParams::new(0.0, 1.5, 0.38).unwrap();
        assert_eq!(
            gev_mean(&gum),
            MeanValue::Finite(1.5 + 0.38 * EULER_GAMMA)
        );
        assert!(gev_mean(&GevParams::new(1.0, 0.0, 1.0).unwrap()).is_unbounded());
        assert!(gev_mean(&GevParams::new(1.3, 0.0, 1.0).unwrap()).is_unbounded());
        assert!(!gev_mean(&GevParams::new(0.5, 0.0, 1.0).unwrap()).is_unbounded());
    }

    #[test]
    fn gev_mean_matches_quantile_average() {
        // MC oracle: mean of gev_quantile over 10⁷ uniform draws
        let p = GevParams::new(-0.12, 1.5, 0.38).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let m = 10_000_000usize;
        let mut acc = 0.0;
        for _ in 0..m {
            acc += gev_quantile(&p, uniform(&mut rng)).unwrap();
        }
        let mc = acc / m as f64;
        let exact = gev_mean(&p).finite().unwrap();
        // std of GEV(-0.12, ·, 0.38) is ~0.45; 3 standard errors
        let tol = 3.0 * 0.45 / (m as f64).sqrt();
        assert!((mc - exact).abs() < tol, "mc {mc} vs exact {exact}");
    }

    #[test]
    fn loglik_at_gumbel_mode() {
        let p = GumbelParams::new(2.5, 0.7).unwrap();
        let s = SampleSet::from_values(vec![2.5], meta()).unwrap();
        let expect = (1.0 / 0.7f64).ln() - 1.0;
        assert!((gumbel_loglik(&p, &s).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn gev_loglik_nests_gumbel() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gp = GumbelParams::new(1.5, 0.3).unwrap();
        let values: Vec<f64> = (0..5000)
            .map(|_| gumbel_quantile(&gp, uniform(&mut rng)).unwrap())
            .collect();
        let s = SampleSet::from_values(values, meta()).unwrap();
        let lg = gumbel_loglik(&gp, &s).unwrap();
        let lv = gev_loglik(&GevParams::new(0.0, 1.5, 0.3).unwrap(), &s).unwrap();
        assert!((lg - lv).abs() < 1e-9);
    }

    #[test]
    fn gev_loglik_signals_support_violation() {
        let p = GevParams::new(-0.5, 1.0, 0.2).unwrap(); // endpoint 1.4
        let s = SampleSet::from_values(vec![1.0, 1.2, 2.0], meta()).unwrap();
        assert_eq!(gev_loglik(&p, &s).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn loglik_peaks_near_true_parameters() {
        // averaged over resamples, the true parameters beat perturbed ones
        let truth = GumbelParams::new(1.5, 0.3).unwrap();
        let bumped = GumbelParams::new(1.56, 0.33).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut margin = 0.0;
        for _ in 0..100 {
            let values: Vec<f64> = (0..2000)
                .map(|_| gumbel_quantile(&truth, uniform(&mut rng)).unwrap())
                .collect();
            let s = SampleSet::from_values(values, meta()).unwrap();
            margin +=
                gumbel_loglik(&truth, &s).unwrap() - gumbel_loglik(&bumped, &s).unwrap();
        }
        assert!(margin / 100.0 > 0.0, "mean margin {}", margin / 100.0);
    }

    #[test]
    fn iid_normalizers_product_identity() {
        let sigma = std::f64::consts::FRAC_1_SQRT_2;
        for n in [3usize, 10, 100] {
            let b = iid_rayleigh_normalizers(n, sigma).unwrap();
            // a·b = σ² up to two roundings
            let prod = b.a_hat * b.b_hat;
            assert!((prod - 0.5).abs() <= 4.0 * f64::EPSILON, "N={n}: {prod}");
        }
        assert!(iid_rayleigh_normalizers(1, sigma).is_err());
    }

    #[test]
    fn iid_normalizers_values() {
        let sigma = std::f64::consts::FRAC_1_SQRT_2;
        let b100 = iid_rayleigh_normalizers(100, sigma).unwrap();
        assert!((b100.b_hat - 100.0f64.ln().sqrt()).abs() < 1e-15);
        assert!((b100.b_hat - 2.145_966_026_289_347).abs() < 1e-12);
        let b10 = iid_rayleigh_normalizers(10, sigma).unwrap();
        assert!((b10.b_hat - 1.517_427_129_385_146_5).abs() < 1e-12);
    }

    #[test]
    fn von_mises_rayleigh_hazard() {
        // Rayleigh(σ): (1−F)/f = σ²/x, derivative −σ²/x². The survival must
        // stay above f64 resolution inside 1−cdf(x), which caps the usable
        // x at √(2σ²·36 ln 10 / …) ≈ 5.4 for σ = 1/√2; checked at x = 4.
        let sigma2 = 0.5;
        let cdf = |x: f64| 1.0 - (-x * x / (2.0 * sigma2)).exp();
        let pdf = |x: f64| x / sigma2 * (-x * x / (2.0 * sigma2)).exp();
        let v = von_mises_check(cdf, pdf, 4.0, None).unwrap();
        assert!((v - (-0.5 / 16.0)).abs() < 1e-4, "{v}");
        // magnitude decreases toward the upper endpoint; σ = 3 keeps the
        // survival representable out to x = 20
        let s2 = 9.0;
        let cdf2 = move |x: f64| 1.0 - (-x * x / (2.0 * s2)).exp();
        let pdf2 = move |x: f64| x / s2 * (-x * x / (2.0 * s2)).exp();
        let mut last = f64::INFINITY;
        for x in [5.0, 10.0, 20.0] {
            let m = von_mises_check(cdf2, pdf2, x, None).unwrap().abs();
            assert!((m - s2 / (x * x)).abs() < 1e-3 * s2 / (x * x));
            assert!(m < last);
            last = m;
        }
    }

    #[test]
    fn von_mises_exponential_is_zero() {
        let cdf = |x: f64| 1.0 - (-x).exp();
        let pdf = |x: f64| (-x).exp();
        let v = von_mises_check(cdf, pdf, 3.0, None).unwrap();
        assert!(v.abs() < 1e-9, "{v}");
    }

    #[test]
    fn von_mises_rejects_dead_density() {
        let cdf = |_x: f64| 1.0;
        let pdf = |_x: f64| 0.0;
        assert!(matches!(
            von_mises_check(cdf, pdf, 1.0, None),
            Err(EvdError::ZeroDensity(_))
        ));
    }

    #[test]
    fn evd_params_dispatch_matches_typed_functions() {
        let g = GumbelParams::new(1.25, 0.375).unwrap();
        let v = GevParams::new(-0.12, 1.27, 0.38).unwrap();
        let ge: EvdParams = g.into();
        let ve: EvdParams = v.into();
        for x in [0.4, 1.0, 1.7, 2.5] {
            assert_eq!(ge.cdf(x), gumbel_cdf(&g, x));
            assert_eq!(ve.cdf(x), gev_cdf(&v, x));
        }
        for q in [0.01, 0.5, 0.99] {
            assert_eq!(ge.quantile(q).unwrap(), gumbel_quantile(&g, q).unwrap());
            assert_eq!(ve.quantile(q).unwrap(), gev_quantile(&v, q).unwrap());
        }
        assert!(ge.quantile(0.0).is_err());
    }

    #[test]
    fn params_serialize_with_family_tag() {
        let g: EvdParams = GumbelParams::new(1.25, 0.375).unwrap().into();
        let js = serde_json::to_string(&g).unwrap();
        assert_eq!(js, r#"{"family":"gumbel","location":1.25,"scale":0.375}"#);
        let v: EvdParams = GevParams::new(-0.12, 1.27, 0.38).unwrap().into();
        let js = serde_json::to_string(&v).unwrap();
        assert_eq!(
            js,
            r#"{"family":"gev","location":1.27,"scale":0.38,"shape":-0.12}"#
        );
        let back: EvdParams = serde_json::from_str(&js).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn pdf_is_derivative_of_cdf() {
        let h = 1e-6;
        let g = GumbelParams::new(1.0, 0.5).unwrap();
        for x in [0.3, 0.9, 1.4, 2.2] {
            let num = (gumbel_cdf(&g, x + h) - gumbel_cdf(&g, x - h)) / (2.0 * h);
            let rel = (num - gumbel_pdf(&g, x)).abs() / gumbel_pdf(&g, x);
            assert!(rel < 1e-6, "gumbel x={x}: {rel}");
        }
        let v = GevParams::new(-0.15, 1.0, 0.5).unwrap();
        for x in [0.5, 1.0, 1.8, 3.0] {
            let num = (gev_cdf(&v, x + h) - gev_cdf(&v, x - h)) / (2.0 * h);
            let rel = (num - gev_pdf(&v, x)).abs() / gev_pdf(&v, x);
            assert!(rel < 1e-6, "gev x={x}: {rel}");
        }
    }
}
