//! Maximum-likelihood estimation of the EVD parameters from block-maxima
//! samples.
//!
//! Gumbel fitting profiles the location out of the score equations: the
//! location has the closed form b = −a·ln((1/M)Σ e^{−x_i/a}), and
//! substituting it back reduces the scale equation to the one-dimensional
//! root problem r(a) = a − x̄ + Σ x_i e^{−x_i/a} / Σ e^{−x_i/a} = 0, solved
//! by Newton iterations safeguarded with bisection (r is strictly
//! increasing: r′(a) = 1 + Var_w(x)/a²). GEV fitting maximizes the
//! log-likelihood over (ξ, ln a, b) with a Nelder–Mead simplex started from
//! a probability-weighted-moments estimate, with a second start at the
//! Gumbel solution nudged to ξ = ±0.05.

use crate::chansim::SampleSet;
use crate::evd::{
    gev_loglik, gumbel_loglik, EvdParams, GevParams, GumbelParams, EULER_GAMMA,
};
use crate::numeric::compensated_sum;
use crate::specfun::gamma_pos;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("degenerate data: sample variance is zero")]
    DegenerateData,
    #[error("no sign change of the profiled score in [{lo:e}, {hi:e}]")]
    BracketNotFound { lo: f64, hi: f64 },
    #[error("optimizer exhausted its iteration budget; best-so-far report attached")]
    Convergence { report: Box<FitReport> },
    #[error("likelihood evaluation: {0}")]
    Evd(#[from] crate::evd::EvdError),
}

/// Outcome of a fit: parameters, the achieved log-likelihood, and solver
/// diagnostics. `residual` is the profiled-score magnitude for Gumbel fits
/// and the final simplex objective spread for GEV fits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub params: EvdParams,
    pub loglik: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
}

impl FitReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

// ---------------------------------------------------------------------------
// Gumbel: profiled likelihood
// ---------------------------------------------------------------------------

/// Neumaier accumulator for streaming compensated sums.
#[derive(Default)]
struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    #[inline]
    fn add(&mut self, t: f64) {
        let s = self.sum + t;
        if self.sum.abs() >= t.abs() {
            self.comp += (self.sum - s) + t;
        } else {
            self.comp += (t - s) + self.sum;
        }
        self.sum = s;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Exponentially weighted sums Σe^{−x_i/a}, Σx_i e^{−x_i/a}, Σx_i² e^{−x_i/a},
/// shifted by min(x) so the weights never overflow. One exp per sample.
fn weighted_sums(a: f64, xs: &[f64]) -> (f64, f64, f64) {
    let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let inv_a = 1.0 / a;
    let (mut s0, mut s1, mut s2) =
        (Accumulator::default(), Accumulator::default(), Accumulator::default());
    for &x in xs {
        let w = (-(x - x_min) * inv_a).exp();
        s0.add(w);
        s1.add(x * w);
        s2.add(x * x * w);
    }
    (s0.value(), s1.value(), s2.value())
}

/// Closed-form profiled location b(a) = −a·ln((1/M)Σ e^{−x_i/a}), computed
/// through the log-sum-exp shift for overflow safety.
pub fn gumbel_profile_location(a: f64, s: &SampleSet) -> f64 {
    let xs = s.values();
    let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let inv_a = 1.0 / a;
    let m = xs.len() as f64;
    let sum = compensated_sum(xs.iter().map(|&x| (-(x - x_min) * inv_a).exp()));
    x_min - a * (sum / m).ln()
}

/// Profiled score residual r(a) = a − x̄ + Σx_i e^{−x_i/a} / Σe^{−x_i/a};
/// the MLE scale is its unique root.
pub fn gumbel_profile_residual(a: f64, s: &SampleSet) -> f64 {
    let xs = s.values();
    let mean = compensated_sum(xs.iter().copied()) / xs.len() as f64;
    let (s0, s1, _) = weighted_sums(a, xs);
    a - mean + s1 / s0
}

/// r(a) together with r′(a) = 1 + Var_w(x)/a² for Newton steps.
fn residual_and_derivative(a: f64, xs: &[f64], mean: f64) -> (f64, f64) {
    let (s0, s1, s2) = weighted_sums(a, xs);
    let wm = s1 / s0;
    let var_w = (s2 / s0 - wm * wm).max(0.0);
    (a - mean + wm, 1.0 + var_w / (a * a))
}

/// The two Gumbel score sums ∂L/∂b and ∂L/∂a at (b, a); both vanish at
/// the MLE.
pub fn gumbel_score(p: &GumbelParams, s: &SampleSet) -> (f64, f64) {
    let xs = s.values();
    let inv_a = 1.0 / p.scale;
    let score_b = compensated_sum(
        xs.iter().map(|&x| 1.0 - (-(x - p.location) * inv_a).exp()),
    ) * inv_a;
    let m = xs.len() as f64;
    let s1 = compensated_sum(xs.iter().map(|&x| x - p.location));
    let s2 = compensated_sum(
        xs.iter().map(|&x| (x - p.location) * (-(x - p.location) * inv_a).exp()),
    );
    let score_a = -m * inv_a + inv_a * inv_a * (s1 - s2);
    (score_b, score_a)
}

const GUMBEL_MAX_NEWTON: usize = 200;

/// Gumbel MLE by safeguarded Newton on the profiled scale equation.
pub fn fit_gumbel_mle(s: &SampleSet) -> Result<FitReport, FitError> {
    let xs = s.values();
    if xs.len() < 10 {
        return Err(FitError::TooFewSamples { needed: 10, got: xs.len() });
    }
    let m = xs.len() as f64;
    let mean = compensated_sum(xs.iter().copied()) / m;
    let var = compensated_sum(xs.iter().map(|&x| (x - mean) * (x - mean))) / m;
    if var <= 0.0 {
        return Err(FitError::DegenerateData);
    }
    let std = var.sqrt();

    // method-of-moments start: a⁰ = s·√6/π
    let a0 = std * 6.0f64.sqrt() / std::f64::consts::PI;
    let tol = 1e-10 * (1.0 + mean.abs());

    // establish a bracket with r(lo) < 0 < r(hi)
    let (floor, ceil) = (1e-6 * std, 1e3 * std);
    let mut lo = (a0 / 10.0).max(floor);
    let mut hi = (a0 * 10.0).min(ceil);
    let mut r_lo = gumbel_profile_residual(lo, s);
    let mut r_hi = gumbel_profile_residual(hi, s);
    while r_lo > 0.0 && lo > floor {
        lo = (lo / 2.0).max(floor);
        r_lo = gumbel_profile_residual(lo, s);
    }
    while r_hi < 0.0 && hi < ceil {
        hi = (hi * 2.0).min(ceil);
        r_hi = gumbel_profile_residual(hi, s);
    }
    if !(r_lo <= 0.0 && r_hi >= 0.0) {
        return Err(FitError::BracketNotFound { lo, hi });
    }

    let mut a = a0.clamp(lo, hi);
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    for _ in 0..GUMBEL_MAX_NEWTON {
        iterations += 1;
        let (r, dr) = residual_and_derivative(a, xs, mean);
        residual = r.abs();
        if residual < tol {
            break;
        }
        if r > 0.0 {
            hi = a;
        } else {
            lo = a;
        }
        let newton = a - r / dr;
        a = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    if residual >= tol {
        let b = gumbel_profile_location(a, s);
        let params = GumbelParams { location: b, scale: a };
        let report = FitReport {
            loglik: gumbel_loglik(&params, s)?,
            params: params.into(),
            iterations,
            converged: false,
            residual,
        };
        return Err(FitError::Convergence { report: Box::new(report) });
    }

    let b = gumbel_profile_location(a, s);
    let params = GumbelParams { location: b, scale: a };
    Ok(FitReport {
        loglik: gumbel_loglik(&params, s)?,
        params: params.into(),
        iterations,
        converged: true,
        residual,
    })
}

// ---------------------------------------------------------------------------
// L-moments initializer
// ---------------------------------------------------------------------------

/// Probability-weighted-moments estimate of GEV parameters (Hosking's
/// rational approximation for the shape), used to start the GEV optimizer.
/// The shape is clamped to |ξ₀| ≤ 0.5.
pub fn l_moments_init(s: &SampleSet) -> Result<GevParams, FitError> {
    let xs = s.values();
    if xs.len() < 10 {
        return Err(FitError::TooFewSamples { needed: 10, got: xs.len() });
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len() as f64;

    // unbiased PWMs b_r = (1/n) Σ x_(j) Π_{l=1..r} (j−l)/(n−l), j 1-based
    let b0 = compensated_sum(sorted.iter().copied()) / n;
    let b1 = compensated_sum(
        sorted.iter().enumerate().map(|(i, &x)| x * i as f64 / (n - 1.0)),
    ) / n;
    let b2 = compensated_sum(sorted.iter().enumerate().map(|(i, &x)| {
        x * (i as f64 * (i as f64 - 1.0)) / ((n - 1.0) * (n - 2.0))
    })) / n;

    let l1 = b0;
    let l2 = 2.0 * b1 - b0;
    let l3 = 6.0 * b2 - 6.0 * b1 + b0;
    if l2 <= 0.0 {
        return Err(FitError::DegenerateData);
    }
    let tau3 = l3 / l2;

    let c = 2.0 / (3.0 + tau3) - std::f64::consts::LN_2 / 3.0f64.ln();
    let shape = (-(7.8590 * c + 2.9554 * c * c)).clamp(-0.5, 0.5);

    if shape.abs() < 1e-8 {
        let scale = l2 / std::f64::consts::LN_2;
        let location = l1 - scale * EULER_GAMMA;
        return Ok(GevParams { shape: 0.0, location, scale });
    }
    let k = -shape; // Hosking's convention
    let gamma_1k = gamma_pos(1.0 + k);
    let scale = l2 * k / ((1.0 - 2.0f64.powf(-k)) * gamma_1k);
    let location = l1 - scale * (1.0 - gamma_1k) / k;
    Ok(GevParams { shape, location, scale })
}

// ---------------------------------------------------------------------------
// GEV: Nelder–Mead over (ξ, ln a, b)
// ---------------------------------------------------------------------------

const NM_MAX_ITERATIONS: usize = 2000;
const NM_OBJECTIVE_SPREAD: f64 = 1e-9;
const NM_PARAM_SPREAD: f64 = 1e-8;

#[derive(Clone, Copy)]
struct Vertex {
    x: [f64; 3], // (ξ, ln a, b)
    f: f64,      // objective = log-likelihood (maximized)
}

fn vertex_params(x: &[f64; 3]) -> GevParams {
    GevParams { shape: x[0], location: x[2], scale: x[1].exp() }
}

struct NmOutcome {
    best: Vertex,
    iterations: usize,
    converged: bool,
    spread: f64,
}

fn nelder_mead(start: [f64; 3], steps: [f64; 3], obj: &impl Fn(&[f64; 3]) -> f64) -> NmOutcome {
    let mut simplex: Vec<Vertex> = Vec::with_capacity(4);
    simplex.push(Vertex { x: start, f: obj(&start) });
    for i in 0..3 {
        let mut x = start;
        x[i] += steps[i];
        simplex.push(Vertex { x, f: obj(&x) });
    }

    let order = |s: &mut Vec<Vertex>| {
        // descending objective: s[0] is the best vertex
        s.sort_by(|a, b| b.f.partial_cmp(&a.f).unwrap_or(std::cmp::Ordering::Equal));
    };
    order(&mut simplex);

    let mut iterations = 0;
    let mut converged = false;
    let mut spread = f64::INFINITY;
    while iterations < NM_MAX_ITERATIONS {
        iterations += 1;
        let best = simplex[0];
        let worst = simplex[3];
        spread = if best.f.is_finite() && worst.f.is_finite() {
            best.f - worst.f
        } else {
            f64::INFINITY
        };
        let param_spread = simplex[1..]
            .iter()
            .flat_map(|v| (0..3).map(move |i| (v.x[i] - best.x[i]).abs()))
            .fold(0.0f64, f64::max);
        if spread < NM_OBJECTIVE_SPREAD && param_spread < NM_PARAM_SPREAD {
            converged = true;
            break;
        }

        let centroid = {
            let mut c = [0.0; 3];
            for v in &simplex[..3] {
                for (ci, xi) in c.iter_mut().zip(v.x) {
                    *ci += xi / 3.0;
                }
            }
            c
        };
        let shifted = |alpha: f64| {
            let mut x = [0.0; 3];
            for i in 0..3 {
                x[i] = centroid[i] + alpha * (centroid[i] - worst.x[i]);
            }
            x
        };

        let xr = shifted(1.0);
        let fr = obj(&xr);
        if fr > simplex[0].f {
            // try expanding
            let xe = shifted(2.0);
            let fe = obj(&xe);
            simplex[3] = if fe > fr {
                Vertex { x: xe, f: fe }
            } else {
                Vertex { x: xr, f: fr }
            };
        } else if fr > simplex[2].f {
            simplex[3] = Vertex { x: xr, f: fr };
        } else {
            // contract (outside if the reflection helped at all)
            let xc = if fr > worst.f { shifted(0.5) } else { shifted(-0.5) };
            let fc = obj(&xc);
            if fc > worst.f.max(fr) {
                simplex[3] = Vertex { x: xc, f: fc };
            } else {
                // shrink toward the best vertex
                for v in simplex.iter_mut().skip(1) {
                    for i in 0..3 {
                        v.x[i] = best.x[i] + 0.5 * (v.x[i] - best.x[i]);
                    }
                    v.f = obj(&v.x);
                }
            }
        }
        order(&mut simplex);
    }
    NmOutcome { best: simplex[0], iterations, converged, spread }
}

/// Halve the shape toward zero until every sample sits inside the support
/// (ξ = 0 always qualifies).
fn feasible_start(mut p: GevParams, s: &SampleSet) -> GevParams {
    for _ in 0..64 {
        let all_in = s.values().iter().all(|&x| p.supports(x));
        if all_in {
            return p;
        }
        p.shape *= 0.5;
        if p.shape.abs() < 1e-12 {
            p.shape = 0.0;
            return p;
        }
    }
    p
}

/// GEV MLE by simplex search in (ξ, ln a, b), two starting points, best
/// solution kept. Support violations score −∞ so the simplex contracts
/// away from infeasible regions.
pub fn fit_gev_mle(s: &SampleSet) -> Result<FitReport, FitError> {
    let xs = s.values();
    if xs.len() < 50 {
        return Err(FitError::TooFewSamples { needed: 50, got: xs.len() });
    }
    let first = xs[0];
    if xs.iter().all(|&x| x == first) {
        return Err(FitError::DegenerateData);
    }

    let objective = |x: &[f64; 3]| -> f64 {
        let p = vertex_params(x);
        gev_loglik(&p, s).unwrap_or(f64::NEG_INFINITY)
    };

    let lm = feasible_start(l_moments_init(s)?, s);
    let mut starts: Vec<GevParams> = vec![lm];
    if let Ok(gum) = fit_gumbel_mle(s) {
        if let EvdParams::Gumbel { location, scale } = gum.params {
            let nudge = if lm.shape >= 0.0 { 0.05 } else { -0.05 };
            starts.push(feasible_start(
                GevParams { shape: nudge, location, scale },
                s,
            ));
        }
    }

    let mut best: Option<NmOutcome> = None;
    let mut total_iterations = 0;
    let mut start_logliks = Vec::new();
    for p in &starts {
        let start = [p.shape, p.scale.ln(), p.location];
        start_logliks.push(objective(&start));
        let out = nelder_mead(start, [0.02, 0.05, 0.05 * p.scale.max(0.1)], &objective);
        total_iterations += out.iterations;
        let replace = match &best {
            None => true,
            Some(b) => out.best.f > b.best.f,
        };
        if replace {
            best = Some(out);
        }
    }
    let out = best.expect("at least one start");
    let params = vertex_params(&out.best.x);
    let report = FitReport {
        params: params.into(),
        loglik: out.best.f,
        iterations: total_iterations,
        converged: out.converged,
        residual: out.spread,
    };
    if !out.converged {
        return Err(FitError::Convergence { report: Box::new(report) });
    }
    debug_assert!(start_logliks.iter().all(|&l0| report.loglik >= l0));
    Ok(report)
}
