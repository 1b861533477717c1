//! Seeded Monte Carlo generation of correlated Rayleigh channel vectors and
//! the block-maxima statistics of the selected (maximum-envelope) port.
//!
//! Each experiment draws z ~ CN(0, I) and colors it as h = U Λ^{1/2} z, so
//! h ~ CN(0, J); the recorded realization is |h_FAS| = max_i |h_i|. The
//! stream is fully deterministic: experiment m uses the ChaCha8 substream
//! (seed, stream = m), so identical (config, n_samples, seed) reproduce the
//! sample set bit for bit, in any execution order.

use crate::correlation::{build_jakes_matrix, eigen_decompose, EigenFactor, SystemConfig};
use crate::numeric::{compensated_sum, fmt_g17};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChanSimError {
    #[error("channel vector must be nonempty")]
    EmptyChannel,
    #[error("sample set must be nonempty")]
    EmptySampleSet,
    #[error("sample values must be positive, found {0}")]
    NonPositiveSample(f64),
    #[error("quantile probability must lie in (0,1), got {0}")]
    BadProbability(f64),
    #[error("correlation model: {0}")]
    Correlation(#[from] crate::correlation::CorrelationError),
    #[error("configuration: {0}")]
    Config(#[from] crate::correlation::ConfigError),
    #[error("sample CSV: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Complex channel vector as paired real arrays (no complex type needed:
/// U is real, so the coloring applies to the parts independently).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ChannelVector {
    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    /// |h_i|. Written as sqrt(re²+im²) rather than hypot so that taking the
    /// max of envelopes and the envelope of the max-squared agree bitwise
    /// (correctly rounded sqrt is monotone).
    pub fn envelope(&self, i: usize) -> f64 {
        (self.re[i] * self.re[i] + self.im[i] * self.im[i]).sqrt()
    }
}

/// Provenance of a Monte Carlo sample set.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SampleMeta {
    pub n_ports: usize,
    pub aperture_w: f64,
    pub rayleigh_scale: f64,
    pub seed: u64,
}

/// Realizations of the FAS channel maximum |h_FAS|.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
    meta: SampleMeta,
}

impl SampleSet {
    /// Validating constructor: values must be nonempty and positive.
    pub fn from_values(values: Vec<f64>, meta: SampleMeta) -> Result<Self, ChanSimError> {
        if values.is_empty() {
            return Err(ChanSimError::EmptySampleSet);
        }
        // NaN must fail alongside non-positive values, hence the negation
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if let Some(&bad) = values.iter().find(|v| !(**v > 0.0)) {
            return Err(ChanSimError::NonPositiveSample(bad));
        }
        Ok(Self { values, meta })
    }

    /// Bypasses validation; test fixtures only.
    #[cfg(test)]
    pub(crate) fn synthetic(values: Vec<f64>, meta: SampleMeta) -> Self {
        Self { values, meta }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_samples(&self) -> usize {
        self.values.len()
    }

    pub fn meta(&self) -> &SampleMeta {
        &self.meta
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.values.iter().copied()) / self.values.len() as f64
    }

    /// One `#`-prefixed header line carrying
    /// `n_ports,aperture_w,rayleigh_scale,seed,n_samples`, then one
    /// `%.17g` value per line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), ChanSimError> {
        writeln!(
            w,
            "# {},{},{},{},{}",
            self.meta.n_ports,
            fmt_g17(self.meta.aperture_w),
            fmt_g17(self.meta.rayleigh_scale),
            self.meta.seed,
            self.values.len()
        )?;
        for v in &self.values {
            writeln!(w, "{}", fmt_g17(*v))?;
        }
        Ok(())
    }

    pub fn write_csv_path(&self, path: &std::path::Path) -> Result<(), ChanSimError> {
        let file = std::fs::File::create(path)?;
        let mut buf = std::io::BufWriter::new(file);
        self.write_csv(&mut buf)?;
        buf.flush()?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self, ChanSimError> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| ChanSimError::Format("empty file".into()))??;
        let header = header
            .strip_prefix('#')
            .ok_or_else(|| ChanSimError::Format("missing '#' header line".into()))?
            .trim();
        let fields: Vec<&str> = header.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(ChanSimError::Format(format!(
                "header needs 5 fields (n_ports,aperture_w,rayleigh_scale,seed,n_samples), got {}",
                fields.len()
            )));
        }
        let parse_err = |what: &str, s: &str| {
            ChanSimError::Format(format!("bad {what} in header: {s:?}"))
        };
        let n_ports: usize = fields[0].parse().map_err(|_| parse_err("n_ports", fields[0]))?;
        let aperture_w: f64 =
            fields[1].parse().map_err(|_| parse_err("aperture_w", fields[1]))?;
        let rayleigh_scale: f64 =
            fields[2].parse().map_err(|_| parse_err("rayleigh_scale", fields[2]))?;
        let seed: u64 = fields[3].parse().map_err(|_| parse_err("seed", fields[3]))?;
        let n_samples: usize =
            fields[4].parse().map_err(|_| parse_err("n_samples", fields[4]))?;

        let mut values = Vec::with_capacity(n_samples);
        for line in lines {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let v: f64 = t
                .parse()
                .map_err(|_| ChanSimError::Format(format!("bad sample value {t:?}")))?;
            values.push(v);
        }
        if values.len() != n_samples {
            return Err(ChanSimError::Format(format!(
                "header promises {n_samples} samples, file holds {}",
                values.len()
            )));
        }
        Self::from_values(values, SampleMeta { n_ports, aperture_w, rayleigh_scale, seed })
    }

    pub fn read_csv_path(path: &std::path::Path) -> Result<Self, ChanSimError> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(file))
    }
}

// ---------------------------------------------------------------------------
// Random draws
// ---------------------------------------------------------------------------

/// Uniform in [0, 1) from the top 53 bits of the stream.
#[inline]
fn unit_uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Marsaglia polar method; returns two independent standard normals.
#[inline]
fn standard_normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let v1 = 2.0 * unit_uniform(rng) - 1.0;
        let v2 = 2.0 * unit_uniform(rng) - 1.0;
        let s = v1 * v1 + v2 * v2;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (v1 * f, v2 * f);
        }
    }
}

/// ChaCha8 substream for one experiment: (seed, stream = index).
#[inline]
fn experiment_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Core sampler: colors one CN(0, σ²·2·J)-distributed vector through the
/// eigenfactor, with per-component standard deviation `component_std`
/// (σ = 1/√2 gives unit-variance CN(0, J) entries).
#[allow(clippy::too_many_arguments)]
fn sample_colored(
    factor: &EigenFactor,
    component_std: f64,
    rng: &mut ChaCha8Rng,
    re: &mut [f64],
    im: &mut [f64],
    w_re: &mut [f64],
    w_im: &mut [f64],
    sqrt_lambda: &[f64],
) {
    let n = factor.size();
    for j in 0..n {
        let (zr, zi) = standard_normal_pair(rng);
        w_re[j] = sqrt_lambda[j] * component_std * zr;
        w_im[j] = sqrt_lambda[j] * component_std * zi;
    }
    for i in 0..n {
        let row = &factor.eigenvectors[i * n..(i + 1) * n];
        let mut sr = 0.0;
        let mut si = 0.0;
        for ((&u, &wr), &wi) in row.iter().zip(w_re.iter()).zip(w_im.iter()) {
            sr += u * wr;
            si += u * wi;
        }
        re[i] = sr;
        im[i] = si;
    }
}

/// One correlated channel vector h = U Λ^{1/2} z with z ~ CN(0, I): entries
/// are unit-variance circularly symmetric Gaussians, so each |h_i| is
/// Rayleigh with scale 1/√2.
pub fn sample_channels(factor: &EigenFactor, rng: &mut ChaCha8Rng) -> ChannelVector {
    let n = factor.size();
    let sqrt_lambda: Vec<f64> = factor.eigenvalues.iter().map(|l| l.sqrt()).collect();
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    let mut w_re = vec![0.0; n];
    let mut w_im = vec![0.0; n];
    sample_colored(
        factor,
        std::f64::consts::FRAC_1_SQRT_2,
        rng,
        &mut re,
        &mut im,
        &mut w_re,
        &mut w_im,
        &sqrt_lambda,
    );
    ChannelVector { re, im }
}

/// FAS port selection: the maximum channel envelope max_i |h_i|.
pub fn fas_gain(h: &ChannelVector) -> Result<f64, ChanSimError> {
    if h.is_empty() {
        return Err(ChanSimError::EmptyChannel);
    }
    let mut best = 0.0f64;
    for i in 0..h.len() {
        best = best.max(h.envelope(i));
    }
    Ok(best)
}

/// Runs `n_samples` independent experiments: one Jake's matrix build and
/// eigendecomposition, then per-experiment channel draws and max-envelope
/// extraction. Deterministic under a fixed seed.
pub fn run_monte_carlo(
    config: &SystemConfig,
    n_samples: usize,
    seed: u64,
) -> Result<SampleSet, ChanSimError> {
    if n_samples == 0 {
        return Err(ChanSimError::EmptySampleSet);
    }
    let j = build_jakes_matrix(config)?;
    let factor = eigen_decompose(&j)?;
    let n = factor.size();
    let sqrt_lambda: Vec<f64> = factor.eigenvalues.iter().map(|l| l.sqrt()).collect();

    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    let mut w_re = vec![0.0; n];
    let mut w_im = vec![0.0; n];
    let mut values = Vec::with_capacity(n_samples);
    for m in 0..n_samples {
        let mut rng = experiment_rng(seed, m as u64);
        sample_colored(
            &factor,
            config.rayleigh_scale,
            &mut rng,
            &mut re,
            &mut im,
            &mut w_re,
            &mut w_im,
            &sqrt_lambda,
        );
        let mut best_sq = 0.0f64;
        for i in 0..n {
            best_sq = best_sq.max(re[i] * re[i] + im[i] * im[i]);
        }
        values.push(best_sq.sqrt());
    }
    SampleSet::from_values(
        values,
        SampleMeta {
            n_ports: config.n_ports,
            aperture_w: config.aperture_w,
            rayleigh_scale: config.rayleigh_scale,
            seed,
        },
    )
}

// ---------------------------------------------------------------------------
// Empirical statistics
// ---------------------------------------------------------------------------

/// Empirical CDF: (# values ≤ x) / M.
pub fn empirical_cdf(s: &SampleSet, x: f64) -> f64 {
    let count = s.values.iter().filter(|v| **v <= x).count();
    count as f64 / s.values.len() as f64
}

/// Order-statistics quantiles at Hazen plotting positions p_i = (i−0.5)/M
/// with linear interpolation between adjacent order statistics (clamped to
/// the extreme order statistics beyond the outermost positions).
pub fn empirical_quantiles(s: &SampleSet, probs: &[f64]) -> Result<Vec<f64>, ChanSimError> {
    for &p in probs {
        if !(p > 0.0 && p < 1.0) {
            return Err(ChanSimError::BadProbability(p));
        }
    }
    let mut sorted = s.values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let m = sorted.len() as f64;
    Ok(probs
        .iter()
        .map(|&p| {
            let pos = p * m + 0.5; // 1-based fractional order statistic
            if pos <= 1.0 {
                sorted[0]
            } else if pos >= m {
                sorted[sorted.len() - 1]
            } else {
                let lo = pos.floor() as usize; // 1-based
                let frac = pos - lo as f64;
                sorted[lo - 1] * (1.0 - frac) + sorted[lo] * frac
            }
        })
        .collect())
}

/// Simulated outage probability: the empirical CDF at the envelope
/// threshold γ̂.
pub fn mc_outage(s: &SampleSet, gamma_hat: f64) -> f64 {
    debug_assert!(gamma_hat > 0.0);
    empirical_cdf(s, gamma_hat)
}

/// Simulated ergodic capacity (nats per channel use):
/// (1/M) Σ ln(1 + v_i² γ̄).
pub fn mc_capacity(s: &SampleSet, avg_snr: f64) -> f64 {
    debug_assert!(avg_snr > 0.0);
    compensated_sum(s.values.iter().map(|v| (v * v * avg_snr).ln_1p()))
        / s.values.len() as f64
}
