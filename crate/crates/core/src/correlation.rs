//! Spatial correlation model of the fluid antenna: the Jake's-model
//! correlation matrix over the port grid and its eigendecomposition,
//! which feeds the correlated channel sampler.
//!
//! N ports are evenly spaced on a line of length W wavelengths, so ports
//! n̄ and ñ sit |n̄−ñ|·W/(N−1) wavelengths apart and their channel
//! coefficients correlate as J0(2π·d). The matrix is symmetric Toeplitz
//! with unit diagonal; its (clamped) eigendecomposition J = U Λ Uᵀ gives
//! the coloring transform U Λ^{1/2} used for sampling.

use crate::numeric::fmt_g17;
use crate::specfun::j0_unchecked;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("n_ports must be at least 2 (port spacing W/(N-1) undefined), got {0}")]
    TooFewPorts(usize),
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum CorrelationError {
    #[error("correlation matrix must be square, got {len} entries for size {size}")]
    BadShape { len: usize, size: usize },
    #[error("correlation matrix entry ({i},{j}) = {value} violates {rule}")]
    BadEntry { i: usize, j: usize, value: f64, rule: &'static str },
    #[error(
        "eigensolver did not converge within {sweeps} sweeps \
         (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("eigenvalue {0:e} below the -1e-8 clamping window; matrix is not PSD")]
    NegativeEigenvalue(f64),
}

/// FAS geometry and link budget. All SNR quantities are linear; dB→linear
/// conversion happens once at the CLI boundary. Distances are in carrier
/// wavelengths, so the wavelength itself never appears.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SystemConfig {
    /// Number of antenna ports N (≥ 2).
    pub n_ports: usize,
    /// Antenna size W in wavelengths.
    pub aperture_w: f64,
    /// Rayleigh scale σ of each port envelope; 1/√2 gives unit-power ports.
    pub rayleigh_scale: f64,
    /// Average transmit SNR γ̄ (linear).
    pub avg_snr: f64,
    /// Decoding SNR threshold γ_th (linear).
    pub snr_threshold: f64,
}

impl SystemConfig {
    pub fn new(
        n_ports: usize,
        aperture_w: f64,
        rayleigh_scale: f64,
        avg_snr: f64,
        snr_threshold: f64,
    ) -> Result<Self, ConfigError> {
        if n_ports < 2 {
            return Err(ConfigError::TooFewPorts(n_ports));
        }
        for (name, value) in [
            ("aperture_w", aperture_w),
            ("rayleigh_scale", rayleigh_scale),
            ("avg_snr", avg_snr),
            ("snr_threshold", snr_threshold),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConfigError::NonPositive { name, value });
            }
        }
        Ok(Self { n_ports, aperture_w, rayleigh_scale, avg_snr, snr_threshold })
    }

    /// Unit-power configuration (σ = 1/√2) with only the geometry varying.
    pub fn unit_power(n_ports: usize, aperture_w: f64) -> Result<Self, ConfigError> {
        Self::new(n_ports, aperture_w, std::f64::consts::FRAC_1_SQRT_2, 1.0, 1.0)
    }

    /// Envelope outage threshold γ̂ = sqrt(γ_th / γ̄).
    pub fn envelope_threshold(&self) -> f64 {
        (self.snr_threshold / self.avg_snr).sqrt()
    }

    /// Adjacent-port spacing in wavelengths, W/(N−1).
    pub fn port_spacing(&self) -> f64 {
        self.aperture_w / (self.n_ports - 1) as f64
    }
}

/// Symmetric Toeplitz correlation matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    size: usize,
    entries: Vec<f64>, // row-major
}

impl CorrelationMatrix {
    /// Validating constructor; enforces symmetry, the Toeplitz structure,
    /// unit diagonal, and the J0 range [-0.403, 1].
    pub fn from_entries(size: usize, entries: Vec<f64>) -> Result<Self, CorrelationError> {
        if entries.len() != size * size {
            return Err(CorrelationError::BadShape { len: entries.len(), size });
        }
        let m = Self { size, entries };
        for i in 0..size {
            if m.entry(i, i) != 1.0 {
                return Err(CorrelationError::BadEntry {
                    i,
                    j: i,
                    value: m.entry(i, i),
                    rule: "unit diagonal",
                });
            }
            for j in 0..size {
                let v = m.entry(i, j);
                if !(-0.403..=1.0).contains(&v) {
                    return Err(CorrelationError::BadEntry {
                        i,
                        j,
                        value: v,
                        rule: "J0 range [-0.403, 1]",
                    });
                }
                if v != m.entry(j, i) {
                    return Err(CorrelationError::BadEntry {
                        i,
                        j,
                        value: v,
                        rule: "symmetry",
                    });
                }
                if i + 1 < size && j + 1 < size && v != m.entry(i + 1, j + 1) {
                    return Err(CorrelationError::BadEntry {
                        i,
                        j,
                        value: v,
                        rule: "Toeplitz structure",
                    });
                }
            }
        }
        Ok(m)
    }

    pub fn identity(size: usize) -> Self {
        let mut entries = vec![0.0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1.0;
        }
        Self { size, entries }
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Row-major CSV dump at full `%.17g` precision, for debugging.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.size {
            let row: Vec<String> =
                (0..self.size).map(|j| fmt_g17(self.entry(i, j))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Jake's-model correlation matrix: entry (n̄, ñ) = J0(2πW|n̄−ñ|/(N−1)).
pub fn build_jakes_matrix(config: &SystemConfig) -> Result<CorrelationMatrix, ConfigError> {
    if config.n_ports < 2 {
        return Err(ConfigError::TooFewPorts(config.n_ports));
    }
    let n = config.n_ports;
    let spacing = config.port_spacing();
    // Toeplitz: one J0 evaluation per lag.
    let lags: Vec<f64> = (0..n)
        .map(|lag| {
            if lag == 0 {
                1.0
            } else {
                j0_unchecked(2.0 * std::f64::consts::PI * spacing * lag as f64)
            }
        })
        .collect();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] = lags[i.abs_diff(j)];
        }
    }
    Ok(CorrelationMatrix { size: n, entries })
}

/// Eigendecomposition J = U Λ Uᵀ with eigenvalues sorted descending and
/// tiny negative rounding artifacts clamped to zero.
#[derive(Debug, Clone)]
pub struct EigenFactor {
    /// Eigenvalues λ_1 ≥ … ≥ λ_N ≥ 0 (after clamping).
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvector matrix U, row-major; column j pairs with λ_j.
    pub eigenvectors: Vec<f64>,
    /// How many eigenvalues in (-1e-8, 0) were clamped to 0.
    pub clamp_count: usize,
    size: usize,
}

impl EigenFactor {
    #[inline]
    pub fn u(&self, i: usize, j: usize) -> f64 {
        self.eigenvectors[i * self.size + j]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Max-entry reconstruction error |U Λ Uᵀ − J|.
    pub fn reconstruction_error(&self, j: &CorrelationMatrix) -> f64 {
        let n = self.size;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let mut v = 0.0;
                for k in 0..n {
                    v += self.u(r, k) * self.eigenvalues[k] * self.u(c, k);
                }
                worst = worst.max((v - j.entry(r, c)).abs());
            }
        }
        worst
    }

    /// Max-entry deviation of UᵀU from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.size;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let mut dot = 0.0;
                for i in 0..n {
                    dot += self.u(i, a) * self.u(i, b);
                }
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Eigenvalues as CSV, one `%.17g` value per line.
    pub fn eigenvalues_csv(&self) -> String {
        let mut out = String::new();
        for v in &self.eigenvalues {
            out.push_str(&fmt_g17(*v));
            out.push('\n');
        }
        out
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;
const EIGEN_CLAMP_WINDOW: f64 = -1e-8;

/// Cyclic Jacobi rotations for the real symmetric correlation matrix.
/// Terminates when the off-diagonal Frobenius norm drops below
/// 1e-12·‖J‖_F; fails after 100 sweeps.
pub fn eigen_decompose(j: &CorrelationMatrix) -> Result<EigenFactor, CorrelationError> {
    let n = j.size;
    let mut a = j.entries.clone();
    let mut u = vec![0.0; n * n];
    for i in 0..n {
        u[i * n + i] = 1.0;
    }
    let target = 1e-12 * j.frobenius_norm();

    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&a) < target {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.abs() > 1e150 {
                    // rotation angle underflows; tan ≈ 1/(2θ)
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[i * n + p];
                        let aiq = a[i * n + q];
                        let new_ip = aip - s * (aiq + tau * aip);
                        let new_iq = aiq + s * (aip - tau * aiq);
                        a[i * n + p] = new_ip;
                        a[p * n + i] = new_ip;
                        a[i * n + q] = new_iq;
                        a[q * n + i] = new_iq;
                    }
                }
                for i in 0..n {
                    let uip = u[i * n + p];
                    let uiq = u[i * n + q];
                    u[i * n + p] = uip - s * (uiq + tau * uip);
                    u[i * n + q] = uiq + s * (uip - tau * uiq);
                }
            }
        }
    }
    if !converged && off_norm(&a) >= target {
        return Err(CorrelationError::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off_norm: off_norm(&a),
        });
    }

    // Sort descending, permuting eigenvector columns alongside.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    order.sort_by(|&x, &y| diag[y].partial_cmp(&diag[x]).expect("finite eigenvalues"));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = vec![0.0; n * n];
    let mut clamp_count = 0;
    for (new_col, &old_col) in order.iter().enumerate() {
        let mut lambda = diag[old_col];
        if lambda < 0.0 {
            if lambda > EIGEN_CLAMP_WINDOW {
                lambda = 0.0;
                clamp_count += 1;
            } else {
                return Err(CorrelationError::NegativeEigenvalue(lambda));
            }
        }
        eigenvalues.push(lambda);
        for i in 0..n {
            eigenvectors[i * n + new_col] = u[i * n + old_col];
        }
    }

    Ok(EigenFactor { eigenvalues, eigenvectors, clamp_count, size: n })
}
