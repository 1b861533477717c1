//! Outage probability and ergodic capacity of single-antenna fluid antenna
//! systems (FAS) under fully correlated Rayleigh fading, evaluated by
//! fitting extreme value distributions to the channel maximum.
//!
//! A fluid antenna exposes N ports evenly spaced along W wavelengths and
//! activates the port with the strongest instantaneous envelope, so the
//! effective channel is the maximum of N correlated Rayleigh envelopes —
//! an extreme value. This crate implements the full evaluation pipeline:
//!
//! * [`correlation`] — Jake's-model spatial correlation matrix
//!   J0(2πW|i−j|/(N−1)) and its clamped eigendecomposition;
//! * [`chansim`] — seeded Monte Carlo sampling of h = U Λ^{1/2} z and the
//!   block-maxima statistics of |h_FAS| = max_i |h_i|;
//! * [`evd`] — Gumbel and GEV laws (CDF/PDF/quantile/mean/log-likelihood),
//!   the iid-Rayleigh normalizers, and the von Mises diagnostic;
//! * [`fit`] — maximum-likelihood estimation: profiled Newton for Gumbel,
//!   L-moments-seeded Nelder–Mead for GEV;
//! * [`surrogate`] — cubic polynomials in (N, W) that replace per-geometry
//!   fitting inside their validity box;
//! * [`perf`] — closed-form OP/EC, the iid baseline, and the log/absolute
//!   error and Q-Q diagnostics;
//! * [`specfun`] — the J0 and ln Γ kernels with tight accuracy contracts;
//! * [`cli`] — the `fas-evt` command-line front end.
//!
//! Start with the `examples/` directory: each file is a runnable walk
//! through one capability (simulation, fitting, surrogate lookup,
//! performance sweeps, Monte Carlo comparison, Q-Q diagnostics, and the
//! iid baseline).
//!
//! Everything stochastic is seeded; identical inputs reproduce identical
//! bytes. All SNR quantities inside the library are linear — dB conversion
//! happens once, at the CLI boundary.

pub mod chansim;
pub mod cli;
pub mod correlation;
pub mod evd;
pub mod fit;
mod numeric;
pub mod perf;
pub mod specfun;
pub mod surrogate;

pub use chansim::{
    empirical_cdf, empirical_quantiles, fas_gain, mc_capacity, mc_outage,
    run_monte_carlo, SampleMeta, SampleSet,
};
pub use correlation::{
    build_jakes_matrix, eigen_decompose, CorrelationMatrix, EigenFactor, SystemConfig,
};
pub use evd::{
    iid_rayleigh_normalizers, EvdParams, GevParams, GumbelParams, IidBaseline,
    MeanValue, EULER_GAMMA,
};
pub use fit::{fit_gev_mle, fit_gumbel_mle, l_moments_init, FitReport};
pub use perf::{
    abs_error, ec_gev, ec_gumbel, iid_perf, log_error, op_gev, op_gumbel, qq_points,
    PerfPoint, PerfSource,
};
pub use surrogate::{
    gev_params_surrogate, gumbel_params_surrogate, validity_check, RangePolicy,
};
