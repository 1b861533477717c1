//! The iid-Rayleigh baseline and its Gumbel limit.
//!
//! The maximum of N independent Rayleigh(σ) envelopes converges in
//! distribution to Gumbel(b̂_N, â_N) with â_N = σ/√(2 ln N) and
//! b̂_N = σ√(2 ln N). This example measures the KS distance of simulated
//! maxima to that law as N grows, and evaluates the baseline's OP/EC —
//! the zero-cost reference a correlated FAS approaches as W widens.
//!
//! ```bash
//! cargo run --example iid_baseline
//! ```

use fas_evt::evd::{gumbel_cdf, von_mises_check};
use fas_evt::{iid_perf, iid_rayleigh_normalizers};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sigma = std::f64::consts::FRAC_1_SQRT_2;

    // the von Mises condition puts the Rayleigh law in the Gumbel domain
    // of attraction: d/dx[(1-F)/f] -> 0 toward the upper endpoint
    let cdf = move |x: f64| 1.0 - (-x * x / (2.0 * sigma * sigma)).exp();
    let pdf = move |x: f64| x / (sigma * sigma) * (-x * x / (2.0 * sigma * sigma)).exp();
    println!("von Mises derivative of (1-F)/f for Rayleigh(1/sqrt2):");
    for x in [2.0, 3.0, 4.0] {
        println!("  x={x}: {:+.5}", von_mises_check(cdf, pdf, x, None)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let m = 50_000;
    println!("\nKS distance of {m} simulated maxima to Gumbel(b_hat, a_hat):");
    for n in [100usize, 1_000, 10_000] {
        let mut maxima: Vec<f64> = (0..m)
            .map(|_| {
                let mut best = 0.0f64;
                for _ in 0..n {
                    let u = ((rng.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64);
                    best = best.max(sigma * (-2.0 * (1.0 - u).ln()).sqrt());
                }
                best
            })
            .collect();
        maxima.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let base = iid_rayleigh_normalizers(n, sigma)?;
        let g = base.as_gumbel();
        let ks = maxima
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = gumbel_cdf(&g, x);
                (f - i as f64 / m as f64).abs().max(((i + 1) as f64 / m as f64 - f).abs())
            })
            .fold(0.0f64, f64::max);
        println!("  N={n:>6}: KS = {ks:.4}  (a_hat={:.4}, b_hat={:.4})", base.a_hat, base.b_hat);
    }

    let base = iid_rayleigh_normalizers(100, sigma)?;
    let threshold_db = 10.0;
    let gamma_th = 10f64.powf(threshold_db / 10.0);
    println!("\niid-baseline performance at N=100, gamma_th = 10 dB:");
    println!("{:>6} {:>12} {:>10}", "snr_dB", "outage", "ec_nats");
    for snr_db in (0..=20).step_by(4) {
        let p = iid_perf(&base, gamma_th, 10f64.powf(snr_db as f64 / 10.0));
        println!(
            "{snr_db:>6} {:>12.4e} {:>10.4}",
            p.outage,
            p.capacity.finite().unwrap()
        );
    }
    Ok(())
}
