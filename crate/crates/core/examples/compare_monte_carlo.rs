//! Monte Carlo vs closed forms, with the error metrics.
//!
//! Simulates one geometry, then tabulates simulated and closed-form OP/EC
//! across SNR together with the OP log-error (floored at one pseudo-count)
//! and the EC absolute error. The GEV column wins in the low-OP tail.
//!
//! ```bash
//! cargo run --example compare_monte_carlo
//! ```

use fas_evt::perf::{log_error, AbsError};
use fas_evt::{
    abs_error, ec_gev, ec_gumbel, gev_params_surrogate, gumbel_params_surrogate,
    mc_capacity, mc_outage, op_gev, op_gumbel, run_monte_carlo, MeanValue, RangePolicy,
    SystemConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, w) = (20, 1.0);
    let samples = 400_000;
    let config = SystemConfig::unit_power(n, w)?;
    let set = run_monte_carlo(&config, samples, 11)?;
    let gumbel = gumbel_params_surrogate(n, w, RangePolicy::Enforce)?;
    let gev = gev_params_surrogate(n, w, RangePolicy::Enforce)?;
    let threshold_db = 10.0;
    let gamma_th = 10f64.powf(threshold_db / 10.0);
    let floor = 1.0 / samples as f64;

    println!("N={n} W={w} gamma_th=10dB M={samples}");
    println!(
        "{:>6} {:>11} {:>11} {:>11} {:>8} {:>8} {:>9} {:>9}",
        "snr_dB", "mc_op", "gumbel_op", "gev_op", "logE_gum", "logE_gev", "ecErr_gum",
        "ecErr_gev"
    );
    for snr_db in (0..=20).step_by(2) {
        let snr = 10f64.powf(snr_db as f64 / 10.0);
        let sim_op = mc_outage(&set, (gamma_th / snr).sqrt());
        let sim_ec = mc_capacity(&set, snr);
        let g_op = op_gumbel(&gumbel, gamma_th, snr);
        let v_op = op_gev(&gev, gamma_th, snr);
        let le_g = log_error(sim_op, g_op, floor);
        let le_v = log_error(sim_op, v_op, floor);
        let ae_g = abs_error(
            MeanValue::Finite(sim_ec),
            MeanValue::Finite(ec_gumbel(&gumbel, snr)),
        );
        let ae_v = abs_error(MeanValue::Finite(sim_ec), ec_gev(&gev, snr));
        let fin = |e: AbsError| e.finite().unwrap();
        println!(
            "{snr_db:>6} {sim_op:>11.3e} {g_op:>11.3e} {v_op:>11.3e} {:>8.4} {:>8.4} \
             {:>9.4} {:>9.4}{}",
            le_g.value,
            le_v.value,
            fin(ae_g),
            fin(ae_v),
            if le_g.floored || le_v.floored { "  (floored)" } else { "" }
        );
    }
    Ok(())
}
