//! Polynomial surrogate parameters without any simulation.
//!
//! Looks up Gumbel and GEV parameters for several geometries, shows the
//! validity-range policy in action, and exports the coefficient table as
//! machine-readable JSON.
//!
//! ```bash
//! cargo run --example surrogate_lookup
//! ```

use fas_evt::surrogate::{self, RangePolicy};
use fas_evt::{gev_params_surrogate, gumbel_params_surrogate, validity_check};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("geometry          gumbel (b, a)        gev (xi, b, a)");
    for (n, w) in [(10usize, 0.5), (11, 0.5), (20, 1.0), (20, 5.0), (50, 5.0)] {
        let g = gumbel_params_surrogate(n, w, RangePolicy::Enforce)?;
        let v = gev_params_surrogate(n, w, RangePolicy::Enforce)?;
        println!(
            "N={n:<3} W={w:<4}   ({:.4}, {:.4})     ({:+.4}, {:.4}, {:.4})",
            g.location, g.scale, v.shape, v.location, v.scale
        );
    }

    // outside the fitted box the lookup refuses unless overridden
    println!();
    match validity_check(2, 5.0) {
        Ok(()) => unreachable!("rho = 5 is far out of range"),
        Err(e) => println!("N=2, W=5 refused: {e}"),
    }
    let forced = gumbel_params_surrogate(2, 5.0, RangePolicy::Override)?;
    println!(
        "override evaluates anyway (b={:.4}, a={:.4}) - extrapolation, use with care",
        forced.location, forced.scale
    );

    let path = std::env::temp_dir().join("surrogate_coefficients.json");
    surrogate::write_coefficients_json(&path)?;
    println!("\ncoefficient table exported to {}", path.display());
    Ok(())
}
