//! Gamma below which one-way soft decoding beats the two-way protocol,
//! at fixed SNRs and with both sides optimised over SNR.
//!
//! ```text
//! cargo run --release -p tw-secrecy --example crossing
//! ```

use tw_secrecy::optimize::{crossing_threshold_fixed_eta, crossing_threshold_optimized, OptimizeOptions};

fn main() -> tw_secrecy::Result<()> {
    let opts = OptimizeOptions::default();
    for eta in [0.1, 1.0, 10.0] {
        match crossing_threshold_fixed_eta(eta, &opts)? {
            Some(c) => println!("eta = {eta:>5}: gamma = {:.6} (residual {:.1e})", c.gamma, c.residual),
            None => println!("eta = {eta:>5}: no crossing in (0, 1)"),
        }
    }
    match crossing_threshold_optimized(&opts)? {
        Some(c) => println!("optimised:   gamma = {:.6} (residual {:.1e})", c.gamma, c.residual),
        None => println!("optimised:   no crossing in (0.1, 1)"),
    }
    Ok(())
}
