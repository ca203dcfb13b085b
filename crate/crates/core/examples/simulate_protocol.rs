//! Monte Carlo estimate of the two-way secrecy gap, compared with the
//! closed-form capacities.
//!
//! ```text
//! cargo run --release -p tw-secrecy --example simulate_protocol
//! ```

use tw_secrecy::capacity::EveMode;
use tw_secrecy::{c_tw_hard, c_tw_soft, estimate_stats, run_rounds, GammaConvention, ProtocolConfig, QuadratureSpec};

fn main() -> tw_secrecy::Result<()> {
    let params = GammaConvention::SnrRatio.params(1.0, 2.0)?;
    for mode in [EveMode::Hard, EveMode::Soft] {
        let cfg = ProtocolConfig {
            eve_mode: mode,
            rng_seed: 2024,
            ..ProtocolConfig::new(1000, params)
        };
        let ens = run_rounds(&cfg, 1000)?;
        let s = estimate_stats(&ens)?;
        let exact = match mode {
            EveMode::Hard => c_tw_hard(&params)?.value,
            EveMode::Soft => c_tw_soft(&params, &QuadratureSpec::default())?.value,
        };
        println!("{mode:?} eavesdropper, {} symbols", s.sample_count);
        println!("  eps_A  = {:.5} +- {:.5}", s.eps_a_hat, s.std_err.eps_a);
        println!("  I(A;B) = {:.5} +- {:.5}", s.mi_ab_hat, s.std_err.mi_ab);
        println!("  I_E    = {:.5} +- {:.5}", s.mi_ae_hat, s.std_err.mi_ae);
        println!("  gap    = {:.5}   capacity = {exact:.5}", s.secrecy_gap());
    }
    Ok(())
}
