//! Toeplitz privacy amplification: key agreement on one block and the exact
//! leakage of the hashed key to a quantising eavesdropper.
//!
//! ```text
//! cargo run --release -p tw-secrecy --example privacy_amplification
//! ```

use tw_secrecy::protosim::{leakage_exhaustive, simulate_secret_key, LeakageOptions, ZQuantizer};
use tw_secrecy::{ChannelParams, ProtocolConfig};

fn main() -> tw_secrecy::Result<()> {
    let cfg = ProtocolConfig {
        rng_seed: 5,
        hash_seed: 17,
        hash_out_len: 128,
        ..ProtocolConfig::new(2048, ChannelParams::new(20.0, 0.05)?)
    };
    let key = simulate_secret_key(&cfg)?;
    println!("block of {} symbols hashed to {} bits", cfg.block_len, cfg.hash_out_len);
    println!("  raw agreement  {:.4}", key.raw_agreement_rate);
    println!("  key agreement  {:.4}", key.agreement_rate);
    println!(
        "  leakage proxy  {:.1} bits ({:?})",
        key.leakage_estimate, key.leakage_source
    );

    println!("\nexact leakage, n = 10, 4-level quantiser, gamma = 1, eta = 1");
    println!("{:>3} {:>12} {:>12}", "m", "I(K;Z)", "SD");
    for m in 0..=10 {
        let r = leakage_exhaustive(&LeakageOptions {
            block_len: 10,
            hash_out_len: m,
            params: ChannelParams::new(1.0, 1.0)?,
            quantizer: ZQuantizer { bins: 4 },
            hash_seed: 3,
        })?;
        println!("{m:>3} {:>12.6} {:>12.6}", r.mi_key_eve, r.sd_uniform);
    }
    Ok(())
}
