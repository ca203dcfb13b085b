//! Best transmit SNR for each capacity at the worst-case gamma of the
//! satellite scenarios.
//!
//! ```text
//! cargo run --release -p tw-secrecy --example optimize_snr
//! ```

use tw_secrecy::capacity::CapacityKind;
use tw_secrecy::optimize::{optimize_eta, OptimizeOptions};

fn main() -> tw_secrecy::Result<()> {
    let opts = OptimizeOptions::default();
    let gammas = [
        ("7.2", 7.2),
        ("240", 240.0),
        ("36000", 36000.0),
        ("9/4", 2.25),
        ("18/17", 18.0 / 17.0),
    ];
    println!("{:>8} {:>8} {:>14} {:>14} flag", "gamma", "kind", "eta*", "C*");
    for (label, gamma) in gammas {
        for kind in CapacityKind::ALL {
            let o = optimize_eta(kind, gamma, &opts)?;
            println!(
                "{label:>8} {:>8} {:>14.6e} {:>14.6e} {}",
                kind.as_str(),
                o.eta_star,
                o.capacity_star,
                o.flag.as_str()
            );
        }
    }
    Ok(())
}
