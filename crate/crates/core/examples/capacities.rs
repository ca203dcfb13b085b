//! The four secrecy capacities at a few operating points.
//!
//! ```text
//! cargo run --release -p tw-secrecy --example capacities
//! ```

use tw_secrecy::{capacity, CapacityKind, GammaConvention, QuadratureSpec};

fn main() -> tw_secrecy::Result<()> {
    let quad = QuadratureSpec::default();
    let convention = GammaConvention::SnrRatio;
    println!(
        "{:>8} {:>8} {:>12} {:>12} {:>12} {:>12}",
        "gamma", "eta", "tw_soft", "tw_hard", "ow_soft", "ow_hard"
    );
    for (gamma, eta) in [(0.0, 1.6), (0.1, 2.0), (0.5, 2.0), (1.0, 2.0), (2.0, 0.5), (10.0, 0.05)] {
        let p = convention.params(gamma, eta)?;
        let mut line = format!("{gamma:>8} {eta:>8}");
        for kind in CapacityKind::ALL {
            let c = capacity(kind, &p, &quad)?;
            line += &format!(" {:>12.6e}", c.value);
        }
        println!("{line}");
    }
    Ok(())
}
