//! Normalised antenna gain across the main lobe and first side lobes.
//!
//! ```text
//! cargo run --release -p tw-secrecy --example antenna_pattern
//! ```

use tw_secrecy::AntennaPattern;

fn main() -> tw_secrecy::Result<()> {
    let pattern = AntennaPattern::from_degrees(1.0)?;
    println!("theta_3dB = 1 deg, k = {:.4}", pattern.k());
    println!("{:>10} {:>14}", "theta/deg", "alpha");
    for i in 0..=32 {
        let deg = 0.125 * i as f64;
        println!("{deg:>10.3} {:>14.6e}", pattern.alpha(deg.to_radians())?);
    }
    Ok(())
}
