//! Worst-case gamma and optimised capacities for the built-in satellite
//! scenarios, plus one scenario read from text.
//!
//! ```text
//! cargo run --release -p tw-secrecy --example satellite_scenarios
//! ```

use tw_secrecy::satgeo::{parse_scenarios, scenario_table, GridSpec};
use tw_secrecy::{OptimizeOptions, ScenarioPreset};

const CUSTOM: &str = "
# ground station to a MEO relay, eavesdropper up to 2 deg off axis
name = custom_meo
rho_l_km = 20000
rho_e_min_km = 10000
rho_e_max_km = 15000
theta_max_deg = 2
";

fn main() -> tw_secrecy::Result<()> {
    let mut scenarios: Vec<_> = ScenarioPreset::ALL.iter().map(|p| p.scenario()).collect();
    scenarios.extend(parse_scenarios(CUSTOM)?);
    let rows = scenario_table(&scenarios, &GridSpec::default(), &OptimizeOptions::default())?;
    println!(
        "{:>10} {:>12} {:>10} {:>12} {:>12} {:>12}",
        "scenario", "gamma_max", "rho_E/km", "C_tw_soft", "C_tw_hard", "C_ow_soft"
    );
    for r in rows {
        println!(
            "{:>10} {:>12.6} {:>10.1} {:>12.4e} {:>12.4e} {:>12.4e}",
            r.name,
            r.worst_case.gamma_max,
            r.worst_case.rho_e,
            r.tw_soft.capacity_star,
            r.tw_hard.capacity_star,
            r.ow_soft.capacity_star
        );
    }
    Ok(())
}
