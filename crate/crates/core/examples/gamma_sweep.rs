//! Optimised capacities over a log-spaced gamma range, written as CSV to
//! standard output.
//!
//! ```text
//! cargo run --release -p tw-secrecy --example gamma_sweep > sweep.csv
//! ```

use std::io::{self, Write};

use tw_secrecy::optimize::{log_grid, sweep_gamma, PerPoint};
use tw_secrecy::report::{Cell, CsvWriter};
use tw_secrecy::{CapacityKind, OptimizeOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = OptimizeOptions::default();
    let gammas = log_grid(1e-2, 1e2, 41);
    let mut csv = CsvWriter::new(io::stdout().lock(), &["gamma", "kind", "eta_star", "capacity", "flag"])?;
    for kind in CapacityKind::ALL {
        for row in sweep_gamma(kind, &gammas, PerPoint::OptimizedEta, &opts) {
            csv.row([
                Cell::from(row.gamma),
                Cell::from(kind.as_str()),
                Cell::from(row.eta),
                Cell::from(row.capacity),
                Cell::from(row.flag.map(|f| f.as_str())),
            ])?;
        }
    }
    csv.into_inner()?.flush()?;
    Ok(())
}
