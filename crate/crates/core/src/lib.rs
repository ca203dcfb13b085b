//! Secrecy capacities of one-way and two-way BPSK wiretap protocols over
//! Gaussian channels, their optimisation over transmit SNR, satellite
//! eavesdropping geometry, and a Monte Carlo simulator of the two-way
//! protocol with Toeplitz privacy amplification.

pub mod capacity;
pub mod channel;
pub mod error;
pub mod mathkit;
pub mod optimize;
pub mod protosim;
pub mod report;
pub mod satgeo;

pub use capacity::{
    c_ow_hard, c_ow_soft, c_tw_hard, c_tw_soft, capacity, CapacityKind, CapacityResult, Direction, EveMode,
};
pub use channel::{ChannelParams, PhysicalLinkBudget};
pub use error::{Error, Result};
pub use mathkit::QuadratureSpec;
pub use optimize::{optimize_eta, GammaConvention, OptimizeOptions, OptimumFlag, OptimumPoint};
pub use protosim::{estimate_stats, run_rounds, EmpiricalStats, ProtocolConfig, Transcript};
pub use satgeo::{worst_case_gamma, AntennaPattern, Scenario, ScenarioGeometry, ScenarioPreset};
