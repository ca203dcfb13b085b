//! Special functions and numerical integration shared by the other modules.

mod bessel;
mod quadrature;
mod special;

pub use bessel::bessel_j;
pub(crate) use bessel::bessel_j_unchecked;
pub use quadrature::{integrate, integrate_with_estimate, Integral, QuadratureSpec};
pub use special::{binary_entropy, entropy_rise, entropy_rise_per_w, erf, erfc, ln_erfc};
