//! Bessel functions of the first kind for the two orders the antenna
//! pattern needs.
//!
//! Small arguments (`|x| < 8`) use the ascending series, which loses at most
//! a couple of digits there. Larger arguments use Miller's downward
//! recurrence normalised with `J0 + 2 (J2 + J4 + ...) = 1`.

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 8.0;
const RESCALE_THRESHOLD: f64 = 1e250;

/// `J_order(x)` for `order` in `{1, 3}`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    match order {
        1 | 3 => Ok(bessel_j_unchecked(order, x)),
        other => Err(Error::UnsupportedOrder(other)),
    }
}

pub(crate) fn bessel_j_unchecked(order: u32, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    // Odd orders are odd functions.
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let ax = x.abs();
    let value = if ax < SERIES_LIMIT {
        ascending_series(order, ax)
    } else {
        miller(order, ax)
    };
    sign * value
}

fn ascending_series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let n = order as f64;
    // (x/2)^n / n!
    let mut term = (1..=order).fold(1.0, |acc, k| acc * half / k as f64);
    let mut sum = term;
    for m in 1..200 {
        let mf = m as f64;
        term *= q / (mf * (mf + n));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn miller(order: u32, x: f64) -> f64 {
    let top = 2 * ((1.1 * x + 40.0 + 8.0 * x.cbrt()) as usize / 2);
    let mut above = 0.0; // J_{j+1}
    let mut current = 1e-30; // J_j, unnormalised
    let mut wanted = 0.0;
    let mut norm = 0.0;
    for j in (1..=top).rev() {
        let below = 2.0 * j as f64 / x * current - above;
        above = current;
        current = below;
        // `current` now holds J_{j-1}.
        let index = j - 1;
        if index == order as usize {
            wanted = current;
        }
        if index > 0 && index % 2 == 0 {
            norm += 2.0 * current;
        }
        if current.abs() > RESCALE_THRESHOLD {
            let s = 1.0 / RESCALE_THRESHOLD;
            current *= s;
            above *= s;
            wanted *= s;
            norm *= s;
        }
    }
    norm += current;
    wanted / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Trapezoid rule on the periodic integral representation
    /// `J_n(x) = 1/(2 pi) int_0^{2 pi} cos(n t - x sin t) dt`; converges
    /// geometrically once the node count exceeds `x`.
    fn integral_oracle(order: u32, x: f64) -> f64 {
        let nodes = 4096;
        let h = 2.0 * PI / nodes as f64;
        let sum: f64 = (0..nodes)
            .map(|i| {
                let t = i as f64 * h;
                (order as f64 * t - x * t.sin()).cos()
            })
            .sum();
        sum / nodes as f64
    }

    #[test]
    fn zero_and_small_argument() {
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
        let x = 1e-6;
        assert!((bessel_j(1, x).unwrap() / (x / 2.0) - 1.0).abs() < 1e-11);
        assert!((bessel_j(3, x).unwrap() / (x * x * x / 48.0) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn first_root_of_j1() {
        // First positive zero of J1 from tabulated high-precision value.
        assert!(bessel_j(1, 3.831_705_970_207_512_3).unwrap().abs() < 1e-14);
        assert!(bessel_j(1, 3.8317).unwrap().abs() < 1e-5);
    }

    #[test]
    fn rejects_other_orders() {
        assert_eq!(bessel_j(2, 1.0), Err(Error::UnsupportedOrder(2)));
    }

    #[test]
    fn odd_symmetry() {
        for x in [0.3, 2.5, 9.0, 40.0] {
            for n in [1, 3] {
                let a = bessel_j(n, x).unwrap();
                let b = bessel_j(n, -x).unwrap();
                assert_eq!(a, -b);
            }
        }
    }

    #[test]
    fn matches_integral_oracle_on_0_to_50() {
        for i in 0..=1000 {
            let x = i as f64 * 0.05;
            for n in [1, 3] {
                let got = bessel_j(n, x).unwrap();
                let want = integral_oracle(n, x);
                assert!((got - want).abs() < 1e-10, "J{n}({x}) = {got}, oracle {want}");
            }
        }
    }

    #[test]
    fn large_arguments_stay_accurate() {
        for x in [120.0, 333.3, 699.0] {
            for n in [1, 3] {
                let got = bessel_j(n, x).unwrap();
                let want = integral_oracle(n, x);
                assert!((got - want).abs() < 1e-10, "J{n}({x})");
            }
        }
    }
}
