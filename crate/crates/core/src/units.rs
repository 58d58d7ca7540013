//! Unit conversions at the configuration boundary.
//!
//! Internally frequencies are angular (rad/s) and times are seconds. Config
//! files use `*_mhz` for `value / 2π` in MHz, and `*_ns` / `*_ms` for times.

use std::f64::consts::PI;

pub fn mhz_to_rad_per_s(f_mhz: f64) -> f64 {
    2.0 * PI * 1e6 * f_mhz
}

pub fn rad_per_s_to_mhz(w: f64) -> f64 {
    w / (2.0 * PI * 1e6)
}

pub fn ns(t: f64) -> f64 {
    t * 1e-9
}

pub fn ms(t: f64) -> f64 {
    t * 1e-3
}

pub fn to_ns(t_s: f64) -> f64 {
    t_s * 1e9
}

/// Angle given in units of π.
pub fn pi_units(x: f64) -> f64 {
    x * PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mhz_roundtrip() {
        let w = mhz_to_rad_per_s(2.5407);
        assert!((rad_per_s_to_mhz(w) - 2.5407).abs() < 1e-12);
        assert!((w - 1.596e7).abs() < 1e4);
    }
}
