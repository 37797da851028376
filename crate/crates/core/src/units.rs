//! Unit conversions.
//!
//! Internally ħ = 1 and time is measured in femtoseconds, so energies become
//! angular frequencies in rad/fs.

/// Speed of light in cm/fs.
pub const SPEED_OF_LIGHT_CM_PER_FS: f64 = 2.997_924_58e-5;

/// Multiply a wavenumber in cm⁻¹ by this to get rad/fs (2πc).
pub const CM1_TO_RAD_PER_FS: f64 = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT_CM_PER_FS;

/// Boltzmann constant in cm⁻¹/K.
pub const BOLTZMANN_CM1_PER_K: f64 = 0.695_034_800_4;

/// Å per nm.
pub const ANGSTROM_PER_NM: f64 = 10.0;

#[inline]
pub fn cm1_to_rad_fs(cm1: f64) -> f64 {
    cm1 * CM1_TO_RAD_PER_FS
}

#[inline]
pub fn rad_fs_to_cm1(w: f64) -> f64 {
    w / CM1_TO_RAD_PER_FS
}

/// Thermal energy k_B T in rad/fs.
#[inline]
pub fn thermal_rad_fs(temperature_k: f64) -> f64 {
    cm1_to_rad_fs(BOLTZMANN_CM1_PER_K * temperature_k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vibrational_period_is_about_twenty_fs() {
        let w = cm1_to_rad_fs(1670.0);
        let period = 2.0 * std::f64::consts::PI / w;
        assert!((period - 19.974).abs() < 1e-3, "period {period}");
        assert!((rad_fs_to_cm1(w) - 1670.0).abs() < 1e-9);
    }

    #[test]
    fn conversion_constant_digits() {
        assert!((CM1_TO_RAD_PER_FS - 1.883_651_567_308_85e-4).abs() < 1e-16);
    }
}
