//! Gamma function for positive real arguments.

use std::f64::consts::PI;

// Lanczos coefficients for g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma is only defined here for positive arguments, got {x}");
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the Lanczos sum in its accurate range
        return ln_gamma(x + 1.0) - x.ln();
    }
    if let Some(n) = small_integer(x) {
        return factorial(n - 1).ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let series = LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, &c)| acc + c / (z + (i + 1) as f64));
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// `Γ(x)` for `x > 0`; exact for integer arguments up to 171.
pub fn gamma(x: f64) -> f64 {
    if let Some(n) = small_integer(x) {
        return factorial(n - 1);
    }
    ln_gamma(x).exp()
}

fn small_integer(x: f64) -> Option<u32> {
    (x.fract() == 0.0 && (1.0..=171.0).contains(&x)).then_some(x as u32)
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn integer_arguments_are_factorials() {
        assert_eq!(gamma(1.0), 1.0);
        assert_eq!(gamma(5.0), 24.0);
        assert_eq!(gamma(10.0), 362_880.0);
    }

    #[test]
    fn half_integers() {
        let sqrt_pi = PI.sqrt();
        assert!(rel(gamma(0.5), sqrt_pi) < 1e-13);
        assert!(rel(gamma(1.5), 0.5 * sqrt_pi) < 1e-13);
        assert!(rel(gamma(4.5), 11.631_728_396_567_45) < 1e-13);
    }

    #[test]
    fn non_integer_values() {
        // reference values from mpmath
        assert!(rel(gamma(0.1), 9.513_507_698_668_732) < 1e-12);
        assert!(rel(gamma(2.7), 1.544_685_845_850_594) < 1e-12);
        assert!(rel(gamma(33.3), 7.487_577_596_522_632e35) < 1e-12);
        assert!(rel(gamma(49.75), 2.294_702_302_517_863e62) < 1e-12);
    }

    #[test]
    fn ln_gamma_large_arguments() {
        assert!(rel(ln_gamma(100.0), 359.134_205_369_575_4) < 1e-14);
        assert!(rel(ln_gamma(250.5), 1_131.284_001_332_255_2) < 1e-13);
    }

    #[test]
    fn recurrence() {
        for &x in &[0.3, 1.7, 6.25, 21.9] {
            assert!(rel(gamma(x + 1.0), x * gamma(x)) < 1e-12);
        }
    }
}
