use crate::error::{Error, Result};
use std::f64::consts::PI;

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

fn lanczos_series(z: f64) -> f64 {
    // z is the shifted argument x - 1
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Gamma for any real argument that is not a pole. Internal: callers outside
/// the crate go through [`gamma_fn`], which rejects nonpositive input.
pub(crate) fn gamma_any(x: f64) -> f64 {
    if let Some(f) = factorial_exact(x) {
        return f;
    }
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_any(1.0 - x))
    } else {
        let z = x - 1.0;
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_series(z)
    }
}

/// Γ(x) for x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma requires a positive argument, got {x}")));
    }
    Ok(gamma_any(x))
}

fn factorial_exact(x: f64) -> Option<f64> {
    if (1.0..=171.0).contains(&x) && x.fract() == 0.0 {
        Some((1..x as u32).fold(1.0, |acc, k| acc * k as f64))
    } else {
        None
    }
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires a positive argument, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the series in its accurate range
        (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x)
    } else {
        let z = x - 1.0;
        let t = z + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_series(z).ln()
    }
}

/// 1/Γ(x) on the whole real line, exactly zero at the poles 0, −1, −2, …
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    if x < 0.5 {
        (PI * x).sin() * gamma_any(1.0 - x) / PI
    } else if let Some(f) = factorial_exact(x) {
        1.0 / f
    } else if x > 171.0 {
        (-ln_gamma_pos(x)).exp()
    } else {
        1.0 / gamma_any(x)
    }
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b), evaluated through logarithms.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("beta requires positive arguments, got ({a}, {b})")));
    }
    Ok((ln_gamma_pos(a) + ln_gamma_pos(b) - ln_gamma_pos(a + b)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn classical_values() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert_relative_eq!(gamma_fn(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        // 3.5 = 2.5 * 1.5 * 0.5 * sqrt(pi)
        assert_relative_eq!(gamma_fn(3.5).unwrap(), 1.875 * PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma_fn(3.5).unwrap(), 3.323_350_970_4, max_relative = 1e-10);
        assert_relative_eq!(gamma_fn(0.75).unwrap(), 1.225_416_702_465_177_6, max_relative = 1e-13);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(matches!(gamma_fn(0.0), Err(Error::Domain(_))));
        assert!(matches!(gamma_fn(-1.5), Err(Error::Domain(_))));
        assert!(gamma_fn(f64::NAN).is_err());
    }

    #[test]
    fn recurrence() {
        for i in 1..=100 {
            let x = i as f64 * 0.1;
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert!(((lhs - rhs) / lhs).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn reciprocal_gamma_poles_and_negatives() {
        for n in 0..6 {
            assert_eq!(rgamma(-(n as f64)), 0.0);
        }
        // Γ(-0.5) = -2 sqrt(pi)
        assert_relative_eq!(rgamma(-0.5), -1.0 / (2.0 * PI.sqrt()), max_relative = 1e-14);
        assert_relative_eq!(rgamma(4.0), 1.0 / 6.0, max_relative = 1e-14);
    }

    #[test]
    fn beta_and_ln_gamma() {
        assert_relative_eq!(beta_fn(2.0, 3.0).unwrap(), 1.0 / 12.0, max_relative = 1e-13);
        assert_relative_eq!(beta_fn(0.5, 0.5).unwrap(), PI, max_relative = 1e-13);
        assert_relative_eq!(ln_gamma(200.0).unwrap(), 857.933_669_825_857_4, max_relative = 1e-13);
        assert_relative_eq!(ln_gamma(0.1).unwrap(), gamma_fn(0.1).unwrap().ln(), max_relative = 1e-13);
    }
}
