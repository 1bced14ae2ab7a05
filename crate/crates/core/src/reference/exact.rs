use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Rate;
use crate::oscillator::OscillatorSpec;
use crate::reference::quadrature::integrate_oscillatory;

fn root(w: Complex64, gamma: i32) -> Result<Complex64> {
    if w == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("solution blows up: bracket is zero".into()));
    }
    match gamma {
        1 => Ok(w),
        -1 => Ok(w.inv()),
        _ if w.im == 0.0 && w.re < 0.0 => Err(Error::Domain(format!(
            "fractional power 1/{gamma} of negative bracket {}",
            w.re
        ))),
        _ => Ok(w.powf(1.0 / f64::from(gamma))),
    }
}

/// Solution of `du/dt = u^(1 - gamma) v(t)` after the oscillator integral
/// has increased by `delta_v`.
pub fn exact_pure_oscillatory(gamma: i32, u0: Complex64, delta_v: Complex64) -> Result<Complex64> {
    if gamma == 0 {
        return Ok(u0 * delta_v.exp());
    }
    let bracket = 1.0 + u0.powi(-gamma) * delta_v * f64::from(gamma);
    Ok(u0 * root(bracket, gamma)?)
}

/// Solution at time `t` of `du/dt = alpha(t) u + mu u^(1 - gamma) v(t)`
/// from `u(t0) = u0`, where `v` is the full oscillator including any mean.
///
/// The inner integral `int v e^(-gamma A)` is evaluated by adaptive
/// quadrature to absolute tolerance `tol`.
#[allow(clippy::too_many_arguments)]
pub fn exact_exp_macro(
    rate: Rate,
    gamma: i32,
    mu: Complex64,
    osc: &OscillatorSpec,
    t0: f64,
    u0: Complex64,
    t: f64,
    tol: f64,
) -> Result<Complex64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let big_a = rate.integral(t0, t);
    if gamma == 0 {
        let integral_v = osc.big_v_at(t) - osc.big_v_at(t0) + osc.mean() * (t - t0);
        return Ok(u0 * (big_a + mu * integral_v).exp());
    }
    let g = f64::from(gamma);
    let inner = integrate_oscillatory(
        |s| osc.raw_value(s) * (-rate.integral(t0, s) * g).exp(),
        t0,
        t,
        osc.omega(),
        tol,
    )?;
    let w = u0.powi(gamma) + mu * inner.value * g;
    Ok(big_a.exp() * root(w, gamma)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{make_oscillator, OscillatorKind};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn pure_oscillatory_branches() {
        let u0 = c(1.3);
        let dv = c(0.2);
        assert!((exact_pure_oscillatory(0, u0, dv).unwrap() - u0 * dv.exp()).norm() < 1e-15);
        assert!((exact_pure_oscillatory(1, u0, dv).unwrap() - (u0 + dv)).norm() < 1e-15);
        let got = exact_pure_oscillatory(2, c(1.0), c(0.1)).unwrap();
        assert!((got - c(1.2f64.sqrt())).norm() < 1e-15);
        let got = exact_pure_oscillatory(-1, c(1.0), c(0.25)).unwrap();
        assert!((got - c(1.0 / 0.75)).norm() < 1e-15);
    }

    #[test]
    fn pure_oscillatory_domain_errors() {
        assert!(exact_pure_oscillatory(-1, c(1.0), c(1.0)).is_err());
        assert!(exact_pure_oscillatory(2, c(1.0), c(-1.0)).is_err());
    }

    #[test]
    fn oscillation_free_reduction() {
        let osc = make_oscillator(OscillatorKind::Cos, 50.0, 0.0, 0.0, None).unwrap();
        let got = exact_exp_macro(Rate::Time, 0, c(0.0), &osc, 0.0, c(2.0), 1.0, 1e-12).unwrap();
        assert!((got - c(2.0 * 0.5f64.exp())).norm() < 1e-14);
        let got = exact_exp_macro(Rate::Constant(c(0.3)), 1, c(0.0), &osc, 0.0, c(2.0), 1.0, 1e-12).unwrap();
        assert!((got - c(2.0 * 0.3f64.exp())).norm() < 1e-14);
    }

    #[test]
    fn matches_pure_oscillatory_form() {
        let osc = make_oscillator(OscillatorKind::Sin, 40.0, 0.4, 0.0, None).unwrap();
        let (t0, t) = (0.1, 0.37);
        let dv = osc.big_v_at(t) - osc.big_v_at(t0);
        for gamma in [-1, 1, 2, 3] {
            let a = exact_exp_macro(Rate::Constant(c(0.0)), gamma, c(1.0), &osc, t0, c(1.1), t, 1e-13).unwrap();
            let b = exact_pure_oscillatory(gamma, c(1.1), dv).unwrap();
            assert!((a - b).norm() < 1e-12, "gamma {gamma}: {a} vs {b}");
        }
    }
}
