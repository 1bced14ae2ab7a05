use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::CoefficientField;
use crate::oscillator::OscillatorSpec;
use crate::scheme::Trajectory;

/// Largest micro step accepted by [`rk4_micro_solve`]: twenty steps per
/// oscillation period.
pub fn max_micro_step(omega: f64) -> f64 {
    2.0 * PI / (20.0 * omega)
}

fn rhs<F: CoefficientField>(field: &F, osc: &OscillatorSpec, t: f64, u: &[Complex64]) -> Vec<Complex64> {
    let v = osc.raw_value(t);
    field
        .drift(&Complex64::new(t, 0.0), u)
        .into_iter()
        .zip(field.forcing(&Complex64::new(t, 0.0), u))
        .map(|(a, b)| a + b * v)
        .collect()
}

fn axpy(u: &[Complex64], k: &[Complex64], s: f64) -> Vec<Complex64> {
    u.iter().zip(k).map(|(x, y)| x + y * s).collect()
}

/// Classical fixed-step fourth-order Runge-Kutta on
/// `du/dt = a(t, u) + b(t, u) v(t)`, with `v` including any mean.
///
/// The step actually used divides `[t0, t_end]` evenly and never exceeds
/// `dt`; the trajectory holds every micro step.
pub fn rk4_micro_solve<F: CoefficientField>(
    field: &F,
    osc: &OscillatorSpec,
    t0: f64,
    u0: &[Complex64],
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    let max = max_micro_step(osc.omega());
    if !(dt > 0.0) || dt > max {
        return Err(Error::Resolution { dt, max });
    }
    if !(t_end > t0) {
        return Err(Error::InvalidArgument(format!("t_end ({t_end}) must exceed t0 ({t0})")));
    }
    if u0.len() != field.dim() {
        return Err(Error::InvalidArgument(format!(
            "state has {} components, field expects {}",
            u0.len(),
            field.dim()
        )));
    }
    let n = ((t_end - t0) / dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let step = (t_end - t0) / n as f64;
    let mut out = Vec::with_capacity(n + 1);
    let mut u = u0.to_vec();
    out.push((t0, u.clone()));
    for i in 0..n {
        let t = t0 + i as f64 * step;
        let k1 = rhs(field, osc, t, &u);
        let k2 = rhs(field, osc, t + 0.5 * step, &axpy(&u, &k1, 0.5 * step));
        let k3 = rhs(field, osc, t + 0.5 * step, &axpy(&u, &k2, 0.5 * step));
        let k4 = rhs(field, osc, t + step, &axpy(&u, &k3, step));
        for j in 0..u.len() {
            u[j] += (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (step / 6.0);
        }
        if u.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                word: "rk4".into(),
                t: t + step,
            });
        }
        out.push((if i + 1 == n { t_end } else { t + step }, u.clone()));
    }
    Ok(out)
}
