//! Closed-form one-step results for the worked scalar examples, all started
//! at `t = 0` with zero oscillator phase.
//!
//! The linear example is `du/dt = u t + mu cos(w t)`; the nonlinear one is
//! `du/dt = alpha u + mu u^2 e^(i w t)`, and the frequency-dependent one
//! multiplies that oscillator by `w^(1/2)`.

use num_complex::Complex64;

/// `S_n(x) = sum_{j <= n} x^j / j!`
pub fn taylor_poly(n: u32, x: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for j in 1..=n {
        term = term * x / f64::from(j);
        sum += term;
    }
    sum
}

pub fn cdi_linear_reference(u0: Complex64, mu: Complex64, omega: f64, h: f64) -> Complex64 {
    let wh = omega * h;
    u0 * (0.5 * h * h).exp() + mu * (wh.sin() / omega) - mu * (h * wh.cos() / (omega * omega))
}

pub fn cdi_nonlinear_reference(u0: Complex64, mu: Complex64, alpha: Complex64, omega: f64, h: f64) -> Complex64 {
    let i = Complex64::i();
    let e = (alpha * h).exp();
    let vh = Complex64::new(0.0, omega * h).exp();
    let first = (1.0 - vh * e) * i * mu * u0 * u0 * e / omega;
    let bracket = -(alpha + mu * u0) + (alpha + mu * u0 * 2.0) * vh * e - mu * u0 * vh * vh * e * e;
    u0 * e + first + bracket * mu * u0 * u0 * e / (omega * omega)
}

/// The fourth-order integral step of the linear example.
pub fn linear_step_reference(u0: Complex64, mu: Complex64, omega: f64, h: f64) -> Complex64 {
    u0 * (1.0 + h * h / 2.0 + h.powi(4) / 8.0) + mu * ((omega * h).sin() / omega)
}

/// The fourth-order integral step of the nonlinear example.
pub fn nonlinear_step_reference(u0: Complex64, mu: Complex64, alpha: Complex64, omega: f64, h: f64) -> Complex64 {
    let i = Complex64::i();
    let vh = Complex64::new(0.0, omega * h).exp();
    let ah = alpha * h;
    let drift = (1.0 + ah / 2.0 + ah * ah / 6.0 + ah * ah * ah / 24.0) * alpha * u0 * h;
    let first = ((1.0 + ah + ah * ah / 2.0) - vh * (1.0 + ah * 2.0 + ah * ah * 2.0)) * i * mu * u0 * u0 / omega;
    let second = ((1.0 - vh) * mu * u0 + alpha) * (1.0 - vh) * mu * u0 * u0 / (omega * omega);
    u0 + drift + first - second
}

/// The fourth-order step of the frequency-dependent example, oscillator
/// `w^(1/2) e^(i w t)`.
pub fn freqdep_reference(u0: Complex64, mu: Complex64, alpha: Complex64, omega: f64, h: f64) -> Complex64 {
    let i = Complex64::i();
    let hp = alpha * h;
    let v = Complex64::new(0.0, omega * h).exp();
    let s = |n: u32, k: f64| taylor_poly(n, hp * k);
    let u2 = u0 * u0;
    let u3 = u2 * u0;
    let u4 = u3 * u0;
    let u5 = u4 * u0;
    let one_minus = 1.0 - v;

    s(4, 1.0) * u0 + omega.powf(-0.5) * (s(3, 1.0) - v * s(3, 2.0)) * i * mu * u2
        - omega.powi(-1) * (s(2, 1.0) - v * s(2, 2.0) * 2.0 + v * v * s(2, 3.0)) * mu * mu * u3
        - omega.powf(-1.5) * (s(1, 1.0) - v * s(1, 2.0)) * alpha * mu * u2
        - omega.powf(-1.5)
            * (s(1, 1.0) - v * s(1, 2.0) * 3.0 + v * v * s(1, 3.0) * 3.0 - v * v * v * s(1, 4.0))
            * i
            * mu.powi(3)
            * u4
        - omega.powi(-2) * one_minus * one_minus * 2.0 * i * alpha * mu * mu * u3
        + omega.powi(-2) * one_minus.powi(4) * mu.powi(4) * u5
}
