//! Time stepping for `du/dt = a(t, u) + b(t, u) v(t)` with a rapidly
//! oscillating, zero-mean factor `v`.
//!
//! The solution over one macroscale step is expanded in nested integrals of
//! `dt` and `dV = v dt`. Each nested integral is labelled by a [`Word`] over
//! the letters `T` and `V`; a [`TruncationPolicy`] decides which words are
//! kept, the integrals are evaluated exactly in a basis of
//! `s^p e^(i k w s)` terms, and the matching differential operators are
//! applied to `a` and `b` through truncated Taylor [`Jet`]s.
//!
//! ```
//! use oscint::{build_scheme, make_oscillator, Complex64, ExpMacroField, OscillatorKind, TruncationPolicy};
//!
//! let osc = make_oscillator(OscillatorKind::Cos, 100.0, 0.0, 0.0, None).unwrap();
//! let policy = TruncationPolicy::from_regime(4.0, 2.0, 0.0).unwrap();
//! let table = build_scheme(&osc, &policy);
//! let field = ExpMacroField::linear(Complex64::new(10.0, 0.0));
//! let step = table.step(&field, 0.0, &[Complex64::new(1.0, 0.0)], 0.1).unwrap();
//! let h: f64 = 0.1;
//! let expect = 1.0 + h * h / 2.0 + h.powi(4) / 8.0 + 10.0 * (100.0 * h).sin() / 100.0;
//! assert!((step.u_next[0].re - expect).abs() < 1e-12);
//! ```

pub mod basis;
pub mod bounds;
pub mod error;
pub mod field;
pub mod integral;
pub mod jet;
pub mod oscillator;
pub mod reference;
pub mod scheme;
pub mod word;

pub use num_complex::Complex64;

pub use basis::{antiderivative_count, BasisPoly, Monomial};
pub use bounds::{bound_r11, bound_r22, estimate_k, sampled_norm, BoundInputs, SampleBox};
pub use error::{Error, Result};
pub use field::{absorb_mean, apply_operator_word, CoefficientField, ExpMacroField, MeanAbsorbed, OperatorEvaluator, Rate};
pub use integral::{iterated_integral, iterated_integral_poly, IteratedIntegralValue};
pub use jet::{Jet, JetSpace, Scalar};
pub use oscillator::{delta_v, make_oscillator, OscillatorKind, OscillatorSpec};
pub use scheme::{
    build_scheme, build_scheme_with, step_count, CoefficientMode, SchemeEntry, SchemeTable, StepResult, Trajectory,
};
pub use word::{
    enumerate_words, expected_local_order, policy_matches_scheme, stochastic_scheme_words, term_count,
    term_count_policy, Letter, StochasticScheme, Target, TruncationPolicy, Word,
};
