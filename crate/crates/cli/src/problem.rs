use oscint::{absorb_mean, make_oscillator, Complex64, ExpMacroField, MeanAbsorbed, OscillatorKind, OscillatorSpec, Rate};

use crate::config::{config_error, ProblemId, RunArgs};

/// A registered problem: `du/dt = alpha(t) u + mu u^(1 - gamma) v(t)` with a
/// problem-specific oscillator.
#[derive(Debug, Clone)]
pub struct Problem {
    pub osc: OscillatorSpec,
    /// The field as written, for oracles that see the full oscillator.
    pub raw: ExpMacroField,
    /// The field with the oscillator mean moved into the drift, for stepping.
    pub field: MeanAbsorbed<ExpMacroField>,
}

impl Problem {
    pub fn from_args(args: &RunArgs) -> anyhow::Result<Problem> {
        Self::with_omega(args, args.omega.unwrap_or(100.0))
    }

    pub fn with_omega(args: &RunArgs, omega: f64) -> anyhow::Result<Problem> {
        let id = args.problem();
        let alpha = args.alpha()?;
        let phase = args.phi.unwrap_or(0.0);

        let (kind, default_nu, default_mu, default_gamma) = match id {
            ProblemId::Linear => (OscillatorKind::Cos, 0.0, 10.0, 1),
            ProblemId::Nonlinear => (OscillatorKind::Exp, 0.0, 1.0, -1),
            ProblemId::Power => (OscillatorKind::Cos, 0.0, 1.0, 1),
            ProblemId::Freqdep => (OscillatorKind::Exp, -0.5, 1.0, -1),
            ProblemId::CustomFourier => (OscillatorKind::Fourier, 0.0, 1.0, -1),
        };
        let rate = match id {
            ProblemId::Linear => {
                if alpha.is_some() {
                    return Err(config_error("the linear problem has rate alpha(t) = t; drop --alpha"));
                }
                Rate::Time
            }
            ProblemId::Power => {
                if alpha.is_some() {
                    return Err(config_error("the power problem has no drift; drop --alpha"));
                }
                Rate::Constant(Complex64::new(0.0, 0.0))
            }
            _ => Rate::Constant(alpha.unwrap_or(Complex64::new(0.5, 0.0))),
        };

        let coeffs = args.fourier()?;
        if coeffs.is_some() != (id == ProblemId::CustomFourier) {
            return Err(config_error("--fourier is required by, and only used with, custom-fourier"));
        }
        let osc = make_oscillator(kind, omega, phase, args.nu.unwrap_or(default_nu), coeffs.as_ref())
            .map_err(|e| config_error(e.to_string()))?;

        let raw = ExpMacroField {
            rate,
            mu: Complex64::new(args.mu.unwrap_or(default_mu), 0.0),
            gamma: args.gamma.unwrap_or(default_gamma),
        };
        let field = absorb_mean(raw, osc.mean());
        Ok(Problem { osc, raw, field })
    }
}
