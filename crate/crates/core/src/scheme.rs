//! Scheme tables and time stepping.
//!
//! A [`SchemeTable`] stores, for one oscillator and truncation policy, the
//! symbolic coefficient of every retained word. The table depends on the
//! oscillator only, so it is built once and then stepped with any
//! coefficient field; a step evaluates each coefficient at `(t_n, h)` and
//! multiplies it by the operator word applied to `a` or `b` at `(t_n, u_n)`.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::basis::BasisPoly;
use crate::bounds::{bound_r11, bound_r22, BoundInputs};
use crate::error::{Error, Result};
use crate::field::{CoefficientField, OperatorEvaluator};
use crate::oscillator::OscillatorSpec;
use crate::word::{enumerate_words, Letter, Target, TruncationPolicy, Word};

/// How much of each exactly evaluated integral enters the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoefficientMode {
    /// Keep only the evaluated terms `h^p w^-e` whose own weight
    /// `p/kappa0 + e/((1 + nu) kappa1)` passes the retention test. This is the
    /// consistent truncation: an integral's higher-order parts are as small
    /// as the words that were dropped.
    #[default]
    Consistent,
    /// Use the full exact integrals of every retained word.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeEntry {
    pub word: Word,
    pub target: Target,
    /// Coefficient as a function of elapsed time `s` and step phase.
    pub coefficient: BasisPoly,
    /// Phase average of `coefficient`.
    pub averaged: BasisPoly,
}

impl SchemeEntry {
    pub fn operators(&self) -> &[Letter] {
        self.word.operators()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeTable {
    oscillator: OscillatorSpec,
    policy: TruncationPolicy,
    mode: CoefficientMode,
    entries: Vec<SchemeEntry>,
    jet_order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub t_next: f64,
    pub u_next: Vec<Complex64>,
    /// One contribution vector per scheme entry, in table order.
    pub contributions: Vec<Vec<Complex64>>,
    /// Remainder bound, when one was requested and applies to the policy.
    pub bound: Option<f64>,
}

pub type Trajectory = Vec<(f64, Vec<Complex64>)>;

pub fn build_scheme(osc: &OscillatorSpec, policy: &TruncationPolicy) -> SchemeTable {
    build_scheme_with(osc, policy, CoefficientMode::default())
}

pub fn build_scheme_with(osc: &OscillatorSpec, policy: &TruncationPolicy, mode: CoefficientMode) -> SchemeTable {
    let words = enumerate_words(policy);
    let v = osc.as_basis();
    let nu = osc.nu();

    // Integrals of shared prefixes are computed once.
    let mut prefixes: HashMap<Vec<Letter>, BasisPoly> = HashMap::new();
    prefixes.insert(Vec::new(), BasisPoly::one(osc.omega()));

    let mut entries = Vec::with_capacity(words.len());
    for word in words {
        let letters = word.letters();
        for end in 1..=letters.len() {
            if prefixes.contains_key(&letters[..end]) {
                continue;
            }
            let inner = &prefixes[&letters[..end - 1]];
            let integrand = match letters[end - 1] {
                Letter::Osc => inner * &v,
                Letter::Time => inner.clone(),
            };
            prefixes.insert(letters[..end].to_vec(), integrand.integral_from_zero());
        }
        let exact = &prefixes[letters];
        let coefficient = match mode {
            CoefficientMode::Exact => exact.clone(),
            CoefficientMode::Consistent => {
                let osc_letters = word.osc_count() as f64;
                exact.filter(|m| {
                    let e = f64::from(m.inv_omega) + nu * osc_letters;
                    policy.admits(f64::from(m.power), e / (1.0 + nu))
                })
            }
        };
        let averaged = coefficient.phase_average();
        entries.push(SchemeEntry {
            target: word.target(),
            word,
            coefficient,
            averaged,
        });
    }

    let jet_order = entries.iter().map(|e| e.word.len() - 1).max().unwrap_or(0);
    SchemeTable {
        oscillator: osc.clone(),
        policy: *policy,
        mode,
        entries,
        jet_order,
    }
}

impl SchemeTable {
    pub fn oscillator(&self) -> &OscillatorSpec {
        &self.oscillator
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    pub fn mode(&self) -> CoefficientMode {
        self.mode
    }

    pub fn entries(&self) -> &[SchemeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// An empty table steps as the identity.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Jet order needed to apply the longest operator word.
    pub fn jet_order(&self) -> usize {
        self.jet_order
    }

    /// The same table for an oscillator with a different phase. The symbolic
    /// coefficients do not depend on the phase, so nothing is re-integrated.
    pub fn with_phase(&self, phase: f64) -> SchemeTable {
        SchemeTable {
            oscillator: self.oscillator.with_phase(phase),
            ..self.clone()
        }
    }

    pub fn step<F: CoefficientField>(&self, field: &F, t_n: f64, u_n: &[Complex64], h: f64) -> Result<StepResult> {
        self.advance(field, t_n, u_n, h, false)
    }

    /// A step whose coefficients are averaged over the oscillator phase.
    pub fn step_phase_averaged<F: CoefficientField>(
        &self,
        field: &F,
        t_n: f64,
        u_n: &[Complex64],
        h: f64,
    ) -> Result<StepResult> {
        self.advance(field, t_n, u_n, h, true)
    }

    /// A plain step with the remainder bound of the first (`kappa0 = kappa1
    /// = 1`) or second (`= 2`) expansion attached; other policies get no
    /// bound.
    pub fn step_with_bound<F: CoefficientField>(
        &self,
        field: &F,
        t_n: f64,
        u_n: &[Complex64],
        h: f64,
        k: f64,
    ) -> Result<StepResult> {
        let mut result = self.step(field, t_n, u_n, h)?;
        if h > 0.0 {
            let inputs = BoundInputs::new(k, self.oscillator.norm(), h, self.oscillator.omega())?;
            result.bound = match (self.policy.kappa0(), self.policy.kappa1()) {
                (k0, k1) if k0 == 1.0 && k1 == 1.0 => Some(bound_r11(&inputs)),
                (k0, k1) if k0 == 2.0 && k1 == 2.0 => Some(bound_r22(&inputs)),
                _ => None,
            };
        }
        Ok(result)
    }

    fn advance<F: CoefficientField>(
        &self,
        field: &F,
        t_n: f64,
        u_n: &[Complex64],
        h: f64,
        averaged: bool,
    ) -> Result<StepResult> {
        if !(h.is_finite() && h >= 0.0) {
            return Err(Error::InvalidArgument(format!("step size must be non-negative, got {h}")));
        }
        if u_n.len() != field.dim() {
            return Err(Error::InvalidArgument(format!(
                "state has {} components, field expects {}",
                u_n.len(),
                field.dim()
            )));
        }
        let zero = vec![Complex64::new(0.0, 0.0); u_n.len()];
        if h == 0.0 || self.entries.is_empty() {
            return Ok(StepResult {
                t_next: t_n + h,
                u_next: u_n.to_vec(),
                contributions: vec![zero; self.entries.len()],
                bound: None,
            });
        }

        let mut ops = OperatorEvaluator::new(field, t_n, u_n, self.jet_order)?;
        let theta = self.oscillator.theta(t_n);
        let mut u_next = u_n.to_vec();
        let mut contributions = Vec::with_capacity(self.entries.len());
        for entry in &self.entries {
            let poly = if averaged { &entry.averaged } else { &entry.coefficient };
            let contribution = if poly.is_empty() {
                zero.clone()
            } else {
                let coef = poly.eval(h, theta);
                let applied = ops.apply(entry.target, entry.operators())?;
                applied.into_iter().map(|x| x * coef).collect::<Vec<_>>()
            };
            if contribution.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite {
                    word: entry.word.to_string(),
                    t: t_n,
                });
            }
            for (u, c) in u_next.iter_mut().zip(&contribution) {
                *u += c;
            }
            contributions.push(contribution);
        }
        Ok(StepResult {
            t_next: t_n + h,
            u_next,
            contributions,
            bound: None,
        })
    }

    /// Repeated steps of size `h` from `t0` to `t_end`; the trajectory
    /// includes both endpoints.
    pub fn solve<F: CoefficientField>(
        &self,
        field: &F,
        t0: f64,
        u0: &[Complex64],
        t_end: f64,
        h: f64,
    ) -> Result<Trajectory> {
        self.march(field, t0, u0, t_end, h, false)
    }

    pub fn solve_phase_averaged<F: CoefficientField>(
        &self,
        field: &F,
        t0: f64,
        u0: &[Complex64],
        t_end: f64,
        h: f64,
    ) -> Result<Trajectory> {
        self.march(field, t0, u0, t_end, h, true)
    }

    fn march<F: CoefficientField>(
        &self,
        field: &F,
        t0: f64,
        u0: &[Complex64],
        t_end: f64,
        h: f64,
        averaged: bool,
    ) -> Result<Trajectory> {
        let steps = step_count(t0, t_end, h)?;
        let mut trajectory = Vec::with_capacity(steps + 1);
        let mut u = u0.to_vec();
        trajectory.push((t0, u.clone()));
        for index in 0..steps {
            let t = t0 + index as f64 * h;
            let result = self.advance(field, t, &u, h, averaged).map_err(|e| Error::StepFailed {
                index,
                source: Box::new(e),
            })?;
            u = result.u_next;
            trajectory.push((t0 + (index + 1) as f64 * h, u.clone()));
        }
        Ok(trajectory)
    }
}

/// Number of steps of size `h` spanning `[t0, t_end]`; `h` must divide the
/// interval up to rounding.
pub fn step_count(t0: f64, t_end: f64, h: f64) -> Result<usize> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {h}")));
    }
    if !(t_end > t0) {
        return Err(Error::InvalidArgument(format!("t_end ({t_end}) must exceed t0 ({t0})")));
    }
    let n = ((t_end - t0) / h).round();
    if (n * h - (t_end - t0)).abs() > 1e-9 * (t_end - t0).abs().max(1.0) || n < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "step {h} does not divide the interval [{t0}, {t_end}]"
        )));
    }
    Ok(n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::antiderivative_count;
    use crate::field::{ExpMacroField, Rate};
    use crate::oscillator::{delta_v, make_oscillator, OscillatorKind};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn cos_osc(w: f64) -> OscillatorSpec {
        make_oscillator(OscillatorKind::Cos, w, 0.0, 0.0, None).unwrap()
    }

    #[test]
    fn first_order_table_and_step() {
        let osc = cos_osc(100.0);
        let table = build_scheme(&osc, &TruncationPolicy::new(1.0, 1.0).unwrap());
        let words: Vec<String> = table.entries().iter().map(|e| e.word.to_string()).collect();
        assert_eq!(words, ["T", "V"]);
        assert_eq!(table.entries()[0].target, Target::Drift);
        assert_eq!(table.entries()[1].target, Target::Forcing);

        let field = ExpMacroField::nonlinear(c(0.7), c(2.0));
        let (t_n, h, u) = (0.3, 0.05, c(1.2));
        let r = table.step(&field, t_n, &[u], h).unwrap();
        let expect = u + c(0.7) * u * h + c(2.0) * u * u * delta_v(&osc, t_n, h);
        assert!((r.u_next[0] - expect).norm() < 1e-15);
        assert_eq!(r.contributions.len(), 2);
    }

    #[test]
    fn table_is_deterministic() {
        let osc = cos_osc(70.0);
        let p = TruncationPolicy::from_regime(4.0, 2.0, 0.0).unwrap();
        assert_eq!(build_scheme(&osc, &p), build_scheme(&osc, &p));
        assert_eq!(build_scheme(&osc, &p).len(), 11);
    }

    #[test]
    fn pure_drift_is_truncated_exponential() {
        let osc = cos_osc(100.0);
        let field = ExpMacroField {
            rate: Rate::Constant(c(1.0)),
            mu: c(0.0),
            gamma: 1,
        };
        let table = build_scheme(&osc, &TruncationPolicy::new(4.0, 2.0).unwrap());
        let h: f64 = 0.1;
        let r = table.step(&field, 0.0, &[c(1.5)], h).unwrap();
        let expect = 1.5 * (1.0 + h + h * h / 2.0 + h.powi(3) / 6.0 + h.powi(4) / 24.0);
        assert!((r.u_next[0] - c(expect)).norm() < 1e-15);
        let avg = table.step_phase_averaged(&field, 0.0, &[c(1.5)], h).unwrap();
        assert!((avg.u_next[0] - r.u_next[0]).norm() < 1e-15);
    }

    #[test]
    fn zero_step_is_identity() {
        let table = build_scheme(&cos_osc(10.0), &TruncationPolicy::new(2.0, 2.0).unwrap());
        let field = ExpMacroField::linear(c(3.0));
        let r = table.step(&field, 0.2, &[c(0.4)], 0.0).unwrap();
        assert_eq!(r.u_next, vec![c(0.4)]);
        assert!(r.contributions.iter().all(|v| v[0] == c(0.0)));
    }

    #[test]
    fn empty_policy_steps_as_identity() {
        let table = build_scheme(&cos_osc(10.0), &TruncationPolicy::new(0.5, 0.5).unwrap());
        assert!(table.is_empty());
        let field = ExpMacroField::linear(c(3.0));
        let r = table.step(&field, 0.0, &[c(0.4)], 0.1).unwrap();
        assert_eq!(r.u_next, vec![c(0.4)]);
    }

    #[test]
    fn tables_are_reused_without_reintegration() {
        let table = build_scheme(&cos_osc(90.0), &TruncationPolicy::new(3.0, 3.0).unwrap());
        let before = antiderivative_count();
        let f1 = ExpMacroField::linear(c(3.0));
        let f2 = ExpMacroField::nonlinear(Complex64::new(0.0, 2.0), c(1.0));
        table.step(&f1, 0.0, &[c(1.0)], 0.1).unwrap();
        table.step(&f2, 0.3, &[c(0.5)], 0.05).unwrap();
        table.with_phase(1.0).step(&f2, 0.3, &[c(0.5)], 0.05).unwrap();
        assert_eq!(antiderivative_count(), before);
    }

    #[test]
    fn non_finite_contributions_name_the_word() {
        let table = build_scheme(&cos_osc(10.0), &TruncationPolicy::new(1.0, 1.0).unwrap());
        let field = ExpMacroField::linear(c(f64::INFINITY));
        match table.step(&field, 0.0, &[c(1.0)], 0.1) {
            Err(Error::NonFinite { word, .. }) => assert_eq!(word, "V"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn solve_matches_repeated_steps() {
        let table = build_scheme(&cos_osc(50.0), &TruncationPolicy::new(2.0, 2.0).unwrap());
        let field = ExpMacroField::nonlinear(c(-0.5), c(0.3));
        let traj = table.solve(&field, 0.0, &[c(1.0)], 0.1, 0.1).unwrap();
        assert_eq!(traj.len(), 2);
        let one = table.step(&field, 0.0, &[c(1.0)], 0.1).unwrap();
        assert_eq!(traj[1].1, one.u_next);

        let traj = table.solve(&field, 0.0, &[c(1.0)], 1.0, 0.25).unwrap();
        assert_eq!(traj.len(), 5);
        assert!((traj[4].0 - 1.0).abs() < 1e-15);
        assert!(table.solve(&field, 0.0, &[c(1.0)], 1.0, 0.3).is_err());
    }

    #[test]
    fn step_errors_carry_their_index() {
        let table = build_scheme(&cos_osc(10.0), &TruncationPolicy::new(1.0, 1.0).unwrap());
        // b = mu u^2 blows up after a few steps
        let field = ExpMacroField::nonlinear(c(0.0), c(1e150));
        match table.solve(&field, 0.0, &[c(1e10)], 1.0, 0.1) {
            Err(Error::StepFailed { index, .. }) => assert!(index < 10),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bounds_attach_to_matching_policies() {
        let osc = cos_osc(100.0);
        let field = ExpMacroField::linear(c(1.0));
        let first = build_scheme(&osc, &TruncationPolicy::new(1.0, 1.0).unwrap());
        let r = first.step_with_bound(&field, 0.0, &[c(1.0)], 0.1, 1.0).unwrap();
        assert!(r.bound.is_some());
        let other = build_scheme(&osc, &TruncationPolicy::new(3.0, 1.0).unwrap());
        let r = other.step_with_bound(&field, 0.0, &[c(1.0)], 0.1, 1.0).unwrap();
        assert!(r.bound.is_none());
    }
}
