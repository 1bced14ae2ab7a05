use std::f64::consts::PI;

use anyhow::Context;
use oscint::reference::{exact_exp_macro, fit_slope, max_micro_step, rk4_micro_solve};
use oscint::{
    bound_r11, bound_r22, build_scheme, enumerate_words, estimate_k, policy_matches_scheme, term_count,
    term_count_policy, BoundInputs, Complex64, SampleBox, SchemeTable, TruncationPolicy,
};

use crate::config::{config_error, OracleKind, RunArgs};
use crate::output::{fmt_complex, fmt_real, Table};
use crate::problem::Problem;

const ORACLE_TOL: f64 = 1e-13;

/// Result of a command: the table and whether every requested check held.
pub struct Report {
    pub table: Table,
    pub satisfied: bool,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Report { table, satisfied: true }
    }
}

fn scheme_for(problem: &Problem, policy: &TruncationPolicy) -> SchemeTable {
    let table = build_scheme(&problem.osc, policy);
    if table.is_empty() {
        eprintln!(
            "warning: policy (kappa0 = {}, kappa1 = {}) retains no words; steps are the identity",
            policy.kappa0(),
            policy.kappa1()
        );
    }
    table
}

fn oracle(problem: &Problem, kind: OracleKind, t0: f64, u0: Complex64, t: f64) -> anyhow::Result<Option<Complex64>> {
    let raw = &problem.raw;
    Ok(match kind {
        OracleKind::None => None,
        OracleKind::Exact => Some(exact_exp_macro(raw.rate, raw.gamma, raw.mu, &problem.osc, t0, u0, t, ORACLE_TOL)?),
        OracleKind::Rk4 => {
            let dt = max_micro_step(problem.osc.omega()) / 10.0;
            let traj = rk4_micro_solve(raw, &problem.osc, t0, &[u0], t, dt)?;
            Some(traj.last().expect("non-empty trajectory").1[0])
        }
    })
}

pub fn step(args: &RunArgs) -> anyhow::Result<Report> {
    let problem = Problem::from_args(args)?;
    let policy = args.policy(problem.osc.nu())?;
    let (t0, u0, h) = (args.t0(), args.u0()?, args.h()?);
    if args.phase_averaged && args.oracle() != OracleKind::None {
        return Err(config_error("an oracle comparison needs a definite phase; drop --phase-averaged"));
    }
    let table = scheme_for(&problem, &policy);
    let result = if args.phase_averaged {
        table.step_phase_averaged(&problem.field, t0, &[u0], h)?
    } else {
        table.step(&problem.field, t0, &[u0], h)?
    };

    let mut header = vec!["t_next".to_string(), "u_next".to_string()];
    let mut row = vec![fmt_real(result.t_next), fmt_complex(result.u_next[0])];
    if let Some(reference) = oracle(&problem, args.oracle(), t0, u0, result.t_next)? {
        header.extend(["oracle".to_string(), "error".to_string()]);
        row.extend([fmt_complex(reference), fmt_real((result.u_next[0] - reference).norm())]);
    }
    if args.contributions {
        for (entry, c) in table.entries().iter().zip(&result.contributions) {
            header.push(format!("c_{}", entry.word));
            row.push(fmt_complex(c[0]));
        }
    }
    let mut out = Table::new(header);
    out.push(row);
    Ok(out.into())
}

pub fn solve(args: &RunArgs) -> anyhow::Result<Report> {
    let problem = Problem::from_args(args)?;
    let policy = args.policy(problem.osc.nu())?;
    let (t0, u0, h, tend) = (args.t0(), args.u0()?, args.h()?, args.tend()?);
    let table = scheme_for(&problem, &policy);
    let traj = if args.phase_averaged {
        table.solve_phase_averaged(&problem.field, t0, &[u0], tend, h)
    } else {
        table.solve(&problem.field, t0, &[u0], tend, h)
    }
    .map_err(|e| match e {
        oscint::Error::InvalidArgument(msg) => config_error(msg),
        other => other.into(),
    })?;

    let kind = if args.phase_averaged { OracleKind::None } else { args.oracle() };
    let mut header = vec!["t".to_string(), "u".to_string()];
    if kind != OracleKind::None {
        header.extend(["oracle".to_string(), "error".to_string()]);
    }
    let mut out = Table::new(header);
    let mut previous = (t0, u0);
    for (t, u) in &traj {
        let mut row = vec![fmt_real(*t), fmt_complex(u[0])];
        if kind != OracleKind::None {
            let reference = if *t == t0 {
                u0
            } else {
                match kind {
                    // the closed form runs from the initial condition
                    OracleKind::Exact => oracle(&problem, kind, t0, u0, *t)?,
                    // micro steps continue from the previous reference state
                    _ => oracle(&problem, kind, previous.0, previous.1, *t)?,
                }
                .expect("oracle requested")
            };
            previous = (*t, reference);
            row.extend([fmt_complex(reference), fmt_real((u[0] - reference).norm())]);
        }
        out.push(row);
    }
    Ok(out.into())
}

pub fn converge(args: &RunArgs) -> anyhow::Result<Report> {
    let hs = args.hs(&[0.2, 0.14, 0.1, 0.07, 0.05])?;
    if hs.len() < 3 {
        return Err(config_error("converge needs at least three step sizes"));
    }
    let kind = match args.oracle() {
        OracleKind::None => OracleKind::Exact,
        other => other,
    };
    let (t0, u0) = (args.t0(), args.u0()?);
    let rho = args.rho.unwrap_or(2.0);
    let phases = args.phases.unwrap_or(1).max(1);
    let phi = args.phi.unwrap_or(0.0);

    let mut out = Table::new(vec!["h".into(), "omega".into(), "error".into()]);
    let mut points = Vec::with_capacity(hs.len());
    for &h in &hs {
        let omega = match args.coupling {
            Some(c) => 1.0 / (c * h.powf(rho)),
            None => args.omega.unwrap_or(100.0),
        };
        let problem = Problem::with_omega(args, omega)?;
        let policy = args.policy(problem.osc.nu())?;
        let table = scheme_for(&problem, &policy);
        let mut worst: f64 = 0.0;
        for j in 0..phases {
            let phase = phi + 2.0 * PI * j as f64 / phases as f64;
            let shifted = Problem {
                osc: problem.osc.with_phase(phase),
                ..problem.clone()
            };
            let stepped = table.with_phase(phase).step(&shifted.field, t0, &[u0], h)?.u_next[0];
            let reference = oracle(&shifted, kind, t0, u0, t0 + h)?.expect("oracle requested");
            worst = worst.max((stepped - reference).norm());
        }
        points.push((h, worst));
        out.push(vec![fmt_real(h), fmt_real(omega), fmt_real(worst)]);
    }
    let slope = fit_slope(&points).context("fitting the convergence slope")?;
    out.push(vec!["slope".into(), String::new(), fmt_real(slope)]);
    Ok(out.into())
}

pub fn termcount(args: &RunArgs) -> anyhow::Result<Report> {
    let as_int = |x: Option<f64>, default: u32, name: &str| -> anyhow::Result<u32> {
        let x = x.unwrap_or(f64::from(default));
        if x.fract() != 0.0 || !(1.0..=64.0).contains(&x) {
            return Err(config_error(format!("{name} must be a positive integer, got {x}")));
        }
        Ok(x as u32)
    };
    let kappa = as_int(args.kappa, 4, "kappa")?;
    let rho = as_int(args.rho, 1, "rho")?;
    let count = term_count(kappa, rho)?;
    let enumerated = enumerate_words(&term_count_policy(kappa, rho)?).len();
    let mut out = Table::new(vec!["kappa".into(), "rho".into(), "count".into(), "enumerated".into()]);
    out.push(vec![kappa.to_string(), rho.to_string(), count.to_string(), enumerated.to_string()]);
    Ok(out.into())
}

pub fn bounds(args: &RunArgs) -> anyhow::Result<Report> {
    let hs = args.hs(&[0.2, 0.1, 0.05])?;
    let omegas = args.omegas(&[50.0, 100.0, 200.0])?;
    let kind = match args.oracle() {
        OracleKind::None => OracleKind::Exact,
        other => other,
    };
    let (t0, u0) = (args.t0(), args.u0()?);
    let radius = args.box_radius.unwrap_or(1.0);
    let first = TruncationPolicy::new(1.0, 1.0)?;
    let second = TruncationPolicy::new(2.0, 2.0)?;

    let mut out = Table::new(
        ["h", "omega", "k1", "k2", "error_r11", "bound_r11", "error_r22", "bound_r22", "satisfied"]
            .map(String::from)
            .to_vec(),
    );
    let mut all = true;
    for &h in &hs {
        for &omega in &omegas {
            let problem = Problem::with_omega(args, omega)?;
            let (k1, k2) = match args.k {
                Some(k) => (k, k),
                None => {
                    let region = SampleBox::new((t0, t0 + h), vec![(u0.re - radius, u0.re + radius)], 9)
                        .map_err(|e| config_error(e.to_string()))?;
                    (estimate_k(&problem.field, &region, 1)?, estimate_k(&problem.field, &region, 2)?)
                }
            };
            let reference = oracle(&problem, kind, t0, u0, t0 + h)?.expect("oracle requested");
            let vnorm = problem.osc.norm();
            let mut cells = vec![fmt_real(h), fmt_real(omega), fmt_real(k1), fmt_real(k2)];
            let mut ok = true;
            for (policy, k, bound) in [(&first, k1, bound_r11 as fn(&BoundInputs) -> f64), (&second, k2, bound_r22)] {
                let stepped = build_scheme(&problem.osc, policy).step(&problem.field, t0, &[u0], h)?.u_next[0];
                let error = (stepped - reference).norm();
                let b = bound(&BoundInputs::new(k, vnorm, h, omega)?);
                ok &= error <= b;
                cells.extend([fmt_real(error), fmt_real(b)]);
            }
            all &= ok;
            cells.push(ok.to_string());
            out.push(cells);
        }
    }
    Ok(Report { table: out, satisfied: all })
}

pub fn stochastic_check(args: &RunArgs) -> anyhow::Result<Report> {
    let kappa = args.kappa.ok_or_else(|| config_error("stochastic-check needs --kappa"))?;
    let rho_prime = args
        .rho_prime
        .or(args.rho)
        .ok_or_else(|| config_error("stochastic-check needs --rho-prime (or --rho)"))?;
    let scheme = args.scheme()?;
    let policy = TruncationPolicy::new(kappa, kappa / rho_prime).map_err(|e| config_error(e.to_string()))?;
    let words: Vec<String> = enumerate_words(&policy).iter().map(ToString::to_string).collect();
    let matches = policy_matches_scheme(kappa, rho_prime, scheme)?;
    let mut out = Table::new(
        ["kappa", "rho_prime", "scheme", "retained_words", "matches"]
            .map(String::from)
            .to_vec(),
    );
    out.push(vec![
        fmt_real(kappa),
        fmt_real(rho_prime),
        format!("{scheme:?}").to_lowercase(),
        words.join(" "),
        matches.to_string(),
    ]);
    Ok(out.into())
}
