//! The acceptance suite as a command: one line per criterion on the given
//! writer, and a report whose bytes depend only on the seed and `--fast`.

use std::io::Write;
use std::time::{Duration, Instant};

use harmult_core::expansion::{basis_blocks, poisson, poisson_closed_form, tail_degree, KernelSpec, TailKind};
use harmult_core::lemmas::{self, Lemma1Grid};
use harmult_core::mult::clear_integral_cache;
use harmult_core::quad::{mean_norm, sphere_rule};
use harmult_core::{report, MultiplierFamily, Report, Result};
use serde_json::{json, Map, Value};

use crate::args::{Common, MultCheckArgs};
use crate::commands::{cmd_mult_check, EXIT_OK};

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub measured: Value,
    pub tolerances: Value,
    pub runtime: Duration,
    pub budget: Option<Duration>,
}

impl Criterion {
    pub fn line(&self) -> String {
        let budget = match self.budget {
            Some(b) => format!(" (budget {} s)", b.as_secs()),
            None => String::new(),
        };
        format!(
            "[{}] {:>2} {}: {} tol {}; {:.2} s{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            compact(&self.measured),
            compact(&self.tolerances),
            self.runtime.as_secs_f64(),
            budget
        )
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", compact(v)))
            .collect::<Vec<_>>()
            .join(" "),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.3e}"),
            _ => n.to_string(),
        },
        Value::Array(items) => format!("<{} entries>", items.len()),
        other => other.to_string(),
    }
}

fn timed(
    id: u8,
    name: &'static str,
    budget: Option<u64>,
    body: impl FnOnce() -> Result<(bool, Value, Value)>,
) -> Result<Criterion> {
    let start = Instant::now();
    let (ok, measured, tolerances) = body()?;
    let runtime = start.elapsed();
    let budget = budget.map(Duration::from_secs);
    let in_budget = budget.is_none_or(|b| runtime <= b);
    Ok(Criterion {
        id,
        name,
        pass: ok && in_budget,
        measured,
        tolerances,
        runtime,
        budget,
    })
}

fn lemma4_exactness() -> Result<Criterion> {
    timed(1, "lemma 4 exactness", Some(5), || {
        let mut worst: f64 = 0.0;
        let mut ok = true;
        for n in 2..=5 {
            for m in 1..=5 {
                let r = lemmas::check_lemma4(n, m, 40)?;
                worst = worst.max(r.max_rel_error.unwrap_or(f64::INFINITY));
                ok &= r.pass;
            }
        }
        Ok((ok, json!({ "max_rel_error": worst }), json!({ "rel": lemmas::LEMMA4_TOL })))
    })
}

pub const ORTHONORMALITY_TOL: f64 = 1e-10;
pub const PARSEVAL_TOL: f64 = 1e-9;

fn orthonormality() -> Result<Criterion> {
    timed(2, "orthonormality", Some(10), || {
        let k_max = 16;
        let mut worst: f64 = 0.0;
        for n in [2, 3] {
            let rule = sphere_rule(n, 2 * k_max + 2)?;
            let values: Vec<Vec<f64>> = (0..rule.len())
                .map(|i| basis_blocks(n, k_max, rule.node(i)).map(|b| b.concat()))
                .collect::<Result<_>>()?;
            let len = values[0].len();
            for a in 0..len {
                for b in a..len {
                    let g: f64 = values.iter().zip(&rule.weights).map(|(v, w)| w * v[a] * v[b]).sum();
                    let target = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((g - target).abs());
                }
            }
        }
        Ok((
            worst <= ORTHONORMALITY_TOL,
            json!({ "max_gram_deviation": worst }),
            json!({ "abs": ORTHONORMALITY_TOL }),
        ))
    })
}

fn parseval(seed: u64) -> Result<Criterion> {
    timed(3, "parseval", None, || {
        let mut worst: f64 = 0.0;
        for n in [2, 3] {
            for t in lemmas::random_tuples(n, 16, 20, seed)? {
                let f = t.f;
                let rule = sphere_rule(n, 2 * f.max_degree() + 2)?;
                for r in [0.3, 0.7, 0.95] {
                    let m2 = mean_norm(&f, 2.0, r, &rule)?.powi(2);
                    let coeff: f64 = f
                        .blocks()
                        .iter()
                        .enumerate()
                        .map(|(k, b)| r.powi(2 * k as i32) * b.iter().map(|c| c * c).sum::<f64>())
                        .sum();
                    worst = worst.max(((m2 - coeff) / coeff).abs());
                }
            }
        }
        Ok((worst <= PARSEVAL_TOL, json!({ "max_rel_error": worst }), json!({ "rel": PARSEVAL_TOL })))
    })
}

pub const POISSON_TAIL_TOL: f64 = 1e-9;
pub const POISSON_CLOSED_TOL: f64 = 1e-8;

fn poisson_consistency() -> Result<Criterion> {
    timed(4, "poisson consistency", None, || {
        let mut worst: f64 = 0.0;
        let mut degrees = Map::new();
        for n in [2, 3] {
            let k = tail_degree(TailKind::Poisson, n, 0.95, POISSON_TAIL_TOL)?;
            degrees.insert(format!("K_n{n}"), json!(k));
            let mut pole = vec![0.0; n];
            pole[n - 1] = 1.0;
            let kernel = poisson(&KernelSpec::new(n, 0.0, pole, k)?)?;
            for r in [0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95] {
                for t in [-1.0, -0.5, 0.0, 0.5, 0.9, 0.99, 1.0] {
                    let mut x = vec![0.0; n];
                    x[0] = (1.0f64 - t * t).sqrt();
                    x[n - 1] = t;
                    let closed = poisson_closed_form(n, r, t);
                    worst = worst.max(((kernel.evaluate(r, &x)? - closed) / closed).abs());
                }
            }
        }
        let mut measured = json!({ "max_rel_error": worst });
        measured.as_object_mut().expect("object").extend(degrees);
        Ok((
            worst <= POISSON_CLOSED_TOL,
            measured,
            json!({ "rel": POISSON_CLOSED_TOL, "tail": POISSON_TAIL_TOL }),
        ))
    })
}

fn identities(seed: u64) -> Result<Criterion> {
    timed(5, "lemma 3 and 6 identities", Some(60), || {
        let mut ok = true;
        let (mut l3, mut l6): (f64, f64) = (0.0, 0.0);
        for n in [2, 3] {
            let a = lemmas::check_lemma3(n, seed, lemmas::SUITE_SIZE)?;
            let b = lemmas::check_lemma6(n, 2, seed, lemmas::SUITE_SIZE)?;
            ok &= a.pass && b.pass;
            l3 = l3.max(a.max_rel_error.unwrap_or(f64::INFINITY));
            l6 = l6.max(b.max_rel_error.unwrap_or(f64::INFINITY));
        }
        Ok((
            ok,
            json!({ "lemma3_max_rel_error": l3, "lemma6_max_rel_error": l6 }),
            json!({ "lemma3": lemmas::LEMMA3_TOL, "lemma6": lemmas::LEMMA6_TOL }),
        ))
    })
}

pub const LEMMA2_CLOSED_TOL: f64 = 1e-10;

fn lemma2_exponents(fast: bool) -> Result<Criterion> {
    let slope_tol = if fast { 0.1 } else { lemmas::LEMMA2_EXPONENT_TOL };
    timed(6, "lemma 2 exponents", None, || {
        let mut ok = true;
        let mut measured = Map::new();
        for (a, l) in [(0.0, 2.0), (0.5, 2.0), (1.0, 3.0)] {
            let r = lemmas::check_lemma2(a, l, 3, 12)?;
            let s = r.fitted_exponent.expect("lemma 2 fits an exponent");
            ok &= (s - (a - l + 1.0)).abs() <= slope_tol && r.checks["scaled_bounded"];
            measured.insert(format!("slope_{a}_{l}"), json!(s));
            measured.insert(format!("loglog_{a}_{l}"), json!(r.measured["loglog_slope"]));
        }
        let mut closed: f64 = 0.0;
        for j in 3..=12 {
            let h = 0.5f64.powi(j);
            let v = lemmas::lemma2_integral(0.0, 2.0, 1.0 - h)?;
            closed = closed.max((v * h - 1.0).abs());
        }
        ok &= closed <= LEMMA2_CLOSED_TOL;
        measured.insert("closed_form_rel_error".into(), json!(closed));
        Ok((
            ok,
            Value::Object(measured),
            json!({ "slope": slope_tol, "tail": lemmas::LEMMA2_TAIL_TOL, "closed_form": LEMMA2_CLOSED_TOL }),
        ))
    })
}

fn lemma1_consequence(fast: bool) -> Result<Criterion> {
    timed(7, "lemma 1 consequence", None, || {
        let mut grid = Lemma1Grid::default();
        if fast {
            grid.step = 0.75;
            grid.r_step = 0.25;
            grid.theta_step *= 2.0;
        }
        let mut ok = true;
        let mut measured = Map::new();
        for n in [2, 3] {
            for beta in [1.0, 2.0] {
                let r = lemmas::check_lemma1(n, beta, &grid)?;
                let e = r.fitted_exponent.expect("lemma 1 fits an exponent");
                ok &= e <= 1.0 + beta + lemmas::LEMMA1_EXPONENT_TOL;
                measured.insert(format!("exponent_n{n}_b{beta}"), json!(e));
                measured.insert(format!("printed_bound_n{n}_b{beta}"), json!(r.pass));
            }
        }
        Ok((ok, Value::Object(measured), json!({ "exponent_excess": lemmas::LEMMA1_EXPONENT_TOL })))
    })
}

fn mult_args(family: &str, alpha: f64, beta: f64, seed: u64, fast: bool) -> MultCheckArgs {
    MultCheckArgs {
        dim: 3,
        p: 1.0,
        alpha,
        beta,
        m: 2.0,
        multiplier: family.to_string(),
        rho_levels: None,
        resolution: None,
        probe: harmult_core::ProbeFamily::QmKernels,
        probe_levels: None,
        rho_squared: false,
        common: Common {
            seed,
            out: None,
            fast,
        },
    }
}

pub const IDENTITY_EXPONENT_TOL: f64 = 0.1;

fn identity_multiplier(seed: u64, fast: bool) -> Result<Criterion> {
    let exp_tol = if fast { 0.2 } else { IDENTITY_EXPONENT_TOL };
    timed(8, "identity multiplier", Some(300), || {
        let grid = [0.25, 0.5, 0.75];
        let mut ok = true;
        let mut cells = Vec::new();
        let mut worst_exp: f64 = 0.0;
        for &alpha in &grid {
            for &beta in &grid {
                let out = cmd_mult_check(&mult_args("ones", alpha, beta, seed, fast))?;
                let fitted = out.report.values["condition2"]["fitted_exponent"]
                    .as_f64()
                    .unwrap_or(f64::NAN);
                let verdict = out.report.verdicts["condition2"].as_str().unwrap_or("").to_string();
                let expected = if beta >= alpha { "bounded" } else { "unbounded" };
                worst_exp = worst_exp.max((fitted - 3.0).abs());
                ok &= out.code == EXIT_OK && verdict == expected && (fitted - 3.0).abs() <= exp_tol;
                cells.push(json!({
                    "alpha": alpha,
                    "beta": beta,
                    "exit": out.code,
                    "condition2": verdict,
                    "probe": out.report.verdicts["probe"],
                }));
            }
        }
        Ok((
            ok,
            json!({ "max_exponent_deviation": worst_exp, "cells": cells }),
            json!({ "exponent": exp_tol }),
        ))
    })
}

fn power_law_multipliers(seed: u64, fast: bool) -> Result<Criterion> {
    timed(9, "power-law multipliers", None, || {
        let alpha = 0.75;
        let mut ok = true;
        let mut cells = Vec::new();
        let mut agree = 0;
        for t in [0.0, 0.25, 0.5, 1.0] {
            for d in [-0.5, -0.25, 0.0, 0.25] {
                let family = MultiplierFamily::PowerLaw { t }.label();
                let out = cmd_mult_check(&mult_args(&family, alpha, alpha + d, seed, fast))?;
                ok &= out.code == EXIT_OK;
                agree += usize::from(out.code == EXIT_OK);
                cells.push(json!({
                    "t": t,
                    "beta_minus_alpha": d,
                    "exit": out.code,
                    "condition2": out.report.verdicts["condition2"],
                    "probe": out.report.verdicts["probe"],
                }));
            }
        }
        Ok((ok, json!({ "agreeing_cells": agree, "cells": cells }), json!({ "agreeing_cells": 16 })))
    })
}

/// Criteria 1-9, in order.
pub fn run_criteria(seed: u64, fast: bool) -> Result<Vec<Criterion>> {
    Ok(vec![
        lemma4_exactness()?,
        orthonormality()?,
        parseval(seed)?,
        poisson_consistency()?,
        identities(seed)?,
        lemma2_exponents(fast)?,
        lemma1_consequence(fast)?,
        identity_multiplier(seed, fast)?,
        power_law_multipliers(seed, fast)?,
    ])
}

/// The report of criteria 1-9; runtimes are left out so that it is reproducible.
pub fn criteria_report(criteria: &[Criterion], seed: u64, fast: bool) -> Report {
    let mut report = Report::new("selftest", seed);
    report.parameters = json!({ "fast": fast });
    let mut values = Map::new();
    let mut tolerances = Map::new();
    let mut verdicts = Map::new();
    for c in criteria {
        values.insert(c.id.to_string(), json!({ "name": c.name, "measured": c.measured }));
        tolerances.insert(c.id.to_string(), c.tolerances.clone());
        verdicts.insert(c.id.to_string(), json!(c.pass));
    }
    report.values = Value::Object(values);
    report.tolerances = Value::Object(tolerances);
    report.verdicts = Value::Object(verdicts);
    report
}

/// Runs criteria 1-9 twice from a cold cache and compares the serialized
/// reports byte for byte (criterion 10).
pub fn run_selftest(common: &Common, out: &mut dyn Write) -> Result<(bool, Report)> {
    let mut lines = |s: String| {
        let _ = writeln!(out, "{s}");
    };
    clear_integral_cache();
    let first = run_criteria(common.seed, common.fast)?;
    for c in &first {
        lines(c.line());
    }
    let mut report = criteria_report(&first, common.seed, common.fast);
    let start = Instant::now();
    clear_integral_cache();
    let second = run_criteria(common.seed, common.fast)?;
    let identical = report::to_json_string(&report) == report::to_json_string(&criteria_report(&second, common.seed, common.fast));
    let det = Criterion {
        id: 10,
        name: "determinism",
        pass: identical,
        measured: json!({ "identical_reports": identical }),
        tolerances: json!({ "bytes": "identical" }),
        runtime: start.elapsed(),
        budget: None,
    };
    lines(det.line());
    report.values["10"] = json!({ "name": det.name, "measured": det.measured });
    report.tolerances["10"] = det.tolerances.clone();
    report.verdicts["10"] = json!(identical);
    let all = first.iter().all(|c| c.pass) && identical;
    report.verdicts["all"] = json!(all);
    lines(format!(
        "selftest: {} of 10 criteria pass",
        first.iter().filter(|c| c.pass).count() + usize::from(identical)
    ));
    Ok((all, report))
}
