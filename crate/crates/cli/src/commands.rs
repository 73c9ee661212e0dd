use std::path::Path;

use harmult_core::expansion::{io, poisson, poisson_closed_form, q_kernel, tail_degree, KernelSpec, TailKind};
use harmult_core::expansion::{Tolerance, ZonalSeries};
use harmult_core::lemmas::{self, Lemma1Grid};
use harmult_core::mult::{
    condition2_sup, equivalence_verdict, kernel_probe_radii, probe_operator_norm, CheckStatus,
    Condition2Options,
};
use harmult_core::quad::{direct_bergman_norm, mixed_norm, SpaceParams};
use harmult_core::{Error, LemmaReport, Multiplier, MultiplierFamily, ProbeFamily, Report, Result, TheoremParams};
use serde_json::json;

use crate::args::{KernelArgs, KernelKind, LemmaArgs, MultCheckArgs, NormArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ACCURACY: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;
pub const EXIT_INCONCLUSIVE: i32 = 5;

/// Tolerance of the `p = q` cross-check against the flat ball quadrature.
pub const NORM_CONSISTENCY_TOL: f64 = 1e-10;
/// Tolerance of the Poisson series against its closed form.
pub const POISSON_TOL: f64 = 1e-8;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Accuracy { .. } => EXIT_ACCURACY,
        _ => EXIT_USAGE,
    }
}

/// A finished command: its report and the process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub report: Report,
}

fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn cmd_norm(args: &NormArgs) -> Result<Outcome> {
    let f = io::parse_expansion(&read_input(&args.input)?)?;
    let space = SpaceParams::new(args.p, args.q, args.alpha, args.convention)?;
    let res = args.resolution.unwrap_or(4 * f.max_degree() + 16);
    let est = mixed_norm(&f, &space, args.radial_points, res, args.tol)?;

    let mut report = Report::new("norm", args.common.seed);
    report.parameters = json!({
        "input": args.input.display().to_string(),
        "dim": f.dim(),
        "kind": f.kind().as_str(),
        "max_degree": f.max_degree(),
        "p": args.p,
        "q": args.q,
        "alpha": args.alpha,
        "convention": args.convention.as_str(),
        "levels": est.levels,
    });
    report.values = json!({
        "norm": est.value,
        "coarse": est.coarse,
        "rel_delta": est.rel_delta,
    });
    report.tolerances = json!({ "refinement": args.tol });
    report.verdicts = json!({ "converged": true });
    if args.p == args.q && args.q.is_finite() {
        let (radial, sphere) = est.levels[1];
        let direct = direct_bergman_norm(&f, args.p, args.alpha, args.convention, radial, sphere)?;
        let consistency = if est.value == 0.0 {
            direct.abs()
        } else {
            ((direct - est.value) / est.value).abs()
        };
        report.values["direct_norm"] = json!(direct);
        report.values["consistency"] = json!(consistency);
        report.tolerances["consistency"] = json!(NORM_CONSISTENCY_TOL);
        let ok = consistency <= NORM_CONSISTENCY_TOL;
        report.verdicts["consistent"] = json!(ok);
        if !ok {
            return Ok(Outcome {
                code: EXIT_ACCURACY,
                report,
            });
        }
    }
    Ok(Outcome { code: EXIT_OK, report })
}

pub fn cmd_kernel(args: &KernelArgs) -> Result<Outcome> {
    let n = args.dim;
    if args.radius.is_empty() || args.cosine.is_empty() {
        return Err(Error::Usage("need at least one radius and one cosine".into()));
    }
    if let Some(&r) = args.radius.iter().find(|r| !(**r >= 0.0 && **r < 1.0)) {
        return Err(Error::Usage(format!("radii must lie in [0, 1), got {r}")));
    }
    if let Some(&t) = args.cosine.iter().find(|t| !(t.abs() <= 1.0)) {
        return Err(Error::Usage(format!("cosines must lie in [-1, 1], got {t}")));
    }
    let r_max = args.radius.iter().copied().fold(0.0, f64::max);
    let tail = match args.kind {
        KernelKind::Poisson => TailKind::Poisson,
        KernelKind::Q => TailKind::QKernel { m: args.m },
    };
    let degree = tail_degree(tail, n, r_max, args.tol)?;
    let mut pole = vec![0.0; n];
    pole[n - 1] = 1.0;
    let spec = KernelSpec::new(n, args.m, pole, degree)?;
    let kernel = match args.kind {
        KernelKind::Poisson => poisson(&spec)?,
        KernelKind::Q => q_kernel(&spec)?,
    };
    let ones = MultiplierFamily::Ones;
    let lazy = match args.kind {
        KernelKind::Poisson => ZonalSeries::new(n, None, &ones, 1.0)?,
        KernelKind::Q => ZonalSeries::new(n, Some(args.m), &ones, 2.0)?,
    };
    let table = lazy.table(r_max, Tolerance::Absolute(args.tol))?;

    let mut points = Vec::new();
    let mut worst: f64 = 0.0;
    for &r in &args.radius {
        for &t in &args.cosine {
            let mut x = vec![0.0; n];
            x[0] = (1.0 - t * t).max(0.0).sqrt();
            x[n - 1] = t;
            let value = kernel.evaluate(r, &x)?;
            let series = table.value(r, t);
            let mut point = json!({ "r": r, "t": t, "value": value, "lazy_series": series });
            if args.kind == KernelKind::Poisson {
                let closed = poisson_closed_form(n, r, t);
                let err = ((value - closed) / closed).abs();
                worst = worst.max(err);
                point["closed_form"] = json!(closed);
                point["rel_error"] = json!(err);
            }
            points.push(point);
        }
    }

    let mut report = Report::new("kernel", args.common.seed);
    report.parameters = json!({
        "kind": match args.kind { KernelKind::Poisson => "poisson", KernelKind::Q => "q" },
        "dim": n,
        "m": args.m,
        "truncation_degree": degree,
        "tail_tol": args.tol,
    });
    report.values = json!({ "points": points });
    report.tolerances = json!({ "tail": args.tol });
    let mut code = EXIT_OK;
    if args.kind == KernelKind::Poisson {
        report.values["max_rel_error"] = json!(worst);
        report.tolerances["closed_form"] = json!(POISSON_TOL);
        let ok = worst <= POISSON_TOL;
        report.verdicts = json!({ "matches_closed_form": ok });
        if !ok {
            code = EXIT_ACCURACY;
        }
    }
    Ok(Outcome { code, report })
}

/// Runs one lemma check with the documented defaults for unset options.
pub fn run_lemma(args: &LemmaArgs) -> Result<LemmaReport> {
    let seed = args.common.seed;
    let fast = args.common.fast;
    match args.id {
        1 => {
            let mut grid = Lemma1Grid::default();
            if fast {
                grid.step = 0.75;
                grid.r_step = 0.25;
                grid.theta_step *= 2.0;
            }
            lemmas::check_lemma1(args.dim.unwrap_or(2), args.beta.unwrap_or(1.0), &grid)
        }
        2 => lemmas::check_lemma2(
            args.alpha.unwrap_or(0.5),
            args.lambda.unwrap_or(2.0),
            3,
            args.rho_levels.unwrap_or(12),
        ),
        3 => lemmas::check_lemma3(args.dim.unwrap_or(3), seed, lemmas::SUITE_SIZE),
        4 => lemmas::check_lemma4(args.dim.unwrap_or(3), args.m.unwrap_or(2), args.k_max.unwrap_or(40)),
        5 => {
            let f = match &args.input {
                Some(path) => io::parse_expansion(&read_input(path)?)?,
                None => lemmas::lemma5_default_function(),
            };
            let top = args.rho_levels.unwrap_or(if fast { 8 } else { 12 });
            if top < 6 {
                return Err(Error::Usage(format!("lemma 5 needs --rho-levels >= 6, got {top}")));
            }
            let refinements: Vec<u32> = (0..5u32)
                .map(|i| (top + 2 * i).saturating_sub(8))
                .filter(|&j| j >= 1)
                .collect();
            lemmas::check_lemma5(
                args.p.unwrap_or(2.0),
                args.q.unwrap_or(0.5),
                args.beta.unwrap_or(0.0),
                &f,
                &refinements,
            )
        }
        6 => lemmas::check_lemma6(args.dim.unwrap_or(3), args.m.unwrap_or(2), seed, lemmas::SUITE_SIZE),
        id => Err(Error::Usage(format!("lemma id must be in 1..=6, got {id}"))),
    }
}

pub fn cmd_lemma(args: &LemmaArgs) -> Result<Outcome> {
    let lr = run_lemma(args)?;
    let mut report = Report::new("lemma", args.common.seed);
    report.parameters = json!({ "id": args.id, "grid": lr.parameter_grid, "fast": args.common.fast });
    report.values = serde_json::to_value(&lr).expect("lemma reports serialize");
    report.tolerances = json!({ "criterion": lr.tolerance });
    report.verdicts = json!({ "pass": lr.pass, "checks": lr.checks });
    Ok(Outcome {
        code: if lr.pass { EXIT_OK } else { EXIT_DISAGREEMENT },
        report,
    })
}

/// Grid settings of `mult-check` after defaults are applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultGrid {
    pub condition2: Condition2Options,
    pub probe_sizes_top: u32,
}

pub fn mult_grid(args: &MultCheckArgs) -> Result<MultGrid> {
    let j_max = args.rho_levels.unwrap_or(if args.common.fast { 10 } else { 12 });
    let mut condition2 = Condition2Options {
        j_max,
        rho_squared: args.rho_squared,
        ..Condition2Options::default()
    };
    if let Some(res) = args.resolution {
        condition2.panel_points = res;
        condition2.sphere_resolution = Some(res);
    }
    let probe_sizes_top = args.probe_levels.unwrap_or(match args.probe {
        ProbeFamily::QmKernels => j_max,
        ProbeFamily::RandomPolynomials => {
            if args.common.fast {
                5
            } else {
                6
            }
        }
    });
    Ok(MultGrid {
        condition2,
        probe_sizes_top,
    })
}

fn probe_sizes(family: ProbeFamily, top: u32) -> Result<Vec<f64>> {
    match family {
        ProbeFamily::QmKernels => {
            if !(5..=14).contains(&top) {
                return Err(Error::Usage(format!("--probe-levels for kernels must be in 5..=14, got {top}")));
            }
            Ok(kernel_probe_radii(3, top))
        }
        ProbeFamily::RandomPolynomials => {
            if !(4..=8).contains(&top) {
                return Err(Error::Usage(format!("--probe-levels for polynomials must be in 4..=8, got {top}")));
            }
            Ok((2..=top).map(|i| (1u32 << i) as f64).collect())
        }
    }
}

pub fn cmd_mult_check(args: &MultCheckArgs) -> Result<Outcome> {
    let params = TheoremParams::new(args.p, args.alpha, args.beta, args.m, args.dim)?;
    let c = Multiplier::parse(&args.multiplier)?;
    let grid = mult_grid(args)?;
    let sizes = probe_sizes(args.probe, grid.probe_sizes_top)?;
    let cond2 = condition2_sup(&c, &params, &grid.condition2)?;
    let probe = probe_operator_norm(&c, &params, args.probe, &sizes, args.common.seed)?;
    let check = equivalence_verdict(&cond2, &probe)?;

    let mut report = Report::new("mult-check", args.common.seed);
    report.parameters = json!({
        "theorem": params,
        "multiplier": c.label(),
        "condition2_grid": grid.condition2,
        "probe_family": args.probe.as_str(),
        "probe_sizes": sizes,
        "notes": params.notes(),
    });
    report.values = json!({
        "condition2": cond2,
        "probe": probe,
    });
    report.tolerances = json!({
        "condition2_slope": cond2.slope_tolerance,
        "condition2_tail": cond2.tail_tolerance,
        "probe_growth": probe.growth_tolerance,
    });
    report.verdicts = json!({
        "condition2": cond2.verdict.as_str(),
        "probe": probe.verdict.as_str(),
        "equivalence": check.status.as_str(),
    });
    let code = match check.status {
        CheckStatus::Pass => EXIT_OK,
        CheckStatus::Fail => EXIT_DISAGREEMENT,
        CheckStatus::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok(Outcome { code, report })
}
