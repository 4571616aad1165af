use orlicz_core::convex_core::{asplund_sum_on, auto_dual_grid, legendre_transform, superlevel_set};
use orlicz_core::curvature_measures::{
    body_curvature_measure, coarea_check, default_binning, euclidean_curvature_measure_on, spherical_curvature_measure,
    weighted_total_variation,
};
use orlicz_core::minkowski_solver::{solve, verify_solution, SolvabilityVerdict, SolveOptions, TargetMeasure};
use orlicz_core::orlicz_moments::{classify_weight, f_growth_classification, f_omega, moment, moment_on};
use orlicz_core::variation::{geometric_variation, variation_check, VariationOptions, DEFAULT_ALPHA, DEFAULT_LADDER};
use orlicz_core::{asplund_sum, DiscreteMeasure, Grid, LogConcaveFunction, Point};
use serde_json::{json, Value};

use crate::io::{
    body_json, function_json, load_body, load_function, measure_csv, measure_json, parse_grid_flag, parse_list,
    parse_weight, read_measure, GridSpec,
};
use crate::{CliError, Command, Report};

/// `t = 2^k` for the F_omega sweep of `check-weight`.
const F_SWEEP: std::ops::RangeInclusive<i32> = -6..=6;

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn series(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

fn grid_override(flag: &Option<String>, dim: usize) -> Result<Option<Grid>, CliError> {
    flag.as_deref().map(|s| parse_grid_flag(s, dim)).transpose()
}

fn ladder(flag: &Option<String>) -> Result<Vec<f64>, CliError> {
    match flag {
        Some(s) => parse_list(s, "ladder"),
        None => Ok(DEFAULT_LADDER.to_vec()),
    }
}

fn measure_report(measure: &DiscreteMeasure, mut extra: Value) -> Result<Report, CliError> {
    extra["measure"] = measure_json(measure);
    Ok(Report {
        result: extra,
        measure_csv: Some(measure_csv(measure)?),
        ..Report::default()
    })
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::CheckWeight { weight, dim } => {
            let w = parse_weight(&weight.weight, *dim)?;
            let c = classify_weight(&w)?;
            let sweep: Vec<(f64, Option<f64>)> = F_SWEEP
                .map(|k| 2f64.powi(k))
                .map(|t| (t, f_omega(&w, t).ok()))
                .collect();
            let failures = c.failures();
            let mut report = Report {
                result: json!({
                    "classification": c,
                    "f_growth": f_growth_classification(&w),
                    "f_omega": sweep.iter().map(|(t, v)| json!({ "t": t, "value": v })).collect::<Vec<_>>(),
                }),
                plots: vec![(
                    "f_omega.csv".into(),
                    series("t,f_omega", sweep.iter().filter_map(|(t, v)| v.map(|v| vec![*t, v]))),
                )],
                ..Report::default()
            };
            if !failures.is_empty() {
                report.warnings = failures.iter().map(|f| format!("{f} fail")).collect();
                report.status = 2;
            }
            Ok(report)
        }
        Command::Moment { function, weight, grid } => {
            let f = load_function(function)?;
            let w = parse_weight(&weight.weight, f.f.dim())?;
            let grid = grid_override(grid, f.f.dim())?.or(f.grid.clone());
            let value = match &grid {
                Some(g) => moment_on(&f.f, &w, g)?,
                None => moment(&f.f, &w)?,
            };
            let mut report = Report {
                result: json!({
                    "value": value.value,
                    "moment": value,
                    "function": f.spec,
                    "weight": w.label(),
                    "grid": GridSpec::of(&grid.map_or_else(|| f.f.natural_grid(), Ok)?),
                }),
                ..Report::default()
            };
            if value.truncation_flag {
                report.warnings.push(format!(
                    "truncation flag: radius R and R/2 disagree by {:.3e}",
                    value.truncation_estimate
                ));
            }
            Ok(report)
        }
        Command::Legendre {
            function,
            grid,
            dual_grid,
        } => {
            let f = load_function(function)?;
            let dim = f.f.dim();
            let phi = match (grid_override(grid, dim)?, f.f.as_sampled()) {
                (None, Some(s)) => s.clone(),
                (g, _) => {
                    f.f.sample(&g.or(f.grid.clone()).map_or_else(|| f.f.natural_grid(), Ok)?)?
                }
            };
            let dual = match grid_override(dual_grid, dim)? {
                Some(g) => g,
                None => auto_dual_grid(&phi)?,
            };
            let conj = legendre_transform(&phi, &dual)?;
            let conj_f: LogConcaveFunction = conj.into();
            Ok(Report {
                result: json!({ "conjugate": function_json(&conj_f), "dual_grid": GridSpec::of(&dual) }),
                ..Report::default()
            })
        }
        Command::Asplund {
            function,
            other,
            t,
            grid,
        } => {
            let f = load_function(function)?;
            let g = load_function(other)?;
            let sum = match grid_override(grid, f.f.dim())?.or(f.grid.clone()) {
                Some(out) => asplund_sum_on(&f.f, *t, &g.f, &out)?,
                None => asplund_sum(&f.f, *t, &g.f)?,
            };
            Ok(Report {
                result: json!({ "t": t, "sum": function_json(&sum) }),
                ..Report::default()
            })
        }
        Command::LevelSet { function, s } => {
            let f = load_function(function)?;
            let body = superlevel_set(&f.f, *s)?;
            Ok(Report {
                result: json!({ "s": s, "body": body_json(&body), "volume": body.volume() }),
                ..Report::default()
            })
        }
        Command::CurvatureEuclidean {
            function,
            weight,
            grid,
            bin,
        } => {
            let f = load_function(function)?;
            let w = parse_weight(&weight.weight, f.f.dim())?;
            let grid = grid_override(grid, f.f.dim())?.map_or_else(|| f.grid_or_natural(), Ok)?;
            let r = euclidean_curvature_measure_on(&f.f, &w, &grid, None)?;
            let measure = if *bin {
                r.measure.binned(&default_binning(&r.measure, &grid)?)?
            } else {
                r.measure.clone()
            };
            let mut report = measure_report(
                &measure,
                json!({
                    "total_mass": r.total_mass,
                    "boundary_grade_mass": r.boundary_grade_mass,
                    "degenerate_gradient_field": r.degenerate_gradient_field,
                    "max_at_origin": r.max_at_origin,
                    "function": f.spec,
                    "weight": w.label(),
                    "grid": GridSpec::of(&grid),
                }),
            )?;
            if r.degenerate_gradient_field {
                report
                    .warnings
                    .push("gradient field is degenerate on a large share of the mass".into());
            }
            if !r.max_at_origin {
                report
                    .warnings
                    .push("function does not attain its maximum at the origin".into());
            }
            Ok(report)
        }
        Command::CurvatureSpherical { function, weight } => {
            let f = load_function(function)?;
            let w = parse_weight(&weight.weight, f.f.dim())?;
            let m = spherical_curvature_measure(&f.f, &w)?;
            measure_report(
                &m,
                json!({ "total_mass": m.total_mass(), "function": f.spec, "weight": w.label() }),
            )
        }
        Command::CurvatureBody { body, weight } => {
            let k = load_body(body, 2)?;
            let w = parse_weight(&weight.weight, k.dim())?;
            let m = body_curvature_measure(&k, &w)?;
            measure_report(
                &m,
                json!({ "total_mass": m.total_mass(), "body": body_json(&k), "weight": w.label() }),
            )
        }
        Command::Tv { function, body, weight } => {
            let f = load_function(function)?;
            let l = load_body(body, f.f.dim())?;
            let w = parse_weight(&weight.weight, f.f.dim())?;
            let tv = weighted_total_variation(&f.f, &l, &w)?;
            Ok(Report {
                result: json!({ "total_variation": tv, "weight": w.label() }),
                ..Report::default()
            })
        }
        Command::CoareaCheck {
            function,
            body,
            weight,
            levels,
        } => {
            let f = load_function(function)?;
            let l = load_body(body, f.f.dim())?;
            let w = parse_weight(&weight.weight, f.f.dim())?;
            let r = coarea_check(&f.f, &l, &w, *levels)?;
            Ok(Report {
                plots: vec![(
                    "coarea_levels.csv".into(),
                    series("s,perimeter", r.levels.iter().map(|(s, p)| vec![*s, *p])),
                )],
                result: to_value(&r),
                ..Report::default()
            })
        }
        Command::VariationCheck {
            function,
            perturbation,
            weight,
            ladder: l,
            grid,
            alpha,
        } => {
            let f = load_function(function)?;
            let g = load_function(perturbation)?;
            let w = parse_weight(&weight.weight, f.f.dim())?;
            let options = VariationOptions {
                ladder: ladder(l)?,
                grid: grid_override(grid, f.f.dim())?,
                alpha: alpha.unwrap_or(DEFAULT_ALPHA),
            };
            let r = variation_check(&f.f, &g.f, &w, &options)?;
            let mut report = Report {
                plots: vec![(
                    "variation_ladder.csv".into(),
                    series(
                        "t,value,quotient",
                        r.ladder.iter().map(|p| vec![p.t, p.value, p.quotient]),
                    ),
                )],
                result: json!({
                    "numeric": r.numeric_derivative,
                    "closed_form": r.closed_form,
                    "gap": r.relative_gap,
                    "ladder": r.ladder,
                    "regularity": r.condition_alpha_check,
                    "outside_hypotheses": r.outside_hypotheses,
                    "weight": w.label(),
                }),
                ..Report::default()
            };
            if r.outside_hypotheses {
                report
                    .warnings
                    .push("origin regularity check failed; input is outside the hypotheses of the formula".into());
            }
            Ok(report)
        }
        Command::GeometricVariation {
            body,
            weight,
            g,
            ladder: l,
        } => {
            let k = load_body(body, 2)?;
            let w = parse_weight(&weight.weight, k.dim())?;
            let kk = k.clone();
            let gfn: Box<dyn Fn(&Point) -> f64> = match g.as_str() {
                "support" => Box::new(move |u| kk.support(u)),
                s => {
                    let c: f64 = s
                        .strip_prefix("const:")
                        .ok_or_else(|| CliError::Parse {
                            what: "g".into(),
                            msg: format!("expected const:c or support, got {s:?}"),
                        })?
                        .parse()
                        .map_err(|e: std::num::ParseFloatError| CliError::Parse {
                            what: "g".into(),
                            msg: e.to_string(),
                        })?;
                    Box::new(move |_| c)
                }
            };
            let r = geometric_variation(&k, gfn.as_ref(), &w, &ladder(l)?)?;
            Ok(Report {
                plots: vec![(
                    "variation_ladder.csv".into(),
                    series(
                        "t,value,quotient",
                        r.ladder.iter().map(|p| vec![p.t, p.value, p.quotient]),
                    ),
                )],
                result: json!({
                    "numeric": r.numeric_derivative,
                    "closed_form": r.closed_form,
                    "gap": r.relative_gap,
                    "ladder": r.ladder,
                    "body": body_json(&k),
                    "weight": w.label(),
                }),
                ..Report::default()
            })
        }
        Command::Solve {
            measure,
            weight,
            kkt_tol,
            grid,
            force,
            max_iterations,
        } => {
            let mu = TargetMeasure::new(read_measure(measure, false)?)?;
            let w = parse_weight(&weight.weight, mu.dim())?;
            let options = SolveOptions {
                kkt_tol: *kkt_tol,
                grid: grid_override(grid, mu.dim())?,
                force: *force,
                max_iterations: *max_iterations,
            };
            let r = solve(&mu, &w, &options)?;
            let mut warnings = Vec::new();
            if r.condition_verdict == SolvabilityVerdict::Inconclusive {
                warnings.push("solvability probe inconclusive; solved under --force".to_string());
            }
            if !r.phi0_positive {
                warnings.push(format!("phi0(o) = {:.4} is not positive", r.phi0_at_origin));
            }
            if !r.moment_bound.holds {
                warnings.push("a priori moment bound violated along the iteration".into());
            }
            if r.concavity.applicable && !r.concavity.pass {
                warnings.push(format!("concavity check failed by {:.3e}", r.concavity.max_violation));
            }
            let plots = vec![
                (
                    "kkt_trace.csv".to_string(),
                    series(
                        "iteration,objective,kkt_residual,step",
                        r.trace
                            .iter()
                            .map(|p| vec![p.iteration as f64, p.objective, p.kkt_residual, p.step]),
                    ),
                ),
                (
                    "solvability.csv".to_string(),
                    series("t,product", r.solvability.samples.iter().map(|(t, v)| vec![*t, *v])),
                ),
            ];
            let mut result = to_value(&r);
            result["recovered_measure"] = measure_json(&r.recovered_measure);
            result["weight"] = json!(w.label());
            Ok(Report {
                measure_csv: Some(measure_csv(&r.recovered_measure)?),
                result,
                warnings,
                plots,
                status: 0,
            })
        }
        Command::Verify {
            function,
            measure,
            weight,
        } => {
            let f = load_function(function)?;
            let mu = TargetMeasure::new(read_measure(measure, false)?)?;
            let w = parse_weight(&weight.weight, mu.dim())?;
            let c = verify_solution(&f.f, &mu, &w)?;
            Ok(Report {
                result: json!({ "comparison": c, "function": f.spec, "weight": w.label() }),
                ..Report::default()
            })
        }
    }
}
