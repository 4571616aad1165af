//! Ascent on `J(v) = -sum w_k v_k + |mu| log V(v)` with
//! `V(v) = int e^{-phi*} omega`, `phi*(y) = max_k <x_k, y> - v_k`.
//!
//! The integrand `min_k e^{v_k - <x_k, y>} omega(y)` is jointly log-concave
//! in `(v, y)` when `omega` is, so `J` is concave for log-concave weights.
//! It is invariant under `v + c`, and its stationary points are exactly
//! `m_k / V = w_k / |mu|`.

use serde::Serialize;

use crate::convex_core::grid::Grid;
use crate::convex_core::logconcave::LogConcaveFunction;
use crate::convex_core::prototype::{lower_envelope, ClosedFormPrototype};
use crate::convex_core::Point;
use crate::curvature_measures::measure::{compare, DiscreteMeasure, MeasureComparison};
use crate::curvature_measures::ops::{euclidean_curvature_measure_on, euclidean_curvature_measure_subdivided};
use crate::error::{Error, Result};
use crate::orlicz_moments::moments::{admit_weight, f_omega};
use crate::orlicz_moments::weight::WeightFunction;

use super::cells::{cell_masses, solver_dual_grid, CellMasses};
use super::target::{check_solvability_condition, SolvabilityReport, SolvabilityVerdict, TargetMeasure};

pub const DEFAULT_KKT_TOL: f64 = 1e-4;
pub const DEFAULT_MAX_ITERATIONS: usize = 20_000;
pub const ARMIJO: f64 = 1e-4;
pub const BACKTRACK: f64 = 0.5;
pub const MIN_STEP: f64 = 1e-12;
/// Consecutive stalled line searches before giving up.
pub const STALL_LIMIT: usize = 50;
/// Tolerance of the concavity certificate.
pub const CONCAVITY_TOL: f64 = 1e-8;
/// Quadrature sub-cells per axis for the recovered measure.
pub const RECOVERY_SUBCELLS: [usize; 2] = [8, 8];

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub kkt_tol: f64,
    /// Dual grid; chosen from the slopes of `mu` when absent.
    pub grid: Option<Grid>,
    pub force: bool,
    pub max_iterations: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            kkt_tol: DEFAULT_KKT_TOL,
            grid: None,
            force: false,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub iteration: usize,
    /// `J / |mu|`.
    pub objective: f64,
    pub kkt_residual: f64,
    pub step: f64,
}

/// A priori bound `a / e <= F_omega(zeta / (2 int phi dmu + 2 |mu|))` for the
/// normalized potentials `phi - phi(o)` met along the iteration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentBoundCheck {
    pub checked: usize,
    pub holds: bool,
    /// Smallest `ln F_omega(..) - ln(a / e)`.
    pub worst_log_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcavityCheck {
    pub segments: usize,
    /// Concavity is only expected for log-concave weights.
    pub applicable: bool,
    /// Largest excess of the chord over `J / |mu|`.
    pub max_violation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    /// Converged offsets, centred so that `sum w_k v_k = 0`.
    pub v: Vec<f64>,
    /// `f0 = (|mu| / V) e^{-phi*}` as a max-affine potential.
    pub solution: ClosedFormPrototype,
    /// `|mu| / V`.
    pub scale: f64,
    /// Cell masses of `f0`, `|mu| m_k / V`.
    pub masses: Vec<f64>,
    pub recovered_measure: DiscreteMeasure,
    pub w1_to_target: f64,
    pub mass_gap: f64,
    pub per_atom_mass_errors: Vec<f64>,
    pub iterations: usize,
    pub kkt_residual: f64,
    pub tail_fraction: f64,
    pub dual_grid: Grid,
    pub solvability: SolvabilityReport,
    pub condition_verdict: SolvabilityVerdict,
    pub moment_bound: MomentBoundCheck,
    pub concavity: ConcavityCheck,
    /// `phi0(o)` for `f0 = e^{-phi0}`; expected positive.
    pub phi0_at_origin: f64,
    pub phi0_positive: bool,
    pub trace: Vec<TracePoint>,
}

impl SolveReport {
    pub fn f0(&self) -> LogConcaveFunction {
        self.solution.clone().into()
    }
}

struct Problem<'a> {
    points: Vec<Point>,
    p: Vec<f64>,
    pair: &'a [usize],
    omega: &'a WeightFunction,
    grid: &'a Grid,
}

struct State {
    v: Vec<f64>,
    cells: CellMasses,
    objective: f64,
    grad: Vec<f64>,
    residual: f64,
}

impl Problem<'_> {
    fn eval(&self, v: Vec<f64>) -> Result<State> {
        let cells = cell_masses(&v, &self.points, self.omega, self.grid)?;
        let objective = cells.total.ln() - self.p.iter().zip(&v).map(|(p, v)| p * v).sum::<f64>();
        let grad: Vec<f64> = self
            .p
            .iter()
            .zip(&cells.masses)
            .map(|(p, m)| m / cells.total - p)
            .collect();
        let residual = grad.iter().fold(0.0f64, |a, g| a.max(g.abs()));
        Ok(State {
            v,
            cells,
            objective,
            grad,
            residual,
        })
    }

    fn objective(&self, v: &[f64]) -> Result<f64> {
        let cells = cell_masses(v, &self.points, self.omega, self.grid)?;
        Ok(cells.total.ln() - self.p.iter().zip(v).map(|(p, v)| p * v).sum::<f64>())
    }

    /// Pairs share their offset and the weighted mean is zero.
    fn normalize(&self, mut v: Vec<f64>) -> Vec<f64> {
        let sym: Vec<f64> = (0..v.len()).map(|k| 0.5 * (v[k] + v[self.pair[k]])).collect();
        v.copy_from_slice(&sym);
        let mean: f64 = self.p.iter().zip(&v).map(|(p, v)| p * v).sum();
        v.iter_mut().for_each(|x| *x -= mean);
        v
    }
}

fn moment_bound(
    points: &[Point],
    weights: &[f64],
    state: &State,
    omega: &WeightFunction,
    zeta: f64,
    total: f64,
    dim: usize,
) -> Option<f64> {
    let phi = |x: &Point| lower_envelope(dim, points, &state.v, x);
    let phi_o = phi(&[0.0, 0.0])?;
    let mut integral = 0.0;
    for (x, w) in points.iter().zip(weights) {
        integral += w * (phi(x)? - phi_o);
    }
    let a = state.cells.total * (-phi_o).exp();
    let f = f_omega(omega, zeta / (2.0 * integral + 2.0 * total)).ok()?;
    Some(f.ln() - (a.ln() - 1.0))
}

/// Solves `mu = C^e_omega(f0, .)` for an even discrete `mu`.
pub fn solve(mu: &TargetMeasure, omega: &WeightFunction, options: &SolveOptions) -> Result<SolveReport> {
    let dim = mu.dim();
    if omega.dim() != dim {
        return Err(Error::GridMismatch {
            left: dim,
            right: omega.dim(),
        });
    }
    if !omega.is_even() {
        return Err(Error::NotEven(format!("weight {} is not even", omega.label())));
    }
    admit_weight(omega)?;
    let solvability = check_solvability_condition(omega, mu)?;
    if solvability.verdict == SolvabilityVerdict::Inconclusive && !options.force {
        return Err(Error::ConditionUnverified(format!(
            "liminf probe for {} is inconclusive; rerun with force",
            omega.label()
        )));
    }
    let points = mu.points();
    let weights = mu.weights();
    let total = mu.total_mass();
    let zeta = mu.zeta()?;
    let grid = match &options.grid {
        Some(g) if g.dim() != dim => {
            return Err(Error::GridMismatch {
                left: dim,
                right: g.dim(),
            })
        }
        Some(g) => g.clone(),
        None => solver_dual_grid(&points, dim, None)?,
    };
    let problem = Problem {
        points: points.clone(),
        p: weights.iter().map(|w| w / total).collect(),
        pair: mu.pair(),
        omega,
        grid: &grid,
    };

    let mut state = problem.eval(vec![0.0; points.len()])?;
    let mut trace = vec![TracePoint {
        iteration: 0,
        objective: state.objective,
        kkt_residual: state.residual,
        step: 0.0,
    }];
    let mut iterates = vec![state.v.clone()];
    let mut bound = MomentBoundCheck {
        checked: 0,
        holds: true,
        worst_log_margin: f64::INFINITY,
    };
    let record_bound = |s: &State, bound: &mut MomentBoundCheck| {
        if let Some(margin) = moment_bound(&points, &weights, s, omega, zeta, total, dim) {
            bound.checked += 1;
            bound.worst_log_margin = bound.worst_log_margin.min(margin);
            bound.holds &= margin >= -1e-9;
        }
    };
    record_bound(&state, &mut bound);
    let mut stalls = 0;
    let mut iteration = 0;
    while state.residual > options.kkt_tol {
        if iteration >= options.max_iterations {
            return Err(Error::NoProgress {
                iterations: iteration,
                residual: state.residual,
            });
        }
        iteration += 1;
        let slope: f64 = state.grad.iter().map(|g| g * g).sum();
        let mut step = 1.0;
        let mut accepted = None;
        while step >= MIN_STEP {
            let trial: Vec<f64> = state.v.iter().zip(&state.grad).map(|(v, g)| v + step * g).collect();
            match problem.eval(problem.normalize(trial)) {
                Ok(next) if next.objective >= state.objective + ARMIJO * step * slope => {
                    accepted = Some(next);
                    break;
                }
                Ok(_) | Err(Error::TruncationUnreliable { .. }) => step *= BACKTRACK,
                Err(e) => return Err(e),
            }
        }
        match accepted {
            Some(next) if next.objective > state.objective => {
                stalls = 0;
                state = next;
            }
            _ => {
                stalls += 1;
                if stalls >= STALL_LIMIT {
                    return Err(Error::NoProgress {
                        iterations: iteration,
                        residual: state.residual,
                    });
                }
                continue;
            }
        }
        trace.push(TracePoint {
            iteration,
            objective: state.objective,
            kkt_residual: state.residual,
            step,
        });
        iterates.push(state.v.clone());
        if iteration <= 20 || iteration % 10 == 0 {
            record_bound(&state, &mut bound);
        }
    }
    record_bound(&state, &mut bound);
    let concavity = concavity_check(&problem, &iterates)?;

    let scale = total / state.cells.total;
    let offsets: Vec<f64> = state.v.iter().map(|v| v + scale.ln()).collect();
    let solution = ClosedFormPrototype::max_affine(dim, points.clone(), offsets)?;
    let f0: LogConcaveFunction = solution.clone().into();
    let recovered = euclidean_curvature_measure_subdivided(&f0, omega, &grid, RECOVERY_SUBCELLS[dim - 1])?;
    let recovered_measure = recovered.measure;
    let cmp = compare(&recovered_measure, mu.measure())?;
    let per_atom_mass_errors = per_atom_errors(&recovered_measure, mu);
    let phi0_at_origin = lower_envelope(dim, &points, &state.v, &[0.0, 0.0]).unwrap_or(f64::NAN) + scale.ln();
    Ok(SolveReport {
        masses: state.cells.masses.iter().map(|m| m * scale).collect(),
        v: state.v,
        solution,
        scale,
        recovered_measure,
        w1_to_target: cmp.w1_distance,
        mass_gap: cmp.mass_gap,
        per_atom_mass_errors,
        iterations: iteration,
        kkt_residual: state.residual,
        tail_fraction: state.cells.tail_fraction,
        dual_grid: grid,
        condition_verdict: solvability.verdict,
        solvability,
        moment_bound: bound,
        concavity,
        phi0_at_origin,
        phi0_positive: phi0_at_origin > 0.0,
        trace,
    })
}

/// Relative mass error of each target atom, matched within `1e-9`.
pub fn per_atom_errors(recovered: &DiscreteMeasure, mu: &TargetMeasure) -> Vec<f64> {
    mu.measure()
        .atoms
        .iter()
        .map(|a| (recovered.mass_near(&a.location, 1e-9) - a.mass).abs() / a.mass)
        .collect()
}

fn concavity_check(problem: &Problem<'_>, iterates: &[Vec<f64>]) -> Result<ConcavityCheck> {
    let n = iterates[0].len();
    let last = iterates.last().expect("at least one iterate");
    let mut segments: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    if iterates.len() > 1 {
        segments.push((iterates[0].clone(), last.clone()));
        segments.push((iterates[iterates.len() / 2].clone(), last.clone()));
    }
    // deterministic symmetric perturbations around the final point
    for j in 1..=3 {
        let d: Vec<f64> = (0..n)
            .map(|k| 0.5 * ((k.min(problem.pair[k]) + 1) as f64 * j as f64).sin())
            .collect();
        segments.push((last.clone(), last.iter().zip(&d).map(|(v, d)| v + d).collect()));
    }
    let mut max_violation = f64::NEG_INFINITY;
    for (a, b) in &segments {
        let (fa, fb) = (problem.objective(a)?, problem.objective(b)?);
        for s in [0.25, 0.5, 0.75] {
            let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| (1.0 - s) * x + s * y).collect();
            let chord = (1.0 - s) * fa + s * fb;
            max_violation = max_violation.max(chord - problem.objective(&mid)?);
        }
    }
    Ok(ConcavityCheck {
        segments: segments.len(),
        applicable: problem.omega.is_log_concave(),
        max_violation,
        pass: max_violation <= CONCAVITY_TOL,
    })
}

/// Recomputes `C^e_omega(f0, .)` on a grid with twice the resolution.
pub fn verify_solution(
    f0: &LogConcaveFunction,
    mu: &TargetMeasure,
    omega: &WeightFunction,
) -> Result<MeasureComparison> {
    let base = match f0.as_closed() {
        Some(ClosedFormPrototype::MaxAffine { slopes, dim, .. }) => solver_dual_grid(slopes, *dim, None)?,
        _ => f0.natural_grid()?,
    };
    let grid = base.refined(2 * (base.m() - 1) + 1)?;
    let recovered = euclidean_curvature_measure_on(f0, omega, &grid, None)?;
    compare(&recovered.measure, mu.measure())
}
