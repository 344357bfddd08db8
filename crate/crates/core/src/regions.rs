//! Boundary assembly: weight-direction scans of rate regions, power-
//! splitting and time-sharing rate-energy frontiers, cross-user rate-energy
//! trade-offs and the joint rate-energy scalarization.
//!
//! Every scan direction is an independent work item: directions run in a
//! parallel map and results keep their index order, so sweeps are
//! deterministic under a fixed seed regardless of scheduling. Failed
//! directions are recorded as diagnostics rows and never abort a sweep.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::covopt::{
    chebyshev_bisect_spec, dpc_rates, BisectOptions, BsCoding, CovOptResult, MaxMinSpec,
    ObjectiveRow, RandomizationReport, Receiver, ScenarioKind,
};
use crate::error::OptError;
use crate::model::{NetworkInstance, D2D_PAIR};
use crate::pseudoopt::{
    apply_pseudo_scalars, build_improper_system, improper_bisect, validity_margins,
    ImproperFloor, ImproperObjective, ImproperOptions, ValidityMargin,
};
use crate::stats::{rates_and_energies, RateEnergyReport, TxDesign};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signaling {
    Proper,
    Improper,
}

impl Signaling {
    pub fn label(&self) -> &'static str {
        match self {
            Signaling::Proper => "proper",
            Signaling::Improper => "improper",
        }
    }
}

/// Sweep-level options, fanned out to the per-stage optimizers.
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub bisect_tol: f64,
    pub randomizations: usize,
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { bisect_tol: 1e-6, randomizations: 1000, seed: 1 }
    }
}

impl SweepOptions {
    fn bisect(&self, seed: u64) -> BisectOptions {
        BisectOptions {
            tol: self.bisect_tol,
            max_steps: 60,
            randomizations: self.randomizations,
            seed,
        }
    }

    fn improper(&self, seed: u64) -> ImproperOptions {
        ImproperOptions {
            tol: self.bisect_tol,
            max_steps: 60,
            randomizations: 500,
            seed,
        }
    }

    fn direction_seed(&self, index: usize) -> u64 {
        self.seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

/// One Pareto-scan result.
#[derive(Debug, Clone)]
pub struct BoundaryPoint {
    pub signaling: Signaling,
    /// Nominal scan weights (before clamping).
    pub weights: Vec<f64>,
    /// Achieved objective vector in scenario order.
    pub objectives: Vec<f64>,
    /// Power-splitting factor, for splitting scenarios.
    pub split: Option<f64>,
    /// Proper-stage Chebyshev value.
    pub gamma_star: f64,
    /// Improper-stage Chebyshev value (equals `gamma_star` for proper runs).
    pub lambda_star: f64,
    /// Relaxed-block ranks from the covariance stage.
    pub ranks: Vec<usize>,
    pub randomization: Option<RandomizationReport>,
    /// Rank of the relaxed lifted pseudo-covariance matrix, improper runs.
    pub lifted_rank: Option<usize>,
    /// Validity margins of the improper stage.
    pub margins: Vec<ValidityMargin>,
    /// The design realizing `objectives` (pseudo-covariances installed for
    /// improper points).
    pub design: TxDesign,
    pub runtime: Duration,
}

/// A scan outcome: failures carry their direction and reason.
#[derive(Debug, Clone)]
pub enum DirectionOutcome {
    Point(Box<BoundaryPoint>),
    Failed { signaling: Signaling, weights: Vec<f64>, split: Option<f64>, error: String },
}

impl DirectionOutcome {
    pub fn point(&self) -> Option<&BoundaryPoint> {
        match self {
            DirectionOutcome::Point(p) => Some(p),
            DirectionOutcome::Failed { .. } => None,
        }
    }
}

/// An ordered sweep with its non-dominated subset.
#[derive(Debug, Clone)]
pub struct RegionSweep {
    pub scenario: String,
    pub outcomes: Vec<DirectionOutcome>,
}

impl RegionSweep {
    pub fn points(&self, signaling: Signaling) -> impl Iterator<Item = &BoundaryPoint> {
        self.outcomes
            .iter()
            .filter_map(|o| o.point())
            .filter(move |p| p.signaling == signaling)
    }

    /// Indices (into `outcomes`) of the mutually non-dominated points of one
    /// signaling mode, in stable order.
    pub fn pareto_subset(&self, signaling: Signaling) -> Vec<usize> {
        let candidates: Vec<(usize, &Vec<f64>)> = self
            .outcomes
            .iter()
            .enumerate()
            .filter_map(|(i, o)| o.point().map(|p| (i, p)))
            .filter(|(_, p)| p.signaling == signaling)
            .map(|(i, p)| (i, &p.objectives))
            .collect();
        let vectors: Vec<Vec<f64>> = candidates.iter().map(|(_, v)| (*v).clone()).collect();
        pareto_filter(&vectors).into_iter().map(|k| candidates[k].0).collect()
    }
}

/// Removes dominated points (all objectives maximized). Stable order; exact
/// duplicates keep their first occurrence.
pub fn pareto_filter(points: &[Vec<f64>]) -> Vec<usize> {
    let dominates = |a: &[f64], b: &[f64]| -> bool {
        a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
    };
    let mut kept = Vec::new();
    'outer: for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            if dominates(q, p) || (p == q && j < i) {
                continue 'outer;
            }
        }
        kept.push(i);
    }
    kept
}

// ---------------------------------------------------------------------------
// Direction solver shared by every scenario
// ---------------------------------------------------------------------------

/// Full description of one scan direction.
struct DirectionProblem {
    /// Objective rows with clamped weights (endpoints keep only the active
    /// row), installed in the covariance-stage spec.
    spec: MaxMinSpec,
    /// Rows reported as the objective vector (scenario order, independent of
    /// endpoint reduction).
    report_rows: Vec<ObjectiveRow>,
    /// Nominal weights for bookkeeping.
    weights: Vec<f64>,
    /// Splitting factor reported for this direction.
    split_label: Option<f64>,
}

/// Builds objective rows for a two-objective direction, reducing endpoints
/// to a single row.
fn two_objective_rows(
    make: impl Fn(usize) -> ObjectiveRow,
    set_weight: impl Fn(ObjectiveRow, f64) -> ObjectiveRow,
    alpha: f64,
) -> Vec<ObjectiveRow> {
    if alpha >= 1.0 {
        vec![set_weight(make(0), 1.0)]
    } else if alpha <= 0.0 {
        vec![set_weight(make(1), 1.0)]
    } else {
        vec![set_weight(make(0), alpha), set_weight(make(1), 1.0 - alpha)]
    }
}

fn with_weight(row: ObjectiveRow, weight: f64) -> ObjectiveRow {
    match row {
        ObjectiveRow::Rate { receiver, .. } => ObjectiveRow::Rate { receiver, weight },
        ObjectiveRow::Energy { receiver, .. } => ObjectiveRow::Energy { receiver, weight },
    }
}

/// Achieved values of the report rows at a design (pre-cancellation aware).
fn achieved(
    instance: &NetworkInstance,
    design: &TxDesign,
    report: &RateEnergyReport,
    rows: &[ObjectiveRow],
    coding: &BsCoding,
) -> Vec<f64> {
    let dpc = match coding {
        BsCoding::Tin => None,
        BsCoding::Dpc(order) => Some(dpc_rates(instance, design, order).expect("valid order")),
    };
    rows.iter()
        .map(|row| match row {
            ObjectiveRow::Rate { receiver: Receiver::Cellular(k), .. } => match &dpc {
                Some(rates) => rates[*k].total(),
                None => report.cell_rates[*k].total(),
            },
            ObjectiveRow::Rate { receiver: Receiver::D2d(j), .. } => {
                report.d2d_rates[*j].total()
            }
            ObjectiveRow::Energy { receiver: Receiver::Cellular(k), .. } => report.cell_energy[*k],
            ObjectiveRow::Energy { receiver: Receiver::D2d(j), .. } => report.d2d_energy[*j],
        })
        .collect()
}

fn solve_direction(
    instance: &NetworkInstance,
    problem: &DirectionProblem,
    signaling: Signaling,
    opts: &SweepOptions,
    seed: u64,
) -> Result<BoundaryPoint, OptError> {
    let start = Instant::now();
    let proper: CovOptResult =
        chebyshev_bisect_spec(&problem.spec, instance, &opts.bisect(seed))?;

    let (design, lambda_star, lifted_rank, margins) = match signaling {
        Signaling::Proper => (proper.design.clone(), proper.gamma_star, None, Vec::new()),
        Signaling::Improper => {
            let improper_objs: Vec<(Receiver, f64)> = problem
                .spec
                .rows
                .iter()
                .filter_map(|row| match row {
                    ObjectiveRow::Rate { receiver, weight } => Some((*receiver, *weight)),
                    ObjectiveRow::Energy { .. } => None,
                })
                .collect();
            if improper_objs.is_empty() {
                // Pure-energy directions have nothing to gain from
                // pseudo-covariances.
                (proper.design.clone(), proper.gamma_star, None, Vec::new())
            } else {
                let system = build_improper_system(
                    instance,
                    &proper.design,
                    problem.spec.split,
                    &problem.spec.coding,
                )?;
                let objectives: Vec<ImproperObjective> = improper_objs
                    .iter()
                    .map(|(receiver, weight)| ImproperObjective {
                        row: system.row_index(*receiver),
                        weight: *weight,
                    })
                    .collect();
                let floors: Vec<ImproperFloor> = problem
                    .spec
                    .rate_demands
                    .iter()
                    .enumerate()
                    .filter(|(_, &sigma)| sigma > 0.0)
                    .map(|(k, &sigma)| ImproperFloor {
                        row: system.row_index(Receiver::Cellular(k)),
                        min_rate: sigma,
                    })
                    .collect();
                let param =
                    improper_bisect(&system, &objectives, &floors, &opts.improper(seed))?;
                let margins = validity_margins(&system, &param.lifted);
                let design = apply_pseudo_scalars(&proper.design, &param.scalars)?;
                (design, param.lambda_star, Some(param.lifted_rank), margins)
            }
        }
    };

    let report = rates_and_energies(instance, &design, Some(problem.spec.split))?;
    let objectives = achieved(instance, &design, &report, &problem.report_rows, &problem.spec.coding);
    Ok(BoundaryPoint {
        signaling,
        weights: problem.weights.clone(),
        objectives,
        split: problem.split_label,
        gamma_star: proper.gamma_star,
        lambda_star,
        ranks: proper.ranks,
        randomization: proper.randomization,
        lifted_rank,
        margins,
        design,
        runtime: start.elapsed(),
    })
}

fn run_direction(
    instance: &NetworkInstance,
    problem: &DirectionProblem,
    signaling: Signaling,
    opts: &SweepOptions,
    seed: u64,
) -> DirectionOutcome {
    match solve_direction(instance, problem, signaling, opts, seed) {
        Ok(point) => DirectionOutcome::Point(Box::new(point)),
        Err(e) => DirectionOutcome::Failed {
            signaling,
            weights: problem.weights.clone(),
            split: problem.split_label,
            error: e.to_string(),
        },
    }
}

fn signaling_list(both: &[Signaling]) -> Vec<Signaling> {
    both.to_vec()
}

// ---------------------------------------------------------------------------
// Rate-region scans
// ---------------------------------------------------------------------------

/// Scans a two-objective rate region along `n_directions` uniformly spaced
/// weight directions, solving the covariance stage and (when requested) the
/// pseudo-covariance stage per direction.
pub fn scan_rate_region(
    instance: &NetworkInstance,
    kind: &ScenarioKind,
    coding: &BsCoding,
    signaling: &[Signaling],
    n_directions: usize,
    opts: &SweepOptions,
) -> RegionSweep {
    assert!(n_directions >= 2, "a scan needs at least two directions");
    let users = instance.config.users;
    let scenario = match kind {
        ScenarioKind::CellularRegion { .. } => "bc-region",
        ScenarioKind::D2dRegion { .. } => "d2d-region",
    };
    let directions: Vec<DirectionProblem> = (0..n_directions)
        .map(|i| {
            let alpha = i as f64 / (n_directions - 1) as f64;
            let (make, report_rows): (Box<dyn Fn(usize) -> ObjectiveRow>, Vec<ObjectiveRow>) =
                match kind {
                    ScenarioKind::CellularRegion { .. } => (
                        Box::new(|idx| ObjectiveRow::Rate {
                            receiver: Receiver::Cellular(idx),
                            weight: 1.0,
                        }),
                        (0..users)
                            .map(|k| ObjectiveRow::Rate {
                                receiver: Receiver::Cellular(k),
                                weight: 1.0,
                            })
                            .collect(),
                    ),
                    ScenarioKind::D2dRegion { .. } => (
                        Box::new(|idx| ObjectiveRow::Rate {
                            receiver: Receiver::D2d(idx),
                            weight: 1.0,
                        }),
                        (0..D2D_PAIR)
                            .map(|j| ObjectiveRow::Rate { receiver: Receiver::D2d(j), weight: 1.0 })
                            .collect(),
                    ),
                };
            let rows = two_objective_rows(&*make, with_weight, alpha);
            let mut spec = MaxMinSpec::new(rows, users);
            spec.coding = coding.clone();
            match kind {
                ScenarioKind::CellularRegion { energy_demand } => {
                    spec.energy_demands = energy_demand.clone();
                }
                ScenarioKind::D2dRegion { rate_demand } => {
                    spec.rate_demands = rate_demand.clone();
                }
            }
            DirectionProblem {
                spec,
                report_rows,
                weights: vec![alpha, 1.0 - alpha],
                split_label: None,
            }
        })
        .collect();

    let modes = signaling_list(signaling);
    let outcomes: Vec<DirectionOutcome> = modes
        .iter()
        .flat_map(|&mode| directions.iter().enumerate().map(move |(i, d)| (mode, i, d)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(mode, i, d)| run_direction(instance, d, mode, opts, opts.direction_seed(i)))
        .collect();
    RegionSweep { scenario: scenario.into(), outcomes }
}

// ---------------------------------------------------------------------------
// Power-splitting and time-sharing rate-energy frontiers
// ---------------------------------------------------------------------------

fn ps_direction(
    instance: &NetworkInstance,
    user: usize,
    alpha: f64,
    eta: f64,
    rate_demand: &[f64],
) -> DirectionProblem {
    let users = instance.config.users;
    let rows = if alpha >= 1.0 {
        vec![ObjectiveRow::Rate { receiver: Receiver::D2d(user), weight: 1.0 }]
    } else if alpha <= 0.0 {
        vec![ObjectiveRow::Energy { receiver: Receiver::D2d(user), weight: 1.0 }]
    } else {
        vec![
            ObjectiveRow::Rate { receiver: Receiver::D2d(user), weight: alpha },
            ObjectiveRow::Energy { receiver: Receiver::D2d(user), weight: 1.0 - alpha },
        ]
    };
    let report_rows = vec![
        ObjectiveRow::Rate { receiver: Receiver::D2d(user), weight: 1.0 },
        ObjectiveRow::Energy { receiver: Receiver::D2d(user), weight: 1.0 },
    ];
    let mut spec = MaxMinSpec::new(rows, users);
    spec.rate_demands = rate_demand.to_vec();
    spec.split[user] = eta;
    DirectionProblem { spec, report_rows, weights: vec![alpha, 1.0 - alpha], split_label: Some(eta) }
}

/// Rate-energy frontier of one D2D user under power splitting: for every
/// weight direction the splitting factor is searched exhaustively over a
/// uniform grid with one golden-section refinement pass around the best
/// cell.
pub fn ps_rate_energy(
    instance: &NetworkInstance,
    user: usize,
    n_directions: usize,
    eta_points: usize,
    rate_demand: &[f64],
    signaling: &[Signaling],
    opts: &SweepOptions,
) -> RegionSweep {
    assert!(n_directions >= 2 && eta_points >= 2);
    let modes = signaling_list(signaling);
    let work: Vec<(Signaling, usize)> = modes
        .iter()
        .flat_map(|&m| (0..n_directions).map(move |i| (m, i)))
        .collect();
    let outcomes: Vec<DirectionOutcome> = work
        .into_par_iter()
        .map(|(mode, i)| {
            let alpha = i as f64 / (n_directions - 1) as f64;
            let seed = opts.direction_seed(i);
            // Splitter extremes are forced at the endpoints: the rate is
            // monotone in eta and the harvested share in 1 - eta.
            if alpha >= 1.0 || alpha <= 0.0 {
                let eta = if alpha >= 1.0 { 1.0 } else { 0.0 };
                let problem = ps_direction(instance, user, alpha, eta, rate_demand);
                return run_direction(instance, &problem, mode, opts, seed);
            }
            let value_at = |eta: f64| -> (f64, DirectionOutcome) {
                let problem = ps_direction(instance, user, alpha, eta, rate_demand);
                let outcome = run_direction(instance, &problem, mode, opts, seed);
                let value = outcome
                    .point()
                    .map(|p| p.lambda_star)
                    .unwrap_or(f64::NEG_INFINITY);
                (value, outcome)
            };
            let mut best: Option<(f64, f64, DirectionOutcome)> = None;
            for g in 0..eta_points {
                let eta = g as f64 / (eta_points - 1) as f64;
                let (value, outcome) = value_at(eta);
                if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
                    best = Some((value, eta, outcome));
                }
            }
            let (mut best_value, best_eta, mut best_outcome) = best.expect("eta grid non-empty");
            // One golden-section pass inside the bracketing cells.
            let step = 1.0 / (eta_points - 1) as f64;
            let mut lo = (best_eta - step).max(0.0);
            let mut hi = (best_eta + step).min(1.0);
            let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
            for _ in 0..8 {
                let m1 = hi - phi * (hi - lo);
                let m2 = lo + phi * (hi - lo);
                let (v1, o1) = value_at(m1);
                let (v2, o2) = value_at(m2);
                if v1 >= v2 {
                    hi = m2;
                    if v1 > best_value {
                        best_value = v1;
                        best_outcome = o1;
                    }
                } else {
                    lo = m1;
                    if v2 > best_value {
                        best_value = v2;
                        best_outcome = o2;
                    }
                }
            }
            best_outcome
        })
        .collect();
    RegionSweep { scenario: "ps-rate-energy".into(), outcomes }
}

/// Time-sharing frontier: the pure-detection and pure-harvesting extreme
/// points plus the segment between them.
pub struct TimeSharing {
    pub id_point: DirectionOutcome,
    pub eh_point: DirectionOutcome,
}

impl TimeSharing {
    /// (rate, energy) on the segment at mixing coefficient `theta` (share of
    /// time spent detecting).
    pub fn segment(&self, theta: f64) -> Option<(f64, f64)> {
        let id = self.id_point.point()?;
        let eh = self.eh_point.point()?;
        Some((theta * id.objectives[0], (1.0 - theta) * eh.objectives[1]))
    }
}

/// Solves the two extremum problems of the time-sharing receiver. The
/// endpoints coincide with the `eta = 1` and `eta = 0` power-splitting
/// solves by construction.
pub fn ts_rate_energy(
    instance: &NetworkInstance,
    user: usize,
    rate_demand: &[f64],
    signaling: Signaling,
    opts: &SweepOptions,
) -> TimeSharing {
    let id_problem = ps_direction(instance, user, 1.0, 1.0, rate_demand);
    let eh_problem = ps_direction(instance, user, 0.0, 0.0, rate_demand);
    TimeSharing {
        id_point: run_direction(instance, &id_problem, signaling, opts, opts.direction_seed(0)),
        eh_point: run_direction(instance, &eh_problem, signaling, opts, opts.direction_seed(1)),
    }
}

// ---------------------------------------------------------------------------
// Cross-user rate-energy
// ---------------------------------------------------------------------------

/// Trade-off between one D2D user's rate and the other's harvested energy:
/// the information user consumes its full received power, the harvesting
/// user converts all of its own. Both role assignments are produced by
/// calling this once per `(info_user, energy_user)` pair.
pub fn cross_rate_energy(
    instance: &NetworkInstance,
    info_user: usize,
    energy_user: usize,
    n_directions: usize,
    rate_demand: &[f64],
    signaling: &[Signaling],
    opts: &SweepOptions,
) -> RegionSweep {
    assert!(info_user != energy_user, "roles must differ");
    assert!(n_directions >= 2);
    let users = instance.config.users;
    let directions: Vec<DirectionProblem> = (0..n_directions)
        .map(|i| {
            let alpha = i as f64 / (n_directions - 1) as f64;
            let rows = if alpha >= 1.0 {
                vec![ObjectiveRow::Rate { receiver: Receiver::D2d(info_user), weight: 1.0 }]
            } else if alpha <= 0.0 {
                vec![ObjectiveRow::Energy { receiver: Receiver::D2d(energy_user), weight: 1.0 }]
            } else {
                vec![
                    ObjectiveRow::Rate { receiver: Receiver::D2d(info_user), weight: alpha },
                    ObjectiveRow::Energy {
                        receiver: Receiver::D2d(energy_user),
                        weight: 1.0 - alpha,
                    },
                ]
            };
            let report_rows = vec![
                ObjectiveRow::Rate { receiver: Receiver::D2d(info_user), weight: 1.0 },
                ObjectiveRow::Energy { receiver: Receiver::D2d(energy_user), weight: 1.0 },
            ];
            let mut spec = MaxMinSpec::new(rows, users);
            spec.rate_demands = rate_demand.to_vec();
            spec.split[info_user] = 1.0;
            spec.split[energy_user] = 0.0;
            DirectionProblem {
                spec,
                report_rows,
                weights: vec![alpha, 1.0 - alpha],
                split_label: None,
            }
        })
        .collect();
    let modes = signaling_list(signaling);
    let outcomes: Vec<DirectionOutcome> = modes
        .iter()
        .flat_map(|&mode| directions.iter().enumerate().map(move |(i, d)| (mode, i, d)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(mode, i, d)| run_direction(instance, d, mode, opts, opts.direction_seed(i)))
        .collect();
    RegionSweep { scenario: "cross-rate-energy".into(), outcomes }
}

// ---------------------------------------------------------------------------
// Joint rate-energy scalarization
// ---------------------------------------------------------------------------

/// One point of the `(2K+2)`-dimensional joint region: D2D rates, cellular
/// rates and cellular energies stacked under a single Chebyshev weight
/// vector. Cellular harvesters use a separate antenna, so the full received
/// power is available to both chains; D2D receivers detect only.
/// Zero-weight entries drop out of the objective (they are reported but not
/// optimized).
pub fn joint_region(
    instance: &NetworkInstance,
    weights: &[f64],
    signaling: Signaling,
    opts: &SweepOptions,
) -> DirectionOutcome {
    let users = instance.config.users;
    let expected = 2 * users + D2D_PAIR;
    assert_eq!(weights.len(), expected, "joint weights must have 2K+2 entries");
    let report_rows: Vec<ObjectiveRow> = (0..D2D_PAIR)
        .map(|j| ObjectiveRow::Rate { receiver: Receiver::D2d(j), weight: 1.0 })
        .chain((0..users).map(|k| ObjectiveRow::Rate { receiver: Receiver::Cellular(k), weight: 1.0 }))
        .chain(
            (0..users).map(|k| ObjectiveRow::Energy { receiver: Receiver::Cellular(k), weight: 1.0 }),
        )
        .collect();
    let rows: Vec<ObjectiveRow> = report_rows
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(row, &w)| with_weight(row.clone(), w))
        .collect();
    let spec = MaxMinSpec::new(rows, users);
    let problem = DirectionProblem {
        spec,
        report_rows,
        weights: weights.to_vec(),
        split_label: None,
    };
    run_direction(instance, &problem, signaling, opts, opts.direction_seed(0))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::example_network;
    use approx::assert_abs_diff_eq;

    fn fast_opts() -> SweepOptions {
        SweepOptions { bisect_tol: 1e-5, randomizations: 200, seed: 7 }
    }

    #[test]
    fn pareto_filter_keeps_incomparable_points() {
        let pts = vec![vec![1.0, 1.0], vec![2.0, 0.0], vec![0.0, 2.0]];
        assert_eq!(pareto_filter(&pts), vec![0, 1, 2]);
    }

    #[test]
    fn pareto_filter_deduplicates_and_drops_dominated() {
        let dup = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert_eq!(pareto_filter(&dup), vec![0]);
        let dom = vec![vec![1.0, 1.0], vec![0.5, 0.5]];
        assert_eq!(pareto_filter(&dom), vec![0]);
    }

    #[test]
    fn rate_region_scan_orders_points_and_respects_weights() {
        let mut inst = example_network();
        inst.config.tx_noise_scale = 0.0;
        let kind = ScenarioKind::CellularRegion { energy_demand: vec![0.0, 0.0] };
        let sweep = scan_rate_region(
            &inst,
            &kind,
            &BsCoding::Tin,
            &[Signaling::Proper],
            4,
            &fast_opts(),
        );
        assert_eq!(sweep.outcomes.len(), 4);
        let points: Vec<_> = sweep.points(Signaling::Proper).collect();
        assert_eq!(points.len(), 4);
        // Endpoints are the single-user reductions.
        assert_abs_diff_eq!(points[0].objectives[1], 5.0f64.log2(), epsilon = 1e-3);
        assert_abs_diff_eq!(points[3].objectives[0], 5.0f64.log2(), epsilon = 1e-3);
        // Interior points equalize weighted rates.
        let p = points[1];
        assert_abs_diff_eq!(
            p.objectives[0] / p.weights[0],
            p.objectives[1] / p.weights[1],
            epsilon = 1e-2
        );
        // Closure: the stored design reproduces the stored objectives.
        let report = rates_and_energies(&inst, &p.design, Some(p.design_split())).unwrap();
        assert_abs_diff_eq!(report.cell_rates[0].total(), p.objectives[0], epsilon = 1e-6);
    }

    impl BoundaryPoint {
        fn design_split(&self) -> [f64; D2D_PAIR] {
            [1.0, 1.0]
        }
    }

    #[test]
    fn improper_points_dominate_proper_points_directionwise() {
        let mut inst = example_network();
        inst.config.tx_noise_scale = 0.0;
        let kind = ScenarioKind::CellularRegion { energy_demand: vec![3.0, 3.0] };
        let sweep = scan_rate_region(
            &inst,
            &kind,
            &BsCoding::Tin,
            &[Signaling::Proper, Signaling::Improper],
            3,
            &fast_opts(),
        );
        let proper: Vec<_> = sweep.points(Signaling::Proper).collect();
        let improper: Vec<_> = sweep.points(Signaling::Improper).collect();
        assert_eq!(proper.len(), improper.len());
        for (p, q) in proper.iter().zip(&improper) {
            assert!(
                q.lambda_star >= p.lambda_star - 1e-6,
                "improper {} below proper {}",
                q.lambda_star,
                p.lambda_star
            );
        }
    }

    #[test]
    fn ts_endpoints_match_ps_extremes() {
        let mut inst = example_network();
        inst.config.tx_noise_scale = 0.0;
        let opts = fast_opts();
        let ts = ts_rate_energy(&inst, 0, &[0.0, 0.0], Signaling::Proper, &opts);
        let id = ts.id_point.point().unwrap();
        let eh = ts.eh_point.point().unwrap();
        // Pure detection: no harvested share; pure harvesting: no rate.
        assert_abs_diff_eq!(id.objectives[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eh.objectives[0], 0.0, epsilon = 1e-12);
        // Fixed unit RSI and unit noise: rate endpoint is log2(1 + 2/2) = 1.
        assert_abs_diff_eq!(id.objectives[0], 1.0, epsilon = 1e-3);
        // Harvest endpoint: both transmitters beam at the user, 4 + 2 = 6.
        assert_abs_diff_eq!(eh.objectives[1], 6.0, epsilon = 1e-3);
        // Segment midpoint is the convex combination.
        let (r, e) = ts.segment(0.5).unwrap();
        assert_abs_diff_eq!(r, id.objectives[0] / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e, eh.objectives[1] / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn cross_sweep_recovers_single_rate_endpoint_at_degenerate_weight() {
        let mut inst = example_network();
        inst.config.tx_noise_scale = 0.0;
        let opts = fast_opts();
        let sweep = cross_rate_energy(&inst, 1, 0, 3, &[0.0, 0.0], &[Signaling::Proper], &opts);
        let points: Vec<_> = sweep.points(Signaling::Proper).collect();
        assert_eq!(points.len(), 3);
        // alpha = 1: the info user's single-rate optimum under unit RSI.
        assert_abs_diff_eq!(points[2].objectives[0], 1.0, epsilon = 1e-3);
        // alpha = 0: full-power harvesting at the energy user.
        assert!(points[0].objectives[1] >= 5.9);
    }

    #[test]
    fn joint_point_recovers_d2d_endpoint_under_concentrated_weight() {
        let mut inst = example_network();
        inst.config.tx_noise_scale = 0.0;
        let opts = fast_opts();
        let outcome =
            joint_region(&inst, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], Signaling::Proper, &opts);
        let p = outcome.point().unwrap();
        assert_abs_diff_eq!(p.objectives[0], 1.0, epsilon = 1e-3);
    }

    #[test]
    fn failed_directions_are_recorded_not_fatal() {
        let inst = example_network();
        // Unattainable energy demands make every direction infeasible.
        let kind = ScenarioKind::CellularRegion { energy_demand: vec![9.0, 9.0] };
        let sweep = scan_rate_region(
            &inst,
            &kind,
            &BsCoding::Tin,
            &[Signaling::Proper],
            2,
            &fast_opts(),
        );
        assert_eq!(sweep.outcomes.len(), 2);
        for o in &sweep.outcomes {
            match o {
                DirectionOutcome::Failed { error, .. } => {
                    assert!(error.contains("unattainable"), "got {error}");
                }
                DirectionOutcome::Point(_) => panic!("expected failure"),
            }
        }
    }
}
