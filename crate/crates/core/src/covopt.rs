//! Covariance-stage optimizers: weighted Chebyshev max-min problems over
//! transmit covariances, solved by bisection over semidefinite feasibility
//! subproblems with semidefinite relaxation, plus rank-1 beamformer recovery
//! via Gaussian randomization and a dirty-paper-coding baseline.
//!
//! All problems share one structure: maximize `Gamma` such that every
//! objective row `value_r / weight_r >= Gamma` admits a design meeting the
//! fixed demands (per-user energy floors, cellular QoS floors, power
//! budgets). Rate rows linearize through the trace form
//! `Tr(H C_desired) >= (2^(w*Gamma) - 1) * (interference traces + noise)`,
//! which is affine in the covariance blocks for fixed `Gamma`, so quasi-
//! convexity in `Gamma` makes bisection exact up to tolerance.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::OptError;
use crate::model::{peer, CVector, NetworkInstance, RsiMode, D2D_PAIR};
use crate::sdp::{
    self, diag_abs2, outer, BlockSpec, LinearForm, SdpProblem, Sense, SolveStatus, Tolerances,
};
use crate::stats::{rates_and_energies, RateEnergyReport, StreamCovariance, TxDesign};

/// Weight floor substituted for exact-zero Chebyshev weights to avoid
/// divisions by zero; axis endpoints should use single-objective rows
/// instead.
pub const WEIGHT_FLOOR: f64 = 1e-6;

/// Interference pre-cancellation at the BS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BsCoding {
    /// Linear precoding, every receiver treats interference as noise.
    Tin,
    /// Dirty-paper coding: the stream encoded at position `p` is free of
    /// interference from streams encoded earlier (positions `< p`).
    Dpc(Vec<usize>),
}

impl BsCoding {
    /// BS streams whose interference is absent at user `k`'s receiver.
    fn canceled_for(&self, user: usize) -> Vec<usize> {
        match self {
            BsCoding::Tin => Vec::new(),
            BsCoding::Dpc(order) => {
                let pos = order.iter().position(|&u| u == user).expect("user in order");
                order[..pos].to_vec()
            }
        }
    }
}

/// One receiver in the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Receiver {
    Cellular(usize),
    D2d(usize),
}

/// One row of a max-min objective: `achieved / weight >= Gamma`.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveRow {
    /// Achievable (proper) rate of a receiver.
    Rate { receiver: Receiver, weight: f64 },
    /// Harvested energy of a receiver. For D2D receivers the harvested share
    /// of the splitter applies; cellular harvesters capture the full
    /// incident power on a separate antenna.
    Energy { receiver: Receiver, weight: f64 },
}

impl ObjectiveRow {
    pub fn weight(&self) -> f64 {
        match self {
            ObjectiveRow::Rate { weight, .. } | ObjectiveRow::Energy { weight, .. } => *weight,
        }
    }
}

/// A fully specified max-min covariance problem.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxMinSpec {
    pub rows: Vec<ObjectiveRow>,
    /// Per-cellular-user incident-energy floors.
    pub energy_demands: Vec<f64>,
    /// Per-cellular-user rate floors (enforced in proper trace form).
    pub rate_demands: Vec<f64>,
    /// Power-splitting factor of each D2D receiver (1 = full detection).
    pub split: [f64; D2D_PAIR],
    pub coding: BsCoding,
}

impl MaxMinSpec {
    pub fn new(rows: Vec<ObjectiveRow>, users: usize) -> Self {
        MaxMinSpec {
            rows,
            energy_demands: vec![0.0; users],
            rate_demands: vec![0.0; users],
            split: [1.0; D2D_PAIR],
            coding: BsCoding::Tin,
        }
    }

    /// Value of one objective row under an evaluated report, divided by its
    /// weight.
    pub fn row_ratio(&self, row: &ObjectiveRow, report: &RateEnergyReport) -> f64 {
        match row {
            ObjectiveRow::Rate { receiver: Receiver::Cellular(k), weight } => {
                report.cell_rates[*k].total() / weight
            }
            ObjectiveRow::Rate { receiver: Receiver::D2d(j), weight } => {
                report.d2d_rates[*j].total() / weight
            }
            ObjectiveRow::Energy { receiver: Receiver::Cellular(k), weight } => {
                report.cell_energy[*k] / weight
            }
            ObjectiveRow::Energy { receiver: Receiver::D2d(j), weight } => {
                report.d2d_energy[*j] / weight
            }
        }
    }

    /// Chebyshev value of a report: the smallest weighted row ratio.
    pub fn objective_value(&self, report: &RateEnergyReport) -> f64 {
        self.rows
            .iter()
            .map(|r| self.row_ratio(r, report))
            .fold(f64::INFINITY, f64::min)
    }

    /// True when the report meets the fixed demands within `tol`.
    pub fn demands_met(&self, report: &RateEnergyReport, tol: f64) -> bool {
        self.energy_demands
            .iter()
            .enumerate()
            .all(|(k, &psi)| report.cell_energy[k] >= psi - tol)
            && self
                .rate_demands
                .iter()
                .enumerate()
                .all(|(k, &sig)| report.cell_rates[k].proper >= sig - tol)
    }
}

/// Scenario kinds exposed by the boundary scans.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioKind {
    /// Max-min over cellular rates under per-user energy demands.
    CellularRegion { energy_demand: Vec<f64> },
    /// Max-min over D2D rates under cellular rate demands.
    D2dRegion { rate_demand: Vec<f64> },
}

/// A scan scenario: problem kind plus a Chebyshev weight direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub weights: Vec<f64>,
    pub coding: BsCoding,
}

impl Scenario {
    pub fn cellular_region(weights: Vec<f64>, energy_demand: Vec<f64>) -> Self {
        Scenario { kind: ScenarioKind::CellularRegion { energy_demand }, weights, coding: BsCoding::Tin }
    }

    pub fn d2d_region(weights: Vec<f64>, rate_demand: Vec<f64>) -> Self {
        Scenario { kind: ScenarioKind::D2dRegion { rate_demand }, weights, coding: BsCoding::Tin }
    }

    pub fn with_coding(mut self, coding: BsCoding) -> Self {
        self.coding = coding;
        self
    }

    /// Weights normalized to the simplex with exact zeros clamped to
    /// [`WEIGHT_FLOOR`].
    pub fn clamped_weights(&self) -> Vec<f64> {
        let clamped: Vec<f64> = self.weights.iter().map(|&w| w.max(WEIGHT_FLOOR)).collect();
        let sum: f64 = clamped.iter().sum();
        clamped.into_iter().map(|w| w / sum).collect()
    }

    /// Expands the scenario into explicit objective rows and demands.
    pub fn to_spec(&self, instance: &NetworkInstance) -> MaxMinSpec {
        let users = instance.config.users;
        let weights = self.clamped_weights();
        let mut spec = match &self.kind {
            ScenarioKind::CellularRegion { energy_demand } => {
                let rows = (0..users)
                    .map(|k| ObjectiveRow::Rate { receiver: Receiver::Cellular(k), weight: weights[k] })
                    .collect();
                let mut s = MaxMinSpec::new(rows, users);
                s.energy_demands = energy_demand.clone();
                s
            }
            ScenarioKind::D2dRegion { rate_demand } => {
                let rows = (0..D2D_PAIR)
                    .map(|j| ObjectiveRow::Rate { receiver: Receiver::D2d(j), weight: weights[j] })
                    .collect();
                let mut s = MaxMinSpec::new(rows, users);
                s.rate_demands = rate_demand.clone();
                s
            }
        };
        spec.coding = self.coding.clone();
        spec
    }
}

// ---------------------------------------------------------------------------
// Feasibility problem assembly
// ---------------------------------------------------------------------------

/// A SINR expression in trace form: `numerator / (den_form + den_const)`.
struct SinrParts {
    numerator: LinearForm,
    den_form: LinearForm,
    den_const: f64,
}

/// Precomputed coefficient matrices of one max-min problem, reused across
/// bisection steps.
pub struct PreparedProblem<'a> {
    instance: &'a NetworkInstance,
    spec: &'a MaxMinSpec,
    blocks: Vec<BlockSpec>,
    rate_rows: Vec<(usize, SinrParts)>,
    energy_rows: Vec<(usize, LinearForm, f64)>,
    demand_rows: Vec<(LinearForm, f64)>,
    qos_rows: Vec<(SinrParts, f64)>,
}

fn bs_block(k: usize) -> usize {
    k
}

fn d2d_block(users: usize, j: usize) -> usize {
    users + j
}

impl<'a> PreparedProblem<'a> {
    pub fn new(instance: &'a NetworkInstance, spec: &'a MaxMinSpec) -> Self {
        let users = instance.config.users;
        let n = instance.config.bs_antennas;
        let m = instance.config.d2d_antennas;
        let mut blocks: Vec<BlockSpec> = (0..users)
            .map(|k| BlockSpec { name: format!("bs_stream_{}", k + 1), dim: n })
            .collect();
        for j in 0..D2D_PAIR {
            blocks.push(BlockSpec { name: format!("d2d_stream_{}", j + 1), dim: m });
        }

        let mut rate_rows = Vec::new();
        let mut energy_rows = Vec::new();
        for (idx, row) in spec.rows.iter().enumerate() {
            match row {
                ObjectiveRow::Rate { receiver, .. } => {
                    rate_rows.push((idx, sinr_parts(instance, *receiver, spec)));
                }
                ObjectiveRow::Energy { receiver, .. } => {
                    let (form, share) = match receiver {
                        Receiver::Cellular(k) => (cellular_energy_form(instance, *k), 1.0),
                        Receiver::D2d(j) => (d2d_energy_form(instance, *j), 1.0 - spec.split[*j]),
                    };
                    energy_rows.push((idx, form, share));
                }
            }
        }
        let demand_rows = spec
            .energy_demands
            .iter()
            .enumerate()
            .filter(|(_, &psi)| psi > 0.0)
            .map(|(k, &psi)| (cellular_energy_form(instance, k), psi))
            .collect();
        let qos_rows = spec
            .rate_demands
            .iter()
            .enumerate()
            .filter(|(_, &sig)| sig > 0.0)
            .map(|(k, &sig)| (sinr_parts(instance, Receiver::Cellular(k), spec), sig))
            .collect();
        PreparedProblem { instance, spec, blocks, rate_rows, energy_rows, demand_rows, qos_rows }
    }

    /// Assembles the feasibility SDP at candidate level `gamma`.
    pub fn at(&self, gamma: f64) -> SdpProblem {
        let mut problem = SdpProblem::feasibility(self.blocks.clone());
        let users = self.instance.config.users;
        for (idx, parts) in &self.rate_rows {
            let w = self.spec.rows[*idx].weight();
            // Clamped so absurd candidate levels stay finite (and plainly
            // infeasible) instead of overflowing to infinity.
            let threshold = (w * gamma).min(512.0).exp2() - 1.0;
            problem.constrain(
                combine(&parts.numerator, &parts.den_form, threshold),
                Sense::Ge,
                threshold * parts.den_const,
                format!("rate row {idx}"),
            );
        }
        for (idx, form, share) in &self.energy_rows {
            let w = self.spec.rows[*idx].weight();
            problem.constrain(form.scaled(*share), Sense::Ge, w * gamma, format!("energy row {idx}"));
        }
        for (k, (form, psi)) in self.demand_rows.iter().enumerate() {
            problem.constrain(form.clone(), Sense::Ge, *psi, format!("energy demand {k}"));
        }
        for (k, (parts, sigma)) in self.qos_rows.iter().enumerate() {
            let threshold = sigma.exp2() - 1.0;
            problem.constrain(
                combine(&parts.numerator, &parts.den_form, threshold),
                Sense::Ge,
                threshold * parts.den_const,
                format!("rate demand {k}"),
            );
        }
        let n = self.instance.config.bs_antennas;
        let m = self.instance.config.d2d_antennas;
        let mut bs_power = LinearForm::new();
        for k in 0..users {
            bs_power.add(bs_block(k), DMatrix::identity(n, n));
        }
        problem.constrain(bs_power, Sense::Le, self.instance.config.bs_power, "bs power");
        for j in 0..D2D_PAIR {
            problem.constrain(
                LinearForm::new().with(d2d_block(users, j), DMatrix::identity(m, m)),
                Sense::Le,
                self.instance.config.d2d_power,
                format!("d2d power {j}"),
            );
        }
        problem
    }

    /// Upper bracket for the bisection: the max-min level cannot exceed any
    /// single row's interference-free value, so the tightest row bounds it.
    pub fn gamma_upper(&self) -> f64 {
        let cfg = &self.instance.config;
        let ch = &self.instance.channels;
        let mut hi = f64::INFINITY;
        for row in &self.spec.rows {
            let bound = match row {
                ObjectiveRow::Rate { receiver: Receiver::Cellular(k), weight } => {
                    (1.0 + cfg.bs_power * ch.bs_to_cell[*k].norm_squared() / cfg.noise_var).log2()
                        / weight
                }
                ObjectiveRow::Rate { receiver: Receiver::D2d(j), weight } => {
                    let eta = self.spec.split[*j];
                    (1.0 + eta * cfg.d2d_power * ch.d2d_cross[*j].norm_squared() / cfg.noise_var)
                        .log2()
                        / weight
                }
                ObjectiveRow::Energy { receiver: Receiver::Cellular(k), weight } => {
                    let mut e = cfg.bs_power * ch.bs_to_cell[*k].norm_squared();
                    for j in 0..D2D_PAIR {
                        e += cfg.d2d_power * ch.d2d_to_cell[*k][j].norm_squared();
                    }
                    e / weight
                }
                ObjectiveRow::Energy { receiver: Receiver::D2d(j), weight } => {
                    let share = 1.0 - self.spec.split[*j];
                    let kappa_gain = cfg.tx_noise_scale
                        * ch.self_estimate[*j].iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
                    share
                        * (cfg.d2d_power * ch.d2d_cross[*j].norm_squared()
                            + cfg.bs_power * ch.bs_to_d2d[*j].norm_squared()
                            + cfg.d2d_power * kappa_gain)
                        / weight
                }
            };
            hi = hi.min(bound);
        }
        hi + 1.0
    }
}

fn combine(num: &LinearForm, den: &LinearForm, threshold: f64) -> LinearForm {
    let mut out = num.clone();
    for (b, m) in &den.terms {
        out.add(*b, m * Complex64::new(-threshold, 0.0));
    }
    out
}

fn sinr_parts(instance: &NetworkInstance, receiver: Receiver, spec: &MaxMinSpec) -> SinrParts {
    let users = instance.config.users;
    let ch = &instance.channels;
    match receiver {
        Receiver::Cellular(k) => {
            let h = outer(&ch.bs_to_cell[k]);
            let numerator = LinearForm::new().with(bs_block(k), h.clone());
            let canceled = spec.coding.canceled_for(k);
            let mut den_form = LinearForm::new();
            for m in 0..users {
                if m != k && !canceled.contains(&m) {
                    den_form.add(bs_block(m), h.clone());
                }
            }
            for j in 0..D2D_PAIR {
                den_form.add(d2d_block(users, j), outer(&ch.d2d_to_cell[k][j]));
            }
            SinrParts { numerator, den_form, den_const: instance.config.noise_var }
        }
        Receiver::D2d(j) => {
            let eta = spec.split[j];
            let scale = Complex64::new(eta, 0.0);
            let numerator = LinearForm::new()
                .with(d2d_block(users, peer(j)), outer(&ch.d2d_cross[j]) * scale);
            let mut den_form = LinearForm::new();
            let g_bs = outer(&ch.bs_to_d2d[j]);
            for m in 0..users {
                den_form.add(bs_block(m), &g_bs * scale);
            }
            let kappa = instance.config.tx_noise_scale;
            if kappa > 0.0 {
                den_form.add(
                    d2d_block(users, j),
                    diag_abs2(&ch.self_estimate[j]) * Complex64::new(eta * kappa, 0.0),
                );
            }
            let mut den_const = instance.config.noise_var;
            match instance.config.rsi {
                RsiMode::Fixed(v) => den_const += v,
                RsiMode::FromError => {
                    den_form.add(d2d_block(users, j), outer(&ch.self_error[j]) * scale);
                }
            }
            SinrParts { numerator, den_form, den_const }
        }
    }
}

fn cellular_energy_form(instance: &NetworkInstance, k: usize) -> LinearForm {
    let users = instance.config.users;
    let ch = &instance.channels;
    let h = outer(&ch.bs_to_cell[k]);
    let mut form = LinearForm::new();
    for m in 0..users {
        form.add(bs_block(m), h.clone());
    }
    for j in 0..D2D_PAIR {
        form.add(d2d_block(users, j), outer(&ch.d2d_to_cell[k][j]));
    }
    form
}

fn d2d_energy_form(instance: &NetworkInstance, j: usize) -> LinearForm {
    let users = instance.config.users;
    let ch = &instance.channels;
    let mut form = LinearForm::new().with(d2d_block(users, peer(j)), outer(&ch.d2d_cross[j]));
    let g_bs = outer(&ch.bs_to_d2d[j]);
    for m in 0..users {
        form.add(bs_block(m), g_bs.clone());
    }
    let kappa = instance.config.tx_noise_scale;
    if kappa > 0.0 {
        form.add(
            d2d_block(users, j),
            diag_abs2(&ch.self_estimate[j]) * Complex64::new(kappa, 0.0),
        );
    }
    form
}

/// Feasibility SDP of the cellular-region problem at candidate `gamma`:
/// per-user SINR rows, incident-energy floors and power budgets, with rank
/// constraints relaxed.
pub fn build_feasibility_a(
    gamma: f64,
    instance: &NetworkInstance,
    weights: &[f64],
    energy_demand: &[f64],
) -> SdpProblem {
    let scenario = Scenario::cellular_region(weights.to_vec(), energy_demand.to_vec());
    let spec = scenario.to_spec(instance);
    PreparedProblem::new(instance, &spec).at(gamma)
}

/// Feasibility SDP of the D2D-region problem at candidate `gamma`:
/// D2D SINR rows (transmit-noise leakage enters through the linear
/// `diag` map), cellular QoS rows and power budgets, rank constraints
/// relaxed.
pub fn build_feasibility_b(
    gamma: f64,
    instance: &NetworkInstance,
    weights: &[f64],
    rate_demand: &[f64],
) -> SdpProblem {
    let scenario = Scenario::d2d_region(weights.to_vec(), rate_demand.to_vec());
    let spec = scenario.to_spec(instance);
    PreparedProblem::new(instance, &spec).at(gamma)
}

// ---------------------------------------------------------------------------
// Bisection driver
// ---------------------------------------------------------------------------

/// Outcome of the covariance stage.
#[derive(Debug, Clone)]
pub struct CovOptResult {
    /// Max-min value achieved by `design`, re-evaluated through the exact
    /// rate/energy expressions.
    pub gamma_star: f64,
    /// Largest feasible level found for the relaxed problem (an upper bound
    /// on `gamma_star`).
    pub relaxed_bound: f64,
    pub design: TxDesign,
    /// Numerical rank of each relaxed block, problem order.
    pub ranks: Vec<usize>,
    pub randomization: Option<RandomizationReport>,
    /// Feasibility solves spent in bisection.
    pub solves: usize,
}

#[derive(Debug, Clone)]
pub struct RandomizationReport {
    pub samples: usize,
    pub feasible: usize,
    pub best_value: f64,
}

/// Options of the bisection stage.
#[derive(Debug, Clone, Copy)]
pub struct BisectOptions {
    pub tol: f64,
    pub max_steps: usize,
    pub randomizations: usize,
    pub seed: u64,
}

impl Default for BisectOptions {
    fn default() -> Self {
        BisectOptions { tol: 1e-6, max_steps: 60, randomizations: 1000, seed: 1 }
    }
}

/// Solves a scan scenario: bisects the Chebyshev level over feasibility
/// SDPs, then recovers a rank-1 design.
pub fn chebyshev_bisect(
    scenario: &Scenario,
    instance: &NetworkInstance,
    opts: &BisectOptions,
) -> Result<CovOptResult, OptError> {
    let spec = scenario.to_spec(instance);
    chebyshev_bisect_spec(&spec, instance, opts)
}

/// Bisection driver over an explicit [`MaxMinSpec`].
pub fn chebyshev_bisect_spec(
    spec: &MaxMinSpec,
    instance: &NetworkInstance,
    opts: &BisectOptions,
) -> Result<CovOptResult, OptError> {
    assert!(opts.tol > 0.0, "bisection tolerance must be positive");
    let prepared = PreparedProblem::new(instance, spec);
    let tol = Tolerances::default();
    let mut solves = 0;

    let mut check = |gamma: f64| -> Result<Option<Vec<crate::stats::CMatrix>>, OptError> {
        solves += 1;
        let sol = sdp::solve(&prepared.at(gamma), &tol)?;
        Ok((sol.status == SolveStatus::Feasible).then_some(sol.blocks))
    };

    let Some(mut best_blocks) = check(0.0)? else {
        return Err(OptError::ScenarioInfeasible);
    };
    let mut lo = 0.0;
    let mut hi = prepared.gamma_upper();
    for _ in 0..3 {
        match check(hi)? {
            Some(_) => hi *= 2.0,
            None => break,
        }
    }
    for _ in 0..opts.max_steps {
        if hi - lo <= opts.tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match check(mid)? {
            Some(blocks) => {
                best_blocks = blocks;
                lo = mid;
            }
            None => hi = mid,
        }
    }

    finalize(spec, instance, best_blocks, lo, solves, opts)
}

fn finalize(
    spec: &MaxMinSpec,
    instance: &NetworkInstance,
    blocks: Vec<crate::stats::CMatrix>,
    relaxed_bound: f64,
    solves: usize,
    opts: &BisectOptions,
) -> Result<CovOptResult, OptError> {
    let users = instance.config.users;
    let blocks = prune_dust(spec, instance, blocks);
    let mut ranks = Vec::with_capacity(blocks.len());
    let mut streams = Vec::with_capacity(blocks.len());
    let mut needs_randomization = false;
    for (bi, block) in blocks.iter().enumerate() {
        let budget =
            if bi < users { instance.config.bs_power } else { instance.config.d2d_power };
        let trace = block.trace().re;
        if trace <= 1e-9 * budget.max(1.0) {
            ranks.push(0);
            streams.push(StreamCovariance::zero(block.nrows()));
            continue;
        }
        let info = sdp::numerical_rank(block, 1e-6);
        ranks.push(info.rank);
        match info.factor {
            Some(t) if residual_ok(block, &t) => {
                streams.push(StreamCovariance::from_beamformer(t));
            }
            _ => {
                needs_randomization = true;
                streams.push(StreamCovariance {
                    cov: block.clone(),
                    pseudo: crate::stats::CMatrix::zeros(block.nrows(), block.ncols()),
                    beamformer: None,
                });
            }
        }
    }
    let relaxed_design = TxDesign {
        bs_streams: streams[..users].to_vec(),
        d2d_streams: [streams[users].clone(), streams[users + 1].clone()],
    };

    let (design, randomization) = if needs_randomization {
        let (d, report) = gaussian_randomization(
            &relaxed_design,
            spec,
            instance,
            opts.randomizations,
            opts.seed,
        )?;
        (d, Some(report))
    } else {
        (relaxed_design, None)
    };

    let report = rates_and_energies(instance, &design, Some(spec.split))
        .map_err(|e| OptError::Precondition(format!("returned design fails evaluation: {e}")))?;
    let gamma_star = evaluated_gamma(spec, instance, &design, &report);
    Ok(CovOptResult { gamma_star, relaxed_bound, design, ranks, randomization, solves })
}

fn evaluated_gamma(
    spec: &MaxMinSpec,
    instance: &NetworkInstance,
    design: &TxDesign,
    report: &RateEnergyReport,
) -> f64 {
    if let BsCoding::Dpc(order) = &spec.coding {
        // Cellular rows carry pre-cancellation gains.
        let rates = dpc_rates(instance, design, order).expect("order validated earlier");
        return spec
            .rows
            .iter()
            .map(|row| match row {
                ObjectiveRow::Rate { receiver: Receiver::Cellular(k), weight } => {
                    rates[*k].total() / weight
                }
                other => spec.row_ratio(other, report),
            })
            .fold(f64::INFINITY, f64::min);
    }
    spec.objective_value(report)
}

fn residual_ok(block: &crate::stats::CMatrix, t: &CVector) -> bool {
    let recon = t * t.adjoint();
    (block - recon).norm() <= 1e-6 * block.trace().re.max(1e-300)
}

/// Interior-point feasibility witnesses carry power dust in streams the
/// optimum does not need. Zero out low-power blocks greedily whenever doing
/// so loses nothing: demands stay met and the objective does not drop.
fn prune_dust(
    spec: &MaxMinSpec,
    instance: &NetworkInstance,
    mut blocks: Vec<crate::stats::CMatrix>,
) -> Vec<crate::stats::CMatrix> {
    let users = instance.config.users;
    let design_of = |blocks: &[crate::stats::CMatrix]| TxDesign {
        bs_streams: blocks[..users]
            .iter()
            .map(|c| StreamCovariance {
                cov: c.clone(),
                pseudo: crate::stats::CMatrix::zeros(c.nrows(), c.ncols()),
                beamformer: None,
            })
            .collect(),
        d2d_streams: [
            StreamCovariance {
                cov: blocks[users].clone(),
                pseudo: crate::stats::CMatrix::zeros(blocks[users].nrows(), blocks[users].ncols()),
                beamformer: None,
            },
            StreamCovariance {
                cov: blocks[users + 1].clone(),
                pseudo: crate::stats::CMatrix::zeros(
                    blocks[users + 1].nrows(),
                    blocks[users + 1].ncols(),
                ),
                beamformer: None,
            },
        ],
    };
    let evaluate = |blocks: &[crate::stats::CMatrix]| -> Option<(f64, bool)> {
        let design = design_of(blocks);
        let report = rates_and_energies(instance, &design, Some(spec.split)).ok()?;
        let value = evaluated_gamma(spec, instance, &design, &report);
        Some((value, spec.demands_met(&report, 1e-6)))
    };
    let Some((mut current, _)) = evaluate(&blocks) else {
        return blocks;
    };
    // Ascending power order: dust first, then anything else that turns out
    // to be pure null-space filler.
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by(|&a, &b| {
        blocks[a].trace().re.partial_cmp(&blocks[b].trace().re).unwrap()
    });
    for bi in order {
        if blocks[bi].trace().re <= 0.0 {
            continue;
        }
        let saved = blocks[bi].clone();
        blocks[bi] = crate::stats::CMatrix::zeros(saved.nrows(), saved.ncols());
        match evaluate(&blocks) {
            Some((value, demands_ok)) if demands_ok && value >= current - 1e-9 => {
                current = value;
            }
            _ => blocks[bi] = saved,
        }
    }
    blocks
}

// ---------------------------------------------------------------------------
// Gaussian randomization
// ---------------------------------------------------------------------------

/// Recovers a rank-1 design from a relaxed one: streams that are already
/// rank-1 pass through unchanged; for the rest, candidate beamformer
/// directions are drawn from a zero-mean Gaussian with the relaxed
/// covariance. Each candidate is tried over a small grid of power scales
/// (BS streams share one scale so the sum budget is respected), and the
/// best design meeting the exact constraints is kept.
pub fn gaussian_randomization(
    relaxed: &TxDesign,
    spec: &MaxMinSpec,
    instance: &NetworkInstance,
    samples: usize,
    seed: u64,
) -> Result<(TxDesign, RandomizationReport), OptError> {
    let users = instance.config.users;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    struct StreamPlan {
        fixed: Option<Option<CVector>>, // pass-through beamformer (None = silent)
        sampler: Option<Sampler>,
        power: f64,
    }
    let plan_for = |s: &StreamCovariance| -> StreamPlan {
        let power = s.power();
        if power <= 0.0 {
            return StreamPlan { fixed: Some(None), sampler: None, power };
        }
        if let Some(t) = &s.beamformer {
            return StreamPlan { fixed: Some(Some(t.clone())), sampler: None, power };
        }
        StreamPlan { fixed: None, sampler: Some(Sampler::new(&s.cov)), power }
    };
    let plans: Vec<StreamPlan> = relaxed
        .bs_streams
        .iter()
        .chain(relaxed.d2d_streams.iter())
        .map(plan_for)
        .collect();

    // Power-scale grids per randomized group. Scale 1 reproduces the relaxed
    // power split; the extremes let candidates trade interference against
    // demand margins. Each grid is capped by the group's remaining budget.
    const SCALE_GRID: [f64; 5] =
        [0.5, std::f64::consts::FRAC_1_SQRT_2, 1.0, std::f64::consts::SQRT_2, 2.0];
    let bs_random: Vec<usize> =
        (0..users).filter(|&k| plans[k].fixed.is_none()).collect();
    let bs_fixed_power: f64 =
        (0..users).filter(|k| plans[*k].fixed.is_some()).map(|k| plans[k].power).sum();
    let bs_random_power: f64 = bs_random.iter().map(|&k| plans[k].power).sum();
    let group_grid = |random_power: f64, budget_left: f64| -> Vec<f64> {
        if random_power <= 0.0 {
            return vec![1.0];
        }
        let cap = budget_left.max(0.0) / random_power;
        if cap <= 0.0 {
            // Fixed streams already exhaust the budget; the randomized
            // group can only stay silent.
            return vec![0.0];
        }
        let mut grid: Vec<f64> = SCALE_GRID.iter().copied().filter(|s| *s <= cap).collect();
        grid.push(cap);
        grid
    };
    let bs_grid = group_grid(bs_random_power, instance.config.bs_power - bs_fixed_power);
    let d2d_grid: [Vec<f64>; D2D_PAIR] = [
        if plans[users].fixed.is_none() {
            group_grid(plans[users].power, instance.config.d2d_power)
        } else {
            vec![1.0]
        },
        if plans[users + 1].fixed.is_none() {
            group_grid(plans[users + 1].power, instance.config.d2d_power)
        } else {
            vec![1.0]
        },
    ];

    let n = instance.config.bs_antennas;
    let m = instance.config.d2d_antennas;
    let stream_from = |v: &Option<CVector>, dim: usize| match v {
        Some(t) => StreamCovariance::from_beamformer(t.clone()),
        None => StreamCovariance::zero(dim),
    };

    let mut best: Option<(f64, TxDesign)> = None;
    let mut feasible = 0;
    for _ in 0..samples.max(1) {
        // Draw directions, normalized to the relaxed per-stream power.
        let mut vectors: Vec<Option<CVector>> = Vec::with_capacity(plans.len());
        for plan in &plans {
            match (&plan.fixed, &plan.sampler) {
                (Some(fixed), _) => vectors.push(fixed.clone()),
                (None, Some(sampler)) => {
                    let mut t = sampler.draw(&mut rng);
                    let cur = t.norm_squared();
                    if cur > 0.0 {
                        t *= Complex64::new((plan.power / cur).sqrt(), 0.0);
                    }
                    vectors.push(Some(t));
                }
                (None, None) => unreachable!(),
            }
        }
        let mut sample_feasible = false;
        for &sb in &bs_grid {
            for s0 in &d2d_grid[0] {
                for s1 in &d2d_grid[1] {
                    let scaled: Vec<Option<CVector>> = vectors
                        .iter()
                        .enumerate()
                        .map(|(i, v)| {
                            v.as_ref().map(|t| {
                                let s = if plans[i].fixed.is_some() {
                                    1.0
                                } else if i < users {
                                    sb
                                } else if i == users {
                                    *s0
                                } else {
                                    *s1
                                };
                                t * Complex64::new(s.sqrt(), 0.0)
                            })
                        })
                        .collect();
                    let candidate = TxDesign {
                        bs_streams: scaled[..users].iter().map(|v| stream_from(v, n)).collect(),
                        d2d_streams: [
                            stream_from(&scaled[users], m),
                            stream_from(&scaled[users + 1], m),
                        ],
                    };
                    let Ok(report) = rates_and_energies(instance, &candidate, Some(spec.split))
                    else {
                        continue;
                    };
                    if !spec.demands_met(&report, 1e-6) {
                        continue;
                    }
                    sample_feasible = true;
                    let value = evaluated_gamma(spec, instance, &candidate, &report);
                    if best.as_ref().is_none_or(|(b, _)| value > *b) {
                        best = Some((value, candidate));
                    }
                }
            }
        }
        if sample_feasible {
            feasible += 1;
        }
    }

    log::debug!(
        "randomization: {feasible}/{} draws produced a feasible scale combination",
        samples.max(1)
    );
    let relaxed_value = rates_and_energies(instance, relaxed, Some(spec.split))
        .map(|r| evaluated_gamma(spec, instance, relaxed, &r))
        .unwrap_or(f64::NAN);
    match best {
        Some((value, design)) => {
            Ok((design, RandomizationReport { samples, feasible, best_value: value }))
        }
        None => Err(OptError::RandomizationFailure { relaxed_value }),
    }
}

/// Draws vectors from a zero-mean circularly-symmetric Gaussian with a given
/// covariance, through its eigenvalue factor.
struct Sampler {
    factor: crate::stats::CMatrix,
}

impl Sampler {
    fn new(cov: &crate::stats::CMatrix) -> Self {
        let (values, vectors) = sdp::hermitian_eigen(cov);
        let d = cov.nrows();
        let mut factor = crate::stats::CMatrix::zeros(d, d);
        for (i, &v) in values.iter().enumerate() {
            if v > 0.0 {
                factor.set_column(i, &(vectors.column(i) * Complex64::new(v.sqrt(), 0.0)));
            }
        }
        Sampler { factor }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> CVector {
        let d = self.factor.nrows();
        let z = CVector::from_fn(d, |_, _| {
            let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
            let u2: f64 = rng.gen();
            Complex64::from_polar(
                (-2.0 * u1.ln()).sqrt() * std::f64::consts::FRAC_1_SQRT_2,
                2.0 * std::f64::consts::PI * u2,
            )
        });
        &self.factor * z
    }
}

// ---------------------------------------------------------------------------
// Dirty-paper baseline
// ---------------------------------------------------------------------------

/// Cellular rates under successive pre-cancellation with the given encoding
/// order: the user at position `p` sees interference only from users encoded
/// later, plus D2D interference and noise. Proper and improper parts follow
/// the same decomposition as the TIN path.
pub fn dpc_rates(
    instance: &NetworkInstance,
    design: &TxDesign,
    order: &[usize],
) -> Result<Vec<crate::stats::RateSplit>, OptError> {
    let users = instance.config.users;
    let mut seen = vec![false; users];
    if order.len() != users
        || order.iter().any(|&u| u >= users || std::mem::replace(&mut seen[u], true))
    {
        return Err(OptError::Precondition(format!(
            "order {order:?} is not a permutation of 0..{users}"
        )));
    }
    let mut rates = vec![crate::stats::RateSplit::default(); users];
    for (pos, &k) in order.iter().enumerate() {
        let canceled = &order[..pos];
        let stats =
            crate::stats::link_stats_cellular_with_cancellation(instance, design, k, canceled);
        stats.check(instance.config.noise_var)?;
        rates[k] = crate::stats::RateSplit {
            proper: stats.proper_rate(),
            improper: stats.improper_rate(),
        };
    }
    Ok(rates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{example_network, random_channels};
    use approx::assert_abs_diff_eq;

    fn feasible(problem: &SdpProblem) -> bool {
        sdp::solve(problem, &Tolerances::default()).unwrap().status == SolveStatus::Feasible
    }

    #[test]
    fn zero_level_zero_demand_is_feasible() {
        let inst = example_network();
        let p = build_feasibility_a(0.0, &inst, &[0.5, 0.5], &[0.0, 0.0]);
        assert!(feasible(&p));
    }

    #[test]
    fn energy_beyond_total_mrt_power_is_infeasible() {
        let inst = example_network();
        // Incident power is capped by P_B + 2 P_j = 8 under unit-norm
        // channels; demanding 9 cannot be met at any rate level.
        let p = build_feasibility_a(0.0, &inst, &[0.5, 0.5], &[9.0, 9.0]);
        assert!(!feasible(&p));
    }

    #[test]
    fn single_user_capacity_is_the_feasibility_boundary() {
        let inst = random_channels(4, 1, 2, 2, 0.0);
        let capacity = (1.0
            + inst.config.bs_power * inst.channels.bs_to_cell[0].norm_squared()
                / inst.config.noise_var)
            .log2();
        let at = |gamma: f64| build_feasibility_a(gamma, &inst, &[1.0], &[0.0]);
        assert!(feasible(&at(capacity - 1e-4)));
        assert!(!feasible(&at(capacity + 0.01)));
    }

    #[test]
    fn d2d_single_link_boundary_matches_scalar_arithmetic() {
        // BS stays silent (no demands force it on), kappa = 0, unit RSI
        // variance: the link rate boundary is log2(1 + 2/(1+1)) = 1.
        let mut inst = example_network();
        inst.config.tx_noise_scale = 0.0;
        let spec = MaxMinSpec::new(
            vec![ObjectiveRow::Rate { receiver: Receiver::D2d(1), weight: 1.0 }],
            inst.config.users,
        );
        let prepared = PreparedProblem::new(&inst, &spec);
        // ||g_21||^2 deviates from 1 by ~1e-5; keep margins above that.
        let boundary = (1.0 + 2.0 * inst.channels.d2d_cross[1].norm_squared() / 2.0).log2();
        let sol_lo = sdp::solve(&prepared.at(boundary - 1e-3), &Tolerances::default()).unwrap();
        assert_eq!(sol_lo.status, SolveStatus::Feasible);
        let sol_hi = sdp::solve(&prepared.at(boundary + 1e-3), &Tolerances::default()).unwrap();
        assert_eq!(sol_hi.status, SolveStatus::Infeasible);
        assert_abs_diff_eq!(boundary, 1.0, epsilon = 1e-4);
    }

    #[test]
    fn rate_demand_beyond_capacity_is_infeasible_at_any_level() {
        let inst = example_network();
        let p = build_feasibility_b(0.0, &inst, &[0.5, 0.5], &[6.0, 6.0]);
        assert!(!feasible(&p));
    }

    #[test]
    fn feasibility_is_a_step_function_of_the_level() {
        let inst = example_network();
        let scenario = Scenario::cellular_region(vec![0.5, 0.5], vec![0.0, 0.0]);
        let spec = scenario.to_spec(&inst);
        let prepared = PreparedProblem::new(&inst, &spec);
        let hi = prepared.gamma_upper();
        let mut last = true;
        for i in 0..20 {
            let gamma = hi * i as f64 / 19.0;
            let ok = feasible(&prepared.at(gamma));
            assert!(!ok || last, "feasibility regained at step {i}");
            last = ok;
        }
        assert!(!last, "upper bracket should be infeasible");
    }

    #[test]
    fn bisection_reaches_single_user_capacity_endpoint() {
        let inst = example_network();
        let spec = MaxMinSpec::new(
            vec![ObjectiveRow::Rate { receiver: Receiver::Cellular(0), weight: 1.0 }],
            inst.config.users,
        );
        let result = chebyshev_bisect_spec(&spec, &inst, &BisectOptions::default()).unwrap();
        // log2(5) up to the printed channel precision.
        assert_abs_diff_eq!(result.gamma_star, 5.0f64.log2(), epsilon = 1e-3);
        assert!(result.design.d2d_streams[0].power() < 1e-6);
        assert!(result.design.bs_streams[0].beamformer.is_some());
        // Bisection certificate: the found level is feasible, two tolerance
        // steps above is not.
        let prepared = PreparedProblem::new(&inst, &spec);
        assert!(feasible(&prepared.at(result.relaxed_bound)));
        assert!(!feasible(&prepared.at(result.relaxed_bound + 2e-6)));
    }

    #[test]
    fn infeasible_demands_surface_as_scenario_error() {
        let inst = example_network();
        let scenario = Scenario::cellular_region(vec![0.5, 0.5], vec![9.0, 9.0]);
        match chebyshev_bisect(&scenario, &inst, &BisectOptions::default()) {
            Err(OptError::ScenarioInfeasible) => {}
            other => panic!("expected scenario-infeasible, got {other:?}"),
        }
    }

    #[test]
    fn chebyshev_equalizes_weighted_rates_on_clean_channels() {
        // Orthogonal BS channels, no D2D activity, no demands: at the
        // optimum every user's weighted rate matches the Chebyshev level.
        let mut inst = random_channels(9, 2, 2, 2, 0.0);
        let e1 = CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let e2 = CVector::from_vec(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        inst.channels.bs_to_cell[0] = e1;
        inst.channels.bs_to_cell[1] = e2;
        let scenario = Scenario::cellular_region(vec![0.6, 0.4], vec![0.0, 0.0]);
        let result = chebyshev_bisect(&scenario, &inst, &BisectOptions::default()).unwrap();
        let report = rates_and_energies(&inst, &result.design, None).unwrap();
        let r0 = report.cell_rates[0].total() / 0.6;
        let r1 = report.cell_rates[1].total() / 0.4;
        assert_abs_diff_eq!(r0, r1, epsilon = 1e-3);
        assert_abs_diff_eq!(r0, result.gamma_star, epsilon = 1e-3);
    }

    #[test]
    fn randomization_passes_rank_one_streams_through() {
        let inst = example_network();
        let mut design = TxDesign::zero(&inst);
        let t = &inst.channels.bs_to_cell[0] * Complex64::new(1.5, 0.0);
        design.bs_streams[0] = StreamCovariance::from_beamformer(t.clone());
        let spec = MaxMinSpec::new(
            vec![ObjectiveRow::Rate { receiver: Receiver::Cellular(0), weight: 1.0 }],
            inst.config.users,
        );
        let (out, report) = gaussian_randomization(&design, &spec, &inst, 16, 3).unwrap();
        assert_eq!(out.bs_streams[0].beamformer.as_ref().unwrap(), &t);
        assert!(report.feasible > 0);
    }

    #[test]
    fn randomized_objective_never_exceeds_relaxed_bound() {
        // Force a genuinely rank-2 relaxed block: one D2D node must deliver
        // energy to two users over orthogonal channels while the BS is weak.
        let mut inst = random_channels(12, 2, 2, 2, 0.0);
        let e1 = CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let e2 = CVector::from_vec(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        inst.channels.bs_to_cell[0] = e1.clone();
        inst.channels.bs_to_cell[1] = e2.clone();
        inst.channels.d2d_to_cell[0] = [e1.clone(), CVector::zeros(2)];
        inst.channels.d2d_to_cell[1] = [e2.clone(), CVector::zeros(2)];
        inst.config.bs_power = 0.5;
        let scenario = Scenario::cellular_region(vec![0.5, 0.5], vec![1.0, 1.0]);
        let result = chebyshev_bisect(&scenario, &inst, &BisectOptions::default()).unwrap();
        assert!(
            result.gamma_star <= result.relaxed_bound + 1e-6,
            "achieved {} vs relaxed {}",
            result.gamma_star,
            result.relaxed_bound
        );
        let report = rates_and_energies(&inst, &result.design, None).unwrap();
        assert!(report.cell_energy[0] >= 1.0 - 1e-6);
        assert!(report.cell_energy[1] >= 1.0 - 1e-6);
    }

    #[test]
    fn dpc_equals_tin_for_a_single_user() {
        let inst = random_channels(5, 1, 2, 2, 0.0);
        let mut design = TxDesign::zero(&inst);
        let h = inst.channels.bs_to_cell[0].clone();
        design.bs_streams[0] = StreamCovariance::from_beamformer(h * Complex64::new(2.0, 0.0));
        let dpc = dpc_rates(&inst, &design, &[0]).unwrap();
        let report = rates_and_energies(&inst, &design, None).unwrap();
        assert_eq!(dpc[0], report.cell_rates[0]);
    }

    #[test]
    fn dpc_dominates_tin_at_matched_designs() {
        let inst = example_network();
        let mut design = TxDesign::zero(&inst);
        design.bs_streams[0] = StreamCovariance::from_beamformer(
            &inst.channels.bs_to_cell[0] * Complex64::new(2.0f64.sqrt(), 0.0),
        );
        design.bs_streams[1] = StreamCovariance::from_beamformer(
            &inst.channels.bs_to_cell[1] * Complex64::new(2.0f64.sqrt(), 0.0),
        );
        let tin = rates_and_energies(&inst, &design, None).unwrap();
        for order in [[0usize, 1], [1, 0]] {
            let dpc = dpc_rates(&inst, &design, &order).unwrap();
            for k in 0..2 {
                assert!(dpc[k].total() >= tin.cell_rates[k].total() - 1e-12);
            }
        }
    }

    #[test]
    fn dpc_rejects_invalid_orders() {
        let inst = example_network();
        let design = TxDesign::zero(&inst);
        assert!(dpc_rates(&inst, &design, &[0, 0]).is_err());
        assert!(dpc_rates(&inst, &design, &[0]).is_err());
    }
}
