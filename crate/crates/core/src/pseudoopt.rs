//! Pseudo-covariance optimization on top of a fixed rank-1 covariance
//! design.
//!
//! With every stream covariance frozen at `t t^H`, a valid per-stream
//! pseudo-covariance is exactly `s * that that^T` for a complex scalar `s`
//! with `|s| <= ||t||^2`, where `that = t / ||t||` (the augmented
//! covariance stays PSD if and only if the scalar lies in that disc). Every
//! receiver's pseudo-variance then becomes a linear functional of the
//! scalar vector `s`, the improper rate correction becomes
//! `0.5*log2((1 - |a^H s|^2)/(1 - |b^H s|^2))`, and after lifting
//! `S = s s^H` the max-min improper increment is quasi-convex: bisection
//! over a semidefinite feasibility problem in `S` solves it, with Gaussian
//! randomization recovering a scalar vector when the relaxed `S` is not
//! rank-1.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covopt::{BsCoding, Receiver};
use crate::error::OptError;
use crate::model::{peer, CVector, NetworkInstance, RsiMode, D2D_PAIR};
use crate::sdp::{self, BlockSpec, LinearForm, SdpProblem, Sense, SolveStatus, Tolerances};
use crate::stats::{
    link_stats_cellular_with_cancellation, link_stats_d2d, CMatrix, StreamCovariance, TxDesign,
};

/// Stream slot order of the scalar vector: the two D2D streams first, then
/// the BS streams in user order.
pub const D2D_SLOTS: usize = D2D_PAIR;

#[inline]
pub fn slot_count(users: usize) -> usize {
    users + D2D_SLOTS
}

#[inline]
fn d2d_slot(j: usize) -> usize {
    j
}

#[inline]
fn bs_slot(k: usize) -> usize {
    D2D_SLOTS + k
}

/// One receiver row of the lifted problem: the improper rate correction is
/// `0.5*log2((1 - |signal' s|^2)/(1 - |interference' s|^2))` where the two
/// vectors carry the received and interference-plus-noise pseudo-variance
/// responses scaled by the matching variance.
#[derive(Debug, Clone)]
pub struct ImproperRow {
    pub receiver: Receiver,
    /// Conjugated response of the received pseudo-variance over active
    /// slots, divided by the received variance (`a` vector).
    pub signal: CVector,
    /// Same for the interference-plus-noise part (`b` vector).
    pub interference: CVector,
    /// Proper-noise floor of the receiver (thermal plus fixed RSI).
    pub noise_floor: f64,
    pub received_var: f64,
    pub interference_var: f64,
    /// Achieved proper rate of this receiver at the underlying design.
    pub proper_rate: f64,
}

impl ImproperRow {
    /// Improper rate correction at a scalar vector (active-slot order).
    pub fn improper_rate(&self, s: &CVector) -> Option<f64> {
        let sa = 1.0 - self.signal.dotc(s).norm_sqr();
        let sb = 1.0 - self.interference.dotc(s).norm_sqr();
        (sa > 0.0 && sb > 0.0).then(|| 0.5 * (sa / sb).log2())
    }
}

/// The lifted pseudo-covariance problem for one design.
#[derive(Debug, Clone)]
pub struct ImproperSystem {
    /// Unit beamformer per slot (`None` for silent streams).
    directions: Vec<Option<CVector>>,
    /// `||t||^2` per slot (0 for silent streams).
    pub stream_power: Vec<f64>,
    /// Slots with nonzero power, in slot order; the lifted matrix and the
    /// row vectors are indexed by this active set.
    pub active: Vec<usize>,
    /// Receiver rows: cellular users first, then the D2D pair.
    pub rows: Vec<ImproperRow>,
}

impl ImproperSystem {
    pub fn row_index(&self, receiver: Receiver) -> usize {
        match receiver {
            Receiver::Cellular(k) => k,
            Receiver::D2d(j) => self.rows.len() - D2D_PAIR + j,
        }
    }

    /// Lemma bound `||t||^2` per active slot.
    pub fn bounds(&self) -> Vec<f64> {
        self.active.iter().map(|&slot| self.stream_power[slot]).collect()
    }

    /// Expands an active-slot scalar vector to full slot order.
    pub fn expand(&self, s: &CVector) -> Vec<Complex64> {
        let mut full = vec![Complex64::new(0.0, 0.0); self.stream_power.len()];
        for (i, &slot) in self.active.iter().enumerate() {
            full[slot] = s[i];
        }
        full
    }
}

/// Builds the lifted system from a rank-1 design. `split` carries the D2D
/// power-splitting factors used when the proper stage was evaluated; the
/// `coding` choice controls which BS streams are already pre-canceled at
/// each cellular receiver.
pub fn build_improper_system(
    instance: &NetworkInstance,
    design: &TxDesign,
    split: [f64; D2D_PAIR],
    coding: &BsCoding,
) -> Result<ImproperSystem, OptError> {
    let users = instance.config.users;
    let slots = slot_count(users);

    let mut directions = vec![None; slots];
    let mut stream_power = vec![0.0; slots];
    let mut set = |slot: usize, stream: &StreamCovariance| -> Result<(), OptError> {
        let power = stream.power();
        if power <= 1e-12 {
            return Ok(());
        }
        let Some(t) = &stream.beamformer else {
            return Err(OptError::Precondition(
                "pseudo-covariance stage requires rank-1 streams with beamformers".into(),
            ));
        };
        directions[slot] = Some(t / Complex64::new(t.norm(), 0.0));
        stream_power[slot] = power;
        Ok(())
    };
    for j in 0..D2D_PAIR {
        set(d2d_slot(j), &design.d2d_streams[j])?;
    }
    for k in 0..users {
        set(bs_slot(k), &design.bs_streams[k])?;
    }
    let active: Vec<usize> = (0..slots).filter(|&i| stream_power[i] > 0.0).collect();

    // Squared channel-beamformer inner product at one slot: the response of
    // the receiver's pseudo-variance to that stream's scalar.
    let ch = &instance.channels;
    let kappa = instance.config.tx_noise_scale;
    let response = |slot: usize, channel_for_slot: &dyn Fn(usize) -> Option<(CVector, f64)>| {
        directions[slot]
            .as_ref()
            .and_then(|dir| {
                channel_for_slot(slot).map(|(chan, scale)| {
                    let inner = (chan.adjoint() * dir)[(0, 0)];
                    inner * inner * Complex64::new(scale, 0.0)
                })
            })
            .unwrap_or(Complex64::new(0.0, 0.0))
    };

    let mut rows = Vec::with_capacity(users + D2D_PAIR);
    for k in 0..users {
        let canceled = match coding {
            BsCoding::Tin => Vec::new(),
            BsCoding::Dpc(order) => {
                let pos = order.iter().position(|&u| u == k).ok_or_else(|| {
                    OptError::Precondition(format!("user {k} missing from coding order"))
                })?;
                order[..pos].to_vec()
            }
        };
        let stats = link_stats_cellular_with_cancellation(instance, design, k, &canceled);
        stats.check(instance.config.noise_var)?;
        let channel_y = |slot: usize| -> Option<(CVector, f64)> {
            if slot < D2D_SLOTS {
                Some((ch.d2d_to_cell[k][slot].clone(), 1.0))
            } else {
                let m = slot - D2D_SLOTS;
                (!canceled.contains(&m)).then(|| (ch.bs_to_cell[k].clone(), 1.0))
            }
        };
        let mut signal = CVector::zeros(active.len());
        let mut interference = CVector::zeros(active.len());
        for (i, &slot) in active.iter().enumerate() {
            let v = response(slot, &channel_y);
            signal[i] = v.conj() / Complex64::new(stats.received_var, 0.0);
            if slot != bs_slot(k) {
                interference[i] = v.conj() / Complex64::new(stats.interference_var, 0.0);
            }
        }
        rows.push(ImproperRow {
            receiver: Receiver::Cellular(k),
            signal,
            interference,
            noise_floor: instance.config.noise_var,
            received_var: stats.received_var,
            interference_var: stats.interference_var,
            proper_rate: stats.proper_rate(),
        });
    }
    for j in 0..D2D_PAIR {
        let eta = split[j];
        let stats = link_stats_d2d(instance, design, j, eta);
        stats.check(instance.config.noise_var)?;
        let channel_z = |slot: usize| -> Option<(CVector, f64)> {
            if slot == d2d_slot(peer(j)) {
                Some((ch.d2d_cross[j].clone(), eta))
            } else if slot == d2d_slot(j) {
                // Own transmission reaches this receiver through the
                // transmit-noise leakage, plus the error channel when the
                // residual is modelled explicitly.
                None
            } else {
                Some((ch.bs_to_d2d[j].clone(), eta))
            }
        };
        let own_response = |dir: &CVector| -> Complex64 {
            let mut v = Complex64::new(0.0, 0.0);
            if kappa > 0.0 {
                let inner = (ch.self_estimate[j].adjoint() * dir)[(0, 0)];
                v += inner * inner * Complex64::new(kappa * eta, 0.0);
            }
            if let RsiMode::FromError = instance.config.rsi {
                let inner = (ch.self_error[j].adjoint() * dir)[(0, 0)];
                v += inner * inner * Complex64::new(eta, 0.0);
            }
            v
        };
        let mut signal = CVector::zeros(active.len());
        let mut interference = CVector::zeros(active.len());
        for (i, &slot) in active.iter().enumerate() {
            let v = if slot == d2d_slot(j) {
                directions[slot].as_ref().map_or(Complex64::new(0.0, 0.0), |d| own_response(d))
            } else {
                response(slot, &channel_z)
            };
            signal[i] = v.conj() / Complex64::new(stats.received_var, 0.0);
            if slot != d2d_slot(peer(j)) {
                interference[i] = v.conj() / Complex64::new(stats.interference_var, 0.0);
            }
        }
        rows.push(ImproperRow {
            receiver: Receiver::D2d(j),
            signal,
            interference,
            noise_floor: instance.config.noise_var + instance.config.fixed_rsi_var(),
            received_var: stats.received_var,
            interference_var: stats.interference_var,
            proper_rate: stats.proper_rate(),
        });
    }

    Ok(ImproperSystem { directions, stream_power, active, rows })
}

/// One max-min objective of the improper stage: maximize
/// `(proper + improper) / weight` for this row.
#[derive(Debug, Clone, Copy)]
pub struct ImproperObjective {
    pub row: usize,
    pub weight: f64,
}

/// A protected row: its total rate may not drop below `min_rate`.
#[derive(Debug, Clone, Copy)]
pub struct ImproperFloor {
    pub row: usize,
    pub min_rate: f64,
}

/// Result of the improper stage.
#[derive(Debug, Clone)]
pub struct ImproperParam {
    /// Per-slot pseudo scalar, full slot order (zeros on silent slots).
    pub scalars: Vec<Complex64>,
    /// Relaxed lifted matrix over active slots.
    pub lifted: CMatrix,
    /// Lemma bounds `||t||^2` per active slot.
    pub bounds: Vec<f64>,
    /// Max-min value achieved by `scalars` (including the proper parts).
    pub lambda_star: f64,
    /// Largest feasible level of the relaxed lifted problem.
    pub relaxed_bound: f64,
    /// Rank of the relaxed lifted matrix.
    pub lifted_rank: usize,
    /// Draws used when randomization was needed.
    pub randomized: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct ImproperOptions {
    pub tol: f64,
    pub max_steps: usize,
    pub randomizations: usize,
    pub seed: u64,
}

impl Default for ImproperOptions {
    fn default() -> Self {
        ImproperOptions { tol: 1e-6, max_steps: 60, randomizations: 500, seed: 1 }
    }
}

/// Assembles the feasibility problem of the lifted stage at level `lambda`:
/// per-objective rate rows linearized as
/// `(1 - Tr(A S)) >= 2^(2*(w*lambda - proper)) * (1 - Tr(B S))`,
/// floor rows with the fixed demanded rate, the per-slot disc bounds
/// `S_ii <= ||t_i||^4`, and the validity rows keeping both log arguments at
/// or above their proper-noise floors.
pub fn build_feasibility_s(
    system: &ImproperSystem,
    objectives: &[ImproperObjective],
    floors: &[ImproperFloor],
    lambda: f64,
) -> SdpProblem {
    let dim = system.active.len();
    let mut problem =
        SdpProblem::feasibility(vec![BlockSpec { name: "lifted".into(), dim }]);
    if dim == 0 {
        return problem;
    }
    let mut rate_row = |row: &ImproperRow, demanded_improper: f64, label: String| {
        let a = outer_of(&row.signal);
        let b = outer_of(&row.interference);
        // Clamped so absurd candidate levels stay finite (and plainly
        // infeasible) instead of overflowing.
        let factor = (2.0 * demanded_improper).min(512.0).exp2();
        // (1 - Tr(A S)) - factor * (1 - Tr(B S)) >= 0.
        let form = LinearForm::new()
            .with(0, &b * Complex64::new(factor, 0.0))
            .with(0, &a * Complex64::new(-1.0, 0.0));
        problem.constrain(form, Sense::Ge, factor - 1.0, label);
    };
    for (i, obj) in objectives.iter().enumerate() {
        let row = &system.rows[obj.row];
        rate_row(row, obj.weight * lambda - row.proper_rate, format!("objective {i}"));
    }
    for (i, floor) in floors.iter().enumerate() {
        let row = &system.rows[floor.row];
        // Same acceptance tolerance as the covariance stage, so floors a
        // randomized design meets within tolerance stay feasible here.
        rate_row(row, floor.min_rate - 1e-6 - row.proper_rate, format!("floor {i}"));
    }
    for (i, &slot) in system.active.iter().enumerate() {
        let mut sel = CMatrix::zeros(dim, dim);
        sel[(i, i)] = Complex64::new(1.0, 0.0);
        let bound = system.stream_power[slot];
        problem.constrain(
            LinearForm::new().with(0, sel),
            Sense::Le,
            bound * bound,
            format!("disc bound slot {slot}"),
        );
    }
    for (r, row) in system.rows.iter().enumerate() {
        let fy = row.noise_floor / row.received_var;
        let fw = row.noise_floor / row.interference_var;
        problem.constrain(
            LinearForm::new().with(0, outer_of(&row.signal)),
            Sense::Le,
            1.0 - fy * fy,
            format!("validity signal {r}"),
        );
        problem.constrain(
            LinearForm::new().with(0, outer_of(&row.interference)),
            Sense::Le,
            1.0 - fw * fw,
            format!("validity interference {r}"),
        );
    }
    problem
}

fn outer_of(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Maximizes the smallest weighted total rate over the lifted
/// pseudo-covariance variable by bisection, then recovers a scalar vector
/// (eigen-factor when the lifted solution is rank-1, Gaussian randomization
/// with per-entry disc clamping otherwise). The zero vector is always a
/// candidate, so the result never falls below the proper-stage value.
pub fn improper_bisect(
    system: &ImproperSystem,
    objectives: &[ImproperObjective],
    floors: &[ImproperFloor],
    opts: &ImproperOptions,
) -> Result<ImproperParam, OptError> {
    assert!(!objectives.is_empty(), "improper stage needs at least one objective row");
    let dim = system.active.len();
    let base = objectives
        .iter()
        .map(|o| system.rows[o.row].proper_rate / o.weight)
        .fold(f64::INFINITY, f64::min);
    if dim == 0 {
        return Ok(ImproperParam {
            scalars: vec![Complex64::new(0.0, 0.0); system.stream_power.len()],
            lifted: CMatrix::zeros(0, 0),
            bounds: Vec::new(),
            lambda_star: base,
            relaxed_bound: base,
            lifted_rank: 0,
            randomized: None,
        });
    }

    let tol = Tolerances::default();
    let mut check = |lambda: f64| -> Result<Option<CMatrix>, OptError> {
        let problem = build_feasibility_s(system, objectives, floors, lambda);
        let sol = sdp::solve(&problem, &tol)?;
        Ok((sol.status == SolveStatus::Feasible).then(|| sol.blocks[0].clone()))
    };

    // The improper correction of any objective row is capped by its validity
    // row (1 - Tr(B S) >= (floor / C_w)^2), and the max-min level cannot
    // exceed any single row's capped ratio.
    let mut hi = f64::INFINITY;
    for o in objectives {
        let row = &system.rows[o.row];
        let cap = (row.interference_var / row.noise_floor).log2().max(0.0);
        hi = hi.min((row.proper_rate + cap) / o.weight);
    }
    let mut hi = hi.max(base) + 1.0;

    let mut lo = base;
    if hi < lo {
        hi = lo + 1.0;
    }
    let mut best = check(lo)?.ok_or_else(|| {
        OptError::Precondition("improper stage infeasible at the proper-stage level".into())
    })?;
    for _ in 0..opts.max_steps {
        if hi - lo <= opts.tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match check(mid)? {
            Some(s) => {
                best = s;
                lo = mid;
            }
            None => hi = mid,
        }
    }

    let bounds = system.bounds();
    let info = sdp::numerical_rank(&best, 1e-6);
    let evaluate = |s: &CVector| -> Option<f64> {
        for f in floors {
            let row = &system.rows[f.row];
            let total = row.proper_rate + row.improper_rate(s)?;
            if total < f.min_rate - 1e-6 - 1e-9 {
                return None;
            }
        }
        objectives
            .iter()
            .map(|o| {
                let row = &system.rows[o.row];
                row.improper_rate(s).map(|imp| (row.proper_rate + imp) / o.weight)
            })
            .try_fold(f64::INFINITY, |acc, v| v.map(|v| acc.min(v)))
    };
    let clamp = |mut s: CVector| -> CVector {
        for (i, bound) in bounds.iter().enumerate() {
            let mag = s[i].norm();
            if mag > *bound {
                s[i] *= Complex64::new(bound / mag, 0.0);
            }
        }
        s
    };

    let zero = CVector::zeros(dim);
    let mut chosen = zero.clone();
    let mut lambda_star = evaluate(&zero).expect("zero scalar vector is always valid");
    let mut randomized = None;
    match info.factor {
        Some(t) => {
            let cand = clamp(t);
            if let Some(v) = evaluate(&cand) {
                if v > lambda_star {
                    lambda_star = v;
                    chosen = cand;
                }
            }
        }
        None if info.rank > 0 => {
            let draws = opts.randomizations.max(1);
            randomized = Some(draws);
            let (values, vectors) = sdp::hermitian_eigen(&best);
            let mut factor = CMatrix::zeros(dim, dim);
            for (i, &v) in values.iter().enumerate() {
                if v > 0.0 {
                    factor.set_column(i, &(vectors.column(i) * Complex64::new(v.sqrt(), 0.0)));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for _ in 0..draws {
                let z = CVector::from_fn(dim, |_, _| {
                    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
                    let u2: f64 = rng.gen();
                    Complex64::from_polar(
                        (-2.0 * u1.ln()).sqrt() * std::f64::consts::FRAC_1_SQRT_2,
                        2.0 * std::f64::consts::PI * u2,
                    )
                });
                let cand = clamp(&factor * z);
                if let Some(v) = evaluate(&cand) {
                    if v > lambda_star {
                        lambda_star = v;
                        chosen = cand;
                    }
                }
            }
        }
        None => {}
    }

    Ok(ImproperParam {
        scalars: system.expand(&chosen),
        lifted: best,
        bounds,
        lambda_star,
        relaxed_bound: lo,
        lifted_rank: info.rank,
        randomized,
    })
}

/// Validity margins of a lifted matrix: both log arguments of every row must
/// stay at or above the squared proper-noise-floor ratio.
#[derive(Debug, Clone)]
pub struct ValidityMargin {
    pub receiver: Receiver,
    pub signal_margin: f64,
    pub interference_margin: f64,
}

impl ValidityMargin {
    pub fn pass(&self) -> bool {
        self.signal_margin >= -1e-9 && self.interference_margin >= -1e-9
    }
}

/// Checks the validity inequalities for every receiver row:
/// `1 - Tr(A S) >= (floor / C_y)^2` and `1 - Tr(B S) >= (floor / C_w)^2`.
pub fn validity_margins(system: &ImproperSystem, lifted: &CMatrix) -> Vec<ValidityMargin> {
    system
        .rows
        .iter()
        .map(|row| {
            let tr_a = (row.signal.adjoint() * lifted * &row.signal)[(0, 0)].re;
            let tr_b = (row.interference.adjoint() * lifted * &row.interference)[(0, 0)].re;
            let fy = row.noise_floor / row.received_var;
            let fw = row.noise_floor / row.interference_var;
            ValidityMargin {
                receiver: row.receiver,
                signal_margin: (1.0 - tr_a) - fy * fy,
                interference_margin: (1.0 - tr_b) - fw * fw,
            }
        })
        .collect()
}

/// Reconstructs per-stream pseudo-covariances `s_i * that_i that_i^T` and
/// returns the design with them installed. Scalars must lie in their discs;
/// silent streams only admit zero.
pub fn apply_pseudo_scalars(
    design: &TxDesign,
    scalars: &[Complex64],
) -> Result<TxDesign, OptError> {
    let users = design.bs_streams.len();
    if scalars.len() != slot_count(users) {
        return Err(OptError::Precondition(format!(
            "expected {} pseudo scalars, got {}",
            slot_count(users),
            scalars.len()
        )));
    }
    let mut out = design.clone();
    let mut apply = |stream: &mut StreamCovariance, s: Complex64, slot: usize| {
        let power = stream.power();
        if s.norm() > power + 1e-9 {
            return Err(OptError::Precondition(format!(
                "pseudo scalar of slot {slot} exceeds the stream power bound: |{}| > {power}",
                s.norm()
            )));
        }
        if power <= 1e-12 {
            return Ok(());
        }
        let t = stream.beamformer.as_ref().ok_or_else(|| {
            OptError::Precondition("pseudo scalars need beamformed streams".into())
        })?;
        let unit = t / Complex64::new(t.norm(), 0.0);
        // Transpose outer product: complex symmetric, not Hermitian.
        stream.pseudo = (&unit * unit.transpose()) * s;
        Ok(())
    };
    for j in 0..D2D_PAIR {
        apply(&mut out.d2d_streams[j], scalars[d2d_slot(j)], d2d_slot(j))?;
    }
    for k in 0..users {
        apply(&mut out.bs_streams[k], scalars[bs_slot(k)], bs_slot(k))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covopt::{
        chebyshev_bisect_spec, BisectOptions, MaxMinSpec, ObjectiveRow,
    };
    use crate::model::{example_network, random_channels};
    use crate::stats::{link_stats_cellular, rates_and_energies};
    use approx::assert_abs_diff_eq;

    fn mrt(h: &CVector, power: f64) -> StreamCovariance {
        StreamCovariance::from_beamformer(h * Complex64::new((power / h.norm_squared()).sqrt(), 0.0))
    }

    #[test]
    fn single_user_system_has_empty_interference_row() {
        let inst = random_channels(2, 1, 2, 2, 0.0);
        let mut design = TxDesign::zero(&inst);
        design.bs_streams[0] = mrt(&inst.channels.bs_to_cell[0], 4.0);
        let system =
            build_improper_system(&inst, &design, [1.0, 1.0], &BsCoding::Tin).unwrap();
        assert_eq!(system.active, vec![bs_slot(0)]);
        let row = &system.rows[0];
        assert_eq!(row.interference.norm(), 0.0);
        assert!(row.signal.norm() > 0.0);
    }

    #[test]
    fn zero_kappa_removes_own_stream_entries_from_d2d_rows() {
        let mut inst = example_network();
        inst.config.tx_noise_scale = 0.0;
        let mut design = TxDesign::zero(&inst);
        design.d2d_streams[0] = mrt(&inst.channels.d2d_cross[1], 2.0);
        design.d2d_streams[1] = mrt(&inst.channels.d2d_cross[0], 2.0);
        let system =
            build_improper_system(&inst, &design, [1.0, 1.0], &BsCoding::Tin).unwrap();
        for j in 0..D2D_PAIR {
            let row = &system.rows[system.row_index(Receiver::D2d(j))];
            let own = system.active.iter().position(|&s| s == d2d_slot(j)).unwrap();
            assert_eq!(row.signal[own], Complex64::new(0.0, 0.0));
            assert_eq!(row.interference[own], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn signal_response_matches_stats_pseudo_variance() {
        // |a_k' s| must equal |pseudo-variance| / variance for any admissible
        // scalar vector, with the pseudo-variance evaluated independently by
        // the statistics module.
        let inst = example_network();
        let spec = MaxMinSpec::new(
            vec![
                ObjectiveRow::Rate { receiver: Receiver::Cellular(0), weight: 0.5 },
                ObjectiveRow::Rate { receiver: Receiver::Cellular(1), weight: 0.5 },
            ],
            2,
        );
        let result = chebyshev_bisect_spec(&spec, &inst, &BisectOptions::default()).unwrap();
        let system =
            build_improper_system(&inst, &result.design, [1.0, 1.0], &BsCoding::Tin).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..32 {
            let s_active = CVector::from_fn(system.active.len(), |i, _| {
                let bound = system.stream_power[system.active[i]];
                let r: f64 = rng.gen::<f64>() * bound;
                Complex64::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU)
            });
            let full = system.expand(&s_active);
            let improper = apply_pseudo_scalars(&result.design, &full).unwrap();
            for k in 0..2 {
                let stats = link_stats_cellular(&inst, &improper, k);
                let row = &system.rows[k];
                let lhs = row.signal.dotc(&s_active).norm();
                let rhs = stats.received_pseudo.norm() / stats.received_var;
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
                let lhs_w = row.interference.dotc(&s_active).norm();
                let rhs_w = stats.interference_pseudo.norm() / stats.interference_var;
                assert_abs_diff_eq!(lhs_w, rhs_w, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn interference_free_user_gains_nothing_from_impropriety() {
        let inst = random_channels(3, 1, 2, 2, 0.0);
        let mut design = TxDesign::zero(&inst);
        design.bs_streams[0] = mrt(&inst.channels.bs_to_cell[0], 4.0);
        let system =
            build_improper_system(&inst, &design, [1.0, 1.0], &BsCoding::Tin).unwrap();
        let objectives = [ImproperObjective { row: 0, weight: 1.0 }];
        let param = improper_bisect(&system, &objectives, &[], &ImproperOptions::default())
            .unwrap();
        let base = system.rows[0].proper_rate;
        assert_abs_diff_eq!(param.lambda_star, base, epsilon = 1e-5);
        assert!(param.scalars.iter().all(|s| s.norm() < 1e-5));
    }

    #[test]
    fn improper_stage_never_loses_to_the_proper_stage() {
        for seed in [11, 12, 13] {
            let inst = random_channels(seed, 2, 2, 2, 0.0);
            let spec = MaxMinSpec::new(
                vec![
                    ObjectiveRow::Rate { receiver: Receiver::Cellular(0), weight: 0.5 },
                    ObjectiveRow::Rate { receiver: Receiver::Cellular(1), weight: 0.5 },
                ],
                2,
            );
            let result = chebyshev_bisect_spec(&spec, &inst, &BisectOptions::default()).unwrap();
            let system =
                build_improper_system(&inst, &result.design, [1.0, 1.0], &BsCoding::Tin).unwrap();
            let objectives = [
                ImproperObjective { row: 0, weight: 0.5 },
                ImproperObjective { row: 1, weight: 0.5 },
            ];
            let param =
                improper_bisect(&system, &objectives, &[], &ImproperOptions::default()).unwrap();
            assert!(
                param.lambda_star >= result.gamma_star - 1e-6,
                "seed {seed}: improper {} vs proper {}",
                param.lambda_star,
                result.gamma_star
            );
        }
    }

    #[test]
    fn one_dimensional_toy_matches_disc_grid_search() {
        // One active scalar: a single D2D stream interfering with one
        // cellular user. The optimum over the complex disc is found by a
        // dense polar grid and must match the lifted bisection.
        let mut inst = random_channels(21, 1, 2, 2, 0.0);
        inst.config.tx_noise_scale = 0.0;
        let mut design = TxDesign::zero(&inst);
        design.bs_streams[0] = mrt(&inst.channels.bs_to_cell[0], 4.0);
        design.d2d_streams[0] = mrt(&inst.channels.d2d_to_cell[0][0], 2.0);
        // Keep only the D2D scalar free: freeze the BS stream by bounding
        // its slot to zero through a silent-power trick is not available,
        // so instead use a system where the BS stream is the only other
        // active slot and protect the cellular row's own stream via the
        // objective itself. The 1-D structure comes from restricting the
        // grid and the lifted problem to the D2D slot.
        let system =
            build_improper_system(&inst, &design, [1.0, 1.0], &BsCoding::Tin).unwrap();
        let row = &system.rows[0];
        let d2d_idx = system.active.iter().position(|&s| s == d2d_slot(0)).unwrap();
        let bs_idx = system.active.iter().position(|&s| s == bs_slot(0)).unwrap();

        // Grid search over the D2D disc alone (BS scalar pinned to zero).
        let bound = system.stream_power[d2d_slot(0)];
        let mut best_grid = f64::NEG_INFINITY;
        for ir in 0..50 {
            let r = bound * (ir as f64 + 1.0) / 50.0;
            for ia in 0..40 {
                let phi = std::f64::consts::TAU * ia as f64 / 40.0;
                let mut s = CVector::zeros(system.active.len());
                s[d2d_idx] = Complex64::from_polar(r, phi);
                if let Some(imp) = row.improper_rate(&s) {
                    best_grid = best_grid.max(row.proper_rate + imp);
                }
            }
        }
        // Pin the BS slot by an artificial zero bound in a reduced system.
        let mut reduced = system.clone();
        reduced.stream_power[bs_slot(0)] = 0.0;
        reduced.active = vec![d2d_slot(0)];
        let keep = |v: &CVector| CVector::from_vec(vec![v[d2d_idx]]);
        for r in reduced.rows.iter_mut() {
            r.signal = keep(&r.signal);
            r.interference = keep(&r.interference);
        }
        let _ = bs_idx;
        let objectives = [ImproperObjective { row: 0, weight: 1.0 }];
        let param =
            improper_bisect(&reduced, &objectives, &[], &ImproperOptions::default()).unwrap();
        assert_abs_diff_eq!(param.lambda_star, best_grid, epsilon = 1e-3);
        assert!(param.lambda_star >= row.proper_rate - 1e-9);
    }

    #[test]
    fn validity_margins_pass_at_zero_and_fail_on_violations() {
        let inst = example_network();
        let spec = MaxMinSpec::new(
            vec![
                ObjectiveRow::Rate { receiver: Receiver::Cellular(0), weight: 0.5 },
                ObjectiveRow::Rate { receiver: Receiver::Cellular(1), weight: 0.5 },
            ],
            2,
        );
        let result = chebyshev_bisect_spec(&spec, &inst, &BisectOptions::default()).unwrap();
        let system =
            build_improper_system(&inst, &result.design, [1.0, 1.0], &BsCoding::Tin).unwrap();
        let dim = system.active.len();
        let zero = CMatrix::zeros(dim, dim);
        assert!(validity_margins(&system, &zero).iter().all(|m| m.pass()));

        // A lifted matrix far outside the disc bounds violates validity.
        let huge = CMatrix::identity(dim, dim) * Complex64::new(1e6, 0.0);
        let margins = validity_margins(&system, &huge);
        assert!(margins.iter().any(|m| !m.pass()));
    }

    #[test]
    fn solver_produced_lifted_matrices_pass_validity() {
        let inst = example_network();
        let spec = MaxMinSpec::new(
            vec![
                ObjectiveRow::Rate { receiver: Receiver::Cellular(0), weight: 0.5 },
                ObjectiveRow::Rate { receiver: Receiver::Cellular(1), weight: 0.5 },
            ],
            2,
        );
        let result = chebyshev_bisect_spec(&spec, &inst, &BisectOptions::default()).unwrap();
        let system =
            build_improper_system(&inst, &result.design, [1.0, 1.0], &BsCoding::Tin).unwrap();
        let objectives = [
            ImproperObjective { row: 0, weight: 0.5 },
            ImproperObjective { row: 1, weight: 0.5 },
        ];
        let param =
            improper_bisect(&system, &objectives, &[], &ImproperOptions::default()).unwrap();
        assert!(validity_margins(&system, &param.lifted).iter().all(|m| m.pass()));
    }

    #[test]
    fn pseudo_reconstruction_respects_the_disc() {
        let inst = random_channels(7, 2, 2, 2, 0.0);
        let mut design = TxDesign::zero(&inst);
        design.bs_streams[0] = mrt(&inst.channels.bs_to_cell[0], 2.0);
        design.bs_streams[1] = mrt(&inst.channels.bs_to_cell[1], 2.0);
        design.d2d_streams[0] = mrt(&inst.channels.d2d_cross[1], 2.0);

        // Zero scalars recover proper signaling.
        let zeros = vec![Complex64::new(0.0, 0.0); slot_count(2)];
        let proper = apply_pseudo_scalars(&design, &zeros).unwrap();
        assert!(proper.is_proper());

        // A boundary scalar makes the augmented stream covariance singular.
        let mut boundary = zeros.clone();
        boundary[bs_slot(0)] = Complex64::from_polar(2.0, 1.1);
        let improper = apply_pseudo_scalars(&design, &boundary).unwrap();
        let min_eig = improper.bs_streams[0].augmented_min_eigenvalue();
        assert_abs_diff_eq!(min_eig, 0.0, epsilon = 1e-9);

        // Random admissible scalars keep every augmented covariance PSD.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let mut scalars = zeros.clone();
            for (slot, s) in scalars.iter_mut().enumerate() {
                let power = match slot {
                    0 => design.d2d_streams[0].power(),
                    1 => design.d2d_streams[1].power(),
                    _ => design.bs_streams[slot - D2D_SLOTS].power(),
                };
                *s = Complex64::from_polar(
                    rng.gen::<f64>() * power,
                    rng.gen::<f64>() * std::f64::consts::TAU,
                );
            }
            let improper = apply_pseudo_scalars(&design, &scalars).unwrap();
            for stream in improper.bs_streams.iter().chain(improper.d2d_streams.iter()) {
                if stream.power() > 0.0 {
                    assert!(stream.augmented_min_eigenvalue() >= -1e-9);
                }
            }
        }

        // Scalars outside the disc are rejected.
        let mut outside = zeros;
        outside[bs_slot(0)] = Complex64::new(2.1, 0.0);
        assert!(apply_pseudo_scalars(&design, &outside).is_err());
    }
}
