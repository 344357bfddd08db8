//! Second-order statistics of the transmit and receive signals, and the
//! achievable-rate / incident-energy evaluators built on them.
//!
//! Every receive statistic is scalar: receivers decode from a single antenna.
//! A complex receive sample is fully described by its variance and
//! pseudo-variance, or equivalently by the 2x2 augmented covariance
//! `[[C, Chat], [conj(Chat), C]]`. Rates split into a proper part
//! `log2(Cy/Cw)` and an improper correction
//! `0.5*log2((1 - |Chat_y|^2/Cy^2) / (1 - |Chat_w|^2/Cw^2))`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::OptError;
use crate::model::{peer, CVector, NetworkInstance, RsiMode, D2D_PAIR};

pub type CMatrix = DMatrix<Complex64>;

/// Covariance and pseudo-covariance of one transmit stream, plus the
/// beamformer when the covariance is (numerically) rank-1.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamCovariance {
    /// Hermitian PSD covariance.
    pub cov: CMatrix,
    /// Complex symmetric pseudo-covariance. Zero for proper signaling.
    pub pseudo: CMatrix,
    /// Beamformer `t` with `cov = t t^H`, when available.
    pub beamformer: Option<CVector>,
}

impl StreamCovariance {
    pub fn zero(dim: usize) -> Self {
        StreamCovariance {
            cov: CMatrix::zeros(dim, dim),
            pseudo: CMatrix::zeros(dim, dim),
            beamformer: None,
        }
    }

    pub fn from_beamformer(t: CVector) -> Self {
        let cov = &t * t.adjoint();
        let dim = t.len();
        StreamCovariance { cov, pseudo: CMatrix::zeros(dim, dim), beamformer: Some(t) }
    }

    pub fn power(&self) -> f64 {
        self.cov.diagonal().iter().map(|z| z.re).sum()
    }

    /// Minimum eigenvalue of the per-stream augmented covariance
    /// `[[C, Chat], [Chat^*, C^*]]`. Nonnegative (within tolerance) iff the
    /// pair (C, Chat) is a valid second-order description.
    pub fn augmented_min_eigenvalue(&self) -> f64 {
        let n = self.cov.nrows();
        let mut aug = CMatrix::zeros(2 * n, 2 * n);
        aug.view_mut((0, 0), (n, n)).copy_from(&self.cov);
        aug.view_mut((0, n), (n, n)).copy_from(&self.pseudo);
        aug.view_mut((n, 0), (n, n)).copy_from(&self.pseudo.conjugate());
        aug.view_mut((n, n), (n, n)).copy_from(&self.cov.conjugate());
        crate::sdp::hermitian_eigenvalues(&aug)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Transmit design for the whole network: one stream per cellular user at the
/// BS and one stream per D2D node.
#[derive(Debug, Clone, PartialEq)]
pub struct TxDesign {
    pub bs_streams: Vec<StreamCovariance>,
    pub d2d_streams: [StreamCovariance; D2D_PAIR],
}

impl TxDesign {
    pub fn zero(instance: &NetworkInstance) -> Self {
        let n = instance.config.bs_antennas;
        let m = instance.config.d2d_antennas;
        TxDesign {
            bs_streams: (0..instance.config.users).map(|_| StreamCovariance::zero(n)).collect(),
            d2d_streams: [StreamCovariance::zero(m), StreamCovariance::zero(m)],
        }
    }

    /// Sum of the BS per-stream covariances.
    pub fn bs_total_cov(&self) -> CMatrix {
        let n = self.bs_streams[0].cov.nrows();
        self.bs_streams
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, s| acc + &s.cov)
    }

    pub fn bs_power(&self) -> f64 {
        self.bs_streams.iter().map(|s| s.power()).sum()
    }

    /// True when every stream is proper (zero pseudo-covariance).
    pub fn is_proper(&self) -> bool {
        self.bs_streams
            .iter()
            .chain(self.d2d_streams.iter())
            .all(|s| s.pseudo.iter().all(|z| z.norm() == 0.0))
    }
}

/// Scalar receive statistics of one link: variance and pseudo-variance of the
/// received signal and of the interference-plus-noise part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkStats {
    pub received_var: f64,
    pub received_pseudo: Complex64,
    pub interference_var: f64,
    pub interference_pseudo: Complex64,
}

impl LinkStats {
    /// Proper part of the achievable rate, `log2(Cy/Cw)`.
    pub fn proper_rate(&self) -> f64 {
        (self.received_var / self.interference_var).log2()
    }

    /// Improper correction term of the achievable rate.
    pub fn improper_rate(&self) -> f64 {
        let ny = 1.0 - self.received_pseudo.norm_sqr() / (self.received_var * self.received_var);
        let nw = 1.0
            - self.interference_pseudo.norm_sqr()
                / (self.interference_var * self.interference_var);
        0.5 * (ny / nw).log2()
    }

    pub fn rate(&self) -> f64 {
        self.proper_rate() + self.improper_rate()
    }

    /// Checks the scalar augmented-PSD conditions and the noise floor.
    pub fn check(&self, noise_floor: f64) -> Result<(), OptError> {
        let tol = 1e-9 * (1.0 + self.received_var);
        if !(self.interference_var > 0.0) || self.interference_var < noise_floor - 1e-12 {
            return Err(OptError::InvalidStats(format!(
                "interference-plus-noise variance {} below noise floor {}",
                self.interference_var, noise_floor
            )));
        }
        if self.received_var < self.interference_var - tol {
            return Err(OptError::InvalidStats(
                "received variance below interference-plus-noise variance".into(),
            ));
        }
        if self.received_pseudo.norm() > self.received_var + tol
            || self.interference_pseudo.norm() > self.interference_var + tol
        {
            return Err(OptError::InvalidStats(
                "pseudo-variance magnitude exceeds variance (augmented covariance indefinite)"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// Achievable rate split into its proper and improper parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateSplit {
    pub proper: f64,
    pub improper: f64,
}

impl RateSplit {
    pub fn total(&self) -> f64 {
        self.proper + self.improper
    }
}

/// Rates and incident energies of every receiver for one transmit design.
#[derive(Debug, Clone, PartialEq)]
pub struct RateEnergyReport {
    /// Cellular rates (bits/channel use).
    pub cell_rates: Vec<RateSplit>,
    /// D2D rates (bits/channel use), after power splitting when active.
    pub d2d_rates: [RateSplit; D2D_PAIR],
    /// Incident RF energy at each cellular user (no thermal noise).
    pub cell_energy: Vec<f64>,
    /// Harvested-side energy at each D2D user, scaled by `1 - eta` when
    /// power splitting is active.
    pub d2d_energy: [f64; D2D_PAIR],
    /// Residual self-interference variance used per D2D receiver.
    pub rsi_var: [f64; D2D_PAIR],
}

#[inline]
fn qform(h: &CVector, mat: &CMatrix) -> f64 {
    // h^H M h is real for Hermitian M; drop the numerical imaginary dust.
    (h.adjoint() * mat * h)[(0, 0)].re
}

#[inline]
fn pseudo_qform(h: &CVector, mat: &CMatrix) -> Complex64 {
    // h^H Mhat h^* with the conjugated channel on the right.
    (h.adjoint() * mat * h.conjugate())[(0, 0)]
}

/// Transmit-noise leakage through the self-interference channel:
/// `kappa * g^H diag(C) g`.
fn tx_noise_var(instance: &NetworkInstance, design: &TxDesign, user: usize) -> f64 {
    let g = &instance.channels.self_estimate[user];
    let c = &design.d2d_streams[user].cov;
    let kappa = instance.config.tx_noise_scale;
    kappa
        * g.iter()
            .enumerate()
            .map(|(i, gi)| gi.norm_sqr() * c[(i, i)].re)
            .sum::<f64>()
}

/// Residual self-interference variance seen by D2D user `user`.
///
/// In fixed mode the variance is an exogenous receiver-side constant (the
/// optimizer knows only the error variance, not the error channel), so it is
/// present regardless of the node's transmit covariance and is not reduced by
/// a power splitter. In error-channel mode it is the quadratic form of the
/// configured error channel and scales with the splitter like any other
/// incident term.
pub fn rsi_variance(instance: &NetworkInstance, design: &TxDesign, user: usize) -> f64 {
    match instance.config.rsi {
        RsiMode::Fixed(v) => v,
        RsiMode::FromError => qform(
            &instance.channels.self_error[user],
            &design.d2d_streams[user].cov,
        ),
    }
}

/// Receive statistics of cellular user `user` under treating-interference-
/// as-noise.
pub fn link_stats_cellular(
    instance: &NetworkInstance,
    design: &TxDesign,
    user: usize,
) -> LinkStats {
    link_stats_cellular_with_cancellation(instance, design, user, &[])
}

/// Receive statistics of cellular user `user` with the BS streams in
/// `canceled` removed from the interference (successive pre-cancellation at
/// the transmitter). `canceled` must not contain `user`.
pub fn link_stats_cellular_with_cancellation(
    instance: &NetworkInstance,
    design: &TxDesign,
    user: usize,
    canceled: &[usize],
) -> LinkStats {
    let ch = &instance.channels;
    let h = &ch.bs_to_cell[user];
    let mut total = instance.config.noise_var;
    let mut total_pseudo = Complex64::new(0.0, 0.0);
    for (m, stream) in design.bs_streams.iter().enumerate() {
        if canceled.contains(&m) {
            continue;
        }
        total += qform(h, &stream.cov);
        total_pseudo += pseudo_qform(h, &stream.pseudo);
    }
    for j in 0..D2D_PAIR {
        let hj = &ch.d2d_to_cell[user][j];
        total += qform(hj, &design.d2d_streams[j].cov);
        total_pseudo += pseudo_qform(hj, &design.d2d_streams[j].pseudo);
    }
    let desired = qform(h, &design.bs_streams[user].cov);
    let desired_pseudo = pseudo_qform(h, &design.bs_streams[user].pseudo);
    LinkStats {
        received_var: total,
        received_pseudo: total_pseudo,
        interference_var: total - desired,
        interference_pseudo: total_pseudo - desired_pseudo,
    }
}

/// Receive statistics of D2D user `user`. `split` is the power-splitting
/// factor routed to the information detector (1 = no splitting). Incident
/// signal terms scale with `split`; thermal noise and the fixed-mode RSI
/// variance do not.
pub fn link_stats_d2d(
    instance: &NetworkInstance,
    design: &TxDesign,
    user: usize,
    split: f64,
) -> LinkStats {
    let ch = &instance.channels;
    let other = peer(user);
    let g_desired = &ch.d2d_cross[user];
    let g_bs = &ch.bs_to_d2d[user];

    let desired = qform(g_desired, &design.d2d_streams[other].cov);
    let desired_pseudo = pseudo_qform(g_desired, &design.d2d_streams[other].pseudo);
    let bs_interf = design
        .bs_streams
        .iter()
        .map(|s| qform(g_bs, &s.cov))
        .sum::<f64>();
    let bs_pseudo = design
        .bs_streams
        .iter()
        .map(|s| pseudo_qform(g_bs, &s.pseudo))
        .sum::<Complex64>();
    let noise_leak = tx_noise_var(instance, design, user);
    let noise_leak_pseudo = instance.config.tx_noise_scale
        * pseudo_qform(&ch.self_estimate[user], &design.d2d_streams[user].pseudo);

    let (rsi, rsi_pseudo, rsi_split) = match instance.config.rsi {
        // The receiver knows only the error variance; the residual is
        // orthogonal to the observation and its pseudo-variance is zero.
        RsiMode::Fixed(v) => (v, Complex64::new(0.0, 0.0), 1.0),
        RsiMode::FromError => (
            qform(&ch.self_error[user], &design.d2d_streams[user].cov),
            pseudo_qform(&ch.self_error[user], &design.d2d_streams[user].pseudo),
            split,
        ),
    };

    let total = split * (desired + bs_interf + noise_leak)
        + rsi_split * rsi
        + instance.config.noise_var;
    let total_pseudo =
        split * (desired_pseudo + bs_pseudo + noise_leak_pseudo) + rsi_split * rsi_pseudo;
    LinkStats {
        received_var: total,
        received_pseudo: total_pseudo,
        interference_var: total - split * desired,
        interference_pseudo: total_pseudo - split * desired_pseudo,
    }
}

/// Incident RF energy at cellular user `user` (thermal noise excluded).
pub fn cellular_energy(instance: &NetworkInstance, design: &TxDesign, user: usize) -> f64 {
    let h = &instance.channels.bs_to_cell[user];
    let mut e = design.bs_streams.iter().map(|s| qform(h, &s.cov)).sum::<f64>();
    for j in 0..D2D_PAIR {
        e += qform(&instance.channels.d2d_to_cell[user][j], &design.d2d_streams[j].cov);
    }
    e
}

/// Full-split incident energy at D2D user `user`: peer signal, BS signal and
/// the node's own transmit-noise leakage.
pub fn d2d_energy(instance: &NetworkInstance, design: &TxDesign, user: usize) -> f64 {
    let ch = &instance.channels;
    let other = peer(user);
    qform(&ch.d2d_cross[user], &design.d2d_streams[other].cov)
        + design
            .bs_streams
            .iter()
            .map(|s| qform(&ch.bs_to_d2d[user], &s.cov))
            .sum::<f64>()
        + tx_noise_var(instance, design, user)
}

/// Evaluates all rates and energies of a design. `split` gives the per-D2D
/// power-splitting factors; `None` means no splitting (full power to both
/// detection at the D2D nodes and the energy expression).
pub fn rates_and_energies(
    instance: &NetworkInstance,
    design: &TxDesign,
    split: Option<[f64; D2D_PAIR]>,
) -> Result<RateEnergyReport, OptError> {
    let users = instance.config.users;
    let noise = instance.config.noise_var;
    let mut cell_rates = Vec::with_capacity(users);
    let mut cell_energy = Vec::with_capacity(users);
    for k in 0..users {
        let stats = link_stats_cellular(instance, design, k);
        stats.check(noise)?;
        cell_rates.push(RateSplit { proper: stats.proper_rate(), improper: stats.improper_rate() });
        cell_energy.push(cellular_energy(instance, design, k));
    }
    let mut d2d_rates = [RateSplit::default(); D2D_PAIR];
    let mut d2d_energy_out = [0.0; D2D_PAIR];
    let mut rsi_var = [0.0; D2D_PAIR];
    for j in 0..D2D_PAIR {
        let eta = split.map_or(1.0, |s| s[j]);
        let stats = link_stats_d2d(instance, design, j, eta);
        stats.check(noise)?;
        d2d_rates[j] = RateSplit { proper: stats.proper_rate(), improper: stats.improper_rate() };
        let harvest_share = split.map_or(1.0, |s| 1.0 - s[j]);
        d2d_energy_out[j] = harvest_share * d2d_energy(instance, design, j);
        rsi_var[j] = rsi_variance(instance, design, j);
    }
    Ok(RateEnergyReport { cell_rates, d2d_rates, cell_energy, d2d_energy: d2d_energy_out, rsi_var })
}

/// Residual between the rate computed from the explicit 2x2 augmented
/// covariance determinants and the decomposed proper + improper form.
pub fn augmented_rate_check(stats: &LinkStats) -> f64 {
    let aug = |var: f64, pseudo: Complex64| -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(var, 0.0),
                pseudo,
                pseudo.conj(),
                Complex64::new(var, 0.0),
            ],
        )
    };
    let det_y = aug(stats.received_var, stats.received_pseudo).determinant();
    let det_w = aug(stats.interference_var, stats.interference_pseudo).determinant();
    let det_rate = 0.5 * (det_y.re / det_w.re).log2();
    (det_rate - stats.rate()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::example_network;
    use approx::assert_abs_diff_eq;

    fn mrt(h: &CVector, power: f64) -> StreamCovariance {
        let t = h * Complex64::new((power / h.norm_squared()).sqrt(), 0.0);
        StreamCovariance::from_beamformer(t)
    }

    #[test]
    fn zero_design_gives_noise_only_cellular_stats() {
        let inst = example_network();
        let design = TxDesign::zero(&inst);
        let stats = link_stats_cellular(&inst, &design, 0);
        assert_abs_diff_eq!(stats.received_var, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(stats.interference_var, 1.0, epsilon = 1e-15);
        assert_eq!(stats.received_pseudo, Complex64::new(0.0, 0.0));
        assert_eq!(stats.rate(), 0.0);
    }

    #[test]
    fn zero_design_d2d_keeps_fixed_rsi_floor() {
        // Fixed-mode RSI is exogenous: the receiver budgets for it whether or
        // not the node currently transmits, matching the trace-form SINR used
        // by the optimizer.
        let inst = example_network();
        let design = TxDesign::zero(&inst);
        let stats = link_stats_d2d(&inst, &design, 0, 1.0);
        assert_abs_diff_eq!(stats.received_var, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(stats.interference_var, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn error_mode_rsi_vanishes_with_zero_error_channel() {
        let mut inst = example_network();
        inst.config.rsi = RsiMode::FromError;
        // self_error defaults to zero vectors in the bundled network.
        let mut design = TxDesign::zero(&inst);
        design.d2d_streams[0] = mrt(&inst.channels.self_estimate[0], 2.0);
        assert_eq!(rsi_variance(&inst, &design, 0), 0.0);
        let stats = link_stats_d2d(&inst, &design, 0, 1.0);
        // Only the kappa leakage and thermal noise remain.
        assert!(stats.interference_var < 1.0 + inst.config.tx_noise_scale * 2.0 + 1e-12);
    }

    #[test]
    fn single_user_mrt_matches_direct_formula() {
        let inst = example_network();
        let mut design = TxDesign::zero(&inst);
        design.bs_streams[0] = mrt(&inst.channels.bs_to_cell[0], 4.0);
        let stats = link_stats_cellular(&inst, &design, 0);
        // Unit-norm channel up to the printed precision: P*||h||^2 + 1 = 5.
        assert_abs_diff_eq!(stats.received_var, 5.0, epsilon = 1e-3);
        assert_abs_diff_eq!(stats.interference_var, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(stats.rate(), 5.0f64.log2(), epsilon = 1e-3);
    }

    #[test]
    fn proper_design_has_zero_pseudo_stats_and_zero_improper_rate() {
        let inst = example_network();
        let mut design = TxDesign::zero(&inst);
        design.bs_streams[0] = mrt(&inst.channels.bs_to_cell[0], 2.0);
        design.bs_streams[1] = mrt(&inst.channels.bs_to_cell[1], 2.0);
        design.d2d_streams[0] = mrt(&inst.channels.d2d_cross[1], 2.0);
        let stats = link_stats_cellular(&inst, &design, 0);
        assert_eq!(stats.received_pseudo, Complex64::new(0.0, 0.0));
        assert_eq!(stats.improper_rate(), 0.0);
    }

    #[test]
    fn d2d_peer_mrt_hits_unit_sinr_under_unit_rsi() {
        // Peer transmits toward user 2 at power 2; with kappa = 0 and unit
        // RSI variance the SINR is 2 / (1 + 1) = 1 and the rate is 1 bit.
        let mut inst = example_network();
        inst.config.tx_noise_scale = 0.0;
        let mut design = TxDesign::zero(&inst);
        design.d2d_streams[0] = mrt(&inst.channels.d2d_cross[1], 2.0);
        design.d2d_streams[1] = mrt(&inst.channels.d2d_cross[0], 2.0);
        let stats = link_stats_d2d(&inst, &design, 1, 1.0);
        assert_abs_diff_eq!(stats.received_var, 4.0, epsilon = 2e-4);
        assert_abs_diff_eq!(stats.interference_var, 2.0, epsilon = 1e-4);
        assert_abs_diff_eq!(stats.rate(), 1.0, epsilon = 1e-4);
    }

    #[test]
    fn splitter_extremes_kill_rate_or_energy() {
        let inst = example_network();
        let mut design = TxDesign::zero(&inst);
        design.d2d_streams[0] = mrt(&inst.channels.d2d_cross[1], 2.0);
        design.d2d_streams[1] = mrt(&inst.channels.d2d_cross[0], 2.0);
        design.bs_streams[0] = mrt(&inst.channels.bs_to_cell[0], 4.0);
        let full_id = rates_and_energies(&inst, &design, Some([1.0, 1.0])).unwrap();
        assert_eq!(full_id.d2d_energy, [0.0, 0.0]);
        let full_eh = rates_and_energies(&inst, &design, Some([0.0, 0.0])).unwrap();
        assert_eq!(full_eh.d2d_rates[0].total(), 0.0);
        let base = rates_and_energies(&inst, &design, None).unwrap();
        assert_abs_diff_eq!(full_eh.d2d_energy[0], base.d2d_energy[0], epsilon = 1e-12);
    }

    #[test]
    fn split_rate_monotone_and_energy_linear() {
        let inst = example_network();
        let mut design = TxDesign::zero(&inst);
        design.d2d_streams[1] = mrt(&inst.channels.d2d_cross[0], 2.0);
        design.bs_streams[0] = mrt(&inst.channels.bs_to_cell[0], 4.0);
        let base = d2d_energy(&inst, &design, 0);
        let mut last_rate = -1.0;
        for i in 0..=10 {
            let eta = i as f64 / 10.0;
            let rep = rates_and_energies(&inst, &design, Some([eta, 1.0])).unwrap();
            assert!(rep.d2d_rates[0].total() >= last_rate - 1e-12);
            last_rate = rep.d2d_rates[0].total();
            assert_abs_diff_eq!(rep.d2d_energy[0], (1.0 - eta) * base, epsilon = 1e-12);
        }
    }

    #[test]
    fn cellular_energy_is_linear_in_covariances() {
        let inst = example_network();
        let mut design = TxDesign::zero(&inst);
        design.bs_streams[0] = mrt(&inst.channels.bs_to_cell[0], 1.3);
        design.bs_streams[1] = mrt(&inst.channels.bs_to_cell[1], 0.7);
        design.d2d_streams[0] = mrt(&inst.channels.d2d_cross[1], 0.5);
        let e1 = cellular_energy(&inst, &design, 0);
        let mut doubled = design.clone();
        for s in doubled.bs_streams.iter_mut().chain(doubled.d2d_streams.iter_mut()) {
            s.cov *= Complex64::new(2.0, 0.0);
        }
        let e2 = cellular_energy(&inst, &doubled, 0);
        assert_abs_diff_eq!(e2, 2.0 * e1, epsilon = 1e-12);
        // Energy equals received variance minus thermal noise.
        let stats = link_stats_cellular(&inst, &design, 0);
        assert_abs_diff_eq!(e1, stats.received_var - inst.config.noise_var, epsilon = 1e-12);
    }

    #[test]
    fn augmented_determinant_identity_scalar_case() {
        let stats = LinkStats {
            received_var: 1.0,
            received_pseudo: Complex64::new(0.5, 0.0),
            interference_var: 0.9,
            interference_pseudo: Complex64::new(0.1, 0.2),
        };
        // det of [[1, 0.5],[0.5, 1]] = 0.75.
        let aug = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        assert_abs_diff_eq!(aug.determinant().re, 0.75, epsilon = 1e-15);
        assert!(augmented_rate_check(&stats) <= 1e-12);
    }

    #[test]
    fn improper_rate_is_zero_for_proper_stats() {
        let stats = LinkStats {
            received_var: 3.0,
            received_pseudo: Complex64::new(0.0, 0.0),
            interference_var: 1.5,
            interference_pseudo: Complex64::new(0.0, 0.0),
        };
        assert_eq!(stats.improper_rate(), 0.0);
        assert!(augmented_rate_check(&stats) <= 1e-12);
    }

    #[test]
    fn invalid_stats_are_rejected() {
        let stats = LinkStats {
            received_var: 1.0,
            received_pseudo: Complex64::new(1.5, 0.0),
            interference_var: 0.5,
            interference_pseudo: Complex64::new(0.0, 0.0),
        };
        assert!(stats.check(0.1).is_err());
    }
}
