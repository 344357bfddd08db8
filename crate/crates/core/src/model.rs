//! Network topology, channel data and configuration.
//!
//! A [`NetworkInstance`] bundles the channel vectors of the two-tier network
//! (one multi-antenna base station serving `K` cellular users, plus a
//! full-duplex D2D pair) with the power, noise and demand parameters used by
//! the optimizers. Instances are immutable after construction and safe to
//! share across workers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::ParseError;

pub type CVector = DVector<Complex64>;

/// Number of users in the D2D pair. The pair is structural: every instance
/// carries exactly two full-duplex nodes.
pub const D2D_PAIR: usize = 2;

/// Index of the peer of D2D user `j`.
#[inline]
pub fn peer(j: usize) -> usize {
    1 - j
}

/// All channel vectors of the network.
///
/// Naming follows signal direction: `bs_to_cell[k]` is the channel from the
/// base station to cellular user `k`, `d2d_cross[j]` carries the desired
/// signal of D2D user `j` (transmitted by its peer), and `self_error` is the
/// part of the self-interference channel that survives cancellation.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// BS -> cellular user k (length N each).
    pub bs_to_cell: Vec<CVector>,
    /// D2D transmitter j -> cellular user k, indexed `[k][j]` (length M each).
    pub d2d_to_cell: Vec<[CVector; D2D_PAIR]>,
    /// Peer -> D2D user j (length M each).
    pub d2d_cross: [CVector; D2D_PAIR],
    /// BS -> D2D user j (length N each).
    pub bs_to_d2d: [CVector; D2D_PAIR],
    /// Self-interference channel estimate of D2D user j (length M each).
    pub self_estimate: [CVector; D2D_PAIR],
    /// Residual self-interference error channel of D2D user j (length M each).
    pub self_error: [CVector; D2D_PAIR],
}

/// How the residual self-interference variance of a D2D receiver is modelled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RsiMode {
    /// Exogenous variance, known to the optimizer. The pseudo-variance
    /// contribution of the residual is zero in this mode.
    Fixed(f64),
    /// Quadratic form of the error channel, `self_error' C self_error`.
    FromError,
}

/// Power budgets, impairment parameters and per-user demands.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    /// Number of cellular users K.
    pub users: usize,
    /// BS antennas N.
    pub bs_antennas: usize,
    /// D2D transmit antennas M.
    pub d2d_antennas: usize,
    /// BS transmit power budget P_B.
    pub bs_power: f64,
    /// Per-node D2D transmit power budget P_j.
    pub d2d_power: f64,
    /// Receiver thermal noise variance.
    pub noise_var: f64,
    /// Transmitter-noise scale kappa (dimensionless, << 1).
    pub tx_noise_scale: f64,
    /// Residual self-interference model.
    pub rsi: RsiMode,
    /// Per-cellular-user energy demand (energy units per channel use).
    pub energy_demand: Vec<f64>,
    /// Per-cellular-user rate demand (bits per channel use).
    pub rate_demand: Vec<f64>,
    /// Seed driving all randomized stages.
    pub seed: u64,
}

impl NetworkConfig {
    /// Defaults matching the bundled two-user example network.
    pub fn default_for(users: usize, bs_antennas: usize, d2d_antennas: usize) -> Self {
        NetworkConfig {
            users,
            bs_antennas,
            d2d_antennas,
            bs_power: 4.0,
            d2d_power: 2.0,
            noise_var: 1.0,
            tx_noise_scale: 1e-3,
            rsi: RsiMode::Fixed(1.0),
            energy_demand: vec![0.0; users],
            rate_demand: vec![0.0; users],
            seed: 1,
        }
    }

    /// Fixed RSI variance, or 0 in error-channel mode (where the variance is
    /// design dependent).
    pub fn fixed_rsi_var(&self) -> f64 {
        match self.rsi {
            RsiMode::Fixed(v) => v,
            RsiMode::FromError => 0.0,
        }
    }
}

/// A validated channel set plus configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkInstance {
    pub channels: ChannelSet,
    pub config: NetworkConfig,
}

/// One invariant violation found by [`NetworkInstance::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl NetworkInstance {
    /// Checks dimensions, positivity and finiteness. Violations are data,
    /// not errors; an empty list means the instance is consistent.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let c = &self.config;
        let mut positive = |name: &str, v: f64| {
            if !(v > 0.0) {
                out.push(Violation {
                    field: name.to_string(),
                    message: format!("{name} must be positive, got {v}"),
                });
            }
        };
        positive("P_B", c.bs_power);
        positive("P_j", c.d2d_power);
        positive("sigma2_n", c.noise_var);
        if !(0.0..1.0).contains(&c.tx_noise_scale) {
            out.push(Violation {
                field: "kappa".into(),
                message: format!("kappa must lie in [0, 1), got {}", c.tx_noise_scale),
            });
        }
        if let RsiMode::Fixed(v) = c.rsi {
            if !(v >= 0.0) {
                out.push(Violation {
                    field: "sigma2_rsi".into(),
                    message: format!("fixed RSI variance must be nonnegative, got {v}"),
                });
            }
        }
        for (name, demand) in [("Psi", &c.energy_demand), ("Sigma", &c.rate_demand)] {
            if demand.len() != c.users {
                out.push(Violation {
                    field: name.into(),
                    message: format!("{name} has {} entries, expected K={}", demand.len(), c.users),
                });
            }
            for (k, &d) in demand.iter().enumerate() {
                if !(d >= 0.0) {
                    out.push(Violation {
                        field: format!("{name}[{}]", k + 1),
                        message: format!("demand must be nonnegative, got {d}"),
                    });
                }
            }
        }

        let ch = &self.channels;
        fn check_vec(out: &mut Vec<Violation>, name: String, v: &CVector, want: usize) {
            if v.len() != want {
                out.push(Violation {
                    field: name.clone(),
                    message: format!("has length {}, expected {}", v.len(), want),
                });
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                out.push(Violation {
                    field: name,
                    message: "contains non-finite entries".into(),
                });
            }
        }
        if ch.bs_to_cell.len() != c.users || ch.d2d_to_cell.len() != c.users {
            out.push(Violation {
                field: "channels".into(),
                message: format!(
                    "expected {} cellular users, got {} direct / {} interference rows",
                    c.users,
                    ch.bs_to_cell.len(),
                    ch.d2d_to_cell.len()
                ),
            });
        }
        for (k, v) in ch.bs_to_cell.iter().enumerate() {
            check_vec(&mut out, format!("h_{}B", k + 1), v, c.bs_antennas);
        }
        for (k, row) in ch.d2d_to_cell.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                check_vec(&mut out, format!("h_{}{}", k + 1, j + 1), v, c.d2d_antennas);
            }
        }
        for j in 0..D2D_PAIR {
            check_vec(&mut out, format!("g_{}{}", j + 1, peer(j) + 1), &ch.d2d_cross[j], c.d2d_antennas);
            check_vec(&mut out, format!("g_{}B", j + 1), &ch.bs_to_d2d[j], c.bs_antennas);
            check_vec(&mut out, format!("g_{}{}", j + 1, j + 1), &ch.self_estimate[j], c.d2d_antennas);
            check_vec(&mut out, format!("dg_{}{}", j + 1, j + 1), &ch.self_error[j], c.d2d_antennas);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Config document ingestion
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct RawDoc {
    config: Option<RawConfig>,
    channels: Option<RawChannels>,
}

#[derive(Deserialize)]
#[allow(non_snake_case)]
struct RawConfig {
    K: Option<usize>,
    N: Option<usize>,
    M: Option<usize>,
    P_B: Option<f64>,
    P_j: Option<f64>,
    sigma2_n: Option<f64>,
    kappa: Option<f64>,
    sigma2_rsi: Option<f64>,
    rsi_mode: Option<String>,
    Psi: Option<Vec<f64>>,
    Sigma: Option<Vec<f64>>,
    seed: Option<u64>,
}

#[derive(Deserialize)]
struct RawChannels {
    encoding: Option<String>,
    #[serde(flatten)]
    vectors: BTreeMap<String, Vec<[f64; 2]>>,
}

#[derive(Clone, Copy, PartialEq)]
enum Encoding {
    MagPhase,
    ReIm,
}

/// Loads a [`NetworkInstance`] from a structured text (TOML) document.
///
/// Channel entries are pairs, interpreted per `channels.encoding` as either
/// `[magnitude, phase]` (default, converted exactly as `m*exp(i*phase)`) or
/// `[re, im]`.
pub fn load_channels(doc: &str) -> Result<NetworkInstance, ParseError> {
    let raw: RawDoc = toml::from_str(doc).map_err(|e| ParseError::Syntax(e.to_string()))?;
    let rc = raw.config.unwrap_or(RawConfig {
        K: None,
        N: None,
        M: None,
        P_B: None,
        P_j: None,
        sigma2_n: None,
        kappa: None,
        sigma2_rsi: None,
        rsi_mode: None,
        Psi: None,
        Sigma: None,
        seed: None,
    });
    let users = rc.K.unwrap_or(2);
    let n = rc.N.unwrap_or(2);
    let m = rc.M.unwrap_or(2);
    if users == 0 || n == 0 || m == 0 {
        return Err(ParseError::BadValue {
            key: "K/N/M".into(),
            reason: "antenna and user counts must be at least 1".into(),
        });
    }

    let empty = RawChannels { encoding: None, vectors: BTreeMap::new() };
    let rch = raw.channels.unwrap_or(empty);
    let encoding = match rch.encoding.as_deref() {
        None | Some("mag-phase") => Encoding::MagPhase,
        Some("re-im") => Encoding::ReIm,
        Some(other) => {
            return Err(ParseError::BadValue {
                key: "channels.encoding".into(),
                reason: format!("unknown encoding `{other}` (expected mag-phase or re-im)"),
            })
        }
    };

    let get = |key: &str, want: usize, required: bool| -> Result<Option<CVector>, ParseError> {
        let Some(entries) = rch.vectors.get(key) else {
            return if required {
                Err(ParseError::MissingChannel(key.to_string()))
            } else {
                Ok(None)
            };
        };
        if entries.len() != want {
            return Err(ParseError::DimensionMismatch {
                key: key.to_string(),
                got: entries.len(),
                want,
            });
        }
        let mut v = CVector::zeros(want);
        for (i, pair) in entries.iter().enumerate() {
            if !pair[0].is_finite() || !pair[1].is_finite() {
                return Err(ParseError::NonFinite { key: key.to_string(), index: i });
            }
            v[i] = match encoding {
                Encoding::MagPhase => Complex64::from_polar(pair[0], pair[1]),
                Encoding::ReIm => Complex64::new(pair[0], pair[1]),
            };
        }
        Ok(Some(v))
    };
    let require = |key: String, want: usize| -> Result<CVector, ParseError> {
        Ok(get(&key, want, true)?.expect("required"))
    };

    let mut bs_to_cell = Vec::with_capacity(users);
    let mut d2d_to_cell = Vec::with_capacity(users);
    for k in 0..users {
        bs_to_cell.push(require(format!("h_{}B", k + 1), n)?);
        let a = require(format!("h_{}1", k + 1), m)?;
        let b = require(format!("h_{}2", k + 1), m)?;
        d2d_to_cell.push([a, b]);
    }
    let d2d_cross = [require("g_12".into(), m)?, require("g_21".into(), m)?];
    let bs_to_d2d = [require("g_1B".into(), n)?, require("g_2B".into(), n)?];
    let self_estimate = [require("g_11".into(), m)?, require("g_22".into(), m)?];
    let self_error = [
        get("dg_11", m, false)?.unwrap_or_else(|| CVector::zeros(m)),
        get("dg_22", m, false)?.unwrap_or_else(|| CVector::zeros(m)),
    ];

    let rsi = match rc.rsi_mode.as_deref() {
        Some("from-error") => RsiMode::FromError,
        Some("fixed") | None => RsiMode::Fixed(rc.sigma2_rsi.unwrap_or(1.0)),
        Some(other) => {
            return Err(ParseError::BadValue {
                key: "config.rsi_mode".into(),
                reason: format!("unknown mode `{other}` (expected fixed or from-error)"),
            })
        }
    };

    let config = NetworkConfig {
        users,
        bs_antennas: n,
        d2d_antennas: m,
        bs_power: rc.P_B.unwrap_or(4.0),
        d2d_power: rc.P_j.unwrap_or(2.0),
        noise_var: rc.sigma2_n.unwrap_or(1.0),
        tx_noise_scale: rc.kappa.unwrap_or(1e-3),
        rsi,
        energy_demand: rc.Psi.unwrap_or_else(|| vec![0.0; users]),
        rate_demand: rc.Sigma.unwrap_or_else(|| vec![0.0; users]),
        seed: rc.seed.unwrap_or(1),
    };

    let instance = NetworkInstance {
        channels: ChannelSet { bs_to_cell, d2d_to_cell, d2d_cross, bs_to_d2d, self_estimate, self_error },
        config,
    };
    for v in instance.validate() {
        if v.message.contains("length") || v.message.contains("non-finite") {
            return Err(ParseError::BadValue { key: v.field, reason: v.message });
        }
    }
    Ok(instance)
}

/// Serializes an instance back to the document format accepted by
/// [`load_channels`]. Channel entries are written as exact `[re, im]` pairs,
/// so `load_channels(serialize(x)) == x` bitwise.
pub fn serialize(instance: &NetworkInstance) -> String {
    let c = &instance.config;
    let mut s = String::new();
    s.push_str("[config]\n");
    let _ = writeln!(s, "K = {}", c.users);
    let _ = writeln!(s, "N = {}", c.bs_antennas);
    let _ = writeln!(s, "M = {}", c.d2d_antennas);
    let _ = writeln!(s, "P_B = {}", fmt_f64(c.bs_power));
    let _ = writeln!(s, "P_j = {}", fmt_f64(c.d2d_power));
    let _ = writeln!(s, "sigma2_n = {}", fmt_f64(c.noise_var));
    let _ = writeln!(s, "kappa = {}", fmt_f64(c.tx_noise_scale));
    match c.rsi {
        RsiMode::Fixed(v) => {
            let _ = writeln!(s, "rsi_mode = \"fixed\"");
            let _ = writeln!(s, "sigma2_rsi = {}", fmt_f64(v));
        }
        RsiMode::FromError => {
            let _ = writeln!(s, "rsi_mode = \"from-error\"");
        }
    }
    let _ = writeln!(s, "Psi = [{}]", join_f64(&c.energy_demand));
    let _ = writeln!(s, "Sigma = [{}]", join_f64(&c.rate_demand));
    let _ = writeln!(s, "seed = {}", c.seed);
    s.push_str("\n[channels]\nencoding = \"re-im\"\n");
    let ch = &instance.channels;
    for (k, v) in ch.bs_to_cell.iter().enumerate() {
        write_vec(&mut s, &format!("h_{}B", k + 1), v);
    }
    for (k, row) in ch.d2d_to_cell.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            write_vec(&mut s, &format!("h_{}{}", k + 1, j + 1), v);
        }
    }
    write_vec(&mut s, "g_12", &ch.d2d_cross[0]);
    write_vec(&mut s, "g_21", &ch.d2d_cross[1]);
    write_vec(&mut s, "g_1B", &ch.bs_to_d2d[0]);
    write_vec(&mut s, "g_2B", &ch.bs_to_d2d[1]);
    write_vec(&mut s, "g_11", &ch.self_estimate[0]);
    write_vec(&mut s, "g_22", &ch.self_estimate[1]);
    write_vec(&mut s, "dg_11", &ch.self_error[0]);
    write_vec(&mut s, "dg_22", &ch.self_error[1]);
    s
}

fn fmt_f64(x: f64) -> String {
    // `{:?}` prints the shortest representation that round-trips the value
    // and always keeps a decimal point, which TOML requires for floats.
    format!("{x:?}")
}

fn join_f64(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(", ")
}

fn write_vec(s: &mut String, key: &str, v: &CVector) {
    let entries = v
        .iter()
        .map(|z| format!("[{}, {}]", fmt_f64(z.re), fmt_f64(z.im)))
        .collect::<Vec<_>>()
        .join(", ");
    let _ = writeln!(s, "{key} = [{entries}]");
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

/// Draws a random instance: every channel vector i.i.d. circularly-symmetric
/// complex Gaussian normalized to unit norm, and the self-interference error
/// scaled to norm `error_norm`. Pure function of its arguments.
pub fn random_channels(seed: u64, users: usize, bs_antennas: usize, d2d_antennas: usize, error_norm: f64) -> NetworkInstance {
    assert!(users >= 1 && bs_antennas >= 1 && d2d_antennas >= 1, "K, N, M must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = |len: usize| -> CVector {
        let mut v = draw(&mut rng, len);
        let norm = v.norm();
        if norm > 0.0 {
            v /= Complex64::new(norm, 0.0);
        }
        v
    };
    let bs_to_cell = (0..users).map(|_| unit(bs_antennas)).collect();
    let d2d_to_cell = (0..users).map(|_| [unit(d2d_antennas), unit(d2d_antennas)]).collect();
    let d2d_cross = [unit(d2d_antennas), unit(d2d_antennas)];
    let bs_to_d2d = [unit(bs_antennas), unit(bs_antennas)];
    let self_estimate = [unit(d2d_antennas), unit(d2d_antennas)];
    let self_error = [
        unit(d2d_antennas) * Complex64::new(error_norm, 0.0),
        unit(d2d_antennas) * Complex64::new(error_norm, 0.0),
    ];
    let mut config = NetworkConfig::default_for(users, bs_antennas, d2d_antennas);
    config.seed = seed;
    NetworkInstance {
        channels: ChannelSet { bs_to_cell, d2d_to_cell, d2d_cross, bs_to_d2d, self_estimate, self_error },
        config,
    }
}

fn draw(rng: &mut ChaCha8Rng, len: usize) -> CVector {
    use rand::distributions::Distribution;
    let normal = rand::distributions::Uniform::new(0.0f64, 1.0);
    // Box-Muller keeps the draw order stable across platforms.
    let mut v = CVector::zeros(len);
    for i in 0..len {
        let u1: f64 = normal.sample(rng).max(f64::MIN_POSITIVE);
        let u2: f64 = rng.gen();
        let r = (-2.0 * u1.ln()).sqrt() * std::f64::consts::FRAC_1_SQRT_2;
        let phi = 2.0 * std::f64::consts::PI * u2;
        v[i] = Complex64::from_polar(r, phi);
    }
    v
}

// ---------------------------------------------------------------------------
// Bundled example network
// ---------------------------------------------------------------------------

/// Bundled two-user example network (unit-norm channels, magnitude/phase
/// encoding) with the default operating point: P_B = 4, P_j = 2,
/// sigma2_n = sigma2_rsi = 1, Psi = 6, Sigma = 0.7.
pub const EXAMPLE_NETWORK_TOML: &str = r#"[config]
K = 2
N = 2
M = 2
P_B = 4.0
P_j = 2.0
sigma2_n = 1.0
kappa = 0.001
rsi_mode = "fixed"
sigma2_rsi = 1.0
Psi = [6.0, 6.0]
Sigma = [0.7, 0.7]
seed = 1

[channels]
encoding = "mag-phase"
h_1B = [[0.9854, 1.2458], [0.1702, 1.2338]]
h_2B = [[0.9698, 2.3462], [0.2440, -0.6828]]
h_11 = [[0.9256, 0.2839], [0.3784, -2.7961]]
h_12 = [[0.8418, -1.3029], [0.5399, -1.1500]]
h_21 = [[0.8916, -0.9131], [0.4529, 0.6297]]
h_22 = [[0.3197, -3.0983], [0.9475, 0.8234]]
g_12 = [[0.9689, 1.9479], [0.2475, -1.2092]]
g_21 = [[0.3285, -2.3296], [0.9445, -2.0290]]
g_1B = [[0.9616, 0.7495], [0.2745, 0.2609]]
g_2B = [[0.9326, 3.0490], [0.3609, 2.8022]]
g_11 = [[0.7992, -1.3910], [0.6011, -1.1197]]
g_22 = [[0.3704, 2.9091], [0.9289, 2.6368]]
"#;

/// Loads the bundled example network.
pub fn example_network() -> NetworkInstance {
    load_channels(EXAMPLE_NETWORK_TOML).expect("bundled network parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn example_entry_magnitudes_are_exact() {
        let inst = example_network();
        assert_abs_diff_eq!(inst.channels.bs_to_cell[0][0].norm(), 0.9854, epsilon = 1e-12);
        assert_abs_diff_eq!(inst.channels.bs_to_cell[0][0].arg(), 1.2458, epsilon = 1e-12);
    }

    #[test]
    fn example_channels_are_unit_norm_within_print_precision() {
        // Entries carry four decimals, so the norms are 1 up to ~1e-3.
        let inst = example_network();
        assert_abs_diff_eq!(inst.channels.bs_to_cell[1].norm(), 1.0, epsilon = 1e-3);
        for v in &inst.channels.bs_to_cell {
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-3);
        }
        for row in &inst.channels.d2d_to_cell {
            for v in row {
                assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-3);
            }
        }
    }

    #[test]
    fn empty_document_reports_first_missing_channel() {
        let err = load_channels("").unwrap_err();
        assert_eq!(err.to_string(), "missing channel h_1B");
    }

    #[test]
    fn dimension_mismatch_names_the_key() {
        let doc = EXAMPLE_NETWORK_TOML.replace(
            "h_1B = [[0.9854, 1.2458], [0.1702, 1.2338]]",
            "h_1B = [[0.9854, 1.2458], [0.1702, 1.2338], [0.1, 0.2]]",
        );
        let err = load_channels(&doc).unwrap_err();
        match err {
            ParseError::DimensionMismatch { key, got, want } => {
                assert_eq!(key, "h_1B");
                assert_eq!((got, want), (3, 2));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_finite_entry_is_rejected() {
        let doc = EXAMPLE_NETWORK_TOML.replace("[0.9854, 1.2458]", "[nan, 1.2458]");
        let err = load_channels(&doc).unwrap_err();
        assert!(err.to_string().contains("h_1B"), "got {err}");
    }

    #[test]
    fn re_im_encoding_is_accepted() {
        let doc = r#"
[channels]
encoding = "re-im"
h_1B = [[1.0, 0.0], [0.0, 1.0]]
h_2B = [[1.0, 0.0], [0.0, 0.0]]
h_11 = [[1.0, 0.0], [0.0, 0.0]]
h_12 = [[1.0, 0.0], [0.0, 0.0]]
h_21 = [[1.0, 0.0], [0.0, 0.0]]
h_22 = [[1.0, 0.0], [0.0, 0.0]]
g_12 = [[1.0, 0.0], [0.0, 0.0]]
g_21 = [[1.0, 0.0], [0.0, 0.0]]
g_1B = [[1.0, 0.0], [0.0, 0.0]]
g_2B = [[1.0, 0.0], [0.0, 0.0]]
g_11 = [[1.0, 0.0], [0.0, 0.0]]
g_22 = [[1.0, 0.0], [0.0, 0.0]]
"#;
        let inst = load_channels(doc).unwrap();
        assert_eq!(inst.channels.bs_to_cell[0][1], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn serialize_round_trips_bitwise() {
        let inst = example_network();
        let text = serialize(&inst);
        let reloaded = load_channels(&text).unwrap();
        assert_eq!(inst, reloaded);
        // And the serialized text is a fixed point.
        assert_eq!(text, serialize(&reloaded));
    }

    #[test]
    fn random_channels_is_deterministic_and_unit_norm() {
        let a = random_channels(7, 2, 2, 2, 0.1);
        let b = random_channels(7, 2, 2, 2, 0.1);
        assert_eq!(a, b);
        for v in &a.channels.bs_to_cell {
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(a.channels.self_error[0].norm(), 0.1, epsilon = 1e-12);
        let c = random_channels(8, 2, 2, 2, 0.1);
        assert_ne!(a, c);
    }

    #[test]
    fn zero_error_norm_gives_zero_error_channel() {
        let inst = random_channels(3, 1, 2, 3, 0.0);
        assert_eq!(inst.channels.self_error[0].norm(), 0.0);
        assert_eq!(inst.channels.self_error[1].norm(), 0.0);
    }

    #[test]
    fn validate_accepts_example_and_flags_bad_power() {
        let mut inst = example_network();
        assert!(inst.validate().is_empty());
        inst.config.bs_power = -1.0;
        let violations = inst.validate();
        assert!(violations.iter().any(|v| v.field == "P_B" && v.message.contains("positive")));
    }

    #[test]
    fn validate_names_wrong_length_channel() {
        let mut inst = example_network();
        inst.channels.bs_to_cell[0] = CVector::zeros(3);
        let violations = inst.validate();
        assert!(violations.iter().any(|v| v.field == "h_1B"));
    }
}
