//! Two-way policy network: a learned convolutional trunk produces the action
//! mean, while the distribution spread comes from a fixed mapping of the
//! per-beam environmental uncertainty — no learned parameters on that path.

use rand::Rng;
use serde::{Deserialize, Serialize};
use uanav_nn::{Conv1d, Dense, Graph, NnError, ParameterSet, Tensor, Var};
use uanav_num::Real;
use uanav_sim::ActionBounds;

use crate::error::AgentError;

/// Log-std range and scan normalization range for the uncertainty mapping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappingConfig<T> {
    pub sigma_min: T,
    pub sigma_max: T,
    pub o_min: T,
    pub o_max: T,
}

impl<T: Real> MappingConfig<T> {
    pub fn new(max_range: T) -> Self {
        Self {
            sigma_min: T::of(-2.0),
            sigma_max: T::of(2.0),
            o_min: T::zero(),
            o_max: max_range,
        }
    }

    pub fn normalize_scan(&self, scan: &[T]) -> Vec<T> {
        let span = self.o_max - self.o_min;
        scan.iter()
            .map(|&o| ((o - self.o_min) / span).max(T::zero()).min(T::one()))
            .collect()
    }
}

/// Aggregate normalized per-beam uncertainty into the policy log-std:
/// σ̄ₐ = Σᵢ ūᵢ·(2 − ōᵢ) / (2N), then rescale to [σ_min, σ_max]. Closer
/// beams (smaller ō) weigh their uncertainty more. Pure function.
pub fn uncertainty_to_logstd<T: Real>(
    unc: &[T],
    scan: &[T],
    cfg: &MappingConfig<T>,
) -> Result<T, AgentError> {
    if unc.len() != scan.len() || unc.is_empty() {
        return Err(AgentError::LengthMismatch {
            context: "uncertainty_to_logstd".into(),
            a: unc.len(),
            b: scan.len(),
        });
    }
    let one = T::one();
    let two = one + one;
    for (&u, &o) in unc.iter().zip(scan) {
        if !(T::zero()..=one).contains(&u) || !(T::zero()..=one).contains(&o) {
            return Err(AgentError::InputOutOfRange(format!(
                "mapping inputs must be normalized to [0,1], got u={u} o={o}"
            )));
        }
    }
    let n = T::of(unc.len() as f64);
    let sum: T = unc.iter().zip(scan).map(|(&u, &o)| u * (two - o)).sum();
    let sigma_bar = sum / (two * n);
    Ok(cfg.sigma_min + (cfg.sigma_max - cfg.sigma_min) * sigma_bar)
}

/// Policy observation, all beam channels normalized to [0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyInput<T> {
    /// Current scan, normalized by max range.
    pub scan: Vec<T>,
    /// Predicted next scan, normalized by max range.
    pub pred: Vec<T>,
    /// Per-beam uncertainty in [0,1] (already variant-scaled and clipped).
    pub unc: Vec<T>,
    /// (distance / max_range, bearing / π).
    pub goal: [T; 2],
    /// (v, ω) as executed, already inside the action bounds.
    pub vel: [T; 2],
}

impl<T: Real> PolicyInput<T> {
    pub fn beams(&self) -> usize {
        self.scan.len()
    }
}

/// Where the distribution spread comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogStdMode<T> {
    /// The uncertainty mapping: state-dependent, no learned parameters.
    Mapped(MappingConfig<T>),
    /// A single learned state-independent log-std (the uncertainty-unaware
    /// ablation), clamped to the mapping range.
    Learned(MappingConfig<T>),
}

impl<T: Real> LogStdMode<T> {
    pub fn mapping(&self) -> &MappingConfig<T> {
        match self {
            LogStdMode::Mapped(m) | LogStdMode::Learned(m) => m,
        }
    }

    pub fn is_learned(&self) -> bool {
        matches!(self, LogStdMode::Learned(_))
    }
}

/// Trunk dimensions. The paper-scale profile uses 32/32 conv channels and
/// 256-wide dense layers; the desk profile shrinks both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyArch {
    pub beams: usize,
    pub conv1_ch: usize,
    pub conv2_ch: usize,
    pub hidden: usize,
}

impl PolicyArch {
    pub fn paper(beams: usize) -> Self {
        Self {
            beams,
            conv1_ch: 32,
            conv2_ch: 32,
            hidden: 256,
        }
    }
}

pub const AUX_DIM: usize = 4; // goal (2) + velocity (2)
pub const ACTION_DIM: usize = 2;

#[derive(Debug, Clone)]
pub struct PolicyNet<T> {
    pub arch: PolicyArch,
    pub mode: LogStdMode<T>,
    pub bounds: ActionBounds<T>,
    conv1: Conv1d,
    conv2: Conv1d,
    fc1: Dense,
    fc2: Dense,
    head: Dense,
}

pub const LOG_STD_PARAM: &str = "pi/log_std";

impl<T: Real> PolicyNet<T> {
    pub fn new(arch: PolicyArch, mode: LogStdMode<T>, bounds: ActionBounds<T>) -> Self {
        let conv1 = Conv1d::new("pi/conv1", 3, arch.conv1_ch, 5, 2);
        let len1 = conv1.out_len(arch.beams);
        let conv2 = Conv1d::new("pi/conv2", arch.conv1_ch, arch.conv2_ch, 3, 2);
        let len2 = conv2.out_len(len1);
        let flat = arch.conv2_ch * len2;
        Self {
            arch,
            mode,
            bounds,
            conv1,
            conv2,
            fc1: Dense::new("pi/fc1", flat + AUX_DIM, arch.hidden),
            fc2: Dense::new("pi/fc2", arch.hidden, arch.hidden),
            head: Dense::new("pi/head", arch.hidden, ACTION_DIM),
        }
    }

    pub fn init(&self, params: &mut ParameterSet<T>, rng: &mut impl Rng) -> Result<(), NnError> {
        self.conv1.init(params, rng)?;
        self.conv2.init(params, rng)?;
        self.fc1.init(params, rng)?;
        self.fc2.init(params, rng)?;
        self.head.init(params, rng)?;
        if self.mode.is_learned() {
            params.insert(LOG_STD_PARAM, Tensor::from_vec(vec![1, 1], vec![T::zero()]))?;
        }
        Ok(())
    }

    /// Stack policy inputs into the conv channels tensor [B,3,N] and the
    /// auxiliary tensor [B,4].
    pub fn batch_tensors(&self, inputs: &[&PolicyInput<T>]) -> (Tensor<T>, Tensor<T>) {
        let n = self.arch.beams;
        let b = inputs.len();
        let mut ch = Vec::with_capacity(b * 3 * n);
        let mut aux = Vec::with_capacity(b * AUX_DIM);
        for input in inputs {
            debug_assert_eq!(input.scan.len(), n);
            ch.extend_from_slice(&input.scan);
            ch.extend_from_slice(&input.pred);
            ch.extend_from_slice(&input.unc);
            aux.extend_from_slice(&input.goal);
            aux.extend_from_slice(&input.vel);
        }
        (
            Tensor::from_vec(vec![b, 3, n], ch),
            Tensor::from_vec(vec![b, AUX_DIM], aux),
        )
    }

    /// Mean path: conv(3→c1) → relu → conv(c1→c2) → relu → flatten →
    /// concat(goal, velocity) → dense → relu → dense → relu → 2-unit head.
    pub fn mean_forward(
        &self,
        g: &mut Graph<T>,
        channels: Var,
        aux: Var,
    ) -> Result<Var, NnError> {
        let shape = g.value(channels).shape().to_vec();
        if shape.len() != 3 || shape[1] != 3 || shape[2] != self.arch.beams {
            return Err(NnError::ShapeMismatch {
                context: "policy channels".into(),
                expected: vec![shape.first().copied().unwrap_or(0), 3, self.arch.beams],
                got: shape,
            });
        }
        let batch = g.value(channels).shape()[0];
        let c1 = self.conv1.forward(g, channels)?;
        let c1 = g.tape.relu(c1);
        let c2 = self.conv2.forward(g, c1)?;
        let c2 = g.tape.relu(c2);
        let flat_dim = g.value(c2).numel() / batch;
        let flat = g.tape.reshape(c2, vec![batch, flat_dim]);
        let joined = g.tape.concat_cols(&[flat, aux]);
        let h = self.fc1.forward(g, joined)?;
        let h = g.tape.relu(h);
        let h = self.fc2.forward(g, h)?;
        let h = g.tape.relu(h);
        self.head.forward(g, h)
    }

    /// Distribution spread for one input. Mapped mode is a pure function of
    /// the observation; learned mode reads (and clamps) the global log-std.
    pub fn log_std(&self, params: &ParameterSet<T>, input: &PolicyInput<T>) -> Result<T, AgentError> {
        let m = self.mode.mapping();
        match self.mode {
            LogStdMode::Mapped(_) => uncertainty_to_logstd(&input.unc, &input.scan, m),
            LogStdMode::Learned(_) => {
                let raw = params.get(LOG_STD_PARAM)?.item();
                Ok(raw.max(m.sigma_min).min(m.sigma_max))
            }
        }
    }

    /// Full two-way forward for a single input.
    pub fn forward(
        &self,
        params: &ParameterSet<T>,
        input: &PolicyInput<T>,
    ) -> Result<ActionDistribution<T>, AgentError> {
        if input.beams() != self.arch.beams {
            return Err(AgentError::LengthMismatch {
                context: "policy beams".into(),
                a: input.beams(),
                b: self.arch.beams,
            });
        }
        let mut g = Graph::new(params);
        let (ch, aux) = self.batch_tensors(&[input]);
        let ch = g.constant(ch);
        let aux = g.constant(aux);
        let mu = self.mean_forward(&mut g, ch, aux)?;
        let mv = g.value(mu).data();
        let mean = [mv[0], mv[1]];
        let log_std = self.log_std(params, input)?;
        Ok(ActionDistribution {
            mean,
            log_std,
            bounds: self.bounds,
        })
    }
}

/// Pre-squash Gaussian over the 2-D action with a shared scalar log-std;
/// tanh-squashed and affinely rescaled into the action bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionDistribution<T> {
    pub mean: [T; 2],
    pub log_std: T,
    pub bounds: ActionBounds<T>,
}

/// (center, half-width) of each action dimension's affine rescale.
pub fn affine_scales<T: Real>(bounds: &ActionBounds<T>) -> ([T; 2], [T; 2]) {
    let half = T::of(0.5);
    let centers = [(bounds.v_max + bounds.v_min) * half, T::zero()];
    let halves = [(bounds.v_max - bounds.v_min) * half, bounds.w_max];
    (centers, halves)
}

fn ln_2pi<T: Real>() -> T {
    (T::PI() + T::PI()).ln()
}

/// log(1 − tanh²(u)) in the numerically stable softplus form.
fn log_one_minus_tanh_sq<T: Real>(u: T) -> T {
    let two = T::one() + T::one();
    let softplus = |x: T| x.max(T::zero()) + (T::one() + (-x.abs()).exp()).ln();
    two * (T::LN_2() - u - softplus(-two * u))
}

/// Draw an action by squashing μ + σ·noise. Returns the bounded action and
/// its log-density under the squashed, rescaled distribution.
pub fn sample_action<T: Real>(dist: &ActionDistribution<T>, noise: [T; 2]) -> ([T; 2], T) {
    let sigma = dist.log_std.exp();
    let (centers, halves) = affine_scales(&dist.bounds);
    let mut action = [T::zero(); 2];
    let mut log_prob = T::zero();
    for d in 0..2 {
        let u = dist.mean[d] + sigma * noise[d];
        let t = u.tanh();
        action[d] = centers[d] + halves[d] * t;
        // Gaussian density at u, then the tanh and affine corrections.
        let z = (u - dist.mean[d]) / sigma;
        log_prob += -T::of(0.5) * z * z - dist.log_std - T::of(0.5) * ln_2pi::<T>();
        log_prob -= log_one_minus_tanh_sq(u);
        log_prob -= halves[d].ln();
    }
    (action, log_prob)
}

/// Log-density of a bounded action strictly inside the bounds.
pub fn log_prob<T: Real>(dist: &ActionDistribution<T>, action: [T; 2]) -> Result<T, AgentError> {
    let (centers, halves) = affine_scales(&dist.bounds);
    let sigma = dist.log_std.exp();
    let mut total = T::zero();
    for d in 0..2 {
        let t = (action[d] - centers[d]) / halves[d];
        if t <= -T::one() || t >= T::one() {
            return Err(AgentError::BoundaryAction);
        }
        // atanh
        let u = T::of(0.5) * ((T::one() + t) / (T::one() - t)).ln();
        let z = (u - dist.mean[d]) / sigma;
        total += -T::of(0.5) * z * z - dist.log_std - T::of(0.5) * ln_2pi::<T>();
        total -= log_one_minus_tanh_sq(u);
        total -= halves[d].ln();
    }
    Ok(total)
}

/// How log-std enters a batched graph.
pub enum LogStdGraph<T> {
    /// Per-sample constant column [B,1] (mapped mode).
    Const(Tensor<T>),
    /// The learned scalar parameter (unaware mode).
    Param,
}

/// Batched reparameterized sample inside a graph: builds the action [B,2]
/// and log-probability [B,1] from the mean [B,2], the log-std source and
/// external standard-normal noise [B,2].
pub fn squashed_sample_graph<T: Real>(
    g: &mut Graph<T>,
    policy: &PolicyNet<T>,
    mu: Var,
    log_std: &LogStdGraph<T>,
    noise: &Tensor<T>,
) -> (Var, Var) {
    let batch = g.value(mu).shape()[0];
    let (centers, halves) = affine_scales(&policy.bounds);
    let two = T::one() + T::one();

    // ls2: [B,2] (mapped: tiled constant; learned: clamped param tiled).
    let (u, z, ls_sum) = match log_std {
        LogStdGraph::Const(col) => {
            debug_assert_eq!(col.shape(), &[batch, 1]);
            let sigma_noise: Vec<T> = (0..batch)
                .flat_map(|i| {
                    let s = col.data()[i].exp();
                    [s * noise.data()[2 * i], s * noise.data()[2 * i + 1]]
                })
                .collect();
            let sn = g.constant(Tensor::from_vec(vec![batch, 2], sigma_noise));
            let u = g.tape.add(mu, sn);
            let inv_sigma = g.constant(Tensor::from_vec(
                vec![batch, 1],
                col.data().iter().map(|&s| (-s).exp()).collect(),
            ));
            let diff = g.tape.sub(u, mu);
            let z = g.tape.mul_col(inv_sigma, diff);
            let ls_sum = g.constant(Tensor::from_vec(
                vec![batch, 1],
                col.data().iter().map(|&s| s * two).collect(),
            ));
            (u, z, ls_sum)
        }
        LogStdGraph::Param => {
            let m = policy.mode.mapping();
            let raw = g.param(LOG_STD_PARAM);
            let ls = g.tape.clamp(raw, m.sigma_min, m.sigma_max);
            let ls2 = g.tape.concat_cols(&[ls, ls]);
            let sig2 = g.tape.exp(ls2);
            let nconst = g.constant(noise.clone());
            let sn = g.tape.mul_row(sig2, nconst);
            let u = g.tape.add(mu, sn);
            let neg_ls2 = g.tape.neg(ls2);
            let inv2 = g.tape.exp(neg_ls2);
            let diff = g.tape.sub(u, mu);
            let z = g.tape.mul_row(inv2, diff);
            let ls_row_sum = g.tape.sum_cols(ls2); // [1,1]
            let ls_sum = g.tape.expand_rows(ls_row_sum, batch);
            (u, z, ls_sum)
        }
    };

    // Gaussian term: −½ Σ z² − Σ log σ − (D/2)·ln 2π.
    let zsq = g.tape.mul(z, z);
    let zsum = g.tape.sum_cols(zsq);
    let gauss = g.tape.scale(zsum, T::of(-0.5));
    let gauss = g.tape.sub(gauss, ls_sum);
    let gauss = g.tape.add_scalar(gauss, -ln_2pi::<T>());

    // Squash correction: Σ log(1 − tanh²(u)) = Σ 2(ln2 − u − softplus(−2u)).
    let neg2u = g.tape.scale(u, -two);
    let sp = g.tape.softplus(neg2u);
    let upl = g.tape.add(u, sp);
    let corr_e = g.tape.scale(upl, -two);
    let corr_e = g.tape.add_scalar(corr_e, two * T::LN_2());
    let corr = g.tape.sum_cols(corr_e);

    let logp = g.tape.sub(gauss, corr);
    let logp = g.tape.add_scalar(logp, -(halves[0].ln() + halves[1].ln()));

    // Action: centers + halves ⊙ tanh(u).
    let t = g.tape.tanh(u);
    let halves_row = g.constant(Tensor::row(halves.to_vec()));
    let centers_row = g.constant(Tensor::row(centers.to_vec()));
    let scaled = g.tape.mul_row(halves_row, t);
    let action = g.tape.add_row(centers_row, scaled);
    (action, logp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::Distribution;

    fn mapping() -> MappingConfig<f64> {
        MappingConfig::new(6.0)
    }

    fn dist(mean: [f64; 2], log_std: f64) -> ActionDistribution<f64> {
        ActionDistribution {
            mean,
            log_std,
            bounds: ActionBounds::default(),
        }
    }

    #[test]
    fn mapping_boundary_cases_are_exact() {
        let cfg = mapping();
        let n = 64;
        let zero = vec![0.0; n];
        let one = vec![1.0; n];
        assert_eq!(uncertainty_to_logstd(&zero, &one, &cfg).unwrap(), -2.0);
        assert_eq!(uncertainty_to_logstd(&one, &zero, &cfg).unwrap(), 2.0);
    }

    #[test]
    fn mapping_hand_example() {
        let cfg = mapping();
        // ū=(1,0), ō=(1,0.5): σ̄ₐ = (1·1 + 0·1.5)/4 = 0.25 → −1.0.
        let v = uncertainty_to_logstd(&[1.0, 0.0], &[1.0, 0.5], &cfg).unwrap();
        assert!((v - (-1.0)).abs() < 1e-15);
    }

    #[test]
    fn mapping_rejects_unnormalized_inputs() {
        let cfg = mapping();
        assert!(uncertainty_to_logstd(&[1.2], &[0.5], &cfg).is_err());
        assert!(uncertainty_to_logstd(&[0.5], &[-0.1], &cfg).is_err());
        assert!(uncertainty_to_logstd(&[0.5, 0.5], &[0.5], &cfg).is_err());
    }

    #[test]
    fn mode_action_is_scaled_tanh_of_mean() {
        let d = dist([0.3, -1.1], -0.5);
        let (a, _) = sample_action(&d, [0.0, 0.0]);
        assert!((a[0] - (0.5 + 0.5 * 0.3f64.tanh())).abs() < 1e-15);
        assert!((a[1] - (-1.1f64).tanh()).abs() < 1e-15);
        assert!(a[0] > 0.0 && a[0] < 1.0 && a[1] > -1.0 && a[1] < 1.0);
    }

    #[test]
    fn standard_normal_mode_log_prob_closed_form() {
        // μ=0, log_std=0, noise=0: Gaussian part 2·log(1/√(2π)), tanh
        // correction 0, affine part −ln(0.5) − ln(1).
        let d = dist([0.0, 0.0], 0.0);
        let (_, lp) = sample_action(&d, [0.0, 0.0]);
        let expected = -(2.0f64 * std::f64::consts::PI).ln() - 0.5f64.ln();
        assert!((lp - expected).abs() < 1e-12, "{lp} vs {expected}");
    }

    #[test]
    fn log_prob_round_trip_1e9() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let normal = rand_distr::StandardNormal;
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let d = dist(
                [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)],
                rng.random_range(-2.0..1.0),
            );
            let noise = [normal.sample(&mut rng), normal.sample(&mut rng)];
            let (a, lp) = sample_action(&d, noise);
            let lp2 = log_prob(&d, a).unwrap();
            worst = worst.max((lp - lp2).abs());
        }
        assert!(worst <= 1e-9, "worst round-trip error {worst}");
    }

    #[test]
    fn symmetric_actions_have_equal_log_prob() {
        let d = dist([0.0, 0.0], -0.3);
        let a = log_prob(&d, [0.5 + 0.2, 0.4]).unwrap();
        let b = log_prob(&d, [0.5 - 0.2, -0.4]).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn boundary_action_rejected() {
        let d = dist([0.0, 0.0], 0.0);
        assert!(matches!(
            log_prob(&d, [1.0, 0.0]),
            Err(AgentError::BoundaryAction)
        ));
        assert!(matches!(
            log_prob(&d, [0.5, -1.0]),
            Err(AgentError::BoundaryAction)
        ));
    }

    /// Numeric check: each 1-D slice of the density integrates to 1 over
    /// the action grid (trapezoid oracle). The joint factorizes across the
    /// two dimensions, so the slice divided by the other dimension's
    /// closed-form density must be a unit-mass 1-D density.
    #[test]
    fn density_integrates_to_one() {
        let d = dist([0.4, -0.2], -0.8);
        let sigma = d.log_std.exp();
        // Independent closed-form 1-D density of one squashed dimension:
        // N(atanh(t); μ, σ) / (half · (1 − t²)) with t = (a − center)/half.
        let dim_density = |a: f64, mu: f64, center: f64, half: f64| -> f64 {
            let t = (a - center) / half;
            let u = t.atanh();
            let pdf_u = (-0.5 * ((u - mu) / sigma).powi(2)).exp()
                / (sigma * (2.0 * std::f64::consts::PI).sqrt());
            pdf_u / (half * (1.0 - t * t))
        };
        let trapezoid = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize| -> f64 {
            let h = (hi - lo) / n as f64;
            let mut acc = 0.5 * (f(lo) + f(hi));
            for i in 1..n {
                acc += f(lo + h * i as f64);
            }
            acc * h
        };
        let margin = 1e-6;
        // v slice at fixed ω.
        let w0 = -0.3;
        let pw = dim_density(w0, d.mean[1], 0.0, 1.0);
        let v_int = trapezoid(
            &|v| log_prob(&d, [v, w0]).unwrap().exp() / pw,
            margin,
            1.0 - margin,
            20_000,
        );
        assert!((v_int - 1.0).abs() < 1e-3, "v slice mass {v_int}");
        // ω slice at fixed v.
        let v0 = 0.6;
        let pv = dim_density(v0, d.mean[0], 0.5, 0.5);
        let w_int = trapezoid(
            &|w| log_prob(&d, [v0, w]).unwrap().exp() / pv,
            -1.0 + margin,
            1.0 - margin,
            20_000,
        );
        assert!((w_int - 1.0).abs() < 1e-3, "ω slice mass {w_int}");
    }

    #[test]
    fn log_std_is_independent_of_parameters() {
        let arch = PolicyArch {
            beams: 20,
            conv1_ch: 4,
            conv2_ch: 4,
            hidden: 16,
        };
        let net = PolicyNet::new(arch, LogStdMode::Mapped(mapping()), ActionBounds::default());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut p1 = ParameterSet::new();
        net.init(&mut p1, &mut rng).unwrap();
        let mut p2 = ParameterSet::new();
        net.init(&mut p2, &mut rng).unwrap();

        let input = PolicyInput {
            scan: vec![0.5; 20],
            pred: vec![0.5; 20],
            unc: vec![0.3; 20],
            goal: [0.5, 0.1],
            vel: [0.2, 0.0],
        };
        let d1 = net.forward(&p1, &input).unwrap();
        let d2 = net.forward(&p2, &input).unwrap();
        assert_eq!(d1.log_std, d2.log_std, "spread path must not be learned");
        assert_ne!(d1.mean, d2.mean, "mean path is learned");
    }

    #[test]
    fn forward_is_pure_and_logstd_linear_in_uncertainty() {
        let arch = PolicyArch {
            beams: 16,
            conv1_ch: 4,
            conv2_ch: 4,
            hidden: 16,
        };
        let net = PolicyNet::new(arch, LogStdMode::Mapped(mapping()), ActionBounds::default());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut params = ParameterSet::new();
        net.init(&mut params, &mut rng).unwrap();
        let mk = |u: f64| PolicyInput {
            scan: vec![0.4; 16],
            pred: vec![0.4; 16],
            unc: vec![u; 16],
            goal: [0.3, 0.0],
            vel: [0.0, 0.0],
        };
        let a = net.forward(&params, &mk(0.2)).unwrap();
        let b = net.forward(&params, &mk(0.2)).unwrap();
        assert_eq!(a, b, "identical inputs must give identical distributions");

        let c = net.forward(&params, &mk(0.4)).unwrap();
        assert!(c.log_std > a.log_std);
        // Exact linearity in σ̄ₐ: doubling ū doubles (log_std − σ_min).
        let lhs = c.log_std - (-2.0);
        let rhs = 2.0 * (a.log_std - (-2.0));
        assert!((lhs - rhs).abs() < 1e-12);
        // Zero uncertainty → std = e^{σ_min}.
        let z = net.forward(&params, &mk(0.0)).unwrap();
        assert!((z.log_std.exp() - (-2.0f64).exp()).abs() < 1e-15);
    }
}
