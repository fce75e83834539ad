//! Seeded stochastic primitives: random telegraph reference waves, a
//! discrete-time Ornstein-Uhlenbeck stand-in for Johnson noise, and the
//! thermodynamic dissipation bound.
//!
//! Every random quantity in the crate flows from [`mix64`] applied to a
//! master seed, so a run is a pure function of its seed. The exact
//! derivations are written out in `docs/FORMATS.md`.

use crate::error::{Error, Result};

/// Weyl increment of SplitMix64 (odd, golden-ratio derived).
pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Boltzmann constant, J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Seed domain for telegraph reference streams.
pub const DOMAIN_TELEGRAPH: u64 = 0x5254_5700_0000_0001;
/// Seed domain for Gaussian noise generators in the bit pipeline.
pub const DOMAIN_GENERATOR: u64 = 0x4F55_4E00_0000_0002;
/// Seed domain for per-trial master seeds in repeated experiments.
pub const DOMAIN_TRIAL: u64 = 0x5452_4C00_0000_0003;

/// SplitMix64 output finalizer (Stafford variant 13).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent child seed for `(domain, index)` under `master`.
///
/// Output `index` of a SplitMix64 generator seeded with `mix64(master ^ domain)`,
/// i.e. `mix64(mix64(master ^ domain) + (index + 1) * GAMMA)` in wrapping arithmetic.
#[inline]
pub fn derive_seed(master: u64, domain: u64, index: u64) -> u64 {
    mix64(mix64(master ^ domain).wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Sequential SplitMix64 generator. Output `k` (0-based) is
/// `mix64(seed + (k + 1) * GAMMA)`, so it can also be addressed randomly.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform on [0, 1) with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Standard Gaussian draws via the Marsaglia polar method.
///
/// Each accepted pair `(v1, v2)` yields `v1 * f` first and caches `v2 * f`
/// for the next call, where `f = sqrt(-2 ln s / s)`.
#[derive(Debug, Clone)]
pub struct GaussianSource {
    gen: SplitMix64,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        Self { gen: SplitMix64::new(seed), spare: None }
    }

    #[inline]
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let v1 = 2.0 * self.gen.next_f64() - 1.0;
            let v2 = 2.0 * self.gen.next_f64() - 1.0;
            let s = v1 * v1 + v2 * v2;
            if s >= 1.0 || s == 0.0 {
                continue;
            }
            let f = (-2.0 * s.ln() / s).sqrt();
            self.spare = Some(v2 * f);
            return v1 * f;
        }
    }
}

/// Identity of one reference noise: noise-bit `bit`, logic value `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamId {
    pub bit: usize,
    pub value: u8,
}

impl StreamId {
    pub fn new(bit: usize, value: u8) -> Self {
        debug_assert!(value < 2);
        Self { bit, value }
    }

    /// Dense key `2 * bit + value` fed to [`derive_seed`].
    pub fn key(self) -> u64 {
        2 * self.bit as u64 + u64::from(self.value)
    }
}

/// A random telegraph wave: i.i.d. equiprobable ±1 per time step.
///
/// Sampling is random-access, so any step can be evaluated independently
/// of the others and in any order.
#[derive(Debug, Clone)]
pub struct TelegraphStream {
    master_seed: u64,
    id: StreamId,
    seed: u64,
    position: u64,
}

impl TelegraphStream {
    pub fn new(master_seed: u64, id: StreamId) -> Self {
        Self { master_seed, id, seed: derive_seed(master_seed, DOMAIN_TELEGRAPH, id.key()), position: 0 }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn id(&self) -> StreamId {
        self.id
    }

    pub fn position(&self) -> u64 {
        self.position
    }

    /// Sample at step `t`; the sign is the top bit of SplitMix64 output `t`.
    #[inline]
    pub fn sample(&self, t: u64) -> i8 {
        telegraph_sign(self.seed, t)
    }
}

impl Iterator for TelegraphStream {
    type Item = i8;

    fn next(&mut self) -> Option<i8> {
        let v = self.sample(self.position);
        self.position += 1;
        Some(v)
    }
}

#[inline]
pub(crate) fn telegraph_sign(stream_seed: u64, t: u64) -> i8 {
    let word = mix64(stream_seed.wrapping_add(t.wrapping_add(1).wrapping_mul(GAMMA)));
    if word >> 63 == 1 {
        1
    } else {
        -1
    }
}

/// Free-function form of [`TelegraphStream::sample`].
pub fn rtw_sample(stream: &TelegraphStream, t: u64) -> i8 {
    stream.sample(t)
}

/// Parameters of the stationary Gaussian process `x' = rho x + sigma sqrt(1 - rho^2) xi`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OuConfig {
    pub rho: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl OuConfig {
    pub fn new(rho: f64, sigma: f64, seed: u64) -> Result<Self> {
        let cfg = Self { rho, sigma, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho >= 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidOu(format!("rho = {} not in [0, 1)", self.rho)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidOu(format!("sigma = {} must be > 0", self.sigma)));
        }
        Ok(())
    }

    /// Scale of the innovation term, `sigma * sqrt(1 - rho^2)`.
    pub fn innovation_scale(&self) -> f64 {
        self.sigma * (1.0 - self.rho * self.rho).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuState {
    pub x: f64,
    pub t: u64,
}

/// One step of the recurrence given the standard Gaussian innovation `xi`.
#[inline]
pub fn ou_step(state: OuState, cfg: &OuConfig, xi: f64) -> OuState {
    OuState { x: cfg.rho * state.x + cfg.innovation_scale() * xi, t: state.t + 1 }
}

/// A running OU process owning its Gaussian source.
#[derive(Debug, Clone)]
pub struct OuProcess {
    cfg: OuConfig,
    scale: f64,
    state: OuState,
    noise: GaussianSource,
}

impl OuProcess {
    /// Starts in the stationary distribution: `x0 ~ N(0, sigma^2)`.
    pub fn new(cfg: OuConfig) -> Result<Self> {
        cfg.validate()?;
        let mut noise = GaussianSource::new(cfg.seed);
        let x0 = cfg.sigma * noise.next_gaussian();
        Ok(Self { cfg, scale: cfg.innovation_scale(), state: OuState { x: x0, t: 0 }, noise })
    }

    pub fn config(&self) -> &OuConfig {
        &self.cfg
    }

    pub fn state(&self) -> OuState {
        self.state
    }

    /// Current amplitude without advancing.
    pub fn current(&self) -> f64 {
        self.state.x
    }

    #[inline]
    pub fn step(&mut self) -> f64 {
        let xi = self.noise.next_gaussian();
        self.state = OuState { x: self.cfg.rho * self.state.x + self.scale * xi, t: self.state.t + 1 };
        self.state.x
    }

    /// The initial sample followed by `n - 1` steps.
    pub fn take_samples(&mut self, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        if n == 0 {
            return out;
        }
        out.push(self.state.x);
        for _ in 1..n {
            out.push(self.step());
        }
        out
    }
}

/// Minimum energy per bit operation at error probability `epsilon`:
/// `k_B * T * ln(1 / epsilon)`, in joules.
pub fn dissipation_bound(temperature: f64, epsilon: f64) -> Result<f64> {
    if !temperature.is_finite() || temperature < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "temperature {temperature} K must be finite and non-negative"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("error probability {epsilon} not in (0, 1)")));
    }
    Ok(BOLTZMANN * temperature * (1.0 / epsilon).ln())
}
