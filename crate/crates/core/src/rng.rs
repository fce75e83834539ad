//! Random bits from Gaussian noise: the sign of the amplitude XOR the sign
//! of the velocity, decimated, then XOR-combined across generators.
//!
//! Velocity is the central difference `x[t+1] - x[t-1]`. For any stationary
//! process its covariance with `x[t]` is `c(1) - c(1) = 0`, and for a
//! Gaussian process zero covariance means the two sign bits are independent.
//! The forward difference would not have that property.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{derive_seed, OuConfig, OuProcess, DOMAIN_GENERATOR};

/// Which of the two signs was exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroEvent {
    Amplitude,
    Velocity,
}

/// `(amplitude_bit, velocity_bit)` for the triple around `curr`.
#[inline]
pub fn extract_signs(prev: f64, curr: f64, next: f64) -> std::result::Result<(bool, bool), ZeroEvent> {
    if curr == 0.0 {
        return Err(ZeroEvent::Amplitude);
    }
    let velocity = next - prev;
    if velocity == 0.0 {
        return Err(ZeroEvent::Velocity);
    }
    Ok((curr > 0.0, velocity > 0.0))
}

#[inline]
pub fn extract_bit(prev: f64, curr: f64, next: f64) -> std::result::Result<bool, ZeroEvent> {
    extract_signs(prev, curr, next).map(|(a, v)| a ^ v)
}

/// Roughly five correlation times between emitted bits: `ceil(5 / (1 - rho))`.
///
/// The quotient is nudged down by 1e-9 first so that `rho = 0.9`, whose
/// floating-point quotient is `50.000000000000014`, gives 50.
pub fn default_decimation(rho: f64) -> usize {
    (5.0 / (1.0 - rho) - 1e-9).ceil().max(1.0) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroPolicy {
    /// Drop the event and move on to the next candidate position.
    #[default]
    Skip,
    /// Abort generation.
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractorConfig {
    pub ou: OuConfig,
    pub decimation: usize,
    pub zero_policy: ZeroPolicy,
}

impl ExtractorConfig {
    pub fn new(ou: OuConfig, decimation: usize) -> Result<Self> {
        let cfg = Self { ou, decimation, zero_policy: ZeroPolicy::Skip };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Uses [`default_decimation`] for the configured `rho`.
    pub fn with_default_decimation(ou: OuConfig) -> Result<Self> {
        Self::new(ou, default_decimation(ou.rho))
    }

    pub fn validate(&self) -> Result<()> {
        self.ou.validate()?;
        if self.decimation == 0 {
            return Err(Error::InvalidArgument("decimation must be >= 1".into()));
        }
        Ok(())
    }
}

/// Walks an OU process and yields sign pairs every `decimation` steps.
///
/// Candidate positions are `t = 1, 1 + d, 1 + 2d, ...`; zero events are
/// counted and, under [`ZeroPolicy::Skip`], passed over.
#[derive(Debug, Clone)]
pub struct SignExtractor {
    process: OuProcess,
    window: [f64; 3],
    decimation: usize,
    policy: ZeroPolicy,
    zero_events: u64,
    started: bool,
}

impl SignExtractor {
    pub fn new(cfg: &ExtractorConfig) -> Result<Self> {
        cfg.validate()?;
        let mut process = OuProcess::new(cfg.ou)?;
        let x0 = process.current();
        let x1 = process.step();
        let x2 = process.step();
        Ok(Self {
            process,
            window: [x0, x1, x2],
            decimation: cfg.decimation,
            policy: cfg.zero_policy,
            zero_events: 0,
            started: false,
        })
    }

    pub fn zero_events(&self) -> u64 {
        self.zero_events
    }

    fn advance(&mut self) {
        for _ in 0..self.decimation {
            let next = self.process.step();
            self.window = [self.window[1], self.window[2], next];
        }
    }

    /// Next `(amplitude_bit, velocity_bit)` pair.
    pub fn next_signs(&mut self) -> Result<(bool, bool)> {
        loop {
            if self.started {
                self.advance();
            }
            self.started = true;
            let [p, c, n] = self.window;
            match extract_signs(p, c, n) {
                Ok(pair) => return Ok(pair),
                Err(ev) => {
                    self.zero_events += 1;
                    if self.policy == ZeroPolicy::Fail {
                        return Err(Error::InvalidArgument(format!(
                            "zero {ev:?} event at step {}",
                            self.process.state().t
                        )));
                    }
                }
            }
        }
    }

    pub fn next_bit(&mut self) -> Result<bool> {
        self.next_signs().map(|(a, v)| a ^ v)
    }
}

/// Where a bit stream came from; enough to regenerate it exactly.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub generators: Vec<ExtractorConfig>,
    pub zero_events: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BitStream {
    pub bits: Vec<bool>,
    pub provenance: Provenance,
}

impl BitStream {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits, provenance: Provenance::default() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Runs one extractor for `n` output bits.
pub fn generate(cfg: &ExtractorConfig, n: usize) -> Result<BitStream> {
    let mut ex = SignExtractor::new(cfg)?;
    let bits = (0..n).map(|_| ex.next_bit()).collect::<Result<Vec<_>>>()?;
    Ok(BitStream {
        bits,
        provenance: Provenance { generators: vec![*cfg], zero_events: vec![ex.zero_events()] },
    })
}

/// Bitwise XOR of equal-length streams; provenance lists are concatenated.
pub fn xor_combine(streams: &[BitStream]) -> Result<BitStream> {
    let first = streams
        .first()
        .ok_or_else(|| Error::InvalidArgument("xor_combine needs at least one stream".into()))?;
    let n = first.len();
    if let Some(bad) = streams.iter().find(|s| s.len() != n) {
        return Err(Error::LengthMismatch { expected: n, got: bad.len() });
    }
    let mut out = first.clone();
    for s in &streams[1..] {
        for (o, &b) in out.bits.iter_mut().zip(&s.bits) {
            *o ^= b;
        }
        out.provenance.generators.extend_from_slice(&s.provenance.generators);
        out.provenance.zero_events.extend_from_slice(&s.provenance.zero_events);
    }
    Ok(out)
}

/// Parameters of a `k`-generator combined pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub generators: usize,
    pub rho: f64,
    pub sigma: f64,
    /// `None` selects [`default_decimation`].
    pub decimation: Option<usize>,
    pub master_seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { generators: 4, rho: 0.9, sigma: 1.0, decimation: None, master_seed: 0 }
    }
}

impl PipelineConfig {
    /// Generator `g` is seeded with `derive_seed(master_seed, DOMAIN_GENERATOR, g)`.
    pub fn extractor_configs(&self) -> Result<Vec<ExtractorConfig>> {
        if self.generators == 0 {
            return Err(Error::InvalidArgument("need at least one generator".into()));
        }
        let d = self.decimation.unwrap_or_else(|| default_decimation(self.rho));
        (0..self.generators as u64)
            .map(|g| {
                let ou =
                    OuConfig::new(self.rho, self.sigma, derive_seed(self.master_seed, DOMAIN_GENERATOR, g))?;
                ExtractorConfig::new(ou, d)
            })
            .collect()
    }

    /// Runs every generator (in parallel) and XOR-combines the outputs.
    pub fn run(&self, n: usize) -> Result<BitStream> {
        let cfgs = self.extractor_configs()?;
        let streams = cfgs.par_iter().map(|c| generate(c, n)).collect::<Result<Vec<_>>>()?;
        xor_combine(&streams)
    }
}

/// Packs bits into bytes, first bit in the least significant position of byte 0.
pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| chunk.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << i)))
        .collect()
}

/// Inverse of [`pack_bits`]; `n` defaults to every bit in `bytes`.
pub fn unpack_bits(bytes: &[u8], n: Option<usize>) -> Result<Vec<bool>> {
    let avail = bytes.len() * 8;
    let n = n.unwrap_or(avail);
    if n > avail {
        return Err(Error::TooShort { required: n, got: avail });
    }
    Ok((0..n).map(|i| bytes[i / 8] >> (i % 8) & 1 == 1).collect())
}

/// JSON sidecar written next to a packed bit file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitstreamMeta {
    pub format: String,
    pub version: String,
    pub bit_order: String,
    pub n: usize,
    pub generators: usize,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    pub ou: OuParams,
    pub decimation: usize,
    pub zero_events: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuParams {
    pub rho: f64,
    pub sigma: f64,
}

pub const BITSTREAM_FORMAT: &str = "noisebit-bits";

impl BitstreamMeta {
    pub fn new(cfg: &PipelineConfig, stream: &BitStream) -> Self {
        let gens = &stream.provenance.generators;
        Self {
            format: BITSTREAM_FORMAT.into(),
            version: crate::VERSION.into(),
            bit_order: "lsb-first".into(),
            n: stream.len(),
            generators: cfg.generators,
            master_seed: cfg.master_seed,
            seeds: gens.iter().map(|g| g.ou.seed).collect(),
            ou: OuParams { rho: cfg.rho, sigma: cfg.sigma },
            decimation: gens
                .first()
                .map(|g| g.decimation)
                .unwrap_or_else(|| cfg.decimation.unwrap_or_else(|| default_decimation(cfg.rho))),
            zero_events: stream.provenance.zero_events.clone(),
        }
    }
}
