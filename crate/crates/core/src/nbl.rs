//! Noise-bit hyperspace.
//!
//! A system of `N` noise-bits owns `2N` independent telegraph references
//! `R[i][j]`. The bit string `b` is represented by the product
//! `H_b(t) = prod_i R[i][b_i](t)`; distinct strings give zero-mean products,
//! so a time-averaged correlator against `H_c` reads out whether `c` is
//! present in a superposition, or its amplitude in a product-form state.
//!
//! Every evaluation is instrumented with an [`OpCount`] that counts the
//! algebraic operations actually performed.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::noise::{derive_seed, telegraph_sign, StreamId, TelegraphStream, DOMAIN_TELEGRAPH, DOMAIN_TRIAL};
use crate::precision::{ExtComplex, Precision};

/// Largest `N` accepted by [`brute_force_state`].
pub const MAX_DENSE_BITS: usize = 20;

/// Membership decision threshold, midway between the exact means 0 and 1.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Width of the reported confidence band, in standard errors.
pub const CONFIDENCE_Z: f64 = 5.0;

/// Scalar multiplications and additions performed by an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OpCount {
    pub mul: u64,
    pub add: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.mul + self.add
    }
}

impl std::ops::AddAssign for OpCount {
    fn add_assign(&mut self, o: Self) {
        self.mul += o.mul;
        self.add += o.add;
    }
}

/// An `N`-bit string; character `i` of the text form is bit `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    /// Bit `i` is bit `i` of `index` (least significant first).
    pub fn from_index(n: usize, index: u64) -> Self {
        Self((0..n).map(|i| index >> i & 1 == 1).collect())
    }

    /// Inverse of [`BitString::from_index`]; requires `len() <= 64`.
    pub fn index(&self) -> u64 {
        debug_assert!(self.0.len() <= 64);
        self.0.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut b = self.clone();
        b.0[i] = !b.0[i];
        b
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidArgument(format!("bit string `{s}` contains `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reference samples of every noise-bit at one time step, `[R_i^0, R_i^1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    refs: Vec<[i8; 2]>,
}

impl Frame {
    /// A frame from explicit reference signs, e.g. for enumerating all assignments.
    pub fn from_refs(refs: Vec<[i8; 2]>) -> Self {
        debug_assert!(refs.iter().flatten().all(|&r| r == 1 || r == -1));
        Self { refs }
    }

    pub fn refs(&self) -> &[[i8; 2]] {
        &self.refs
    }

    /// `H_b` at this step; `N - 1` multiplications.
    pub fn hyperspace(&self, b: &BitString, ops: &mut OpCount) -> i8 {
        let mut it = self.refs.iter().zip(b.bits());
        let first = match it.next() {
            Some((r, &bit)) => r[usize::from(bit)],
            None => return 1,
        };
        it.fold(first, |acc, (r, &bit)| {
            ops.mul += 1;
            acc * r[usize::from(bit)]
        })
    }
}

/// The `2N` reference noises of an `N`-bit system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseBitSystem {
    n: usize,
    master_seed: u64,
    stream_seeds: Vec<[u64; 2]>,
}

impl NoiseBitSystem {
    pub fn new(n: usize, master_seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("a system needs at least one noise-bit".into()));
        }
        let stream_seeds = (0..n)
            .map(|i| [0u8, 1].map(|j| derive_seed(master_seed, DOMAIN_TELEGRAPH, StreamId::new(i, j).key())))
            .collect();
        Ok(Self { n, master_seed, stream_seeds })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream(&self, bit: usize, value: u8) -> TelegraphStream {
        TelegraphStream::new(self.master_seed, StreamId::new(bit, value))
    }

    /// `R[bit][value](t)`.
    #[inline]
    pub fn reference(&self, bit: usize, value: u8, t: u64) -> i8 {
        telegraph_sign(self.stream_seeds[bit][usize::from(value)], t)
    }

    pub fn frame(&self, t: u64) -> Frame {
        let mut f = Frame { refs: vec![[0; 2]; self.n] };
        self.fill_frame(t, &mut f);
        f
    }

    fn fill_frame(&self, t: u64, f: &mut Frame) {
        f.refs.resize(self.n, [0; 2]);
        for (slot, seeds) in f.refs.iter_mut().zip(&self.stream_seeds) {
            *slot = [telegraph_sign(seeds[0], t), telegraph_sign(seeds[1], t)];
        }
    }

    fn check(&self, b: &BitString) -> Result<()> {
        if b.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: b.len() });
        }
        Ok(())
    }
}

/// A non-empty set of distinct bit strings of equal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitSet {
    strings: Vec<BitString>,
}

impl ExplicitSet {
    pub fn new(strings: Vec<BitString>) -> Result<Self> {
        let first = strings
            .first()
            .ok_or_else(|| Error::InvalidArgument("explicit superposition must be non-empty".into()))?;
        let n = first.len();
        if let Some(bad) = strings.iter().find(|s| s.len() != n) {
            return Err(Error::LengthMismatch { expected: n, got: bad.len() });
        }
        let mut sorted = strings.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("explicit superposition has duplicates".into()));
        }
        Ok(Self { strings })
    }

    pub fn n(&self) -> usize {
        self.strings[0].len()
    }

    pub fn strings(&self) -> &[BitString] {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, c: &BitString) -> bool {
        self.strings.contains(c)
    }

    /// Union of two disjoint sets.
    pub fn union(&self, other: &ExplicitSet) -> Result<Self> {
        let mut s = self.strings.clone();
        s.extend_from_slice(&other.strings);
        Self::new(s)
    }
}

/// `prod_i (a_i R_i^0 + b_i R_i^1)` with complex coefficient pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    pairs: Vec<[Complex64; 2]>,
    precision: Precision,
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl ProductState {
    pub fn from_pairs(pairs: Vec<[Complex64; 2]>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidArgument("product state needs at least one bit".into()));
        }
        if pairs.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(Self { pairs, precision: Precision::Auto })
    }

    /// Every bit in logic value 0: `(a_i, b_i) = (1, 0)`.
    pub fn basis_zero(n: usize) -> Self {
        Self { pairs: vec![[ONE, ZERO]; n], precision: Precision::Auto }
    }

    /// `(a_i, b_i)` selecting exactly the string `c`.
    pub fn basis(c: &BitString) -> Self {
        Self {
            pairs: c.bits().iter().map(|&b| if b { [ZERO, ONE] } else { [ONE, ZERO] }).collect(),
            precision: Precision::Auto,
        }
    }

    /// The unnormalized full superposition `(1, 1)` on every bit.
    pub fn full_superposition(n: usize) -> Self {
        Self { pairs: vec![[ONE, ONE]; n], precision: Precision::Auto }
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn uses_extended(&self) -> bool {
        self.precision.is_extended(self.n())
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[[Complex64; 2]] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> [Complex64; 2] {
        self.pairs[i]
    }

    pub(crate) fn pair_mut(&mut self, i: usize) -> Result<&mut [Complex64; 2]> {
        let n = self.n();
        self.pairs.get_mut(i).ok_or(Error::IndexOutOfRange { index: i, n })
    }

    /// Largest `| |a_i|^2 + |b_i|^2 - 1 |` over all bits.
    pub fn normalization_defect(&self) -> f64 {
        self.pairs.iter().map(|[a, b]| (a.norm_sqr() + b.norm_sqr() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Bound on `|S(t)|`: `prod_i (|a_i| + |b_i|)`.
    pub fn value_range(&self) -> f64 {
        self.pairs.iter().map(|[a, b]| (a.norm() + b.norm()).ln()).sum::<f64>().exp()
    }

    /// Factor `a R^0 + b R^1` for one bit, counting the work it takes.
    ///
    /// Multiplying by an exact unit coefficient is a wire, not an operation;
    /// zero coefficients drop their term.
    #[inline]
    fn factor(pair: &[Complex64; 2], r: [i8; 2], ops: &mut OpCount) -> [Option<Complex64>; 2] {
        let mut terms = [None, None];
        for k in 0..2 {
            let c = pair[k];
            if c == ZERO {
                continue;
            }
            let sign = f64::from(r[k]);
            terms[k] = Some(if c == ONE {
                Complex64::new(sign, 0.0)
            } else {
                ops.mul += 1;
                c * sign
            });
        }
        if terms[0].is_some() && terms[1].is_some() {
            ops.add += 1;
        }
        terms
    }

    /// `S(t)` on a sampled frame.
    pub fn evaluate(&self, frame: &Frame, ops: &mut OpCount) -> Complex64 {
        if self.uses_extended() {
            return self.evaluate_extended(frame, ops).to_complex();
        }
        let mut acc: Option<Complex64> = None;
        for (pair, &r) in self.pairs.iter().zip(frame.refs()) {
            let f = match Self::factor(pair, r, ops) {
                [Some(x), Some(y)] => x + y,
                [Some(x), None] | [None, Some(x)] => x,
                [None, None] => ZERO,
            };
            acc = Some(match acc {
                None => f,
                Some(v) => {
                    ops.mul += 1;
                    v * f
                }
            });
        }
        acc.unwrap_or(ONE)
    }

    /// As [`ProductState::evaluate`], with double-double factors and a free exponent.
    pub fn evaluate_extended(&self, frame: &Frame, ops: &mut OpCount) -> ExtComplex {
        let mut acc: Option<ExtComplex> = None;
        for (pair, &r) in self.pairs.iter().zip(frame.refs()) {
            let f = match Self::factor(pair, r, ops) {
                [Some(x), Some(y)] => ExtComplex::from_complex(x) + ExtComplex::from_complex(y),
                [Some(x), None] | [None, Some(x)] => ExtComplex::from_complex(x),
                [None, None] => ExtComplex::ZERO,
            };
            acc = Some(match acc {
                None => f,
                Some(v) => {
                    ops.mul += 1;
                    v * f
                }
            });
        }
        acc.unwrap_or(ExtComplex::ONE)
    }

    /// Represented amplitude of `c` in extended arithmetic; `N` multiplications
    /// (a running product seeded with 1).
    pub fn amplitude_ext(&self, c: &BitString, ops: &mut OpCount) -> Result<ExtComplex> {
        self.check(c)?;
        Ok(self.pairs.iter().zip(c.bits()).fold(ExtComplex::ONE, |acc, (p, &bit)| {
            ops.mul += 1;
            acc * ExtComplex::from_complex(p[usize::from(bit)])
        }))
    }

    /// Represented amplitude of `c`; `N` multiplications.
    pub fn amplitude(&self, c: &BitString, ops: &mut OpCount) -> Result<Complex64> {
        if self.uses_extended() {
            return self.amplitude_ext(c, ops).map(ExtComplex::to_complex);
        }
        self.check(c)?;
        Ok(self.pairs.iter().zip(c.bits()).fold(ONE, |acc, (p, &bit)| {
            ops.mul += 1;
            acc * p[usize::from(bit)]
        }))
    }

    fn check(&self, c: &BitString) -> Result<()> {
        if c.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), got: c.len() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SuperpositionState {
    Explicit(ExplicitSet),
    ProductForm(ProductState),
}

impl SuperpositionState {
    pub fn n(&self) -> usize {
        match self {
            SuperpositionState::Explicit(s) => s.n(),
            SuperpositionState::ProductForm(p) => p.n(),
        }
    }

    /// `S(t)` on a sampled frame.
    pub fn evaluate(&self, frame: &Frame, ops: &mut OpCount) -> Complex64 {
        match self {
            SuperpositionState::Explicit(set) => {
                let mut sum: Option<i64> = None;
                for b in set.strings() {
                    let h = i64::from(frame.hyperspace(b, ops));
                    sum = Some(match sum {
                        None => h,
                        Some(s) => {
                            ops.add += 1;
                            s + h
                        }
                    });
                }
                Complex64::new(sum.unwrap_or(0) as f64, 0.0)
            }
            SuperpositionState::ProductForm(p) => p.evaluate(frame, ops),
        }
    }

    /// Bound on `|S(t) H_c(t)|`.
    pub fn value_range(&self) -> f64 {
        match self {
            SuperpositionState::Explicit(s) => s.len() as f64,
            SuperpositionState::ProductForm(p) => p.value_range(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: Complex64,
    pub ops: OpCount,
}

/// `H_b(t)` with its operation count.
pub fn hyperspace_value(system: &NoiseBitSystem, b: &BitString, t: u64) -> Result<(i8, OpCount)> {
    system.check(b)?;
    let mut ops = OpCount::default();
    let v = system.frame(t).hyperspace(b, &mut ops);
    Ok((v, ops))
}

/// `S(t)` for `state` with its operation count.
pub fn superposition_value(
    system: &NoiseBitSystem,
    state: &SuperpositionState,
    t: u64,
) -> Result<Evaluation> {
    if state.n() != system.n() {
        return Err(Error::LengthMismatch { expected: system.n(), got: state.n() });
    }
    let mut ops = OpCount::default();
    let value = state.evaluate(&system.frame(t), &mut ops);
    Ok(Evaluation { value, ops })
}

/// Time-averaged correlator `C = (1/M) sum_t S(t) H_c(t)` and its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorEstimate {
    pub value: Complex64,
    pub steps: u64,
    pub threshold: f64,
    /// `Re C > threshold`.
    pub decision: bool,
    /// Empirical standard deviation of the per-step products over `sqrt(M)`.
    pub std_error: f64,
    /// [`CONFIDENCE_Z`] standard errors.
    pub half_width: f64,
    /// Per-step products lie in `[-range, range]`.
    pub range: f64,
    /// Hoeffding bound `exp(-M theta^2 / (2 range^2))` on a wrong decision,
    /// `theta` being the distance from the threshold to the nearer exact mean.
    pub bound: f64,
}

impl CorrelatorEstimate {
    fn from_products(products: &[Complex64], threshold: f64, range: f64) -> Self {
        let m = products.len();
        let mean = pairwise_sum(products) / m as f64;
        let dev: Vec<Complex64> =
            products.iter().map(|v| Complex64::new((v - mean).norm_sqr(), 0.0)).collect();
        let var = pairwise_sum(&dev).re / m as f64;
        let std_error = (var / m as f64).sqrt();
        let theta = threshold.min(1.0 - threshold).max(0.0);
        let bound = if range > 0.0 && range.is_finite() {
            (-(m as f64) * theta * theta / (2.0 * range * range)).exp().min(1.0)
        } else {
            1.0
        };
        Self {
            value: mean,
            steps: m as u64,
            threshold,
            decision: mean.re > threshold,
            std_error,
            half_width: CONFIDENCE_Z * std_error,
            range,
            bound,
        }
    }
}

/// Fixed-order pairwise sum, independent of how the inputs were produced.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    const BLOCK: usize = 16;
    if xs.len() <= BLOCK {
        return xs.iter().fold(ZERO, |a, b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Per-step products at `t = 1..=steps`; parallel over `t`, order-preserving.
fn correlator_products(
    system: &NoiseBitSystem,
    state: &SuperpositionState,
    probe: &BitString,
    steps: u64,
) -> Vec<Complex64> {
    const PAR_MIN: u64 = 4096;
    let eval = |frame: &mut Frame, t: u64| {
        system.fill_frame(t, frame);
        let mut ops = OpCount::default();
        let s = state.evaluate(frame, &mut ops);
        s * f64::from(frame.hyperspace(probe, &mut ops))
    };
    let empty = || Frame { refs: Vec::new() };
    if steps < PAR_MIN {
        let mut f = empty();
        (1..=steps).map(|t| eval(&mut f, t)).collect()
    } else {
        (1..=steps).into_par_iter().map_init(empty, |f, t| eval(f, t)).collect()
    }
}

fn check_readout(
    system: &NoiseBitSystem,
    state: &SuperpositionState,
    c: &BitString,
    steps: u64,
) -> Result<()> {
    if steps == 0 {
        return Err(Error::InvalidArgument("observation length M must be >= 1".into()));
    }
    if state.n() != system.n() {
        return Err(Error::LengthMismatch { expected: system.n(), got: state.n() });
    }
    system.check(c)
}

/// Membership readout of `c` with the default threshold.
pub fn measure_membership(
    system: &NoiseBitSystem,
    state: &SuperpositionState,
    c: &BitString,
    steps: u64,
) -> Result<CorrelatorEstimate> {
    measure_membership_with(system, state, c, steps, DEFAULT_THRESHOLD)
}

pub fn measure_membership_with(
    system: &NoiseBitSystem,
    state: &SuperpositionState,
    c: &BitString,
    steps: u64,
    threshold: f64,
) -> Result<CorrelatorEstimate> {
    check_readout(system, state, c, steps)?;
    let products = correlator_products(system, state, c, steps);
    Ok(CorrelatorEstimate::from_products(&products, threshold, state.value_range()))
}

/// Exact represented amplitude of `c`.
pub fn amplitude_exact(state: &SuperpositionState, c: &BitString) -> Result<Complex64> {
    match state {
        SuperpositionState::ProductForm(p) => p.amplitude(c, &mut OpCount::default()),
        SuperpositionState::Explicit(_) => Err(Error::NotProductForm),
    }
}

/// Correlator estimate of the amplitude of `c`; `E[C]` equals [`amplitude_exact`].
pub fn amplitude_estimate(
    system: &NoiseBitSystem,
    state: &ProductState,
    c: &BitString,
    steps: u64,
) -> Result<CorrelatorEstimate> {
    let wrapped = SuperpositionState::ProductForm(state.clone());
    check_readout(system, &wrapped, c, steps)?;
    let products = correlator_products(system, &wrapped, c, steps);
    Ok(CorrelatorEstimate::from_products(&products, DEFAULT_THRESHOLD, state.value_range()))
}

/// Master seed of trial `k` in a repeated experiment.
pub fn trial_seed(base_seed: u64, trial: u64) -> u64 {
    derive_seed(base_seed, DOMAIN_TRIAL, trial)
}

/// Counts wrong membership decisions over `trials` independent systems.
pub fn membership_errors(
    set: &ExplicitSet,
    probe: &BitString,
    steps: u64,
    trials: u64,
    base_seed: u64,
) -> Result<u64> {
    let n = set.n();
    let truth = set.contains(probe);
    let state = SuperpositionState::Explicit(set.clone());
    (0..trials)
        .into_par_iter()
        .map(|k| {
            let system = NoiseBitSystem::new(n, trial_seed(base_seed, k))?;
            let est = measure_membership(&system, &state, probe, steps)?;
            Ok(u64::from(est.decision != truth))
        })
        .sum::<Result<u64>>()
}

/// Dense `2^N` amplitudes after a gate sequence from `|00...0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub n: usize,
    pub amplitudes: Vec<Complex64>,
    pub ops: OpCount,
}

impl DenseState {
    pub fn amplitude(&self, c: &BitString) -> Complex64 {
        self.amplitudes[c.index() as usize]
    }
}

/// State-vector oracle: applies each gate to every amplitude pair.
pub fn brute_force_state(n: usize, gates: &[GateOp]) -> Result<DenseState> {
    if n > MAX_DENSE_BITS {
        return Err(Error::TooManyBits { max: MAX_DENSE_BITS, requested: n });
    }
    let mut amplitudes = vec![ZERO; 1 << n];
    amplitudes[0] = ONE;
    let mut ops = OpCount::default();
    for op in gates {
        if op.bit >= n {
            return Err(Error::IndexOutOfRange { index: op.bit, n });
        }
        let g = &op.gate.m;
        let stride = 1usize << op.bit;
        for lo in 0..amplitudes.len() {
            if lo & stride != 0 {
                continue;
            }
            let hi = lo | stride;
            let (a, b) = (amplitudes[lo], amplitudes[hi]);
            amplitudes[lo] = g[0][0] * a + g[0][1] * b;
            amplitudes[hi] = g[1][0] * a + g[1][1] * b;
            ops.mul += 4;
            ops.add += 2;
        }
    }
    Ok(DenseState { n, amplitudes, ops })
}
