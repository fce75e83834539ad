//! Counted-operation scaling: product-form evaluation and gates against the
//! dense state-vector baseline.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{apply_gate, Gate2x2, GateOp};
use crate::nbl::{
    brute_force_state, BitString, ExplicitSet, NoiseBitSystem, OpCount, ProductState, SuperpositionState,
};

/// Largest `N` for which the brute-force columns are computed.
pub const BRUTE_FORCE_MAX_BITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub product_ops_per_step: u64,
    pub gate_ops: u64,
    /// Explicit sum over all `2^N` strings, one step.
    pub bruteforce_eval_ops: Option<u64>,
    /// One gate on the dense `2^N` state vector.
    pub bruteforce_gate_ops: Option<u64>,
    pub wall_time_ns: u128,
}

pub const CSV_HEADER: &str =
    "n,product_ops_per_step,gate_ops,bruteforce_eval_ops,bruteforce_gate_ops,wall_time_ns";

impl ScalingRow {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{}",
            self.n,
            self.product_ops_per_step,
            self.gate_ops,
            opt(self.bruteforce_eval_ops),
            opt(self.bruteforce_gate_ops),
            self.wall_time_ns
        )
    }
}

/// `1..=16`, then doubling from 32, then `max_n` itself.
pub fn sweep_sizes(max_n: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = (1..=max_n.min(BRUTE_FORCE_MAX_BITS)).collect();
    let mut n = 2 * BRUTE_FORCE_MAX_BITS;
    while n < max_n {
        sizes.push(n);
        n *= 2;
    }
    if max_n > BRUTE_FORCE_MAX_BITS {
        sizes.push(max_n);
    }
    sizes
}

/// Measures one row; the full superposition is evaluated for `steps` steps.
pub fn scaling_row(n: usize, steps: u64, seed: u64) -> Result<ScalingRow> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    let system = NoiseBitSystem::new(n, seed)?;
    let state = SuperpositionState::ProductForm(ProductState::full_superposition(n));

    let start = Instant::now();
    let mut per_step: Option<u64> = None;
    for t in 0..steps {
        let mut ops = OpCount::default();
        std::hint::black_box(state.evaluate(&system.frame(t), &mut ops));
        match per_step {
            None => per_step = Some(ops.total()),
            Some(p) if p != ops.total() => {
                return Err(Error::InvalidArgument(format!(
                    "per-step op count varies at N = {n}: {p} vs {}",
                    ops.total()
                )))
            }
            _ => {}
        }
    }
    let wall_time_ns = start.elapsed().as_nanos();

    let mut basis = ProductState::basis_zero(n);
    let gate_ops = apply_gate(&mut basis, 0, &Gate2x2::h())?.total();

    let (bf_eval, bf_gate) = if n <= BRUTE_FORCE_MAX_BITS {
        let all = ExplicitSet::new((0..1u64 << n).map(|i| BitString::from_index(n, i)).collect())?;
        let mut ops = OpCount::default();
        SuperpositionState::Explicit(all).evaluate(&system.frame(0), &mut ops);
        let dense = brute_force_state(n, &[GateOp::new(Gate2x2::h(), 0)])?;
        (Some(ops.total()), Some(dense.ops.total()))
    } else {
        (None, None)
    };

    Ok(ScalingRow {
        n,
        product_ops_per_step: per_step.unwrap_or(0),
        gate_ops,
        bruteforce_eval_ops: bf_eval,
        bruteforce_gate_ops: bf_gate,
        wall_time_ns,
    })
}

pub fn scaling_table(max_n: usize, steps: u64, seed: u64) -> Result<Vec<ScalingRow>> {
    if max_n == 0 {
        return Err(Error::InvalidArgument("max N must be >= 1".into()));
    }
    sweep_sizes(max_n).into_iter().map(|n| scaling_row(n, steps, seed)).collect()
}

/// Counted cost of one gate plus one amplitude query, both ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedupPoint {
    pub n: usize,
    pub product_ops: u64,
    pub brute_force_ops: u64,
}

impl SpeedupPoint {
    pub fn ratio(&self) -> f64 {
        self.brute_force_ops as f64 / self.product_ops as f64
    }
}

pub fn speedup_point(n: usize) -> Result<SpeedupPoint> {
    let h = Gate2x2::h();
    let probe = BitString::zeros(n);

    let mut state = ProductState::basis_zero(n);
    let mut product = apply_gate(&mut state, 0, &h)?;
    state.amplitude(&probe, &mut product)?;

    // Reading an entry of the dense vector is free.
    let dense = brute_force_state(n, &[GateOp::new(h, 0)])?;
    Ok(SpeedupPoint { n, product_ops: product.total(), brute_force_ops: dense.ops.total() })
}

/// Least-squares slope of `ln(ratio)` against `N`.
pub fn log_ratio_slope(points: &[SpeedupPoint]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.ratio().ln()).collect();
    least_squares_slope(&xs, &ys)
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
