//! Single-bit gates on product-form states.
//!
//! A gate touches only the coefficient pair of its bit, so its cost is the
//! same 4 multiplications and 2 additions whatever the number of bits. The
//! general 2x2 path is used for every gate, including the permutation X.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nbl::{OpCount, ProductState};

/// Tolerance for the unitarity check of a gate tagged unitary.
pub const UNITARY_TOL: f64 = 1e-12;

pub type Matrix2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct Gate2x2 {
    pub name: String,
    pub m: Matrix2,
    pub unitary: bool,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Gate2x2 {
    /// A gate tagged unitary; rejected if `G^dagger G` is not the identity.
    pub fn unitary(name: impl Into<String>, m: Matrix2) -> Result<Self> {
        let g = Self { name: name.into(), m, unitary: true };
        let defect = g.unitarity_defect();
        if defect.is_nan() || defect > UNITARY_TOL {
            return Err(Error::InvalidArgument(format!(
                "gate `{}` is not unitary (defect {defect:e})",
                g.name
            )));
        }
        Ok(g)
    }

    /// Any 2x2 matrix, no unitarity requirement.
    pub fn custom(name: impl Into<String>, m: Matrix2) -> Self {
        Self { name: name.into(), m, unitary: false }
    }

    pub fn x() -> Self {
        Self::fixed("X", [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
    }

    pub fn z() -> Self {
        Self::fixed("Z", [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
    }

    pub fn h() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::fixed("H", [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]])
    }

    pub fn s() -> Self {
        Self::fixed("S", [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]])
    }

    pub fn t() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::fixed("T", [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(s, s)]])
    }

    fn fixed(name: &str, m: Matrix2) -> Self {
        Self { name: name.into(), m, unitary: true }
    }

    /// Looks up a catalog gate by (case-insensitive) name.
    pub fn by_name(name: &str) -> Result<Self> {
        standard_gates()
            .into_iter()
            .find(|g| g.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownGate(name.into()))
    }

    /// Max-entry deviation of `G^dagger G` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().matmul(self);
        let mut worst = 0.0f64;
        for (i, row) in p.m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }

    pub fn adjoint(&self) -> Self {
        let m = self.m;
        Self {
            name: format!("{}^dag", self.name),
            m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]],
            unitary: self.unitary,
        }
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn matmul(&self, rhs: &Self) -> Self {
        let (a, b) = (&self.m, &rhs.m);
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { name: format!("{}*{}", self.name, rhs.name), m, unitary: self.unitary && rhs.unitary }
    }

    /// `(a, b) <- (g00 a + g01 b, g10 a + g11 b)`.
    #[inline]
    pub fn apply_pair(&self, pair: &mut [Complex64; 2], ops: &mut OpCount) {
        let [a, b] = *pair;
        let g = &self.m;
        pair[0] = g[0][0] * a + g[0][1] * b;
        pair[1] = g[1][0] * a + g[1][1] * b;
        ops.mul += 4;
        ops.add += 2;
    }
}

/// X, Z, H, S and T.
pub fn standard_gates() -> Vec<Gate2x2> {
    vec![Gate2x2::x(), Gate2x2::z(), Gate2x2::h(), Gate2x2::s(), Gate2x2::t()]
}

/// Applies `gate` to bit `bit` in place and returns the work done.
pub fn apply_gate(state: &mut ProductState, bit: usize, gate: &Gate2x2) -> Result<OpCount> {
    let mut ops = OpCount::default();
    gate.apply_pair(state.pair_mut(bit)?, &mut ops);
    Ok(ops)
}

/// Counted cost of one application of `gate`; independent of `N`.
pub fn gate_cost(gate: &Gate2x2) -> OpCount {
    let mut ops = OpCount::default();
    let mut scratch = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    gate.apply_pair(&mut scratch, &mut ops);
    ops
}

/// A gate bound to the bit it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub gate: Gate2x2,
    pub bit: usize,
}

impl GateOp {
    pub fn new(gate: Gate2x2, bit: usize) -> Self {
        Self { gate, bit }
    }
}

/// Applies a sequence in order, returning the summed cost.
pub fn apply_sequence(state: &mut ProductState, ops: &[GateOp]) -> Result<OpCount> {
    let mut total = OpCount::default();
    for op in ops {
        total += apply_gate(state, op.bit, &op.gate)?;
    }
    Ok(total)
}

/// One entry of a gate-sequence file: a catalog name or explicit entries.
///
/// `matrix` is row-major `[[g00, g01], [g10, g11]]`, each entry `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[[[f64; 2]; 2]; 2]>,
    pub bit: usize,
}

impl GateSpec {
    pub fn resolve(&self) -> Result<GateOp> {
        let gate = match (&self.gate, &self.matrix) {
            (Some(name), None) => Gate2x2::by_name(name)?,
            (name, Some(m)) => {
                let m = m.map(|row| row.map(|[re, im]| Complex64::new(re, im)));
                Gate2x2::unitary(name.clone().unwrap_or_else(|| "custom".into()), m)?
            }
            (None, None) => return Err(Error::InvalidArgument("gate entry needs `gate` or `matrix`".into())),
        };
        Ok(GateOp::new(gate, self.bit))
    }
}

pub fn resolve_specs(specs: &[GateSpec]) -> Result<Vec<GateOp>> {
    specs.iter().map(GateSpec::resolve).collect()
}
