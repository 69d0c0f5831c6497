use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Circuit;
use crate::rm_transform::{Basis, CoefficientVector};

/// How a multi-controlled X with `m` controls is decomposed and priced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CostModel {
    /// Ancilla-free decomposition, `3·2^m − 4`.
    #[serde(rename = "plain")]
    McnotPlain,
    /// Two reset-and-reused ancillas, `19m − 32`.
    #[serde(rename = "reset")]
    McnotReset,
}

impl CostModel {
    pub const ALL: [CostModel; 2] = [CostModel::McnotPlain, CostModel::McnotReset];

    pub fn name(self) -> &'static str {
        match self {
            CostModel::McnotPlain => "plain",
            CostModel::McnotReset => "reset",
        }
    }
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CostModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(CostModel::McnotPlain),
            "reset" => Ok(CostModel::McnotReset),
            other => Err(format!(
                "unknown cost model {other:?} (expected plain or reset)"
            )),
        }
    }
}

/// Quantum cost of one X gate with `controls` control qubits.
///
/// Zero controls (bare X) and one control (CNOT) both cost 1. From two
/// controls up the model's closed form applies; at `m = 2` the reset model
/// gives 6.
pub fn qc_gate(controls: u32, model: CostModel) -> u64 {
    let m = u64::from(controls);
    match (controls, model) {
        (0 | 1, _) => 1,
        (_, CostModel::McnotPlain) => 3 * (1u64 << m) - 4,
        (_, CostModel::McnotReset) => 19 * m - 32,
    }
}

/// Sum of gate costs. With `polarity_x` set, each negative control also
/// costs two X gates (one on each side of the controlled gate).
pub fn circuit_cost(c: &Circuit, model: CostModel, polarity_x: bool) -> u128 {
    c.iter()
        .map(|(_, t)| {
            let mut cost = u128::from(qc_gate(t.controls(), model));
            if polarity_x {
                cost += 2 * u128::from(t.negative.count_ones());
            }
            cost
        })
        .sum()
}

/// Cost of the gates a coefficient vector synthesizes to, without building
/// them: a minterm vector prices every set bit as a full `m`-control gate, a
/// PPRM vector prices bit `j` with `popcount(j)` controls. Agrees with
/// [`circuit_cost`] on the matching synthesized circuit.
pub fn coefficient_cost(v: &CoefficientVector, model: CostModel, polarity_x: bool) -> u128 {
    let vars = v.vars();
    let mut by_weight = vec![0u64; vars as usize + 1];
    for (wi, &word) in v.words().iter().enumerate() {
        if word == 0 {
            continue;
        }
        let base = (wi as u64 * 64).count_ones() as usize;
        let mut rest = word;
        while rest != 0 {
            by_weight[base + rest.trailing_zeros().count_ones() as usize] += 1;
            rest &= rest - 1;
        }
    }
    match v.basis() {
        Basis::Minterm => {
            let gates: u64 = by_weight.iter().sum();
            let mut cost = u128::from(gates) * u128::from(qc_gate(vars, model));
            if polarity_x {
                let negatives: u128 = by_weight
                    .iter()
                    .enumerate()
                    .map(|(w, &cnt)| u128::from(cnt) * u128::from(vars - w as u32))
                    .sum();
                cost += 2 * negatives;
            }
            cost
        }
        Basis::Pprm => by_weight
            .iter()
            .enumerate()
            .map(|(w, &cnt)| u128::from(cnt) * u128::from(qc_gate(w as u32, model)))
            .sum(),
    }
}
