use serde::{Deserialize, Serialize};

use crate::numerics::state::{fidelity_matrices, trace_distance_matrices};
use crate::numerics::CMatrix;

/// Loss between a target state and a protocol output, valued in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    Infidelity,
    TraceDistance,
    /// `2 (1 - sqrt F)`, rescaled by 1/2 to stay in `[0, 1]`.
    SquaredBures,
    /// Identically zero; useful as a control.
    Zero,
}

impl Loss {
    pub fn eval(&self, target: &CMatrix, output: &CMatrix) -> f64 {
        match self {
            Loss::Infidelity => 1.0 - fidelity_matrices(target, output),
            Loss::TraceDistance => trace_distance_matrices(target, output),
            Loss::SquaredBures => 1.0 - fidelity_matrices(target, output).sqrt(),
            Loss::Zero => 0.0,
        }
    }

    /// Constant `L0` with `|risk(S) - risk(T)| <= L0 ||J_S - J_T||_1` for
    /// unnormalised Choi matrices, when known.
    pub fn lipschitz(&self) -> Option<f64> {
        match self {
            Loss::TraceDistance => Some(1.0),
            Loss::Zero => Some(0.0),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Loss::Infidelity => "infidelity",
            Loss::TraceDistance => "trace_distance",
            Loss::SquaredBures => "squared_bures",
            Loss::Zero => "zero",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::seeded_rng;
    use crate::numerics::{haar_pure_state, DensityOperator};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn losses_vanish_on_equal_states_and_stay_in_range(seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let a = haar_pure_state(3, &mut rng);
            let b = a.mix(&DensityOperator::maximally_mixed(3), 0.4).unwrap();
            for loss in [Loss::Infidelity, Loss::TraceDistance, Loss::SquaredBures, Loss::Zero] {
                prop_assert!(loss.eval(a.matrix(), a.matrix()).abs() < 1e-9);
                let v = loss.eval(a.matrix(), b.matrix());
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
    }
}
