use crate::config::FockConfig;

/// `(|0, I> + |1, I>) / sqrt(2)` in the space with the ancilla as site 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectedState {
    pub ancilla_empty: FockConfig,
    pub ancilla_filled: FockConfig,
}

impl ProjectedState {
    pub const WEIGHT: f64 = core::f64::consts::FRAC_1_SQRT_2;
}

pub fn project_state(cfg: &FockConfig) -> ProjectedState {
    ProjectedState { ancilla_empty: cfg.prepend(false), ancilla_filled: cfg.prepend(true) }
}

/// Ancilla occupation of the ket in `<0, J| F' |a, I>`, which equals `<J| F |I>`:
/// `a = 1` exactly when `|I|` and `|J|` have opposite parity.
pub fn ancilla_branch(ket: &FockConfig, bra: &FockConfig) -> bool {
    ket.is_odd() != bra.is_odd()
}

/// `(|0, I>` or `|1, I>`, `<0, J|)` for a matrix element of an embedded operator.
pub fn embedded_configs(ket: &FockConfig, bra: &FockConfig) -> (FockConfig, FockConfig) {
    (ket.prepend(ancilla_branch(ket, bra)), bra.prepend(false))
}
