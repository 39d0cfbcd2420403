//! Quantum conditions: conditional operators, enable synthesis and forking.

mod cond;
mod enable;
pub mod fork;
mod xdnf;

pub use cond::CondExpr;
pub use enable::{synthesize_enable, EnablePlan};
pub use fork::{ForkPath, MAX_FORK_PATHS};
pub use xdnf::{to_xdnf, Monomial, ZhegalkinPoly};

use crate::tape::{GateTape, TapeError};

/// The conditional version of `tape`: it acts only where every qubit of
/// `enable` is 1.
pub fn conditionalize_tape(tape: &GateTape, enable: &[usize]) -> Result<GateTape, TapeError> {
    tape.conditionalize(enable)
}
