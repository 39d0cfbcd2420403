//! Flattened gate sequences.
//!
//! Every quantum subroutine call is recorded as a [`GateTape`] before it
//! reaches the machine. Adjoints and conditional versions are derived by
//! transforming the tape, and the machine-independent matrix of a tape can be
//! assembled for verification.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::machine::{MachineError, MachineState, PrimitiveGate, RegisterMap, EMPTY_TOLERANCE};

/// Why a register is required to be empty at a point of the tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// `quvoid` argument when the uninverted operator is called.
    QuvoidEntry,
    /// `quscratch` argument before the call.
    ScratchEntry,
    /// `quscratch` argument after the call.
    ScratchExit,
    /// Local register at the start or end of its scope.
    LocalScope,
    /// Interpreter-allocated ancilla (auxiliary or condition qubit).
    Ancilla,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmptinessCheck {
    pub kind: CheckKind,
    pub qubits: Vec<usize>,
    /// The check only covers the subspace where all of these are 1.
    pub controls: Vec<usize>,
    pub label: String,
}

impl fmt::Display for EmptinessCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            CheckKind::QuvoidEntry => "quvoid register must be empty on entry",
            CheckKind::ScratchEntry => "quscratch register must be empty on entry",
            CheckKind::ScratchExit => "quscratch register was not restored to empty",
            CheckKind::LocalScope => "local register is not empty at scope exit",
            CheckKind::Ancilla => "ancilla register was not restored to empty",
        };
        write!(f, "{what}: `{}` {:?}", self.label, self.qubits)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TapeOp {
    Gate(PrimitiveGate),
    Check(EmptinessCheck),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TapeError {
    #[error("operator must not operate on qubit {0}, which is used in the condition")]
    EnableOverlap(usize),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("{0}")]
    CheckFailed(EmptinessCheck),
    #[error("ancilla qubits {qubits:?} not restored (leaked probability {leaked:.3e})")]
    AncillaLeak { qubits: Vec<usize>, leaked: f64 },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GateTape {
    ops: Vec<TapeOp>,
}

impl GateTape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_gates(gates: impl IntoIterator<Item = PrimitiveGate>) -> Self {
        GateTape { ops: gates.into_iter().map(TapeOp::Gate).collect() }
    }

    pub fn push(&mut self, gate: PrimitiveGate) {
        self.ops.push(TapeOp::Gate(gate));
    }

    pub fn push_check(&mut self, kind: CheckKind, reg: &RegisterMap, label: impl Into<String>) {
        self.ops.push(TapeOp::Check(EmptinessCheck {
            kind,
            qubits: reg.qubits().to_vec(),
            controls: Vec::new(),
            label: label.into(),
        }));
    }

    pub fn append(&mut self, other: GateTape) {
        self.ops.extend(other.ops);
    }

    pub fn ops(&self) -> &[TapeOp] {
        &self.ops
    }

    pub fn gates(&self) -> impl Iterator<Item = &PrimitiveGate> {
        self.ops.iter().filter_map(|op| match op {
            TapeOp::Gate(g) => Some(g),
            TapeOp::Check(_) => None,
        })
    }

    pub fn gate_count(&self) -> usize {
        self.gates().count()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// All qubits read or written by a gate.
    pub fn qubits(&self) -> BTreeSet<usize> {
        self.gates().flat_map(|g| g.qubits()).collect()
    }

    /// Reverses the tape and replaces every gate by its adjoint.
    ///
    /// `quvoid` entry checks are dropped: the inverse of an operator consumes
    /// its target instead of requiring it empty.
    pub fn adjoint(&self) -> GateTape {
        let ops = self
            .ops
            .iter()
            .rev()
            .filter_map(|op| match op {
                TapeOp::Gate(g) => Some(TapeOp::Gate(g.adjoint())),
                TapeOp::Check(c) if c.kind == CheckKind::QuvoidEntry => None,
                TapeOp::Check(c) => Some(TapeOp::Check(c.clone())),
            })
            .collect();
        GateTape { ops }
    }

    /// Adds `enable` to every gate's control set, turning `U` into the
    /// conditional operator that acts as `U` where all enable qubits are 1
    /// and as the identity elsewhere. Phase gates become controlled phases.
    ///
    /// Fails if a gate targets an enable qubit.
    pub fn conditionalize(&self, enable: &[usize]) -> Result<GateTape, TapeError> {
        if enable.is_empty() {
            return Ok(self.clone());
        }
        let mut ops = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            ops.push(match op {
                TapeOp::Gate(g) => {
                    if let Some(t) = g.target.filter(|t| enable.contains(t)) {
                        return Err(TapeError::EnableOverlap(t));
                    }
                    TapeOp::Gate(g.clone().controlled_by(enable.iter().copied()))
                }
                TapeOp::Check(c) => {
                    let mut c = c.clone();
                    c.controls.extend(enable.iter().copied().filter(|q| !c.qubits.contains(q)));
                    c.controls.sort_unstable();
                    c.controls.dedup();
                    TapeOp::Check(c)
                }
            });
        }
        Ok(GateTape { ops })
    }

    /// Replays the tape on a machine. Emptiness checks run only when
    /// `checks` is set.
    pub fn apply(&self, machine: &mut MachineState, checks: bool) -> Result<(), TapeError> {
        for op in &self.ops {
            match op {
                TapeOp::Gate(g) => machine.apply_gate(g)?,
                TapeOp::Check(c) => {
                    if checks && !machine.is_empty_where(&c.qubits, &c.controls) {
                        return Err(TapeError::CheckFailed(c.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// The unitary the tape implements on `qubits` (position 0 = least
    /// significant bit of the row/column index).
    ///
    /// Other qubits touched by the tape are treated as ancillas that start
    /// in `|0⟩`; they must end in `|0⟩` for every input, otherwise
    /// [`TapeError::AncillaLeak`] is returned. Emptiness checks are ignored.
    pub fn matrix_on(&self, qubits: &[usize]) -> Result<DMatrix<Complex64>, TapeError> {
        let ancillas: Vec<usize> = self.qubits().into_iter().filter(|q| !qubits.contains(q)).collect();
        let local = |q: usize| -> usize {
            qubits
                .iter()
                .position(|&x| x == q)
                .or_else(|| ancillas.iter().position(|&x| x == q).map(|p| p + qubits.len()))
                .expect("every tape qubit is listed or an ancilla")
        };
        let gates: Vec<PrimitiveGate> = self.gates().map(|g| g.remapped(local)).collect();

        let dim = 1usize << qubits.len();
        let full = 1usize << (qubits.len() + ancillas.len());
        let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        let mut leaked = 0.0f64;
        let mut v = vec![Complex64::new(0.0, 0.0); full];
        for col in 0..dim {
            v.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
            v[col] = Complex64::new(1.0, 0.0);
            for g in &gates {
                g.apply_to(&mut v);
            }
            for row in 0..dim {
                m[(row, col)] = v[row];
            }
            leaked = leaked.max(v[dim..].iter().map(|a| a.norm_sqr()).sum());
        }
        if leaked > EMPTY_TOLERANCE {
            return Err(TapeError::AncillaLeak { qubits: ancillas, leaked });
        }
        Ok(m)
    }
}

impl fmt::Display for GateTape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            match op {
                TapeOp::Gate(g) => writeln!(f, "{g}")?,
                TapeOp::Check(c) => writeln!(f, "check {c}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_error(m: &DMatrix<Complex64>) -> f64 {
        let n = m.nrows();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let want = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((m[(r, c)] - Complex64::new(want, 0.0)).norm());
            }
        }
        worst
    }

    #[test]
    fn adjoint_reverses_self_adjoint_gates() {
        let t = GateTape::from_gates([PrimitiveGate::h(0), PrimitiveGate::x(1)]);
        assert_eq!(t.adjoint(), GateTape::from_gates([PrimitiveGate::x(1), PrimitiveGate::h(0)]));
        let r = GateTape::from_gates([PrimitiveGate::rot(0.4, 0)]);
        assert_eq!(r.adjoint(), GateTape::from_gates([PrimitiveGate::rot(-0.4, 0)]));
    }

    #[test]
    fn tape_then_adjoint_is_identity() {
        let t = GateTape::from_gates([
            PrimitiveGate::h(0),
            PrimitiveGate::rot(0.9, 1).controlled_by([0]),
            PrimitiveGate::phase(0.3).controlled_by([1, 2]),
            PrimitiveGate::x(2).controlled_by([0, 1]),
            PrimitiveGate::h(3).controlled_by([2]),
        ]);
        let mut both = t.clone();
        both.append(t.adjoint());
        let m = both.matrix_on(&[0, 1, 2, 3]).unwrap();
        assert!(identity_error(&m) < 1e-9);
    }

    #[test]
    fn conditionalize_rules() {
        let t = GateTape::from_gates([PrimitiveGate::x(0), PrimitiveGate::phase(0.5)]);
        assert_eq!(t.conditionalize(&[]).unwrap(), t);
        let c = t.conditionalize(&[2]).unwrap();
        assert!(c.gates().all(|g| g.controls == vec![2]));
        assert_eq!(t.conditionalize(&[0]), Err(TapeError::EnableOverlap(0)));
    }

    #[test]
    fn ancilla_leak_detected() {
        let t = GateTape::from_gates([PrimitiveGate::x(1).controlled_by([0])]);
        assert!(matches!(t.matrix_on(&[0]), Err(TapeError::AncillaLeak { .. })));
        let mut restored = t.clone();
        restored.append(t.adjoint());
        assert!(identity_error(&restored.matrix_on(&[0]).unwrap()) < 1e-12);
    }
}
