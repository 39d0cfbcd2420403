//! Builtin quantum routines, lowered to primitive gates.

use crate::machine::{MachineError, PrimitiveGate, RegisterMap};
use crate::syntax::{ClassicalType, ParamType, QuantumType, SubKind};
use crate::tape::{CheckKind, GateTape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    H,
    Not,
    CNot,
    Rot,
    Phase,
    Flip,
    Fanout,
}

const REAL: ParamType = ParamType::Classical(ClassicalType::Real);
const QUREG: ParamType = ParamType::Quantum(QuantumType::Qureg);
const QUCONST: ParamType = ParamType::Quantum(QuantumType::Quconst);
const QUVOID: ParamType = ParamType::Quantum(QuantumType::Quvoid);

impl Builtin {
    pub const ALL: [Builtin; 7] =
        [Builtin::H, Builtin::Not, Builtin::CNot, Builtin::Rot, Builtin::Phase, Builtin::Flip, Builtin::Fanout];

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::H => "H",
            Builtin::Not => "Not",
            Builtin::CNot => "CNot",
            Builtin::Rot => "Rot",
            Builtin::Phase => "Phase",
            Builtin::Flip => "flip",
            Builtin::Fanout => "fanout",
        }
    }

    /// Permutation builtins are qufunct-level, the rest operator-level.
    pub fn level(self) -> SubKind {
        match self {
            Builtin::Not | Builtin::CNot | Builtin::Flip | Builtin::Fanout => SubKind::Qufunct,
            Builtin::H | Builtin::Rot | Builtin::Phase => SubKind::Operator,
        }
    }

    pub fn params(self) -> &'static [ParamType] {
        match self {
            Builtin::H | Builtin::Not | Builtin::Flip => &[QUREG],
            Builtin::CNot => &[QUREG, QUCONST],
            Builtin::Rot => &[REAL, QUREG],
            Builtin::Phase => &[REAL],
            Builtin::Fanout => &[QUCONST, QUVOID],
        }
    }

    /// Lowers a call. `reals` and `regs` hold the classical and register
    /// arguments in declaration order.
    pub fn lower(self, reals: &[f64], regs: &[RegisterMap]) -> Result<GateTape, MachineError> {
        Ok(match self {
            Builtin::H => h(&regs[0]),
            Builtin::Not => not(&regs[0]),
            Builtin::CNot => cnot(&regs[0], &regs[1])?,
            Builtin::Rot => rot(reals[0], &regs[0]),
            Builtin::Phase => phase(reals[0]),
            Builtin::Flip => flip(&regs[0]),
            Builtin::Fanout => fanout(&regs[0], &regs[1])?,
        })
    }
}

/// Hadamard on every qubit, position 0 first.
pub fn h(q: &RegisterMap) -> GateTape {
    GateTape::from_gates(q.qubits().iter().map(|&t| PrimitiveGate::h(t)))
}

pub fn not(q: &RegisterMap) -> GateTape {
    GateTape::from_gates(q.qubits().iter().map(|&t| PrimitiveGate::x(t)))
}

/// Flips every qubit of `target` where all qubits of `control` are set.
pub fn cnot(target: &RegisterMap, control: &RegisterMap) -> Result<GateTape, MachineError> {
    if let Some(q) = target.overlap(control) {
        return Err(MachineError::Overlap(q));
    }
    Ok(GateTape::from_gates(
        target.qubits().iter().map(|&t| PrimitiveGate::x(t).controlled_by(control.qubits().iter().copied())),
    ))
}

pub fn rot(theta: f64, q: &RegisterMap) -> GateTape {
    GateTape::from_gates(q.qubits().iter().map(|&t| PrimitiveGate::rot(theta, t)))
}

/// A phase factor on the whole (enabled) state.
pub fn phase(phi: f64) -> GateTape {
    GateTape::from_gates([PrimitiveGate::phase(phi)])
}

/// Reverses the bit order of `q` using three-CNot swaps.
pub fn flip(q: &RegisterMap) -> GateTape {
    let m = q.len();
    let mut tape = GateTape::new();
    for i in 0..m / 2 {
        let (a, b) = (q.qubit(i), q.qubit(m - 1 - i));
        tape.push(PrimitiveGate::x(b).controlled_by([a]));
        tape.push(PrimitiveGate::x(a).controlled_by([b]));
        tape.push(PrimitiveGate::x(b).controlled_by([a]));
    }
    tape
}

/// `|i⟩|0⟩ → |i⟩|i⟩`, as one CNot per qubit pair.
pub fn fanout(a: &RegisterMap, b: &RegisterMap) -> Result<GateTape, MachineError> {
    if a.len() != b.len() {
        return Err(MachineError::LengthMismatch { left: a.len(), right: b.len() });
    }
    if let Some(q) = a.overlap(b) {
        return Err(MachineError::Overlap(q));
    }
    let mut tape = GateTape::new();
    tape.push_check(CheckKind::QuvoidEntry, b, "fanout target");
    for (&src, &dst) in a.qubits().iter().zip(b.qubits()) {
        tape.push(PrimitiveGate::x(dst).controlled_by([src]));
    }
    Ok(tape)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::MachineState;
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn reg(q: &[usize]) -> RegisterMap {
        RegisterMap::new(q.to_vec()).unwrap()
    }

    fn run(tape: &GateTape, n: usize, input: u64) -> MachineState {
        let mut m = MachineState::new(n, 0).unwrap();
        m.allocate_register(n).unwrap();
        m.prepare_basis(input).unwrap();
        tape.apply(&mut m, true).unwrap();
        m
    }

    fn is_permutation(m: &DMatrix<Complex64>) -> bool {
        let n = m.nrows();
        (0..n).all(|c| {
            let ones = (0..n).filter(|&r| (m[(r, c)] - Complex64::new(1.0, 0.0)).norm() < 1e-12).count();
            let zeros = (0..n).filter(|&r| m[(r, c)].norm() < 1e-12).count();
            ones == 1 && zeros == n - 1
        }) && (0..n).all(|r| (0..n).filter(|&c| m[(r, c)].norm() > 0.5).count() == 1)
    }

    fn is_unitary(m: &DMatrix<Complex64>) -> bool {
        let p = m.adjoint() * m;
        let n = m.nrows();
        (0..n).all(|r| (0..n).all(|c| (p[(r, c)] - Complex64::new(if r == c { 1.0 } else { 0.0 }, 0.0)).norm() < 1e-9))
    }

    #[test]
    fn not_and_cnot() {
        let q = reg(&[0, 1, 2, 3]);
        assert_eq!(run(&not(&q), 4, 0).amplitude(0b1111).re, 1.0);
        let t = cnot(&reg(&[0]), &reg(&[1, 2])).unwrap();
        assert_eq!(run(&t, 3, 0b110).amplitude(0b111).re, 1.0);
        assert_eq!(run(&t, 3, 0b010).amplitude(0b010).re, 1.0);
        assert_eq!(cnot(&reg(&[0, 1]), &reg(&[1])), Err(MachineError::Overlap(1)));
    }

    #[test]
    fn rot_values() {
        let m = run(&rot(-PI / 3.0, &reg(&[0])), 1, 0);
        assert!((m.amplitude(0).re - 0.8660254037844386).abs() < 1e-12);
        assert!((m.amplitude(1).re - 0.5).abs() < 1e-12);
        let id = rot(0.0, &reg(&[0, 1])).matrix_on(&[0, 1]).unwrap();
        assert!((id - DMatrix::identity(4, 4)).iter().all(|e| e.norm() < 1e-12));
    }

    #[test]
    fn flip_reverses() {
        let q = reg(&[0, 1, 2]);
        assert_eq!(run(&flip(&q), 3, 0b100).amplitude(0b001).re, 1.0);
        assert_eq!(run(&flip(&q), 3, 0b101).amplitude(0b101).re, 1.0);
        let mut twice = flip(&q);
        twice.append(flip(&q));
        assert!((twice.matrix_on(&[0, 1, 2]).unwrap() - DMatrix::identity(8, 8)).iter().all(|e| e.norm() < 1e-12));
    }

    #[test]
    fn fanout_copies_basis_values() {
        let t = fanout(&reg(&[0, 1]), &reg(&[2, 3])).unwrap();
        assert_eq!(run(&t, 4, 0b0011).amplitude(0b1111).re, 1.0);
        assert_eq!(run(&t, 4, 0).amplitude(0).re, 1.0);
        assert!(fanout(&reg(&[0]), &reg(&[1, 2])).is_err());

        let mut m = MachineState::new(2, 0).unwrap();
        m.allocate_register(2).unwrap();
        h(&reg(&[0])).apply(&mut m, true).unwrap();
        fanout(&reg(&[0]), &reg(&[1])).unwrap().apply(&mut m, true).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m.amplitude(0b00).re - s).abs() < 1e-12);
        assert!((m.amplitude(0b11).re - s).abs() < 1e-12);
        assert!(m.amplitude(0b01).norm() < 1e-12 && m.amplitude(0b10).norm() < 1e-12);
    }

    #[test]
    fn permutation_and_unitarity() {
        let q = reg(&[0, 1, 2]);
        for tape in
            [not(&q), cnot(&reg(&[2]), &reg(&[0, 1])).unwrap(), flip(&q), fanout(&reg(&[0]), &reg(&[2])).unwrap()]
        {
            let m = tape.matrix_on(&[0, 1, 2]).unwrap();
            assert!(is_permutation(&m));
        }
        for tape in [h(&q), rot(0.7, &q), phase(1.1)] {
            assert!(is_unitary(&tape.matrix_on(&[0, 1, 2]).unwrap()));
        }
    }

    #[test]
    fn broadcast_order_is_irrelevant() {
        let q = reg(&[0, 1, 2]);
        let rev = reg(&[2, 1, 0]);
        for (a, b) in [(h(&q), h(&rev)), (not(&q), not(&rev)), (rot(0.3, &q), rot(0.3, &rev))] {
            let d = a.matrix_on(&[0, 1, 2]).unwrap() - b.matrix_on(&[0, 1, 2]).unwrap();
            assert!(d.iter().all(|e| e.norm() < 1e-12));
        }
    }
}
