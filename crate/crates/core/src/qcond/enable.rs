use crate::machine::{MachineError, MachineState, PrimitiveGate, RegisterMap};
use crate::tape::{CheckKind, GateTape, TapeError};

use super::ZhegalkinPoly;

/// How a quantum condition gates the operators of a branch.
#[derive(Debug, Clone, PartialEq)]
pub enum EnablePlan {
    /// The condition is constant 0; the branch never acts.
    Never,
    /// The condition is constant 1; the branch acts unconditionally.
    Always,
    /// A single conjunction, used directly as the control set.
    Direct { controls: Vec<usize> },
    /// One scratch qubit that holds the condition between `compute` and
    /// `uncompute`.
    Synthesized { enable: RegisterMap, condition: Vec<usize>, compute: GateTape, uncompute: GateTape },
}

/// Chooses an enable plan for `poly`, allocating a scratch qubit when the
/// condition is not a single conjunction.
///
/// With `flippable` set the plan must be invertible by one `X` gate (needed
/// for an `else` branch), so multi-qubit conjunctions are synthesized too.
/// The scratch qubit is never one of `exclude`.
pub fn synthesize_enable(
    poly: &ZhegalkinPoly,
    machine: &mut MachineState,
    exclude: &[usize],
    flippable: bool,
) -> Result<EnablePlan, MachineError> {
    if poly.is_zero() {
        return Ok(EnablePlan::Never);
    }
    if poly.is_one() {
        return Ok(EnablePlan::Always);
    }
    let monos: Vec<_> = poly.monomials().collect();
    if !poly.constant_term() && monos.len() == 1 && (!flippable || monos[0].qubits().len() == 1) {
        return Ok(EnablePlan::Direct { controls: monos[0].qubits().to_vec() });
    }
    let mut avoid: Vec<usize> = poly.qubits().into_iter().collect();
    avoid.extend_from_slice(exclude);
    let enable = machine.allocate_register_excluding(1, &avoid)?;
    let e = enable.qubit(0);
    let mut compute = GateTape::new();
    if poly.constant_term() {
        compute.push(PrimitiveGate::x(e));
    }
    for m in monos {
        compute.push(PrimitiveGate::x(e).controlled_by(m.qubits().iter().copied()));
    }
    let uncompute = compute.adjoint();
    Ok(EnablePlan::Synthesized { enable, condition: poly.qubits().into_iter().collect(), compute, uncompute })
}

impl EnablePlan {
    /// The qubits whose all-ones subspace enables the branch.
    pub fn controls(&self) -> Vec<usize> {
        match self {
            EnablePlan::Never | EnablePlan::Always => Vec::new(),
            EnablePlan::Direct { controls } => controls.clone(),
            EnablePlan::Synthesized { enable, .. } => enable.qubits().to_vec(),
        }
    }

    pub fn scratch(&self) -> Option<&RegisterMap> {
        match self {
            EnablePlan::Synthesized { enable, .. } => Some(enable),
            _ => None,
        }
    }

    /// The conditional version of `then` followed, if given, by `otherwise`
    /// gated on the negated condition. Includes the compute and uncompute
    /// steps of a synthesized plan.
    pub fn gate(&self, then: &GateTape, otherwise: Option<&GateTape>) -> Result<GateTape, TapeError> {
        match self {
            EnablePlan::Never => Ok(otherwise.cloned().unwrap_or_default()),
            EnablePlan::Always => Ok(then.clone()),
            EnablePlan::Direct { controls } => {
                let mut out = then.conditionalize(controls)?;
                if let Some(e) = otherwise {
                    let [c] = controls[..] else { unreachable!("else branches need a flippable plan") };
                    out.push(PrimitiveGate::x(c));
                    out.append(e.conditionalize(controls)?);
                    out.push(PrimitiveGate::x(c));
                }
                Ok(out)
            }
            EnablePlan::Synthesized { enable, condition, compute, uncompute } => {
                for branch in std::iter::once(then).chain(otherwise) {
                    if let Some(t) = branch.gates().filter_map(|g| g.target).find(|t| condition.contains(t)) {
                        return Err(TapeError::EnableOverlap(t));
                    }
                }
                let e = enable.qubit(0);
                let mut out = compute.clone();
                out.append(then.conditionalize(&[e])?);
                if let Some(other) = otherwise {
                    out.push(PrimitiveGate::x(e));
                    out.append(other.conditionalize(&[e])?);
                    out.push(PrimitiveGate::x(e));
                }
                out.append(uncompute.clone());
                out.push_check(CheckKind::Ancilla, enable, "condition qubit");
                Ok(out)
            }
        }
    }

    /// Returns the scratch qubit, if any, to the free pool.
    pub fn release(&self, machine: &mut MachineState) -> Result<(), MachineError> {
        match self.scratch() {
            Some(r) => machine.release_register(r),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{to_xdnf, CondExpr};
    use super::*;

    fn q(i: usize) -> CondExpr {
        CondExpr::qubit(i)
    }

    fn machine(n: usize) -> MachineState {
        let mut m = MachineState::new(n + 2, 0).unwrap();
        m.allocate_register(n).unwrap();
        m
    }

    #[test]
    fn conjunction_needs_no_scratch() {
        let mut m = machine(2);
        let plan = synthesize_enable(&to_xdnf(&CondExpr::and(q(0), q(1))), &mut m, &[], false).unwrap();
        assert_eq!(plan, EnablePlan::Direct { controls: vec![0, 1] });
        assert_eq!(m.allocated_count(), 2);
    }

    #[test]
    fn else_forces_scratch_for_wide_conjunctions() {
        let mut m = machine(2);
        let plan = synthesize_enable(&to_xdnf(&CondExpr::and(q(0), q(1))), &mut m, &[], true).unwrap();
        assert!(plan.scratch().is_some());
        let single = synthesize_enable(&to_xdnf(&q(1)), &mut m, &[], true).unwrap();
        assert_eq!(single, EnablePlan::Direct { controls: vec![1] });
    }

    #[test]
    fn disjunction_tape() {
        let mut m = machine(2);
        let plan = synthesize_enable(&to_xdnf(&CondExpr::or(q(0), q(1))), &mut m, &[], false).unwrap();
        let EnablePlan::Synthesized { enable, compute, uncompute, .. } = &plan else {
            panic!("expected a synthesized plan")
        };
        assert_eq!(enable.qubits(), &[2]);
        let want = GateTape::from_gates([
            PrimitiveGate::x(2).controlled_by([0]),
            PrimitiveGate::x(2).controlled_by([1]),
            PrimitiveGate::x(2).controlled_by([0, 1]),
        ]);
        assert_eq!(compute, &want);
        assert_eq!(uncompute, &want.adjoint());
        for basis in 0..4u64 {
            let mut s = machine(2);
            s.allocate_register(1).unwrap();
            s.prepare_basis(basis).unwrap();
            compute.apply(&mut s, true).unwrap();
            assert_eq!(s.amplitude(basis | 4).re, if basis != 0 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn constants() {
        let mut m = machine(1);
        assert_eq!(
            synthesize_enable(&to_xdnf(&CondExpr::Const(true)), &mut m, &[], false).unwrap(),
            EnablePlan::Always
        );
        assert_eq!(
            synthesize_enable(&to_xdnf(&CondExpr::Const(false)), &mut m, &[], false).unwrap(),
            EnablePlan::Never
        );
    }

    #[test]
    fn scratch_avoids_excluded_qubits() {
        let mut m = machine(2);
        let plan = synthesize_enable(&to_xdnf(&CondExpr::not(q(0))), &mut m, &[2], false).unwrap();
        assert_eq!(plan.scratch().unwrap().qubits(), &[3]);
    }
}
