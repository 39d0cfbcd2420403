//! The quantum backend: a dense state vector with qubit allocation.
//!
//! Qubit `k` is bit `k` of the basis index. Free qubits are always in
//! `|0⟩`, which lets the amplitude vector cover only the qubits up to the
//! highest one in use; the nominal machine size can be larger than what is
//! held densely.

mod format;
mod gate;
mod register;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use format::{format_amplitude, format_real, format_terms, PRINT_THRESHOLD, TIE_TOLERANCE};
pub use gate::{GateKind, PrimitiveGate};
pub use register::RegisterMap;

/// Amplitudes at or below this magnitude count as zero in emptiness tests.
pub const EMPTY_TOLERANCE: f64 = 1e-9;
/// Default ceiling on the number of qubits held in the dense vector.
pub const DEFAULT_DENSE_LIMIT: usize = 24;
pub const MAX_TOTAL_QUBITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MachineError {
    #[error("register size must be at least 1")]
    EmptyRequest,
    #[error("out of qubits: {requested} requested, {free} free")]
    OutOfQubits { requested: usize, free: usize },
    #[error("qubit {qubit} is beyond the simulator's dense limit of {limit} qubits")]
    DenseLimit { qubit: usize, limit: usize },
    #[error("qubit {0} is not allocated")]
    NotAllocated(usize),
    #[error("qubit {qubit} does not exist on a {total}-qubit machine")]
    NoSuchQubit { qubit: usize, total: usize },
    #[error("register {0} is not empty")]
    NotEmpty(RegisterMap),
    #[error("registers overlap on qubit {0}")]
    Overlap(usize),
    #[error("index {index} out of range for a register of length {len}")]
    OutOfRange { index: i64, len: usize },
    #[error("invalid slice [{from}:{to}] of a register of length {len}")]
    BadSlice { from: i64, to: i64, len: usize },
    #[error("register lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("gate target {0} is also one of its controls")]
    TargetIsControl(usize),
    #[error("machine size must be between 1 and {MAX_TOTAL_QUBITS} qubits, got {0}")]
    BadSize(usize),
}

#[derive(Debug, Clone)]
pub struct MachineState {
    total: usize,
    dense_limit: usize,
    /// Number of qubits covered by `amps` (`amps.len() == 1 << width`).
    width: usize,
    amps: Vec<Complex64>,
    allocated: Vec<bool>,
    rng: ChaCha8Rng,
    revision: u64,
}

impl MachineState {
    pub fn new(total_qubits: usize, seed: u64) -> Result<Self, MachineError> {
        if total_qubits == 0 || total_qubits > MAX_TOTAL_QUBITS {
            return Err(MachineError::BadSize(total_qubits));
        }
        Ok(MachineState {
            total: total_qubits,
            dense_limit: DEFAULT_DENSE_LIMIT,
            width: 0,
            amps: vec![Complex64::new(1.0, 0.0)],
            allocated: vec![false; total_qubits],
            rng: ChaCha8Rng::seed_from_u64(seed),
            revision: 0,
        })
    }

    pub fn with_dense_limit(mut self, limit: usize) -> Self {
        self.dense_limit = limit;
        self
    }

    pub fn total_qubits(&self) -> usize {
        self.total
    }

    pub fn allocated_count(&self) -> usize {
        self.allocated.iter().filter(|a| **a).count()
    }

    pub fn free_count(&self) -> usize {
        self.total - self.allocated_count()
    }

    pub fn is_allocated(&self, qubit: usize) -> bool {
        self.allocated.get(qubit).copied().unwrap_or(false)
    }

    /// Allocated qubit indices in ascending order.
    pub fn allocated_qubits(&self) -> Vec<usize> {
        (0..self.total).filter(|&q| self.allocated[q]).collect()
    }

    /// Incremented whenever amplitudes change.
    pub fn revision(&self) -> u64 {
        self.revision
    }

    /// The dense amplitude vector. Index bit `k` is qubit `k`; qubits at or
    /// above `width()` are `|0⟩` and not stored.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Amplitude of a basis state over all machine qubits.
    pub fn amplitude(&self, index: u64) -> Complex64 {
        if (index >> self.width) != 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.amps[index as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Claims the `m` lowest free qubits.
    pub fn allocate_register(&mut self, m: usize) -> Result<RegisterMap, MachineError> {
        self.allocate_register_excluding(m, &[])
    }

    /// Like [`allocate_register`](Self::allocate_register) but never hands
    /// out a qubit listed in `exclude`.
    pub fn allocate_register_excluding(&mut self, m: usize, exclude: &[usize]) -> Result<RegisterMap, MachineError> {
        if m == 0 {
            return Err(MachineError::EmptyRequest);
        }
        let picked: Vec<usize> =
            (0..self.total).filter(|&q| !self.allocated[q] && !exclude.contains(&q)).take(m).collect();
        if picked.len() < m {
            return Err(MachineError::OutOfQubits { requested: m, free: picked.len() });
        }
        let top = *picked.last().expect("m >= 1");
        self.ensure_width(top + 1)?;
        for &q in &picked {
            self.allocated[q] = true;
        }
        RegisterMap::new(picked)
    }

    /// Returns an empty register to the free pool.
    pub fn free_register(&mut self, reg: &RegisterMap) -> Result<(), MachineError> {
        self.require_allocated(reg.qubits())?;
        if !self.is_empty_register(reg) {
            return Err(MachineError::NotEmpty(reg.clone()));
        }
        self.release_register(reg)
    }

    /// Returns qubits to the free pool without the emptiness test. The caller
    /// is responsible for the qubits being `|0⟩` by the time anything else
    /// can observe them.
    pub fn release_register(&mut self, reg: &RegisterMap) -> Result<(), MachineError> {
        self.require_allocated(reg.qubits())?;
        for &q in reg.qubits() {
            self.allocated[q] = false;
        }
        Ok(())
    }

    fn require_allocated(&self, qubits: &[usize]) -> Result<(), MachineError> {
        match qubits.iter().find(|&&q| !self.is_allocated(q)) {
            Some(&q) => Err(MachineError::NotAllocated(q)),
            None => Ok(()),
        }
    }

    /// Applies a gate whose qubits must all be allocated.
    pub fn apply_primitive(&mut self, gate: &PrimitiveGate) -> Result<(), MachineError> {
        let qubits: Vec<usize> = gate.qubits().collect();
        self.require_allocated(&qubits)?;
        self.apply_gate(gate)
    }

    /// Applies a gate that may touch transient qubits outside the allocation
    /// mask (ancillas released before a recorded tape is replayed).
    pub fn apply_gate(&mut self, gate: &PrimitiveGate) -> Result<(), MachineError> {
        if let Some(t) = gate.target {
            if gate.controls.contains(&t) {
                return Err(MachineError::TargetIsControl(t));
            }
        }
        let top = gate.qubits().max();
        if let Some(top) = top {
            if top >= self.total {
                return Err(MachineError::NoSuchQubit { qubit: top, total: self.total });
            }
            self.ensure_width(top + 1)?;
        }
        gate.apply_to(&mut self.amps);
        self.revision += 1;
        Ok(())
    }

    /// Samples the register's value with Born probabilities and collapses
    /// the state onto it.
    pub fn measure_register(&mut self, reg: &RegisterMap) -> Result<u64, MachineError> {
        self.require_allocated(reg.qubits())?;
        let total = self.norm_sqr();
        let r: f64 = self.rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut chosen = None;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            acc += p;
            chosen = Some(i);
            if r < acc {
                break;
            }
        }
        let chosen = chosen.expect("state has nonzero norm");
        let mask = reg.mask();
        let pattern = chosen & mask;
        let mut kept = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == pattern {
                kept += a.norm_sqr();
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        let scale = 1.0 / kept.sqrt();
        for a in &mut self.amps {
            *a *= scale;
        }
        self.revision += 1;
        Ok(reg.value_in(pattern))
    }

    /// Puts every qubit back to `|0⟩`; allocations are kept.
    pub fn reset_state(&mut self) {
        self.amps.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        self.amps[0] = Complex64::new(1.0, 0.0);
        self.revision += 1;
    }

    /// Replaces the state by the basis state `|index⟩`. Every set bit must be
    /// an allocated qubit.
    pub fn prepare_basis(&mut self, index: u64) -> Result<(), MachineError> {
        let bits: Vec<usize> = (0..64).filter(|b| (index >> b) & 1 == 1).collect();
        self.require_allocated(&bits)?;
        self.reset_state();
        self.amps[0] = Complex64::new(0.0, 0.0);
        self.amps[index as usize] = Complex64::new(1.0, 0.0);
        Ok(())
    }

    /// Whether all probability mass has the register at `|0…0⟩`.
    pub fn is_empty_register(&self, reg: &RegisterMap) -> bool {
        self.is_empty_where(reg.qubits(), &[])
    }

    /// Whether `qubits` read 0 on every basis state with non-negligible
    /// amplitude whose `controls` are all 1.
    pub fn is_empty_where(&self, qubits: &[usize], controls: &[usize]) -> bool {
        let mask = qubits.iter().fold(0usize, |m, &q| m | (1usize.checked_shl(q as u32).unwrap_or(0)));
        let cmask = controls.iter().fold(0usize, |m, &q| m | (1usize.checked_shl(q as u32).unwrap_or(0)));
        self.amps.iter().enumerate().all(|(i, a)| a.norm() <= EMPTY_TOLERANCE || i & cmask != cmask || i & mask == 0)
    }

    /// The two-line state dump:
    /// `STATE: a / n qubits allocated, f / n qubits free` and the term list
    /// over all `n` qubits.
    pub fn format_dump(&self) -> String {
        let a = self.allocated_count();
        let n = self.total;
        let ket: Vec<usize> = (0..n).rev().collect();
        format!("STATE: {a} / {n} qubits allocated, {} / {n} qubits free\n{}", n - a, format_terms(&self.amps, &ket))
    }

    fn ensure_width(&mut self, width: usize) -> Result<(), MachineError> {
        if width <= self.width {
            return Ok(());
        }
        if width > self.dense_limit {
            return Err(MachineError::DenseLimit { qubit: width - 1, limit: self.dense_limit });
        }
        self.amps.resize(1usize << width, Complex64::new(0.0, 0.0));
        self.width = width;
        Ok(())
    }

    /// Shrinks the dense vector to the highest allocated qubit, provided
    /// the dropped qubits carry no amplitude.
    pub fn compact(&mut self) {
        let want = self.allocated_qubits().last().map_or(0, |q| q + 1);
        if want >= self.width {
            return;
        }
        let keep = 1usize << want;
        if self.amps[keep..].iter().all(|a| a.norm() <= EMPTY_TOLERANCE) {
            self.amps.truncate(keep);
            self.width = want;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn allocation_lowest_first() {
        let mut m = MachineState::new(4, 0).unwrap();
        let a = m.allocate_register(1).unwrap();
        let b = m.allocate_register(1).unwrap();
        assert_eq!((a.qubits(), b.qubits()), (&[0][..], &[1][..]));
        assert!(m.format_dump().starts_with("STATE: 2 / 4 qubits allocated, 2 / 4 qubits free"));
        assert_eq!(m.allocate_register(0), Err(MachineError::EmptyRequest));
        assert_eq!(m.allocate_register(5), Err(MachineError::OutOfQubits { requested: 5, free: 2 }));
        let ex = m.allocate_register_excluding(1, &[2]).unwrap();
        assert_eq!(ex.qubits(), &[3]);
    }

    #[test]
    fn free_requires_empty() {
        let mut m = MachineState::new(4, 0).unwrap();
        let r = m.allocate_register(3).unwrap();
        let q = r.index(2).unwrap();
        m.apply_primitive(&PrimitiveGate::x(2)).unwrap();
        assert!(matches!(m.free_register(&q), Err(MachineError::NotEmpty(_))));
        m.apply_primitive(&PrimitiveGate::x(2)).unwrap();
        m.free_register(&q).unwrap();
        assert_eq!(m.free_register(&q), Err(MachineError::NotAllocated(2)));
    }

    #[test]
    fn product_state_dump() {
        let mut m = MachineState::new(4, 0).unwrap();
        m.allocate_register(1).unwrap();
        m.allocate_register(1).unwrap();
        m.apply_primitive(&PrimitiveGate::rot(-PI / 3.0, 0)).unwrap();
        m.apply_primitive(&PrimitiveGate::h(1)).unwrap();
        assert_eq!(
            m.format_dump(),
            "STATE: 2 / 4 qubits allocated, 2 / 4 qubits free\n\
             0.612372 |0000> + 0.612372 |0010> + 0.353553 |0001> + 0.353553 |0011>"
        );
    }

    #[test]
    fn unallocated_gate_rejected() {
        let mut m = MachineState::new(4, 0).unwrap();
        assert_eq!(m.apply_primitive(&PrimitiveGate::h(0)), Err(MachineError::NotAllocated(0)));
    }

    #[test]
    fn deterministic_measurement() {
        let mut m = MachineState::new(4, 0).unwrap();
        let r = m.allocate_register(3).unwrap();
        m.prepare_basis(5).unwrap();
        assert_eq!(m.measure_register(&r).unwrap(), 5);
        assert!((m.amplitude(5).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlated_collapse() {
        for seed in 0..20 {
            let mut m = MachineState::new(2, seed).unwrap();
            let r = m.allocate_register(2).unwrap();
            m.apply_primitive(&PrimitiveGate::h(0)).unwrap();
            m.apply_primitive(&PrimitiveGate::x(1).controlled_by([0])).unwrap();
            let first = m.measure_register(&r.index(0).unwrap()).unwrap();
            let second = m.measure_register(&r.index(1).unwrap()).unwrap();
            assert_eq!(first, second);
            assert_eq!(m.measure_register(&r.index(0).unwrap()).unwrap(), first);
        }
    }

    #[test]
    fn reset_is_idempotent() {
        let mut m = MachineState::new(3, 0).unwrap();
        let r = m.allocate_register(3).unwrap();
        m.apply_primitive(&PrimitiveGate::h(0)).unwrap();
        m.apply_primitive(&PrimitiveGate::x(2)).unwrap();
        m.reset_state();
        let once = m.amplitudes().to_vec();
        m.reset_state();
        assert_eq!(once, m.amplitudes());
        assert!(m.is_empty_register(&r));
        assert_eq!(m.allocated_count(), 3);
    }

    #[test]
    fn emptiness() {
        let mut m = MachineState::new(2, 0).unwrap();
        let r = m.allocate_register(1).unwrap();
        assert!(m.is_empty_register(&r));
        m.apply_primitive(&PrimitiveGate::x(0)).unwrap();
        assert!(!m.is_empty_register(&r));
        m.apply_primitive(&PrimitiveGate::x(0)).unwrap();
        m.apply_primitive(&PrimitiveGate::h(0)).unwrap();
        m.apply_primitive(&PrimitiveGate::h(0)).unwrap();
        assert!(m.is_empty_register(&r));
    }

    #[test]
    fn nominal_size_exceeds_dense_width() {
        let mut m = MachineState::new(32, 0).unwrap();
        let r = m.allocate_register(6).unwrap();
        assert_eq!(m.width(), 6);
        m.apply_primitive(&PrimitiveGate::x(5)).unwrap();
        assert_eq!(m.amplitude(32).re, 1.0);
        m.apply_primitive(&PrimitiveGate::x(5)).unwrap();
        m.release_register(&r).unwrap();
        m.compact();
        assert_eq!(m.width(), 0);
        let mut small = MachineState::new(32, 0).unwrap().with_dense_limit(4);
        assert!(matches!(small.allocate_register(5), Err(MachineError::DenseLimit { .. })));
    }
}
