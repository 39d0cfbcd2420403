use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    H,
    /// Real rotation by `θ` radians.
    Rot(f64),
    /// Phase factor `e^{iφ}`; has no target qubit.
    Phase(f64),
}

/// A single gate with a (possibly empty) conjunctive control set.
///
/// The gate acts only on basis states whose control bits are all 1. A phase
/// gate with no controls multiplies the whole state by `e^{iφ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveGate {
    pub kind: GateKind,
    pub target: Option<usize>,
    /// Sorted, without duplicates.
    pub controls: Vec<usize>,
}

impl PrimitiveGate {
    pub fn x(target: usize) -> Self {
        Self::single(GateKind::X, target)
    }

    pub fn h(target: usize) -> Self {
        Self::single(GateKind::H, target)
    }

    pub fn rot(theta: f64, target: usize) -> Self {
        Self::single(GateKind::Rot(theta), target)
    }

    pub fn phase(phi: f64) -> Self {
        PrimitiveGate { kind: GateKind::Phase(phi), target: None, controls: Vec::new() }
    }

    fn single(kind: GateKind, target: usize) -> Self {
        PrimitiveGate { kind, target: Some(target), controls: Vec::new() }
    }

    /// Adds controls; duplicates are merged.
    pub fn controlled_by(mut self, controls: impl IntoIterator<Item = usize>) -> Self {
        self.controls.extend(controls);
        self.controls.sort_unstable();
        self.controls.dedup();
        self
    }

    pub fn adjoint(&self) -> Self {
        let kind = match self.kind {
            GateKind::X => GateKind::X,
            GateKind::H => GateKind::H,
            GateKind::Rot(t) => GateKind::Rot(-t),
            GateKind::Phase(p) => GateKind::Phase(-p),
        };
        PrimitiveGate { kind, target: self.target, controls: self.controls.clone() }
    }

    /// Every machine qubit the gate reads or writes.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.target.into_iter().chain(self.controls.iter().copied())
    }

    pub fn control_mask(&self) -> usize {
        self.controls.iter().fold(0, |m, &c| m | (1usize << c))
    }

    /// Returns the gate with every qubit index passed through `map`.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Self {
        let mut controls: Vec<usize> = self.controls.iter().map(|&c| map(c)).collect();
        controls.sort_unstable();
        PrimitiveGate { kind: self.kind, target: self.target.map(&map), controls }
    }

    /// The 2×2 matrix `[[m00, m01], [m10, m11]]` acting on the target's
    /// amplitude pair `(|0⟩, |1⟩)`.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let c = |re: f64| Complex64::new(re, 0.0);
        match self.kind {
            GateKind::X => [[c(0.0), c(1.0)], [c(1.0), c(0.0)]],
            GateKind::H => [[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)], [c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)]],
            GateKind::Rot(theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                [[c(co), c(s)], [c(-s), c(co)]]
            }
            GateKind::Phase(phi) => {
                let p = Complex64::from_polar(1.0, phi);
                [[p, c(0.0)], [c(0.0), p]]
            }
        }
    }

    /// Applies the gate in place to a dense amplitude vector whose index bit
    /// `k` is qubit `k`. Every qubit of the gate must be below
    /// `log2(amps.len())`.
    pub fn apply_to(&self, amps: &mut [Complex64]) {
        let cmask = self.control_mask();
        match (self.kind, self.target) {
            (GateKind::Phase(phi), _) => {
                let p = Complex64::from_polar(1.0, phi);
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & cmask == cmask {
                        *a *= p;
                    }
                }
            }
            (GateKind::X, Some(t)) => {
                let bit = 1usize << t;
                for i in 0..amps.len() {
                    if i & bit == 0 && i & cmask == cmask {
                        amps.swap(i, i | bit);
                    }
                }
            }
            (_, Some(t)) => {
                let [[m00, m01], [m10, m11]] = self.matrix();
                let bit = 1usize << t;
                for i in 0..amps.len() {
                    if i & bit == 0 && i & cmask == cmask {
                        let (a0, a1) = (amps[i], amps[i | bit]);
                        amps[i] = m00 * a0 + m01 * a1;
                        amps[i | bit] = m10 * a0 + m11 * a1;
                    }
                }
            }
            (_, None) => unreachable!("non-phase gate without a target"),
        }
    }
}

impl fmt::Display for PrimitiveGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::X => f.write_str("X")?,
            GateKind::H => f.write_str("H")?,
            GateKind::Rot(t) => write!(f, "ROT({t})")?,
            GateKind::Phase(p) => write!(f, "PHASE({p})")?,
        }
        if let Some(t) = self.target {
            write!(f, " {t}")?;
        }
        if !self.controls.is_empty() {
            write!(f, " if {:?}", self.controls)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn basis(n: usize, k: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
        v[k] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn rot_convention() {
        let mut v = basis(1, 0);
        PrimitiveGate::rot(-PI / 3.0, 0).apply_to(&mut v);
        assert!((v[0].re - (PI / 6.0).cos()).abs() < 1e-12);
        assert!((v[1].re - (PI / 6.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn unsatisfied_control_is_identity() {
        let mut v = basis(2, 0);
        PrimitiveGate::x(0).controlled_by([1]).apply_to(&mut v);
        assert_eq!(v, basis(2, 0));
        let mut v = basis(2, 2);
        PrimitiveGate::x(0).controlled_by([1]).apply_to(&mut v);
        assert_eq!(v, basis(2, 3));
    }

    #[test]
    fn global_phase_keeps_norm() {
        let mut v = basis(2, 1);
        PrimitiveGate::h(1).apply_to(&mut v);
        PrimitiveGate::phase(0.7).apply_to(&mut v);
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!((v[1] - Complex64::from_polar(FRAC_1_SQRT_2, 0.7)).norm() < 1e-12);
    }

    #[test]
    fn adjoint_negates_angles() {
        assert_eq!(PrimitiveGate::rot(0.3, 1).adjoint(), PrimitiveGate::rot(-0.3, 1));
        assert_eq!(PrimitiveGate::phase(0.3).adjoint(), PrimitiveGate::phase(-0.3));
        let h = PrimitiveGate::h(0).controlled_by([2]);
        assert_eq!(h.adjoint(), h);
    }
}
