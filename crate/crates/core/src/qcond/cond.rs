use std::collections::BTreeSet;
use std::fmt;

/// A boolean condition over machine qubits. Classical atoms are folded into
/// [`CondExpr::Const`] by the smart constructors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CondExpr {
    Const(bool),
    Qubit(usize),
    Not(Box<CondExpr>),
    And(Box<CondExpr>, Box<CondExpr>),
    Or(Box<CondExpr>, Box<CondExpr>),
    Xor(Box<CondExpr>, Box<CondExpr>),
}

impl CondExpr {
    pub fn qubit(q: usize) -> Self {
        CondExpr::Qubit(q)
    }

    /// Conjunction of all qubits (a register used as a condition).
    pub fn all(qubits: &[usize]) -> Self {
        qubits.iter().map(|&q| CondExpr::Qubit(q)).reduce(CondExpr::and).unwrap_or(CondExpr::Const(true))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: CondExpr) -> Self {
        match a {
            CondExpr::Const(v) => CondExpr::Const(!v),
            CondExpr::Not(inner) => *inner,
            a => CondExpr::Not(Box::new(a)),
        }
    }

    pub fn and(a: CondExpr, b: CondExpr) -> Self {
        match (a, b) {
            (CondExpr::Const(false), _) | (_, CondExpr::Const(false)) => CondExpr::Const(false),
            (CondExpr::Const(true), x) | (x, CondExpr::Const(true)) => x,
            (a, b) => CondExpr::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn or(a: CondExpr, b: CondExpr) -> Self {
        match (a, b) {
            (CondExpr::Const(true), _) | (_, CondExpr::Const(true)) => CondExpr::Const(true),
            (CondExpr::Const(false), x) | (x, CondExpr::Const(false)) => x,
            (a, b) => CondExpr::Or(Box::new(a), Box::new(b)),
        }
    }

    pub fn xor(a: CondExpr, b: CondExpr) -> Self {
        match (a, b) {
            (CondExpr::Const(false), x) | (x, CondExpr::Const(false)) => x,
            (CondExpr::Const(true), x) | (x, CondExpr::Const(true)) => CondExpr::not(x),
            (a, b) => CondExpr::Xor(Box::new(a), Box::new(b)),
        }
    }

    pub fn as_const(&self) -> Option<bool> {
        match self {
            CondExpr::Const(v) => Some(*v),
            _ => None,
        }
    }

    pub fn qubits(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_qubits(&mut out);
        out
    }

    fn collect_qubits(&self, out: &mut BTreeSet<usize>) {
        match self {
            CondExpr::Const(_) => {}
            CondExpr::Qubit(q) => {
                out.insert(*q);
            }
            CondExpr::Not(a) => a.collect_qubits(out),
            CondExpr::And(a, b) | CondExpr::Or(a, b) | CondExpr::Xor(a, b) => {
                a.collect_qubits(out);
                b.collect_qubits(out);
            }
        }
    }

    /// Evaluates the condition on a basis state (bit `k` of `basis` is
    /// qubit `k`).
    pub fn eval(&self, basis: u64) -> bool {
        match self {
            CondExpr::Const(v) => *v,
            CondExpr::Qubit(q) => (basis >> q) & 1 == 1,
            CondExpr::Not(a) => !a.eval(basis),
            CondExpr::And(a, b) => a.eval(basis) && b.eval(basis),
            CondExpr::Or(a, b) => a.eval(basis) || b.eval(basis),
            CondExpr::Xor(a, b) => a.eval(basis) != b.eval(basis),
        }
    }
}

impl fmt::Display for CondExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CondExpr::Const(v) => write!(f, "{v}"),
            CondExpr::Qubit(q) => write!(f, "#{q}"),
            CondExpr::Not(a) => write!(f, "not {a}"),
            CondExpr::And(a, b) => write!(f, "({a} and {b})"),
            CondExpr::Or(a, b) => write!(f, "({a} or {b})"),
            CondExpr::Xor(a, b) => write!(f, "({a} xor {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_fold() {
        let a = CondExpr::qubit(0);
        assert_eq!(CondExpr::and(a.clone(), CondExpr::Const(true)), a);
        assert_eq!(CondExpr::and(a.clone(), CondExpr::Const(false)), CondExpr::Const(false));
        assert_eq!(CondExpr::or(CondExpr::Const(false), a.clone()), a);
        assert_eq!(CondExpr::xor(a.clone(), CondExpr::Const(true)), CondExpr::not(a.clone()));
        assert_eq!(CondExpr::not(CondExpr::not(a.clone())), a);
    }

    #[test]
    fn register_condition_is_conjunction() {
        let c = CondExpr::all(&[1, 3]);
        assert!(c.eval(0b1010));
        assert!(!c.eval(0b0010));
        assert_eq!(c.qubits().into_iter().collect::<Vec<_>>(), vec![1, 3]);
    }
}
