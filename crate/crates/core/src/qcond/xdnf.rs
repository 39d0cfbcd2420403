use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use super::CondExpr;

/// A product of distinct qubits. The empty monomial is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut q: Vec<usize> = qubits.into_iter().collect();
        q.sort_unstable();
        q.dedup();
        Monomial(q)
    }

    pub fn qubits(&self) -> &[usize] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Since `x·x = x`, the product is the union.
    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.0.iter().chain(&other.0).copied())
    }

    pub fn eval(&self, basis: u64) -> bool {
        self.0.iter().all(|q| (basis >> q) & 1 == 1)
    }
}

/// Smaller monomials first, then lexicographic.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A boolean function as an XOR of monomials over GF(2).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ZhegalkinPoly {
    terms: BTreeSet<Monomial>,
}

impl ZhegalkinPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one())
    }

    pub fn constant(v: bool) -> Self {
        if v {
            Self::one()
        } else {
            Self::zero()
        }
    }

    pub fn monomial(m: Monomial) -> Self {
        ZhegalkinPoly { terms: BTreeSet::from([m]) }
    }

    /// The constant term.
    pub fn constant_term(&self) -> bool {
        self.terms.contains(&Monomial::one())
    }

    /// Non-constant monomials in canonical order.
    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter().filter(|m| !m.is_one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term()
    }

    pub fn xor(&self, other: &ZhegalkinPoly) -> ZhegalkinPoly {
        ZhegalkinPoly { terms: self.terms.symmetric_difference(&other.terms).cloned().collect() }
    }

    pub fn and(&self, other: &ZhegalkinPoly) -> ZhegalkinPoly {
        let mut terms = BTreeSet::new();
        for a in &self.terms {
            for b in &other.terms {
                let p = a.times(b);
                if !terms.remove(&p) {
                    terms.insert(p);
                }
            }
        }
        ZhegalkinPoly { terms }
    }

    pub fn not(&self) -> ZhegalkinPoly {
        self.xor(&ZhegalkinPoly::one())
    }

    pub fn or(&self, other: &ZhegalkinPoly) -> ZhegalkinPoly {
        self.xor(other).xor(&self.and(other))
    }

    pub fn eval(&self, basis: u64) -> bool {
        self.terms.iter().filter(|m| m.eval(basis)).count() % 2 == 1
    }

    pub fn qubits(&self) -> BTreeSet<usize> {
        self.terms.iter().flat_map(|m| m.0.iter().copied()).collect()
    }
}

impl fmt::Display for ZhegalkinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ^ ")?;
            }
            if m.is_one() {
                f.write_str("1")?;
            } else {
                let names: Vec<String> = m.0.iter().map(|q| format!("#{q}")).collect();
                f.write_str(&names.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Converts a condition to its exclusive disjunctive normal form.
pub fn to_xdnf(cond: &CondExpr) -> ZhegalkinPoly {
    match cond {
        CondExpr::Const(v) => ZhegalkinPoly::constant(*v),
        CondExpr::Qubit(q) => ZhegalkinPoly::monomial(Monomial::new([*q])),
        CondExpr::Not(a) => to_xdnf(a).not(),
        CondExpr::And(a, b) => to_xdnf(a).and(&to_xdnf(b)),
        CondExpr::Or(a, b) => to_xdnf(a).or(&to_xdnf(b)),
        CondExpr::Xor(a, b) => to_xdnf(a).xor(&to_xdnf(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(i: usize) -> CondExpr {
        CondExpr::qubit(i)
    }

    fn mono(qs: &[usize]) -> Monomial {
        Monomial::new(qs.iter().copied())
    }

    #[test]
    fn conjunction_is_one_monomial() {
        let p = to_xdnf(&CondExpr::and(q(0), q(1)));
        assert!(!p.constant_term());
        assert_eq!(p.monomials().cloned().collect::<Vec<_>>(), vec![mono(&[0, 1])]);
    }

    #[test]
    fn disjunction() {
        let p = to_xdnf(&CondExpr::or(q(0), q(1)));
        assert!(!p.constant_term());
        assert_eq!(p.monomials().cloned().collect::<Vec<_>>(), vec![mono(&[0]), mono(&[1]), mono(&[0, 1])]);
        let n = to_xdnf(&CondExpr::not(CondExpr::or(q(0), q(1))));
        assert!(n.constant_term());
        assert_eq!(n.monomials().count(), 3);
        for b in 0..4 {
            assert_eq!(p.eval(b), b != 0);
            assert_eq!(n.eval(b), b == 0);
        }
    }

    #[test]
    fn cancellation() {
        assert!(to_xdnf(&CondExpr::xor(q(2), q(2))).is_zero());
        assert!(to_xdnf(&CondExpr::and(q(2), CondExpr::not(q(2)))).is_zero());
        assert!(to_xdnf(&CondExpr::or(q(2), CondExpr::not(q(2)))).is_one());
    }

    fn arb_cond() -> impl Strategy<Value = CondExpr> {
        let leaf = prop_oneof![(0usize..5).prop_map(CondExpr::Qubit), any::<bool>().prop_map(CondExpr::Const)];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| CondExpr::Not(Box::new(a))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| CondExpr::And(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| CondExpr::Or(Box::new(a), Box::new(b))),
                (inner.clone(), inner).prop_map(|(a, b)| CondExpr::Xor(Box::new(a), Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn xdnf_matches_truth_table(c in arb_cond()) {
            let p = to_xdnf(&c);
            for basis in 0..32u64 {
                prop_assert_eq!(p.eval(basis), c.eval(basis));
            }
        }

        #[test]
        fn xdnf_is_canonical(c in arb_cond()) {
            // Equal functions give equal polynomials: compare against the
            // expansion of the truth table itself.
            let mut table = ZhegalkinPoly::zero();
            for basis in 0..32u64 {
                if c.eval(basis) {
                    let mut minterm = ZhegalkinPoly::one();
                    for bit in 0..5 {
                        let lit = ZhegalkinPoly::monomial(Monomial::new([bit]));
                        minterm = minterm.and(&if (basis >> bit) & 1 == 1 { lit } else { lit.not() });
                    }
                    table = table.xor(&minterm);
                }
            }
            prop_assert_eq!(to_xdnf(&c), table);
        }
    }
}
