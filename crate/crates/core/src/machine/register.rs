use std::fmt;

use super::MachineError;

/// An ordered sequence of distinct qubit positions. Position 0 is the
/// register's least significant qubit.
///
/// The reordering onto machine qubits is never materialized as a matrix;
/// gates address machine qubits through this mapping directly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegisterMap {
    qubits: Vec<usize>,
}

impl RegisterMap {
    pub fn new(qubits: Vec<usize>) -> Result<Self, MachineError> {
        if qubits.is_empty() {
            return Err(MachineError::EmptyRequest);
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(MachineError::Overlap(*q));
            }
        }
        Ok(RegisterMap { qubits })
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn qubit(&self, position: usize) -> usize {
        self.qubits[position]
    }

    /// `q[i]`
    pub fn index(&self, i: i64) -> Result<RegisterMap, MachineError> {
        let pos = self.position(i)?;
        Ok(RegisterMap { qubits: vec![self.qubits[pos]] })
    }

    /// `q[a:b]`, inclusive on both ends.
    pub fn slice(&self, from: i64, to: i64) -> Result<RegisterMap, MachineError> {
        if from > to {
            return Err(MachineError::BadSlice { from, to, len: self.len() });
        }
        let a = self.position(from).map_err(|_| MachineError::BadSlice { from, to, len: self.len() })?;
        let b = self.position(to).map_err(|_| MachineError::BadSlice { from, to, len: self.len() })?;
        Ok(RegisterMap { qubits: self.qubits[a..=b].to_vec() })
    }

    /// `a & b`: the qubits of `self` followed by those of `other`.
    pub fn concat(&self, other: &RegisterMap) -> Result<RegisterMap, MachineError> {
        if let Some(q) = self.overlap(other) {
            return Err(MachineError::Overlap(q));
        }
        let mut qubits = self.qubits.clone();
        qubits.extend_from_slice(&other.qubits);
        Ok(RegisterMap { qubits })
    }

    pub fn overlap(&self, other: &RegisterMap) -> Option<usize> {
        self.qubits.iter().copied().find(|q| other.qubits.contains(q))
    }

    /// Bit mask over machine basis indices covering this register.
    pub fn mask(&self) -> usize {
        self.qubits.iter().fold(0, |m, &q| m | (1usize << q))
    }

    /// The register's value in the machine basis state `index`.
    pub fn value_in(&self, index: usize) -> u64 {
        self.qubits.iter().enumerate().fold(0, |v, (pos, &q)| v | ((((index >> q) & 1) as u64) << pos))
    }

    /// The machine basis bits that encode `value` in this register.
    pub fn bits_for(&self, value: u64) -> usize {
        self.qubits.iter().enumerate().fold(0, |m, (pos, &q)| m | ((((value >> pos) & 1) as usize) << q))
    }

    fn position(&self, i: i64) -> Result<usize, MachineError> {
        if i < 0 || i as usize >= self.len() {
            return Err(MachineError::OutOfRange { index: i, len: self.len() });
        }
        Ok(i as usize)
    }
}

impl fmt::Display for RegisterMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, q) in self.qubits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str(">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg(q: &[usize]) -> RegisterMap {
        RegisterMap::new(q.to_vec()).unwrap()
    }

    #[test]
    fn derived_registers() {
        let q = reg(&[3, 4, 5, 6]);
        assert_eq!(q.slice(0, 2).unwrap().qubits(), &[3, 4, 5]);
        assert_eq!(q.index(1).unwrap().qubits(), &[4]);
        assert_eq!(reg(&[5]).concat(&reg(&[4])).unwrap().qubits(), &[5, 4]);
    }

    #[test]
    fn bounds_and_overlap() {
        let q = reg(&[0, 1]);
        assert!(matches!(q.index(2), Err(MachineError::OutOfRange { .. })));
        assert!(matches!(q.index(-1), Err(MachineError::OutOfRange { .. })));
        assert!(matches!(q.slice(1, 0), Err(MachineError::BadSlice { .. })));
        assert!(matches!(q.slice(0, 2), Err(MachineError::BadSlice { .. })));
        assert_eq!(q.concat(&reg(&[1])), Err(MachineError::Overlap(1)));
        assert_eq!(RegisterMap::new(vec![2, 2]), Err(MachineError::Overlap(2)));
        assert_eq!(RegisterMap::new(vec![]), Err(MachineError::EmptyRequest));
    }

    #[test]
    fn value_encoding() {
        let r = reg(&[5, 2]);
        let bits = r.bits_for(0b10);
        assert_eq!(bits, 1 << 2);
        assert_eq!(r.value_in(bits | 1), 0b10);
        assert_eq!(r.mask(), (1 << 5) | (1 << 2));
    }
}
