use std::fmt;

use num_complex::Complex64;

use crate::machine::{format_real, RegisterMap};
use crate::qcond::CondExpr;
use crate::syntax::{ClassicalType, QuantumType};

/// A runtime value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Complex(Complex64),
    Bool(bool),
    Reg(RegisterMap, QuantumType),
    /// A quantum condition; only produced while evaluating `if` guards.
    Cond(CondExpr),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "int",
            Value::Real(_) => "real",
            Value::Complex(_) => "complex",
            Value::Bool(_) => "boolean",
            Value::Reg(_, t) => t.keyword(),
            Value::Cond(_) => "quantum condition",
        }
    }

    /// Converts to `ty`, widening int to real to complex.
    pub fn coerce(self, ty: ClassicalType) -> Option<Value> {
        Some(match (self, ty) {
            (v @ Value::Int(_), ClassicalType::Int) => v,
            (Value::Int(i), ClassicalType::Real) => Value::Real(i as f64),
            (v @ Value::Real(_), ClassicalType::Real) => v,
            (Value::Int(i), ClassicalType::Complex) => Value::Complex(Complex64::new(i as f64, 0.0)),
            (Value::Real(r), ClassicalType::Complex) => Value::Complex(Complex64::new(r, 0.0)),
            (v @ Value::Complex(_), ClassicalType::Complex) => v,
            (v @ Value::Bool(_), ClassicalType::Boolean) => v,
            _ => return None,
        })
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Real(r) => Some(*r),
            _ => None,
        }
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match self {
            Value::Complex(c) => Some(*c),
            v => v.as_real().map(|r| Complex64::new(r, 0.0)),
        }
    }

    pub fn as_reg(&self) -> Option<&RegisterMap> {
        match self {
            Value::Reg(r, _) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Real(r) => f.write_str(&format_real(*r)),
            Value::Complex(c) => write!(f, "({},{})", format_real(c.re), format_real(c.im)),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Reg(r, _) => write!(f, "{r}"),
            Value::Cond(c) => write!(f, "{c}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widening() {
        assert_eq!(Value::Int(2).coerce(ClassicalType::Real), Some(Value::Real(2.0)));
        assert_eq!(Value::Real(2.5).coerce(ClassicalType::Int), None);
        assert_eq!(Value::Bool(true).coerce(ClassicalType::Int), None);
    }

    #[test]
    fn printing() {
        assert_eq!(Value::Real(0.5).to_string(), "0.5");
        assert_eq!(Value::Complex(Complex64::new(1.0, -0.5)).to_string(), "(1,-0.5)");
        assert_eq!(Value::Bool(false).to_string(), "false");
    }
}
