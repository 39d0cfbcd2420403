use num_complex::Complex64;
use rand::Rng;

use crate::machine::RegisterMap;
use crate::qcond::CondExpr;
use crate::syntax::{BinaryOp, Expr, ExprKind, Pos, UnaryOp};

use super::check::concat_type;
use super::{Binding, Fault, Interpreter, RuntimeError, Value};

type Res<T> = Result<T, RuntimeError>;

impl Interpreter {
    pub(super) fn eval(&mut self, e: &Expr) -> Res<Value> {
        let pos = e.pos;
        match &e.kind {
            ExprKind::Int(i) => Ok(Value::Int(*i)),
            ExprKind::Real(r) => Ok(Value::Real(*r)),
            ExprKind::Complex(re, im) => {
                let re = self.eval_real(re)?;
                let im = self.eval_real(im)?;
                Ok(Value::Complex(Complex64::new(re, im)))
            }
            ExprKind::Var(name) => match self.lookup(name) {
                Some(Binding::Var(_, v) | Binding::Const(v)) => Ok(v.clone()),
                Some(Binding::Reg(r, q)) => Ok(Value::Reg(r.clone(), *q)),
                None => match name.as_str() {
                    "pi" => Ok(Value::Real(std::f64::consts::PI)),
                    "true" => Ok(Value::Bool(true)),
                    "false" => Ok(Value::Bool(false)),
                    _ => Err(Fault::Undefined(name.clone()).at(pos)),
                },
            },
            ExprKind::Unary(op, a) => {
                let v = self.eval(a)?;
                unary(*op, v).map_err(|f| f.at(pos))
            }
            ExprKind::Binary(op, a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                binary(*op, x, y).map_err(|f| f.at(pos))
            }
            ExprKind::Index(base, i) => {
                let (r, q) = self.eval_reg_typed(base)?;
                let i = self.eval_int(i)?;
                Ok(Value::Reg(r.index(i).map_err(|e| Fault::from(e).at(pos))?, q))
            }
            ExprKind::Slice(base, from, to) => {
                let (r, q) = self.eval_reg_typed(base)?;
                let from = self.eval_int(from)?;
                let to = self.eval_int(to)?;
                Ok(Value::Reg(r.slice(from, to).map_err(|e| Fault::from(e).at(pos))?, q))
            }
            ExprKind::Call(name, args) => self
                .call(name, args, false, pos)?
                .ok_or_else(|| Fault::Type(format!("`{name}` does not return a value")).at(pos)),
        }
    }

    pub(super) fn eval_int(&mut self, e: &Expr) -> Res<i64> {
        let v = self.eval(e)?;
        v.as_int().ok_or_else(|| Fault::Type(format!("expected an int, found {}", v.type_name())).at(e.pos))
    }

    fn eval_real(&mut self, e: &Expr) -> Res<f64> {
        let v = self.eval(e)?;
        v.as_real().ok_or_else(|| Fault::Type(format!("expected a real, found {}", v.type_name())).at(e.pos))
    }

    pub(super) fn eval_reg(&mut self, e: &Expr) -> Res<RegisterMap> {
        self.eval_reg_typed(e).map(|(r, _)| r)
    }

    fn eval_reg_typed(&mut self, e: &Expr) -> Res<(RegisterMap, crate::syntax::QuantumType)> {
        match self.eval(e)? {
            Value::Reg(r, q) => Ok((r, q)),
            v => Err(Fault::Type(format!("expected a register, found {}", v.type_name())).at(e.pos)),
        }
    }

    /// Evaluates an `if` guard. Classical guards become constants; a
    /// register stands for the conjunction of its qubits.
    pub(super) fn eval_condition(&mut self, e: &Expr) -> Res<CondExpr> {
        match &e.kind {
            ExprKind::Unary(UnaryOp::Not, a) => Ok(CondExpr::not(self.eval_condition(a)?)),
            ExprKind::Binary(op @ (BinaryOp::And | BinaryOp::Or | BinaryOp::Xor), a, b) => {
                let x = self.eval_condition(a)?;
                let y = self.eval_condition(b)?;
                Ok(match op {
                    BinaryOp::And => CondExpr::and(x, y),
                    BinaryOp::Or => CondExpr::or(x, y),
                    _ => CondExpr::xor(x, y),
                })
            }
            _ => match self.eval(e)? {
                Value::Bool(b) => Ok(CondExpr::Const(b)),
                Value::Reg(r, _) => Ok(CondExpr::all(r.qubits())),
                Value::Cond(c) => Ok(c),
                v => Err(Fault::Type(format!("condition is {}, not boolean", v.type_name())).at(e.pos)),
            },
        }
    }

    pub(super) fn math(&mut self, name: &str, args: &[Expr], pos: Pos) -> Res<Value> {
        if name == "random" {
            return Ok(Value::Real(self.machine.rng().random::<f64>()));
        }
        let [arg] = args else {
            return Err(Fault::Type(format!("`{name}` takes 1 argument")).at(pos));
        };
        let v = self.eval(arg)?;
        let real = || {
            v.as_real().ok_or_else(|| Fault::Type(format!("`{name}` expects a real, found {}", v.type_name())).at(pos))
        };
        Ok(match name {
            "abs" => match v {
                Value::Int(i) => Value::Int(i.checked_abs().ok_or_else(|| Fault::Overflow.at(pos))?),
                Value::Real(r) => Value::Real(r.abs()),
                Value::Complex(c) => Value::Real(c.norm()),
                _ => return Err(Fault::Type(format!("`abs` expects a number, found {}", v.type_name())).at(pos)),
            },
            "floor" => Value::Int(to_int(real()?.floor()).ok_or_else(|| Fault::Overflow.at(pos))?),
            "ceil" => Value::Int(to_int(real()?.ceil()).ok_or_else(|| Fault::Overflow.at(pos))?),
            "sin" => Value::Real(real()?.sin()),
            "cos" => Value::Real(real()?.cos()),
            "tan" => Value::Real(real()?.tan()),
            "exp" => Value::Real(real()?.exp()),
            "log" => Value::Real(real()?.ln()),
            "sqrt" => Value::Real(real()?.sqrt()),
            _ => return Err(Fault::Undefined(name.to_string()).at(pos)),
        })
    }
}

fn to_int(r: f64) -> Option<i64> {
    (r.is_finite() && r >= i64::MIN as f64 && r < i64::MAX as f64).then_some(r as i64)
}

fn type_error(op: &str, a: &Value, b: &Value) -> Fault {
    Fault::Type(format!("`{op}` cannot be applied to {} and {}", a.type_name(), b.type_name()))
}

fn unary(op: UnaryOp, v: Value) -> Result<Value, Fault> {
    Ok(match (op, v) {
        (UnaryOp::Neg, Value::Int(i)) => Value::Int(i.checked_neg().ok_or(Fault::Overflow)?),
        (UnaryOp::Neg, Value::Real(r)) => Value::Real(-r),
        (UnaryOp::Neg, Value::Complex(c)) => Value::Complex(-c),
        (UnaryOp::Not, Value::Bool(b)) => Value::Bool(!b),
        (UnaryOp::Not, Value::Reg(r, _)) => Value::Cond(CondExpr::not(CondExpr::all(r.qubits()))),
        (UnaryOp::Not, Value::Cond(c)) => Value::Cond(CondExpr::not(c)),
        (UnaryOp::Length, Value::Reg(r, _)) => Value::Int(r.len() as i64),
        (op, v) => {
            let sym = match op {
                UnaryOp::Neg => "-",
                UnaryOp::Not => "not",
                UnaryOp::Length => "#",
            };
            return Err(Fault::Type(format!("`{sym}` cannot be applied to {}", v.type_name())));
        }
    })
}

fn as_cond(v: &Value) -> Option<CondExpr> {
    match v {
        Value::Bool(b) => Some(CondExpr::Const(*b)),
        Value::Reg(r, _) => Some(CondExpr::all(r.qubits())),
        Value::Cond(c) => Some(c.clone()),
        _ => None,
    }
}

/// Numeric rank: 0 int, 1 real, 2 complex.
fn rank(v: &Value) -> Option<u8> {
    match v {
        Value::Int(_) => Some(0),
        Value::Real(_) => Some(1),
        Value::Complex(_) => Some(2),
        _ => None,
    }
}

pub(super) fn binary(op: BinaryOp, a: Value, b: Value) -> Result<Value, Fault> {
    use BinaryOp::*;
    match op {
        Add | Sub | Mul | Div | Pow => arith(op, a, b),
        Mod => match (a, b) {
            (Value::Int(_), Value::Int(0)) => Err(Fault::DivisionByZero),
            (Value::Int(x), Value::Int(y)) => Ok(Value::Int(x.checked_rem_euclid(y).ok_or(Fault::Overflow)?)),
            (a, b) => Err(type_error("mod", &a, &b)),
        },
        Eq | Ne => {
            let same = match (&a, &b) {
                (Value::Bool(x), Value::Bool(y)) => x == y,
                _ => match (rank(&a), rank(&b)) {
                    (Some(0), Some(0)) => a.as_int() == b.as_int(),
                    (Some(_), Some(_)) => a.as_complex() == b.as_complex(),
                    _ => return Err(type_error(op.symbol(), &a, &b)),
                },
            };
            Ok(Value::Bool(same == (op == Eq)))
        }
        Lt | Le | Gt | Ge => {
            let ord = match (&a, &b) {
                (Value::Int(x), Value::Int(y)) => x.partial_cmp(y),
                (Value::Int(_) | Value::Real(_), Value::Int(_) | Value::Real(_)) => {
                    a.as_real().unwrap_or_default().partial_cmp(&b.as_real().unwrap_or_default())
                }
                _ => return Err(type_error(op.symbol(), &a, &b)),
            };
            let Some(ord) = ord else { return Ok(Value::Bool(false)) };
            Ok(Value::Bool(match op {
                Lt => ord.is_lt(),
                Le => ord.is_le(),
                Gt => ord.is_gt(),
                _ => ord.is_ge(),
            }))
        }
        And | Or | Xor => match (&a, &b) {
            (Value::Bool(x), Value::Bool(y)) => Ok(Value::Bool(match op {
                And => *x && *y,
                Or => *x || *y,
                _ => x != y,
            })),
            _ => match (as_cond(&a), as_cond(&b)) {
                (Some(x), Some(y)) => Ok(Value::Cond(match op {
                    And => CondExpr::and(x, y),
                    Or => CondExpr::or(x, y),
                    _ => CondExpr::xor(x, y),
                })),
                _ => Err(type_error(op.symbol(), &a, &b)),
            },
        },
        Concat => match (&a, &b) {
            (Value::Reg(x, p), Value::Reg(y, q)) => Ok(Value::Reg(x.concat(y)?, concat_type(*p, *q))),
            _ => Err(type_error("&", &a, &b)),
        },
    }
}

fn arith(op: BinaryOp, a: Value, b: Value) -> Result<Value, Fault> {
    use BinaryOp::*;
    let (ra, rb) = match (rank(&a), rank(&b)) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(type_error(op.symbol(), &a, &b)),
    };
    if let (Value::Int(x), Value::Int(y)) = (&a, &b) {
        let (x, y) = (*x, *y);
        return match op {
            Add => x.checked_add(y).map(Value::Int).ok_or(Fault::Overflow),
            Sub => x.checked_sub(y).map(Value::Int).ok_or(Fault::Overflow),
            Mul => x.checked_mul(y).map(Value::Int).ok_or(Fault::Overflow),
            Div if y == 0 => Err(Fault::DivisionByZero),
            Div => x.checked_div(y).map(Value::Int).ok_or(Fault::Overflow),
            _ if y < 0 => Ok(Value::Real((x as f64).powf(y as f64))),
            _ => {
                let e = u32::try_from(y).map_err(|_| Fault::Overflow)?;
                x.checked_pow(e).map(Value::Int).ok_or(Fault::Overflow)
            }
        };
    }
    if ra.max(rb) == 1 {
        let (x, y) = (a.as_real().unwrap_or_default(), b.as_real().unwrap_or_default());
        return Ok(Value::Real(match op {
            Add => x + y,
            Sub => x - y,
            Mul => x * y,
            Div if y == 0.0 => return Err(Fault::DivisionByZero),
            Div => x / y,
            _ => x.powf(y),
        }));
    }
    let (x, y) = (a.as_complex().unwrap_or_default(), b.as_complex().unwrap_or_default());
    Ok(Value::Complex(match op {
        Add => x + y,
        Sub => x - y,
        Mul => x * y,
        Div if y == Complex64::new(0.0, 0.0) => return Err(Fault::DivisionByZero),
        Div => x / y,
        _ => x.powc(y),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_arithmetic() {
        assert_eq!(binary(BinaryOp::Div, Value::Int(7), Value::Int(2)), Ok(Value::Int(3)));
        assert_eq!(binary(BinaryOp::Div, Value::Int(-7), Value::Int(2)), Ok(Value::Int(-3)));
        assert_eq!(binary(BinaryOp::Mod, Value::Int(-7), Value::Int(3)), Ok(Value::Int(2)));
        assert_eq!(binary(BinaryOp::Pow, Value::Int(2), Value::Int(10)), Ok(Value::Int(1024)));
        assert_eq!(binary(BinaryOp::Pow, Value::Int(2), Value::Int(-1)), Ok(Value::Real(0.5)));
        assert_eq!(binary(BinaryOp::Div, Value::Int(1), Value::Int(0)), Err(Fault::DivisionByZero));
        assert_eq!(binary(BinaryOp::Mul, Value::Int(i64::MAX), Value::Int(2)), Err(Fault::Overflow));
    }

    #[test]
    fn widening_arithmetic() {
        assert_eq!(binary(BinaryOp::Add, Value::Int(1), Value::Real(0.5)), Ok(Value::Real(1.5)));
        assert_eq!(
            binary(BinaryOp::Mul, Value::Complex(Complex64::new(0.0, 1.0)), Value::Complex(Complex64::new(0.0, 1.0))),
            Ok(Value::Complex(Complex64::new(-1.0, 0.0)))
        );
        assert_eq!(binary(BinaryOp::Eq, Value::Int(2), Value::Real(2.0)), Ok(Value::Bool(true)));
        assert_eq!(binary(BinaryOp::Lt, Value::Real(1.5), Value::Int(2)), Ok(Value::Bool(true)));
    }

    #[test]
    fn register_conditions() {
        let r = RegisterMap::new(vec![0, 1]).unwrap();
        let q = crate::syntax::QuantumType::Qureg;
        let v = binary(BinaryOp::And, Value::Reg(r, q), Value::Bool(true)).unwrap();
        assert_eq!(v, Value::Cond(CondExpr::and(CondExpr::qubit(0), CondExpr::qubit(1))));
    }
}
