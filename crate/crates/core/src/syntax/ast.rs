//! Syntax tree for qclite programs.
//!
//! Positions are carried on statements and expressions for diagnostics but do
//! not take part in equality, so two trees compare equal when they have the
//! same structure.

use std::fmt;

#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub const fn new(line: usize, column: usize) -> Self {
        Pos { line, column }
    }
}

impl PartialEq for Pos {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Classical value types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassicalType {
    Int,
    Real,
    Complex,
    Boolean,
}

impl ClassicalType {
    pub fn keyword(self) -> &'static str {
        match self {
            ClassicalType::Int => "int",
            ClassicalType::Real => "real",
            ClassicalType::Complex => "complex",
            ClassicalType::Boolean => "boolean",
        }
    }
}

/// Quantum register types, ordered from least to most restrictive access.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuantumType {
    Qureg,
    Quconst,
    Quvoid,
    Quscratch,
}

impl QuantumType {
    pub fn keyword(self) -> &'static str {
        match self {
            QuantumType::Qureg => "qureg",
            QuantumType::Quconst => "quconst",
            QuantumType::Quvoid => "quvoid",
            QuantumType::Quscratch => "quscratch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamType {
    Classical(ClassicalType),
    Quantum(QuantumType),
}

impl fmt::Display for ParamType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamType::Classical(t) => f.write_str(t.keyword()),
            ParamType::Quantum(t) => f.write_str(t.keyword()),
        }
    }
}

/// Subroutine kinds, which double as calling-hierarchy levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubKind {
    Function = 0,
    Qufunct = 1,
    Operator = 2,
    Procedure = 3,
}

impl SubKind {
    pub fn level(self) -> u8 {
        self as u8
    }

    pub fn keyword(self) -> &'static str {
        match self {
            SubKind::Function => "function",
            SubKind::Qufunct => "qufunct",
            SubKind::Operator => "operator",
            SubKind::Procedure => "procedure",
        }
    }

    pub fn is_quantum(self) -> bool {
        matches!(self, SubKind::Qufunct | SubKind::Operator)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub ty: ParamType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubDecl {
    pub name: String,
    pub kind: SubKind,
    pub cond: bool,
    /// Only set for classical functions.
    pub return_type: Option<ClassicalType>,
    pub params: Vec<Param>,
    pub body: Block,
    pub pos: Pos,
}

impl SubDecl {
    pub fn has_scratch(&self) -> bool {
        self.params.iter().any(|p| p.ty == ParamType::Quantum(QuantumType::Quscratch))
    }
}

pub type Block = Vec<Stmt>;

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    /// `int x;`, `real y = 1.5;`
    VarDecl {
        ty: ClassicalType,
        name: String,
        init: Option<Expr>,
    },
    /// `const n = #q;`
    ConstDecl {
        name: String,
        value: Expr,
    },
    /// `qureg q[4];`
    RegAlloc {
        name: String,
        size: Expr,
    },
    /// `qureg r = q[0:1];`, `quconst c = a & b;`
    RegAlias {
        ty: QuantumType,
        name: String,
        value: Expr,
    },
    Assign {
        name: String,
        value: Expr,
    },
    Call {
        name: String,
        args: Vec<Expr>,
        invert: bool,
    },
    If {
        cond: Expr,
        then_block: Block,
        else_block: Option<Block>,
        /// Set by the static checker on quantum ifs whose branches change
        /// classical state.
        forking: bool,
    },
    For {
        var: String,
        from: Expr,
        to: Expr,
        step: Option<Expr>,
        body: Block,
    },
    While {
        cond: Expr,
        body: Block,
    },
    Measure {
        reg: Expr,
        target: Option<String>,
    },
    Reset,
    Dump,
    Print(Vec<Expr>),
    Return(Option<Expr>),
    Exit,
    Block(Block),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Not,
    Length,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Pow,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Xor,
    Concat,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Mod => "mod",
            BinaryOp::Pow => "^",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::And => "and",
            BinaryOp::Or => "or",
            BinaryOp::Xor => "xor",
            BinaryOp::Concat => "&",
        }
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::Xor => 2,
            BinaryOp::And => 3,
            BinaryOp::Eq | BinaryOp::Ne | BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => 4,
            BinaryOp::Concat => 5,
            BinaryOp::Add | BinaryOp::Sub => 6,
            BinaryOp::Mul | BinaryOp::Div | BinaryOp::Mod => 7,
            BinaryOp::Pow => 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Int(i64),
    Real(f64),
    /// `(re, im)`
    Complex(Box<Expr>, Box<Expr>),
    Var(String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Index(Box<Expr>, Box<Expr>),
    Slice(Box<Expr>, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Self {
        Expr { kind, pos }
    }
}

/// A top-level item: either a subroutine definition or a statement.
#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Sub(SubDecl),
    Stmt(Stmt),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SyntaxTree {
    pub items: Vec<Item>,
}

impl SyntaxTree {
    pub fn subroutines(&self) -> impl Iterator<Item = &SubDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Sub(s) => Some(s),
            Item::Stmt(_) => None,
        })
    }

    pub fn statements(&self) -> impl Iterator<Item = &Stmt> {
        self.items.iter().filter_map(|i| match i {
            Item::Stmt(s) => Some(s),
            Item::Sub(_) => None,
        })
    }
}
