//! Static semantics: name resolution, typing, the calling hierarchy and the
//! restrictions on operator bodies, quantum parameters and quantum ifs.
//!
//! The checker also marks forking if-statements in the tree.

use std::collections::HashMap;
use std::fmt;

use crate::stdgates::Builtin;
use crate::syntax::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StaticRule {
    /// Calls may only go to the same or a lower subroutine level.
    Hierarchy,
    /// Operators, qufuncts and functions may not use global variables.
    GlobalState,
    /// `random()` outside procedures.
    Random,
    /// `measure` or `reset` outside procedures.
    NonUnitary,
    /// `print` or `dump` outside procedures.
    SideEffect,
    /// Qufuncts may only call permutation-level routines.
    QufunctGate,
    /// A `quconst` register passed where it could be modified.
    QuconstTarget,
    /// `quvoid`/`quscratch` in a position where they have no meaning.
    QuantumParam,
    /// Quantum-if bodies and `cond` routines may only call `cond` routines.
    CondRequired,
    /// Forking if-statements outside operator and qufunct definitions.
    ForkPlacement,
    Name,
    Type,
}

impl StaticRule {
    pub fn describe(self) -> &'static str {
        match self {
            StaticRule::Hierarchy => "calling hierarchy",
            StaticRule::GlobalState => "global state",
            StaticRule::Random => "random",
            StaticRule::NonUnitary => "non-unitary operation",
            StaticRule::SideEffect => "side effect",
            StaticRule::QufunctGate => "qufunct gate restriction",
            StaticRule::QuconstTarget => "quconst target",
            StaticRule::QuantumParam => "quantum parameter",
            StaticRule::CondRequired => "cond requirement",
            StaticRule::ForkPlacement => "fork placement",
            StaticRule::Name => "name",
            StaticRule::Type => "type",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaticError {
    pub rule: StaticRule,
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for StaticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error at {}: {} [{}]", self.pos, self.message, self.rule.describe())
    }
}

/// Classical math functions callable from expressions.
pub const MATH_FUNCTIONS: &[&str] = &["sin", "cos", "tan", "exp", "log", "sqrt", "abs", "floor", "ceil", "random"];

/// Names that resolve to constants unless shadowed.
pub const BUILTIN_CONSTANTS: &[&str] = &["pi", "true", "false"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ty {
    Int,
    Real,
    Complex,
    Bool,
    Reg(QuantumType),
    Cond,
    Unknown,
}

impl Ty {
    fn of(t: ClassicalType) -> Ty {
        match t {
            ClassicalType::Int => Ty::Int,
            ClassicalType::Real => Ty::Real,
            ClassicalType::Complex => Ty::Complex,
            ClassicalType::Boolean => Ty::Bool,
        }
    }

    fn rank(self) -> Option<u8> {
        match self {
            Ty::Int => Some(0),
            Ty::Real => Some(1),
            Ty::Complex => Some(2),
            _ => None,
        }
    }

    fn is_numeric(self) -> bool {
        self.rank().is_some()
    }

    fn is_quantum(self) -> bool {
        matches!(self, Ty::Reg(_) | Ty::Cond)
    }

    fn name(self) -> &'static str {
        match self {
            Ty::Int => "int",
            Ty::Real => "real",
            Ty::Complex => "complex",
            Ty::Bool => "boolean",
            Ty::Reg(q) => q.keyword(),
            Ty::Cond => "quantum condition",
            Ty::Unknown => "unknown",
        }
    }

    fn fits(self, to: ClassicalType) -> bool {
        match (self, to) {
            (Ty::Unknown, _) => true,
            (Ty::Bool, ClassicalType::Boolean) => true,
            (t, to) => matches!((t.rank(), Ty::of(to).rank()), (Some(a), Some(b)) if a <= b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Sym {
    Var(ClassicalType),
    Const(Ty),
    Reg(QuantumType),
}

/// The signature of a callable routine.
#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    pub kind: SubKind,
    pub cond: bool,
    pub params: Vec<ParamType>,
    pub return_type: Option<ClassicalType>,
    pub builtin: bool,
}

impl Signature {
    fn of(sub: &SubDecl) -> Self {
        Signature {
            kind: sub.kind,
            cond: sub.cond,
            params: sub.params.iter().map(|p| p.ty).collect(),
            return_type: sub.return_type,
            builtin: false,
        }
    }

    fn builtin(b: Builtin) -> Self {
        Signature { kind: b.level(), cond: true, params: b.params().to_vec(), return_type: None, builtin: true }
    }
}

/// Global declarations visible to later input, kept across REPL lines.
#[derive(Debug, Clone, Default)]
pub struct GlobalEnv {
    subs: HashMap<String, Signature>,
    names: HashMap<String, Sym>,
}

impl GlobalEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn signature(&self, name: &str) -> Option<Signature> {
        match Builtin::from_name(name) {
            Some(b) => Some(Signature::builtin(b)),
            None => self.subs.get(name).cloned(),
        }
    }

    pub fn has_global(&self, name: &str) -> bool {
        self.names.contains_key(name)
    }

    /// Drops global names for which `keep` is false (used to undo the
    /// declarations of a statement that failed at run time).
    pub fn retain_globals(&mut self, mut keep: impl FnMut(&str) -> bool) {
        self.names.retain(|n, _| keep(n));
    }
}

struct QifMark {
    /// Index of the body's scope; names declared below it are outside.
    base: usize,
    forks: bool,
}

struct Ctx {
    kind: SubKind,
    top: bool,
    cond: bool,
    ret: Option<ClassicalType>,
    scopes: Vec<HashMap<String, Sym>>,
    qifs: Vec<QifMark>,
}

impl Ctx {
    fn quantum_body(&self) -> bool {
        self.kind.is_quantum()
    }

    fn in_qif(&self) -> bool {
        !self.qifs.is_empty()
    }
}

/// Checks a program against `env`, annotates forking ifs, and on success
/// records its global declarations in `env`.
pub fn check_program(tree: &mut SyntaxTree, env: &mut GlobalEnv) -> Result<(), Vec<StaticError>> {
    let mut work = env.clone();
    let mut c = Checker { env: &mut work, errors: Vec::new() };
    c.program(tree);
    if c.errors.is_empty() {
        *env = work;
        Ok(())
    } else {
        Err(c.errors)
    }
}

struct Checker<'e> {
    env: &'e mut GlobalEnv,
    errors: Vec<StaticError>,
}

impl Checker<'_> {
    fn error(&mut self, rule: StaticRule, pos: Pos, message: impl Into<String>) {
        self.errors.push(StaticError { rule, pos, message: message.into() });
    }

    fn program(&mut self, tree: &mut SyntaxTree) {
        for item in &tree.items {
            if let Item::Sub(sub) = item {
                self.declare_sub(sub);
            }
        }
        let mut top =
            Ctx { kind: SubKind::Procedure, top: true, cond: false, ret: None, scopes: Vec::new(), qifs: Vec::new() };
        for item in &mut tree.items {
            match item {
                Item::Sub(sub) => self.sub_body(sub),
                Item::Stmt(stmt) => self.stmt(stmt, &mut top),
            }
        }
    }

    fn declare_sub(&mut self, sub: &SubDecl) {
        if Builtin::from_name(&sub.name).is_some() || MATH_FUNCTIONS.contains(&sub.name.as_str()) {
            self.error(StaticRule::Name, sub.pos, format!("`{}` is a builtin and cannot be redefined", sub.name));
            return;
        }
        if self.env.subs.contains_key(&sub.name) || self.env.names.contains_key(&sub.name) {
            self.error(StaticRule::Name, sub.pos, format!("`{}` is already declared", sub.name));
            return;
        }
        self.env.subs.insert(sub.name.clone(), Signature::of(sub));
    }

    fn sub_body(&mut self, sub: &mut SubDecl) {
        self.params(sub);
        let mut scope = HashMap::new();
        for p in &sub.params {
            if scope.contains_key(&p.name) {
                self.error(StaticRule::Name, sub.pos, format!("duplicate parameter `{}`", p.name));
            }
            let sym = match p.ty {
                ParamType::Classical(t) => Sym::Var(t),
                ParamType::Quantum(q) => Sym::Reg(q),
            };
            scope.insert(p.name.clone(), sym);
        }
        let mut ctx = Ctx {
            kind: sub.kind,
            top: false,
            cond: sub.cond,
            ret: sub.return_type,
            scopes: vec![scope],
            qifs: Vec::new(),
        };
        for stmt in &mut sub.body {
            self.stmt(stmt, &mut ctx);
        }
    }

    fn params(&mut self, sub: &SubDecl) {
        use QuantumType::*;
        let count = |t: QuantumType| sub.params.iter().filter(|p| p.ty == ParamType::Quantum(t)).count();
        if sub.cond && !sub.kind.is_quantum() {
            self.error(
                StaticRule::Type,
                sub.pos,
                format!("only operators and qufuncts can be `cond`, not `{}`", sub.name),
            );
        }
        match sub.kind {
            SubKind::Function => {
                if sub.params.iter().any(|p| matches!(p.ty, ParamType::Quantum(_))) {
                    self.error(
                        StaticRule::QuantumParam,
                        sub.pos,
                        format!("function `{}` cannot take registers", sub.name),
                    );
                }
            }
            SubKind::Procedure => {
                if count(Quvoid) + count(Quscratch) > 0 {
                    self.error(
                        StaticRule::QuantumParam,
                        sub.pos,
                        format!("procedure `{}` cannot take quvoid or quscratch registers", sub.name),
                    );
                }
            }
            SubKind::Operator => {
                if count(Quscratch) > 0 {
                    self.error(
                        StaticRule::QuantumParam,
                        sub.pos,
                        format!("quscratch registers are only allowed in qufuncts, not operator `{}`", sub.name),
                    );
                }
            }
            SubKind::Qufunct => {
                if count(Quscratch) > 0 && (count(Quvoid) == 0 || count(Qureg) > 0) {
                    self.error(
                        StaticRule::QuantumParam,
                        sub.pos,
                        format!(
                            "qufunct `{}` with quscratch registers needs a quvoid target and no qureg parameters",
                            sub.name
                        ),
                    );
                }
            }
        }
    }

    fn lookup(&self, name: &str, ctx: &Ctx) -> Option<(Sym, Option<usize>)> {
        for (depth, scope) in ctx.scopes.iter().enumerate().rev() {
            if let Some(s) = scope.get(name) {
                return Some((*s, Some(depth)));
            }
        }
        self.env.names.get(name).map(|s| (*s, None))
    }

    /// Resolves a name for reading or writing, applying the global-state rule.
    fn resolve(&mut self, name: &str, pos: Pos, ctx: &Ctx) -> Option<(Sym, Option<usize>)> {
        let found = self.lookup(name, ctx);
        if let Some((sym, None)) = found {
            if !ctx.top && ctx.kind != SubKind::Procedure && !matches!(sym, Sym::Const(_)) {
                self.error(StaticRule::GlobalState, pos, format!("{} may not use global `{name}`", article(ctx.kind)));
            }
        }
        found
    }

    fn declare(&mut self, name: &str, sym: Sym, pos: Pos, ctx: &mut Ctx) {
        let exists = match ctx.scopes.last() {
            Some(scope) => scope.contains_key(name),
            None => self.env.names.contains_key(name) || self.env.subs.contains_key(name),
        };
        if exists || Builtin::from_name(name).is_some() {
            self.error(StaticRule::Name, pos, format!("`{name}` is already declared"));
            return;
        }
        match ctx.scopes.last_mut() {
            Some(scope) => {
                scope.insert(name.to_string(), sym);
            }
            None => {
                self.env.names.insert(name.to_string(), sym);
            }
        }
    }

    /// Notes an assignment for fork detection.
    fn assigned(&mut self, depth: Option<usize>, ctx: &mut Ctx) {
        for mark in &mut ctx.qifs {
            if depth.is_none_or(|d| d < mark.base) {
                mark.forks = true;
            }
        }
    }

    fn block(&mut self, block: &mut Block, ctx: &mut Ctx) {
        ctx.scopes.push(HashMap::new());
        for stmt in block {
            self.stmt(stmt, ctx);
        }
        ctx.scopes.pop();
    }

    fn classical_only(&mut self, what: &str, rule: StaticRule, pos: Pos, ctx: &Ctx) -> bool {
        if !ctx.top && ctx.kind != SubKind::Procedure {
            self.error(rule, pos, format!("{what} is not allowed in {}", article(ctx.kind)));
            return false;
        }
        if ctx.in_qif() {
            self.error(StaticRule::CondRequired, pos, format!("{what} is not allowed inside a quantum if"));
            return false;
        }
        true
    }

    fn stmt(&mut self, stmt: &mut Stmt, ctx: &mut Ctx) {
        let pos = stmt.pos;
        match &mut stmt.kind {
            StmtKind::VarDecl { ty, name, init } => {
                if let Some(e) = init {
                    let t = self.expr(e, ctx);
                    self.expect_fits(t, *ty, e.pos);
                }
                self.declare(name, Sym::Var(*ty), pos, ctx);
            }
            StmtKind::ConstDecl { name, value } => {
                let t = self.expr(value, ctx);
                if t.is_quantum() {
                    self.error(StaticRule::Type, value.pos, "constants must be classical");
                }
                self.declare(name, Sym::Const(t), pos, ctx);
            }
            StmtKind::RegAlloc { name, size } => {
                let t = self.expr(size, ctx);
                self.expect_int(t, size.pos, "register size");
                if ctx.kind == SubKind::Function {
                    self.error(StaticRule::Hierarchy, pos, "functions have no access to quantum registers");
                } else if ctx.in_qif() {
                    self.error(StaticRule::CondRequired, pos, "registers cannot be allocated inside a quantum if");
                }
                self.declare(name, Sym::Reg(QuantumType::Qureg), pos, ctx);
            }
            StmtKind::RegAlias { ty, name, value } => {
                let t = self.expr(value, ctx);
                match t {
                    Ty::Reg(src) => {
                        if src == QuantumType::Quconst && *ty != QuantumType::Quconst {
                            self.error(
                                StaticRule::QuconstTarget,
                                value.pos,
                                format!("a quconst register cannot be bound as {}", ty.keyword()),
                            );
                        }
                    }
                    Ty::Unknown => {}
                    t => self.error(StaticRule::Type, value.pos, format!("expected a register, found {}", t.name())),
                }
                if matches!(ty, QuantumType::Quvoid | QuantumType::Quscratch) {
                    self.error(StaticRule::QuantumParam, pos, format!("{} is only valid for parameters", ty.keyword()));
                }
                if ctx.kind == SubKind::Function {
                    self.error(StaticRule::Hierarchy, pos, "functions have no access to quantum registers");
                }
                self.declare(name, Sym::Reg(*ty), pos, ctx);
            }
            StmtKind::Assign { name, value } => {
                let t = self.expr(value, ctx);
                match self.resolve(name, pos, ctx) {
                    Some((Sym::Var(ty), depth)) => {
                        self.expect_fits(t, ty, value.pos);
                        self.assigned(depth, ctx);
                    }
                    Some(_) => self.error(StaticRule::Type, pos, format!("cannot assign to `{name}`")),
                    None => self.error(StaticRule::Name, pos, format!("`{name}` is not declared")),
                }
            }
            StmtKind::Call { name, args, invert } => self.call_stmt(name, args, *invert, pos, ctx),
            StmtKind::If { cond, then_block, else_block, forking } => {
                let t = self.expr(cond, ctx);
                match t {
                    Ty::Bool | Ty::Unknown => {
                        self.block(then_block, ctx);
                        if let Some(b) = else_block {
                            self.block(b, ctx);
                        }
                    }
                    Ty::Reg(_) | Ty::Cond => {
                        if ctx.kind == SubKind::Function {
                            self.error(StaticRule::Hierarchy, pos, "functions cannot contain quantum ifs");
                        }
                        ctx.qifs.push(QifMark { base: ctx.scopes.len(), forks: false });
                        self.block(then_block, ctx);
                        if let Some(b) = else_block {
                            self.block(b, ctx);
                        }
                        let mark = ctx.qifs.pop().expect("pushed above");
                        *forking = mark.forks;
                        if mark.forks {
                            if let Some(outer) = ctx.qifs.last_mut() {
                                outer.forks = true;
                            }
                            if !ctx.quantum_body() {
                                self.error(
                                    StaticRule::ForkPlacement,
                                    pos,
                                    "a quantum if that changes classical state may only appear in an operator or qufunct",
                                );
                            }
                        }
                    }
                    t => {
                        self.error(StaticRule::Type, cond.pos, format!("condition must be boolean, found {}", t.name()))
                    }
                }
            }
            StmtKind::For { var, from, to, step, body } => {
                for e in [Some(&*from), Some(&*to), step.as_ref()].into_iter().flatten() {
                    let t = self.expr(e, ctx);
                    self.expect_int(t, e.pos, "loop bound");
                }
                match self.resolve(var, pos, ctx) {
                    Some((Sym::Var(ClassicalType::Int), depth)) => self.assigned(depth, ctx),
                    Some(_) => {
                        self.error(StaticRule::Type, pos, format!("loop variable `{var}` must be an int variable"))
                    }
                    None => self.error(StaticRule::Name, pos, format!("`{var}` is not declared")),
                }
                self.block(body, ctx);
            }
            StmtKind::While { cond, body } => {
                let t = self.expr(cond, ctx);
                match t {
                    Ty::Bool | Ty::Unknown => {}
                    t if t.is_quantum() => {
                        self.error(StaticRule::Type, cond.pos, "a quantum condition cannot guard a loop")
                    }
                    t => {
                        self.error(StaticRule::Type, cond.pos, format!("condition must be boolean, found {}", t.name()))
                    }
                }
                self.block(body, ctx);
            }
            StmtKind::Measure { reg, target } => {
                let t = self.expr(reg, ctx);
                if !matches!(t, Ty::Reg(_) | Ty::Unknown) {
                    self.error(StaticRule::Type, reg.pos, format!("expected a register, found {}", t.name()));
                }
                self.classical_only("measure", StaticRule::NonUnitary, pos, ctx);
                if let Some(var) = target {
                    match self.resolve(var, pos, ctx) {
                        Some((Sym::Var(ClassicalType::Int), depth)) => self.assigned(depth, ctx),
                        Some(_) => self.error(
                            StaticRule::Type,
                            pos,
                            format!("measurement target `{var}` must be an int variable"),
                        ),
                        None => self.error(StaticRule::Name, pos, format!("`{var}` is not declared")),
                    }
                }
            }
            StmtKind::Reset => {
                self.classical_only("reset", StaticRule::NonUnitary, pos, ctx);
            }
            StmtKind::Dump => {
                self.classical_only("dump", StaticRule::SideEffect, pos, ctx);
            }
            StmtKind::Print(args) => {
                for e in args.iter() {
                    let t = self.expr(e, ctx);
                    if t == Ty::Cond {
                        self.error(StaticRule::Type, e.pos, "a quantum condition cannot be printed");
                    }
                }
                self.classical_only("print", StaticRule::SideEffect, pos, ctx);
            }
            StmtKind::Return(value) => {
                if ctx.in_qif() {
                    self.error(StaticRule::CondRequired, pos, "return is not allowed inside a quantum if");
                }
                match (value, ctx.kind, ctx.top) {
                    (_, _, true) => self.error(StaticRule::Type, pos, "return outside a subroutine"),
                    (Some(e), SubKind::Function, _) => {
                        let t = self.expr(e, ctx);
                        if let Some(ret) = ctx.ret {
                            self.expect_fits(t, ret, e.pos);
                        }
                    }
                    (None, SubKind::Function, _) => self.error(StaticRule::Type, pos, "function must return a value"),
                    (Some(e), _, _) => self.error(StaticRule::Type, e.pos, "only functions return values"),
                    (None, _, _) => {}
                }
            }
            StmtKind::Exit => {
                if !ctx.top && ctx.kind != SubKind::Procedure || ctx.in_qif() {
                    self.error(StaticRule::Type, pos, "exit is only allowed in procedures");
                }
            }
            StmtKind::Block(b) => self.block(b, ctx),
        }
    }

    fn call_stmt(&mut self, name: &str, args: &mut [Expr], invert: bool, pos: Pos, ctx: &mut Ctx) {
        if MATH_FUNCTIONS.contains(&name) {
            self.math_call(name, args, pos, ctx);
            return;
        }
        let Some(sig) = self.env.signature(name) else {
            self.error(StaticRule::Name, pos, format!("no subroutine named `{name}`"));
            for a in args.iter() {
                self.expr(a, ctx);
            }
            return;
        };
        if invert && !sig.kind.is_quantum() {
            self.error(StaticRule::Type, pos, format!("{} `{name}` cannot be inverted", sig.kind.keyword()));
        }
        if sig.kind.level() > ctx.kind.level() {
            if ctx.kind == SubKind::Qufunct && sig.kind == SubKind::Operator {
                self.error(
                    StaticRule::QufunctGate,
                    pos,
                    format!("qufunct may only call quantum functions, but `{name}` is an operator"),
                );
            } else {
                self.error(
                    StaticRule::Hierarchy,
                    pos,
                    format!("{} may not call {} `{name}`", article(ctx.kind), sig.kind.keyword()),
                );
            }
        }
        if sig.kind != SubKind::Function && !sig.cond {
            if ctx.in_qif() {
                self.error(
                    StaticRule::CondRequired,
                    pos,
                    format!("`{name}` is called inside a quantum if but is not declared cond"),
                );
            } else if ctx.cond {
                self.error(
                    StaticRule::CondRequired,
                    pos,
                    format!("cond routines may only call cond routines, not `{name}`"),
                );
            }
        }
        self.args(name, &sig.params, args, pos, ctx);
    }

    fn args(&mut self, name: &str, params: &[ParamType], args: &[Expr], pos: Pos, ctx: &mut Ctx) {
        if params.len() != args.len() {
            self.error(
                StaticRule::Type,
                pos,
                format!("`{name}` takes {} argument(s), {} given", params.len(), args.len()),
            );
        }
        for (i, a) in args.iter().enumerate() {
            let t = self.expr(a, ctx);
            let Some(p) = params.get(i) else { continue };
            match (p, t) {
                (_, Ty::Unknown) => {}
                (ParamType::Classical(c), t) => self.expect_fits(t, *c, a.pos),
                (ParamType::Quantum(q), Ty::Reg(src)) => {
                    if src == QuantumType::Quconst && *q != QuantumType::Quconst {
                        self.error(
                            StaticRule::QuconstTarget,
                            a.pos,
                            format!("quconst register passed as {} argument {} of `{name}`", q.keyword(), i + 1),
                        );
                    }
                }
                (ParamType::Quantum(_), t) => {
                    self.error(StaticRule::Type, a.pos, format!("expected a register, found {}", t.name()))
                }
            }
        }
    }

    fn math_call(&mut self, name: &str, args: &[Expr], pos: Pos, ctx: &mut Ctx) -> Ty {
        let arity = if name == "random" { 0 } else { 1 };
        if args.len() != arity {
            self.error(StaticRule::Type, pos, format!("`{name}` takes {arity} argument(s)"));
        }
        if name == "random" && ctx.kind != SubKind::Procedure {
            self.error(StaticRule::Random, pos, format!("random() is not allowed in {}", article(ctx.kind)));
        }
        let mut arg = Ty::Unknown;
        for a in args {
            arg = self.expr(a, ctx);
            if !(arg.is_numeric() || arg == Ty::Unknown) {
                self.error(StaticRule::Type, a.pos, format!("`{name}` expects a number, found {}", arg.name()));
            } else if arg == Ty::Complex && name != "abs" {
                self.error(StaticRule::Type, a.pos, format!("`{name}` is not defined for complex numbers"));
            }
        }
        match name {
            "abs" if arg == Ty::Int => Ty::Int,
            "floor" | "ceil" => Ty::Int,
            _ => Ty::Real,
        }
    }

    fn expect_fits(&mut self, t: Ty, to: ClassicalType, pos: Pos) {
        if !t.fits(to) {
            self.error(StaticRule::Type, pos, format!("expected {}, found {}", to.keyword(), t.name()));
        }
    }

    fn expect_int(&mut self, t: Ty, pos: Pos, what: &str) {
        if !matches!(t, Ty::Int | Ty::Unknown) {
            self.error(StaticRule::Type, pos, format!("{what} must be an int, found {}", t.name()));
        }
    }

    fn expr(&mut self, e: &Expr, ctx: &mut Ctx) -> Ty {
        match &e.kind {
            ExprKind::Int(_) => Ty::Int,
            ExprKind::Real(_) => Ty::Real,
            ExprKind::Complex(a, b) => {
                for part in [a, b] {
                    let t = self.expr(part, ctx);
                    if !(t == Ty::Unknown || t.fits(ClassicalType::Real)) {
                        self.error(
                            StaticRule::Type,
                            part.pos,
                            format!("complex parts must be real, found {}", t.name()),
                        );
                    }
                }
                Ty::Complex
            }
            ExprKind::Var(name) => match self.resolve(name, e.pos, ctx) {
                Some((Sym::Var(t), _)) => Ty::of(t),
                Some((Sym::Const(t), _)) => t,
                Some((Sym::Reg(q), _)) => {
                    if ctx.kind == SubKind::Function {
                        self.error(StaticRule::Hierarchy, e.pos, "functions have no access to quantum registers");
                    }
                    Ty::Reg(q)
                }
                None => match name.as_str() {
                    "pi" => Ty::Real,
                    "true" | "false" => Ty::Bool,
                    _ => {
                        self.error(StaticRule::Name, e.pos, format!("`{name}` is not declared"));
                        Ty::Unknown
                    }
                },
            },
            ExprKind::Unary(op, a) => {
                let t = self.expr(a, ctx);
                match (op, t) {
                    (_, Ty::Unknown) => Ty::Unknown,
                    (UnaryOp::Neg, t) if t.is_numeric() => t,
                    (UnaryOp::Not, Ty::Bool) => Ty::Bool,
                    (UnaryOp::Not, t) if t.is_quantum() => Ty::Cond,
                    (UnaryOp::Length, Ty::Reg(_)) => Ty::Int,
                    (op, t) => {
                        let sym = match op {
                            UnaryOp::Neg => "-",
                            UnaryOp::Not => "not",
                            UnaryOp::Length => "#",
                        };
                        self.error(StaticRule::Type, e.pos, format!("`{sym}` cannot be applied to {}", t.name()));
                        Ty::Unknown
                    }
                }
            }
            ExprKind::Binary(op, a, b) => {
                let (ta, tb) = (self.expr(a, ctx), self.expr(b, ctx));
                self.binary(*op, ta, tb, e.pos)
            }
            ExprKind::Index(base, i) => {
                let tb = self.expr(base, ctx);
                let ti = self.expr(i, ctx);
                self.expect_int(ti, i.pos, "register index");
                self.register_operand(tb, base.pos)
            }
            ExprKind::Slice(base, from, to) => {
                let tb = self.expr(base, ctx);
                for x in [from, to] {
                    let t = self.expr(x, ctx);
                    self.expect_int(t, x.pos, "slice bound");
                }
                self.register_operand(tb, base.pos)
            }
            ExprKind::Call(name, args) => {
                if MATH_FUNCTIONS.contains(&name.as_str()) {
                    return self.math_call(name, args, e.pos, ctx);
                }
                match self.env.signature(name) {
                    Some(sig) if sig.kind == SubKind::Function => {
                        self.args(name, &sig.params, args, e.pos, ctx);
                        sig.return_type.map_or(Ty::Unknown, Ty::of)
                    }
                    Some(sig) => {
                        self.error(
                            StaticRule::Type,
                            e.pos,
                            format!("{} `{name}` does not return a value", sig.kind.keyword()),
                        );
                        Ty::Unknown
                    }
                    None => {
                        self.error(StaticRule::Name, e.pos, format!("no function named `{name}`"));
                        Ty::Unknown
                    }
                }
            }
        }
    }

    fn register_operand(&mut self, t: Ty, pos: Pos) -> Ty {
        match t {
            Ty::Reg(_) | Ty::Unknown => t,
            t => {
                self.error(StaticRule::Type, pos, format!("expected a register, found {}", t.name()));
                Ty::Unknown
            }
        }
    }

    fn binary(&mut self, op: BinaryOp, a: Ty, b: Ty, pos: Pos) -> Ty {
        use BinaryOp::*;
        if a == Ty::Unknown || b == Ty::Unknown {
            return match op {
                Eq | Ne | Lt | Le | Gt | Ge => Ty::Bool,
                _ => Ty::Unknown,
            };
        }
        let fail = |c: &mut Self| {
            c.error(
                StaticRule::Type,
                pos,
                format!("`{}` cannot be applied to {} and {}", op.symbol(), a.name(), b.name()),
            );
            Ty::Unknown
        };
        match op {
            Add | Sub | Mul | Div | Pow => match (a.rank(), b.rank()) {
                (Some(x), Some(y)) => [Ty::Int, Ty::Real, Ty::Complex][x.max(y) as usize],
                _ => fail(self),
            },
            Mod => match (a, b) {
                (Ty::Int, Ty::Int) => Ty::Int,
                _ => fail(self),
            },
            Eq | Ne => match (a, b) {
                (Ty::Bool, Ty::Bool) => Ty::Bool,
                (a, b) if a.is_numeric() && b.is_numeric() => Ty::Bool,
                _ => fail(self),
            },
            Lt | Le | Gt | Ge => match (a, b) {
                (Ty::Int | Ty::Real, Ty::Int | Ty::Real) => Ty::Bool,
                _ => fail(self),
            },
            And | Or | Xor => match (a, b) {
                (Ty::Bool, Ty::Bool) => Ty::Bool,
                (Ty::Bool | Ty::Reg(_) | Ty::Cond, Ty::Bool | Ty::Reg(_) | Ty::Cond) => Ty::Cond,
                _ => fail(self),
            },
            Concat => match (a, b) {
                (Ty::Reg(x), Ty::Reg(y)) => Ty::Reg(concat_type(x, y)),
                _ => fail(self),
            },
        }
    }
}

fn article(kind: SubKind) -> String {
    match kind {
        SubKind::Operator => "an operator".into(),
        k => format!("a {}", k.keyword()),
    }
}

/// The type of `a & b`: quconst if either part is.
pub fn concat_type(a: QuantumType, b: QuantumType) -> QuantumType {
    if a == QuantumType::Quconst || b == QuantumType::Quconst {
        QuantumType::Quconst
    } else if a == b {
        a
    } else {
        QuantumType::Qureg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(src: &str) -> Result<SyntaxTree, Vec<StaticError>> {
        let mut tree = parse_source(src).unwrap();
        check_program(&mut tree, &mut GlobalEnv::new())?;
        Ok(tree)
    }

    fn rules(src: &str) -> Vec<StaticRule> {
        match check(src) {
            Ok(_) => Vec::new(),
            Err(e) => e.into_iter().map(|e| e.rule).collect(),
        }
    }

    #[test]
    fn accepts_plain_programs() {
        assert_eq!(rules("qureg q[2]; H(q); int k; measure q, k; print k;"), vec![]);
        assert_eq!(rules("int sq(int n) { return n*n; } int k = sq(3);"), vec![]);
    }

    #[test]
    fn undeclared_and_redeclared() {
        assert_eq!(rules("x = 1;"), vec![StaticRule::Name]);
        assert_eq!(rules("int x; int x;"), vec![StaticRule::Name]);
        assert_eq!(rules("operator H(qureg q) { }"), vec![StaticRule::Name]);
    }

    #[test]
    fn forking_is_marked() {
        let tree = check("cond qufunct d(quconst s, qureg q) { int n = 0; if s[0] { n = 1; } Not(q[n]); }").unwrap();
        let Item::Sub(sub) = &tree.items[0] else { panic!() };
        assert!(matches!(sub.body[1].kind, StmtKind::If { forking: true, .. }));
        let tree = check("operator f(qureg a, qureg b) { if a { int k = 1; H(b); } }").unwrap();
        let Item::Sub(sub) = &tree.items[0] else { panic!() };
        assert!(matches!(sub.body[0].kind, StmtKind::If { forking: false, .. }));
    }

    #[test]
    fn nested_fork_marks_outer() {
        let tree = check(
            "operator f(qureg a, qureg b, qureg c) { int n = 0; if a { int k = 0; if b { k = 1; } Rot(k, c); } }",
        )
        .unwrap();
        let Item::Sub(sub) = &tree.items[0] else { panic!() };
        assert!(matches!(sub.body[1].kind, StmtKind::If { forking: true, .. }));
    }

    #[test]
    fn incremental_environment() {
        let mut env = GlobalEnv::new();
        let mut t = parse_source("qureg q[2];").unwrap();
        check_program(&mut t, &mut env).unwrap();
        let mut t = parse_source("H(q);").unwrap();
        check_program(&mut t, &mut env).unwrap();
        let mut bad = parse_source("int z; H(r);").unwrap();
        assert!(check_program(&mut bad, &mut env).is_err());
        assert!(!env.has_global("z"));
    }
}
