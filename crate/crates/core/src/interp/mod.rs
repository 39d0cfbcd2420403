//! The interpreter: program state, statement execution and subroutine calls.
//!
//! Top-level statements act on the machine directly. A call to an operator
//! or qufunct first records the gates of its body on a [`GateTape`]; the
//! tape is then inverted or gated by a quantum condition as needed and handed
//! to the enclosing recording, or to the machine if there is none.

pub mod check;
mod error;
mod eval;
mod exec;
mod value;

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

pub use check::{check_program, GlobalEnv, StaticError, StaticRule};
pub use error::{Error, Fault, RuntimeError, StaticErrors};
pub use value::Value;

use crate::machine::{MachineState, RegisterMap};
use crate::qcond::ForkPath;
use crate::syntax::{parse_source, ClassicalType, Item, Pos, QuantumType, Stmt, StmtKind, SubDecl, SyntaxTree};
use crate::tape::{CheckKind, GateTape};

/// Nesting limit for subroutine calls.
pub const MAX_CALL_DEPTH: usize = 512;

#[derive(Debug, Clone)]
enum Binding {
    Var(ClassicalType, Value),
    Const(Value),
    Reg(RegisterMap, QuantumType),
}

#[derive(Debug, Default)]
struct Scope {
    names: HashMap<String, Binding>,
    /// Registers allocated in this scope, released when it ends.
    owned: Vec<(String, RegisterMap)>,
}

#[derive(Debug)]
struct Frame {
    scopes: Vec<Scope>,
    fork: Option<ForkPath>,
}

/// How a statement finished.
#[derive(Debug, Clone, PartialEq)]
pub enum Flow {
    Normal,
    Return(Option<Value>),
    Exit,
}

/// The four parts of a call to a qufunct with `quscratch` registers: the
/// forward computation into the auxiliary register, the copy into the
/// target, and the uncomputation.
#[derive(Debug, Clone)]
pub struct ScratchStages {
    pub aux: RegisterMap,
    pub target: RegisterMap,
    pub scratch: Vec<RegisterMap>,
    pub forward: GateTape,
    pub fanout: GateTape,
    pub backward: GateTape,
}

impl ScratchStages {
    /// The full call including its emptiness checks.
    pub fn tape(&self) -> GateTape {
        let mut t = GateTape::new();
        t.push_check(CheckKind::QuvoidEntry, &self.target, "target");
        for s in &self.scratch {
            t.push_check(CheckKind::ScratchEntry, s, "scratch");
        }
        t.push_check(CheckKind::Ancilla, &self.aux, "auxiliary register");
        t.append(self.forward.clone());
        t.append(self.fanout.clone());
        t.append(self.backward.clone());
        for s in &self.scratch {
            t.push_check(CheckKind::ScratchExit, s, "scratch");
        }
        t.push_check(CheckKind::Ancilla, &self.aux, "auxiliary register");
        t
    }
}

pub struct Interpreter {
    machine: MachineState,
    env: GlobalEnv,
    subs: HashMap<String, Rc<SubDecl>>,
    forking: HashSet<String>,
    frames: Vec<Frame>,
    recorders: Vec<GateTape>,
    checks: bool,
    output: String,
}

impl Interpreter {
    pub fn new(machine: MachineState) -> Self {
        Interpreter {
            machine,
            env: GlobalEnv::new(),
            subs: HashMap::new(),
            forking: HashSet::new(),
            frames: vec![Frame { scopes: vec![Scope::default()], fork: None }],
            recorders: Vec::new(),
            checks: true,
            output: String::new(),
        }
    }

    pub fn machine(&self) -> &MachineState {
        &self.machine
    }

    pub fn machine_mut(&mut self) -> &mut MachineState {
        &mut self.machine
    }

    /// Turns the runtime emptiness checks on or off.
    pub fn set_checks(&mut self, on: bool) {
        self.checks = on;
    }

    pub fn checks(&self) -> bool {
        self.checks
    }

    /// Text written by `print` and `dump` since the last call.
    pub fn take_output(&mut self) -> String {
        std::mem::take(&mut self.output)
    }

    /// A global register by name.
    pub fn register(&self, name: &str) -> Option<RegisterMap> {
        match self.frames[0].scopes[0].names.get(name) {
            Some(Binding::Reg(r, _)) => Some(r.clone()),
            _ => None,
        }
    }

    /// A global classical value by name.
    pub fn value(&self, name: &str) -> Option<Value> {
        match self.frames[0].scopes[0].names.get(name) {
            Some(Binding::Var(_, v) | Binding::Const(v)) => Some(v.clone()),
            _ => None,
        }
    }

    pub fn subroutine(&self, name: &str) -> Option<&SubDecl> {
        self.subs.get(name).map(|s| s.as_ref())
    }

    /// Parses and checks `src`, defines its subroutines and returns its
    /// top-level statements for execution.
    pub fn load(&mut self, src: &str) -> Result<Vec<Stmt>, Error> {
        self.load_tree(parse_source(src)?)
    }

    pub fn load_tree(&mut self, mut tree: SyntaxTree) -> Result<Vec<Stmt>, Error> {
        check_program(&mut tree, &mut self.env).map_err(StaticErrors)?;
        let mut stmts = Vec::new();
        for item in tree.items {
            match item {
                Item::Sub(sub) => {
                    if contains_fork(&sub.body) {
                        self.forking.insert(sub.name.clone());
                    }
                    self.subs.insert(sub.name.clone(), Rc::new(sub));
                }
                Item::Stmt(s) => stmts.push(s),
            }
        }
        Ok(stmts)
    }

    /// Runs a whole program, stopping early at `exit`.
    pub fn run(&mut self, src: &str) -> Result<Flow, Error> {
        let stmts = self.load(src)?;
        for s in &stmts {
            if self.exec_top(s)? == Flow::Exit {
                return Ok(Flow::Exit);
            }
        }
        Ok(Flow::Normal)
    }

    /// Executes one top-level statement. After an error, qubits allocated
    /// by the statement are released and declarations it made are dropped.
    pub fn exec_top(&mut self, stmt: &Stmt) -> Result<Flow, RuntimeError> {
        self.guarded(|me| me.exec_stmt(stmt))
    }

    /// Records the gates that `src` would apply, without applying them.
    /// `src` may only contain declarations and quantum statements.
    pub fn record(&mut self, src: &str) -> Result<GateTape, Error> {
        let stmts = self.load(src)?;
        self.recorders.push(GateTape::new());
        let res = self.guarded(|me| {
            for s in &stmts {
                me.exec_stmt(s)?;
            }
            Ok(())
        });
        let tape = self.recorders.pop().unwrap_or_default();
        res?;
        Ok(tape)
    }

    /// The stages of a call to a qufunct with `quscratch` registers, e.g.
    /// `scratch_stages("f(x, y, s)")`. Nothing is applied.
    pub fn scratch_stages(&mut self, call: &str) -> Result<ScratchStages, Error> {
        let stmts = self.load(call)?;
        let [Stmt { kind: StmtKind::Call { name, args, .. }, pos }] = &stmts[..] else {
            return Err(Fault::Type("expected a single call".into()).at(Pos::default()).into());
        };
        let pos = *pos;
        let sub = match self.subs.get(name) {
            Some(s) if s.has_scratch() => s.clone(),
            _ => return Err(Fault::Type(format!("`{name}` has no quscratch parameter")).at(pos).into()),
        };
        Ok(self.guarded(|me| {
            let bindings = me.bind(&sub, args, pos)?;
            me.scratch_call(&sub, bindings, pos)
        })?)
    }

    fn guarded<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T, RuntimeError>) -> Result<T, RuntimeError> {
        let before: HashSet<usize> = self.machine.allocated_qubits().into_iter().collect();
        let depth = self.recorders.len();
        let res = f(self);
        if res.is_err() {
            self.recorders.truncate(depth);
            self.frames.truncate(1);
            self.frames[0].scopes.truncate(1);
            self.frames[0].fork = None;
            let held: HashSet<usize> = self.frames[0].scopes[0]
                .names
                .values()
                .filter_map(|b| match b {
                    Binding::Reg(r, _) => Some(r.qubits().to_vec()),
                    _ => None,
                })
                .flatten()
                .collect();
            for q in self.machine.allocated_qubits() {
                if !before.contains(&q) && !held.contains(&q) {
                    let r = RegisterMap::new(vec![q]).expect("single qubit");
                    let _ = self.machine.release_register(&r);
                }
            }
            let globals = &self.frames[0].scopes[0].names;
            self.env.retain_globals(|n| globals.contains_key(n));
        }
        res
    }
}

/// Whether a block contains a forking if-statement.
fn contains_fork(block: &[Stmt]) -> bool {
    block.iter().any(|s| match &s.kind {
        StmtKind::If { forking: true, .. } => true,
        StmtKind::If { then_block, else_block, .. } => {
            contains_fork(then_block) || else_block.as_deref().is_some_and(contains_fork)
        }
        StmtKind::For { body, .. } | StmtKind::While { body, .. } | StmtKind::Block(body) => contains_fork(body),
        _ => false,
    })
}
