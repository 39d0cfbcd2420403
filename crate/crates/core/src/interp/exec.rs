use std::rc::Rc;

use crate::machine::RegisterMap;
use crate::qcond::{synthesize_enable, to_xdnf, CondExpr, ForkPath, MAX_FORK_PATHS};
use crate::stdgates::{self, Builtin};
use crate::syntax::{Block, ClassicalType, Expr, ParamType, Pos, QuantumType, Stmt, StmtKind, SubDecl, SubKind};
use crate::tape::{CheckKind, GateTape};

use super::check::MATH_FUNCTIONS;
use super::{Binding, Fault, Flow, Frame, Interpreter, RuntimeError, Scope, ScratchStages, Value, MAX_CALL_DEPTH};

type Res<T> = Result<T, RuntimeError>;

impl Interpreter {
    fn frame(&mut self) -> &mut Frame {
        self.frames.last_mut().expect("global frame")
    }

    fn recording(&self) -> bool {
        !self.recorders.is_empty()
    }

    /// Sends gates to the innermost recording, or to the machine.
    pub(super) fn emit(&mut self, tape: GateTape, pos: Pos) -> Res<()> {
        match self.recorders.last_mut() {
            Some(t) => {
                t.append(tape);
                Ok(())
            }
            None => tape.apply(&mut self.machine, self.checks).map_err(|e| Fault::from(e).at(pos)),
        }
    }

    fn declare(&mut self, name: &str, b: Binding) {
        let scope = self.frame().scopes.last_mut().expect("scope");
        scope.names.insert(name.to_string(), b);
    }

    pub(super) fn lookup(&self, name: &str) -> Option<&Binding> {
        let frame = self.frames.last().expect("global frame");
        for scope in frame.scopes.iter().rev() {
            if let Some(b) = scope.names.get(name) {
                return Some(b);
            }
        }
        self.frames[0].scopes[0].names.get(name)
    }

    fn lookup_mut(&mut self, name: &str) -> Option<&mut Binding> {
        let last = self.frames.len() - 1;
        let idx = self.frames[last].scopes.iter().rposition(|s| s.names.contains_key(name));
        match idx {
            Some(i) => self.frames[last].scopes[i].names.get_mut(name),
            None => self.frames[0].scopes[0].names.get_mut(name),
        }
    }

    fn set_var(&mut self, name: &str, v: Value, pos: Pos) -> Res<()> {
        match self.lookup_mut(name) {
            Some(Binding::Var(ty, slot)) => {
                let ty = *ty;
                *slot = v.clone().coerce(ty).ok_or_else(|| {
                    Fault::Type(format!("cannot assign {} to {} `{name}`", v.type_name(), ty.keyword())).at(pos)
                })?;
                Ok(())
            }
            Some(_) => Err(Fault::Type(format!("cannot assign to `{name}`")).at(pos)),
            None => Err(Fault::Undefined(name.to_string()).at(pos)),
        }
    }

    fn push_scope(&mut self) {
        self.frame().scopes.push(Scope::default());
    }

    /// Ends the innermost scope, releasing its registers. Registers must be
    /// empty; inside a recording that becomes a check on the tape.
    fn pop_scope(&mut self, pos: Pos) -> Res<()> {
        let scope = self.frame().scopes.pop().expect("scope");
        for (name, reg) in scope.owned.into_iter().rev() {
            self.release_local(&name, &reg, pos)?;
        }
        Ok(())
    }

    fn release_local(&mut self, name: &str, reg: &RegisterMap, pos: Pos) -> Res<()> {
        let res = if let Some(t) = self.recorders.last_mut() {
            t.push_check(CheckKind::LocalScope, reg, name);
            self.machine.release_register(reg)
        } else if self.checks {
            self.machine.free_register(reg)
        } else {
            self.machine.release_register(reg)
        };
        res.map_err(|e| Fault::from(e).at(pos))
    }

    pub(super) fn exec_block(&mut self, block: &[Stmt], pos: Pos) -> Res<Flow> {
        self.push_scope();
        let flow = self.exec_stmts(block)?;
        self.pop_scope(pos)?;
        Ok(flow)
    }

    fn exec_stmts(&mut self, block: &[Stmt]) -> Res<Flow> {
        for s in block {
            let flow = self.exec_stmt(s)?;
            if flow != Flow::Normal {
                return Ok(flow);
            }
        }
        Ok(Flow::Normal)
    }

    pub(super) fn exec_stmt(&mut self, stmt: &Stmt) -> Res<Flow> {
        let pos = stmt.pos;
        match &stmt.kind {
            StmtKind::VarDecl { ty, name, init } => {
                let v = match init {
                    Some(e) => {
                        let v = self.eval(e)?;
                        v.clone().coerce(*ty).ok_or_else(|| {
                            Fault::Type(format!("cannot initialize {} `{name}` with {}", ty.keyword(), v.type_name()))
                                .at(e.pos)
                        })?
                    }
                    None => default_value(*ty),
                };
                self.declare(name, Binding::Var(*ty, v));
            }
            StmtKind::ConstDecl { name, value } => {
                let v = self.eval(value)?;
                self.declare(name, Binding::Const(v));
            }
            StmtKind::RegAlloc { name, size } => {
                let n = self.eval_int(size)?;
                if n < 1 {
                    return Err(Fault::Type(format!("register size must be at least 1, got {n}")).at(size.pos));
                }
                let reg = self.machine.allocate_register(n as usize).map_err(|e| Fault::from(e).at(pos))?;
                if let Some(t) = self.recorders.last_mut() {
                    t.push_check(CheckKind::LocalScope, &reg, name.as_str());
                }
                let global = self.frames.len() == 1 && self.frames[0].scopes.len() == 1;
                if !global {
                    self.frame().scopes.last_mut().expect("scope").owned.push((name.clone(), reg.clone()));
                }
                self.declare(name, Binding::Reg(reg, QuantumType::Qureg));
            }
            StmtKind::RegAlias { ty, name, value } => {
                let reg = self.eval_reg(value)?;
                self.declare(name, Binding::Reg(reg, *ty));
            }
            StmtKind::Assign { name, value } => {
                let v = self.eval(value)?;
                self.set_var(name, v, pos)?;
            }
            StmtKind::Call { name, args, invert } => {
                self.call(name, args, *invert, pos)?;
            }
            StmtKind::If { cond, then_block, else_block, forking } => {
                let c = self.eval_condition(cond)?;
                return match c.as_const() {
                    Some(true) => self.exec_block(then_block, pos),
                    Some(false) => match else_block {
                        Some(b) => self.exec_block(b, pos),
                        None => Ok(Flow::Normal),
                    },
                    None if *forking => self.fork(c, then_block, else_block.as_ref(), pos),
                    None => self.quantum_if(c, then_block, else_block.as_ref(), pos),
                };
            }
            StmtKind::For { var, from, to, step, body } => {
                let from = self.eval_int(from)?;
                let to = self.eval_int(to)?;
                let step = match step {
                    Some(s) => self.eval_int(s)?,
                    None => 1,
                };
                if step == 0 {
                    return Err(Fault::ZeroStep.at(pos));
                }
                let mut i = from;
                while (step > 0 && i <= to) || (step < 0 && i >= to) {
                    self.set_var(var, Value::Int(i), pos)?;
                    let flow = self.exec_block(body, pos)?;
                    if flow != Flow::Normal {
                        return Ok(flow);
                    }
                    i = i.checked_add(step).ok_or_else(|| Fault::Overflow.at(pos))?;
                }
            }
            StmtKind::While { cond, body } => loop {
                match self.eval(cond)? {
                    Value::Bool(true) => {}
                    Value::Bool(false) => break,
                    v => return Err(Fault::Type(format!("loop condition is {}", v.type_name())).at(cond.pos)),
                }
                let flow = self.exec_block(body, pos)?;
                if flow != Flow::Normal {
                    return Ok(flow);
                }
            },
            StmtKind::Measure { reg, target } => {
                self.direct_only("measure", pos)?;
                let r = self.eval_reg(reg)?;
                let k = self.machine.measure_register(&r).map_err(|e| Fault::from(e).at(pos))?;
                if let Some(var) = target {
                    let k = i64::try_from(k).map_err(|_| Fault::Overflow.at(pos))?;
                    self.set_var(var, Value::Int(k), pos)?;
                }
            }
            StmtKind::Reset => {
                self.direct_only("reset", pos)?;
                self.machine.reset_state();
            }
            StmtKind::Dump => {
                self.direct_only("dump", pos)?;
                self.output.push_str(": ");
                self.output.push_str(&self.machine.format_dump());
                self.output.push('\n');
            }
            StmtKind::Print(args) => {
                let mut parts = Vec::with_capacity(args.len());
                for a in args {
                    parts.push(self.eval(a)?.to_string());
                }
                self.output.push_str(&parts.join(" "));
                self.output.push('\n');
            }
            StmtKind::Return(value) => {
                let v = match value {
                    Some(e) => Some(self.eval(e)?),
                    None => None,
                };
                return Ok(Flow::Return(v));
            }
            StmtKind::Exit => return Ok(Flow::Exit),
            StmtKind::Block(b) => return self.exec_block(b, pos),
        }
        Ok(Flow::Normal)
    }

    fn direct_only(&self, what: &str, pos: Pos) -> Res<()> {
        if self.recording() {
            return Err(Fault::Type(format!("{what} cannot be used while gates are being recorded")).at(pos));
        }
        Ok(())
    }

    /// A quantum if whose branches leave the classical state alone: both
    /// branches are recorded once and gated on the condition.
    fn quantum_if(&mut self, cond: CondExpr, then: &Block, otherwise: Option<&Block>, pos: Pos) -> Res<Flow> {
        let poly = to_xdnf(&cond);
        let plan = synthesize_enable(&poly, &mut self.machine, &[], otherwise.is_some())
            .map_err(|e| Fault::from(e).at(pos))?;
        let then_tape = self.record_block(then, pos)?;
        let else_tape = match otherwise {
            Some(b) => Some(self.record_block(b, pos)?),
            None => None,
        };
        let tape = plan.gate(&then_tape, else_tape.as_ref()).map_err(|e| Fault::from(e).at(pos))?;
        plan.release(&mut self.machine).map_err(|e| Fault::from(e).at(pos))?;
        self.emit(tape, pos)?;
        Ok(Flow::Normal)
    }

    fn record_block(&mut self, block: &Block, pos: Pos) -> Res<GateTape> {
        self.recorders.push(GateTape::new());
        self.exec_block(block, pos)?;
        Ok(self.recorders.pop().expect("pushed above"))
    }

    /// A forking if: this run of the body follows one branch, chosen by the
    /// frame's fork path.
    fn fork(&mut self, cond: CondExpr, then: &Block, otherwise: Option<&Block>, pos: Pos) -> Res<Flow> {
        let segment = std::mem::take(self.recorders.last_mut().ok_or_else(|| {
            Fault::Type("forking if-statements are only allowed in operators and qufuncts".into()).at(pos)
        })?);
        let branch = match self.frame().fork.as_mut() {
            Some(path) => path.decide(cond, segment),
            None => {
                return Err(
                    Fault::Type("forking if-statements are only allowed in operators and qufuncts".into()).at(pos)
                )
            }
        };
        match (branch, otherwise) {
            (true, _) => self.exec_block(then, pos),
            (false, Some(b)) => self.exec_block(b, pos),
            (false, None) => Ok(Flow::Normal),
        }
    }

    /// Calls a builtin, subroutine or function. Returns the function result.
    pub(super) fn call(&mut self, name: &str, args: &[Expr], invert: bool, pos: Pos) -> Res<Option<Value>> {
        if MATH_FUNCTIONS.contains(&name) {
            return self.math(name, args, pos).map(Some);
        }
        if let Some(b) = Builtin::from_name(name) {
            self.call_builtin(b, args, invert, pos)?;
            return Ok(None);
        }
        let sub = self.subs.get(name).cloned().ok_or_else(|| Fault::Undefined(name.to_string()).at(pos))?;
        if self.frames.len() > MAX_CALL_DEPTH {
            return Err(Fault::Type(format!("calls nested deeper than {MAX_CALL_DEPTH}")).at(pos));
        }
        let bindings = self.bind(&sub, args, pos)?;
        match sub.kind {
            SubKind::Function => self.run_function(&sub, bindings, pos).map(Some),
            SubKind::Procedure => {
                if invert {
                    return Err(Fault::Type(format!("procedure `{name}` cannot be inverted")).at(pos));
                }
                let (flow, _) = self.run_body(&sub, bindings, None, pos)?;
                if flow == Flow::Exit {
                    return Err(Fault::Type("exit inside a procedure call".into()).at(pos));
                }
                Ok(None)
            }
            SubKind::Operator | SubKind::Qufunct => {
                let mut tape = self.operator_tape(&sub, bindings, pos)?;
                if invert {
                    tape = tape.adjoint();
                }
                self.emit(tape, pos)?;
                Ok(None)
            }
        }
    }

    fn call_builtin(&mut self, b: Builtin, args: &[Expr], invert: bool, pos: Pos) -> Res<()> {
        if args.len() != b.params().len() {
            return Err(Fault::Type(format!("`{}` takes {} argument(s)", b.name(), b.params().len())).at(pos));
        }
        let mut reals = Vec::new();
        let mut regs = Vec::new();
        for (p, a) in b.params().iter().zip(args) {
            match p {
                ParamType::Classical(_) => {
                    let v = self.eval(a)?;
                    reals.push(
                        v.as_real().ok_or_else(|| {
                            Fault::Type(format!("expected a real, found {}", v.type_name())).at(a.pos)
                        })?,
                    );
                }
                ParamType::Quantum(_) => regs.push(self.eval_reg(a)?),
            }
        }
        disjoint(&regs).map_err(|e| e.at(pos))?;
        let mut tape = b.lower(&reals, &regs).map_err(|e| Fault::from(e).at(pos))?;
        if invert {
            tape = tape.adjoint();
        }
        self.emit(tape, pos)
    }

    /// Evaluates call arguments in the caller's frame.
    pub(super) fn bind(&mut self, sub: &SubDecl, args: &[Expr], pos: Pos) -> Res<Vec<(String, Binding)>> {
        if args.len() != sub.params.len() {
            return Err(Fault::Type(format!(
                "`{}` takes {} argument(s), {} given",
                sub.name,
                sub.params.len(),
                args.len()
            ))
            .at(pos));
        }
        let mut out = Vec::with_capacity(args.len());
        let mut regs = Vec::new();
        for (p, a) in sub.params.iter().zip(args) {
            let b = match p.ty {
                ParamType::Classical(t) => {
                    let v = self.eval(a)?;
                    let v = v.clone().coerce(t).ok_or_else(|| {
                        Fault::Type(format!("parameter `{}` expects {}, found {}", p.name, t.keyword(), v.type_name()))
                            .at(a.pos)
                    })?;
                    Binding::Var(t, v)
                }
                ParamType::Quantum(q) => {
                    let r = self.eval_reg(a)?;
                    regs.push(r.clone());
                    Binding::Reg(r, q)
                }
            };
            out.push((p.name.clone(), b));
        }
        disjoint(&regs).map_err(|e| e.at(pos))?;
        Ok(out)
    }

    /// Runs a body in a fresh frame. Returns how it ended and, for forking
    /// runs, the completed path.
    fn run_body(
        &mut self,
        sub: &SubDecl,
        bindings: Vec<(String, Binding)>,
        fork: Option<ForkPath>,
        pos: Pos,
    ) -> Res<(Flow, Option<ForkPath>)> {
        let mut scope = Scope::default();
        scope.names.extend(bindings);
        self.frames.push(Frame { scopes: vec![scope], fork });
        let flow = self.exec_stmts(&sub.body)?;
        self.pop_scope(pos)?;
        let frame = self.frames.pop().expect("pushed above");
        let path = frame.fork.map(|mut p| {
            let last = std::mem::take(self.recorders.last_mut().expect("forking bodies are recorded"));
            p.finish(last);
            p
        });
        Ok((flow, path))
    }

    fn run_function(&mut self, sub: &SubDecl, bindings: Vec<(String, Binding)>, pos: Pos) -> Res<Value> {
        let ret = sub.return_type.expect("functions have a return type");
        match self.run_body(sub, bindings, None, pos)? {
            (Flow::Return(Some(v)), _) => v.clone().coerce(ret).ok_or_else(|| {
                Fault::Type(format!("`{}` returns {}, not {}", sub.name, ret.keyword(), v.type_name())).at(pos)
            }),
            _ => Err(Fault::NoReturn(sub.name.clone()).at(pos)),
        }
    }

    /// The tape of an operator or qufunct call, before inversion.
    fn operator_tape(&mut self, sub: &Rc<SubDecl>, bindings: Vec<(String, Binding)>, pos: Pos) -> Res<GateTape> {
        if sub.has_scratch() {
            return Ok(self.scratch_call(sub, bindings, pos)?.tape());
        }
        let mut tape = GateTape::new();
        for (name, b) in &bindings {
            if let Binding::Reg(r, QuantumType::Quvoid) = b {
                tape.push_check(CheckKind::QuvoidEntry, r, name.as_str());
            }
        }
        tape.append(self.body_tape(sub, bindings, pos)?);
        Ok(tape)
    }

    /// Records a body. Bodies with forking ifs are run once per classical
    /// path and the new segments of each run are gated on the path condition.
    fn body_tape(&mut self, sub: &SubDecl, bindings: Vec<(String, Binding)>, pos: Pos) -> Res<GateTape> {
        if !self.forking.contains(&sub.name) {
            self.recorders.push(GateTape::new());
            self.run_body(sub, bindings, None, pos)?;
            return Ok(self.recorders.pop().expect("pushed above"));
        }
        let mut out = GateTape::new();
        let mut next = Some(ForkPath::first());
        let mut runs = 0;
        while let Some(path) = next {
            runs += 1;
            if runs > MAX_FORK_PATHS {
                return Err(Fault::TooManyPaths.at(pos));
            }
            self.recorders.push(GateTape::new());
            let (_, done) = self.run_body(sub, bindings.clone(), Some(path), pos)?;
            self.recorders.pop();
            let path = done.expect("forking run returns its path");
            for (cond, segment) in path.new_segments() {
                if segment.is_empty() {
                    continue;
                }
                let exclude: Vec<usize> = segment.qubits().into_iter().collect();
                let plan = synthesize_enable(&to_xdnf(&cond), &mut self.machine, &exclude, false)
                    .map_err(|e| Fault::from(e).at(pos))?;
                out.append(plan.gate(segment, None).map_err(|e| Fault::from(e).at(pos))?);
                plan.release(&mut self.machine).map_err(|e| Fault::from(e).at(pos))?;
            }
            next = path.next();
        }
        Ok(out)
    }

    /// Builds `F†(x,t,s) · fanout(t,y) · F(x,t,s)` for a qufunct with
    /// `quscratch` registers, where `t` is a fresh auxiliary register
    /// standing in for the `quvoid` targets `y`.
    pub(super) fn scratch_call(
        &mut self,
        sub: &SubDecl,
        mut bindings: Vec<(String, Binding)>,
        pos: Pos,
    ) -> Res<ScratchStages> {
        let at = |e: crate::machine::MachineError| Fault::from(e).at(pos);
        let mut target: Vec<usize> = Vec::new();
        let mut scratch = Vec::new();
        for (_, b) in &bindings {
            match b {
                Binding::Reg(r, QuantumType::Quvoid) => target.extend_from_slice(r.qubits()),
                Binding::Reg(r, QuantumType::Quscratch) => scratch.push(r.clone()),
                _ => {}
            }
        }
        let target = RegisterMap::new(target).map_err(at)?;
        let aux = self.machine.allocate_register(target.len()).map_err(at)?;
        let mut offset = 0;
        for (_, b) in &mut bindings {
            if let Binding::Reg(r, QuantumType::Quvoid) = b {
                *r = RegisterMap::new(aux.qubits()[offset..offset + r.len()].to_vec()).map_err(at)?;
                offset += r.len();
            }
        }
        let forward = self.body_tape(sub, bindings, pos)?;
        let fanout = stdgates::fanout(&aux, &target).map_err(at)?;
        let backward = forward.adjoint();
        self.machine.release_register(&aux).map_err(at)?;
        Ok(ScratchStages { aux, target, scratch, forward, fanout, backward })
    }
}

fn default_value(ty: ClassicalType) -> Value {
    match ty {
        ClassicalType::Int => Value::Int(0),
        ClassicalType::Real => Value::Real(0.0),
        ClassicalType::Complex => Value::Complex(num_complex::Complex64::new(0.0, 0.0)),
        ClassicalType::Boolean => Value::Bool(false),
    }
}

fn disjoint(regs: &[RegisterMap]) -> Result<(), Fault> {
    for (i, a) in regs.iter().enumerate() {
        for b in &regs[i + 1..] {
            if let Some(q) = a.overlap(b) {
                return Err(crate::machine::MachineError::Overlap(q).into());
            }
        }
    }
    Ok(())
}
