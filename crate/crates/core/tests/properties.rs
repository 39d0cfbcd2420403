use num_complex::Complex64;
use proptest::prelude::*;

use qclite::corpus;
use qclite::interp::Interpreter;
use qclite::machine::{MachineState, PrimitiveGate};
use qclite::syntax::{parse_source, BinaryOp, Expr, ExprKind, Pos, StmtKind, UnaryOp};
use qclite::tape::GateTape;

fn interp(total: usize, setup: &str) -> Interpreter {
    let mut it = Interpreter::new(MachineState::new(total, 0).unwrap());
    for (_, src) in corpus::ALL {
        it.run(src).unwrap();
    }
    it.run(setup).unwrap();
    it
}

fn max_diff(a: &nalgebra::DMatrix<Complex64>, b: &nalgebra::DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn corpus_round_trips_through_pretty_printer() {
    for (name, src) in corpus::ALL {
        let tree = parse_source(src).unwrap();
        let again = parse_source(&tree.to_string()).unwrap_or_else(|e| panic!("{name}: {e}\n{tree}"));
        assert_eq!(tree, again, "{name}");
    }
}

fn expr(kind: ExprKind) -> Expr {
    Expr::new(kind, Pos::default())
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..1000).prop_map(|i| expr(ExprKind::Int(i))),
        (0i64..64).prop_map(|i| expr(ExprKind::Real(i as f64 / 8.0 + 0.5))),
        prop::sample::select(vec!["a", "b", "n", "pi"]).prop_map(|v| expr(ExprKind::Var(v.into()))),
    ];
    let ops = vec![
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
        BinaryOp::Mod,
        BinaryOp::Pow,
        BinaryOp::Eq,
        BinaryOp::Ne,
        BinaryOp::Lt,
        BinaryOp::Le,
        BinaryOp::Gt,
        BinaryOp::Ge,
        BinaryOp::And,
        BinaryOp::Or,
        BinaryOp::Xor,
        BinaryOp::Concat,
    ];
    leaf.prop_recursive(4, 32, 3, move |inner| {
        prop_oneof![
            (prop::sample::select(vec![UnaryOp::Neg, UnaryOp::Not, UnaryOp::Length]), inner.clone())
                .prop_map(|(op, a)| expr(ExprKind::Unary(op, Box::new(a)))),
            (prop::sample::select(ops.clone()), inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| expr(ExprKind::Binary(op, Box::new(a), Box::new(b)))),
            (inner.clone(), inner.clone()).prop_map(|(a, i)| expr(ExprKind::Index(Box::new(a), Box::new(i)))),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(|(a, f, t)| expr(ExprKind::Slice(
                Box::new(a),
                Box::new(f),
                Box::new(t)
            ))),
            prop::collection::vec(inner, 0..3).prop_map(|args| expr(ExprKind::Call("f".into(), args))),
        ]
    })
}

fn random_tape(qubits: usize) -> impl Strategy<Value = GateTape> {
    let gate = (0usize..4, 0..qubits, prop::collection::vec(0..qubits, 0..3), -3.0f64..3.0).prop_map(
        move |(kind, target, controls, angle)| {
            let controls: Vec<usize> = controls.into_iter().filter(|&c| c != target).collect();
            match kind {
                0 => PrimitiveGate::x(target),
                1 => PrimitiveGate::h(target),
                2 => PrimitiveGate::rot(angle, target),
                _ => PrimitiveGate::phase(angle),
            }
            .controlled_by(controls)
        },
    );
    prop::collection::vec(gate, 0..24).prop_map(GateTape::from_gates)
}

proptest! {
    #[test]
    fn expressions_round_trip(e in arb_expr()) {
        let src = format!("print {e};");
        let tree = parse_source(&src).map_err(|err| TestCaseError::fail(format!("{err}: {src}")))?;
        let qclite::syntax::Item::Stmt(stmt) = &tree.items[0] else { panic!("not a statement") };
        let StmtKind::Print(args) = &stmt.kind else { panic!("not print") };
        prop_assert_eq!(&args[0], &e, "{}", src);
    }

    #[test]
    fn gates_preserve_norm(tape in random_tape(5), seed in 0u64..1000) {
        let mut m = MachineState::new(5, seed).unwrap();
        let reg = m.allocate_register(5).unwrap();
        m.apply_gate(&PrimitiveGate::h(reg.qubit(0))).unwrap();
        tape.apply(&mut m, false).unwrap();
        prop_assert!((m.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn adjoint_undoes_tape(tape in random_tape(4)) {
        let mut both = tape.clone();
        both.append(tape.adjoint());
        let m = both.matrix_on(&[0, 1, 2, 3]).unwrap();
        prop_assert!(max_diff(&m, &nalgebra::DMatrix::identity(16, 16)) < 1e-9);
    }

    #[test]
    fn tape_matrix_is_unitary(tape in random_tape(4)) {
        let m = tape.matrix_on(&[0, 1, 2, 3]).unwrap();
        prop_assert!(max_diff(&(m.adjoint() * &m), &nalgebra::DMatrix::identity(16, 16)) < 1e-9);
    }

    #[test]
    fn operators_act_linearly(re in prop::collection::vec(-1.0f64..1.0, 8), im in prop::collection::vec(-1.0f64..1.0, 8)) {
        let mut it = interp(8, "qureg q[3];");
        let tape = it.record("dft(q); inc(q);").unwrap();
        let u = tape.matrix_on(&[0, 1, 2]).unwrap();
        let norm = re.iter().chain(&im).map(|x| x * x).sum::<f64>().sqrt().max(1e-3);
        let psi: Vec<Complex64> = re.iter().zip(&im).map(|(r, i)| Complex64::new(*r, *i) / norm).collect();
        let mut state = MachineState::new(3, 0).unwrap();
        state.allocate_register(3).unwrap();
        let expected = &u * nalgebra::DVector::from_vec(psi.clone());
        let mut total = nalgebra::DVector::from_element(8, Complex64::new(0.0, 0.0));
        for (k, c) in psi.iter().enumerate() {
            state.prepare_basis(k as u64).unwrap();
            tape.apply(&mut state, false).unwrap();
            for (i, a) in state.amplitudes().iter().enumerate() {
                total[i] += c * a;
            }
        }
        let d = (expected - total).iter().map(|x| x.norm()).fold(0.0, f64::max);
        prop_assert!(d < 1e-9);
    }
}

#[test]
fn nested_ifs_equal_conjunction() {
    let mut it = interp(8, "qureg a[1]; qureg b[1]; qureg x[3];");
    let regs = ["a", "b", "x"];
    let qubits: Vec<usize> = regs.iter().flat_map(|r| it.register(r).unwrap().qubits().to_vec()).collect();
    let nested = it.record("if a { if b { inc(x); } }").unwrap().matrix_on(&qubits).unwrap();
    let joined = it.record("if a and b { inc(x); }").unwrap().matrix_on(&qubits).unwrap();
    assert!(max_diff(&nested, &joined) < 1e-9);
}

#[test]
fn fork_with_equal_branches_is_unconditional() {
    let mut it = interp(8, "qureg a[1]; qureg x[3];");
    it.run("cond qufunct same(quconst a,qureg x) { int k = 0; if a { k = 1; inc(x); } else { k = 2; inc(x); } }")
        .unwrap();
    let qubits = [it.register("a").unwrap().qubits(), it.register("x").unwrap().qubits()].concat();
    let forked = it.record("same(a,x);").unwrap().matrix_on(&qubits).unwrap();
    let plain = it.record("inc(x);").unwrap().matrix_on(&qubits).unwrap();
    assert!(max_diff(&forked, &plain) < 1e-9);
}

#[test]
fn forking_else_branches_follow_each_path() {
    // x ends as 1 where a is set and 3 elsewhere.
    let mut it = interp(8, "qureg a[1]; qureg x[2];");
    it.run(
        "cond qufunct pick(quconst a,qureg x) { int k; if a { k = 1; } else { k = 3; } int i; \
         for i = 0 to 1 { if (k / 2^i) mod 2 == 1 { Not(x[i]); } } }",
    )
    .unwrap();
    it.run("H(a); pick(a,x);").unwrap();
    let amp = |i: u64| it.machine().amplitude(i).norm();
    let h = 0.5f64.sqrt();
    assert!((amp(0b011) - h).abs() < 1e-9);
    assert!((amp(0b110) - h).abs() < 1e-9);
}

#[test]
fn deterministic_reruns() {
    let run = |seed| {
        let mut it = Interpreter::new(MachineState::new(8, seed).unwrap());
        it.run(&format!("{}\nnonzero(4); nonzero(4);", corpus::RETRY)).unwrap();
        it.take_output()
    };
    assert_eq!(run(5), run(5));
}
