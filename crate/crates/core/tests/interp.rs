use qclite::corpus;
use qclite::interp::{Error, Interpreter, StaticRule, Value};
use qclite::machine::MachineState;

fn interp(total: usize) -> Interpreter {
    Interpreter::new(MachineState::new(total, 7).unwrap())
}

fn run(it: &mut Interpreter, src: &str) -> String {
    it.run(src).unwrap_or_else(|e| panic!("{e}\n{src}"));
    it.take_output()
}

#[test]
fn product_state_dump() {
    let mut it = interp(4);
    let out = run(&mut it, "qureg a[1]; qureg b[1]; Rot(-pi/3,a); H(b); dump;");
    assert_eq!(
        out,
        ": STATE: 2 / 4 qubits allocated, 2 / 4 qubits free\n\
         0.612372 |0000> + 0.612372 |0010> + 0.353553 |0001> + 0.353553 |0011>\n"
    );
}

#[test]
fn dft_and_inverse() {
    let mut it = interp(32);
    run(&mut it, corpus::DFT);
    run(&mut it, "qureg q[2]; dft(q);");
    for k in 0..4 {
        assert!((it.machine().amplitude(k).re - 0.5).abs() < 1e-12);
    }
    run(&mut it, "!dft(q);");
    assert!((it.machine().amplitude(0).re - 1.0).abs() < 1e-12);
}

#[test]
fn conditional_increment_transcript() {
    let mut it = interp(32);
    run(&mut it, corpus::INC);
    run(&mut it, "qureg q[4]; qureg b[1]; qureg a[1]; H(a & b);");
    let value = |it: &Interpreter, a: u64, b: u64| {
        let base = (a << 5) | (b << 4);
        (0..16).find(|&q| it.machine().amplitude(base | q).norm() > 0.1).unwrap()
    };
    run(&mut it, "if a and b { inc(q); }");
    assert_eq!([value(&it, 0, 0), value(&it, 0, 1), value(&it, 1, 0), value(&it, 1, 1)], [0, 0, 0, 1]);
    run(&mut it, "if a or b { inc(q); }");
    assert_eq!([value(&it, 0, 0), value(&it, 0, 1), value(&it, 1, 0), value(&it, 1, 1)], [0, 1, 1, 2]);
    run(&mut it, "if not (a or b) { inc(q); }");
    assert_eq!([value(&it, 0, 0), value(&it, 0, 1), value(&it, 1, 0), value(&it, 1, 1)], [1, 1, 1, 2]);
    assert_eq!(it.machine().allocated_count(), 6);
}

#[test]
fn else_branch_decrements() {
    let mut it = interp(8);
    run(&mut it, corpus::INC);
    run(&mut it, "qureg x[3]; qureg e[1]; H(e); if e { inc(x); } else { !inc(x); }");
    // e=1 -> x=1, e=0 -> x=7
    assert!((it.machine().amplitude(0b1001).norm() - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((it.machine().amplitude(0b0111).norm() - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn demux_selects_output() {
    for s in 0..4u64 {
        let mut it2 = interp(8);
        run(&mut it2, corpus::DEMUX);
        run(&mut it2, "qureg s[2]; qureg q[4];");
        it2.machine_mut().prepare_basis(s).unwrap();
        run(&mut it2, "demux(s,q);");
        let expect = s | (1 << (2 + s));
        assert!((it2.machine().amplitude(expect).norm() - 1.0).abs() < 1e-12, "s={s}");
    }
}

#[test]
fn scratch_parity_cleans_up() {
    let mut it = interp(16);
    run(&mut it, corpus::SCRATCH_PARITY);
    run(&mut it, "qureg x[4]; qureg y[1]; qureg s[3];");
    it.machine_mut().prepare_basis(0b1011).unwrap();
    run(&mut it, "sparity(x,y,s);");
    assert!((it.machine().amplitude(0b1_1011).norm() - 1.0).abs() < 1e-12);
    assert_eq!(it.machine().allocated_count(), 8);
}

#[test]
fn retry_procedure() {
    let mut it = interp(8);
    let out = run(&mut it, &format!("{}\nnonzero(3);", corpus::RETRY));
    let parts: Vec<i64> = out.split_whitespace().map(|s| s.parse().unwrap()).collect();
    assert!(parts[0] >= 1 && parts[0] < 8 && parts[1] >= 1);
    assert_eq!(it.machine().allocated_count(), 0);
}

#[test]
fn functions_and_classical_values() {
    let mut it = interp(4);
    let out = run(
        &mut it,
        "int fact(int n) { if n <= 1 { return 1; } return n*fact(n-1); }\n\
         int x = fact(5); real r = 1/2; print x, r, 7 mod 3, 2^-1, (1,2)*(0,1);",
    );
    assert_eq!(out, "120 0 1 0.5 (-2,1)\n");
    assert_eq!(it.value("x"), Some(Value::Int(120)));
}

#[test]
fn runtime_errors_roll_back() {
    let mut it = interp(4);
    run(&mut it, "qureg a[2];");
    let err = it.run("qureg b[1]; print 1/0;").unwrap_err();
    assert!(matches!(err, Error::Runtime(_)), "{err}");
    assert_eq!(it.machine().allocated_count(), 3);
}

#[test]
fn static_rules_reported() {
    let mut it = interp(4);
    let err = it.run("operator f(qureg q) { measure q; }").unwrap_err();
    assert!(err.static_errors().iter().any(|e| e.rule == StaticRule::NonUnitary), "{err}");
}

#[test]
fn quvoid_must_be_empty() {
    let mut it = interp(8);
    run(&mut it, corpus::PARITY);
    run(&mut it, "qureg x[2]; qureg y[1]; Not(y);");
    assert!(it.run("parity(x,y);").is_err());
    it.set_checks(false);
    run(&mut it, "parity(x,y);");
}
