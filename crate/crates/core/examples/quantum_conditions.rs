//! Quantum if-statements with compound conditions, and the enable plans
//! the condition compiler produces for them.

use qclite::cli::{replay, Session, SessionConfig};
use qclite::corpus;
use qclite::machine::MachineState;
use qclite::qcond::{synthesize_enable, to_xdnf, CondExpr};

fn main() {
    let mut s = Session::new(&SessionConfig::default()).unwrap();
    s.interpreter_mut().run(corpus::INC).unwrap();
    for line in [
        "qureg q[4]; qureg b[1]; qureg a[1];",
        "H(a & b);",
        "if a and b { inc(q); }",
        "if a or b { inc(q); }",
        "if not (a or b) { inc(q); }",
        "if a { inc(q); } else { !inc(q); }",
    ] {
        println!("qcl> {line}");
        if let qclite::cli::LineOutcome::Done(out) = s.feed_line(line) {
            print!("{out}");
        }
    }

    let mut m = MachineState::new(8, 0).unwrap();
    let (a, b, c) = (CondExpr::qubit(0), CondExpr::qubit(1), CondExpr::qubit(2));
    m.allocate_register(3).unwrap();
    for cond in [
        CondExpr::and(a.clone(), b.clone()),
        CondExpr::or(a.clone(), b.clone()),
        CondExpr::not(CondExpr::or(a.clone(), b.clone())),
        CondExpr::xor(CondExpr::and(a, b), c),
    ] {
        let poly = to_xdnf(&cond);
        let plan = synthesize_enable(&poly, &mut m, &[], false).unwrap();
        println!("\n{cond}  =  {poly}");
        match plan.scratch() {
            None => println!("gate directly on {:?}", plan.controls()),
            Some(e) => {
                let tape = plan.gate(&Default::default(), None).unwrap();
                println!("compute into {e}, then uncompute:\n{tape}");
            }
        }
        plan.release(&mut m).unwrap();
    }

    let mut check = Session::new(&SessionConfig::default()).unwrap();
    check.interpreter_mut().run(corpus::CINC).unwrap();
    let ok = replay(
        &mut check,
        "qcl> qureg x[2]; qureg e[1];\nqcl> Not(e);\n[3/32] 1 |100>\nqcl> cinc(x,e);\n[3/32] 1 |101>\n",
    );
    println!("\ncinc replay: {ok:?}");
}
