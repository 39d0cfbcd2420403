//! Programs rejected before they run, with the rule each one breaks.

use qclite::interp::Interpreter;
use qclite::machine::MachineState;

const PROGRAMS: &[&str] = &[
    "procedure g(qureg q) { H(q); } operator f(qureg q) { g(q); }",
    "int g = 1; operator f(qureg q) { Rot(g*pi,q); }",
    "operator f(qureg q) { Rot(random(),q); }",
    "operator f(qureg q) { measure q; }",
    "qufunct f(qureg q) { H(q); }",
    "qufunct f(quconst c) { Not(c); }",
    "qufunct g(qureg x) { Not(x); } qureg a[1]; qureg b[1]; if a { g(b); }",
    "qureg a[1]; int n = 0; if a { n = 1; }",
    "operator f(qureg q) { print 1; }",
];

fn main() {
    for src in PROGRAMS {
        let mut it = Interpreter::new(MachineState::new(4, 0).unwrap());
        println!("{src}");
        match it.load(src) {
            Ok(_) => println!("  accepted"),
            Err(e) => {
                for line in e.to_string().lines() {
                    println!("  {line}");
                }
            }
        }
    }
}
