//! Drive the interactive loop from a string, as if piped into the binary.

use qclite::cli::{repl_loop, Session, SessionConfig};

const INPUT: &str = "\
qufunct swap(qureg a,qureg b) {
  CNot(a,b); CNot(b,a); CNot(a,b);
}
qureg x[1]; qureg y[1];
Not(x);
swap(x,y);
H(y & x);
print #x, pi;
operator bad(qureg q) { measure q; }
dump;
exit;
";

fn main() {
    let config = SessionConfig { total_qubits: 4, ..SessionConfig::default() };
    let mut session = Session::new(&config).unwrap();
    let mut out = Vec::new();
    repl_loop(&mut session, INPUT.as_bytes(), &mut out, true).unwrap();
    print!("{}", String::from_utf8(out).unwrap());
}
