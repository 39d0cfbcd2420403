//! The Fourier transform operator, its inverse via `!`, and its matrix.

use qclite::cli::{Session, SessionConfig};
use qclite::corpus;

fn main() {
    let mut s = Session::new(&SessionConfig::default()).expect("session");
    s.interpreter_mut().run(corpus::DFT).expect("dft loads");
    for line in ["qureg q[2];", "dft(q);", "!dft(q);", "Not(q[0]);", "dft(q);"] {
        println!("qcl> {line}");
        match s.feed_line(line) {
            qclite::cli::LineOutcome::Done(out) => print!("{out}"),
            other => println!("{other:?}"),
        }
    }

    let q = s.interpreter().register("q").unwrap();
    let tape = s.interpreter_mut().record("dft(q);").expect("records");
    println!("\n{} gates:\n{tape}", tape.gate_count());
    let m = tape.matrix_on(q.qubits()).expect("unitary");
    println!("matrix (x2):");
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format!("{:>5.2}", m[(r, c)] * 2.0)).collect();
        println!("  {}", row.join(" "));
    }
}
