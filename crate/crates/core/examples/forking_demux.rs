//! A forking if-statement: `demux` accumulates the selection register in a
//! classical variable, so the body is run once per classical path.

use qclite::cli::echo_state;
use qclite::corpus;
use qclite::interp::Interpreter;
use qclite::machine::MachineState;

fn main() {
    for k in 0..4u64 {
        let mut it = Interpreter::new(MachineState::new(8, 0).unwrap());
        it.run(corpus::DEMUX).unwrap();
        it.run("qureg s[2]; qureg q[4];").unwrap();
        it.machine_mut().prepare_basis(k).unwrap();
        it.run("demux(s,q);").unwrap();
        println!("s={k}: {}", echo_state(it.machine()));
    }

    let mut it = Interpreter::new(MachineState::new(8, 0).unwrap());
    it.run(corpus::DEMUX).unwrap();
    it.run("qureg s[2]; qureg q[4]; H(s);").unwrap();
    let tape = it.record("demux(s,q);").unwrap();
    println!("\ngates for 2 selection qubits:\n{tape}");
    tape.apply(it.machine_mut(), true).unwrap();
    println!("superposition: {}", echo_state(it.machine()));
}
