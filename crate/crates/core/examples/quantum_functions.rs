//! Quantum functions are permutations of basis states: print the value
//! tables of `inc` and `parity`.

use qclite::corpus;
use qclite::interp::Interpreter;
use qclite::machine::MachineState;

fn table(it: &mut Interpreter, call: &str, regs: &[&str]) {
    let qubits: Vec<usize> = regs.iter().flat_map(|r| it.register(r).unwrap().qubits().to_vec()).collect();
    let m = it.record(call).unwrap().matrix_on(&qubits).unwrap();
    let width = qubits.len();
    println!("{call}");
    for col in 0..m.ncols() {
        let row = (0..m.nrows()).find(|&r| m[(r, col)].norm() > 0.5).unwrap();
        println!("  {col:0width$b} -> {row:0width$b}");
    }
}

fn main() {
    let mut it = Interpreter::new(MachineState::new(8, 0).unwrap());
    it.run(corpus::INC).unwrap();
    it.run(corpus::PARITY).unwrap();
    it.run("qureg x[3]; qureg y[1];").unwrap();
    table(&mut it, "inc(x);", &["x"]);
    table(&mut it, "!inc(x);", &["x"]);
    // Positions 0..2 are x, position 3 is y.
    table(&mut it, "parity(x,y);", &["x", "y"]);

    // Calling parity with a non-empty target is caught at run time.
    it.run("Not(y);").unwrap();
    match it.run("parity(x,y);") {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("{e}"),
    }
}
