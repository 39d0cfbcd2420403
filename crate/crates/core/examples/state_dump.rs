//! Allocate two qubits on a 4-qubit machine, rotate one, apply a Hadamard
//! to the other and dump the product state.

use qclite::interp::Interpreter;
use qclite::machine::MachineState;

fn main() {
    let mut it = Interpreter::new(MachineState::new(4, 0).expect("machine"));
    it.run("qureg a[1]; qureg b[1]; Rot(-pi/3,a); H(b); dump;").expect("program runs");
    print!("{}", it.take_output());

    let a = it.register("a").unwrap();
    let b = it.register("b").unwrap();
    println!("a = {a}, b = {b}");
    for (i, amp) in it.machine().amplitudes().iter().enumerate() {
        println!("|{i:04b}>  {amp:.6}");
    }
}
