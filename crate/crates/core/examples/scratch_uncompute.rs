//! A qufunct with a `quscratch` register. The call computes into an
//! auxiliary register, copies the result out and uncomputes, leaving the
//! scratch register empty.

use qclite::corpus;
use qclite::interp::Interpreter;
use qclite::machine::MachineState;

fn main() {
    let mut it = Interpreter::new(MachineState::new(12, 0).unwrap());
    it.run(corpus::SCRATCH_PARITY).unwrap();
    it.run("qureg x[3]; qureg y[1]; qureg s[2];").unwrap();
    let x = it.register("x").unwrap();

    let stages = it.scratch_stages("sparity(x,y,s);").unwrap();
    println!("target {} via auxiliary {}", stages.target, stages.aux);
    it.machine_mut().prepare_basis(x.bits_for(0b100) as u64).unwrap();
    let show = |it: &mut Interpreter, label: &str| {
        println!("{label:<10} {}", qclite::cli::echo_state(it.machine()));
    };
    show(&mut it, "input");
    for (label, tape) in [("forward", &stages.forward), ("fanout", &stages.fanout), ("backward", &stages.backward)] {
        tape.apply(it.machine_mut(), true).unwrap();
        show(&mut it, label);
    }
    // The auxiliary qubit is not allocated, so it does not show above.
    println!("auxiliary empty: {}", it.machine().is_empty_register(&stages.aux));

    println!("\nfull call tape:\n{}", stages.tape());
}
