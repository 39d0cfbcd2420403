//! Seeded measurement: the same seed gives the same outcomes.

use qclite::corpus;
use qclite::interp::{Interpreter, Value};
use qclite::machine::MachineState;

const SHOTS: &str = "
int ones = 0; int k; int i;
qureg q[1];
for i = 1 to 1000 {
  H(q);
  measure q,k;
  if k == 1 { Not(q); ones = ones+1; }
}
";

fn main() {
    for seed in [1, 1, 2] {
        let mut it = Interpreter::new(MachineState::new(4, seed).unwrap());
        it.run(SHOTS).unwrap();
        let Some(Value::Int(ones)) = it.value("ones") else { unreachable!() };
        println!("seed {seed}: {ones} ones in 1000 shots");
    }

    let mut it = Interpreter::new(MachineState::new(8, 3).unwrap());
    it.run(corpus::RETRY).unwrap();
    it.run("nonzero(3); nonzero(3); nonzero(3);").unwrap();
    print!("value tries\n{}", it.take_output());
}
