//! Interactive sessions: the `qcl>` prompt, state echo and script runs.

use std::io::{self, BufRead, Write};

use crate::interp::{Error, Flow, Interpreter};
use crate::machine::{format_terms, MachineState, DEFAULT_DENSE_LIMIT};
use crate::syntax::parse_interactive;

pub const PROMPT: &str = "qcl> ";

#[derive(Debug, Clone, PartialEq)]
pub struct SessionConfig {
    pub total_qubits: usize,
    pub seed: u64,
    /// Print the machine state after every statement that changes it.
    pub echo: bool,
    /// Runtime emptiness checks for quvoid, quscratch and local registers.
    pub checks: bool,
    pub dense_limit: usize,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig { total_qubits: 32, seed: 0, echo: true, checks: true, dense_limit: DEFAULT_DENSE_LIMIT }
    }
}

/// What happened to one line of input.
#[derive(Debug, Clone, PartialEq)]
pub enum LineOutcome {
    /// The line was buffered; the statement continues on the next line.
    Incomplete,
    Done(String),
    /// `exit;` was executed.
    Exit(String),
    /// Output produced before the failure, and the error.
    Failed(String, Error),
}

pub struct Session {
    interp: Interpreter,
    echo: bool,
    pending: String,
}

impl Session {
    pub fn new(config: &SessionConfig) -> Result<Self, Error> {
        let machine = MachineState::new(config.total_qubits, config.seed)
            .map_err(|e| Error::Io(e.to_string()))?
            .with_dense_limit(config.dense_limit);
        let mut interp = Interpreter::new(machine);
        interp.set_checks(config.checks);
        Ok(Session { interp, echo: config.echo, pending: String::new() })
    }

    pub fn interpreter(&self) -> &Interpreter {
        &self.interp
    }

    pub fn interpreter_mut(&mut self) -> &mut Interpreter {
        &mut self.interp
    }

    pub fn machine(&self) -> &MachineState {
        self.interp.machine()
    }

    pub fn set_echo(&mut self, on: bool) {
        self.echo = on;
    }

    /// Whether a multi-line statement is being collected.
    pub fn is_pending(&self) -> bool {
        !self.pending.is_empty()
    }

    /// Runs source text, echoing the state after each top-level statement
    /// that changed it.
    pub fn exec(&mut self, src: &str) -> Result<(String, Flow), (String, Error)> {
        let mut out = String::new();
        let stmts = self.interp.load_tree(parse_interactive(src).map_err(|e| (String::new(), e.into()))?);
        let stmts = stmts.map_err(|e| (String::new(), e))?;
        for s in &stmts {
            let before = self.interp.machine().revision();
            let res = self.interp.exec_top(s);
            out.push_str(&self.interp.take_output());
            let flow = res.map_err(|e| (out.clone(), Error::from(e)))?;
            if self.echo && self.interp.machine().revision() != before {
                out.push_str(&echo_state(self.interp.machine()));
                out.push('\n');
            }
            if flow == Flow::Exit {
                return Ok((out, Flow::Exit));
            }
        }
        Ok((out, Flow::Normal))
    }

    /// Feeds one line of interactive input. Lines that end inside a block
    /// or expression are buffered until the statement is complete.
    pub fn feed_line(&mut self, line: &str) -> LineOutcome {
        if !self.pending.is_empty() {
            self.pending.push('\n');
        }
        self.pending.push_str(line);
        if let Err(e) = parse_interactive(&self.pending) {
            if e.incomplete {
                return LineOutcome::Incomplete;
            }
        }
        let src = std::mem::take(&mut self.pending);
        match self.exec(&src) {
            Ok((out, Flow::Exit)) => LineOutcome::Exit(out),
            Ok((out, _)) => LineOutcome::Done(out),
            Err((out, e)) => LineOutcome::Failed(out, e),
        }
    }
}

/// `[a/T] terms` over the allocated qubits, most significant first.
pub fn echo_state(machine: &MachineState) -> String {
    let mut qubits = machine.allocated_qubits();
    qubits.sort_unstable_by(|a, b| b.cmp(a));
    format!("[{}/{}] {}", qubits.len(), machine.total_qubits(), format_terms(machine.amplitudes(), &qubits))
}

/// Reads statements from `input` until end of input or `exit;`. With
/// `show_input` set each line is repeated after the prompt, so piped
/// sessions read like a transcript.
pub fn repl_loop(session: &mut Session, input: impl BufRead, out: &mut impl Write, show_input: bool) -> io::Result<()> {
    let mut lines = input.lines();
    loop {
        write!(out, "{}", if session.is_pending() { "...> " } else { PROMPT })?;
        out.flush()?;
        let Some(line) = lines.next() else {
            writeln!(out)?;
            return Ok(());
        };
        let line = line?;
        if show_input {
            writeln!(out, "{line}")?;
        }
        match session.feed_line(&line) {
            LineOutcome::Incomplete => {}
            LineOutcome::Done(text) => write!(out, "{text}")?,
            LineOutcome::Exit(text) => {
                write!(out, "{text}")?;
                return Ok(());
            }
            LineOutcome::Failed(text, e) => {
                write!(out, "{text}")?;
                for l in e.to_string().lines() {
                    writeln!(out, "error: {l}")?;
                }
            }
        }
    }
}

/// Runs a whole program. Returns the process exit status.
pub fn run_script(session: &mut Session, src: &str, out: &mut impl Write, err: &mut impl Write) -> i32 {
    match session.exec(src) {
        Ok((text, _)) => {
            let _ = write!(out, "{text}");
            0
        }
        Err((text, e)) => {
            let _ = write!(out, "{text}");
            for l in e.to_string().lines() {
                let _ = writeln!(err, "error: {l}");
            }
            1
        }
    }
}

/// A line of a transcript whose output did not match.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub input: String,
    pub expected: Vec<String>,
    pub actual: Vec<String>,
}

/// Replays a transcript of `qcl>` input lines, each followed by its
/// expected output lines, and compares the output line by line.
pub fn replay(session: &mut Session, transcript: &str) -> Result<(), Mismatch> {
    let mut steps: Vec<(String, Vec<String>)> = Vec::new();
    for line in transcript.lines() {
        if let Some(input) = line.strip_prefix(PROMPT.trim_end()) {
            steps.push((input.trim_start().to_string(), Vec::new()));
        } else if let Some((_, expected)) = steps.last_mut() {
            expected.push(line.trim_end().to_string());
        }
    }
    for (input, expected) in steps {
        let text = match session.feed_line(&input) {
            LineOutcome::Incomplete => continue,
            LineOutcome::Done(t) | LineOutcome::Exit(t) => t,
            LineOutcome::Failed(t, e) => format!("{t}error: {e}\n"),
        };
        let actual: Vec<String> = text.lines().map(|l| l.trim_end().to_string()).collect();
        if actual != expected {
            return Err(Mismatch { input, expected, actual });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(total: usize) -> Session {
        Session::new(&SessionConfig { total_qubits: total, ..SessionConfig::default() }).unwrap()
    }

    #[test]
    fn echo_only_on_state_change() {
        let mut s = session(4);
        assert_eq!(s.feed_line("qureg a[2];"), LineOutcome::Done(String::new()));
        assert_eq!(s.feed_line("Not(a[0]);"), LineOutcome::Done("[2/4] 1 |01>\n".into()));
        assert_eq!(s.feed_line("print #a;"), LineOutcome::Done("2\n".into()));
    }

    #[test]
    fn empty_echo() {
        let s = session(3);
        assert_eq!(echo_state(s.machine()), "[0/3] 1 |>");
    }

    #[test]
    fn multi_line_input() {
        let mut s = session(4);
        assert_eq!(s.feed_line("qufunct f(qureg q) {"), LineOutcome::Incomplete);
        assert_eq!(s.feed_line("  Not(q);"), LineOutcome::Incomplete);
        assert_eq!(s.feed_line("}"), LineOutcome::Done(String::new()));
        assert!(!s.is_pending());
        assert!(s.interpreter().subroutine("f").is_some());
    }

    #[test]
    fn errors_keep_session_alive() {
        let mut s = session(4);
        let input = "qureg a[1];\nprint b;\nNot(a);\nexit;\nNot(a);\n";
        let mut out = Vec::new();
        repl_loop(&mut s, input.as_bytes(), &mut out, false).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("error: "), "{text}");
        assert!(text.contains("[1/4] 1 |1>"), "{text}");
        assert_eq!(s.machine().amplitude(1).re, 1.0);
    }

    #[test]
    fn script_exit_status() {
        let mut s = session(4);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run_script(&mut s, "print 1;", &mut out, &mut err), 0);
        assert_eq!(run_script(&mut s, "print 1/0;", &mut out, &mut err), 1);
        assert!(String::from_utf8(err).unwrap().starts_with("error: runtime error"));
    }
}
