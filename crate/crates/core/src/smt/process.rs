//! SMT-LIB2 session over the standard streams of a child process.
//!
//! Responses are read on a helper thread and handed over a channel, so every
//! wait can be bounded by the session deadline. On expiry the child is
//! killed and the session is dead.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use crate::model::{Model, Value};
use crate::smt::emit::{collect_declarations, script_header, write_term, Declaration};
use crate::smt::model_parse::{parse_model_response, parse_value_response};
use crate::smt::session::{Phase, SatResult, SolverError, SolverSession};
use crate::smt::sexp::{self, paren_balance, ScanState, Sexp};
use crate::term::Term;

/// Environment variable naming the default solver command.
pub const SOLVER_ENV: &str = "MONOUF_SOLVER";
/// Used when neither a flag nor the environment names a solver.
pub const DEFAULT_SOLVER: &str = "z3 -in";

/// Program and arguments of an interactive SMT-LIB2 solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverCommand {
    pub program: String,
    pub args: Vec<String>,
}

impl SolverCommand {
    /// Splits a command line on whitespace.
    pub fn parse(line: &str) -> Option<SolverCommand> {
        let mut parts = line.split_whitespace().map(str::to_string);
        let program = parts.next()?;
        Some(SolverCommand {
            program,
            args: parts.collect(),
        })
    }

    /// `$MONOUF_SOLVER` if set, otherwise `z3 -in`.
    pub fn from_env() -> SolverCommand {
        std::env::var(SOLVER_ENV)
            .ok()
            .and_then(|s| SolverCommand::parse(&s))
            .unwrap_or_else(|| SolverCommand::parse(DEFAULT_SOLVER).unwrap())
    }

    /// Whether the program can be started at all.
    pub fn is_available(&self) -> bool {
        Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn()
            .map(|mut c| {
                drop(c.stdin.take());
                let _ = c.kill();
                let _ = c.wait();
            })
            .is_ok()
    }
}

impl fmt::Display for SolverCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.program)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

pub struct ProcessSession {
    command: SolverCommand,
    child: Child,
    stdin: BufWriter<ChildStdin>,
    lines: Receiver<String>,
    deadline: Option<Instant>,
    phase: Phase,
    declared: HashSet<String>,
    check_sat_calls: usize,
}

impl ProcessSession {
    /// Starts the solver and sends the script header for `logic`.
    pub fn spawn(command: &SolverCommand, logic: &str) -> Result<ProcessSession, SolverError> {
        let mut child = Command::new(&command.program)
            .args(&command.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| SolverError::Spawn {
                command: command.to_string(),
                source,
            })?;
        let stdin = BufWriter::new(child.stdin.take().ok_or(SolverError::Died)?);
        let stdout = child.stdout.take().ok_or(SolverError::Died)?;
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                match line {
                    Ok(l) => {
                        if tx.send(l).is_err() {
                            break;
                        }
                    }
                    Err(_) => break,
                }
            }
        });
        let mut session = ProcessSession {
            command: command.clone(),
            child,
            stdin,
            lines: rx,
            deadline: None,
            phase: Phase::Asserting,
            declared: HashSet::new(),
            check_sat_calls: 0,
        };
        session.send(&script_header(logic, true))?;
        Ok(session)
    }

    pub fn command(&self) -> &SolverCommand {
        &self.command
    }

    fn send(&mut self, text: &str) -> Result<(), SolverError> {
        if self.phase == Phase::Dead {
            return Err(SolverError::Died);
        }
        self.stdin.write_all(text.as_bytes())?;
        if !text.ends_with('\n') {
            self.stdin.write_all(b"\n")?;
        }
        self.stdin.flush().map_err(|e| {
            self.phase = Phase::Dead;
            SolverError::Io(e)
        })
    }

    fn kill(&mut self) {
        self.phase = Phase::Dead;
        let _ = self.child.kill();
        let _ = self.child.wait();
    }

    /// Reads one complete s-expression (or bare atom) from the solver.
    fn read_response(&mut self) -> Result<String, SolverError> {
        let mut text = String::new();
        let mut scan = ScanState::default();
        loop {
            let line = match self.deadline {
                None => self
                    .lines
                    .recv()
                    .map_err(|_| RecvTimeoutError::Disconnected),
                Some(deadline) => {
                    let now = Instant::now();
                    if now >= deadline {
                        Err(RecvTimeoutError::Timeout)
                    } else {
                        self.lines.recv_timeout(deadline - now)
                    }
                }
            };
            match line {
                Ok(line) => {
                    paren_balance(&line, &mut scan);
                    if !text.is_empty() {
                        text.push('\n');
                    }
                    text.push_str(&line);
                    if scan.complete() {
                        return Ok(text);
                    }
                }
                Err(RecvTimeoutError::Timeout) => {
                    self.kill();
                    return Err(SolverError::Timeout);
                }
                Err(RecvTimeoutError::Disconnected) => {
                    self.kill();
                    return Err(SolverError::Died);
                }
            }
        }
    }

    fn check_error(text: &str) -> Result<(), SolverError> {
        if let Ok(Sexp::List(items)) = sexp::parse_one(text) {
            if items.first().is_some_and(|h| h.is_atom("error")) {
                let msg = match items.get(1) {
                    Some(Sexp::Str(s)) => s.clone(),
                    _ => text.to_string(),
                };
                return Err(SolverError::Reported(msg));
            }
        }
        Ok(())
    }

    fn ensure_declared(&mut self, t: &Term) -> Result<(), SolverError> {
        for d in collect_declarations([t]) {
            if !self.declared.contains(d.name()) {
                self.declare(&d)?;
            }
        }
        Ok(())
    }

    fn reason_unknown(&mut self) -> String {
        if self.send("(get-info :reason-unknown)").is_err() {
            return "unknown".into();
        }
        match self.read_response() {
            Ok(text) => match sexp::parse_one(&text) {
                Ok(Sexp::List(items)) if items.len() == 2 => match &items[1] {
                    Sexp::Str(s) | Sexp::Atom(s) => s.clone(),
                    other => other.to_string(),
                },
                _ => text,
            },
            Err(e) => e.to_string(),
        }
    }
}

impl SolverSession for ProcessSession {
    fn declare(&mut self, decl: &Declaration) -> Result<(), SolverError> {
        if self.declared.insert(decl.name().to_string()) {
            self.send(&decl.to_smtlib())?;
        }
        Ok(())
    }

    fn assert_formula(&mut self, t: &Term) -> Result<(), SolverError> {
        self.ensure_declared(t)?;
        let mut cmd = String::from("(assert ");
        write_term(&mut cmd, t).expect("writing to a String cannot fail");
        cmd.push(')');
        self.send(&cmd)?;
        self.phase = Phase::Asserting;
        Ok(())
    }

    fn check_sat(&mut self) -> Result<SatResult, SolverError> {
        self.send("(check-sat)")?;
        self.check_sat_calls += 1;
        let text = self.read_response()?;
        Self::check_error(&text)?;
        match text.trim() {
            "sat" => {
                self.phase = Phase::Sat;
                Ok(SatResult::Sat)
            }
            "unsat" => {
                self.phase = Phase::Unsat;
                Ok(SatResult::Unsat)
            }
            "unknown" => {
                let reason = self.reason_unknown();
                self.phase = Phase::Unknown;
                Ok(SatResult::Unknown(reason))
            }
            other => {
                self.kill();
                Err(SolverError::Malformed(other.to_string()))
            }
        }
    }

    fn value_of(&mut self, terms: &[Term]) -> Result<Vec<Value>, SolverError> {
        self.phase.require_sat()?;
        if terms.is_empty() {
            return Ok(Vec::new());
        }
        let mut cmd = String::from("(get-value (");
        for (i, t) in terms.iter().enumerate() {
            if i > 0 {
                cmd.push(' ');
            }
            write_term(&mut cmd, t).expect("writing to a String cannot fail");
        }
        cmd.push_str("))");
        self.send(&cmd)?;
        let text = self.read_response()?;
        Self::check_error(&text)?;
        parse_value_response(&text, terms.len())
    }

    fn extract_model(&mut self) -> Result<Model, SolverError> {
        self.phase.require_sat()?;
        self.send("(get-model)")?;
        let text = self.read_response()?;
        Self::check_error(&text)?;
        parse_model_response(&text)
    }

    fn set_time_limit(&mut self, limit: Option<Duration>) {
        self.deadline = limit.map(|d| Instant::now() + d);
    }

    fn check_sat_calls(&self) -> usize {
        self.check_sat_calls
    }

    fn dispose(&mut self) {
        if self.phase != Phase::Dead {
            let _ = self.send("(exit)");
            self.kill();
        }
    }
}

impl Drop for ProcessSession {
    fn drop(&mut self) {
        self.dispose();
    }
}
