//! Running subject programs in isolated subprocesses.
//!
//! The observable behaviour of a run is its standard output, its exit
//! status, and whether it hit the wall-clock limit. Standard error is kept
//! for diagnostics only: interpreter tracebacks quote line numbers and
//! identifier names, which semantic-preserving mutations legitimately change.

use std::env;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::language::SubjectLanguage;

const OUTPUT_LIMIT: usize = 1 << 20;

#[derive(Debug, Error)]
pub enum SandboxError {
    #[error("no toolchain available to run {0} programs")]
    Unavailable(SubjectLanguage),
    #[error("program timed out after {0:?}")]
    ExecutionTimeout(Duration),
    #[error("two runs of the same program disagree")]
    NonDeterministicSeed,
    #[error("compilation failed: {0}")]
    CompileFailed(String),
    #[error("sandbox i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: Option<i32>,
    pub timed_out: bool,
}

impl Execution {
    /// The parts of a run that define program behaviour.
    pub fn observable(&self) -> (&str, Option<i32>, bool) {
        (&self.stdout, self.exit_code, self.timed_out)
    }

    pub fn same_behaviour(&self, other: &Execution) -> bool {
        self.observable() == other.observable()
    }

    fn summary(&self) -> String {
        format!(
            "exit={:?} timed_out={} stdout_bytes={}",
            self.exit_code,
            self.timed_out,
            self.stdout.len()
        )
    }
}

#[derive(Debug, Clone)]
pub struct Sandbox {
    python: Option<PathBuf>,
    javac: Option<PathBuf>,
    java: Option<PathBuf>,
    pub timeout: Duration,
}

fn find_on_path(program: &str) -> Option<PathBuf> {
    let path = env::var_os("PATH")?;
    env::split_paths(&path)
        .map(|dir| dir.join(program))
        .find(|candidate| candidate.is_file())
}

impl Sandbox {
    /// Looks up interpreters and compilers on `PATH`.
    pub fn detect(timeout: Duration) -> Self {
        Sandbox {
            python: find_on_path("python3"),
            javac: find_on_path("javac"),
            java: find_on_path("java"),
            timeout,
        }
    }

    /// A sandbox that can run nothing; every check reports "not runnable".
    pub fn disabled() -> Self {
        Sandbox {
            python: None,
            javac: None,
            java: None,
            timeout: Duration::from_secs(10),
        }
    }

    pub fn can_run(&self, language: SubjectLanguage) -> bool {
        match language {
            SubjectLanguage::Python => self.python.is_some(),
            SubjectLanguage::Java => self.javac.is_some() && self.java.is_some(),
        }
    }

    pub fn run(&self, language: SubjectLanguage, source: &str) -> Result<Execution, SandboxError> {
        let dir = tempfile::tempdir()?;
        match language {
            SubjectLanguage::Python => {
                let python = self.python.as_ref().ok_or(SandboxError::Unavailable(language))?;
                let file = dir.path().join("main.py");
                fs::write(&file, source)?;
                let mut cmd = Command::new(python);
                cmd.arg("-I").arg("-B").arg(&file);
                self.execute(cmd, dir.path())
            }
            SubjectLanguage::Java => {
                let (Some(javac), Some(java)) = (&self.javac, &self.java) else {
                    return Err(SandboxError::Unavailable(language));
                };
                let class = main_class(source);
                let file = dir.path().join(format!("{class}.java"));
                fs::write(&file, source)?;
                let mut compile = Command::new(javac);
                compile.arg("-nowarn").arg("-d").arg(dir.path()).arg(&file);
                let compiled = self.execute(compile, dir.path())?;
                if compiled.exit_code != Some(0) {
                    return Err(SandboxError::CompileFailed(compiled.stderr));
                }
                let mut cmd = Command::new(java);
                cmd.arg("-cp").arg(dir.path()).arg(&class);
                self.execute(cmd, dir.path())
            }
        }
    }

    fn execute(&self, mut cmd: Command, cwd: &Path) -> Result<Execution, SandboxError> {
        cmd.current_dir(cwd)
            .env_clear()
            .env("PYTHONHASHSEED", "0")
            .env("PYTHONDONTWRITEBYTECODE", "1")
            .env("LC_ALL", "C.UTF-8")
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped());
        if let Some(path) = env::var_os("PATH") {
            cmd.env("PATH", path);
        }
        let mut child = cmd.spawn()?;
        let stdout = child.stdout.take().expect("piped");
        let stderr = child.stderr.take().expect("piped");
        let read = |mut pipe: Box<dyn Read + Send>| {
            thread::spawn(move || {
                let mut buf = Vec::new();
                let _ = pipe.by_ref().take(OUTPUT_LIMIT as u64).read_to_end(&mut buf);
                // Drain the rest so the child never blocks on a full pipe.
                let _ = std::io::copy(&mut pipe, &mut std::io::sink());
                String::from_utf8_lossy(&buf).into_owned()
            })
        };
        let out_handle = read(Box::new(stdout));
        let err_handle = read(Box::new(stderr));

        let started = Instant::now();
        let mut timed_out = false;
        let status = loop {
            if let Some(status) = child.try_wait()? {
                break status;
            }
            if started.elapsed() >= self.timeout {
                timed_out = true;
                let _ = child.kill();
                break child.wait()?;
            }
            thread::sleep(Duration::from_millis(2));
        };
        Ok(Execution {
            stdout: out_handle.join().unwrap_or_default(),
            stderr: err_handle.join().unwrap_or_default(),
            exit_code: if timed_out { None } else { status.code() },
            timed_out,
        })
    }
}

fn main_class(source: &str) -> String {
    let re = Regex::new(r"public\s+(?:final\s+|abstract\s+)*class\s+([A-Za-z_$][\w$]*)").expect("valid regex");
    re.captures(source)
        .map(|c| c[1].to_string())
        .unwrap_or_else(|| "Main".to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preservation {
    pub equivalent: bool,
    pub evidence: String,
}

/// Runs `parent` twice and `mutant` once; equivalent iff the observable
/// behaviour matches.
pub fn verify_preservation(
    sandbox: &Sandbox,
    language: SubjectLanguage,
    parent: &str,
    mutant: &str,
) -> Result<Preservation, SandboxError> {
    let mut verdicts = verify_preservation_all(sandbox, language, parent, &[mutant])?;
    verdicts.pop().expect("one mutant")
}

/// Like [`verify_preservation`] for many mutants of one parent, running the
/// parent only twice. Per-mutant failures (compile errors, i/o) are kept
/// separate so one bad mutant does not hide the verdicts of the others.
pub fn verify_preservation_all(
    sandbox: &Sandbox,
    language: SubjectLanguage,
    parent: &str,
    mutants: &[&str],
) -> Result<Vec<Result<Preservation, SandboxError>>, SandboxError> {
    let first = sandbox.run(language, parent)?;
    if first.timed_out {
        return Err(SandboxError::ExecutionTimeout(sandbox.timeout));
    }
    let second = sandbox.run(language, parent)?;
    if !first.same_behaviour(&second) {
        return Err(SandboxError::NonDeterministicSeed);
    }
    Ok(mutants
        .iter()
        .map(|mutant| {
            let run = sandbox.run(language, mutant)?;
            Ok(Preservation {
                equivalent: first.same_behaviour(&run),
                evidence: format!("parent: {}; mutant: {}", first.summary(), run.summary()),
            })
        })
        .collect())
}

/// Whether `faulty` behaves observably differently from `original`.
/// `Ok(None)` when the language cannot be executed here.
pub fn fault_kills(
    sandbox: &Sandbox,
    language: SubjectLanguage,
    original: &str,
    faulty: &str,
) -> Result<Option<bool>, SandboxError> {
    if !sandbox.can_run(language) {
        return Ok(None);
    }
    let before = sandbox.run(language, original)?;
    let after = sandbox.run(language, faulty)?;
    Ok(Some(!before.same_behaviour(&after)))
}
