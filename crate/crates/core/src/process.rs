//! External tools reached through command templates.
//!
//! A template is a shell command line with `{name}` placeholders, e.g.
//! `cadical --no-binary {cnf} {proof}`. Placeholders are replaced by
//! single-quoted values and the line runs under `sh -c`. Standard output is
//! written to a file so that large outputs never block the child.

use std::fs::File;
use std::io;
use std::path::Path;
use std::process::{Child, Command, ExitStatus, Stdio};
use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProcessError {
    #[error("template {template:?} has no value for {{{name}}}")]
    MissingValue { template: String, name: String },
    #[error("could not start {0:?}: {1}")]
    Spawn(String, io::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug)]
pub struct CommandOutcome {
    /// `None` when the command was killed at the timeout.
    pub status: Option<ExitStatus>,
    pub elapsed: Duration,
    pub command: String,
}

impl CommandOutcome {
    pub fn timed_out(&self) -> bool {
        self.status.is_none()
    }

    pub fn code(&self) -> Option<i32> {
        self.status.and_then(|s| s.code())
    }
}

fn quote(value: &str) -> String {
    format!("'{}'", value.replace('\'', "'\\''"))
}

/// Substitutes every `{name}` in `template`. Unknown placeholders are an error.
pub fn render(template: &str, values: &[(&str, String)]) -> Result<String, ProcessError> {
    let mut out = String::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let Some(close) = after.find('}') else {
            out.push_str(&rest[open..]);
            rest = "";
            break;
        };
        let name = &after[..close];
        let value = values
            .iter()
            .find(|(k, _)| *k == name)
            .ok_or_else(|| ProcessError::MissingValue { template: template.to_string(), name: name.to_string() })?;
        out.push_str(&quote(&value.1));
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Runs a rendered template, sending stdout to `stdout_path` and stderr to
/// `stderr_path` (or discarding it).
pub fn run(
    template: &str,
    values: &[(&str, String)],
    stdout_path: &Path,
    stderr_path: Option<&Path>,
    timeout: Option<Duration>,
) -> Result<CommandOutcome, ProcessError> {
    let command = render(template, values)?;
    let stdout = File::create(stdout_path)?;
    let stderr = match stderr_path {
        Some(p) => Stdio::from(File::create(p)?),
        None => Stdio::null(),
    };
    let start = Instant::now();
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(&command)
        .stdin(Stdio::null())
        .stdout(Stdio::from(stdout))
        .stderr(stderr)
        .spawn()
        .map_err(|e| ProcessError::Spawn(command.clone(), e))?;
    let status = match timeout {
        Some(limit) => match wait_limited(&mut child, limit)? {
            Some(status) => Some(status),
            None => {
                child.kill()?;
                child.wait()?;
                None
            }
        },
        None => Some(child.wait()?),
    };
    Ok(CommandOutcome { status, elapsed: start.elapsed(), command })
}

#[cfg(not(target_arch = "wasm32"))]
fn wait_limited(child: &mut Child, limit: Duration) -> io::Result<Option<ExitStatus>> {
    use wait_timeout::ChildExt;
    child.wait_timeout(limit)
}

// No subprocesses on wasm; spawning already fails there.
#[cfg(target_arch = "wasm32")]
fn wait_limited(child: &mut Child, _limit: Duration) -> io::Result<Option<ExitStatus>> {
    child.wait().map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_quotes_values() {
        let s = render("solve {cnf} > {out}", &[("cnf", "a b.cnf".into()), ("out", "it's".into())]).unwrap();
        assert_eq!(s, "solve 'a b.cnf' > 'it'\\''s'");
        assert!(matches!(render("x {proof}", &[]), Err(ProcessError::MissingValue { .. })));
    }

    #[test]
    fn run_captures_stdout_and_timeout() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out");
        let o = run("printf %s {v}", &[("v", "hi".into())], &out, None, None).unwrap();
        assert_eq!(o.code(), Some(0));
        assert_eq!(std::fs::read_to_string(&out).unwrap(), "hi");
        let o = run("sleep 5", &[], &out, None, Some(Duration::from_millis(100))).unwrap();
        assert!(o.timed_out());
    }
}
