use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ReplayStatus {
    Accepted,
    Rejected { error: String },
    ToolAbsent,
}

/// `ABELLA` from the environment, else the flag, else `abella` on the search path.
pub fn locate(flag: Option<&Path>) -> Option<PathBuf> {
    let chosen = std::env::var_os("ABELLA").filter(|v| !v.is_empty()).map(PathBuf::from).or_else(|| flag.map(Path::to_path_buf));
    let candidate = chosen.unwrap_or_else(|| PathBuf::from("abella"));
    if candidate.components().count() > 1 {
        return candidate.is_file().then_some(candidate);
    }
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path).map(|d| d.join(&candidate)).find(|p| p.is_file())
}

fn first_error(out: &str, err: &str) -> Option<String> {
    let from_out = out.lines().find(|l| l.trim_start().starts_with("Error"));
    from_out.or_else(|| err.lines().find(|l| !l.trim().is_empty())).map(|l| l.trim().to_string())
}

/// Run Abella on `thm` from its own directory so the `Specification` header resolves.
pub fn run(thm: &Path, abella: Option<&Path>, timeout: Duration) -> std::io::Result<ReplayStatus> {
    let Some(exe) = locate(abella) else { return Ok(ReplayStatus::ToolAbsent) };
    let dir = thm.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let file = thm.file_name().unwrap_or(thm.as_os_str());
    let mut child = Command::new(exe)
        .arg(file)
        .current_dir(dir)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()?;
    let mut out_pipe = child.stdout.take().expect("piped");
    let mut err_pipe = child.stderr.take().expect("piped");
    let out_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = out_pipe.read_to_string(&mut s);
        s
    });
    let err_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = err_pipe.read_to_string(&mut s);
        s
    });
    let start = Instant::now();
    let status = loop {
        if let Some(s) = child.try_wait()? {
            break Some(s);
        }
        if start.elapsed() > timeout {
            let _ = child.kill();
            let _ = child.wait();
            break None;
        }
        std::thread::sleep(Duration::from_millis(20));
    };
    let out = out_reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();
    Ok(match status {
        None => ReplayStatus::Rejected { error: format!("timed out after {}s", timeout.as_secs()) },
        Some(s) => match first_error(&out, &err) {
            None if s.success() => ReplayStatus::Accepted,
            Some(e) => ReplayStatus::Rejected { error: e },
            None => ReplayStatus::Rejected { error: format!("abella exited with {s}") },
        },
    })
}
