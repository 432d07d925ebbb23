//! External predictor subprocess wire contract.
//!
//! Per prediction request the command is run via `sh -c`, receives one JSON
//! line on stdin — `{"image": <path>, "clicks": [{"x", "y", "label",
//! "ordinal"}, ...]}` — and must print the path of a PNG mask as its first
//! stdout line before the timeout expires.

use sas_core::clicks::{ClickPrompt, Predictor};
use sas_core::error::{Error, Result};
use sas_core::png::load_mask;
use sas_core::raster::BinaryMask;
use serde::Serialize;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::time::Duration;

#[derive(Serialize)]
struct Request<'a> {
    image: &'a str,
    clicks: &'a [ClickPrompt],
}

pub struct ExternalPredictor {
    command: String,
    image_path: PathBuf,
    timeout: Duration,
}

impl ExternalPredictor {
    pub fn new(command: impl Into<String>, image_path: impl Into<PathBuf>, timeout: Duration) -> Self {
        Self {
            command: command.into(),
            image_path: image_path.into(),
            timeout,
        }
    }

    fn violation(msg: impl Into<String>) -> Error {
        Error::PredictorContractViolation(msg.into())
    }

    fn run_once(&self, clicks: &[ClickPrompt]) -> Result<String> {
        let request = serde_json::to_string(&Request {
            image: self.image_path.to_str().unwrap_or_default(),
            clicks,
        })
        .map_err(|e| Self::violation(format!("encoding request: {e}")))?;

        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| Self::violation(format!("spawning '{}': {e}", self.command)))?;

        {
            let mut stdin = child.stdin.take().expect("stdin is piped");
            stdin
                .write_all(request.as_bytes())
                .and_then(|()| stdin.write_all(b"\n"))
                .map_err(|e| Self::violation(format!("writing request: {e}")))?;
        }

        let mut stdout = child.stdout.take().expect("stdout is piped");
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            let mut out = String::new();
            let read = stdout.read_to_string(&mut out);
            let _ = tx.send(read.map(|_| out));
        });

        let output = match rx.recv_timeout(self.timeout) {
            Ok(Ok(out)) => out,
            Ok(Err(e)) => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(Self::violation(format!("reading response: {e}")));
            }
            Err(_) => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(Self::violation(format!(
                    "timed out after {:?}",
                    self.timeout
                )));
            }
        };
        let status = child
            .wait()
            .map_err(|e| Self::violation(format!("waiting for predictor: {e}")))?;
        if !status.success() {
            return Err(Self::violation(format!("predictor exited with {status}")));
        }
        Ok(output)
    }
}

impl Predictor for ExternalPredictor {
    fn predict(&mut self, clicks: &[ClickPrompt]) -> Result<BinaryMask> {
        let output = self.run_once(clicks)?;
        let path = output
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .ok_or_else(|| Self::violation("predictor printed no mask path"))?;
        load_mask(Path::new(path))
            .map_err(|e| Self::violation(format!("loading predicted mask '{path}': {e}")))
    }
}
