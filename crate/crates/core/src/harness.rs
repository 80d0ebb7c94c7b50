//! Run reports, file I/O, and the end-to-end `verify` pipeline.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::content::{hc_best, hc_lower, ExactOptions, Side};
use crate::error::{Error, Result};
use crate::space::DiscreteSpace;
use crate::topology::{inequality_report, systole, InequalityReport};
use crate::width::{bound_width, revalidate, theorem_radius, uw_from_ur, WidthCertificate, WidthOptions};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Success,
    HypothesisViolation,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub input_hash: Option<String>,
    pub parameters: Value,
    pub outcome: Outcome,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    pub wall_time_ms: f64,
    pub tool_version: String,
}

impl RunReport {
    pub fn new(
        command: &str,
        input_hash: Option<String>,
        parameters: Value,
        result: Result<Value>,
        started: Instant,
    ) -> Self {
        let (outcome, exit_code, message, certificate) = match result {
            Ok(cert) => (Outcome::Success, 0, None, Some(cert)),
            Err(e) => {
                let code = e.exit_code();
                let outcome = if code == 1 {
                    Outcome::HypothesisViolation
                } else {
                    Outcome::Error
                };
                (outcome, code, Some(e.to_string()), None)
            }
        };
        Self {
            command: command.to_string(),
            input_hash,
            parameters,
            outcome,
            exit_code,
            message,
            certificate,
            wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Append one report as a JSON line.
pub fn append_report(path: &Path, report: &RunReport) -> std::io::Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(f, "{}", report.to_line())
}

/// Read a space document; returns the space and the SHA-256 of the file.
pub fn load_space(path: &Path) -> Result<(DiscreteSpace, String)> {
    use sha2::{Digest, Sha256};
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidDocument(format!("{}: {e}", path.display())))?;
    let hash = hex::encode(Sha256::digest(text.as_bytes()));
    Ok((DiscreteSpace::from_json(&text)?, hash))
}

pub fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub n: usize,
    pub hc_upper: f64,
    pub hc_side: Side,
    pub hc_lower: Option<f64>,
    pub r: f64,
    pub uw_bound: f64,
    pub width: WidthCertificate,
    pub essential: bool,
    pub inequality: Option<InequalityReport>,
}

/// Content, width certificate at `r = 4n · HC^{1/n} · (1 + 1e-3)`,
/// independent revalidation, and the systole comparison when the
/// instance has a nontrivial cycle.
pub fn verify(space: &DiscreteSpace, n: usize, exact: ExactOptions) -> Result<VerifySummary> {
    let y = space.full();
    let nf = n as f64;
    let est = hc_best(space, &y, nf, None, exact)?;
    let hc_lower = match est.side {
        Side::Exact => Some(est.value),
        _ => hc_lower(space, &y, nf, None).ok().map(|e| e.value),
    };
    let (r, hint) = theorem_radius(space, &y, n, exact)?;
    let opts = WidthOptions {
        exact,
        hints: vec![hint],
        ..Default::default()
    };
    let width = bound_width(space, &y, n, r, &opts)?;
    revalidate(space, &y, &width)?;
    let cycle = if space.kind().is_graph() { systole(space)? } else { None };
    let inequality = cycle.as_ref().map(|c| inequality_report(space, c, width.r));
    if let Some(rep) = &inequality {
        if !rep.holds {
            return Err(Error::CertificateRejected(format!(
                "systole {} exceeds 2r + tolerance = {}",
                rep.sys,
                2.0 * rep.width_r + rep.tolerance
            )));
        }
    }
    Ok(VerifySummary {
        n,
        hc_upper: est.value,
        hc_side: est.side,
        hc_lower,
        r,
        uw_bound: uw_from_ur(&width),
        essential: cycle.is_some(),
        width,
        inequality,
    })
}
