use lvhecke::bimod::BimodError;
use lvhecke::fiber::FiberError;
use lvhecke::klv::KlvError;
use lvhecke::lv::{LvError, ValidationReport};

/// Why a subcommand stopped. `Usage` covers bad arguments and unreadable
/// input; `Invalid` covers data or verifications that were read fine but
/// fail a check.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Invalid { lines: Vec<String>, output: Option<String> },
}

impl Failure {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Failure::Invalid {
            lines: vec![msg.into()],
            output: None,
        }
    }

    /// Writes the diagnostics to stderr and hands back anything meant for
    /// stdout together with the exit status.
    pub fn report(self) -> (Option<String>, u8) {
        match self {
            Failure::Usage(msg) => {
                eprintln!("error: {msg}");
                (None, 2)
            }
            Failure::Invalid { lines, output } => {
                for l in lines {
                    eprintln!("error: {l}");
                }
                (output, 1)
            }
        }
    }
}

pub fn invalid_report(report: &ValidationReport) -> Failure {
    let mut lines = vec![report.summary()];
    for v in &report.violations {
        let mut at = String::new();
        if let Some(p) = &v.param {
            at.push_str(&format!(" param={p}"));
        }
        if let Some(s) = v.s {
            at.push_str(&format!(" s={s}"));
        }
        lines.push(format!("{:?}{at}: {}", v.kind, v.message));
    }
    Failure::Invalid { lines, output: None }
}

impl From<LvError> for Failure {
    fn from(e: LvError) -> Self {
        match e {
            LvError::Invalid(report) => invalid_report(&report),
            LvError::BadCoxeterSpec => Failure::invalid(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<KlvError> for Failure {
    fn from(e: KlvError) -> Self {
        match e {
            KlvError::Lv(e) => e.into(),
            other => Failure::invalid(other.to_string()),
        }
    }
}

impl From<FiberError> for Failure {
    fn from(e: FiberError) -> Self {
        match e {
            FiberError::Lv(e) => e.into(),
            FiberError::Json(e) => Failure::Usage(format!("malformed resolution spec: {e}")),
            FiberError::UnknownOrbit(_) => Failure::Usage(e.to_string()),
            other => Failure::invalid(other.to_string()),
        }
    }
}

impl From<BimodError> for Failure {
    fn from(e: BimodError) -> Self {
        match e {
            BimodError::BadSpec(_) | BimodError::VerificationFailure(_) => Failure::invalid(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}
