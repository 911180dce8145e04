use std::fmt;

/// A command that could not produce a verdict.
#[derive(Debug)]
pub enum Failure {
    /// Invalid arguments, configuration or domain; exit 2.
    Usage(String),
    /// Quadrature or evaluation breakdown; exit 3.
    Compute(String),
    /// Output could not be written; exit 2.
    Io(String),
    /// The reader of standard output went away; exit 2 without a message.
    BrokenPipe,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) | Failure::BrokenPipe => 2,
            Failure::Compute(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Compute(m) => write!(f, "computation failed: {m}"),
            Failure::Io(m) => write!(f, "output error: {m}"),
            Failure::BrokenPipe => write!(f, "broken pipe"),
        }
    }
}

impl From<geohh::Error> for Failure {
    fn from(e: geohh::Error) -> Self {
        match e {
            geohh::Error::NonConvergence { .. } | geohh::Error::NonFinite { .. } => {
                Failure::Compute(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            Failure::BrokenPipe
        } else {
            Failure::Io(e.to_string())
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => io.into(),
            other => Failure::Io(format!("{other:?}")),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        match e.io_error_kind() {
            Some(std::io::ErrorKind::BrokenPipe) => Failure::BrokenPipe,
            _ => Failure::Io(e.to_string()),
        }
    }
}

/// `println!` that reports write errors instead of panicking.
pub fn print_stdout(text: &str) -> Result<(), Failure> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    out.flush()?;
    Ok(())
}
