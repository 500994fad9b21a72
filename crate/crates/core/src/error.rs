use thiserror::Error;

/// Which long-running phase hit its budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Enumeration,
    OrbitBfs,
    Series,
    Probe,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Phase::Enumeration => "enumeration",
            Phase::OrbitBfs => "orbit-bfs",
            Phase::Series => "series",
            Phase::Probe => "probe",
        };
        f.write_str(s)
    }
}

/// Why a central-extension candidate was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionDefect {
    /// The generator images do not extend to a homomorphism of the cover.
    NotHomomorphism { witness: String },
    NotSurjective { image_order: u64, base_order: u64 },
    KernelNotCentral { witness: String },
    /// Some lift of a centralizer element moves the chosen class lift.
    NotCAdmissible { class_rep: String, witness: String },
}

impl std::fmt::Display for ExtensionDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtensionDefect::NotHomomorphism { witness } => {
                write!(f, "not-a-homomorphism: {witness}")
            }
            ExtensionDefect::NotSurjective { image_order, base_order } => {
                write!(f, "not-surjective: image has order {image_order}, base has order {base_order}")
            }
            ExtensionDefect::KernelNotCentral { witness } => {
                write!(f, "kernel-not-central: {witness}")
            }
            ExtensionDefect::NotCAdmissible { class_rep, witness } => {
                write!(f, "not-c-admissible: class {class_rep}: {witness}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("cap exceeded: {what} has size {size}, cap is {cap}")]
    CapExceeded { what: &'static str, size: u64, cap: u64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("foreign element: {element} is not in {group}")]
    ForeignElement { element: String, group: String },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("budget exceeded during {phase}: {detail}")]
    Budget { phase: Phase, detail: String },

    #[error("entry {entry} lies outside the required subgroup")]
    EntryOutsideSubgroup { entry: String },

    #[error("entry {entry} lies outside the extension's class scope")]
    EntryOutsideScope { entry: String },

    #[error("central extension rejected: {0}")]
    ExtensionInvalid(ExtensionDefect),

    #[error("extension mismatch: {0}")]
    ExtensionMismatch(String),

    #[error("mixed modes: {0}")]
    MixedMode(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 2,
            _ => 1,
        }
    }
}
