use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit {qubit} out of range for {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("gate targets must be distinct, got {0:?}")]
    DuplicateTargets(Vec<usize>),
    #[error("matrix for gate `{label}` is not unitary (deviation {deviation:e})")]
    NonUnitary { label: String, deviation: f64 },
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("amplitude vector of length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("operator is not a valid density matrix: {0}")]
    InvalidDensity(String),
    #[error("partial trace must keep at least one qubit")]
    EmptyKeepSet,
    #[error("{what} needs {qubits} qubits, above the cap of {cap}")]
    TooLarge { what: &'static str, qubits: usize, cap: usize },

    #[error("invalid ensemble parameters: {0}")]
    InvalidParams(String),
    #[error("catalog `{0}` has no entries")]
    EmptyCatalog(String),
    #[error("ensemble has {size} members, above the enumeration cap {cap}")]
    EnsembleTooLarge { size: f64, cap: usize },
    #[error("decode error: {0}")]
    Decode(#[from] DecodeError),

    #[error("noise parameter out of range: {0}")]
    InvalidNoise(String),
    #[error("threshold formula is nonpositive for eta={eta}, t={t}, n={n}")]
    ThresholdNonPositive { eta: f64, t: usize, n: usize },
    #[error("invalid threshold parameters: {0}")]
    InvalidThreshold(String),
    #[error("expected {expected} blocks, got {got}")]
    BlockCountMismatch { expected: usize, got: usize },
    #[error("adversary returned a malformed key: {0}")]
    MalformedKey(String),

    #[error("one-time signing key already used")]
    KeyReuse,
    #[error("message has {message_bits} bits but the key covers {slots}")]
    MessageTooLong { message_bits: usize, slots: usize },

    #[error("shadow estimation: {0}")]
    Shadows(String),
    #[error("need at least {required} samples, got {got}")]
    InsufficientSamples { required: usize, got: usize },
    #[error("oracle query budget of {0} exhausted")]
    QueryBudgetExhausted(usize),
    #[error("register access violation: {0}")]
    RegisterViolation(String),

    #[error("calculator input out of range: {0}")]
    OutOfDomain(String),
    #[error("serialization failed: {0}")]
    Serialization(String),
}

/// Failures while decoding circuit, key, or signature files.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("bad magic {found:?}, expected {expected:?}")]
    BadMagic { expected: [u8; 4], found: Vec<u8> },
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("truncated payload: need {needed} bytes, have {have}")]
    Truncated { needed: usize, have: usize },
    #[error("brick index {index} out of range for catalog of size {size}")]
    InvalidBrickIndex { index: u64, size: usize },
    #[error("unknown catalog id {0}")]
    UnknownCatalog(u8),
    #[error("nonzero padding bits")]
    NonzeroPadding,
    #[error("{0} trailing bytes after payload")]
    TrailingBytes(usize),
    #[error("invalid header field: {0}")]
    InvalidField(String),
}
