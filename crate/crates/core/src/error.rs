use thiserror::Error;

/// Errors produced by the colorcap library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet size {0} outside supported range 2..={max}", max = crate::channel::MAX_ALPHABET)]
    AlphabetSize(usize),
    #[error("letter {letter} outside alphabet 1..={q}")]
    LetterOutOfRange { letter: usize, q: usize },
    #[error("coloring channel must contain at least one letter")]
    EmptyChannel,
    #[error("channel system must contain at least one channel")]
    EmptySystem,
    #[error("channel alphabet {found} does not match system alphabet {expected}")]
    AlphabetMismatch { expected: usize, found: usize },
    #[error("words have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("entropy argument {0} outside [0, 1]")]
    EntropyDomain(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("structure needs {needed} letters but the alphabet has only {q}")]
    Infeasible { needed: usize, q: usize },
    #[error("exact clique search limited to q <= {max}, got q = {q}")]
    GraphTooLarge { q: usize, max: usize },
    #[error("pairs graph has no edges")]
    NoEdges,
    #[error("enumeration of {states} words exceeds the budget of {budget}")]
    BudgetExceeded { states: String, budget: u64 },
    #[error("system is not irreducible with at least two channels")]
    NotIrreducible,
    #[error("pairs graph of the first system is not a subgraph of the second")]
    NotSubgraph,
    #[error("cycle length {0} unsupported: cycles shorter than 4 are cliques or degenerate; classify the system instead")]
    CycleTooShort(usize),
    #[error("missing view for pair {{{0},{1}}}")]
    MissingPair(u8, u8),
    #[error("inconsistent pair views: {0}")]
    InconsistentViews(String),
}

pub type Result<T> = std::result::Result<T, Error>;
