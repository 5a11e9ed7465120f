use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid word {0:?}: expected a string over 'x' and 'y'")]
    InvalidWord(String),
    #[error("word of length {0} exceeds the supported maximum of {max}", max = crate::ncpoly::MAX_WEIGHT)]
    WordTooLong(usize),
    #[error("invalid scalar {0:?}: expected a reduced fraction like \"-3/2\"")]
    InvalidScalar(String),
    #[error("invalid index {0:?}: expected a parenthesized list of positive integers like \"(3,1,2)\"")]
    InvalidIndex(String),
    #[error("not an index word: {0:?} is empty or does not end with 'y'")]
    NotIndexWord(String),
    #[error("dual undefined: index {0} is not admissible (first part must be at least 2)")]
    DualUndefined(String),
    #[error("divergent series: index {0} is not admissible (first part must be at least 2)")]
    DivergentSeries(String),
    #[error("outside domain of Z: word {0:?} is not admissible")]
    OutsideDomain(String),
    #[error("derivation index must be positive")]
    ZeroDerivation,
    #[error("not invertible at this truncation: constant coefficient is not 1")]
    NotInvertible,
    #[error("not divisible by (v-w): diagonal coefficient at u^{u} (v,w)-degree {degree} is nonzero")]
    NotDivisible { u: u32, degree: u32 },
    #[error("truncation order {got} is too small; at least {needed} is required")]
    OrderTooSmall { needed: u32, got: u32 },
    #[error("empty index range: k={k} < m+l={m}+{l}")]
    EmptyIndexRange { k: u32, m: u32, l: u32 },
    #[error("mixed weight: target is not homogeneous of weight {0}")]
    MixedWeight(u32),
    #[error("FALSIFIED: (1-tau)(sum_word(k={k}, m={m}, l={l})) is not in the derivation span at weight {k}")]
    CorollaryFalsified { k: u32, m: u32, l: u32 },
    #[error("cutoff {cutoff} is smaller than the depth {depth}")]
    CutoffTooSmall { cutoff: u64, depth: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
