use thiserror::Error;

/// Errors raised by constructions, invariant computations and file parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An enumeration would exceed a configured size bound.
    #[error("size cap exceeded: {what} needs more than {bound} (counted {counted})")]
    SizeCap {
        what: &'static str,
        bound: usize,
        counted: usize,
    },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("improper 2-coloring: {0}")]
    ImproperColoring(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors caused by a configured budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::SizeCap { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Size bounds applied by enumerating constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Vertices of an exponential graph (and of any loop-space level).
    pub exponential_vertices: usize,
    /// Elements of a Hom or box poset.
    pub poset_elements: usize,
    /// Simplices generated when a complex is expanded into faces.
    pub complex_faces: usize,
    /// Largest graph or poset accepted by the isomorphism search.
    pub iso_vertices: usize,
    /// Edges materialised when a loop-space level is turned into a graph.
    pub level_edges: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            exponential_vertices: 2_000_000,
            poset_elements: 500_000,
            complex_faces: 2_000_000,
            iso_vertices: 200,
            level_edges: 5_000_000,
        }
    }
}

pub(crate) fn check_cap(what: &'static str, bound: usize, counted: usize) -> Result<()> {
    if counted > bound {
        Err(Error::SizeCap {
            what,
            bound,
            counted,
        })
    } else {
        Ok(())
    }
}
