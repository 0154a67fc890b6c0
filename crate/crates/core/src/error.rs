use thiserror::Error;

/// Errors raised by mesh construction, noise generation, integration and fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("noise generation failed: {0}")]
    Generation(String),

    /// The Euler recursion left the finite range. `step` is the first index `j`
    /// whose state is non-finite or exceeds the blow-up threshold.
    #[error("solution diverged at step {step} (t = {time}, component {component})")]
    Divergence { step: usize, time: f64, component: usize },

    #[error("sample {sample}, resolution N = {resolution}: {source}")]
    Sample {
        sample: u64,
        resolution: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("singular least-squares system: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
