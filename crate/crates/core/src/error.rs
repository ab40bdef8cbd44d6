use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Parameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("singular point of the wave at x={x}, t={t} ({what})")]
    Singular { x: f64, t: f64, what: &'static str },

    #[error("series truncation failed: tail bound {best_bound:e} after {n_terms} terms")]
    Truncation { n_terms: usize, best_bound: f64 },

    #[error("solver unstable at step {step} (sup|u| = {sup:e})")]
    Instability { step: usize, sup: f64 },

    #[error("Picard iteration not contracting at iteration {iteration} (ratio {ratio})")]
    Contraction { iteration: usize, ratio: f64 },

    #[error("Picard iteration did not reach tolerance after {iterations} iterations (last change {last_change:e})")]
    NotConverged { iterations: usize, last_change: f64 },

    #[error("envelope violated at x={x}, xi={xi}, t={t}: |G| = {value} > {envelope}")]
    Envelope { x: f64, xi: f64, t: f64, value: f64, envelope: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),
}

impl Error {
    /// Numerical failures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Truncation { .. }
                | Error::Instability { .. }
                | Error::Contraction { .. }
                | Error::NotConverged { .. }
                | Error::Envelope { .. }
                | Error::DegenerateFit(_)
                | Error::NonFinite(_)
        )
    }
}
