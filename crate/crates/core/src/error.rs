use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is out of domain: {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error(
        "no increase of the objective within {doublings} doublings (last upper bound {upper})"
    )]
    BracketFailure { doublings: usize, upper: f64 },

    #[error("true means ({theta1}, {theta2}) violate |theta1 - theta2| <= {bound}")]
    Constraint {
        theta1: f64,
        theta2: f64,
        bound: f64,
    },

    #[error("root search for {what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
