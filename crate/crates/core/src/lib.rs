//! Lower bounds on the error probability of M-ary hypothesis testing built
//! from tilted posteriors `P(x|y)^θ / Σ P(x'|y)^θ`, their θ → ∞ limit, and
//! the channel-coding consequences: a converse for block codes and error
//! exponents for binary channels.

pub mod bounds;
pub mod channels;
pub mod codebound;
pub mod error;
pub mod optimize;
pub mod prob;
pub mod reliability;

pub use error::{Error, Result};
