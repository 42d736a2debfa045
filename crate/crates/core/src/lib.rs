pub mod basealg;
pub mod complete;
pub mod embed;
pub mod error;
pub mod expr;
pub mod growth;
pub mod jet;
pub mod props;
pub mod scale;
pub mod scalefam;
pub mod seqspace;

pub use error::{Error, Result};
