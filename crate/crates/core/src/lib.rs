//! Iteratively moderated PAC teaching: a teacher who knows a target concept
//! filters a shared sample round by round so that a learner fitting one node
//! per round recovers the whole concept.

pub mod baselines;
pub mod bits;
pub mod concepts;
pub mod error;
pub mod experiments;
pub mod learner;
pub mod oracle;
pub mod sampling;
pub mod session;
pub mod teacher;

pub use error::{Error, Result};
