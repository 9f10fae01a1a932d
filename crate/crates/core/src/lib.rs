pub mod category;
pub mod corpus;
pub mod entropy;
pub mod error;
pub mod extended;
pub mod functors;
pub mod par;
pub mod partition;
pub mod ramsey;
pub mod structures;
pub mod subobj;

pub use error::{Error, Result};
pub use extended::{ExtNat, ExtReal};
