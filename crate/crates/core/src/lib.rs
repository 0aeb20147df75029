//! Galaxies of graph nonstandard extensions, computed from finite presentations.

pub mod checks;
pub mod error;
pub mod expr;
pub mod filters;
pub mod galaxies0;
pub mod galaxies1;
pub mod graphone;
pub mod graphzero;
pub mod literal;
pub mod metric;
pub mod node;
pub mod ordinals;
pub mod report;
pub mod seq;
pub mod ultrapower;

pub use error::{Error, Result};
pub use metric::Metric;
pub use node::NodeRef;
pub use ordinals::Ordinal;
