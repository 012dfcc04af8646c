//! Distance structure and reconstruction numbers for k-transposition Cayley
//! graphs on symmetric and alternating groups.

pub mod cycle_type;
pub mod metric;
pub mod oracle;
pub mod perm;
pub mod phi;
pub mod stirling;
pub mod verify;

pub use cycle_type::CycleType;
pub use metric::{GraphSpec, SphereAssignment};
pub use perm::{Parity, Permutation};
pub use stirling::StirlingFunction;
