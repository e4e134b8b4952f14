//! Relative size of subsets of finite semigroups.
//!
//! Size predicates (large, thick, prethick, extrathick, small) relative to a
//! principal filter, with executable checks of their ultrafilter
//! characterisations over catalogs of small semigroups.
//!
//! [`partition`] searches partitions of small groups for worst-case covering
//! witnesses.

pub mod algebra;
pub mod cli;
pub mod cover;
pub mod error;
pub mod filter;
pub mod io;
pub mod mask;
pub mod oracle;
pub mod partition;
pub mod size;
pub mod theorems;

pub use algebra::{Element, FinSemigroup};
pub use error::{Error, Result};
pub use filter::PrincipalFilter;
pub use mask::SubsetMask;
