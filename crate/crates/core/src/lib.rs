//! Combinatorics of Hurwitz-space components for finite permutation groups:
//! Nielsen tuples, the braid-group action and its orbits, the concatenation
//! monoid of components, splitting numbers, reduced lifting invariants and
//! rationality tests — all cross-checked against exhaustive oracles at small
//! scale.

pub mod braid;
pub mod cache;
pub mod cli;
pub mod dsl;
pub mod error;
pub mod group;
pub mod lifting;
pub mod monoid;
pub mod nielsen;
pub mod oracle;
pub mod orbit;
pub mod perm;
pub mod series;
pub mod verify;

pub use error::Error;
pub use group::PermGroup;
pub use nielsen::{Budget, EnumerationSpec, ICIProfile, NielsenTuple};
pub use orbit::Component;
pub use perm::Perm;

#[cfg(test)]
mod concurrency {
    fn is_send_sync<T: Send + Sync>() {}

    // Constructed groups, tables and tuples may be shared across threads.
    #[test]
    fn shared_types_are_send_sync() {
        is_send_sync::<crate::PermGroup>();
        is_send_sync::<crate::NielsenTuple>();
        is_send_sync::<crate::Component>();
        is_send_sync::<crate::lifting::CentralExtension>();
    }
}
