//! Finite skew braces and set-theoretic solutions of the Yang–Baxter equation.
//!
//! Structures live on the carrier `0..n` with the identity of every group
//! operation at index 0. Everything is computed exactly from Cayley tables.

pub mod brace;
pub mod campaign;
pub mod enumeration;
pub mod group;
pub mod iso;
pub mod perm;
pub mod series;
pub mod subset;
pub mod substructures;
pub mod ybe;

pub use brace::{BraceError, BraceFlags, BraceJson, SkewBrace};
pub use group::{GroupError, GroupTable, Relabeled};
pub use perm::Perm;
pub use subset::Subset;

/// Closure budget used when `BRACELAB_BUDGET` is unset.
pub const DEFAULT_BUDGET: usize = 10080;

/// The closure budget, overridable through the `BRACELAB_BUDGET` variable.
pub fn budget() -> usize {
    std::env::var("BRACELAB_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}
