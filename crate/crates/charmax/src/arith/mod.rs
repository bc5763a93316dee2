//! Exact arithmetic of Dirichlet characters: factored moduli, unit-group
//! structure with full discrete-log tables, character enumeration and
//! evaluation as exact roots of unity, parity, conductors, Gauss sums.

mod character;
mod factor;
mod group;
mod roots;

pub use character::{enumerate_characters, CharValue, Character, Parity};
pub use factor::{factorize, gcd, is_prime_u64, FactoredModulus};
pub use group::{Component, UnitGroup, MAX_TABLE_Q};
pub use roots::{roots_table, unit_root};
