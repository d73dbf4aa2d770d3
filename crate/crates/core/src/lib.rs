//! Rooted unordered tree isomorphism.
//!
//! The main entry points are the deciders in [`iso`]:
//!
//! ```
//! use isoforest::codec::parse_parens;
//! use isoforest::iso::{original_ahu, primes_ahu};
//!
//! let a = parse_parens("(()(()))").unwrap();
//! let b = parse_parens("((())())").unwrap();
//! assert!(primes_ahu(&a, &b));
//! assert!(original_ahu(&a, &b));
//! ```

pub mod bench;
pub mod codec;
pub mod exec;
pub mod iso;
pub mod primes;
pub mod product;
pub mod radix;
pub mod tree;
pub mod treegen;

pub use iso::{ideal_ahu, oracle_isomorphic, original_ahu, primes_ahu, width, Algorithm};
pub use tree::{LevelIndex, NodeId, Tree, TreeError};
