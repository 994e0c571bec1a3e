//! Exact combinatorial classification of Belyi coverings by ramification
//! scheme.
//!
//! A covering of the sphere branched over {0, 1, infinity} is encoded by a
//! monodromy triple (g0, g1, g_inf) of permutations multiplying to the
//! identity; its ramification scheme is the triple of cycle types. This
//! crate enumerates the conjugation orbits of such triples exactly, computes
//! Eisenstein numbers (automorphism-weighted covering counts) both by the
//! symmetric-group character formula and by direct enumeration, converts
//! connected classes to dessins d'enfants, and assembles per-degree census
//! tables that flag the *exceptional* schemes: those realized by exactly one
//! connected covering.
//!
//! All arithmetic is exact: permutations and partitions are small integer
//! arrays, characters are integers, masses are big rationals. Nothing is
//! floating point and every output is deterministic.
//!
//! The modules mirror the pipeline:
//!
//! - [`perm`]: permutation arithmetic (left-to-right composition throughout);
//! - [`partition`]: partitions, class sizes, schemes and their genus;
//! - [`character`]: Murnaghan-Nakayama character tables with an on-disk cache;
//! - [`mass`]: the character-sum mass formula and a brute-force oracle;
//! - [`enumerate`]: orbit enumeration with automorphism orders, the
//!   performance-critical core;
//! - [`dessin`]: bipartite ribbon graphs, Euler-genus checks, DOT export;
//! - [`census`]: orchestration, persistence and rendering.

pub mod census;
pub mod character;
pub mod dessin;
pub mod enumerate;
pub mod error;
pub mod mass;
pub mod partition;
pub mod perm;

pub use census::{census, run_range, CensusConfig, CensusReport, CensusRow, OutputFormat, ResultStore};
pub use character::CharacterTable;
pub use enumerate::{enumerate_classes, CoveringClass, EnumerationLimits};
pub use error::{Error, Result};
pub use mass::{bruteforce_mass, frobenius_mass, Mass};
pub use partition::{partitions_of, schemes_of_genus, Partition, RamificationScheme};
pub use perm::Permutation;
