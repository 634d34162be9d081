//! Exact counts of plane curves with contact conditions to a line, computed
//! three independent ways: weighted lattice-path enumeration, column-wise
//! closed-form multiplicities, and degeneration recursions (including the
//! irreducible variant and the rectangle analogue). All arithmetic is exact;
//! counts are unbounded integers, per-path multiplicities are rationals.

pub mod counts;
pub mod error;
pub mod lattice;
pub mod multiplicity;
pub mod seq;

pub use counts::{
    admissible_keys, max_genus, CountKey, Counter, Engine, EngineCheck, PolygonClass, VerifyReport,
};
pub use error::{Error, Result};
pub use lattice::{
    column_profile, delta_minus, delta_plus, enumerate_paths, has_column_skip, is_delta_beta,
    ColumnProfile, LatticePath, LatticePoint, LatticePolygon,
};
pub use multiplicity::{
    mu_alpha_beta, mu_alpha_plus, mu_alpha_plus_closed, mu_beta_minus, mu_beta_minus_closed,
    mu_minus, mu_plus, MuRoute, MultiplicityContext, PathMultiplicity, TurnKind,
};
pub use seq::{binomial, factorial, multinomial, partition_sequences, Sequence};

pub use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;
