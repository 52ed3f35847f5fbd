//! Computational commutative algebra for Rees algebras and powers of ideals.
//!
//! Exact Gröbner bases, graded and bigraded Hilbert series, Betti tables via Koszul
//! homology, asymptotic templates for powers, mixed multiplicities, numeric
//! Cohen–Macaulay/Gorenstein criteria for diagonal subalgebras, and generic initial ideals.

pub mod arith;
pub mod asymptotics;
pub mod betti;
pub mod diagonals;
pub mod error;
pub mod gin;
pub mod groebner;
pub mod hilbert;
pub mod linalg;
pub mod poly;
pub mod rees;

pub use arith::{Field, FieldElement, Rational};
pub use error::{Error, Result};
pub use groebner::{GroebnerBasis, Ideal};
pub use poly::{parse_polynomial, Monomial, MultiDegree, OrderKind, Polynomial, Ring, RingSpec, TermOrder};
