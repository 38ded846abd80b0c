//! Exact point counts for polynomial equations over finite fields.
//!
//! Diagonal equations `a_1 x_1^d + ... + a_s x_s^d = b` with a (p, r)-admissible
//! exponent d have closed-form counts built from pure Gauss sums. A full
//! polynomial whose degree matrix defines the same homogeneous system as such
//! a diagonal witness (*-equivalence) has the same count of solutions in the
//! torus, which gives its total count too. Exhaustive and character-sum
//! oracles cover the general case.
//!
//! ```
//! use std::sync::Arc;
//! use ffcount::{cli::parse_poly, counting::count_star_diagonal, gf::FieldCtx};
//!
//! let ctx = Arc::new(FieldCtx::new(3, 4, None).unwrap());
//! let g = parse_poly("x^4 + y^4", ctx).unwrap();
//! assert_eq!(count_star_diagonal(&g).unwrap().count, 320);
//! ```

pub mod chars;
pub mod cli;
pub mod counting;
pub mod gf;
pub mod poly;
pub mod pure;
pub mod zn_linalg;

pub use chars::{gauss_sum_numeric, psi, MultChar};
pub use counting::{
    brute_force, count_full, count_star_charsum, count_star_diagonal, count_star_gaussvec, CountError, CountResult,
};
pub use gf::{FieldCtx, FieldElement, GfError};
pub use poly::{SparsePoly, Term};
pub use pure::{check_admissible, Admissibility, Classification};
pub use zn_linalg::{howell_form, nullspace_mod, star_equivalent, ZnMatrix};
