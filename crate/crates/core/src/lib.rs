//! Divisor-class arithmetic on curves over prime fields, using only exact
//! linear algebra once a curve has been turned into a multiplication table.
//!
//! A curve is given by a line bundle `L` of degree `Delta` and the
//! multiplication `V x V -> V'` on its sections (`V = H^0(L)`,
//! `V' = H^0(L^2)`). A divisor `D` is represented by the subspace `W_D` of
//! sections vanishing on it, and Jacobian elements by such subspaces in the
//! large model.
//!
//! ```
//! use divclass::{gen_fixture, CurveRep};
//!
//! let bundle = gen_fixture(1009).unwrap();
//! let rep = CurveRep::A(bundle.rep_a.clone());
//! // x * y = xy
//! let (x, y) = (vec![0, 1, 0, 0], vec![0, 0, 1, 0]);
//! assert_eq!(rep.product(&x, &y).unwrap(), vec![0, 0, 0, 0, 1, 0, 0, 0]);
//! ```

pub mod bench;
pub mod bundle;
pub mod cantor;
pub mod curve;
pub mod divisor;
pub mod error;
pub mod field;
pub mod jacobian;
pub mod linalg;
pub mod poly;
pub mod rep;

pub use bundle::{load_bundle, save_bundle};
pub use cantor::{cantor_add, cantor_negate, mumford_to_point, oracle_compare, random_mumford, MumfordDivisor};
pub use curve::{gen_fixture, gen_hyperelliptic, gen_rep_b0, CurveBundle, GenOptions, HyperellipticCurve};
pub use divisor::{
    deflate, flip, igs_for_v, igs_size_h, igs_size_h_fq, inflate, is_igs, membership_test, random_igs_candidate,
    CubicData, DivisorBrief, DivisorFull, IgsV,
};
pub use error::{Error, Result};
pub use field::{PrimeField, RetryStats, Sampler};
pub use jacobian::{make_large_model, JacobianPoint, LargeModel, LargeModelPrecomp, SizeTag};
pub use linalg::{Matrix, Subspace};
pub use poly::Poly;
pub use rep::{CurveRep, RepA, RepB0, RepTag};

/// Guide chapters, compiled as doc tests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/fields-and-subspaces.md")]
    pub mod fields_and_subspaces {}
    #[doc = include_str!("../../../book/src/representations.md")]
    pub mod representations {}
    #[doc = include_str!("../../../book/src/divisors.md")]
    pub mod divisors {}
    #[doc = include_str!("../../../book/src/large-model.md")]
    pub mod large_model {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
