//! Super-strong Wilf classes and shift classes of permutations.
//!
//! Two permutations are super-strong Wilf equivalent exactly when their
//! pyramids of consecutive position gaps agree. This crate computes those
//! pyramids, enumerates the classes and their representatives, counts them
//! through exact recurrences, and checks everything against brute force.
//!
//! ```
//! use wilf_core::{pyramidal_sequence, class_size_exponent, Permutation};
//!
//! let u: Permutation = "592738164".parse().unwrap();
//! let p = pyramidal_sequence(&u).unwrap();
//! assert_eq!(p.level(8).unwrap().entries(), &[4]);
//! assert_eq!(class_size_exponent(&p), 2);
//! ```

pub mod counting;
pub mod error;
pub mod oracle;
pub mod perm;
pub mod pyramid;
pub mod representatives;
pub mod shift;
pub mod trapezoid;

pub use counting::{a_noninterval, d_count, p_count, s_count, s_j_count, sh_count, CountScalar, Counts};
pub use error::{Error, Result};
pub use perm::{
    embedding_set, inverse, parse_permutation, reduced_form, reversal, weight, EmbeddingSet, Letter,
    Permutation, Weight, Word,
};
pub use pyramid::{
    canonical_key, canonical_member, class_members, class_size_exponent, is_ss_equivalent, pyramid_key,
    pyramidal_sequence, pyramidal_sequence_of_inverse, DiffVector, PyramidalSequence, Transition,
};
pub use representatives::{representatives_C, representatives_R, representatives_decomposed, un_reduce};
pub use shift::{
    apply_rigid_shift, enumerate_rigid_shifts, is_shift_equivalent, is_strongly_shift_equivalent,
    shift_class, shift_orbit, strong_shift_class, RigidShiftMove, ShiftStep,
};
pub use trapezoid::{phi, prefixes_D, psi, rho, theta, PrefixWord, TrapezoidalSequence};

/// Exact class counts.
pub type Nat = num_bigint::BigUint;

/// Memoized counts over [`Nat`].
pub type CountTable = Counts<Nat>;

/// Memoized counts over `u64`; overflows past `n = 20` or so.
pub type CountTable64 = Counts<u64>;
