//! One layer of the membership pipeline: closed-set presentations, the
//! directional derivative `h`, the expansion of `f(Φ_x(t) q)`, the covariant
//! `Ψ`, top-component reconstruction and the certificate-size bounds.

pub mod bounds;
pub mod direction;
pub mod expansion;
mod minors;
pub mod presentation;
pub mod reconstruct;
pub mod specialize;

pub use bounds::{bound_n, BoundReport};
pub use direction::{
    decomposable_point, derivative_along, find_direction, DirectionalDerivative, DEFAULT_BOX,
};
pub use expansion::{
    phi_expand, pieces, CovariantExpansion, CovariantTerm, Factor, Functional, PhiExpansion,
};
pub use presentation::{ClosedSetPresentation, DeltaDegree, SampleFn, Sampler, SPOT_CHECKS};
pub use reconstruct::{
    covariant_decompose, reconstruct_top, strength_from_membership, MembershipCertificate,
    MembershipEngine,
};
pub use specialize::{reduce_integral, reduce_tensor, specialize_mod_p, Specialization};
