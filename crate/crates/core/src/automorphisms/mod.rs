//! Möbius automorphisms of `L_n`, their descent to `𝕃_n`, the tetrablock
//! picture of `𝕃_3`, and normal forms of points and pairs.

mod group;
mod lhat;
mod normalize;
mod tetra;

pub use group::{
    apply_mobius, bidisc_rotation, bidisc_swap, bidisc_translation, embed_leading, kappa_append,
    kappa_lift, lie_ball_to_origin, w_vector, GroupElement, GROUP_TOL, SINGULAR_TOL,
};
pub use lhat::LhatAutomorphism;
pub use normalize::{
    normalize_pair, normalize_point_lhat, PairNormalization, PointNormalization, NORMAL_FORM_TOL,
};
pub use tetra::{
    lhat3_from_tetra, normalize_tetra, perturbations, tetra_from_lhat3, TetraMobius,
    TetraNormalization,
};
