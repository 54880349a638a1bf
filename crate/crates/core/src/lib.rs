mod border;
mod certify;
mod charpoly;
mod error;
mod families;
mod inertia;
mod matrix;
mod pattern;
mod rational;
mod spectra;

pub use border::{
    apply_border_step, check_equal_index, check_unequal_index, detect_cancellation,
    equal_index_border, general_border, recursive_border, recursive_border_with,
    unequal_index_border, BorderProvenance,
    BorderStep, EqualIndexReport, RoundSummary, UnequalIndexReport,
};
pub use certify::{
    certify_nilpotent_jacobian, find_full_rank_placement, jacobian, nonderogatory_outcome,
    Certification, CheckOutcome, VariablePlacement,
};
pub use charpoly::CharPoly;
pub use error::{Error, Result};
pub use families::{gen_bn, gen_kn, seed_by_name, seed_catalog, verify_seed_catalog, SeedEntry, SeedKind};
pub use inertia::{
    certify_inertia_jacobian, inertial_equal_index_border, inertial_unequal_index_border,
    refined_inertia, InertiaCertification, InertiaJacobianReport, InertialEqualBorderReport,
    InertialUnequalBorderReport, RefinedInertia, DEFAULT_INERTIA_TOL,
};
pub use matrix::RationalMatrix;
pub use pattern::{
    apply_transform, apply_transform_matrix, equivalent, is_realization, is_superpattern, sign_of,
    Sign, SignPattern, Transform, EQUIVALENCE_ORDER_BOUND,
};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
pub use spectra::{float_char_poly, float_jacobian, realize_polynomial, RealizationResult, RealizeOptions};
