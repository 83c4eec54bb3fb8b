//! Rational D(q)-quadruples with prescribed product.
//!
//! A D(q)-quadruple is a set of four distinct nonzero rationals {a, b, c, d}
//! with every pairwise product plus q a rational square. Quadruples with
//! product m correspond to triples of points on the elliptic curve
//! E_m: W² = T³ + (4q²−2m)T² + m²T, reached from the genus-one curve
//! D_m: (X²−q)(Y²−q) = m through a birational map anchored at a base point.
//! Everything here is exact rational (or Q(√q)) arithmetic.

pub mod birational;
pub mod cli;
pub mod curves;
pub mod error;
pub mod exactmath;
pub mod quadruples;
pub mod search;

pub use birational::{f_inv, f_map, g_eval, g_square_class};
pub use curves::{
    e_add, e_neg, e_scalar_mul, on_curve_d, on_curve_e, point_r, point_s, special_points, Curve,
    DPoint, EPoint, Params, SpecialPointSet, SpecialPoints,
};
pub use error::{Error, Result};
pub use exactmath::{
    is_square, parse_rational, sqrt_exact, squarefree_part, QuadExtElem, Rational, SquareClass,
};
pub use quadruples::{
    admissibility_check, construct_family_quadruple, construct_from_triple, is_nondegenerate,
    m_from_tu, orbit, quadruple_to_triple, verify_quadruple, AdmissibilityVerdict, Certificate,
    Quadruple, Sign, Triple, Verdict,
};
pub use search::{brute_force_quadruples, find_square_base_point, search_d_points, HeightBound};
