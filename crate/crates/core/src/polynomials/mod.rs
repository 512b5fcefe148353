//! Polynomials, determinantal representations and Hessian certificates.

pub mod determinantal;
pub mod hessian;
pub mod matrix;
pub mod poly;

pub use determinantal::{
    determinant_sym, grenet_literal_matrix, grenet_matrix, pad_polynomial, permanent_sym,
    verify_representation, Verification, VerifyMode, MODULUS,
};
pub use hessian::{
    det_hessian_ranks, hessian, hessian_transform_check, matrix_vars, mignon_ressayre_certificate,
    normal_form_point, rank_at, stabilizer_check, MignonRessayreReport,
};
pub use matrix::{AffineMatrix, PolyMatrix, RationalMatrix};
pub use poly::{Monomial, SparsePoly};
