//! Exact characteristic polynomials, signatures and main spectra.

pub mod bivariate;
pub mod field;
pub mod main_spectrum;
pub mod matrix;
pub mod ring;
pub mod signature;

pub use bivariate::{char_poly_bivariate, pencil_char_poly, BivariateCharPoly};
pub use main_spectrum::{
    harmonic_main_sum, harmonic_main_sum_sign, main_angles, main_polynomial, HarmonicSum,
    MainSpectrum,
};
pub use matrix::{IntMatrix, Matrix, PolyMatrix, RatMatrix};
pub use ring::Ring;
pub use signature::{char_poly, signature, CharPoly, Signature};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectralError {
    #[error("the all-one vector is not in the column space (0 is a main eigenvalue)")]
    JNotInRange,
    #[error("relation matrices do not partition J - I")]
    RelationCover,
    #[error("matrix is not symmetric")]
    NotSymmetric,
}
