//! Exact polynomial algebra and its numeric companion.

pub mod complex;
pub mod linalg;
pub mod macaulay;
pub mod mpoly;
pub mod rational;
pub mod resultant;
pub mod roots;
pub mod upoly;

pub use complex::{ComplexMP, DEFAULT_PRECISION, MIN_PRECISION};
pub use linalg::{CMatrix, QMatrix};
pub use macaulay::{macaulay_resultant, macaulay_resultant_data, MacaulayData};
pub use mpoly::{CPoly, Coeff, MPoly, Poly};
pub use rational::{int, rat, Integer, Rational};
pub use resultant::{poly_det, resultant, resultant_bivariate, resultant_univariate};
pub use roots::{roots, Root, RootValue};
pub use upoly::UPoly;

use crate::error::{Error, Result};

/// Restricts `f` to the linear span of `basis` (coordinates in the ambient
/// space of `f`). The result is a polynomial in `basis.len()` variables.
pub fn restrict_to_subspace(f: &MPoly, basis: &[Vec<Rational>]) -> Result<MPoly> {
    if basis.iter().any(|b| b.len() != f.nvars()) {
        return Err(Error::VariableMismatch(basis.first().map_or(0, Vec::len), f.nvars()));
    }
    if QMatrix::from_rows(basis.to_vec()).rank() != basis.len() {
        return Err(Error::DependentBasis);
    }
    f.restrict_linear(basis)
}

/// Numeric restriction for complex spanning vectors.
pub fn restrict_to_subspace_complex(f: &MPoly, basis: &[Vec<ComplexMP>]) -> Result<CPoly> {
    let prec = basis.iter().flatten().map(ComplexMP::precision).max().unwrap_or(MIN_PRECISION);
    f.to_complex(prec).restrict_linear(basis)
}
