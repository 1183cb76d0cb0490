//! Exact linear algebra over ℚ and GF(p), finite-dimensional associative
//! algebras given by structure constants, Morita contexts and the generalized
//! matrix algebras built from them, and the spaces of derivations, Jordan
//! derivations and antiderivations of those algebras.

pub mod algebra;
pub mod derivations;
pub mod gallery;
pub mod gma;
pub mod linalg;
pub mod morita;
pub mod scalar;
pub mod structure;

pub use algebra::{AlgebraElement, AlgebraError, CharacteristicClass, Side, StructureAlgebra};
pub use derivations::{
    antiderivation_space, derivation_space, inner_derivation_space, jordan_derivation_space,
    DerivationError, LinearMap, MapKind, MapSubspace,
};
pub use gma::{build_gma, Corner, GeneralizedMatrixAlgebra, GmaError};
pub use linalg::{LinalgError, Matrix, RowReducer};
pub use morita::{
    Bimodule, Identity, ModuleName, MoritaContext, MoritaError, Pairing, ValidationReport, Violation, Which,
};
pub use scalar::{FieldSpec, Scalar};
pub use structure::{
    certify_jordan_splitting, certify_no_antiderivations, decompose_jordan, extract_jordan_components,
    rebuild_from_form, verify_conditions, Certificate, ConditionReport, ConditionResult, FormConditions,
    JordanCanonicalForm, JordanDecomposition, StructureError, Verdict,
};
