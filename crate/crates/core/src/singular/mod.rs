//! Synthetic singular-number congruences: eigenvector solving, the closed
//! form and its coefficient recurrence, and valuation-based classification.

mod candidate;
mod eigen_space;
mod linalg;

pub use candidate::{
    analyze_valuation, forms_agree, gamma_recurrence, gamma_recurrence_with_exponent, is_primary,
    normalize_leading, product_classification, quotient_primary_check, recurrence_candidate,
    residues, synthesize_closed_form, synthesize_with_exponent, Classification, GammaRecord,
    PrimaryThreshold, ProductReport, Provenance, SingularCandidate, ValuationAnalysis,
    DEFAULT_PRECISION,
};
pub use eigen_space::{
    eigen_defect, eigen_space, linear_eigen_defect, EigenSpace, EigenSpaceSummary,
};
