//! Subfamily and colorful-tuple enumeration, exact predicate evaluation,
//! fractional statistics and the iterative diameter certificate.

mod certify;
mod fractional;
mod helly;
mod predicate;

pub use certify::{certify_diameter, CertificateStep, CertifyOutcome, CertifyStrategy, DiameterCertificate};
pub use fractional::{
    cap_cover_experiment, diameter_direction, diameter_direction_region, fractional_vwidth, fractional_vwidth_with,
    CapCoverReport, DiameterDirection, FractionalWidthReport, SubfamilySearch, EXHAUSTIVE_LIMIT,
};
pub use helly::{
    check_colorful, check_helly, check_helly_with, search_counterexamples, ColorConclusion, ColorfulReport,
    EngineConfig, FractionalReport, SearchReport, SubsetError, SubsetValue,
};
pub use predicate::{evaluate, Evaluation, Evaluator, Measure, Metric, Predicate};
