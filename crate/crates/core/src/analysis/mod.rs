//! Executable form of the convergence analysis.
//!
//! * [`truncation`]: the finite coefficient recursion for `T_{h,p} c_m` and
//!   its cross-check against the spectral multilevel residual.
//! * [`scan`]: coefficientwise lemma inequalities and the three-term norm
//!   recursion, scanned over every admissible index.
//! * [`bounds`]: the `m_p` sequence and the final error bound.
//! * [`identity`]: the decomposition of `M_{1,p} c_m` for high frequencies.

pub mod bounds;
pub mod identity;
pub mod scan;
pub mod truncation;

pub use bounds::{mp_sequence, theorem_bound, MpVariant, TheoremBound};
pub use identity::highfreq_identity_check;
pub use scan::{scan_lemma_bounds, BoundScanReport, LemmaFamily, Violation};
pub use truncation::{
    init_truncation, truncation_discrepancies, truncation_norm, verify_truncation, TruncationState,
    MAX_TRUNCATION_LEVELS,
};
