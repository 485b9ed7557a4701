//! Certificates `f|_p = A_p·f|_p(z^(p^l))`: section splitting, one-step
//! certificates, their iteration, orbit detection under the Cartier
//! operator, final assembly, and the truncated weak Frobenius matrix.

mod cert;
mod evidence;
mod frobenius;
mod split;

pub use cert::{
    assemble_theorem1, certificate_prop62, identity_mismatch, iterate_lemma52, orbit_detect, orbit_detect_with,
    AssembleOptions, BoundKind, Certificate, OrbitReport, Theorem1, MIN_COMPARE,
};
pub use evidence::{classify_evidence, EvidenceReport, EvidenceRow, Verdict};
pub use frobenius::{frobenius_shadow, FrobShadow};
pub use split::{split_elimination, split_pade, SplitWitness};
