//! Channel codes for PUF key reproduction: Reed-Muller and Reed-Solomon codes,
//! generalized concatenated (GC) codes built from coset partitions, a
//! code-offset fuzzy extractor, and block-error analysis tools.

pub mod gfield;
pub mod linearcode;
pub mod rmcode;
pub mod rscode;
pub mod channel;
pub mod gccode;
pub mod analysis;
pub mod extractor;
