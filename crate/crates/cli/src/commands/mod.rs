pub mod baseline;
pub mod descriptors;
pub mod distributions;
pub mod eval;
pub mod fingerprint;
pub mod parse;
pub mod prepare;
