pub mod semiwave;
pub mod simulate;
pub mod sweep;
pub mod threshold;
