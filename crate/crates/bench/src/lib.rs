//! Benchmark inputs shared by the criterion harness.

pub const UMBRELLA: &str = include_str!("../../../inputs/i1_umbrella.toric");
pub const I2: &str = include_str!("../../../inputs/i2.toric");
pub const I3: &str = include_str!("../../../inputs/i3_proofreading.toric");
pub const I4: &str = include_str!("../../../inputs/i4.toric");
pub const I5: &str = include_str!("../../../inputs/i5_phosphorylation.toric");

/// `(name, document)` for each benchmark ideal.
pub fn benchmark_inputs() -> [(&'static str, &'static str); 5] {
    [("i1", UMBRELLA), ("i2", I2), ("i3", I3), ("i4", I4), ("i5", I5)]
}
