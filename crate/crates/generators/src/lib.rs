//! Execution generators: the triangle-freeness reduction (§6), random
//! executions, the litmus figures, and the benchmark presets.

mod litmus;
mod presets;
mod random;
mod triangle;

pub use litmus::{gen_litmus, LITMUS_NAMES};
pub use presets::{gen_preset, PRESET_NAMES};
pub use random::{gen_random, GenParams};
pub use triangle::{gen_triangle_reduction, UndirectedGraph};

#[cfg(test)]
mod tests;
