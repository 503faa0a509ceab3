//! Tensor powers of a category resolution and the maps `χ_n` into them.

mod barcobar;
mod map;
mod tensor;

pub use barcobar::{chi_barcobar_2, interval_coproduct, validated_barcobar_chi2, SignConvention};
pub use map::{
    chi_construct, chi_iterate, coassociativity_defects, expand_with, verify_c1_c6, ChiMap, ChiReport, ConditionReport,
};
pub use tensor::TensorElement;
