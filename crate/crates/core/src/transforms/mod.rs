//! Code transforms: X generator splitting, thickening along an interval, the
//! alternative qubit split, and the parameter choices for the copy assignment.

mod alt_split;
mod lll;
mod split;
mod thicken;

pub use crate::code::interval_complex;
pub use alt_split::alt_qubit_split_all;
pub use lll::{check_lll_condition, lll_lhs_estimate, lll_parameters, parse_rational, LllVariant, E_UPPER};
pub use split::{
    split_all_x_generators, split_all_x_generators_with, split_one_generator, split_one_generator_with, QubitOrder,
    SplitStep, SplitTrace, EXHAUSTIVE_ORDER_LIMIT,
};
pub use thicken::{full_product_code, thicken, thicken_all_first, MAX_THICKENED_BITS};
