//! Inputs shared by the benchmarks.

use milnor_core::jacobian::MilnorContext;
use milnor_core::polyforms::parse_poly_auto;

pub const F1: &str = "x^5+y^4*z+x^4*y";
pub const CUBIC: &str = "x^3+y^2*z+x^2*y";

/// Fresh context, so nothing is cached between iterations.
pub fn context(text: &str) -> MilnorContext {
    MilnorContext::new(parse_poly_auto(text, 3).expect("valid polynomial")).expect("homogeneous")
}
