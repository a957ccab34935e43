// The guide chapters under book/src are compiled as doc-tests so every code
// snippet in the book stays in sync with the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/exact-arithmetic.md")]
pub mod exact_arithmetic {}
#[doc = include_str!("../../../book/src/mixed-hodge.md")]
pub mod mixed_hodge {}
#[doc = include_str!("../../../book/src/limiting-data.md")]
pub mod limiting_data {}
#[doc = include_str!("../../../book/src/wedge-criterion.md")]
pub mod wedge_criterion {}
#[doc = include_str!("../../../book/src/positivity.md")]
pub mod positivity {}
#[doc = include_str!("../../../book/src/thresholds.md")]
pub mod thresholds {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
