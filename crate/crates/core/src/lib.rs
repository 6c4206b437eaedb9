// Matrix code indexes by row and column; `!(x > 0.0)` also rejects NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod hyperbolic;
pub mod pipeline;
pub mod tree;
pub mod valuation;
pub mod words;
