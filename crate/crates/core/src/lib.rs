pub mod arith;
pub mod compensated;
pub mod error;
pub mod halfplane;
pub mod harness;
pub mod mc;
pub mod operators;
pub mod quad;
pub mod series;
pub mod spaces;
pub mod textfmt;
