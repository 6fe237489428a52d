pub mod gf;
pub mod radix;
pub mod rs_code;
pub mod constructions;
pub mod repair;
pub mod harness;
