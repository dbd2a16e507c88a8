//! Exact data model and decision procedures for relative pre-modular
//! category data, with a worked sl(2|1) instantiation.

pub mod catmodel;
pub mod checks;
pub mod closure;
pub mod exactnum;
pub mod sl21;
