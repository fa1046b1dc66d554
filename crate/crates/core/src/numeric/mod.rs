//! Exact rational, interval, polynomial and algebraic-number arithmetic.

pub mod algebraic;
pub mod baker;
pub mod factor;
pub mod field;
pub mod interval;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod roots;
