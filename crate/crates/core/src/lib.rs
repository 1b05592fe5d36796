#![allow(clippy::needless_range_loop)]

pub mod order;
pub mod quantale;
pub mod search;
pub mod module;
pub mod constructions;
pub mod oracle;
pub mod catalog;
pub mod suite;
pub mod logic;
pub mod combinators;
pub mod io;
