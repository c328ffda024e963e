pub mod catalog;
pub mod csp_core;
pub mod csp_search;
pub mod harness;
pub mod prefmodel;
pub mod problem;
pub mod properties;
pub mod subset_search;
pub mod tractable;
