//! Command-line front end for `modmix-core`: set expressions, parallel
//! drivers, JSON/CSV/text reports, report verification and the reproduction
//! suite behind `modmix reproduce`.

pub mod cli;
pub mod commands;
pub mod parallel;
pub mod report;
pub mod reproduce;
pub mod setexpr;
pub mod verify;
