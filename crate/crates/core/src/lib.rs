pub mod error;
pub mod field;
pub mod group;
pub mod verify;
pub mod constructions;
pub mod counting;
pub mod audit;
pub mod constants;
pub mod search;
pub mod doc;
pub mod cli;
