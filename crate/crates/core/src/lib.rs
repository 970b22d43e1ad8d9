pub mod boundary;
pub mod cli;
pub mod error;
pub mod exactmath;
pub mod families;
pub mod format;
pub mod graph;
pub mod groups;
pub mod tree;
pub mod words;
