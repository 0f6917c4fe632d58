//! Library surface of the command-line tool: the group-document format.

pub mod document;
