//! Parse, store and publish UDC (Universal Decimal Classification)
//! classmarks as linked data.
//!
//! The crate is organised around five building blocks:
//!
//! - [`notation`]: tokenizer and structural parser for classmarks, including
//!   combined notations with connecting signs and subgroups;
//! - [`store`]: an immutable store of versioned class records with tiered
//!   dataset membership, deprecation chains and change lists;
//! - [`uri`]: the mnemonic escaping scheme and class URI minting/parsing;
//! - [`rdf`]: SKOS record graphs and the atomized graphs of combined
//!   classmarks, with deterministic Turtle and JSON serializations;
//! - [`interpret`]: element-by-element annotation of a classmark against the
//!   store, rendered as JSON or HTML;
//! - [`service`]: the HTTP lookup service with token-based dataset access.
//!
//! The `udc` binary wraps all of this in a command-line interface.

pub mod interpret;
pub mod notation;
pub mod rdf;
pub mod service;
pub mod store;
pub mod uri;
