//! Weighted automata over semirings and normalization in Pisot numeration
//! systems.
//!
//! The crate turns a linear representation of a sequence indexed by greedy
//! representations of integers into a linear representation of the series
//! indexed by the *value* of arbitrary digit words, using a finite
//! multi-tape normalizer and a product between that normalizer and a
//! weighted automaton.
//!
//! Everything here is pure computation over `alloc`; file formats, DOT export
//! and the command-line tool live in the companion `pisot-wfa-tool` crate.
//!
//! Module map:
//!
//! - [`semiring`]: the weight domain and dense matrices over it.
//! - [`numeration`]: linear numeration systems, words, greedy representations.
//! - [`dfa`]: deterministic partial automata over integer-vector letters.
//! - [`normalizer`]: normalization automata (base, extended, multidimensional).
//! - [`wfa`]: weighted automata and linear representations.
//! - [`pipeline`]: the star product, the value automaton and the conversion
//!   between greedy-indexed and value-indexed representations.
#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod dfa;
mod error;
pub mod normalizer;
pub mod numeration;
pub mod pipeline;
pub mod semiring;
pub mod wfa;

pub use error::{Error, Result};
pub use numeration::{Letter, NumerationSystem, SystemTuple, Word};
