//! Exact computations in the Baumslag-Solitar groups
//! `BS(m, n) = <a, b | b^-1 a^m b = a^n>`: Britton reduction, the affine
//! representation onto `Z[1/mn] x| Z`, the Bass-Serre tree, quotients of
//! tree balls by `ker f`, and cylinder complexes with a link-condition check.
//!
//! ```
//! use bsforest::words::{britton_reduce, BsParams, Word};
//!
//! let p = BsParams::new(2, 3)?;
//! let w: Word = "B a^4 b".parse()?;
//! assert_eq!(britton_reduce(&w, &p).to_word().to_string(), "a^6");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! The guide in `book/` walks through each module; its snippets run as
//! doctests.

pub mod affine;
pub mod complex;
pub mod quotient;
pub mod tree;
pub mod verify;
pub mod words;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/affine.md")]
    mod affine {}
    #[doc = include_str!("../../../book/src/tree.md")]
    mod tree {}
    #[doc = include_str!("../../../book/src/quotient.md")]
    mod quotient {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    mod complexes {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
