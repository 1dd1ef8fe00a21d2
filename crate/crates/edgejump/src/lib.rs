//! Finite-n Hankel determinants of the Gaussian weight with a jump, the
//! Ablowitz–Segur family of Painlevé II, Airy-kernel Fredholm determinants
//! and the Monte-Carlo ensembles they describe.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod numerics;
pub mod specfun;
pub mod weightlab;
pub mod painleve;
pub mod fredholm;
pub mod asympt;
pub mod rmt;

// The guide's code listings run as doc-tests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/weights.md")]
    pub mod weights {}
    #[doc = include_str!("../../../book/src/painleve.md")]
    pub mod painleve {}
    #[doc = include_str!("../../../book/src/fredholm.md")]
    pub mod fredholm {}
    #[doc = include_str!("../../../book/src/asymptotics.md")]
    pub mod asymptotics {}
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    pub mod monte_carlo {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
