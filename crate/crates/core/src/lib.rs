//! Generalized hypergeometric functions through their Stieltjes integral
//! representations with Meijer G densities.

pub mod analysis;
pub mod error;
pub mod gamma;
pub mod gdensity;
pub mod hypeval;
pub mod linalg;
pub mod pade;
pub mod params;
pub mod quad;
pub mod stieltjes;

pub use error::{Error, Result};
pub use params::ParameterSet;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/parameters.md")]
    mod parameters {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/kernel.md")]
    mod kernel {}
    #[doc = include_str!("../../../book/src/representation.md")]
    mod representation {}
    #[doc = include_str!("../../../book/src/pade.md")]
    mod pade {}
    #[doc = include_str!("../../../book/src/inequalities.md")]
    mod inequalities {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
