pub mod cochain;
pub mod complex;
pub mod dupont;
pub mod error;
pub mod form;
pub mod scalar;
pub mod tensor;
pub mod transfer;
pub mod tree;

pub use error::Error;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    mod scalars {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/cochains.md")]
    mod cochains {}
    #[doc = include_str!("../../../book/src/dupont.md")]
    mod dupont {}
    #[doc = include_str!("../../../book/src/tensors.md")]
    mod tensors {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/transfer.md")]
    mod transfer {}
    #[doc = include_str!("../../../book/src/interval.md")]
    mod interval {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    mod complexes {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
