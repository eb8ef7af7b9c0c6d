//! Chain complexes, homology through Smith normal form, multilinear power
//! functors on free modules and the Dold-Kan correspondence.

mod complex;
mod power;
mod simplicial;
pub mod snf;

pub use complex::{homology, quasi_same, ChainComplex, HomologyGroup, HomologyReport};
pub(crate) use complex::torsion_orders;
pub use power::{
    power_basis, power_functor, power_functor_checked, power_image, power_rank, PowerBasis,
    PowerFunctor, SparseVec,
};
pub(crate) use simplicial::{diffs_from_zero, DoldKanBasis};
pub use simplicial::{dold_kan_gamma, normalized_chains, surjections, SimplicialModule};
pub use snf::{smith_normal_form, Smith};
