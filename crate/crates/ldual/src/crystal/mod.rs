//! Monomial crystals, finite crystal graphs, Langlands operators and
//! normality checks.

mod graph;
mod monomial;
mod normal;

pub use graph::{lockstep_isomorphic, lockstep_map, CrystalGraph, Element, DEFAULT_BUDGET};
pub use monomial::{
    a_monomial, default_parity, e_op, f_op, highest_monomial, phi_eps_pq, pi_monomial, Monomial,
    MonomialCrystal, Strings,
};
pub use normal::{is_normal, rewire_b2_example};

use crate::liealg::{CartanData, Weight};

/// Kashiwara operators on some realization of a crystal.
pub trait CrystalOps {
    type Elem: Element;

    fn cartan(&self) -> &CartanData;
    fn f(&self, x: &Self::Elem, i: usize) -> Option<Self::Elem>;
    fn e(&self, x: &Self::Elem, i: usize) -> Option<Self::Elem>;
    fn wt(&self, x: &Self::Elem) -> Weight;
}

/// Crystal of the irreducible of highest weight `lam`, realized on monomials
/// with the default parity.
pub fn monomial_crystal(
    c: &CartanData,
    lam: &crate::liealg::Weight,
) -> crate::Result<CrystalGraph<Monomial>> {
    let ops = MonomialCrystal::new(c.clone())?;
    let seed = ops.highest(lam)?;
    CrystalGraph::generate(&ops, seed, DEFAULT_BUDGET)
}
