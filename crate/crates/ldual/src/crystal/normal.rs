use std::collections::HashMap;

use crate::crystal::{
    lockstep_isomorphic, CrystalGraph, Element, Monomial, MonomialCrystal, DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::liealg::{CartanData, Weight};

/// True iff every restriction to at most two nodes splits into connected
/// highest-weight crystals of the corresponding rank-≤2 datum.
pub fn is_normal<T: Element>(g: &CrystalGraph<T>, c: &CartanData) -> bool {
    let n = c.rank();
    let mut subsets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for i in 0..n {
        for j in i + 1..n {
            subsets.push(vec![i, j]);
        }
    }
    let mut models: HashMap<(Vec<usize>, Weight), Option<CrystalGraph<Monomial>>> = HashMap::new();
    for nodes in subsets {
        let restricted = g.restrict_nodes(&nodes);
        let sub_cartan = c.restrict(&nodes);
        for comp in restricted.components() {
            let piece = restricted.subgraph(&comp);
            let sources = piece.sources();
            if sources.len() != 1 {
                return false;
            }
            let top = piece.wt[sources[0]].clone();
            let model = models
                .entry((nodes.clone(), top.clone()))
                .or_insert_with(|| {
                    let ops = MonomialCrystal::new(sub_cartan.clone()).ok()?;
                    let seed = ops.highest(&top).ok()?;
                    CrystalGraph::generate(&ops, seed, DEFAULT_BUDGET).ok()
                });
            match model {
                Some(m) if lockstep_isomorphic(&piece, m).unwrap_or(false) => {}
                _ => return false,
            }
        }
    }
    true
}

/// The two Langlands f_2-edges that are exchanged in the tilde crystal of
/// ω1 + 2ω2 in type B2 (seed Y_{1,0} Y_{2,1}^2).
pub const B2_REWIRING: [(&str, &str); 2] = [
    ("2_1^32_3^{-1}", "2_12_3^{-3}1_2^2"),
    ("1_01_4^{-1}2_12_3", "1_01_22_3^{-1}2_5^{-1}"),
];

/// Exchanges the targets of the two f_2-edges in [`B2_REWIRING`].
pub fn rewire_b2_example(g: &CrystalGraph<Monomial>) -> Result<CrystalGraph<Monomial>> {
    let find = |s: &str| -> Result<usize> {
        let m: Monomial = s.parse()?;
        g.index_of(&m)
            .ok_or_else(|| Error::MissingElement(s.to_string()))
    };
    let mut idx = Vec::new();
    for (from, to) in B2_REWIRING {
        let (a, b) = (find(from)?, find(to)?);
        if g.f[1][a] != Some(b) {
            return Err(Error::MissingElement(format!("edge {from} -> {to}")));
        }
        idx.push((a, b));
    }
    let (a0, b0) = idx[0];
    let (a1, b1) = idx[1];
    Ok(g.with_f_edges(&[(1, a0, b1), (1, a1, b0)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::monomial_crystal;

    fn tilde(c: &CartanData, lam: [i64; 2]) -> CrystalGraph<Monomial> {
        monomial_crystal(c, &Weight::from(lam))
            .unwrap()
            .tilde_subcrystal()
    }

    #[test]
    fn pseudo_fundamental_tildes_are_normal() {
        let b2 = CartanData::b(2);
        let g2 = CartanData::g2();
        for (c, lam) in [(&b2, [1, 0]), (&b2, [0, 2]), (&g2, [1, 0]), (&g2, [0, 3])] {
            let t = tilde(c, lam);
            assert!(is_normal(&t, &c.langlands_dual()), "{} {:?}", c.name, lam);
        }
    }

    #[test]
    fn single_element_is_normal() {
        let b2 = CartanData::b(2);
        assert!(is_normal(&tilde(&b2, [0, 0]), &b2.langlands_dual()));
    }

    #[test]
    fn b2_mixed_component_and_rewiring() {
        let b2 = CartanData::b(2);
        let dual = b2.langlands_dual();
        let t = tilde(&b2, [1, 2]);
        assert_eq!(t.len(), 35);
        assert_eq!(t.component_sizes(), vec![16, 15, 4]);
        assert!(!is_normal(&t, &dual));
        let mixed = t.subgraph(&t.components()[1]);
        let mut tops: Vec<String> = mixed
            .sources()
            .iter()
            .map(|&x| mixed.elements[x].to_string())
            .collect();
        tops.sort();
        assert_eq!(tops, ["1_01_22_12_3^{-1}", "2_1^32_3^{-1}"]);
        // the two sources meet at the bottom along different paths
        let walk = |start: &str, path: &[usize]| {
            let mut x = t.index_of(&start.parse().unwrap()).unwrap();
            for &i in path {
                x = t.f[i][x].unwrap();
            }
            t.elements[x].to_string()
        };
        assert_eq!(
            walk("2_1^32_3^{-1}", &[1, 0, 0, 1]),
            "1_21_4^{-1}2_3^{-1}2_5^{-1}"
        );
        assert_eq!(
            walk("1_01_22_12_3^{-1}", &[0, 0, 1, 1, 0]),
            "1_21_4^{-1}2_3^{-1}2_5^{-1}"
        );

        let r = rewire_b2_example(&t).unwrap();
        assert!(is_normal(&r, &dual));
        assert_eq!(r.wt, t.wt);
        assert_eq!((&r.eps, &r.phi), (&t.eps, &t.phi));
        let before = t.edge_list();
        let after = r.edge_list();
        assert_eq!(before.len(), after.len());
        assert_eq!(before.iter().filter(|e| !after.contains(e)).count(), 2);
        let mut tops: Vec<Weight> = r.sources().iter().map(|&x| r.wt[x].clone()).collect();
        tops.sort();
        let expected: Vec<Weight> = [[0, 1], [1, 0], [1, 1], [2, 0]]
            .into_iter()
            .map(Weight::from)
            .collect();
        assert_eq!(tops, expected);
        let mut sizes = r.component_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![4, 5, 10, 16]);
    }

    #[test]
    fn rewiring_needs_the_right_crystal() {
        let b2 = CartanData::b(2);
        assert!(rewire_b2_example(&tilde(&b2, [0, 2])).is_err());
    }
}
