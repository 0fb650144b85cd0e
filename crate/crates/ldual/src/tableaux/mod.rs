//! Two-row Kashiwara-Nakashima tableaux for A2 and C2 (the B2 side of the
//! duality is read with the nodes swapped), their parametrized families and
//! the explicit crystal bijections between Langlands components.

mod a2;
mod b2;

use std::fmt;

use serde_json::{json, Value};

use crate::crystal::{CrystalGraph, CrystalOps, Element};
use crate::error::{Error, Result};
use crate::liealg::{CartanData, Weight};

pub use a2::{
    a2_class, a2_domain, a2_highest_params, bijection_a2, check_a2_shape, doubled_a2_crystal,
    param_a2, params_of_a2, A2Class, A2Map, TableauA2,
};
pub use b2::{
    b2_crystal, bijection_psi_b2, bijection_psi_b2_printed, check_psi_shape, dual_b2_highest,
    dual_param_b2, dual_params_of, param_b2, psi_case, psi_printed_gaps, psi_target_amended,
    psi_target_b2, B2Params, DualParams, PsiCase, PsiDomain, TableauB2,
};

/// Letters are stored as small integers; for C2 the order is 1, 2, 2bar, 1bar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Alphabet {
    A2,
    C2,
}

impl Alphabet {
    pub fn size(self) -> u8 {
        match self {
            Alphabet::A2 => 3,
            Alphabet::C2 => 4,
        }
    }

    fn f(self, x: u8, i: usize) -> Option<u8> {
        match (self, x, i) {
            (Alphabet::A2, 1, 0) | (Alphabet::C2, 1, 0) => Some(2),
            (Alphabet::A2, 2, 1) => Some(3),
            (Alphabet::C2, 3, 0) => Some(4),
            (Alphabet::C2, 2, 1) => Some(3),
            _ => None,
        }
    }

    fn e(self, x: u8, i: usize) -> Option<u8> {
        (1..=self.size()).find(|&y| self.f(y, i) == Some(x))
    }

    fn wt(self, x: u8) -> [i64; 2] {
        match (self, x) {
            (_, 1) => [1, 0],
            (_, 2) => [-1, 1],
            (Alphabet::A2, 3) => [0, -1],
            (Alphabet::C2, 3) => [1, -1],
            (Alphabet::C2, 4) => [-1, 0],
            _ => unreachable!("letter {x} outside the alphabet"),
        }
    }

    fn cartan_matrix(self) -> [[i64; 2]; 2] {
        match self {
            Alphabet::A2 => [[2, -1], [-1, 2]],
            Alphabet::C2 => [[2, -2], [-1, 2]],
        }
    }

    pub fn label(self, x: u8) -> &'static str {
        match (self, x) {
            (_, 1) => "1",
            (_, 2) => "2",
            (Alphabet::A2, 3) => "3",
            (Alphabet::C2, 3) => "-2",
            (Alphabet::C2, 4) => "-1",
            _ => "?",
        }
    }
}

/// Where the two-cell columns sit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layout {
    /// Single cells first in the bottom row, columns on the right (the
    /// g-side layout).
    Right,
    /// Columns first, the longer top row continues on the right (the dual
    /// layout).
    Left,
}

/// A two-row tableau. Positions are counted from the left of the longer row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    pub alphabet: Alphabet,
    pub layout: Layout,
    pub top: Vec<u8>,
    pub bottom: Vec<u8>,
}

impl Tableau {
    /// Highest weight tableau with `singles` single cells and `columns`
    /// two-cell columns.
    pub fn highest(alphabet: Alphabet, layout: Layout, singles: usize, columns: usize) -> Self {
        match layout {
            Layout::Right => Tableau {
                alphabet,
                layout,
                top: vec![1; columns],
                bottom: (0..singles + columns)
                    .map(|i| if i < singles { 1 } else { 2 })
                    .collect(),
            },
            Layout::Left => Tableau {
                alphabet,
                layout,
                top: vec![1; singles + columns],
                bottom: vec![2; columns],
            },
        }
    }

    pub fn singles(&self) -> usize {
        self.top.len().abs_diff(self.bottom.len())
    }

    pub fn columns(&self) -> usize {
        self.top.len().min(self.bottom.len())
    }

    /// Pairs (bottom, top) of every two-cell column, left to right.
    fn column_pairs(&self) -> Vec<(u8, u8)> {
        match self.layout {
            Layout::Right => {
                let s = self.singles();
                self.top
                    .iter()
                    .enumerate()
                    .map(|(k, &t)| (self.bottom[s + k], t))
                    .collect()
            }
            Layout::Left => self
                .bottom
                .iter()
                .zip(&self.top)
                .map(|(&b, &t)| (b, t))
                .collect(),
        }
    }

    /// Semistandard with strict columns, plus the two forbidden C2
    /// configurations.
    pub fn is_valid(&self) -> bool {
        let n = self.alphabet.size();
        let in_range = |r: &Vec<u8>| r.iter().all(|&x| (1..=n).contains(&x));
        let sorted = |r: &Vec<u8>| r.windows(2).all(|w| w[0] <= w[1]);
        let shape_ok = match self.layout {
            Layout::Right => self.top.len() <= self.bottom.len(),
            Layout::Left => self.bottom.len() <= self.top.len(),
        };
        if !shape_ok
            || !in_range(&self.top)
            || !in_range(&self.bottom)
            || !sorted(&self.top)
            || !sorted(&self.bottom)
        {
            return false;
        }
        let cols = self.column_pairs();
        if cols.iter().any(|&(b, t)| b <= t) {
            return false;
        }
        if self.alphabet == Alphabet::C2 {
            if cols.iter().any(|&(b, t)| (b, t) == (4, 1)) {
                return false;
            }
            if cols.windows(2).any(|w| w[1].0 == 3 && w[0].1 == 2) {
                return false;
            }
        }
        true
    }

    /// Reading order: columns from right to left, top cell before bottom.
    /// Cells are (is_top, index into that row).
    fn reading(&self) -> Vec<(bool, usize)> {
        let mut out = Vec::with_capacity(self.top.len() + self.bottom.len());
        match self.layout {
            Layout::Right => {
                let s = self.singles();
                for i in (0..self.bottom.len()).rev() {
                    if i >= s {
                        out.push((true, i - s));
                    }
                    out.push((false, i));
                }
            }
            Layout::Left => {
                for i in (0..self.top.len()).rev() {
                    out.push((true, i));
                    if i < self.bottom.len() {
                        out.push((false, i));
                    }
                }
            }
        }
        out
    }

    fn cell(&self, (top, k): (bool, usize)) -> u8 {
        if top {
            self.top[k]
        } else {
            self.bottom[k]
        }
    }

    /// Signature rule on the reading word.
    fn act(&self, i: usize, raise: bool) -> Option<Tableau> {
        let cells = self.reading();
        let mut plus: Vec<usize> = Vec::new();
        let mut minus: Vec<usize> = Vec::new();
        for (k, &c) in cells.iter().enumerate() {
            let x = self.cell(c);
            if self.alphabet.e(x, i).is_some() && plus.pop().is_none() {
                minus.push(k);
            }
            if self.alphabet.f(x, i).is_some() {
                plus.push(k);
            }
        }
        let k = if raise {
            *minus.last()?
        } else {
            *plus.first()?
        };
        let c = cells[k];
        let x = self.cell(c);
        let y = if raise {
            self.alphabet.e(x, i)?
        } else {
            self.alphabet.f(x, i)?
        };
        let mut out = self.clone();
        if c.0 {
            out.top[c.1] = y;
        } else {
            out.bottom[c.1] = y;
        }
        Some(out)
    }

    pub fn f(&self, i: usize) -> Option<Tableau> {
        self.act(i, false)
    }

    pub fn e(&self, i: usize) -> Option<Tableau> {
        self.act(i, true)
    }

    /// Weight in the alphabet's own node order.
    pub fn weight(&self) -> Weight {
        let mut w = [0i64; 2];
        for &x in self.top.iter().chain(&self.bottom) {
            let v = self.alphabet.wt(x);
            w[0] += v[0];
            w[1] += v[1];
        }
        Weight::from(w)
    }

    /// ASCII picture with the top row above the bottom one.
    pub fn render(&self) -> String {
        let width = if self.alphabet == Alphabet::C2 { 2 } else { 1 };
        let row = |r: &[u8], pad: usize| {
            let mut s = " ".repeat(pad * (width + 1));
            let cells: Vec<String> = r
                .iter()
                .map(|&x| format!("{:>width$}", self.alphabet.label(x)))
                .collect();
            s.push_str(&cells.join(" "));
            s.trim_end().to_string()
        };
        let (top_pad, bottom_pad) = match self.layout {
            Layout::Right => (self.singles(), 0),
            Layout::Left => (0, 0),
        };
        format!(
            "{}\n{}",
            row(&self.top, top_pad),
            row(&self.bottom, bottom_pad)
        )
    }

    pub fn to_json(&self) -> Value {
        let word = |r: &[u8]| {
            r.iter()
                .map(|&x| self.alphabet.label(x))
                .collect::<Vec<_>>()
        };
        json!({
            "shape": [self.singles(), self.columns()],
            "rows": [word(&self.top), word(&self.bottom)],
        })
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |r: &[u8]| {
            r.iter()
                .map(|&x| self.alphabet.label(x))
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "[{}/{}]", word(&self.top), word(&self.bottom))
    }
}

impl Element for Tableau {
    fn to_json(&self) -> Value {
        Tableau::to_json(self)
    }
}

/// Crystal structure on tableaux of one alphabet. With `swap` the two nodes
/// are exchanged, which turns C2 tableaux into B2 tableaux.
#[derive(Clone, Debug)]
pub struct TableauCrystal {
    cartan: CartanData,
    swap: bool,
}

impl TableauCrystal {
    pub fn new(cartan: CartanData, alphabet: Alphabet, swap: bool) -> Result<Self> {
        let m = alphabet.cartan_matrix();
        let expected: Vec<Vec<i64>> = if swap {
            vec![vec![m[1][1], m[1][0]], vec![m[0][1], m[0][0]]]
        } else {
            m.iter().map(|r| r.to_vec()).collect()
        };
        if cartan.cartan != expected {
            return Err(Error::InvalidCartan(format!(
                "{} does not match {:?} tableaux",
                cartan.name, alphabet
            )));
        }
        Ok(TableauCrystal { cartan, swap })
    }

    fn node(&self, i: usize) -> usize {
        if self.swap {
            1 - i
        } else {
            i
        }
    }

    /// The connected crystal of `seed`.
    pub fn crystal(&self, seed: Tableau) -> Result<CrystalGraph<Tableau>> {
        CrystalGraph::generate(self, seed, crate::crystal::DEFAULT_BUDGET)
    }
}

impl CrystalOps for TableauCrystal {
    type Elem = Tableau;

    fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    fn f(&self, x: &Tableau, i: usize) -> Option<Tableau> {
        x.f(self.node(i))
    }

    fn e(&self, x: &Tableau, i: usize) -> Option<Tableau> {
        x.e(self.node(i))
    }

    fn wt(&self, x: &Tableau) -> Weight {
        let w = x.weight();
        if self.swap {
            Weight(vec![w.0[1], w.0[0]])
        } else {
            w
        }
    }
}

/// Elements of P'-weight killed by every Langlands raising operator
/// e_i^{1+r-r_i}.
pub fn hw_enumerate_l<T: Element>(g: &CrystalGraph<T>) -> Vec<usize> {
    (0..g.len())
        .filter(|&x| {
            g.cartan.in_p_prime(&g.wt[x])
                && (0..g.rank()).all(|i| g.eps[x][i] < g.cartan.factor(i))
        })
        .collect()
}

/// Outcome of checking explicit maps from several dual crystals onto a
/// set of Langlands operators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapCheck {
    pub checked: usize,
    /// Failures of bijectivity or of preserving (wt, eps, phi).
    pub failures: Vec<String>,
    /// Edges x -> f_i x whose images are not joined by f_i^L.
    pub broken_edges: usize,
}

impl MapCheck {
    /// A bijection onto the target preserving weights and string lengths.
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// A domain crystal together with its map into the target.
pub type MapPart<'a> = (
    &'a CrystalGraph<Tableau>,
    &'a dyn Fn(&Tableau) -> Result<Tableau>,
);

/// Checks that the maps of `parts` together form a bijection onto `target`
/// that preserves weights, eps and phi, and counts non-intertwined edges.
pub fn check_map_family(target: &CrystalGraph<Tableau>, parts: &[MapPart<'_>]) -> MapCheck {
    let mut out = MapCheck::default();
    let mut hit = vec![false; target.len()];
    for (dom, map) in parts {
        let mut images = vec![None; dom.len()];
        for (x, t) in dom.elements.iter().enumerate() {
            out.checked += 1;
            let y = match map(t) {
                Ok(img) => match target.index_of(&img) {
                    Some(y) => y,
                    None => {
                        out.failures
                            .push(format!("{t} -> {img} lies outside the target"));
                        continue;
                    }
                },
                Err(e) => {
                    out.failures.push(format!("{t}: {e}"));
                    continue;
                }
            };
            if std::mem::replace(&mut hit[y], true) {
                out.failures
                    .push(format!("{t} -> {} is hit twice", target.elements[y]));
            }
            if dom.wt[x] != target.wt[y]
                || dom.eps[x] != target.eps[y]
                || dom.phi[x] != target.phi[y]
            {
                out.failures.push(format!(
                    "{t} -> {} changes (wt, eps, phi)",
                    target.elements[y]
                ));
            }
            images[x] = Some(y);
        }
        for i in 0..dom.rank() {
            for x in 0..dom.len() {
                let lhs = dom.f[i][x].and_then(|z| images[z]);
                let rhs = images[x].and_then(|y| target.f[i][y]);
                if lhs != rhs {
                    out.broken_edges += 1;
                }
            }
        }
    }
    let missed = hit.iter().filter(|&&h| !h).count();
    if missed > 0 {
        out.failures
            .push(format!("{missed} target elements are not hit"));
    }
    out
}

/// The unique isomorphism from `dom` onto the Langlands component through
/// `source`, as a lookup table.
fn component_iso(
    dom: &CrystalGraph<Tableau>,
    big: &CrystalGraph<Tableau>,
    source: &Tableau,
) -> Result<std::collections::HashMap<Tableau, Tableau>> {
    let k = big
        .index_of(source)
        .ok_or_else(|| Error::MissingElement(source.to_string()))?;
    let comp = big.langlands_component(k)?;
    let iso = crate::crystal::lockstep_map(dom, &comp)?.ok_or_else(|| {
        Error::Tableau(format!("component of {source} is not the expected crystal"))
    })?;
    Ok(iso
        .iter()
        .enumerate()
        .map(|(x, &y)| (dom.elements[x].clone(), comp.elements[y].clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{lockstep_isomorphic, monomial_crystal};

    fn a2_ops() -> TableauCrystal {
        TableauCrystal::new(CartanData::a(2), Alphabet::A2, false).unwrap()
    }

    #[test]
    fn adjoint_a2_has_eight_elements() {
        let g = a2_ops()
            .crystal(Tableau::highest(Alphabet::A2, Layout::Right, 1, 1))
            .unwrap();
        assert_eq!(g.len(), 8);
        assert!(g.elements.iter().all(Tableau::is_valid));
    }

    #[test]
    fn raising_the_highest_weight_is_absent() {
        let t = Tableau::highest(Alphabet::C2, Layout::Right, 4, 2);
        assert!(t.e(0).is_none() && t.e(1).is_none());
        assert!(t.f(0).is_some() && t.f(1).is_some());
    }

    #[test]
    fn shapes_match_monomial_crystals() {
        let c2 = TableauCrystal::new(CartanData::c(2), Alphabet::C2, false).unwrap();
        let b2 = TableauCrystal::new(CartanData::b(2), Alphabet::C2, true).unwrap();
        for r in 0..=3usize {
            for rp in 0..=3usize {
                let lam = Weight::from([r as i64, rp as i64]);
                let g = a2_ops()
                    .crystal(Tableau::highest(Alphabet::A2, Layout::Right, r, rp))
                    .unwrap();
                let m = monomial_crystal(&CartanData::a(2), &lam).unwrap();
                assert!(lockstep_isomorphic(&g, &m).unwrap(), "A2 {r} {rp}");

                let lam = Weight::from([2 * r as i64, rp as i64]);
                let g = c2
                    .crystal(Tableau::highest(Alphabet::C2, Layout::Right, 2 * r, rp))
                    .unwrap();
                let m = monomial_crystal(&CartanData::c(2), &lam).unwrap();
                assert!(lockstep_isomorphic(&g, &m).unwrap(), "C2 {r} {rp}");
                assert!(g.elements.iter().all(Tableau::is_valid));

                // dual layout: r columns, rp singles, B2 weight (r, rp)
                let lam = Weight::from([r as i64, rp as i64]);
                let g = b2
                    .crystal(Tableau::highest(Alphabet::C2, Layout::Left, rp, r))
                    .unwrap();
                let m = monomial_crystal(&CartanData::b(2), &lam).unwrap();
                assert!(lockstep_isomorphic(&g, &m).unwrap(), "B2 {r} {rp}");
                assert!(g.elements.iter().all(Tableau::is_valid));
            }
        }
    }

    #[test]
    fn validity_rules() {
        let t = |top: &[u8], bottom: &[u8]| Tableau {
            alphabet: Alphabet::C2,
            layout: Layout::Right,
            top: top.to_vec(),
            bottom: bottom.to_vec(),
        };
        assert!(t(&[1, 2], &[1, 2, 3]).is_valid());
        assert!(!t(&[1], &[4]).is_valid());
        assert!(!t(&[2, 2], &[3, 3]).is_valid());
        assert!(t(&[2, 2], &[3, 4]).is_valid());
        assert!(!t(&[2], &[2]).is_valid());
    }

    #[test]
    fn rendering_and_json() {
        let t = Tableau::highest(Alphabet::A2, Layout::Right, 2, 2);
        assert_eq!(t.render(), "    1 1\n1 1 2 2");
        assert_eq!(
            t.to_json(),
            json!({"shape": [2, 2], "rows": [["1", "1"], ["1", "1", "2", "2"]]})
        );
        let d = Tableau::highest(Alphabet::C2, Layout::Left, 1, 1)
            .f(1)
            .unwrap();
        assert_eq!(d.render(), " 1  1\n-2");
    }

    #[test]
    fn wrong_cartan_is_rejected() {
        assert!(TableauCrystal::new(CartanData::b(2), Alphabet::C2, false).is_err());
        assert!(TableauCrystal::new(CartanData::b(2), Alphabet::A2, false).is_err());
    }
}
