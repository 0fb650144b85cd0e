use std::collections::{HashMap, VecDeque};
use std::fmt::{Debug, Display, Write as _};
use std::hash::Hash;

use serde_json::{json, Value};

use crate::crystal::{CrystalOps, Monomial};
use crate::error::{Error, Result};
use crate::liealg::{CartanData, Weight};

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Anything that can label a crystal vertex.
pub trait Element: Clone + Eq + Hash + Debug + Display + Send + Sync {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl Element for Monomial {
    fn to_json(&self) -> Value {
        Monomial::to_json(self)
    }
}

/// A finite crystal stored by element index.
#[derive(Clone, Debug)]
pub struct CrystalGraph<T> {
    pub cartan: CartanData,
    pub elements: Vec<T>,
    index: HashMap<T, usize>,
    /// `f[i][x]` is the index of f_i(x).
    pub f: Vec<Vec<Option<usize>>>,
    pub e: Vec<Vec<Option<usize>>>,
    pub wt: Vec<Weight>,
    /// `eps[x][i]`, string length towards the top.
    pub eps: Vec<Vec<i64>>,
    pub phi: Vec<Vec<i64>>,
}

impl<T: Element> CrystalGraph<T> {
    /// Assembles a graph from f-edges; e-edges and string lengths are derived.
    pub fn from_edges(
        cartan: CartanData,
        elements: Vec<T>,
        f: Vec<Vec<Option<usize>>>,
        wt: Vec<Weight>,
    ) -> Self {
        let n = elements.len();
        let mut e = vec![vec![None; n]; f.len()];
        for (i, row) in f.iter().enumerate() {
            for (x, y) in row.iter().enumerate() {
                if let Some(y) = *y {
                    debug_assert!(e[i][y].is_none(), "f_{i} is not injective");
                    e[i][y] = Some(x);
                }
            }
        }
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, x)| (x, k))
            .collect();
        let mut g = CrystalGraph {
            cartan,
            elements,
            index,
            f,
            e,
            wt,
            eps: vec![],
            phi: vec![],
        };
        g.eps = (0..n)
            .map(|x| (0..g.f.len()).map(|i| string_len(&g.e[i], x)).collect())
            .collect();
        g.phi = (0..n)
            .map(|x| (0..g.f.len()).map(|i| string_len(&g.f[i], x)).collect())
            .collect();
        g
    }

    /// Breadth-first closure of `seed` under all f_i and e_i.
    pub fn generate<O: CrystalOps<Elem = T>>(ops: &O, seed: T, budget: usize) -> Result<Self> {
        let rank = ops.cartan().rank();
        let mut elements = vec![seed.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(seed, 0)]);
        let mut f: Vec<Vec<Option<usize>>> = vec![vec![]; rank];
        let mut queue = VecDeque::from([0usize]);
        let mut intern =
            |y: T, elements: &mut Vec<T>, queue: &mut VecDeque<usize>| -> Result<usize> {
                if let Some(&k) = index.get(&y) {
                    return Ok(k);
                }
                if elements.len() >= budget {
                    return Err(Error::Budget(budget));
                }
                let k = elements.len();
                index.insert(y.clone(), k);
                elements.push(y);
                queue.push_back(k);
                Ok(k)
            };
        while let Some(x) = queue.pop_front() {
            let current = elements[x].clone();
            for (i, fi) in f.iter_mut().enumerate() {
                if fi.len() <= x {
                    fi.resize(x + 1, None);
                }
                if let Some(y) = ops.f(&current, i) {
                    fi[x] = Some(intern(y, &mut elements, &mut queue)?);
                }
                if let Some(y) = ops.e(&current, i) {
                    intern(y, &mut elements, &mut queue)?;
                }
            }
        }
        for fi in &mut f {
            fi.resize(elements.len(), None);
        }
        let wt = elements.iter().map(|x| ops.wt(x)).collect();
        Ok(Self::from_edges(ops.cartan().clone(), elements, f, wt))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.f.len()
    }

    pub fn index_of(&self, x: &T) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Elements killed by every e_i.
    pub fn sources(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.e.iter().all(|ei| ei[x].is_none()))
            .collect()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut k = 0;
            while k < members.len() {
                let x = members[k];
                k += 1;
                for edges in self.f.iter().chain(&self.e) {
                    if let Some(y) = edges[x] {
                        if comp[y] == usize::MAX {
                            comp[y] = id;
                            members.push(y);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn component_sizes(&self) -> Vec<usize> {
        self.components().iter().map(Vec::len).collect()
    }

    /// Induced subgraph on `members`, keeping their order.
    pub fn subgraph(&self, members: &[usize]) -> Self {
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let f = self
            .f
            .iter()
            .map(|fi| {
                members
                    .iter()
                    .map(|&x| fi[x].and_then(|y| pos.get(&y).copied()))
                    .collect()
            })
            .collect();
        let elements = members.iter().map(|&x| self.elements[x].clone()).collect();
        let wt = members.iter().map(|&x| self.wt[x].clone()).collect();
        Self::from_edges(self.cartan.clone(), elements, f, wt)
    }

    /// The same elements with only the operators of `nodes`, weights
    /// restricted to those coordinates.
    pub fn restrict_nodes(&self, nodes: &[usize]) -> Self {
        let f = nodes.iter().map(|&i| self.f[i].clone()).collect();
        let wt = self
            .wt
            .iter()
            .map(|w| Weight(nodes.iter().map(|&i| w.0[i]).collect()))
            .collect();
        Self::from_edges(self.cartan.restrict(nodes), self.elements.clone(), f, wt)
    }

    /// f_i^{1+r-r_i} computed along the edges.
    fn f_power(&self, i: usize, x: usize) -> Option<usize> {
        let mut y = x;
        for _ in 0..self.cartan.factor(i) {
            y = self.f[i][y]?;
        }
        Some(y)
    }

    fn e_power(&self, i: usize, x: usize) -> Option<usize> {
        let mut y = x;
        for _ in 0..self.cartan.factor(i) {
            y = self.e[i][y]?;
        }
        Some(y)
    }

    /// Graph on `members` (all of P'-weight) with the Langlands operators,
    /// folded weights and the dual Cartan datum.
    fn folded(&self, members: &[usize]) -> Self {
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let f = (0..self.rank())
            .map(|i| {
                members
                    .iter()
                    .map(|&x| self.f_power(i, x).and_then(|y| pos.get(&y).copied()))
                    .collect()
            })
            .collect();
        let elements = members.iter().map(|&x| self.elements[x].clone()).collect();
        let wt = members
            .iter()
            .map(|&x| self.cartan.pi_weight(&self.wt[x]).expect("member of P'"))
            .collect();
        Self::from_edges(self.cartan.langlands_dual(), elements, f, wt)
    }

    /// Closure of `source` under the Langlands operators.
    pub fn langlands_component(&self, source: usize) -> Result<Self> {
        if !self.cartan.in_p_prime(&self.wt[source]) {
            return Err(Error::NotInPPrime(self.wt[source].clone()));
        }
        let mut members = vec![source];
        let mut seen = vec![false; self.len()];
        seen[source] = true;
        let mut k = 0;
        while k < members.len() {
            let x = members[k];
            k += 1;
            for i in 0..self.rank() {
                for y in [self.f_power(i, x), self.e_power(i, x)]
                    .into_iter()
                    .flatten()
                {
                    if !seen[y] {
                        seen[y] = true;
                        members.push(y);
                    }
                }
            }
        }
        Ok(self.folded(&members))
    }

    /// Elements of P'-weight with the Langlands operators.
    pub fn tilde_subcrystal(&self) -> Self {
        let members: Vec<usize> = (0..self.len())
            .filter(|&x| self.cartan.in_p_prime(&self.wt[x]))
            .collect();
        self.folded(&members)
    }

    /// Redirects `f_i(from) := to` for the given triples, rebuilding e-edges
    /// and string lengths.
    pub fn with_f_edges(&self, changes: &[(usize, usize, usize)]) -> Self {
        let mut f = self.f.clone();
        for &(i, from, to) in changes {
            f[i][from] = Some(to);
        }
        Self::from_edges(
            self.cartan.clone(),
            self.elements.clone(),
            f,
            self.wt.clone(),
        )
    }

    /// Sorted list of all (node, from, to) f-edges.
    pub fn edge_list(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (i, fi) in self.f.iter().enumerate() {
            for (x, y) in fi.iter().enumerate() {
                if let Some(y) = y {
                    out.push((i, x, *y));
                }
            }
        }
        out
    }

    /// Checks the crystal axioms that hold in any semi-normal crystal.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        for i in 0..self.rank() {
            let alpha = self.cartan.simple_root(i);
            for x in 0..self.len() {
                if let Some(y) = self.f[i][x] {
                    if self.e[i][y] != Some(x) {
                        return Err(format!(
                            "e_{} f_{} != id at {}",
                            i + 1,
                            i + 1,
                            self.elements[x]
                        ));
                    }
                    if self.wt[y] != self.wt[x].sub(&alpha) {
                        return Err(format!("weight shift fails at {}", self.elements[x]));
                    }
                    if self.eps[y][i] != self.eps[x][i] + 1 {
                        return Err(format!("eps does not grow at {}", self.elements[x]));
                    }
                }
                if self.phi[x][i] - self.eps[x][i] != self.wt[x].0[i] {
                    return Err(format!("phi - eps != wt at {}", self.elements[x]));
                }
            }
        }
        Ok(())
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{name}\" {{");
        for (k, x) in self.elements.iter().enumerate() {
            let _ = writeln!(s, "  n{k} [label=\"{x}\"];");
        }
        for (i, from, to) in self.edge_list() {
            let _ = writeln!(s, "  n{from} -> n{to} [label=\"{}\"];", i + 1);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Value {
        let mut edges = serde_json::Map::new();
        for (i, fi) in self.f.iter().enumerate() {
            let pairs: Vec<Value> = fi
                .iter()
                .enumerate()
                .filter_map(|(x, y)| y.map(|y| json!([x, y])))
                .collect();
            edges.insert((i + 1).to_string(), Value::Array(pairs));
        }
        json!({
            "cartan": self.cartan,
            "elements": self.elements.iter().map(Element::to_json).collect::<Vec<_>>(),
            "edges": edges,
            "weights": self.wt,
        })
    }
}

fn string_len(edges: &[Option<usize>], mut x: usize) -> i64 {
    let mut k = 0;
    while let Some(y) = edges[x] {
        k += 1;
        x = y;
    }
    k
}

/// Rooted isomorphism test by simultaneous traversal from the unique sources.
pub fn lockstep_isomorphic<A: Element, B: Element>(
    g1: &CrystalGraph<A>,
    g2: &CrystalGraph<B>,
) -> Result<bool> {
    Ok(lockstep_map(g1, g2)?.is_some())
}

/// The isomorphism found by [`lockstep_isomorphic`], as a map from indices of
/// `g1` to indices of `g2`.
pub fn lockstep_map<A: Element, B: Element>(
    g1: &CrystalGraph<A>,
    g2: &CrystalGraph<B>,
) -> Result<Option<Vec<usize>>> {
    let s1 = g1.sources();
    let s2 = g2.sources();
    if s1.len() != 1 {
        return Err(Error::Sources(s1.len()));
    }
    if s2.len() != 1 {
        return Err(Error::Sources(s2.len()));
    }
    if g1.len() != g2.len() || g1.rank() != g2.rank() {
        return Ok(None);
    }
    let mut map = vec![usize::MAX; g1.len()];
    let mut used = vec![false; g2.len()];
    map[s1[0]] = s2[0];
    used[s2[0]] = true;
    let mut queue = VecDeque::from([s1[0]]);
    while let Some(x) = queue.pop_front() {
        let y = map[x];
        if g1.wt[x] != g2.wt[y] {
            return Ok(None);
        }
        for i in 0..g1.rank() {
            for (a, b) in [(g1.f[i][x], g2.f[i][y]), (g1.e[i][x], g2.e[i][y])] {
                match (a, b) {
                    (None, None) => {}
                    (Some(a), Some(b)) => {
                        if map[a] == usize::MAX {
                            if used[b] {
                                return Ok(None);
                            }
                            map[a] = b;
                            used[b] = true;
                            queue.push_back(a);
                        } else if map[a] != b {
                            return Ok(None);
                        }
                    }
                    _ => return Ok(None),
                }
            }
        }
    }
    if map.contains(&usize::MAX) {
        return Ok(None);
    }
    Ok(Some(map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{monomial_crystal, MonomialCrystal};

    fn w<const N: usize>(v: [i64; N]) -> Weight {
        Weight::from(v)
    }

    #[test]
    fn paper_crystal_sizes() {
        let b2 = CartanData::b(2);
        let g2 = CartanData::g2();
        assert_eq!(monomial_crystal(&b2, &w([1, 0])).unwrap().len(), 5);
        assert_eq!(monomial_crystal(&b2, &w([0, 2])).unwrap().len(), 10);
        assert_eq!(monomial_crystal(&b2, &w([2, 0])).unwrap().len(), 14);
        assert_eq!(monomial_crystal(&g2, &w([1, 0])).unwrap().len(), 14);
        assert_eq!(monomial_crystal(&g2, &w([0, 3])).unwrap().len(), 77);
    }

    #[test]
    fn discovery_order_is_breadth_first() {
        let g = monomial_crystal(&CartanData::b(2), &w([1, 0])).unwrap();
        let labels: Vec<String> = g.elements.iter().map(|m| m.to_string()).collect();
        assert_eq!(
            labels,
            [
                "1_0",
                "1_2^{-1}2_1^2",
                "2_12_3^{-1}",
                "1_22_3^{-2}",
                "1_4^{-1}"
            ]
        );
        assert_eq!(g.sources(), vec![0]);
        g.check_axioms().unwrap();
    }

    #[test]
    fn budget_is_enforced() {
        let ops = MonomialCrystal::new(CartanData::g2()).unwrap();
        let seed = ops.highest(&w([0, 3])).unwrap();
        assert_eq!(
            CrystalGraph::generate(&ops, seed, 50).unwrap_err(),
            Error::Budget(50)
        );
    }

    #[test]
    fn langlands_components_of_b2() {
        let b2 = CartanData::b(2);
        let g = monomial_crystal(&b2, &w([1, 0])).unwrap();
        let lc = g.langlands_component(0).unwrap();
        assert_eq!(lc.len(), 4);
        assert_eq!(g.tilde_subcrystal().component_sizes(), vec![4, 1]);
        let dual = monomial_crystal(&b2.langlands_dual(), &w([1, 0])).unwrap();
        assert!(lockstep_isomorphic(&lc, &dual).unwrap());
        assert!(lockstep_isomorphic(&g, &g).unwrap());
        assert!(!lockstep_isomorphic(&g, &dual).unwrap());

        let g = monomial_crystal(&b2, &w([0, 2])).unwrap();
        assert_eq!(g.langlands_component(0).unwrap().len(), 5);
        assert_eq!(g.tilde_subcrystal().component_sizes(), vec![5, 4, 1]);
        let z = monomial_crystal(&b2, &w([0, 0])).unwrap();
        assert_eq!(z.langlands_component(0).unwrap().len(), 1);
        let odd = monomial_crystal(&b2, &w([0, 1])).unwrap();
        assert!(odd.langlands_component(0).is_err());
    }

    #[test]
    fn g2_tilde_crystals() {
        let g2 = CartanData::g2();
        let g = monomial_crystal(&g2, &w([1, 0])).unwrap();
        let t = g.tilde_subcrystal();
        assert_eq!(t.len(), 8);
        let mut sizes = t.component_sizes();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(sizes, vec![7, 1]);
        let g = monomial_crystal(&g2, &w([0, 3])).unwrap();
        assert_eq!(g.langlands_component(0).unwrap().len(), 14);
        let t = g.tilde_subcrystal();
        assert_eq!(t.len(), 29);
        let mut sizes = t.component_sizes();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(sizes, vec![14, 7, 7, 1]);
    }

    #[test]
    fn g2_lone_element_is_the_printed_one() {
        let g = monomial_crystal(&CartanData::g2(), &w([1, 0])).unwrap();
        let t = g.tilde_subcrystal();
        let lone: Vec<String> = t
            .components()
            .iter()
            .filter(|c| c.len() == 1)
            .map(|c| t.elements[c[0]].to_string())
            .collect();
        assert_eq!(lone, ["2_12_5^{-1}"]);
    }

    #[test]
    fn sources_must_be_unique() {
        let g = monomial_crystal(&CartanData::b(2), &w([0, 2]))
            .unwrap()
            .tilde_subcrystal();
        assert_eq!(lockstep_isomorphic(&g, &g).unwrap_err(), Error::Sources(3));
    }

    #[test]
    fn exports() {
        let g = monomial_crystal(&CartanData::b(2), &w([1, 0])).unwrap();
        let dot = g.to_dot("B2");
        assert!(dot.contains("n0 -> n1 [label=\"1\"]"));
        assert!(dot.contains("label=\"1_2^{-1}2_1^2\""));
        let j = g.to_json();
        assert_eq!(j["elements"][1], json!([[1, 2, -1], [2, 1, 2]]));
        assert_eq!(j["edges"]["2"], json!([[1, 2], [2, 3]]));
    }
}
