//! Characters: crystal weight sums, the Freudenthal recursion, the folding
//! map and Langlands branching decompositions.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{OnceLock, RwLock};

use serde_json::{json, Value};

use crate::crystal::{monomial_crystal, CrystalGraph, Element};
use crate::error::{Error, Result};
use crate::liealg::{CartanData, RootDatum, Weight};

/// Finitely supported map from weights to multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharacterPoly(BTreeMap<Weight, i64>);

impl CharacterPoly {
    pub fn zero() -> Self {
        CharacterPoly(BTreeMap::new())
    }

    pub fn add_term(&mut self, w: Weight, m: i64) {
        if m == 0 {
            return;
        }
        let slot = self.0.entry(w.clone()).or_insert(0);
        *slot += m;
        if *slot == 0 {
            self.0.remove(&w);
        }
    }

    pub fn get(&self, w: &Weight) -> i64 {
        self.0.get(w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, i64)> {
        self.0.iter().map(|(w, &m)| (w, m))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of distinct weights.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of multiplicities.
    pub fn dim(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn add_scaled(&mut self, other: &CharacterPoly, k: i64) {
        for (w, m) in other.terms() {
            self.add_term(w.clone(), m * k);
        }
    }

    pub fn is_weyl_invariant(&self, c: &CartanData) -> bool {
        self.terms()
            .all(|(w, m)| (0..c.rank()).all(|i| self.get(&c.simple_reflection(i, w)) == m))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(w, m)| {
                    let mut row: Vec<i64> = w.0.clone();
                    row.push(m);
                    json!(row)
                })
                .collect(),
        )
    }

    /// Sum of `m y^w` in the variables y_i = e^{ω_i}.
    pub fn to_y_notation(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (w, m) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let mono: Vec<String> =
                w.0.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| {
                        if x == 1 {
                            format!("y{}", i + 1)
                        } else {
                            format!("y{}^{}", i + 1, x)
                        }
                    })
                    .collect();
            let body = mono.join(" ");
            parts.push(match (m, body.is_empty()) {
                (_, true) => m.to_string(),
                (1, false) => body,
                (_, false) => format!("{m} {body}"),
            });
        }
        parts.join(" + ")
    }
}

impl FromIterator<(Weight, i64)> for CharacterPoly {
    fn from_iter<I: IntoIterator<Item = (Weight, i64)>>(iter: I) -> Self {
        let mut ch = CharacterPoly::zero();
        for (w, m) in iter {
            ch.add_term(w, m);
        }
        ch
    }
}

pub fn character_from_crystal<T: Element>(g: &CrystalGraph<T>) -> CharacterPoly {
    g.wt.iter().map(|w| (w.clone(), 1)).collect()
}

pub fn weyl_dim(c: &CartanData, lam: &Weight) -> Result<u128> {
    c.check_dim(lam)?;
    if !c.dominant(lam) {
        return Err(Error::NotDominant(lam.clone()));
    }
    Ok(c.positive_roots()?.weyl_dim(lam))
}

/// Dominant weights below `lam`, each with its depth λ - μ in simple-root
/// coordinates, ordered by depth height.
fn dominant_below(c: &CartanData, rd: &RootDatum, lam: &Weight) -> Vec<(Weight, Vec<i64>)> {
    let n = c.rank();
    let mut found: HashMap<Weight, Vec<i64>> = HashMap::from([(lam.clone(), vec![0; n])]);
    let mut queue = VecDeque::from([lam.clone()]);
    while let Some(mu) = queue.pop_front() {
        let depth = found[&mu].clone();
        for (root, coords) in rd.positive_roots.iter().zip(&rd.root_coords) {
            let nu = mu.sub(root);
            if c.dominant(&nu) && !found.contains_key(&nu) {
                let d: Vec<i64> = depth.iter().zip(coords).map(|(a, b)| a + b).collect();
                found.insert(nu.clone(), d);
                queue.push_back(nu);
            }
        }
    }
    let mut out: Vec<(Weight, Vec<i64>)> = found.into_iter().collect();
    out.sort_by(|a, b| (a.1.iter().sum::<i64>(), &a.0).cmp(&(b.1.iter().sum::<i64>(), &b.0)));
    out
}

/// Weight multiplicities by the Freudenthal recursion.
pub fn character_freudenthal(c: &CartanData, lam: &Weight) -> Result<CharacterPoly> {
    c.check_dim(lam)?;
    if !c.dominant(lam) {
        return Err(Error::NotDominant(lam.clone()));
    }
    let rd = c.positive_roots()?;
    let dominants = dominant_below(c, &rd, lam);
    let lam_rho = lam.add(&rd.rho);
    let mut mult: HashMap<Weight, i64> = HashMap::new();
    let depth_of: HashMap<Weight, Vec<i64>> = dominants.iter().cloned().collect();
    for (mu, depth) in &dominants {
        if mu == lam {
            mult.insert(mu.clone(), 1);
            continue;
        }
        // (λ+ρ,λ+ρ) - (μ+ρ,μ+ρ) with μ = λ - β
        let denom = 2 * rd.pair(&lam_rho, depth) - rd.form(depth, depth);
        let mut num = 0;
        for (root, coords) in rd.positive_roots.iter().zip(&rd.root_coords) {
            let mut k = 1;
            loop {
                let d: Vec<i64> = depth.iter().zip(coords).map(|(a, b)| a - k * b).collect();
                if d.iter().any(|&x| x < 0) {
                    break;
                }
                let nu = mu.add(&root.scale(k));
                let rep = c.to_dominant(&nu);
                if depth_of.contains_key(&rep) {
                    let m = mult.get(&rep).copied().unwrap_or(0);
                    num += m * rd.pair(&nu, coords);
                }
                k += 1;
            }
        }
        let num = 2 * num;
        debug_assert!(denom > 0 && num % denom == 0);
        mult.insert(mu.clone(), num / denom);
    }
    let mut ch = CharacterPoly::zero();
    for (mu, _) in &dominants {
        let m = mult[mu];
        if m != 0 {
            for w in c.orbit(mu) {
                ch.add_term(w, m);
            }
        }
    }
    Ok(ch)
}

/// Keeps the P'-weights and relabels them on the dual lattice.
pub fn pi_character(c: &CartanData, ch: &CharacterPoly) -> CharacterPoly {
    ch.terms()
        .filter_map(|(w, m)| c.pi_weight(w).map(|v| (v, m)))
        .collect()
}

pub fn subcharacter_leq(a: &CharacterPoly, b: &CharacterPoly) -> bool {
    a.terms().all(|(w, m)| m <= b.get(w)) && b.terms().all(|(w, m)| a.0.contains_key(w) || m >= 0)
}

type CacheKey = (Vec<Vec<i64>>, Weight);

fn cache() -> &'static RwLock<HashMap<CacheKey, CharacterPoly>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, CharacterPoly>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Character of the irreducible of highest weight `lam`, computed from the
/// monomial crystal and memoized.
pub fn irreducible_character(c: &CartanData, lam: &Weight) -> Result<CharacterPoly> {
    let key = (c.cartan.clone(), lam.clone());
    if let Some(ch) = cache().read().expect("cache lock").get(&key) {
        return Ok(ch.clone());
    }
    let ch = character_from_crystal(&monomial_crystal(c, lam)?);
    cache().write().expect("cache lock").insert(key, ch.clone());
    Ok(ch)
}

/// Integer multiple of the height functional: positive on every simple root.
fn height_functional(c: &CartanData) -> Vec<i64> {
    let n = c.rank();
    // solve x^T C = (1,...,1) exactly via rational elimination on i128
    let mut a: Vec<Vec<(i128, i128)>> = (0..n)
        .map(|j| {
            let mut row: Vec<(i128, i128)> = (0..n).map(|i| (c.cartan[i][j] as i128, 1)).collect();
            row.push((1, 1));
            row
        })
        .collect();
    let norm = |(p, q): (i128, i128)| {
        let g = num_integer::gcd(p, q).max(1);
        let s = if q < 0 { -1 } else { 1 };
        (s * p / g, s * q / g)
    };
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| a[r][col].0 != 0)
            .expect("nonsingular Cartan matrix");
        a.swap(col, piv);
        let (pp, pq) = a[col][col];
        for k in 0..=n {
            let (x, y) = a[col][k];
            a[col][k] = norm((x * pq, y * pp));
        }
        for r in 0..n {
            if r != col && a[r][col].0 != 0 {
                let (fp, fq) = a[r][col];
                for k in 0..=n {
                    let (x, y) = a[r][k];
                    let (u, v) = a[col][k];
                    a[r][k] = norm((x * v * fq - u * fp * y, y * v * fq));
                }
            }
        }
    }
    let den = a.iter().fold(1i128, |l, row| num_integer::lcm(l, row[n].1));
    a.iter()
        .map(|row| (row[n].0 * (den / row[n].1)) as i64)
        .collect()
}

/// Order used to pick the next highest weight in a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    ReverseLex,
    Lex,
}

pub fn branching_decompose(cdual: &CartanData, ch: &CharacterPoly) -> Result<Vec<(Weight, i64)>> {
    branching_decompose_with(cdual, ch, TieBreak::ReverseLex)
}

/// Peels off irreducible characters from the top until nothing remains.
pub fn branching_decompose_with(
    cdual: &CartanData,
    ch: &CharacterPoly,
    order: TieBreak,
) -> Result<Vec<(Weight, i64)>> {
    let h = height_functional(cdual);
    let height = |w: &Weight| -> i64 { w.0.iter().zip(&h).map(|(a, b)| a * b).sum() };
    let mut rest = ch.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let top = rest
            .terms()
            .max_by(|(a, _), (b, _)| {
                let key = |w: &Weight| {
                    let mut v = w.0.clone();
                    if order == TieBreak::ReverseLex {
                        v.reverse();
                    }
                    (height(w), v)
                };
                key(a).cmp(&key(b))
            })
            .map(|(w, m)| (w.clone(), m))
            .expect("nonempty");
        let (mu, m) = top;
        if !cdual.dominant(&mu) {
            return Err(Error::NonInvariant(mu));
        }
        rest.add_scaled(&irreducible_character(cdual, &mu)?, -m);
        out.push((mu, m));
    }
    Ok(out)
}

/// Π(χ(λ)) decomposed over the dual algebra.
pub fn langlands_branching(c: &CartanData, lam: &Weight) -> Result<Vec<(Weight, i64)>> {
    let ch = irreducible_character(c, lam)?;
    branching_decompose(&c.langlands_dual(), &pi_character(c, &ch))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::monomial_crystal;

    fn w<const N: usize>(v: [i64; N]) -> Weight {
        Weight::from(v)
    }

    fn rule(pairs: &[([i64; 2], i64)]) -> Vec<(Weight, i64)> {
        pairs.iter().map(|(v, m)| (w(*v), *m)).collect()
    }

    #[test]
    fn freudenthal_small_cases() {
        let b2 = CartanData::b(2);
        assert_eq!(
            character_freudenthal(&b2, &w([0, 0])).unwrap(),
            [(w([0, 0]), 1)].into_iter().collect()
        );
        assert_eq!(character_freudenthal(&b2, &w([2, 0])).unwrap().dim(), 14);
        let g2 = CartanData::g2();
        assert_eq!(character_freudenthal(&g2, &w([1, 0])).unwrap().dim(), 14);
        assert_eq!(character_freudenthal(&g2, &w([0, 3])).unwrap().dim(), 77);
        let adj = character_freudenthal(&CartanData::a(2), &w([1, 1])).unwrap();
        assert_eq!(adj.get(&w([0, 0])), 2);
        assert!(adj.is_weyl_invariant(&CartanData::a(2)));
    }

    #[test]
    fn crystal_matches_freudenthal() {
        for (c, lams) in [
            (CartanData::b(2), vec![w([1, 2]), w([3, 1]), w([0, 5])]),
            (CartanData::g2(), vec![w([1, 1]), w([2, 0]), w([0, 4])]),
            (CartanData::c(3), vec![Weight::from([1, 1, 1])]),
            (
                CartanData::f4(),
                vec![Weight::from([0, 0, 0, 1]), Weight::from([1, 0, 0, 0])],
            ),
        ] {
            for lam in lams {
                let ch = character_from_crystal(&monomial_crystal(&c, &lam).unwrap());
                assert_eq!(
                    ch,
                    character_freudenthal(&c, &lam).unwrap(),
                    "{} {lam}",
                    c.name
                );
                assert_eq!(ch.dim() as u128, weyl_dim(&c, &lam).unwrap());
            }
        }
    }

    #[test]
    fn folded_vector_character() {
        let b2 = CartanData::b(2);
        let ch = pi_character(&b2, &irreducible_character(&b2, &w([1, 0])).unwrap());
        let expected: CharacterPoly = [w([1, 0]), w([-1, 1]), w([1, -1]), w([-1, 0]), w([0, 0])]
            .into_iter()
            .map(|x| (x, 1))
            .collect();
        assert_eq!(ch, expected);
        let a3 = CartanData::a(3);
        let lam = Weight::from([1, 0, 1]);
        let full = irreducible_character(&a3, &lam).unwrap();
        assert_eq!(pi_character(&a3, &full), full);
    }

    #[test]
    fn subcharacters() {
        let b2 = CartanData::b(2);
        let ch = irreducible_character(&b2, &w([1, 0])).unwrap();
        assert!(subcharacter_leq(&ch, &ch));
        let small = irreducible_character(&b2.langlands_dual(), &w([1, 0])).unwrap();
        assert!(subcharacter_leq(&small, &pi_character(&b2, &ch)));
        assert!(!subcharacter_leq(&pi_character(&b2, &ch), &small));
        let g2 = CartanData::g2();
        let big = pi_character(&g2, &irreducible_character(&g2, &w([0, 3])).unwrap());
        assert!(subcharacter_leq(
            &irreducible_character(&g2.langlands_dual(), &w([0, 1])).unwrap(),
            &big
        ));
    }

    #[test]
    fn printed_rank_two_rules() {
        let b2 = CartanData::b(2);
        assert_eq!(
            langlands_branching(&b2, &w([1, 0])).unwrap(),
            rule(&[([1, 0], 1), ([0, 0], 1)])
        );
        assert_eq!(
            langlands_branching(&b2, &w([0, 2])).unwrap(),
            rule(&[([0, 1], 1), ([1, 0], 1), ([0, 0], 1)])
        );
        assert_eq!(
            langlands_branching(&b2, &w([2, 0])).unwrap(),
            rule(&[([2, 0], 1), ([1, 0], 1)])
        );
        assert_eq!(
            langlands_branching(&b2, &w([1, 2])).unwrap(),
            rule(&[([1, 1], 1), ([2, 0], 1), ([0, 1], 1), ([1, 0], 1)])
        );
        let g2 = CartanData::g2();
        assert_eq!(
            langlands_branching(&g2, &w([1, 0])).unwrap(),
            rule(&[([1, 0], 1), ([0, 0], 1)])
        );
        assert_eq!(
            langlands_branching(&g2, &w([0, 3])).unwrap(),
            rule(&[([0, 1], 1), ([1, 0], 2), ([0, 0], 1)])
        );
    }

    #[test]
    fn tie_break_does_not_matter() {
        let c3 = CartanData::c(3);
        let lam = Weight::from([2, 2, 1]);
        let ch = pi_character(&c3, &irreducible_character(&c3, &lam).unwrap());
        let mut a =
            branching_decompose_with(&c3.langlands_dual(), &ch, TieBreak::ReverseLex).unwrap();
        let mut b = branching_decompose_with(&c3.langlands_dual(), &ch, TieBreak::Lex).unwrap();
        assert_eq!(a[0], (Weight::from([1, 1, 1]), 1));
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn non_invariant_input_is_rejected() {
        let ch: CharacterPoly = [(w([-1, 0]), 1)].into_iter().collect();
        assert_eq!(
            branching_decompose(&CartanData::a(2), &ch),
            Err(Error::NonInvariant(w([-1, 0])))
        );
    }

    #[test]
    fn notation() {
        let b2 = CartanData::b(2);
        let ch = pi_character(&b2, &irreducible_character(&b2, &w([1, 0])).unwrap());
        assert_eq!(ch.to_y_notation(), "y1 + y1 y2^-1 + 1 + y1^-1 y2 + y1^-1");
        assert_eq!(CharacterPoly::zero().to_y_notation(), "0");
    }
}
