use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::crystal::CrystalOps;
use crate::error::{Error, Result};
use crate::liealg::{CartanData, Weight};

/// Laurent monomial in the variables Y_{i,l}; nodes are 0-based internally
/// and printed 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(BTreeMap<(usize, i64), i64>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(node: usize, level: i64, exp: i64) -> Self {
        let mut m = Monomial::one();
        m.mul_var(node, level, exp);
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, node: usize, level: i64) -> i64 {
        self.0.get(&(node, level)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, i64, i64)> + '_ {
        self.0.iter().map(|(&(i, l), &u)| (i, l, u))
    }

    pub fn mul_var(&mut self, node: usize, level: i64, exp: i64) {
        if exp == 0 {
            return;
        }
        let slot = self.0.entry((node, level)).or_insert(0);
        *slot += exp;
        if *slot == 0 {
            self.0.remove(&(node, level));
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.mul_pow(other, 1)
    }

    /// self * other^k
    pub fn mul_pow(&self, other: &Monomial, k: i64) -> Monomial {
        let mut out = self.clone();
        for (i, l, u) in other.terms() {
            out.mul_var(i, l, u * k);
        }
        out
    }

    pub fn weight(&self, rank: usize) -> Weight {
        let mut w = Weight::zero(rank);
        for (i, _, u) in self.terms() {
            w.0[i] += u;
        }
        w
    }

    /// Levels and exponents of node i, increasing in level.
    fn row(&self, i: usize) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.0
            .range((i, i64::MIN)..=(i, i64::MAX))
            .map(|(&(_, l), &u)| (l, u))
    }

    pub fn respects_parity(&self, parity: &[i64]) -> bool {
        self.terms()
            .all(|(i, l, _)| (l - parity[i]).rem_euclid(2) == 0)
    }

    pub fn dominant(&self) -> bool {
        self.terms().all(|(_, _, u)| u > 0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms()
                .map(|(i, l, u)| serde_json::json!([i as i64 + 1, l, u]))
                .collect(),
        )
    }
}

fn braced(x: i64) -> String {
    if (0..10).contains(&x) {
        x.to_string()
    } else {
        format!("{{{x}}}")
    }
}

/// Compact notation: `1_2^{-1}2_1^2` stands for Y_{1,2}^{-1} Y_{2,1}^2.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, l, u) in self.terms() {
            write!(f, "{}_{}", i + 1, braced(l))?;
            if u != 1 {
                write!(f, "^{}", braced(u))?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("bad monomial {s:?}"));
        let chars: Vec<char> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*')
            .collect();
        let mut m = Monomial::one();
        if chars == ['1'] || chars.is_empty() {
            return Ok(m);
        }
        let mut pos = 0;
        let number = |pos: &mut usize, greedy: bool| -> Result<i64> {
            if chars.get(*pos) == Some(&'{') {
                let end = chars[*pos..]
                    .iter()
                    .position(|&c| c == '}')
                    .ok_or_else(err)?
                    + *pos;
                let text: String = chars[*pos + 1..end].iter().collect();
                *pos = end + 1;
                return text.parse().map_err(|_| err());
            }
            let start = *pos;
            if chars.get(*pos) == Some(&'-') {
                *pos += 1;
            }
            let digits = *pos;
            while *pos < chars.len() && chars[*pos].is_ascii_digit() && (greedy || *pos == digits) {
                *pos += 1;
            }
            if *pos == digits {
                return Err(err());
            }
            chars[start..*pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| err())
        };
        while pos < chars.len() {
            let node = number(&mut pos, true)?;
            if node < 1 || chars.get(pos) != Some(&'_') {
                return Err(err());
            }
            pos += 1;
            let level = number(&mut pos, false)?;
            let mut exp = 1;
            if chars.get(pos) == Some(&'^') {
                pos += 1;
                exp = number(&mut pos, false)?;
            }
            m.mul_var(node as usize - 1, level, exp);
        }
        Ok(m)
    }
}

/// String data of a monomial at one node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Strings {
    pub phi: i64,
    pub eps: i64,
    /// Largest level realizing eps; present iff eps > 0.
    pub p: Option<i64>,
    /// Smallest level realizing phi; present iff phi > 0.
    pub q: Option<i64>,
}

pub fn phi_eps_pq(m: &Monomial, i: usize) -> Strings {
    let mut phi = 0;
    let mut q = None;
    let mut acc = 0;
    for (l, u) in m.row(i) {
        acc += u;
        if acc > phi {
            phi = acc;
            q = Some(l);
        }
    }
    let mut eps = 0;
    let mut p = None;
    let mut acc = 0;
    for (l, u) in m.row(i).rev() {
        acc -= u;
        if acc > eps {
            eps = acc;
            p = Some(l);
        }
    }
    Strings { phi, eps, p, q }
}

/// A_{i,l} without any parity check.
fn a_factor(c: &CartanData, i: usize, l: i64) -> Monomial {
    let mut m = Monomial::var(i, l - 1, 1);
    m.mul_var(i, l + 1, 1);
    for j in c.neighbours(i) {
        m.mul_var(j, l, c.cartan[j][i]);
    }
    m
}

pub fn a_monomial(c: &CartanData, parity: &[i64], i: usize, l: i64) -> Result<Monomial> {
    if (l - parity[i] - 1).rem_euclid(2) != 0 {
        return Err(Error::Parity { node: i, level: l });
    }
    Ok(a_factor(c, i, l))
}

pub fn f_op(c: &CartanData, m: &Monomial, i: usize) -> Option<Monomial> {
    let q = phi_eps_pq(m, i).q?;
    Some(m.mul_pow(&a_factor(c, i, q + 1), -1))
}

pub fn e_op(c: &CartanData, m: &Monomial, i: usize) -> Option<Monomial> {
    let p = phi_eps_pq(m, i).p?;
    Some(m.mul(&a_factor(c, i, p - 1)))
}

/// s_1 = 0 and s_j is the parity of the distance from node 1 (or from the
/// smallest node of its connected component).
pub fn default_parity(c: &CartanData) -> Result<Vec<i64>> {
    let n = c.rank();
    let mut s: Vec<Option<i64>> = vec![None; n];
    for root in 0..n {
        if s[root].is_some() {
            continue;
        }
        s[root] = Some(0);
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let si = s[i].expect("visited");
            for j in c.neighbours(i) {
                match s[j] {
                    None => {
                        s[j] = Some(1 - si);
                        stack.push(j);
                    }
                    Some(sj) if sj == si => {
                        return Err(Error::InvalidCartan("Dynkin graph is not bipartite".into()))
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(s.into_iter().map(|x| x.expect("all visited")).collect())
}

/// The dominant monomial ∏ Y_{i,s_i}^{n_i}.
pub fn highest_monomial(parity: &[i64], lam: &Weight) -> Result<Monomial> {
    if lam.0.iter().any(|&x| x < 0) {
        return Err(Error::NotDominant(lam.clone()));
    }
    let mut m = Monomial::one();
    for (i, &n) in lam.0.iter().enumerate() {
        m.mul_var(i, parity[i], n);
    }
    Ok(m)
}

/// Exponentwise division by the folding factors.
pub fn pi_monomial(m: &Monomial, c: &CartanData) -> Result<Monomial> {
    let mut out = Monomial::one();
    for (i, l, u) in m.terms() {
        let factor = c.factor(i);
        if u % factor != 0 {
            return Err(Error::Divisibility {
                node: i,
                exp: u,
                factor,
            });
        }
        out.mul_var(i, l, u / factor);
    }
    Ok(out)
}

/// The monomial crystal for a Cartan datum and a parity assignment.
#[derive(Clone, Debug)]
pub struct MonomialCrystal {
    pub cartan: CartanData,
    pub parity: Vec<i64>,
}

impl MonomialCrystal {
    pub fn new(cartan: CartanData) -> Result<Self> {
        let parity = default_parity(&cartan)?;
        Ok(MonomialCrystal { cartan, parity })
    }

    pub fn with_parity(cartan: CartanData, parity: Vec<i64>) -> Self {
        MonomialCrystal { cartan, parity }
    }

    pub fn highest(&self, lam: &Weight) -> Result<Monomial> {
        self.cartan.check_dim(lam)?;
        highest_monomial(&self.parity, lam)
    }

    /// f_i^{1+r-r_i}.
    pub fn f_l(&self, m: &Monomial, i: usize) -> Option<Monomial> {
        let mut x = m.clone();
        for _ in 0..self.cartan.factor(i) {
            x = f_op(&self.cartan, &x, i)?;
        }
        Some(x)
    }

    /// e_i^{1+r-r_i}.
    pub fn e_l(&self, m: &Monomial, i: usize) -> Option<Monomial> {
        let mut x = m.clone();
        for _ in 0..self.cartan.factor(i) {
            x = e_op(&self.cartan, &x, i)?;
        }
        Some(x)
    }
}

impl CrystalOps for MonomialCrystal {
    type Elem = Monomial;

    fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    fn f(&self, x: &Monomial, i: usize) -> Option<Monomial> {
        f_op(&self.cartan, x, i)
    }

    fn e(&self, x: &Monomial, i: usize) -> Option<Monomial> {
        e_op(&self.cartan, x, i)
    }

    fn wt(&self, x: &Monomial) -> Weight {
        x.weight(self.cartan.rank())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn notation_round_trip() {
        for s in [
            "1",
            "1_0",
            "1_2^{-1}2_1^2",
            "1_{10}^{12}2_{-3}",
            "2_1^32_3^{-1}",
        ] {
            assert_eq!(m(s).to_string(), s);
        }
        assert_eq!(m("1_0 2_1^2"), m("1_02_1^2"));
        assert_eq!(m("2_1^32_3^{-1}").exp(1, 1), 3);
        assert!("0_1".parse::<Monomial>().is_err());
        assert!("1_".parse::<Monomial>().is_err());
    }

    #[test]
    fn parity_defaults() {
        assert_eq!(default_parity(&CartanData::a(2)).unwrap(), vec![0, 1]);
        assert_eq!(default_parity(&CartanData::b(2)).unwrap(), vec![0, 1]);
        assert_eq!(default_parity(&CartanData::a(1)).unwrap(), vec![0]);
        assert_eq!(
            default_parity(&CartanData::e(6)).unwrap(),
            vec![0, 1, 1, 0, 1, 0]
        );
    }

    #[test]
    fn a_factors() {
        let b2 = CartanData::b(2);
        assert_eq!(a_monomial(&b2, &[0, 1], 0, 1).unwrap(), m("1_01_22_1^{-2}"));
        assert!(a_monomial(&b2, &[0, 1], 0, 2).is_err());
        assert_eq!(
            a_monomial(&CartanData::a(1), &[0], 0, 1).unwrap(),
            m("1_01_2")
        );
    }

    #[test]
    fn string_scans() {
        let s = phi_eps_pq(&m("1_0"), 0);
        assert_eq!((s.phi, s.eps, s.q, s.p), (1, 0, Some(0), None));
        let one = Monomial::one();
        for i in 0..2 {
            assert_eq!(
                phi_eps_pq(&one, i),
                Strings {
                    phi: 0,
                    eps: 0,
                    p: None,
                    q: None
                }
            );
        }
        let x = m("1_2^{-1}2_1^2");
        assert_eq!(phi_eps_pq(&x, 0).eps, 1);
        assert_eq!(phi_eps_pq(&x, 1).phi, 2);
    }

    #[test]
    fn b2_vector_chain() {
        let b2 = CartanData::b(2);
        let chain = [
            "1_0",
            "1_2^{-1}2_1^2",
            "2_12_3^{-1}",
            "1_22_3^{-2}",
            "1_4^{-1}",
        ];
        let nodes = [0, 1, 1, 0];
        for k in 0..4 {
            let next = f_op(&b2, &m(chain[k]), nodes[k]).unwrap();
            assert_eq!(next, m(chain[k + 1]));
            assert_eq!(e_op(&b2, &next, nodes[k]).unwrap(), m(chain[k]));
            for i in 0..2 {
                if i != nodes[k] {
                    assert_eq!(f_op(&b2, &m(chain[k]), i), None);
                }
            }
        }
        assert_eq!(f_op(&b2, &m("1_4^{-1}"), 0), None);
        assert_eq!(f_op(&b2, &m("1_4^{-1}"), 1), None);
        for i in 0..2 {
            assert_eq!(e_op(&b2, &m("1_0"), i), None);
        }
    }

    #[test]
    fn langlands_operators() {
        let mc = MonomialCrystal::new(CartanData::b(2)).unwrap();
        assert_eq!(mc.f_l(&m("1_0"), 0), f_op(&mc.cartan, &m("1_0"), 0));
        assert_eq!(mc.f_l(&m("1_2^{-1}2_1^2"), 1).unwrap(), m("1_22_3^{-2}"));
        assert_eq!(mc.e_l(&m("1_22_3^{-2}"), 1).unwrap(), m("1_2^{-1}2_1^2"));
        // e^2 multiplies by the square of a single A-factor
        let x = m("1_22_3^{-2}");
        let p = phi_eps_pq(&x, 1).p.unwrap();
        assert_eq!(
            mc.e_l(&x, 1).unwrap(),
            x.mul_pow(&a_factor(&mc.cartan, 1, p - 1), 2)
        );
    }

    #[test]
    fn folding_monomials() {
        let b2 = CartanData::b(2);
        assert_eq!(pi_monomial(&m("2_0^2"), &b2).unwrap(), m("2_0"));
        assert_eq!(pi_monomial(&Monomial::one(), &b2).unwrap(), Monomial::one());
        assert!(pi_monomial(&m("2_0"), &b2).is_err());
    }

    #[test]
    fn highest_seed() {
        let s = [0, 1];
        assert_eq!(
            highest_monomial(&s, &Weight::from([1, 0])).unwrap(),
            m("1_0")
        );
        assert_eq!(
            highest_monomial(&s, &Weight::from([0, 0])).unwrap(),
            Monomial::one()
        );
        assert_eq!(
            highest_monomial(&s, &Weight::from([1, 2])).unwrap(),
            m("1_02_1^2")
        );
        assert!(highest_monomial(&s, &Weight::from([-1, 0])).is_err());
    }
}
