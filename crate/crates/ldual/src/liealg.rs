//! Cartan data, weights, roots, Weyl reflections and the folding map onto
//! the dual weight lattice.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer weight in fundamental-weight coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn fundamental(n: usize, i: usize) -> Self {
        let mut w = Weight::zero(n);
        w.0[i] = 1;
        w
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl<const N: usize> From<[i64; N]> for Weight {
    fn from(v: [i64; N]) -> Self {
        Weight(v.to_vec())
    }
}

/// Dynkin datum. `cartan[i][j]` is the pairing of the i-th simple coroot with
/// the j-th simple root, so the j-th simple root has ω-coordinates given by
/// column j. Labels satisfy `labels[i] * cartan[i][j] == labels[j] * cartan[j][i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanData {
    pub name: String,
    pub cartan: Vec<Vec<i64>>,
    pub labels: Vec<i64>,
    #[serde(default)]
    pub lacing: i64,
}

impl CartanData {
    /// Builds and validates a datum; the lacing number defaults to the
    /// largest label.
    pub fn new(name: impl Into<String>, cartan: Vec<Vec<i64>>, labels: Vec<i64>) -> Result<Self> {
        let lacing = labels.iter().copied().max().unwrap_or(1);
        Self::with_lacing(name, cartan, labels, lacing)
    }

    pub fn with_lacing(
        name: impl Into<String>,
        cartan: Vec<Vec<i64>>,
        labels: Vec<i64>,
        lacing: i64,
    ) -> Result<Self> {
        let c = CartanData {
            name: name.into(),
            cartan,
            labels,
            lacing,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let n = self.cartan.len();
        let bad = |msg: String| Err(Error::InvalidCartan(msg));
        if n == 0 {
            return bad("empty matrix".into());
        }
        if self.labels.len() != n {
            return bad(format!("{} labels for rank {n}", self.labels.len()));
        }
        for (i, row) in self.cartan.iter().enumerate() {
            if row.len() != n {
                return bad(format!("row {} has length {}", i + 1, row.len()));
            }
            if row[i] != 2 {
                return bad(format!("diagonal entry {} is {}", i + 1, row[i]));
            }
            for (j, &x) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if x > 0 {
                    return bad(format!("positive entry at ({},{})", i + 1, j + 1));
                }
                if self.labels[i] * x != self.labels[j] * self.cartan[j][i] {
                    return bad(format!("labels do not symmetrize at ({},{})", i + 1, j + 1));
                }
            }
        }
        if self.labels.iter().any(|&r| r <= 0) {
            return bad("labels must be positive".into());
        }
        if self.labels.iter().any(|&r| r > self.lacing) {
            return bad("lacing number below a label".into());
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    /// Parses names like `A2`, `B3`, `G2`, `E8`, and `A2x2` for a
    /// simply-laced type placed in a lacing-2 context.
    pub fn from_name(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((base, r)) = s.split_once('x') {
            let r: i64 = r
                .parse()
                .map_err(|_| Error::Parse(format!("bad lacing in {s}")))?;
            return Self::from_name(base)?.in_lacing(r);
        }
        let mut chars = s.chars();
        let series = chars
            .next()
            .ok_or_else(|| Error::Parse("empty type".into()))?;
        let n: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rank in {s}")))?;
        match (series.to_ascii_uppercase(), n) {
            ('A', n) if n >= 1 => Ok(Self::a(n)),
            ('B', n) if n >= 2 => Ok(Self::b(n)),
            ('C', n) if n >= 2 => Ok(Self::c(n)),
            ('D', n) if n >= 4 => Ok(Self::d(n)),
            ('E', n) if (6..=8).contains(&n) => Ok(Self::e(n)),
            ('F', 4) => Ok(Self::f4()),
            ('G', 2) => Ok(Self::g2()),
            _ => Err(Error::Parse(format!("unknown type {s}"))),
        }
    }

    fn chain(n: usize) -> Vec<Vec<i64>> {
        let mut c = vec![vec![0; n]; n];
        for i in 0..n {
            c[i][i] = 2;
            if i + 1 < n {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
        }
        c
    }

    pub fn a(n: usize) -> Self {
        Self::new(format!("A{n}"), Self::chain(n), vec![1; n]).expect("valid A")
    }

    /// Node n is short.
    pub fn b(n: usize) -> Self {
        let mut c = Self::chain(n);
        c[n - 1][n - 2] = -2;
        let mut labels = vec![2; n];
        labels[n - 1] = 1;
        Self::new(format!("B{n}"), c, labels).expect("valid B")
    }

    /// Node n is long.
    pub fn c(n: usize) -> Self {
        let mut c = Self::chain(n);
        c[n - 2][n - 1] = -2;
        let mut labels = vec![1; n];
        labels[n - 1] = 2;
        Self::new(format!("C{n}"), c, labels).expect("valid C")
    }

    pub fn d(n: usize) -> Self {
        let mut c = Self::chain(n);
        c[n - 2][n - 1] = 0;
        c[n - 1][n - 2] = 0;
        c[n - 3][n - 1] = -1;
        c[n - 1][n - 3] = -1;
        Self::new(format!("D{n}"), c, vec![1; n]).expect("valid D")
    }

    /// Bourbaki numbering: node 2 hangs off node 4.
    pub fn e(n: usize) -> Self {
        let mut c = vec![vec![0; n]; n];
        let mut edges = vec![(0, 2), (1, 3), (2, 3)];
        for i in 3..n - 1 {
            edges.push((i, i + 1));
        }
        for i in 0..n {
            c[i][i] = 2;
        }
        for (i, j) in edges {
            c[i][j] = -1;
            c[j][i] = -1;
        }
        Self::new(format!("E{n}"), c, vec![1; n]).expect("valid E")
    }

    /// Nodes 1, 2 long; 3, 4 short.
    pub fn f4() -> Self {
        let mut c = Self::chain(4);
        c[2][1] = -2;
        Self::new("F4", c, vec![2, 2, 1, 1]).expect("valid F4")
    }

    /// Node 1 long, node 2 short, so that P' = Zω1 + 3Zω2.
    pub fn g2() -> Self {
        Self::new("G2", vec![vec![2, -1], vec![-3, 2]], vec![3, 1]).expect("valid G2")
    }

    /// The same matrix and labels viewed inside a context of lacing number
    /// `r`; for a simply-laced type this folds every node by `r`.
    pub fn in_lacing(&self, r: i64) -> Result<Self> {
        Self::with_lacing(
            format!("{}x{r}", self.name),
            self.cartan.clone(),
            self.labels.clone(),
            r,
        )
    }

    /// Folding factor 1 + r - r_i of node i.
    pub fn factor(&self, i: usize) -> i64 {
        1 + self.lacing - self.labels[i]
    }

    /// Transposed matrix with labels 1 + r - r_i.
    pub fn langlands_dual(&self) -> Self {
        let n = self.rank();
        let cartan = (0..n)
            .map(|i| (0..n).map(|j| self.cartan[j][i]).collect())
            .collect();
        let labels = (0..n).map(|i| self.factor(i)).collect();
        let name = dual_name(&self.name);
        Self::with_lacing(name, cartan, labels, self.lacing)
            .expect("dual of a valid datum is valid")
    }

    /// The j-th simple root in ω-coordinates.
    pub fn simple_root(&self, j: usize) -> Weight {
        Weight(self.cartan.iter().map(|row| row[j]).collect())
    }

    /// Converts a vector in simple-root coordinates to ω-coordinates.
    pub fn root_to_weight(&self, a: &[i64]) -> Weight {
        Weight(
            self.cartan
                .iter()
                .map(|row| row.iter().zip(a).map(|(c, x)| c * x).sum())
                .collect(),
        )
    }

    pub fn check_dim(&self, w: &Weight) -> Result<()> {
        if w.len() != self.rank() {
            return Err(Error::Dimension {
                expected: self.rank(),
                got: w.len(),
            });
        }
        Ok(())
    }

    pub fn in_p_prime(&self, w: &Weight) -> bool {
        w.0.iter()
            .enumerate()
            .all(|(i, &x)| x % self.factor(i) == 0)
    }

    /// Folding map onto the dual lattice; `None` outside P'.
    pub fn pi_weight(&self, w: &Weight) -> Option<Weight> {
        if !self.in_p_prime(w) {
            return None;
        }
        Some(Weight(
            w.0.iter()
                .enumerate()
                .map(|(i, &x)| x / self.factor(i))
                .collect(),
        ))
    }

    /// Right inverse of `pi_weight`.
    pub fn pi_preimage(&self, w: &Weight) -> Weight {
        Weight(
            w.0.iter()
                .enumerate()
                .map(|(i, &x)| x * self.factor(i))
                .collect(),
        )
    }

    pub fn simple_reflection(&self, i: usize, w: &Weight) -> Weight {
        let n = w.0[i];
        Weight(
            w.0.iter()
                .enumerate()
                .map(|(k, &x)| x - n * self.cartan[k][i])
                .collect(),
        )
    }

    pub fn dominant(&self, w: &Weight) -> bool {
        w.0.iter().all(|&x| x >= 0)
    }

    /// Dominant representative of the Weyl orbit of `w`.
    pub fn to_dominant(&self, w: &Weight) -> Weight {
        let mut w = w.clone();
        while let Some(i) = w.0.iter().position(|&x| x < 0) {
            w = self.simple_reflection(i, &w);
        }
        w
    }

    /// Weyl orbit of `w`, sorted.
    pub fn orbit(&self, w: &Weight) -> Vec<Weight> {
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut queue = VecDeque::from([w.clone()]);
        seen.insert(w.clone());
        while let Some(x) = queue.pop_front() {
            for i in 0..self.rank() {
                let y = self.simple_reflection(i, &x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<Weight> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Nodes adjacent to `i` in the Dynkin diagram.
    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rank()).filter(move |&j| j != i && self.cartan[i][j] != 0)
    }

    /// Principal submatrix on `nodes` with the corresponding labels.
    pub fn restrict(&self, nodes: &[usize]) -> Self {
        let cartan = nodes
            .iter()
            .map(|&i| nodes.iter().map(|&j| self.cartan[i][j]).collect())
            .collect();
        let labels = nodes.iter().map(|&i| self.labels[i]).collect();
        Self::with_lacing(
            format!("{}|{:?}", self.name, nodes),
            cartan,
            labels,
            self.lacing,
        )
        .expect("restriction of a valid datum is valid")
    }

    pub fn positive_roots(&self) -> Result<RootDatum> {
        RootDatum::new(self)
    }
}

fn dual_name(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some('B') if !name.contains('x') => format!("C{}", chars.as_str()),
        Some('C') if !name.contains('x') => format!("B{}", chars.as_str()),
        _ => name.to_string(),
    }
}

/// Positive roots and the invariant form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    /// Positive roots in ω-coordinates, ordered by height.
    pub positive_roots: Vec<Weight>,
    /// The same roots in simple-root coordinates.
    pub root_coords: Vec<Vec<i64>>,
    pub rho: Weight,
    /// (α_i, α_j) = r_i C_{i,j}.
    pub inner: Vec<Vec<i64>>,
    labels: Vec<i64>,
}

const ROOT_BOUND: usize = 2000;

impl RootDatum {
    fn new(c: &CartanData) -> Result<Self> {
        let n = c.rank();
        let mut found: Vec<Vec<i64>> = Vec::new();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            found.push(beta.clone());
            if found.len() > ROOT_BOUND {
                return Err(Error::NotFinite(ROOT_BOUND));
            }
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| beta[j] * c.cartan[i][j]).sum();
                if pairing == 0 {
                    continue;
                }
                let mut image = beta.clone();
                image[i] -= pairing;
                if image.iter().any(|&x| x < 0) {
                    continue;
                }
                if seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        found.sort_by_key(|a| (a.iter().sum::<i64>(), std::cmp::Reverse(a.clone())));
        let positive_roots: Vec<Weight> = found.iter().map(|a| c.root_to_weight(a)).collect();
        let mut sum = Weight::zero(n);
        for r in &positive_roots {
            sum = sum.add(r);
        }
        let rho = Weight(sum.0.iter().map(|x| x / 2).collect());
        let inner = (0..n)
            .map(|i| (0..n).map(|j| c.labels[i] * c.cartan[i][j]).collect())
            .collect();
        Ok(RootDatum {
            positive_roots,
            root_coords: found,
            rho,
            inner,
            labels: c.labels.clone(),
        })
    }

    /// (w, β) for a weight w and β given in simple-root coordinates.
    pub fn pair(&self, w: &Weight, beta: &[i64]) -> i64 {
        w.0.iter()
            .zip(beta)
            .zip(&self.labels)
            .map(|((x, b), r)| x * b * r)
            .sum()
    }

    /// (β, γ) for two vectors in simple-root coordinates.
    pub fn form(&self, beta: &[i64], gamma: &[i64]) -> i64 {
        let mut s = 0;
        for (i, b) in beta.iter().enumerate() {
            for (j, g) in gamma.iter().enumerate() {
                s += b * g * self.inner[i][j];
            }
        }
        s
    }

    /// Product formula for the dimension of the irreducible of highest weight `lam`.
    pub fn weyl_dim(&self, lam: &Weight) -> u128 {
        let shifted = lam.add(&self.rho);
        let (mut num, mut den) = (1i128, 1i128);
        for a in &self.root_coords {
            num *= self.pair(&shifted, a) as i128;
            den *= self.pair(&self.rho, a) as i128;
            let g = num.gcd(&den);
            num /= g;
            den /= g;
        }
        debug_assert_eq!(den, 1);
        (num / den) as u128
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_types() -> Vec<CartanData> {
        let mut v = vec![CartanData::f4(), CartanData::g2()];
        for n in 1..=8 {
            v.push(CartanData::a(n));
        }
        for n in 2..=8 {
            v.push(CartanData::b(n));
            v.push(CartanData::c(n));
        }
        for n in 4..=8 {
            v.push(CartanData::d(n));
        }
        for n in 6..=8 {
            v.push(CartanData::e(n));
        }
        v
    }

    #[test]
    fn b2_matches_crystal_convention() {
        let b2 = CartanData::b(2);
        assert_eq!(b2.cartan, vec![vec![2, -1], vec![-2, 2]]);
        assert_eq!(b2.labels, vec![2, 1]);
        assert_eq!(b2.simple_root(0), Weight::from([2, -2]));
        assert_eq!(b2.simple_root(1), Weight::from([-1, 2]));
    }

    #[test]
    fn dual_of_b2_is_c2() {
        let d = CartanData::b(2).langlands_dual();
        assert_eq!(d, CartanData::c(2));
        assert_eq!(d.cartan[0][1], -2);
        assert_eq!(d.labels, vec![1, 2]);
        let a2 = CartanData::a(2);
        assert_eq!(a2.langlands_dual(), a2);
        let g = CartanData::g2().langlands_dual();
        assert_eq!(g.labels, vec![1, 3]);
        assert_eq!(g.cartan, vec![vec![2, -3], vec![-1, 2]]);
    }

    #[test]
    fn dual_is_involutive() {
        for c in all_types() {
            assert_eq!(c.langlands_dual().langlands_dual(), c);
        }
        let doubled = CartanData::a(3).in_lacing(2).unwrap();
        assert_eq!(doubled.langlands_dual().langlands_dual(), doubled);
    }

    #[test]
    fn p_prime_membership() {
        let b2 = CartanData::b(2);
        assert!(b2.in_p_prime(&Weight::from([1, 2])));
        assert!(!b2.in_p_prime(&Weight::from([0, 1])));
        assert!(b2.in_p_prime(&Weight::zero(2)));
        let g2 = CartanData::g2();
        assert!(g2.in_p_prime(&Weight::from([5, 3])));
        assert!(!g2.in_p_prime(&Weight::from([5, 2])));
    }

    #[test]
    fn folding_weights() {
        let b2 = CartanData::b(2);
        assert_eq!(
            b2.pi_weight(&Weight::from([0, 2])),
            Some(Weight::from([0, 1]))
        );
        assert_eq!(b2.pi_weight(&Weight::zero(2)), Some(Weight::zero(2)));
        assert_eq!(b2.pi_weight(&Weight::from([0, 1])), None);
    }

    #[test]
    fn reflections() {
        let b2 = CartanData::b(2);
        let s = b2.simple_reflection(0, &Weight::from([1, 0]));
        assert_eq!(s, Weight::from([1, 0]).sub(&b2.simple_root(0)));
        assert_eq!(s, Weight::from([-1, 2]));
        assert_eq!(
            b2.simple_reflection(1, &Weight::from([1, 0])),
            Weight::from([1, 0])
        );
    }

    #[test]
    fn root_counts() {
        let counts = [
            ("A2", 3),
            ("B2", 4),
            ("G2", 6),
            ("B3", 9),
            ("C3", 9),
            ("F4", 24),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
            ("D5", 20),
        ];
        for (name, k) in counts {
            let rd = CartanData::from_name(name)
                .unwrap()
                .positive_roots()
                .unwrap();
            assert_eq!(rd.positive_roots.len(), k, "{name}");
            assert_eq!(rd.rho, Weight(vec![1; rd.rho.len()]), "{name}");
        }
    }

    #[test]
    fn affine_input_is_rejected() {
        let c = CartanData::new("A1~", vec![vec![2, -2], vec![-2, 2]], vec![1, 1]).unwrap();
        assert_eq!(c.positive_roots(), Err(Error::NotFinite(ROOT_BOUND)));
    }

    #[test]
    fn invalid_data_is_rejected() {
        assert!(CartanData::new("x", vec![vec![2, -1], vec![-2, 2]], vec![1, 1]).is_err());
        assert!(CartanData::new("x", vec![vec![2, 1], vec![1, 2]], vec![1, 1]).is_err());
    }

    #[test]
    fn known_dimensions() {
        let b2 = CartanData::b(2).positive_roots().unwrap();
        assert_eq!(b2.weyl_dim(&Weight::from([0, 0])), 1);
        assert_eq!(b2.weyl_dim(&Weight::from([1, 0])), 5);
        assert_eq!(b2.weyl_dim(&Weight::from([0, 2])), 10);
        assert_eq!(b2.weyl_dim(&Weight::from([2, 0])), 14);
        assert_eq!(b2.weyl_dim(&Weight::from([1, 2])), 35);
        let g2 = CartanData::g2().positive_roots().unwrap();
        assert_eq!(g2.weyl_dim(&Weight::from([1, 0])), 14);
        assert_eq!(g2.weyl_dim(&Weight::from([0, 1])), 7);
        assert_eq!(g2.weyl_dim(&Weight::from([0, 3])), 77);
        let e8 = CartanData::e(8).positive_roots().unwrap();
        assert_eq!(e8.weyl_dim(&Weight::from([0, 0, 0, 0, 0, 0, 0, 1])), 248);
    }

    #[test]
    fn name_parsing() {
        assert_eq!(CartanData::from_name("b2").unwrap(), CartanData::b(2));
        let d = CartanData::from_name("A2x2").unwrap();
        assert_eq!(d.lacing, 2);
        assert_eq!(d.factor(0), 2);
        assert!(CartanData::from_name("Q3").is_err());
        assert!(CartanData::from_name("G3").is_err());
    }

    #[test]
    fn folding_is_onto() {
        for c in [CartanData::b(2), CartanData::g2(), CartanData::c(3)] {
            let d = c.langlands_dual();
            for x in -5..=5 {
                for y in -5..=5 {
                    let mut v = vec![x, y];
                    v.resize(c.rank(), x - y);
                    let mu = Weight(v);
                    assert_eq!(c.pi_weight(&c.pi_preimage(&mu)), Some(mu.clone()));
                    assert_eq!(d.rank(), mu.len());
                }
            }
        }
    }

    fn weight_strategy(n: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-20i64..=20, n)
    }

    proptest! {
        #[test]
        fn reflection_squares_to_identity(v in weight_strategy(8), k in 0usize..64) {
            let types = all_types();
            let c = &types[k % types.len()];
            let w = Weight(v[..c.rank().min(8)].to_vec());
            if w.len() == c.rank() {
                for i in 0..c.rank() {
                    prop_assert_eq!(c.simple_reflection(i, &c.simple_reflection(i, &w)), w.clone());
                }
            }
        }

        #[test]
        fn folding_commutes_with_reflections(v in weight_strategy(4), k in 0usize..4) {
            let c = [CartanData::b(2), CartanData::c(3), CartanData::g2(), CartanData::f4()][k].clone();
            let d = c.langlands_dual();
            let mu = c.pi_preimage(&Weight(v[..c.rank()].to_vec()));
            for i in 0..c.rank() {
                let s = c.simple_reflection(i, &mu);
                prop_assert!(c.in_p_prime(&s));
                prop_assert_eq!(c.pi_weight(&s).unwrap(), d.simple_reflection(i, &c.pi_weight(&mu).unwrap()));
            }
        }
    }
}
