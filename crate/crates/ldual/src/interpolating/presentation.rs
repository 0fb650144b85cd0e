//! Generators and defining relations of the interpolating quantum groups.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::{CartanData, Weight};

/// Elementary rank-one algebra attached to a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NodeKind {
    A1,
    B1,
    C1,
    G1,
    LG1,
}

impl NodeKind {
    /// K = q^{r wt}.
    pub fn r(self) -> i64 {
        match self {
            NodeKind::A1 | NodeKind::B1 | NodeKind::G1 => 1,
            NodeKind::C1 => 2,
            NodeKind::LG1 => 3,
        }
    }

    /// Doubled t-exponent of K̃X⁺ = t^{τ}X⁺K̃ inside the elementary algebra.
    pub fn tau2(self) -> i64 {
        match self {
            NodeKind::B1 | NodeKind::G1 => 2,
            NodeKind::A1 | NodeKind::C1 | NodeKind::LG1 => 4,
        }
    }

    /// Nodes carrying η, C, C̃.
    pub fn is_short(self) -> bool {
        matches!(self, NodeKind::B1 | NodeKind::G1)
    }

    /// Lacing number of the context the algebra lives in.
    pub fn lacing(self) -> i64 {
        match self {
            NodeKind::A1 => 1,
            NodeKind::B1 | NodeKind::C1 => 2,
            NodeKind::G1 | NodeKind::LG1 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NodeKind::A1 => "A1",
            NodeKind::B1 => "B1",
            NodeKind::C1 => "C1",
            NodeKind::G1 => "G1",
            NodeKind::LG1 => "LG1",
        }
    }
}

/// A defining relation and the generators it mentions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationSpec {
    pub id: String,
    pub generators: Vec<String>,
    pub statement: String,
}

/// An interpolating quantum group: one elementary algebra per node glued by
/// the Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraPresentation {
    pub name: String,
    pub datum: CartanData,
    pub cartan: Vec<Vec<i64>>,
    pub kinds: Vec<NodeKind>,
    /// Doubled τ with K̃_i X_j⁺ = t^{τ_ij} X_j⁺ K̃_i.
    pub tau2: Vec<Vec<i64>>,
    /// Only verification is supported, no module builders.
    pub verify_only: bool,
    /// ρ_i(wt) = (Σ_k rho_num[i][k] wt_k) / rho_den is the doubled
    /// K̃_i-exponent on weight wt.
    rho_num: Vec<Vec<i64>>,
    rho_den: i64,
}

fn det_adj(c: &[Vec<i64>]) -> (i64, Vec<Vec<i64>>) {
    let n = c.len();
    if n == 1 {
        return (c[0][0], vec![vec![1]]);
    }
    let minor = |skip_r: usize, skip_c: usize| -> Vec<Vec<i64>> {
        c.iter()
            .enumerate()
            .filter(|(i, _)| *i != skip_r)
            .map(|(_, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip_c)
                    .map(|(_, x)| *x)
                    .collect()
            })
            .collect()
    };
    let det = (0..n)
        .map(|j| {
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * c[0][j] * det_adj(&minor(0, j)).0
        })
        .sum();
    let adj = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                    s * det_adj(&minor(j, i)).0
                })
                .collect()
        })
        .collect();
    (det, adj)
}

impl AlgebraPresentation {
    fn build(name: String, datum: CartanData, kinds: Vec<NodeKind>, tau2: Vec<Vec<i64>>) -> Self {
        let cartan = datum.cartan.clone();
        let (det, adj) = det_adj(&cartan);
        let n = cartan.len();
        // ρ = τ C⁻¹, so that ρ(α_j) = τ_{·j}
        let rho_num = (0..n)
            .map(|i| (0..n).map(|k| (0..n).map(|j| tau2[i][j] * adj[j][k]).sum()).collect())
            .collect();
        AlgebraPresentation {
            name,
            datum,
            cartan,
            kinds,
            tau2,
            verify_only: false,
            rho_num,
            rho_den: det,
        }
    }

    /// The elementary algebra of the given kind.
    pub fn elementary(kind: NodeKind) -> Self {
        let datum =
            CartanData::with_lacing(kind.name(), vec![vec![2]], vec![kind.r()], kind.lacing())
                .expect("valid rank-one datum");
        Self::build(
            format!("U_qt({})", kind.name()),
            datum,
            vec![kind],
            vec![vec![kind.tau2()]],
        )
    }

    /// Rank-n assembly. Node kinds come from the labels and the lacing
    /// number; diagonal K̃ exponents come from the elementary algebras.
    pub fn assembly(c: &CartanData) -> Result<Self> {
        let n = c.rank();
        let r = c.lacing;
        let kinds = (0..n)
            .map(|i| match (r, c.labels[i]) {
                (1, 1) => Ok(NodeKind::A1),
                (2, 2) => Ok(NodeKind::C1),
                (2, 1) => Ok(NodeKind::B1),
                (3, 3) => Ok(NodeKind::LG1),
                (3, 1) => Ok(NodeKind::G1),
                (r, l) => Err(Error::InvalidCartan(format!(
                    "no elementary algebra for label {l} in lacing {r}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut tau2 = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                tau2[i][j] = if i == j {
                    kinds[i].tau2()
                } else {
                    let x = 2 * c.labels[i] * c.cartan[i][j];
                    if x % r != 0 {
                        return Err(Error::InvalidCartan(format!(
                            "t-exponent {x}/{r} at ({},{}) is not half-integral",
                            i + 1,
                            j + 1
                        )));
                    }
                    x / r
                };
            }
        }
        let mut p = Self::build(format!("U_qt({})", c.name), c.clone(), kinds, tau2);
        p.verify_only = r == 3;
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.kinds.len()
    }

    pub fn r(&self, i: usize) -> i64 {
        self.kinds[i].r()
    }

    pub fn lacing(&self) -> i64 {
        self.kinds.iter().map(|k| k.lacing()).max().unwrap_or(1)
    }

    pub fn simple_root(&self, j: usize) -> Weight {
        Weight(self.cartan.iter().map(|row| row[j]).collect())
    }

    /// Doubled q-exponent of K_i on weight wt.
    pub fn k2(&self, i: usize, wt: &Weight) -> i64 {
        2 * self.r(i) * wt.0[i]
    }

    /// Doubled t-exponent of K̃_i on weight wt.
    pub fn kt2(&self, i: usize, wt: &Weight) -> Result<i64> {
        let s: i64 = self.rho_num[i].iter().zip(&wt.0).map(|(a, b)| a * b).sum();
        if s % self.rho_den != 0 {
            return Err(Error::Divisibility {
                node: i,
                exp: s,
                factor: self.rho_den,
            });
        }
        Ok(s / self.rho_den)
    }

    pub fn short_nodes(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.kinds[i].is_short()).collect()
    }

    /// Generator names.
    pub fn roster(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 1..=self.rank() {
            for g in ["X+", "X-", "K", "K^-1", "Kt", "Kt^-1"] {
                out.push(format!("{g}{i}"));
            }
            if self.kinds[i - 1].is_short() {
                for g in ["eta", "C", "Ct"] {
                    out.push(format!("{g}{i}"));
                }
            }
        }
        out
    }

    /// Defining relations, one entry per relation family and node pair.
    pub fn relations(&self) -> Vec<RelationSpec> {
        let n = self.rank();
        let mut out = Vec::new();
        let spec = |id: String, gens: Vec<String>, st: String| RelationSpec {
            id,
            generators: gens,
            statement: st,
        };
        let mut cartan_gens = Vec::new();
        for i in 1..=n {
            cartan_gens.extend([format!("K{i}"), format!("Kt{i}")]);
            if self.kinds[i - 1].is_short() {
                cartan_gens.extend([format!("eta{i}"), format!("C{i}"), format!("Ct{i}")]);
            }
        }
        out.push(spec(
            "cartan_commute".into(),
            cartan_gens,
            "K_i, Kt_i, eta_i, C_i, Ct_i commute".into(),
        ));
        for i in 1..=n {
            for j in 1..=n {
                let (a, b) = (i - 1, j - 1);
                out.push(spec(
                    format!("KX[{i},{j}]"),
                    vec![format!("K{i}"), format!("X+{j}"), format!("X-{j}")],
                    format!("K_{i} X_{j}^± = q^(±{}) X_{j}^± K_{i}", self.r(a) * self.cartan[a][b]),
                ));
                out.push(spec(
                    format!("KtX[{i},{j}]"),
                    vec![format!("Kt{i}"), format!("X+{j}"), format!("X-{j}")],
                    format!("Kt_{i} X_{j}^± = t^(±{}/2) X_{j}^± Kt_{i}", self.tau2[a][b]),
                ));
            }
        }
        for i in 1..=n {
            let k = self.kinds[i - 1];
            let x = [format!("X+{i}"), format!("X-{i}")];
            if k.is_short() {
                out.push(spec(
                    format!("etaX[{i}]"),
                    vec![format!("eta{i}"), x[0].clone(), x[1].clone()],
                    format!("eta_{i} X_{i}^± = X_{i}^± (eta_{i} ± 1)"),
                ));
                out.push(spec(
                    format!("central[{i}]"),
                    vec![format!("C{i}"), format!("Ct{i}"), x[0].clone(), x[1].clone()],
                    format!("C_{i}, Ct_{i} commute with X_{i}^±"),
                ));
                let fam = if k == NodeKind::B1 { "hun" } else { "hung" };
                for s in ["+", "-"] {
                    out.push(spec(
                        format!("{fam}{s}[{i}]"),
                        vec![
                            x[0].clone(),
                            x[1].clone(),
                            format!("K{i}"),
                            format!("Kt{i}"),
                            format!("eta{i}"),
                            format!("C{i}"),
                            format!("Ct{i}"),
                        ],
                        format!("X_{i}^{s} X_{i}^∓ as a function of K, Kt, eta, C, Ct"),
                    ));
                }
            } else {
                out.push(spec(
                    format!("bracket[{i}]"),
                    vec![x[0].clone(), x[1].clone(), format!("K{i}"), format!("Kt{i}")],
                    format!(
                        "[X_{i}^+, X_{i}^-] = (K_{i}Kt_{i} - (K_{i}Kt_{i})^-1)/(q^{r}t - q^-{r}t^-1)",
                        r = k.r()
                    ),
                ));
            }
        }
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                out.push(spec(
                    format!("mixed[{i},{j}]"),
                    vec![format!("X+{i}"), format!("X-{j}")],
                    format!("[X_{i}^+, X_{j}^-] = 0"),
                ));
                if self.kinds[i - 1].is_short() && self.lacing() == 2 {
                    out.push(spec(
                        format!("parity[{i},{j}]"),
                        vec![format!("eta{i}"), format!("X+{j}"), format!("X-{j}")],
                        format!("[(-1)^eta_{i}, X_{j}^±] = 0"),
                    ));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_use_rostered_generators() {
        let cases = [
            AlgebraPresentation::elementary(NodeKind::B1),
            AlgebraPresentation::elementary(NodeKind::G1),
            AlgebraPresentation::assembly(&CartanData::b(2)).unwrap(),
            AlgebraPresentation::assembly(&CartanData::g2()).unwrap(),
            AlgebraPresentation::assembly(&CartanData::c(3)).unwrap(),
            AlgebraPresentation::assembly(&CartanData::a(2)).unwrap(),
        ];
        for p in &cases {
            let roster = p.roster();
            for rel in p.relations() {
                for g in &rel.generators {
                    assert!(roster.contains(g), "{} uses {g} in {}", rel.id, p.name);
                }
            }
        }
    }

    #[test]
    fn kt_exponents() {
        let b2 = AlgebraPresentation::assembly(&CartanData::b(2)).unwrap();
        assert_eq!(b2.kinds, vec![NodeKind::C1, NodeKind::B1]);
        // K̃1 = t^{m1}, K̃2 = t^{m2/2}
        let w = Weight(vec![3, 4]);
        assert_eq!(b2.kt2(0, &w).unwrap(), 6);
        assert_eq!(b2.kt2(1, &w).unwrap(), 4);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(b2.kt2(i, &b2.simple_root(j)).unwrap(), b2.tau2[i][j]);
            }
        }
        let g2 = AlgebraPresentation::assembly(&CartanData::g2()).unwrap();
        assert!(g2.verify_only);
        assert_eq!(g2.tau2, vec![vec![4, -2], vec![-2, 2]]);
        let w = Weight(vec![1, 2]);
        assert_eq!(g2.kt2(0, &w).unwrap(), 2);
        assert_eq!(g2.kt2(1, &w).unwrap(), 6);
        let a2 = AlgebraPresentation::assembly(&CartanData::a(2)).unwrap();
        assert_eq!(a2.tau2, vec![vec![4, -2], vec![-2, 4]]);
        assert_eq!(a2.kt2(0, &Weight(vec![1, 0])).unwrap(), 2);
    }
}
