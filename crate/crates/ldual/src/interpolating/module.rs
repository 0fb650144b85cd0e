//! Explicit modules as matrices over `QTFraction`, the relation checker and
//! the two specializations.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::linalg::{rank, sv_sub, sv_unit, Dense, Matrix, SVec};
use super::presentation::{AlgebraPresentation, NodeKind};
use super::Report;
use crate::characters::CharacterPoly;
use crate::error::{Error, Result};
use crate::liealg::Weight;
use crate::qt_algebra::{qdiff, quantum_int, CycInt, QTFraction, QTLaurent};
use crate::sweep::par_map;

pub(crate) fn m2(a2: i64, b2: i64) -> QTFraction {
    QTFraction::from(QTLaurent::mono2(a2 as i32, b2 as i32))
}

pub(crate) fn lf(x: QTLaurent) -> QTFraction {
    QTFraction::from(x)
}

/// [m]_x for x = q^a t^b.
pub(crate) fn qn(m: i64, a: i32, b: i32) -> QTFraction {
    lf(quantum_int(m, 2 * a, 2 * b))
}

/// First nonzero coordinate, as a witness.
pub(crate) fn witness(d: &SVec, labels: &[String]) -> Option<String> {
    d.iter().next().map(|(k, v)| format!("{}: {}", labels[*k], v))
}

/// Eigenbasis of η_i, C_i, C̃_i for a short node, with doubled C̃.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortBasis {
    /// Columns are the basis vectors in module coordinates.
    pub vectors: Matrix,
    pub inverse: Matrix,
    pub labels: Vec<String>,
    pub eta: Vec<i64>,
    pub c: Vec<i64>,
    pub ct2: Vec<i64>,
}

impl ShortBasis {
    pub fn identity(labels: Vec<String>, eta: Vec<i64>, c: Vec<i64>, ct2: Vec<i64>) -> Self {
        let n = labels.len();
        ShortBasis {
            vectors: Matrix::identity(n),
            inverse: Matrix::identity(n),
            labels,
            eta,
            c,
            ct2,
        }
    }

    pub fn new(vectors: Matrix, labels: Vec<String>, eta: Vec<i64>, c: Vec<i64>, ct2: Vec<i64>) -> Result<Self> {
        let inv = super::linalg::inverse(&vectors.to_dense())
            .ok_or_else(|| Error::Singular("short-node basis is not a basis".into()))?;
        let n = vectors.rows;
        Ok(ShortBasis {
            vectors,
            inverse: Matrix::from_dense(&inv, n),
            labels,
            eta,
            c,
            ct2,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// P = (-1)^η.
    pub fn parity(&self, k: usize) -> i64 {
        if self.eta[k].rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// A module operator in these coordinates.
    pub fn to_s(&self, m: &Matrix) -> Matrix {
        self.inverse.mul(m).mul(&self.vectors)
    }
}

/// A finite-dimensional module with a weight basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepModule {
    pub name: String,
    pub pres: AlgebraPresentation,
    pub labels: Vec<String>,
    pub weights: Vec<Weight>,
    pub xp: Vec<Matrix>,
    pub xm: Vec<Matrix>,
    /// Indexed by node; `Some` exactly at short nodes.
    pub short: Vec<Option<ShortBasis>>,
}

impl RepModule {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self, i: usize, v: usize) -> QTFraction {
        m2(self.pres.k2(i, &self.weights[v]), 0)
    }

    pub fn character(&self) -> CharacterPoly {
        let mut ch = CharacterPoly::zero();
        for w in &self.weights {
            ch.add_term(w.clone(), 1);
        }
        ch
    }

    /// Weight of a short-node basis vector, if it is a weight vector.
    pub fn s_weight(&self, sb: &ShortBasis, k: usize) -> Option<Weight> {
        let mut ws = sb.vectors.col(k).keys().map(|&a| &self.weights[a]);
        let first = ws.next()?.clone();
        ws.all(|w| *w == first).then_some(first)
    }

    /// Scales one matrix entry, for mutation tests.
    pub fn perturb(&mut self, raise: bool, node: usize, row: usize, col: usize, by: &QTFraction) {
        let m = if raise { &mut self.xp[node] } else { &mut self.xm[node] };
        let v = &m.get(row, col) * by;
        m.set(row, col, v);
    }

    pub fn to_json(&self) -> Value {
        let mut gens = serde_json::Map::new();
        for i in 0..self.pres.rank() {
            gens.insert(format!("X+{}", i + 1), self.xp[i].to_json());
            gens.insert(format!("X-{}", i + 1), self.xm[i].to_json());
        }
        let short: Vec<Value> = self
            .short
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|s| (i, s)))
            .map(|(i, s)| {
                json!({
                    "node": i + 1,
                    "vectors": s.vectors.to_json(),
                    "eta": s.eta,
                    "C": s.c,
                    "Ct_doubled": s.ct2,
                })
            })
            .collect();
        json!({
            "module": self.name,
            "algebra": self.pres.name,
            "dim": self.dim(),
            "labels": self.labels,
            "weights": self.weights,
            "generators": gens,
            "short": short,
        })
    }
}

/// X^s X^{-s} on a short-node eigenvector, s = ±1, by the defining formula.
pub(crate) fn short_value(kind: NodeKind, s: i64, ka2: i64, rho2: i64, eta: i64, c: i64, ct2: i64) -> QTFraction {
    match kind {
        NodeKind::B1 => {
            let p = if eta.rem_euclid(2) == 0 { 1 } else { -1 };
            let ct = p * ct2 - 1;
            let u = p * (ct + s * rho2);
            let num = &(&(&QTLaurent::mono2(2 * c as i32, u as i32)
                + &QTLaurent::mono2(-2 * c as i32, -u as i32))
                - &QTLaurent::mono2((-2 * s + ka2) as i32, (s * ct + rho2) as i32))
                - &QTLaurent::mono2((2 * s - ka2) as i32, (-s * ct - rho2) as i32);
            QTFraction::new(num, &qdiff(1, 0) * &qdiff(1, 1)).expect("nonzero denominator")
        }
        NodeKind::G1 => {
            // P± = F(ε^{2e}) with F(1) = 1, F(ε²) = 0, F(ε⁴) = -1
            let e = if s == 1 { (-eta).rem_euclid(3) } else { (2 - eta).rem_euclid(3) };
            let p = [1, 0, -1][e as usize];
            let ct = p * ct2 - s;
            let u = ct + rho2;
            let num = &(&(&QTLaurent::mono2(2 * c as i32, (p * u) as i32)
                + &QTLaurent::mono2(-2 * c as i32, (-p * u) as i32))
                - &QTLaurent::mono2((-2 * s + ka2) as i32, (p * p * u) as i32))
                - &QTLaurent::mono2((2 * s - ka2) as i32, (-p * p * u) as i32);
            lf(num)
        }
        _ => panic!("{kind:?} has no η-dependent relation"),
    }
}

/// Per-vector relation values of a short node, in its own basis.
struct ShortData {
    xp: Matrix,
    xm: Matrix,
    weights: Vec<Weight>,
    plus: Vec<QTFraction>,
    minus: Vec<QTFraction>,
}

fn short_data(m: &RepModule, i: usize) -> Option<ShortData> {
    let sb = m.short[i].as_ref()?;
    let kind = m.pres.kinds[i];
    let weights: Option<Vec<Weight>> = (0..sb.len()).map(|k| m.s_weight(sb, k)).collect();
    let weights = weights?;
    let vals = |s: i64| -> Option<Vec<QTFraction>> {
        (0..sb.len())
            .map(|k| {
                let w = &weights[k];
                let rho2 = m.pres.kt2(i, w).ok()?;
                Some(short_value(kind, s, m.pres.k2(i, w), rho2, sb.eta[k], sb.c[k], sb.ct2[k]))
            })
            .collect()
    };
    Some(ShortData {
        xp: sb.to_s(&m.xp[i]),
        xm: sb.to_s(&m.xm[i]),
        plus: vals(1)?,
        minus: vals(-1)?,
        weights,
    })
}

/// Evaluates every defining relation on every basis vector.
pub fn verify_module(m: &RepModule) -> Report {
    let mut rep = Report::new();
    let name = m.name.as_str();
    let p = &m.pres;
    let n = p.rank();
    let dim = m.dim();
    let idx: Vec<usize> = (0..dim).collect();
    for v in 0..dim {
        for i in 0..n {
            if let Err(e) = p.kt2(i, &m.weights[v]) {
                rep.check(name, "kt_integral", &m.labels[v], Some(e.to_string()));
            }
        }
    }
    if !rep.passed() {
        return rep;
    }
    // Cartan part: every η/C/C̃ eigenvector must be a weight vector
    for i in 0..n {
        if let Some(sb) = &m.short[i] {
            for k in 0..sb.len() {
                let ok = m.s_weight(sb, k).is_some();
                rep.assert_true(name, "cartan_commute", &sb.labels[k], ok, "mixed weights".into());
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let a = p.simple_root(j);
            for v in 0..dim {
                let mut bad_k = None;
                let mut bad_kt = None;
                for (sign, x) in [(1, &m.xp[j]), (-1, &m.xm[j])] {
                    for &row in x.col(v).keys() {
                        let d = m.weights[row].sub(&m.weights[v]);
                        let dk = p.k2(i, &m.weights[row]) - p.k2(i, &m.weights[v]);
                        if dk != sign * 2 * p.r(i) * p.cartan[i][j] || d != a.scale(sign) {
                            bad_k = Some(format!("{}: q-shift {dk}/2", m.labels[row]));
                        }
                        let dt = p.kt2(i, &m.weights[row]).unwrap() - p.kt2(i, &m.weights[v]).unwrap();
                        if dt != sign * p.tau2[i][j] {
                            bad_kt = Some(format!("{}: t-shift {dt}/2", m.labels[row]));
                        }
                    }
                }
                rep.check(name, &format!("KX[{},{}]", i + 1, j + 1), &m.labels[v], bad_k);
                rep.check(name, &format!("KtX[{},{}]", i + 1, j + 1), &m.labels[v], bad_kt);
            }
        }
    }
    for i in 0..n {
        let kind = p.kinds[i];
        let node = i + 1;
        if kind.is_short() {
            let Some(sb) = &m.short[i] else {
                rep.check(name, &format!("etaX[{node}]"), "-", Some("missing η data".into()));
                continue;
            };
            let Some(sd) = short_data(m, i) else {
                continue;
            };
            let ks: Vec<usize> = (0..sb.len()).collect();
            for k in 0..sb.len() {
                let mut bad_eta = None;
                let mut bad_c = None;
                for (sign, x) in [(1, &sd.xp), (-1, &sd.xm)] {
                    for &a in x.col(k).keys() {
                        if sb.eta[a] != sb.eta[k] + sign {
                            bad_eta = Some(format!("{}: η {}", sb.labels[a], sb.eta[a]));
                        }
                        if sb.c[a] != sb.c[k] || sb.ct2[a] != sb.ct2[k] {
                            bad_c = Some(format!("{}: C {} Ct {}/2", sb.labels[a], sb.c[a], sb.ct2[a]));
                        }
                    }
                }
                rep.check(name, &format!("etaX[{node}]"), &sb.labels[k], bad_eta);
                rep.check(name, &format!("central[{node}]"), &sb.labels[k], bad_c);
            }
            let fam = if kind == NodeKind::B1 { "hun" } else { "hung" };
            let res = par_map(&ks, |&k| {
                let e = sv_unit(k);
                let pm = sd.xp.apply(&sd.xm.apply(&e));
                let mp = sd.xm.apply(&sd.xp.apply(&e));
                let plus = sv_sub(&pm, &super::linalg::sv_scale(&sd.plus[k], &e));
                let minus = sv_sub(&mp, &super::linalg::sv_scale(&sd.minus[k], &e));
                (witness(&plus, &sb.labels), witness(&minus, &sb.labels))
            });
            for (k, (a, b)) in res.into_iter().enumerate() {
                rep.check(name, &format!("{fam}+[{node}]"), &sb.labels[k], a);
                rep.check(name, &format!("{fam}-[{node}]"), &sb.labels[k], b);
            }
            // associativity: D± X± = X± D∓ with D± the formula values
            for k in 0..sb.len() {
                for (sign, x, d_out, d_in) in [
                    ("+", &sd.xp, &sd.plus, &sd.minus),
                    ("-", &sd.xm, &sd.minus, &sd.plus),
                ] {
                    let mut bad = None;
                    for (&a, c) in x.col(k) {
                        let diff = c * &(&d_out[a] - &d_in[k]);
                        if !diff.is_zero() {
                            bad = Some(format!("{}: {}", sb.labels[a], diff));
                        }
                    }
                    rep.check(name, &format!("assoc{sign}[{node}]"), &sb.labels[k], bad);
                }
            }
            if kind == NodeKind::B1 {
                // t^{2(1+c̃)} + t^{-2(1+c̃)} commutes with (X±)²
                let cas = |k: usize| {
                    let e = 4 + 2 * (sb.parity(k) * sb.ct2[k] - 1);
                    &QTLaurent::mono2(0, e as i32) + &QTLaurent::mono2(0, -e as i32)
                };
                let sq = [sd.xp.mul(&sd.xp), sd.xm.mul(&sd.xm)];
                for k in 0..sb.len() {
                    let bad = sq
                        .iter()
                        .flat_map(|x| x.col(k).keys())
                        .find(|&&a| cas(a) != cas(k))
                        .map(|&a| format!("{}: {} vs {}", sb.labels[a], cas(a), cas(k)));
                    rep.check(name, &format!("casimir_t[{node}]"), &sb.labels[k], bad);
                }
            }
            let _ = sd.weights;
        } else {
            let den = qdiff(p.r(i) as i32, 1);
            let res = par_map(&idx, |&v| {
                let e = sv_unit(v);
                let w = &m.weights[v];
                let (a, b) = (p.k2(i, w), p.kt2(i, w).unwrap());
                let target = QTFraction::new(&m2(a, b).num().clone() - &QTLaurent::mono2(-a as i32, -b as i32), den.clone())
                    .expect("nonzero denominator");
                let lhs = sv_sub(&m.xp[i].apply(&m.xm[i].apply(&e)), &m.xm[i].apply(&m.xp[i].apply(&e)));
                witness(&sv_sub(&lhs, &super::linalg::sv_scale(&target, &e)), &m.labels)
            });
            for (v, w) in res.into_iter().enumerate() {
                rep.check(name, &format!("bracket[{node}]"), &m.labels[v], w);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let res = par_map(&idx, |&v| {
                let e = sv_unit(v);
                let d = sv_sub(&m.xp[i].apply(&m.xm[j].apply(&e)), &m.xm[j].apply(&m.xp[i].apply(&e)));
                witness(&d, &m.labels)
            });
            for (v, w) in res.into_iter().enumerate() {
                rep.check(name, &format!("mixed[{},{}]", i + 1, j + 1), &m.labels[v], w);
            }
            if p.kinds[i].is_short() && p.lacing() == 2 {
                if let Some(sb) = &m.short[i] {
                    let xs = [sb.to_s(&m.xp[j]), sb.to_s(&m.xm[j])];
                    for k in 0..sb.len() {
                        let bad = xs
                            .iter()
                            .flat_map(|x| x.col(k).keys())
                            .find(|&&a| sb.parity(a) != sb.parity(k))
                            .map(|&a| format!("{} changes parity", sb.labels[a]));
                        rep.check(name, &format!("parity[{},{}]", i + 1, j + 1), &sb.labels[k], bad);
                    }
                }
            }
        }
    }
    rep
}

/// `verify_module` for a module over the elementary algebra of `kind`.
pub fn verify_elementary(m: &RepModule, kind: NodeKind) -> Report {
    let mut rep = Report::new();
    if m.pres.kinds != [kind] {
        rep.check(&m.name, "kind", "-", Some(format!("module is over {}", m.pres.name)));
        return rep;
    }
    rep.extend(verify_module(m));
    if kind.is_short() {
        // Cas(q) = q^C + q^{-C} is scalar on a simple module
        if let Some(sb) = &m.short[0] {
            let cas: Vec<i64> = sb.c.iter().map(|c| c.abs()).collect();
            let ok = cas.windows(2).all(|w| w[0] == w[1]);
            rep.assert_true(&m.name, "casimir_q[1]", "all", ok, format!("C values {:?}", sb.c));
        }
    }
    rep
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|j| format!("v{j}")).collect()
}

/// The (n+1)-dimensional module of U_qt(B1); n may be odd.
pub fn vn_b1(n: i64) -> RepModule {
    let dim = (n + 1) as usize;
    let mut xp = Matrix::zero(dim, dim);
    let mut xm = Matrix::zero(dim, dim);
    for j in 0..=n {
        let b = if j % 2 == 0 { (1, 0) } else { (1, 1) };
        if j >= 1 {
            xp.set((j - 1) as usize, j as usize, qn(n - j + 1, b.0, b.1));
        }
        if j < n {
            xm.set((j + 1) as usize, j as usize, qn(j + 1, b.0, b.1));
        }
    }
    let l = labels(dim);
    RepModule {
        name: format!("V_{n}(B1)"),
        pres: AlgebraPresentation::elementary(NodeKind::B1),
        weights: (0..=n).map(|j| Weight(vec![n - 2 * j])).collect(),
        xp: vec![xp],
        xm: vec![xm],
        short: vec![Some(ShortBasis::identity(
            l.clone(),
            (0..=n).map(|j| -j).collect(),
            vec![n + 1; dim],
            vec![n + 1; dim],
        ))],
        labels: l,
    }
}

/// V_n for n = 2p.
pub fn build_vn_b1(p: i64) -> RepModule {
    vn_b1(2 * p)
}

/// The (n+1)-dimensional module of U_qt(G1); any n ≥ 0.
pub fn vn_g1(n: i64) -> RepModule {
    let dim = (n + 1) as usize;
    let mut xp = Matrix::zero(dim, dim);
    let mut xm = Matrix::zero(dim, dim);
    let dq = lf(qdiff(1, 0));
    let dqt = lf(qdiff(1, 1));
    for j in 0..=n {
        let (up, down) = match j % 3 {
            0 => (&dq * &qn(n - j + 1, 1, 0), &dq * &qn(j + 1, 1, 0)),
            1 => (&dqt * &qn(n - j + 1, 1, 1), &dq * &qn(j + 1, 1, 0)),
            _ => (&dq * &qn(n - j + 1, 1, 0), &dqt * &qn(j + 1, 1, 1)),
        };
        if j >= 1 {
            xp.set((j - 1) as usize, j as usize, up);
        }
        if j < n {
            xm.set((j + 1) as usize, j as usize, down);
        }
    }
    let l = labels(dim);
    RepModule {
        name: format!("V_{n}(G1)"),
        pres: AlgebraPresentation::elementary(NodeKind::G1),
        weights: (0..=n).map(|j| Weight(vec![n - 2 * j])).collect(),
        xp: vec![xp],
        xm: vec![xm],
        short: vec![Some(ShortBasis::identity(
            l.clone(),
            (0..=n).map(|j| -j).collect(),
            vec![n + 1; dim],
            vec![n + 1; dim],
        ))],
        labels: l,
    }
}

/// V_n for 3 | n.
pub fn build_vn_g1(n: i64) -> Result<RepModule> {
    if n < 0 || n % 3 != 0 {
        return Err(Error::Divisibility {
            node: 0,
            exp: n,
            factor: 3,
        });
    }
    Ok(vn_g1(n))
}

/// Simple (n+1)-dimensional module of U_qt(A1), U_qt(C1) or U_qt(LG1): the
/// standard U_x(sl2) module with x = q^r t.
pub fn standard_module(kind: NodeKind, n: i64) -> Result<RepModule> {
    if kind.is_short() {
        return Err(Error::Parse(format!("{kind:?} modules need η data")));
    }
    let r = kind.r() as i32;
    let dim = (n + 1) as usize;
    let mut xp = Matrix::zero(dim, dim);
    let mut xm = Matrix::zero(dim, dim);
    for j in 0..=n {
        if j >= 1 {
            xp.set((j - 1) as usize, j as usize, qn(n - j + 1, r, 1));
        }
        if j < n {
            xm.set((j + 1) as usize, j as usize, qn(j + 1, r, 1));
        }
    }
    Ok(RepModule {
        name: format!("L_{n}({})", kind.name()),
        pres: AlgebraPresentation::elementary(kind),
        labels: labels(dim),
        weights: (0..=n).map(|j| Weight(vec![n - 2 * j])).collect(),
        xp: vec![xp],
        xm: vec![xm],
        short: vec![None],
    })
}

/// Highest weights of the parameters (λ, λ̃, E, A, Ã) of a Verma module over
/// U_qt(B1). λ and λ̃ are monomials given by doubled exponents; A and Ã are
/// doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VermaParams {
    pub lam: (i64, i64),
    pub lam_t: (i64, i64),
    pub e: i64,
    pub a2: i64,
    pub at2: i64,
}

/// Whether the Verma module with these parameters is nontrivial.
pub fn verma_consistency(p: &VermaParams) -> bool {
    let (l, lt) = (p.lam, p.lam_t);
    let (ea, eat) = (p.e * p.a2, p.e * p.at2);
    let t = |a: i64, b: i64| QTLaurent::mono2(a as i32, b as i32);
    let sum = &(&(&t(ea - lt.0, eat - 1 - lt.1) + &t(-ea + lt.0, -eat + 1 + lt.1))
        - &t(2 + lt.0 + l.0, -eat + 1 + lt.1 + l.1))
        - &t(-2 - lt.0 - l.0, eat - 1 - lt.1 - l.1);
    sum.is_zero()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    T1,
    QEps,
}

/// A specialized module: generators of U_q(g) (t = 1) or U_{-t}(^Lg)
/// (q = ε) on the whole space, the checks, and the decomposition.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub which: Which,
    pub module: String,
    /// Raising and lowering generators by node, in module coordinates.
    pub ep: Vec<Matrix>,
    pub em: Vec<Matrix>,
    /// Basis vectors on which the specialized algebra acts (P'-weights at
    /// q = ε, everything at t = 1).
    pub space: Vec<usize>,
    /// (highest weight, multiplicity); dual weights at q = ε.
    pub decomposition: Vec<(Weight, i64)>,
    /// Character of `space`, in dual weights at q = ε.
    pub character: CharacterPoly,
    /// Dual-weight character of the gated subspace V' (q = ε only).
    pub gated_character: CharacterPoly,
    pub report: Report,
}

fn spec_t1(x: &Matrix) -> Result<Matrix> {
    x.try_map(QTFraction::specialize_t1)
}

fn spec_eps(x: &Matrix, r: i64) -> Result<Matrix> {
    x.try_map(|c| c.specialize_q_eps(r))
}

/// Gaussian binomial [n choose k]_x for x = q^a.
fn qbinom(n: i64, k: i64, a: i32) -> QTFraction {
    let mut num = QTFraction::one();
    let mut den = QTFraction::one();
    for j in 0..k {
        num = &num * &qn(n - j, a, 0);
        den = &den * &qn(j + 1, a, 0);
    }
    num.checked_div(&den).expect("nonzero")
}

/// Joint kernel dimension of the raising operators on each weight space.
fn highest_weights(ep: &[Matrix], space: &[usize], weights: &[Weight]) -> BTreeMap<Weight, i64> {
    let mut by_wt: BTreeMap<&Weight, Vec<usize>> = BTreeMap::new();
    for &v in space {
        by_wt.entry(&weights[v]).or_default().push(v);
    }
    let mut out = BTreeMap::new();
    for (w, vs) in by_wt {
        let mut rows: Dense = Vec::new();
        for x in ep {
            let targets: Vec<usize> = {
                let mut t: Vec<usize> = vs.iter().flat_map(|&v| x.col(v).keys().copied()).collect();
                t.sort();
                t.dedup();
                t
            };
            for r in targets {
                rows.push(vs.iter().map(|&v| x.get(r, v)).collect());
            }
        }
        let k = vs.len() as i64 - rank(&rows) as i64;
        if k > 0 {
            out.insert(w.clone(), k);
        }
    }
    out
}

/// Specializes at t = 1 or q = ε and checks the resulting relations.
pub fn specialize_module(m: &RepModule, which: Which) -> Result<Specialization> {
    match which {
        Which::T1 => specialize_t1_module(m),
        Which::QEps => specialize_eps_module(m),
    }
}

fn specialize_t1_module(m: &RepModule) -> Result<Specialization> {
    let p = &m.pres;
    let n = p.rank();
    let name = format!("{}|t=1", m.name);
    let mut rep = Report::new();
    let mut ep = Vec::new();
    let mut em = Vec::new();
    for i in 0..n {
        let mut a = spec_t1(&m.xp[i])?;
        let mut b = spec_t1(&m.xm[i])?;
        if p.kinds[i] == NodeKind::G1 {
            let d = lf(qdiff(1, 0)).inv()?;
            a = a.scale(&d);
            b = b.scale(&d);
        }
        ep.push(a);
        em.push(b);
    }
    let dim = m.dim();
    let idx: Vec<usize> = (0..dim).collect();
    for i in 0..n {
        for j in 0..n {
            let res = par_map(&idx, |&v| {
                let e = sv_unit(v);
                let lhs = sv_sub(&ep[i].apply(&em[j].apply(&e)), &em[j].apply(&ep[i].apply(&e)));
                let target = if i == j {
                    let r = p.r(i) as i32;
                    let w = m.weights[v].0[i];
                    super::linalg::sv_scale(&qn(w, r, 0), &e)
                } else {
                    SVec::new()
                };
                witness(&sv_sub(&lhs, &target), &m.labels)
            });
            let id = if i == j {
                format!("bracket_t1[{}]", i + 1)
            } else {
                format!("mixed_t1[{},{}]", i + 1, j + 1)
            };
            for (v, w) in res.into_iter().enumerate() {
                rep.check(&name, &id, &m.labels[v], w);
            }
        }
    }
    // quantum Serre relations
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let nn = 1 - p.cartan[i][j];
            let r = p.r(i) as i32;
            for (sign, x) in [("+", &ep), ("-", &em)] {
                let mut s = Matrix::zero(dim, dim);
                for k in 0..=nn {
                    let term = x[i].pow((nn - k) as usize).mul(&x[j]).mul(&x[i].pow(k as usize));
                    let mut c = qbinom(nn, k, r);
                    if k % 2 == 1 {
                        c = -&c;
                    }
                    s = s.add(&term.scale(&c));
                }
                for v in 0..dim {
                    rep.check(
                        &name,
                        &format!("serre_t1{sign}[{},{}]", i + 1, j + 1),
                        &m.labels[v],
                        witness(s.col(v), &m.labels),
                    );
                }
            }
        }
    }
    let hw = highest_weights(&ep, &idx, &m.weights);
    Ok(Specialization {
        which: Which::T1,
        module: name,
        ep,
        em,
        space: idx,
        decomposition: hw.into_iter().collect(),
        character: m.character(),
        gated_character: CharacterPoly::zero(),
        report: rep,
    })
}

fn cyc(x: &QTFraction) -> Option<CycInt> {
    x.as_laurent()?.as_constant()
}

fn specialize_eps_module(m: &RepModule) -> Result<Specialization> {
    let p = &m.pres;
    let n = p.rank();
    let r = p.lacing();
    let name = format!("{}|q=eps", m.name);
    let shorts = p.short_nodes();
    if shorts.len() > 1 {
        return Err(Error::Gate("q = ε needs at most one short node".into()));
    }
    let mut rep = Report::new();
    let dim = m.dim();
    let space: Vec<usize> = (0..dim).filter(|&v| p.datum.in_p_prime(&m.weights[v])).collect();
    let eps = CycInt::eps(r);
    let k_at = |i: usize, w: &Weight| -> Result<CycInt> {
        cyc(&m2(p.k2(i, w), 0).specialize_q_eps(r)?).ok_or(Error::HalfIntegral)
    };
    let one = CycInt::one();
    let t = |b2: i64| QTLaurent::mono2(0, b2 as i32);
    let mut ep = Vec::new();
    let mut em = Vec::new();
    // gated subspace V' in short-node coordinates
    let mut gated: Option<(usize, Vec<usize>)> = None;
    for i in 0..n {
        let kind = p.kinds[i];
        let xp = spec_eps(&m.xp[i], r)?;
        let xm = spec_eps(&m.xm[i], r)?;
        match kind {
            NodeKind::A1 | NodeKind::C1 | NodeKind::LG1 => {
                for &v in &space {
                    let k = k_at(i, &m.weights[v])?;
                    rep.assert_true(&name, &format!("gate_K2[{}]", i + 1), &m.labels[v], &k * &k == one, format!("K = {k}"));
                }
                ep.push(xp);
                em.push(xm);
            }
            NodeKind::B1 => {
                let sb = m.short[i].as_ref().ok_or_else(|| Error::Gate("missing η data".into()))?;
                let mut vprime = Vec::new();
                for k in 0..sb.len() {
                    let w = m.s_weight(sb, k).ok_or_else(|| Error::Gate("η basis not graded".into()))?;
                    let kk = k_at(i, &w)?;
                    let pc = sb.parity(k) * sb.c[k];
                    let kq = &kk * &CycInt::zeta(2 * r as u8, pc);
                    let ok = &kk * &kk == one && kq == eps;
                    if sb.parity(k) == 1 {
                        if !ok {
                            return Err(Error::Gate(format!(
                                "K^2 = 1, K q^(PC) = eps fails on {} (K = {kk}, K q^(PC) = {kq})",
                                sb.labels[k]
                            )));
                        }
                        vprime.push(k);
                        rep.assert_true(&name, &format!("gate[{}]", i + 1), &sb.labels[k], true, String::new());
                    } else {
                        rep.info(&name, &format!("gate[{}]", i + 1), &sb.labels[k], format!("outside V'; gate holds: {ok}"));
                    }
                }
                let d = lf(qdiff(0, 1)).inv()?;
                ep.push(xp.mul(&xp).scale(&(-&d)));
                em.push(xm.mul(&xm).scale(&d));
                gated = Some((i, vprime));
            }
            NodeKind::G1 => {
                let sb = m.short[i].as_ref().ok_or_else(|| Error::Gate("missing η data".into()))?;
                let mut vprime = Vec::new();
                let mut sign: Option<CycInt> = None;
                for k in 0..sb.len() {
                    if sb.eta[k].rem_euclid(3) != 0 {
                        continue;
                    }
                    let w = m.s_weight(sb, k).ok_or_else(|| Error::Gate("η basis not graded".into()))?;
                    let kk = k_at(i, &w)?;
                    let qc = CycInt::zeta(12, 2 * sb.c[k]);
                    let s = sign.get_or_insert_with(|| kk.clone()).clone();
                    let ok = (s == one || s == CycInt::int(-1)) && kk == s && qc == &s * &eps;
                    if !ok {
                        return Err(Error::Gate(format!(
                            "K = (-1)^m, q^C = (-1)^m eps fails on {} (K = {kk}, q^C = {qc})",
                            sb.labels[k]
                        )));
                    }
                    rep.assert_true(&name, &format!("gate[{}]", i + 1), &sb.labels[k], true, String::new());
                    vprime.push(k);
                }
                let m_odd = sign.as_ref().is_some_and(|s| *s != one);
                let e = |k: i64| QTLaurent::cyc(CycInt::zeta(12, 2 * k));
                // (1 - ε⁴)², (1 + ε⁴ + 2ε⁵)
                let a = &(&QTLaurent::one() - &e(4)) * &(&QTLaurent::one() - &e(4));
                let b = &(&QTLaurent::one() + &e(4)) + &e(5).scale(&CycInt::int(2));
                let dp = QTFraction::new(QTLaurent::one(), &a * &qdiff(0, 3))?;
                let sgn = if m_odd { 1 } else { -1 };
                let dm = QTFraction::new(QTLaurent::int(sgn), &b * &qdiff(0, -3))?;
                ep.push(xp.pow(3).scale(&dp));
                em.push(xm.pow(3).scale(&dm));
                gated = Some((i, vprime));
            }
        }
    }
    // relations of the specialized algebra on the P'-part
    for i in 0..n {
        for j in 0..n {
            let res = par_map(&space, |&v| {
                let e = sv_unit(v);
                let lhs = sv_sub(&ep[i].apply(&em[j].apply(&e)), &em[j].apply(&ep[i].apply(&e)));
                let target = if i == j {
                    let w = &m.weights[v];
                    let kt = p.kt2(i, w).expect("checked in verify");
                    let val = match p.kinds[i] {
                        NodeKind::B1 => QTFraction::new(&t(2 * kt) - &t(-2 * kt), qdiff(0, 2)),
                        NodeKind::G1 => QTFraction::new(&t(-2 * kt) - &t(2 * kt), qdiff(0, 3)),
                        _ => {
                            let k = p.k2(i, w);
                            let num = &QTLaurent::mono2(k as i32, kt as i32) - &QTLaurent::mono2(-k as i32, -kt as i32);
                            QTFraction::new(num, qdiff(p.r(i) as i32, 1))
                                .and_then(|f| f.specialize_q_eps(r))
                        }
                    }
                    .expect("nonzero denominator");
                    super::linalg::sv_scale(&val, &e)
                } else {
                    SVec::new()
                };
                witness(&sv_sub(&lhs, &target), &m.labels)
            });
            let id = if i == j {
                format!("bracket_eps[{}]", i + 1)
            } else {
                format!("mixed_eps[{},{}]", i + 1, j + 1)
            };
            for (k, w) in res.into_iter().enumerate() {
                rep.check(&name, &id, &m.labels[space[k]], w);
            }
        }
    }
    // stability of V' and its character
    let mut gated_character = CharacterPoly::zero();
    if let Some((i, vprime)) = &gated {
        let sb = m.short[*i].as_ref().expect("short basis");
        let inside: std::collections::BTreeSet<usize> = vprime.iter().copied().collect();
        for &k in vprime {
            let mut bad = None;
            for x in ep.iter().chain(&em) {
                let img = sb.to_s(x);
                if let Some(&a) = img.col(k).keys().find(|a| !inside.contains(a)) {
                    bad = Some(format!("leaves V' at {}", sb.labels[a]));
                }
            }
            rep.check(&name, "gated_stable", &sb.labels[k], bad);
            let w = m.s_weight(sb, k).expect("graded");
            match p.datum.pi_weight(&w) {
                Some(d) => gated_character.add_term(d, 1),
                None => rep.check(&name, "gated_in_p_prime", &sb.labels[k], Some(format!("weight {w}"))),
            }
        }
    }
    let hw = highest_weights(&ep, &space, &m.weights);
    let mut dec: BTreeMap<Weight, i64> = BTreeMap::new();
    for (w, k) in hw {
        *dec.entry(p.datum.pi_weight(&w).expect("P' weight")).or_insert(0) += k;
    }
    let mut character = CharacterPoly::zero();
    for &v in &space {
        character.add_term(p.datum.pi_weight(&m.weights[v]).expect("P' weight"), 1);
    }
    Ok(Specialization {
        which: Which::QEps,
        module: name,
        ep,
        em,
        space,
        decomposition: dec.into_iter().collect(),
        character,
        gated_character,
        report: rep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qt_algebra::qtint;

    #[test]
    fn b1_modules_satisfy_all_relations() {
        for n in 0..=9 {
            let m = vn_b1(n);
            let rep = verify_elementary(&m, NodeKind::B1);
            assert!(rep.passed(), "n = {n}: {:?}", rep.failures());
            assert!(rep.with_prefix("hun+").count() == (n + 1) as usize);
        }
    }

    #[test]
    fn b1_small_instances() {
        let m = build_vn_b1(0);
        assert_eq!(m.dim(), 1);
        assert!(m.xp[0].is_zero() && m.xm[0].is_zero());
        let m = build_vn_b1(1);
        // X⁺v1 = [2]_{qt}v0, X⁺v2 = [1]_q v1, X⁻v0 = [1]_q v1, X⁻v1 = [2]_{qt}v2
        assert_eq!(m.xp[0].get(0, 1), lf(qtint(2, 1, 1)));
        assert_eq!(m.xp[0].get(1, 2), QTFraction::one());
        assert_eq!(m.xm[0].get(1, 0), QTFraction::one());
        assert_eq!(m.xm[0].get(2, 1), lf(qtint(2, 1, 1)));
        assert_eq!(m.xp[0].entries().count() + m.xm[0].entries().count(), 4);
    }

    #[test]
    fn g1_modules_satisfy_all_relations() {
        for n in 0..=8 {
            let m = vn_g1(n);
            let rep = verify_elementary(&m, NodeKind::G1);
            assert!(rep.passed(), "n = {n}: {:?}", rep.failures());
        }
        assert!(build_vn_g1(4).is_err());
        assert_eq!(build_vn_g1(3).unwrap().dim(), 4);
    }

    #[test]
    fn mutation_is_detected() {
        let mut m = build_vn_b1(2);
        m.perturb(true, 0, 1, 2, &QTFraction::int(2));
        let rep = verify_elementary(&m, NodeKind::B1);
        let ids: Vec<&str> = rep.failures().iter().map(|e| e.relation_id.as_str()).collect();
        assert!(ids.contains(&"hun+[1]") && ids.contains(&"hun-[1]"), "{ids:?}");
        let mut g = build_vn_g1(3).unwrap();
        g.perturb(false, 0, 2, 1, &lf(QTLaurent::t()));
        assert!(!verify_elementary(&g, NodeKind::G1).passed());
    }

    #[test]
    fn standard_modules() {
        for kind in [NodeKind::A1, NodeKind::C1, NodeKind::LG1] {
            for n in 0..5 {
                let m = standard_module(kind, n).unwrap();
                assert!(verify_elementary(&m, kind).passed());
                let t1 = specialize_module(&m, Which::T1).unwrap();
                assert!(t1.report.passed(), "{kind:?} {n}");
            }
        }
        let m = standard_module(NodeKind::C1, 3).unwrap();
        let e = specialize_module(&m, Which::QEps).unwrap();
        assert!(e.report.passed(), "{:?}", e.report.failures());
        assert_eq!(e.decomposition, vec![(Weight(vec![3]), 1)]);
    }

    #[test]
    fn b1_specializations() {
        for p in 0..=6 {
            let m = build_vn_b1(p);
            let t1 = specialize_module(&m, Which::T1).unwrap();
            assert!(t1.report.passed());
            assert_eq!(t1.decomposition, vec![(Weight(vec![2 * p]), 1)]);
            let e = specialize_module(&m, Which::QEps).unwrap();
            assert!(e.report.passed(), "{:?}", e.report.failures());
            assert_eq!(e.gated_character.dim(), p + 1);
            let mut want = vec![(Weight(vec![p]), 1)];
            if p > 0 {
                want.insert(0, (Weight(vec![p - 1]), 1));
            }
            assert_eq!(e.decomposition, want);
        }
        for n in [1, 3, 5] {
            assert!(matches!(specialize_module(&vn_b1(n), Which::QEps), Err(Error::Gate(_))));
        }
    }

    #[test]
    fn g1_specializations() {
        for m3 in 0..=4 {
            let n = 3 * m3;
            let m = build_vn_g1(n).unwrap();
            let t1 = specialize_module(&m, Which::T1).unwrap();
            assert!(t1.report.passed());
            let e = specialize_module(&m, Which::QEps).unwrap();
            assert!(e.report.passed(), "{:?}", e.report.failures());
            assert_eq!(e.gated_character.dim(), m3 + 1);
            assert_eq!(e.decomposition, vec![(Weight(vec![m3]), 1)]);
        }
        assert!(matches!(specialize_module(&vn_g1(4), Which::QEps), Err(Error::Gate(_))));
    }

    #[test]
    fn g1_p_values() {
        // P₊ = 1, 0, -1 and P₋ = -1, 1, 0 on v_{3j}, v_{3j+1}, v_{3j+2}
        let f = |e: i64| [1, 0, -1][e as usize];
        for j in 0..6i64 {
            let eta = -j;
            let (pp, pm) = (f((-eta).rem_euclid(3)), f((2 - eta).rem_euclid(3)));
            assert_eq!((pp, pm), [(1, -1), (0, 1), (-1, 0)][(j % 3) as usize]);
        }
    }

    #[test]
    fn verma_constraint() {
        for n in 0..6 {
            let p = n / 2;
            let base = VermaParams {
                lam: (2 * n, 0),
                lam_t: (0, 2 * p),
                e: 1,
                a2: 2 * (n + 1),
                at2: 2 * p + 1,
            };
            assert!(verma_consistency(&base));
            assert!(verma_consistency(&VermaParams { e: -1, a2: -2 * (n + 1), at2: -(2 * p + 1), ..base }));
            assert!(verma_consistency(&VermaParams { a2: -2 * (n + 1), at2: 7, ..base }));
            assert!(!verma_consistency(&VermaParams { at2: 2 * p + 3, ..base }));
        }
    }

    proptest::proptest! {
        #[test]
        fn generic_verma_parameters_fail(l in -8i64..8, lt in -8i64..8, a in -9i64..9, at in -9i64..9) {
            // generic: neither EA = -(n+1) nor the (n+1, p+1/2) pair
            proptest::prop_assume!(a != -(l + 2) && !(a == l + 2 && at == lt + 1));
            let v = VermaParams { lam: (l, 0), lam_t: (0, lt), e: 1, a2: a, at2: at };
            proptest::prop_assert!(!verma_consistency(&v));
        }
    }
}
