//! Noncommutative polynomials in E1, E2, F1, Q^{±1} over QTFraction, with
//! rewriting to the normal order Q^k · (word in E1, E2) · F1^m. Used to
//! test a candidate t-deformation of the B2 Serre relations.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::Report;
use crate::qt_algebra::{qdiff, qint, qsum, QTFraction, QTLaurent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Q,
    Qi,
    E1,
    E2,
    F1,
}

use Letter::*;

impl Letter {
    fn name(self) -> &'static str {
        match self {
            Q => "Q",
            Qi => "Q⁻¹",
            E1 => "E1",
            E2 => "E2",
            F1 => "F1",
        }
    }
}

pub type Word = Vec<Letter>;

/// Linear combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NcPoly(pub BTreeMap<Word, QTFraction>);

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly::default()
    }

    pub fn word(w: &[Letter]) -> Self {
        NcPoly::term(QTFraction::one(), w)
    }

    pub fn term(c: QTFraction, w: &[Letter]) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(w.to_vec(), c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add_term(&mut self, w: Word, c: QTFraction) {
        if c.is_zero() {
            return;
        }
        let v = match self.0.remove(&w) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.0.insert(w, v);
        }
    }

    pub fn add(&self, o: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &o.0 {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &NcPoly) -> NcPoly {
        self.add(&o.scale(&QTFraction::int(-1)))
    }

    pub fn scale(&self, c: &QTFraction) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, x) in &self.0 {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, o: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, x * y);
            }
        }
        out
    }

    pub fn coeff(&self, w: &[Letter]) -> QTFraction {
        self.0.get(w).cloned().unwrap_or_else(QTFraction::zero)
    }

    pub fn map_coeffs(&self, f: impl Fn(&QTFraction) -> crate::Result<QTFraction>) -> crate::Result<NcPoly> {
        let mut out = NcPoly::zero();
        for (w, c) in &self.0 {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl std::fmt::Display for NcPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(w, c)| {
                let w: Vec<&str> = w.iter().map(|l| l.name()).collect();
                format!("({c}){}", w.join(""))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn mono(a: i32, b: i32) -> QTFraction {
    QTFraction::from(QTLaurent::mono(a, b))
}

/// Q-weight of an E/F letter: x Q = q^a t^b Q x.
fn q_shift(l: Letter) -> (i32, i32) {
    match l {
        E1 => (-4, -2),
        E2 => (2, 1),
        F1 => (4, 2),
        _ => unreachable!(),
    }
}

/// Rewrite of an out-of-order adjacent pair, as (coefficient, replacement).
fn rule(a: Letter, b: Letter) -> Option<Vec<(QTFraction, Word)>> {
    match (a, b) {
        (Q, Qi) | (Qi, Q) => Some(vec![(QTFraction::one(), vec![])]),
        (E1 | E2 | F1, Q) => {
            let (x, y) = q_shift(a);
            Some(vec![(mono(x, y), vec![Q, a])])
        }
        (E1 | E2 | F1, Qi) => {
            let (x, y) = q_shift(a);
            Some(vec![(mono(-x, -y), vec![Qi, a])])
        }
        (F1, E2) => Some(vec![(QTFraction::one(), vec![E2, F1])]),
        (F1, E1) => {
            let d = QTFraction::from(qdiff(2, 1)).inv().expect("nonzero");
            Some(vec![
                (QTFraction::one(), vec![E1, F1]),
                (-&d, vec![Q]),
                (d, vec![Qi]),
            ])
        }
        _ => None,
    }
}

/// Normal order by repeated rewriting; `leftmost` picks which violation to
/// rewrite first.
pub fn normal_form(p: &NcPoly, leftmost: bool) -> NcPoly {
    let mut todo: Vec<(Word, QTFraction)> = p.0.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
    let mut out = NcPoly::zero();
    while let Some((w, c)) = todo.pop() {
        let mut pos = (0..w.len().saturating_sub(1)).filter(|&i| rule(w[i], w[i + 1]).is_some());
        let at = if leftmost { pos.next() } else { pos.next_back() };
        match at {
            None => out.add_term(w, c),
            Some(i) => {
                for (k, r) in rule(w[i], w[i + 1]).expect("violation") {
                    let mut v = w[..i].to_vec();
                    v.extend(r);
                    v.extend_from_slice(&w[i + 2..]);
                    todo.push((v, &c * &k));
                }
            }
        }
    }
    out
}

fn fr(l: QTLaurent) -> QTFraction {
    QTFraction::from(l)
}

/// X2 X1² − (q²t + q⁻²t⁻¹) X1X2X1 + X1²X2.
pub fn candidate_short() -> NcPoly {
    NcPoly::word(&[E2, E1, E1])
        .sub(&NcPoly::term(fr(qsum(2, 1)), &[E1, E2, E1]))
        .add(&NcPoly::word(&[E1, E1, E2]))
}

/// X1 X2³ − t[3]_q X2X1X2² + t⁻²[3]_q X2²X1X2 − t⁻¹ X2³X1.
pub fn candidate_long() -> NcPoly {
    let c3 = fr(qint(3));
    NcPoly::word(&[E1, E2, E2, E2])
        .sub(&NcPoly::term(&mono(0, 1) * &c3, &[E2, E1, E2, E2]))
        .add(&NcPoly::term(&mono(0, -2) * &c3, &[E2, E2, E1, E2]))
        .sub(&NcPoly::term(mono(0, -1), &[E2, E2, E2, E1]))
}

fn at_eps(p: &NcPoly) -> crate::Result<NcPoly> {
    p.map_coeffs(|c| c.specialize_q_eps(2))
}

fn at_t1(p: &NcPoly) -> crate::Result<NcPoly> {
    p.map_coeffs(QTFraction::specialize_t1)
}

fn w(l: &[Letter]) -> NcPoly {
    NcPoly::word(l)
}

/// C2 Serre relation in X1 and 𝒳2 = X2²: X1𝒳2² − (t² + t⁻²)𝒳2X1𝒳2 + 𝒳2²X1.
fn c2_long() -> NcPoly {
    w(&[E1, E2, E2, E2, E2])
        .sub(&NcPoly::term(fr(qsum(0, 2)), &[E2, E2, E1, E2, E2]))
        .add(&w(&[E2, E2, E2, E2, E1]))
}

/// The other C2 Serre relation: 𝒳2X1³ − [3]_t X1𝒳2X1² + [3]_t X1²𝒳2X1 − X1³𝒳2.
fn c2_short() -> NcPoly {
    let c = fr(crate::qt_algebra::qtint(3, 0, 1));
    w(&[E2, E2, E1, E1, E1])
        .sub(&NcPoly::term(c.clone(), &[E1, E2, E2, E1, E1]))
        .add(&NcPoly::term(c, &[E1, E1, E2, E2, E1]))
        .sub(&w(&[E1, E1, E1, E2, E2]))
}

/// The candidate Serre relations do not survive bracketing with F1: their
/// consequence relates Q X2³ and Q⁻¹ X2³, which holds in neither limit.
pub fn failed_serre_demo() -> Report {
    let mut rep = Report::new();
    let name = "faux_serre";
    let (s, s2) = (candidate_short(), candidate_long());
    let one = QTFraction::one();
    let t = |a: i32| mono(0, a);

    // t = 1 recovers the U_q(B2) Serre relations
    let serre_b2 = w(&[E2, E1, E1]).sub(&NcPoly::term(fr(qsum(2, 0)), &[E1, E2, E1])).add(&w(&[E1, E1, E2]));
    let long_b2 = w(&[E1, E2, E2, E2])
        .sub(&NcPoly::term(fr(qint(3)), &[E2, E1, E2, E2]))
        .add(&NcPoly::term(fr(qint(3)), &[E2, E2, E1, E2]))
        .sub(&w(&[E2, E2, E2, E1]));
    let ok = at_t1(&s).ok() == at_t1(&serre_b2).ok() && at_t1(&s2).ok() == at_t1(&long_b2).ok();
    rep.assert_true(name, "t1_limit", "S, S'", ok, "t = 1 limits differ from the U_q(B2) Serre relations".into());

    // at q = ε both C2 Serre relations follow
    match (at_eps(&s), at_eps(&s2)) {
        (Ok(se), Ok(s2e)) => {
            let x1 = w(&[E1]);
            let x2 = w(&[E2]);
            let lhs = s2e.mul(&x2).sub(&x2.mul(&s2e).scale(&t(1)));
            let d = lhs.sub(&c2_long());
            rep.check(name, "c2_serre_long", "S'X2 - tX2S'", (!d.is_zero()).then(|| d.to_string()));
            let a = fr(qtint3_t());
            let b = fr(qsum(0, 1));
            let combo = x2
                .mul(&se)
                .mul(&x1)
                .sub(&x1.mul(&x2).mul(&se).scale(&a))
                .add(&se.mul(&x2).mul(&x1).scale(&a))
                .sub(&x1.mul(&se).mul(&x2))
                .sub(&x2.mul(&x1).mul(&se).scale(&b))
                .add(&se.mul(&x1).mul(&x2).scale(&b));
            let d = combo.sub(&c2_short());
            rep.check(name, "c2_serre_short", "six-term combination of S", (!d.is_zero()).then(|| d.to_string()));
        }
        (Err(e), _) | (_, Err(e)) => rep.check(name, "c2_serre", "q = ε", Some(e.to_string())),
    }

    // [S', F1] = A·Q X2³ − B·Q⁻¹ X2³ in normal order
    let f1 = w(&[F1]);
    let br = normal_form(&s2.mul(&f1).sub(&f1.mul(&s2)), true);
    let a = br.coeff(&[Q, E2, E2, E2]);
    let b = -&br.coeff(&[Qi, E2, E2, E2]);
    let only = br.0.keys().all(|k| k == &vec![Q, E2, E2, E2] || k == &vec![Qi, E2, E2, E2]);
    rep.assert_true(name, "bracket_shape", "[S', F1]", only, br.to_string());
    let d = QTFraction::from(qdiff(2, 1));
    // derived closed forms, up to the common 1/(q²t − q⁻²t⁻¹)
    let want_a = &fr(&(&(&QTLaurent::one() - &QTLaurent::mono(0, 2)) * &(&QTLaurent::one() + &QTLaurent::mono(2, 0))) * &(&QTLaurent::one() + &QTLaurent::mono(4, 0))) / &d;
    let want_b = &(&(&mono(-2, 0) * &(&one + &mono(-2, 0))) * &(&mono(0, -4) - &one)) / &d;
    let ratio = &a / &b;
    rep.assert_true(name, "bracket_coefficients", "[S', F1]", ratio == &want_a / &want_b, format!("A/B = {ratio}"));
    rep.info(name, "bracket_relation", "[S', F1]", format!("({a}) Q X2³ = ({b}) Q⁻¹ X2³"));

    // the printed form K X2³ q²(1+q²)(t⁻⁴−1) = (1−t²)(1−q⁻²)²(1+q⁻²) K⁻¹ X2³
    let pl = &(&mono(2, 0) * &(&one + &mono(2, 0))) * &(&mono(0, -4) - &one);
    let pr = &(&(&one - &mono(0, 2)) * &(&(&one - &mono(-2, 0)) * &(&one - &mono(-2, 0)))) * &(&one + &mono(-2, 0));
    let printed = &pr / &pl;
    rep.assert_true(
        name,
        "printed_bracket",
        "[S', F1]",
        ratio == printed,
        format!("derived A/B = {ratio}, printed {printed}"),
    );

    // both sides vanish at t = 1 and at q = ε, so the relation only bites in between
    let vanish = |x: &QTFraction| {
        let t1 = (x * &d).specialize_t1().map(|v| v.is_zero()).unwrap_or(false);
        let e = (x * &d).specialize_q_eps(2).map(|v| v.is_zero()).unwrap_or(false);
        t1 && e
    };
    rep.assert_true(name, "degenerates", "t = 1 and q = ε", vanish(&a) && vanish(&b), format!("A = {a}, B = {b}"));
    rep.assert_true(name, "obstruction", "generic (q, t)", !a.is_zero() && !b.is_zero(), "bracket vanishes".into());

    rep.extend(confluence(100, 0x5e77e));
    rep
}

fn qtint3_t() -> QTLaurent {
    crate::qt_algebra::qtint(3, 0, 1)
}

/// Leftmost and rightmost rewriting agree on random words.
pub fn confluence(n: usize, seed: u64) -> Report {
    let mut rep = Report::new();
    let mut rng = StdRng::seed_from_u64(seed);
    let letters = [Q, Qi, E1, E2, F1];
    let mut bad = Vec::new();
    for k in 0..n {
        let len = rng.gen_range(1..=6);
        let word: Word = (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
        let p = NcPoly::word(&word);
        if normal_form(&p, true) != normal_form(&p, false) {
            bad.push(k);
        }
    }
    rep.assert_true("faux_serre", "confluence", &format!("{n} random words"), bad.is_empty(), format!("{bad:?}"));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rewriting_basics() {
        let p = NcPoly::word(&[E2, Q, Qi]);
        assert_eq!(normal_form(&p, true), NcPoly::word(&[E2]));
        let r = normal_form(&NcPoly::word(&[F1, E1]), true);
        assert_eq!(r.0.len(), 3);
        assert_eq!(normal_form(&NcPoly::word(&[E1, E2, F1]), true), NcPoly::word(&[E1, E2, F1]));
        assert!(confluence(100, 1).passed());
    }

    #[test]
    fn demo_report() {
        let rep = failed_serre_demo();
        let fails: Vec<&str> = rep.failures().iter().map(|f| f.relation_id.as_str()).collect();
        assert_eq!(fails, ["printed_bracket"]);
    }
}
