use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use super::cyc::CycInt;
use super::gcd::{b_div_exact, b_gcd, BPoly};
use crate::error::{Error, Result};

/// Laurent polynomial in q^{1/2}, t^{1/2}. The key (a, b) stands for
/// q^{a/2} t^{b/2}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QTLaurent {
    terms: BTreeMap<(i32, i32), CycInt>,
}

impl QTLaurent {
    pub fn zero() -> Self {
        QTLaurent::default()
    }

    pub fn one() -> Self {
        QTLaurent::int(1)
    }

    pub fn int(n: i128) -> Self {
        QTLaurent::cyc(CycInt::int(n))
    }

    pub fn cyc(c: CycInt) -> Self {
        QTLaurent::term(0, 0, c)
    }

    /// c q^{a/2} t^{b/2}.
    pub fn term(a2: i32, b2: i32, c: CycInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a2, b2), c);
        }
        QTLaurent { terms }
    }

    /// q^a t^b with integer exponents.
    pub fn mono(a: i32, b: i32) -> Self {
        QTLaurent::term(2 * a, 2 * b, CycInt::one())
    }

    /// q^{a/2} t^{b/2}.
    pub fn mono2(a2: i32, b2: i32) -> Self {
        QTLaurent::term(a2, b2, CycInt::one())
    }

    pub fn q() -> Self {
        QTLaurent::mono(1, 0)
    }

    pub fn t() -> Self {
        QTLaurent::mono(0, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &CycInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(CycInt::is_one)
    }

    /// The single term (a2, b2, c) when this is a monomial.
    pub fn as_monomial(&self) -> Option<(i32, i32, &CycInt)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.terms.iter().next().map(|(&(a, b), c)| (a, b, c))
    }

    /// Constant coefficient when there is no other term.
    pub fn as_constant(&self) -> Option<CycInt> {
        match self.terms.len() {
            0 => Some(CycInt::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, key: (i32, i32), c: CycInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn scale(&self, c: &CycInt) -> QTLaurent {
        let mut out = QTLaurent::zero();
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    /// Multiplication by q^{a/2} t^{b/2}.
    pub fn shift(&self, a2: i32, b2: i32) -> QTLaurent {
        QTLaurent {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a + a2, b + b2), c.clone()))
                .collect(),
        }
    }

    /// Non-negative powers of anything, negative powers of monomials.
    pub fn pow(&self, e: i32) -> Option<QTLaurent> {
        if e < 0 {
            let (a, b, c) = self.as_monomial()?;
            let unit = match c.as_int() {
                Some(1) => 1,
                Some(-1) => -1,
                _ => return None,
            };
            let sign = if e % 2 == 0 { 1 } else { unit };
            return Some(QTLaurent::term(a * e, b * e, CycInt::int(sign)));
        }
        let mut out = QTLaurent::one();
        for _ in 0..e {
            out = &out * self;
        }
        Some(out)
    }

    pub fn min_exponents(&self) -> Option<(i32, i32)> {
        let a = self.terms.keys().map(|k| k.0).min()?;
        let b = self.terms.keys().map(|k| k.1).min()?;
        Some((a, b))
    }

    pub fn max_exponents(&self) -> Option<(i32, i32)> {
        let a = self.terms.keys().map(|k| k.0).max()?;
        let b = self.terms.keys().map(|k| k.1).max()?;
        Some((a, b))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.as_int().is_some())
    }

    /// Gcd of all integer coordinates of all coefficients.
    pub fn content(&self) -> i128 {
        self.terms
            .values()
            .fold(0i128, |g, c| num_integer::gcd(g, c.content()))
    }

    pub fn div_int(&self, d: i128) -> Option<QTLaurent> {
        let mut out = QTLaurent::zero();
        for (k, v) in &self.terms {
            out.terms.insert(*k, v.div_int(d)?);
        }
        Some(out)
    }

    /// Sign of the coefficient of the lex-largest term.
    pub fn leading_sign(&self) -> i32 {
        match self.terms.values().next_back() {
            Some(c) => {
                let lead = c.coeffs().iter().rev().find(|&&x| x != 0).copied();
                if lead.is_some_and(|x| x < 0) {
                    -1
                } else {
                    1
                }
            }
            None => 0,
        }
    }

    /// Collapse t ↦ 1.
    pub fn specialize_t1(&self) -> QTLaurent {
        let mut out = QTLaurent::zero();
        for (&(a, _), c) in &self.terms {
            out.add_term((a, 0), c.clone());
        }
        out
    }

    /// Substitute q ↦ exp(πi/r). Every q-exponent must be an integer.
    pub fn specialize_q_eps(&self, r: i64) -> Result<QTLaurent> {
        let (order, step) = match r {
            1 => (1u8, 0i64),
            2 => (4, 1),
            3 => (12, 2),
            _ => return Err(Error::Parse(format!("no root of unity for lacing {r}"))),
        };
        let mut out = QTLaurent::zero();
        for (&(a, b), c) in &self.terms {
            if a % 2 != 0 {
                return Err(Error::HalfIntegral);
            }
            let z = CycInt::zeta(order, step * (a / 2) as i64);
            out.add_term((0, b), c * &z);
        }
        Ok(out)
    }

    /// Substitute q ↦ q^{m}, t ↦ t^{n} on the doubled grid.
    pub fn substitute_powers(&self, m: i32, n: i32) -> QTLaurent {
        let mut out = QTLaurent::zero();
        for (&(a, b), c) in &self.terms {
            out.add_term((a * m, b * n), c.clone());
        }
        out
    }

    fn to_bpoly(&self, base: (i32, i32), step: (i32, i32)) -> BPoly {
        let ma = self.max_exponents().map_or(base.0, |m| m.0);
        let mut p: BPoly = vec![vec![]; ((ma - base.0) / step.0 + 1).max(0) as usize];
        for (&(a, b), c) in &self.terms {
            let row = &mut p[((a - base.0) / step.0) as usize];
            let j = ((b - base.1) / step.1) as usize;
            if row.len() <= j {
                row.resize(j + 1, 0);
            }
            row[j] = c.as_int().expect("integral coefficients");
        }
        for row in p.iter_mut() {
            while row.last() == Some(&0) {
                row.pop();
            }
        }
        while p.last().is_some_and(|r| r.is_empty()) {
            p.pop();
        }
        p
    }

    fn from_bpoly(p: &BPoly, base: (i32, i32), step: (i32, i32)) -> QTLaurent {
        let mut out = QTLaurent::zero();
        for (i, row) in p.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                let e = (base.0 + step.0 * i as i32, base.1 + step.1 * j as i32);
                out.add_term(e, CycInt::int(c));
            }
        }
        out
    }

    /// Gcd up to units (signed monomials) for integral polynomials.
    pub fn gcd(&self, other: &QTLaurent) -> Option<QTLaurent> {
        if !self.is_integral() || !other.is_integral() {
            return None;
        }
        let base = |p: &QTLaurent| p.min_exponents().unwrap_or((0, 0));
        // both sides live in a sublattice of exponents, and so does the gcd
        let (ba, bb) = (base(self), base(other));
        let mut step = (0, 0);
        for (p, b) in [(self, ba), (other, bb)] {
            for &(x, y) in p.terms.keys() {
                step.0 = num_integer::gcd(step.0, x - b.0);
                step.1 = num_integer::gcd(step.1, y - b.1);
            }
        }
        let step = (step.0.max(1), step.1.max(1));
        let g = b_gcd(&self.to_bpoly(ba, step), &other.to_bpoly(bb, step))?;
        Some(QTLaurent::from_bpoly(&g, (0, 0), step))
    }

    /// Exact quotient self / d, for integral polynomials.
    pub fn div_exact(&self, d: &QTLaurent) -> Option<QTLaurent> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(QTLaurent::zero());
        }
        if let Some((a, b, c)) = d.as_monomial() {
            let k = c.as_int()?;
            return self.div_int(k).map(|p| p.shift(-a, -b));
        }
        if !self.is_integral() || !d.is_integral() {
            return None;
        }
        let (sa, sb) = self.min_exponents()?;
        let (da, db) = d.min_exponents()?;
        let q = b_div_exact(&self.to_bpoly((sa, sb), (1, 1)), &d.to_bpoly((da, db), (1, 1)))?;
        Some(QTLaurent::from_bpoly(&q, (sa - da, sb - db), (1, 1)))
    }

    /// Exact evaluation at rational q = qn/qd, t = tn/td (integer
    /// exponents, integral coefficients) as a reduced fraction.
    pub fn eval_rational(&self, q: (i128, i128), t: (i128, i128)) -> Option<(i128, i128)> {
        let pw = |(n, d): (i128, i128), e: i32| -> Option<(i128, i128)> {
            let (n, d) = if e < 0 { (d, n) } else { (n, d) };
            Some((n.checked_pow(e.unsigned_abs())?, d.checked_pow(e.unsigned_abs())?))
        };
        let mut acc = (0i128, 1i128);
        for (&(a, b), c) in &self.terms {
            if a % 2 != 0 || b % 2 != 0 {
                return None;
            }
            let c = c.as_int()?;
            let (qn, qd) = pw(q, a / 2)?;
            let (tn, td) = pw(t, b / 2)?;
            let n = c.checked_mul(qn)?.checked_mul(tn)?;
            let d = qd.checked_mul(td)?;
            acc = (
                acc.0.checked_mul(d)?.checked_add(n.checked_mul(acc.1)?)?,
                acc.1.checked_mul(d)?,
            );
            let g = num_integer::gcd(acc.0, acc.1).max(1);
            acc = (acc.0 / g, acc.1 / g);
        }
        if acc.1 < 0 {
            acc = (-acc.0, -acc.1);
        }
        Some(acc)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(&(a, b), c)| json!([a, b, c.to_json()]))
                .collect(),
        )
    }
}

fn fmt_exp(v: &str, e2: i32) -> String {
    match e2 {
        0 => String::new(),
        2 => v.to_string(),
        _ if e2 % 2 == 0 => format!("{v}^{}", e2 / 2),
        _ => format!("{v}^({e2}/2)"),
    }
}

impl fmt::Display for QTLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in self.terms.iter().rev() {
            let m = format!("{}{}", fmt_exp("q", a), fmt_exp("t", b));
            let (neg, body) = match c.as_int() {
                Some(n) if n < 0 => (true, CycInt::int(-n)),
                _ => (false, c.clone()),
            };
            let coef = if body.is_one() && !m.is_empty() {
                String::new()
            } else {
                body.to_string()
            };
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            write!(f, "{sep}{coef}{m}")?;
            first = false;
        }
        Ok(())
    }
}

impl Add for &QTLaurent {
    type Output = QTLaurent;
    fn add(self, o: &QTLaurent) -> QTLaurent {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl Sub for &QTLaurent {
    type Output = QTLaurent;
    fn sub(self, o: &QTLaurent) -> QTLaurent {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_term(*k, -v);
        }
        out
    }
}

impl Neg for &QTLaurent {
    type Output = QTLaurent;
    fn neg(self) -> QTLaurent {
        QTLaurent {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl Mul for &QTLaurent {
    type Output = QTLaurent;
    fn mul(self, o: &QTLaurent) -> QTLaurent {
        let mut out = QTLaurent::zero();
        for (&(a, b), x) in &self.terms {
            for (&(c, d), y) in &o.terms {
                out.add_term((a + c, b + d), x * y);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
pub(crate) use owned_ops;

owned_ops!(QTLaurent);
