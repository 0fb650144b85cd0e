use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde_json::{json, Value};

use super::cyc::CycInt;
use super::laurent::{owned_ops, QTLaurent};
use crate::error::{Error, Result};

/// Ratio of Laurent polynomials. Integral fractions are reduced by the
/// bivariate gcd; otherwise only monomial and integer content is removed.
/// Equality is by cross-multiplication either way.
#[derive(Clone, Debug)]
pub struct QTFraction {
    num: QTLaurent,
    den: QTLaurent,
}

impl QTFraction {
    pub fn new(num: QTLaurent, den: QTLaurent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QTFraction { num, den }.normalized())
    }

    pub fn zero() -> Self {
        QTFraction::from(QTLaurent::zero())
    }

    pub fn one() -> Self {
        QTFraction::from(QTLaurent::one())
    }

    pub fn int(n: i128) -> Self {
        QTFraction::from(QTLaurent::int(n))
    }

    pub fn num(&self) -> &QTLaurent {
        &self.num
    }

    pub fn den(&self) -> &QTLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The polynomial value when the denominator is a unit.
    pub fn as_laurent(&self) -> Option<QTLaurent> {
        self.den.is_one().then(|| self.num.clone())
    }

    pub fn inv(&self) -> Result<QTFraction> {
        QTFraction::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, o: &QTFraction) -> Result<QTFraction> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<QTFraction> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = QTFraction::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    fn normalized(mut self) -> QTFraction {
        if self.num.is_zero() {
            self.den = QTLaurent::one();
            return self;
        }
        if let Some((a, b, c)) = self.den.as_monomial() {
            if let Some(u @ (1 | -1)) = c.as_int() {
                let num = self.num.shift(-a, -b);
                self.num = if u < 0 { -num } else { num };
                self.den = QTLaurent::one();
                return self;
            }
        }
        if let Some(g) = self.num.gcd(&self.den) {
            if !g.is_one() {
                if let (Some(n), Some(d)) = (self.num.div_exact(&g), self.den.div_exact(&g)) {
                    self.num = n;
                    self.den = d;
                }
            }
        } else {
            let g = num_integer::gcd(self.num.content(), self.den.content());
            if g > 1 {
                self.num = self.num.div_int(g).expect("content divides");
                self.den = self.den.div_int(g).expect("content divides");
            }
        }
        self.tidy()
    }

    /// Monomial, sign and integer-constant cleanup, for fractions whose
    /// polynomial gcd is already trivial.
    fn tidy(mut self) -> QTFraction {
        if self.num.is_zero() {
            self.den = QTLaurent::one();
            return self;
        }
        let (a, b) = self.den.min_exponents().expect("nonzero denominator");
        self.num = self.num.shift(-a, -b);
        self.den = self.den.shift(-a, -b);
        if self.den.leading_sign() < 0 {
            self.num = -&self.num;
            self.den = -&self.den;
        }
        if let Some(c) = self.den.as_constant() {
            if let Some(k) = c.as_int() {
                if let Some(n) = self.num.div_int(k) {
                    self.num = n;
                    self.den = QTLaurent::one();
                }
            }
        }
        self
    }

    pub fn specialize_t1(&self) -> Result<QTFraction> {
        QTFraction::new(self.num.specialize_t1(), self.den.specialize_t1())
    }

    /// Fails when a q-exponent is half-integral or the denominator vanishes.
    pub fn specialize_q_eps(&self, r: i64) -> Result<QTFraction> {
        QTFraction::new(self.num.specialize_q_eps(r)?, self.den.specialize_q_eps(r)?)
    }

    pub fn substitute_powers(&self, m: i32, n: i32) -> QTFraction {
        QTFraction {
            num: self.num.substitute_powers(m, n),
            den: self.den.substitute_powers(m, n),
        }
        .normalized()
    }

    /// Exact value at rational points, `None` on a pole or overflow.
    pub fn eval_rational(&self, q: (i128, i128), t: (i128, i128)) -> Option<(i128, i128)> {
        let (a, b) = self.num.eval_rational(q, t)?;
        let (c, d) = self.den.eval_rational(q, t)?;
        if c == 0 {
            return None;
        }
        let (n, m) = (a.checked_mul(d)?, b.checked_mul(c)?);
        let g = num_integer::gcd(n, m).max(1);
        let s = if m < 0 { -1 } else { 1 };
        Some((s * n / g, s * m / g))
    }

    pub fn to_json(&self) -> Value {
        json!({"num": self.num.to_json(), "den": self.den.to_json()})
    }
}

impl From<QTLaurent> for QTFraction {
    fn from(p: QTLaurent) -> Self {
        QTFraction {
            num: p,
            den: QTLaurent::one(),
        }
    }
}

impl From<CycInt> for QTFraction {
    fn from(c: CycInt) -> Self {
        QTFraction::from(QTLaurent::cyc(c))
    }
}

impl PartialEq for QTFraction {
    fn eq(&self, o: &QTFraction) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        &self.num * &o.den == &o.num * &self.den
    }
}

impl Eq for QTFraction {}

impl fmt::Display for QTFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &QTLaurent| {
            if p.len() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl Add for &QTFraction {
    type Output = QTFraction;
    fn add(self, o: &QTFraction) -> QTFraction {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return QTFraction {
                num: &self.num + &o.num,
                den: self.den.clone(),
            }
            .normalized();
        }
        // reduce through g = gcd(b, d) only: a/b + c/d = (a d' + c b')/(b d')
        if let Some(g) = self.den.gcd(&o.den) {
            if let (Some(b1), Some(d1)) = (self.den.div_exact(&g), o.den.div_exact(&g)) {
                let num = &(&self.num * &d1) + &(&o.num * &b1);
                let mut den = &self.den * &d1;
                let mut num = num;
                if let Some(h) = num.gcd(&g) {
                    if let (Some(n), Some(d)) = (num.div_exact(&h), den.div_exact(&h)) {
                        num = n;
                        den = d;
                    }
                }
                return QTFraction { num, den }.tidy();
            }
        }
        QTFraction {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
        .normalized()
    }
}

impl Sub for &QTFraction {
    type Output = QTFraction;
    fn sub(self, o: &QTFraction) -> QTFraction {
        self + &(-o)
    }
}

impl Neg for &QTFraction {
    type Output = QTFraction;
    fn neg(self) -> QTFraction {
        QTFraction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &QTFraction {
    type Output = QTFraction;
    fn mul(self, o: &QTFraction) -> QTFraction {
        if self.is_zero() || o.is_zero() {
            return QTFraction::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return QTFraction::from(&self.num * &o.num);
        }
        // cross-cancel a/b · c/d by gcd(a, d) and gcd(c, b)
        let cancel = |x: &QTLaurent, y: &QTLaurent| -> Option<(QTLaurent, QTLaurent)> {
            let g = x.gcd(y)?;
            Some((x.div_exact(&g)?, y.div_exact(&g)?))
        };
        if let (Some((a, d)), Some((c, b))) = (cancel(&self.num, &o.den), cancel(&o.num, &self.den)) {
            return QTFraction { num: &a * &c, den: &b * &d }.tidy();
        }
        QTFraction {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
        .normalized()
    }
}

impl Div for &QTFraction {
    type Output = QTFraction;
    /// Panics on division by zero; use `checked_div` otherwise.
    fn div(self, o: &QTFraction) -> QTFraction {
        self.checked_div(o).expect("division by a zero fraction")
    }
}

owned_ops!(QTFraction);

impl Div for QTFraction {
    type Output = QTFraction;
    fn div(self, o: QTFraction) -> QTFraction {
        &self / &o
    }
}
