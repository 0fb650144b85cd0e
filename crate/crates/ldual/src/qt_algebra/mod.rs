//! Exact arithmetic in q^{±1/2}, t^{±1/2} over cyclotomic integers:
//! Laurent polynomials, their fractions, quantum integers and the two
//! specializations t = 1 and q = exp(πi/r).

mod cyc;
mod fraction;
mod gcd;
mod laurent;

use std::collections::BTreeMap;
use std::fmt;

pub use cyc::CycInt;
pub use fraction::QTFraction;
pub use laurent::QTLaurent;

use crate::error::{Error, Result};

/// [m]_x for x = q^{a2/2} t^{b2/2}.
pub fn quantum_int(m: i64, a2: i32, b2: i32) -> QTLaurent {
    let mut out = QTLaurent::zero();
    let k = m.abs() as i32;
    for j in 0..k {
        let e = k - 1 - 2 * j;
        out = &out + &QTLaurent::mono2(a2 * e, b2 * e);
    }
    if m < 0 {
        -out
    } else {
        out
    }
}

/// [m]_q.
pub fn qint(m: i64) -> QTLaurent {
    quantum_int(m, 2, 0)
}

/// [m]_{q^a t^b} with integer exponents.
pub fn qtint(m: i64, a: i32, b: i32) -> QTLaurent {
    quantum_int(m, 2 * a, 2 * b)
}

/// x - x^{-1} for x = q^a t^b.
pub fn qdiff(a: i32, b: i32) -> QTLaurent {
    &QTLaurent::mono(a, b) - &QTLaurent::mono(-a, -b)
}

/// x + x^{-1} for x = q^a t^b.
pub fn qsum(a: i32, b: i32) -> QTLaurent {
    &QTLaurent::mono(a, b) + &QTLaurent::mono(-a, -b)
}

/// α(q,t) = (q + q⁻¹)(qt − q⁻¹t⁻¹)/(q²t − q⁻²t⁻¹).
pub fn alpha_qt() -> QTFraction {
    QTFraction::new(&qsum(1, 0) * &qdiff(1, 1), qdiff(2, 1)).expect("nonzero denominator")
}

/// Laurent polynomial in y with fraction coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct YPoly(pub BTreeMap<i32, QTFraction>);

impl YPoly {
    pub fn coeff(&self, e: i32) -> QTFraction {
        self.0.get(&e).cloned().unwrap_or_else(QTFraction::zero)
    }

    fn map(&self, f: impl Fn(&QTFraction) -> Result<QTFraction>) -> Result<YPoly> {
        let mut out = BTreeMap::new();
        for (e, c) in &self.0 {
            let v = f(c)?;
            if !v.is_zero() {
                out.insert(*e, v);
            }
        }
        Ok(YPoly(out))
    }

    pub fn specialize_t1(&self) -> Result<YPoly> {
        self.map(QTFraction::specialize_t1)
    }

    pub fn specialize_q_eps(&self, r: i64) -> Result<YPoly> {
        self.map(|c| c.specialize_q_eps(r))
    }

    /// y-exponents with integer multiplicities, when every coefficient is an
    /// integer.
    pub fn integer_terms(&self) -> Option<BTreeMap<i32, i128>> {
        self.0
            .iter()
            .map(|(e, c)| {
                let v = c.as_laurent()?.as_constant()?.as_int()?;
                Some((*e, v))
            })
            .collect()
    }
}

impl fmt::Display for YPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(e, c)| {
                if c.is_one() {
                    format!("y^{e}")
                } else {
                    format!("({c})y^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// y^{2n} + α y^{2n-2} + y^{2n-4} + ... + α y^{2-2n} + y^{-2n}.
pub fn interpolating_character(n: i64) -> Result<YPoly> {
    if n < 0 || n % 2 != 0 {
        return Err(Error::Parse(format!(
            "interpolating character needs an even n >= 0, got {n}"
        )));
    }
    let a = alpha_qt();
    let mut out = BTreeMap::new();
    for k in 0..=2 * n {
        let c = if k % 2 == 0 {
            QTFraction::one()
        } else {
            a.clone()
        };
        out.insert((2 * n - 2 * k) as i32, c);
    }
    Ok(YPoly(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(n: QTLaurent, d: QTLaurent) -> QTFraction {
        QTFraction::new(n, d).unwrap()
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(quantum_int(1, 2, 2), QTLaurent::one());
        assert_eq!(quantum_int(0, 2, 2), QTLaurent::zero());
        assert_eq!(qtint(2, 1, 1), qsum(1, 1));
        assert_eq!(quantum_int(-3, 2, 0), -qint(3));
        // [m]_x (x - x^{-1}) = x^m - x^{-m}
        for m in 1..6 {
            assert_eq!(&qtint(m, 2, 1) * &qdiff(2, 1), qdiff(2 * m as i32, m as i32));
        }
        assert_eq!(qtint(2, 1, 1).specialize_t1(), qint(2));
    }

    #[test]
    fn half_integral_exponents() {
        let x = quantum_int(2, 1, 3);
        assert_eq!(x.to_string(), "q^(1/2)t^(3/2) + q^(-1/2)t^(-3/2)");
        assert_eq!(x.specialize_q_eps(2), Err(Error::HalfIntegral));
    }

    #[test]
    fn specializations_at_roots_of_unity() {
        let q2 = QTLaurent::mono(2, 0);
        assert_eq!(q2.specialize_q_eps(2).unwrap(), QTLaurent::int(-1));
        let e = |k: i64| QTLaurent::cyc(CycInt::zeta(12, 2 * k));
        let v = &(&QTLaurent::one() + &e(4)) + &e(5).scale(&CycInt::int(2));
        assert!(!v.is_zero());
        assert_eq!(QTLaurent::mono(3, 1).specialize_q_eps(3).unwrap(), -QTLaurent::t());
    }

    #[test]
    fn fraction_identities() {
        let x = qtint(2, 1, 1);
        assert!(f(x.clone(), x.clone()).is_one());
        // [2]_{qt}[2]_{q²t}/[4]_{qt} = [2]_{q²t}/(q²t² + q⁻²t⁻²)
        let lhs = f(&qtint(2, 1, 1) * &qtint(2, 2, 1), qtint(4, 1, 1));
        let rhs = f(qtint(2, 2, 1), qsum(2, 2));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.num(), rhs.num());
        let a = f(qdiff(1, 0), qsum(2, 1));
        assert_eq!(&a * &a.inv().unwrap(), QTFraction::one());
        assert!(QTFraction::zero().inv().is_err());
    }

    #[test]
    fn alpha_limits() {
        let a = alpha_qt();
        assert_eq!(a.specialize_t1().unwrap(), QTFraction::one());
        assert!(a.specialize_q_eps(2).unwrap().is_zero());
        // at q = 1, t = 2: 2 (2 - 1/2) / (2 - 1/2) = 2
        assert_eq!(a.eval_rational((1, 1), (2, 1)), Some((2, 1)));
        assert_eq!(a.eval_rational((2, 1), (3, 1)), {
            // (5/2)(6 - 1/6)/(12 - 1/12) = (5/2)(35/6)/(143/12) = 175/143
            Some((175, 143))
        });
    }

    #[test]
    fn interpolating_character_limits() {
        assert_eq!(interpolating_character(0).unwrap().0.len(), 1);
        assert!(interpolating_character(3).is_err());
        let ch = interpolating_character(4).unwrap();
        let t1 = ch.specialize_t1().unwrap().integer_terms().unwrap();
        assert_eq!(t1, (-4..=4).map(|k| (2 * k, 1)).collect());
        let eps = ch.specialize_q_eps(2).unwrap().integer_terms().unwrap();
        assert_eq!(eps, [-8, -4, 0, 4, 8].into_iter().map(|e| (e, 1)).collect());
    }

    fn small_laurent() -> impl Strategy<Value = QTLaurent> {
        prop::collection::vec((-3i32..=3, -3i32..=3, -4i128..=4), 0..5).prop_map(|v| {
            v.into_iter().fold(QTLaurent::zero(), |acc, (a, b, c)| {
                &acc + &QTLaurent::term(2 * a, 2 * b, CycInt::int(c))
            })
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_laurent(), b in small_laurent(), c in small_laurent()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn specializations_are_homomorphisms(a in small_laurent(), b in small_laurent()) {
            prop_assert_eq!((&a * &b).specialize_t1(), &a.specialize_t1() * &b.specialize_t1());
            prop_assert_eq!((&a + &b).specialize_t1(), &a.specialize_t1() + &b.specialize_t1());
            for r in [2, 3] {
                let (x, y) = (a.specialize_q_eps(r).unwrap(), b.specialize_q_eps(r).unwrap());
                prop_assert_eq!((&a * &b).specialize_q_eps(r).unwrap(), &x * &y);
                prop_assert_eq!((&a + &b).specialize_q_eps(r).unwrap(), &x + &y);
            }
        }

        #[test]
        fn fraction_equality_is_consistent(a in small_laurent(), b in small_laurent(), c in small_laurent()) {
            prop_assume!(!b.is_zero() && !c.is_zero());
            let x = f(a.clone(), b.clone());
            let y = f(&a * &c, &b * &c);
            prop_assert_eq!(&x, &y);
            prop_assert_eq!(x.num(), y.num());
            prop_assert_eq!(x.den(), y.den());
            let s = &(&x + &y) - &y;
            prop_assert_eq!(s, x);
        }
    }
}
