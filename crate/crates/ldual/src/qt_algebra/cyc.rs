use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

/// Element of ℤ[x]/Φ_k(x) for k ∈ {1, 4, 12}, where x is a primitive k-th
/// root of unity. Values are stored at the smallest order that holds them, so
/// structural equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycInt {
    order: u8,
    coeffs: Vec<i128>,
}

fn degree(order: u8) -> usize {
    match order {
        1 => 1,
        4 => 2,
        12 => 4,
        _ => panic!("unsupported cyclotomic order {order}"),
    }
}

pub(crate) fn ck(x: Option<i128>) -> i128 {
    x.expect("cyclotomic coefficient overflow")
}

impl CycInt {
    pub fn zero() -> Self {
        CycInt::int(0)
    }

    pub fn one() -> Self {
        CycInt::int(1)
    }

    pub fn int(n: i128) -> Self {
        CycInt {
            order: 1,
            coeffs: vec![n],
        }
    }

    /// ζ_k^e for k ∈ {1, 4, 12}.
    pub fn zeta(order: u8, e: i64) -> Self {
        let d = degree(order);
        let e = e.rem_euclid(order as i64) as usize;
        // x^e reduced: build by repeated multiplication by x
        let x = if order == 1 {
            CycInt::one()
        } else {
            let mut c = vec![0; d];
            c[1] = 1;
            CycInt { order, coeffs: c }
        };
        let mut out = CycInt {
            order,
            coeffs: {
                let mut c = vec![0; d];
                c[0] = 1;
                c
            },
        };
        for _ in 0..e {
            out = &out * &x;
        }
        out.canonical()
    }

    /// The root of unity exp(πi/r) for lacing number r ∈ {1, 2, 3}.
    pub fn eps(r: i64) -> Self {
        match r {
            1 => CycInt::one(),
            2 => CycInt::zeta(4, 1),
            3 => CycInt::zeta(12, 2),
            _ => panic!("no root of unity for lacing number {r}"),
        }
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn as_int(&self) -> Option<i128> {
        (self.order == 1).then(|| self.coeffs[0])
    }

    pub fn is_one(&self) -> bool {
        self.as_int() == Some(1)
    }

    /// Gcd of the integer coordinates (0 for zero).
    pub fn content(&self) -> i128 {
        self.coeffs
            .iter()
            .fold(0i128, |g, &c| num_integer::gcd(g, c))
    }

    pub fn div_int(&self, d: i128) -> Option<CycInt> {
        if d == 0 || self.coeffs.iter().any(|c| c % d != 0) {
            return None;
        }
        Some(CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c / d).collect(),
        })
    }

    pub fn scale(&self, k: i128) -> CycInt {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|&c| ck(c.checked_mul(k))).collect(),
        }
        .canonical()
    }

    fn lift(&self, order: u8) -> CycInt {
        if self.order == order {
            return self.clone();
        }
        let mut c = vec![0; degree(order)];
        match (self.order, order) {
            (1, _) => c[0] = self.coeffs[0],
            // i = ζ₁₂³
            (4, 12) => {
                c[0] = self.coeffs[0];
                c[3] = self.coeffs[1];
            }
            _ => panic!("cannot lift order {} to {}", self.order, order),
        }
        CycInt { order, coeffs: c }
    }

    fn canonical(mut self) -> CycInt {
        if self.order == 12 && self.coeffs[1] == 0 && self.coeffs[2] == 0 {
            self = CycInt {
                order: 4,
                coeffs: vec![self.coeffs[0], self.coeffs[3]],
            };
        }
        if self.order == 4 && self.coeffs[1] == 0 {
            self = CycInt::int(self.coeffs[0]);
        }
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, o: &CycInt) -> CycInt {
        let k = self.order.max(o.order);
        let (a, b) = (self.lift(k), o.lift(k));
        CycInt {
            order: k,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| ck(x.checked_add(*y)))
                .collect(),
        }
        .canonical()
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, o: &CycInt) -> CycInt {
        self + &(-o)
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, o: &CycInt) -> CycInt {
        let k = self.order.max(o.order);
        let (a, b) = (self.lift(k), o.lift(k));
        let d = degree(k);
        let mut prod = vec![0i128; 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                prod[i + j] = ck(prod[i + j].checked_add(ck(x.checked_mul(*y))));
            }
        }
        // reduce modulo Φ_k from the top degree down
        for e in (d..prod.len()).rev() {
            let c = prod[e];
            if c == 0 {
                continue;
            }
            prod[e] = 0;
            match k {
                // x² = -1
                4 => prod[e - 2] = ck(prod[e - 2].checked_sub(c)),
                // x⁴ = x² - 1
                12 => {
                    prod[e - 2] = ck(prod[e - 2].checked_add(c));
                    prod[e - 4] = ck(prod[e - 4].checked_sub(c));
                }
                _ => unreachable!(),
            }
        }
        prod.truncate(d);
        CycInt {
            order: k,
            coeffs: prod,
        }
        .canonical()
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_int() {
            return write!(f, "{n}");
        }
        let name = if self.order == 4 { "i" } else { "z12" };
        let mut parts = Vec::new();
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = match e {
                0 => format!("{c}"),
                1 => format!("{c}*{name}"),
                _ => format!("{c}*{name}^{e}"),
            };
            parts.push(p);
        }
        write!(f, "({})", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_relations() {
        let z = CycInt::zeta(12, 1);
        let z2 = &z * &z;
        let z4 = &z2 * &z2;
        // Φ₁₂(ζ) = ζ⁴ - ζ² + 1 = 0
        assert!((&(&z4 - &z2) + &CycInt::one()).is_zero());
        assert_eq!(CycInt::zeta(12, 6), CycInt::int(-1));
        let i = CycInt::eps(2);
        assert_eq!(&i * &i, CycInt::int(-1));
        let e3 = CycInt::eps(3);
        assert_eq!(&(&e3 * &e3) * &e3, CycInt::int(-1));
        assert_eq!(CycInt::zeta(12, 3), i);
    }

    #[test]
    fn mixed_orders_lift() {
        let i = CycInt::eps(2);
        let z = CycInt::zeta(12, 2);
        let s = &i + &z;
        assert_eq!(s.order(), 12);
        assert_eq!(&(&s - &z), &i);
        assert_eq!(CycInt::zeta(4, 4), CycInt::one());
    }

    #[test]
    fn eps_polynomial_is_nonzero() {
        let e = |k: i64| CycInt::zeta(12, 2 * k);
        let v = &(&CycInt::one() + &e(4)) + &e(5).scale(2);
        assert!(!v.is_zero());
        assert_eq!(v.order(), 12);
    }
}
