//! Gcd and exact division of bivariate integer polynomials, by primitive
//! remainder sequences over big integers. Results are converted back to
//! i128 and are `None` when they do not fit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients in the outer variable, each a polynomial in the inner one.
pub(crate) type BPoly = Vec<Vec<i128>>;

type U = Vec<BigInt>;
type B = Vec<U>;

fn trim(p: &mut U) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn btrim(p: &mut B) {
    while p.last().is_some_and(|c| c.is_empty()) {
        p.pop();
    }
}

fn u_content(p: &U) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn u_mul(a: &U, b: &U) -> U {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn u_sub(a: &U, b: &U) -> U {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn u_div_int(p: &U, d: &BigInt) -> U {
    p.iter().map(|c| c / d).collect()
}

fn u_div_exact(a: &U, b: &U) -> Option<U> {
    if b.is_empty() {
        return None;
    }
    let mut r = a.clone();
    trim(&mut r);
    if r.is_empty() {
        return Some(vec![]);
    }
    if r.len() < b.len() {
        return None;
    }
    let lb = b.last()?;
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    while !r.is_empty() && r.len() >= b.len() {
        let (c, rem) = r.last()?.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        let s = r.len() - b.len();
        for (j, y) in b.iter().enumerate() {
            r[s + j] -= &c * y;
        }
        q[s] = c;
        trim(&mut r);
    }
    r.is_empty().then_some(q)
}

fn u_pseudo_rem(a: &U, b: &U) -> U {
    let mut r = a.clone();
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let lr = r.last().expect("nonempty").clone();
        let s = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (j, y) in b.iter().enumerate() {
            r[s + j] -= &lr * y;
        }
        trim(&mut r);
    }
    r
}

fn sign_of_lead(p: &U) -> BigInt {
    if p.last().is_some_and(|c| c.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

fn u_primitive(p: &U) -> U {
    let g = u_content(p);
    if g.is_zero() {
        return vec![];
    }
    u_div_int(p, &(g * sign_of_lead(p)))
}

fn u_gcd(a: &U, b: &U) -> U {
    if a.is_empty() || b.is_empty() {
        let p = if a.is_empty() { b } else { a };
        let s = sign_of_lead(p);
        return p.iter().map(|c| c * &s).collect();
    }
    let c = u_content(a).gcd(&u_content(b));
    let (mut x, mut y) = (u_primitive(a), u_primitive(b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = u_pseudo_rem(&x, &y);
        x = y;
        y = u_primitive(&r);
    }
    x.iter().map(|v| v * &c).collect()
}

fn b_content(p: &B) -> U {
    let mut g: U = vec![];
    for c in p {
        g = u_gcd(&g, c);
        if g.len() == 1 && g[0].is_one() {
            break;
        }
    }
    g
}

fn b_div_u(p: &B, d: &U) -> Option<B> {
    p.iter().map(|c| u_div_exact(c, d)).collect()
}

fn b_lead_sign(p: &B) -> BigInt {
    p.last().map_or(BigInt::one(), sign_of_lead)
}

fn b_primitive(p: &B) -> B {
    let c = b_content(p);
    if c.is_empty() {
        return vec![];
    }
    let out = b_div_u(p, &c).expect("content divides");
    let s = b_lead_sign(&out);
    out.iter().map(|c| c.iter().map(|x| x * &s).collect()).collect()
}

fn b_pseudo_rem(a: &B, b: &B) -> B {
    let mut r = a.clone();
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let lr = r.last().expect("nonempty").clone();
        let s = r.len() - b.len();
        for c in r.iter_mut() {
            *c = u_mul(c, &lb);
        }
        for (j, y) in b.iter().enumerate() {
            r[s + j] = u_sub(&r[s + j], &u_mul(&lr, y));
        }
        btrim(&mut r);
        if !r.is_empty() {
            r = b_primitive(&r);
        }
    }
    r
}

fn to_big(p: &BPoly) -> B {
    let mut out: B = p
        .iter()
        .map(|c| {
            let mut u: U = c.iter().map(|&x| BigInt::from(x)).collect();
            trim(&mut u);
            u
        })
        .collect();
    btrim(&mut out);
    out
}

fn from_big(p: &B) -> Option<BPoly> {
    p.iter()
        .map(|c| c.iter().map(|x| x.to_i128()).collect())
        .collect()
}

fn gcd_big(a: &B, b: &B) -> B {
    if a.is_empty() || b.is_empty() {
        let p = if a.is_empty() { b } else { a };
        let s = b_lead_sign(p);
        return p.iter().map(|c| c.iter().map(|x| x * &s).collect()).collect();
    }
    let (ca, cb) = (b_content(a), b_content(b));
    let c = u_gcd(&ca, &cb);
    let (mut x, mut y) = (
        b_div_u(a, &ca).expect("content divides"),
        b_div_u(b, &cb).expect("content divides"),
    );
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            // degree zero in the outer variable: the primitive gcd is 1
            x = vec![vec![BigInt::one()]];
            break;
        }
        let r = b_pseudo_rem(&x, &y);
        x = y;
        y = if r.is_empty() { r } else { b_primitive(&r) };
    }
    b_primitive(&x).iter().map(|coef| u_mul(coef, &c)).collect()
}

/// Gcd up to sign of two polynomials in two variables.
pub(crate) fn b_gcd(a: &BPoly, b: &BPoly) -> Option<BPoly> {
    from_big(&gcd_big(&to_big(a), &to_big(b)))
}

fn div_big(a: &B, b: &B) -> Option<B> {
    let mut r = a.clone();
    btrim(&mut r);
    if r.is_empty() {
        return Some(vec![]);
    }
    if b.is_empty() || r.len() < b.len() {
        return None;
    }
    let lb = b.last()?;
    let mut q: B = vec![vec![]; r.len() - b.len() + 1];
    while !r.is_empty() && r.len() >= b.len() {
        let c = u_div_exact(r.last()?, lb)?;
        let s = r.len() - b.len();
        for (j, y) in b.iter().enumerate() {
            r[s + j] = u_sub(&r[s + j], &u_mul(&c, y));
        }
        q[s] = c;
        btrim(&mut r);
    }
    r.is_empty().then_some(q)
}

/// Exact quotient in two variables.
pub(crate) fn b_div_exact(a: &BPoly, b: &BPoly) -> Option<BPoly> {
    from_big(&div_big(&to_big(a), &to_big(b))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &BPoly, b: &BPoly) -> BPoly {
        let (a, b) = (to_big(a), to_big(b));
        let mut out: B = vec![vec![]; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let t: U = u_mul(x, y).iter().map(|v| -v).collect();
                out[i + j] = u_sub(&out[i + j], &t);
            }
        }
        btrim(&mut out);
        from_big(&out).unwrap()
    }

    #[test]
    fn recovers_common_factor() {
        // g = u*w + 1, a = g*(u + 2), b = g*(u - w)
        let g: BPoly = vec![vec![1], vec![0, 1]];
        let a = mul(&g, &vec![vec![2], vec![1]]);
        let b = mul(&g, &vec![vec![0, -1], vec![1]]);
        assert_eq!(b_gcd(&a, &b).unwrap(), g);
        assert_eq!(b_div_exact(&a, &g).unwrap(), vec![vec![2], vec![1]]);
        assert!(b_div_exact(&a, &vec![vec![0, -1], vec![1]]).is_none());
    }

    #[test]
    fn coprime_and_contents() {
        let a: BPoly = vec![vec![0, 2], vec![4]];
        let b: BPoly = vec![vec![6]];
        assert_eq!(b_gcd(&a, &b).unwrap(), vec![vec![2]]);
        let c: BPoly = vec![vec![1, 1]];
        let d: BPoly = vec![vec![-1, 0, 1]];
        assert_eq!(b_gcd(&c, &d).unwrap(), vec![vec![1, 1]]);
    }

    #[test]
    fn long_remainder_sequences_do_not_overflow() {
        let x: BPoly = vec![vec![0, 0, 2], vec![], vec![1], vec![], vec![0, 0, 0, 0, 1]];
        let y: BPoly = vec![
            vec![0, 0, 0, 0, 1],
            vec![],
            vec![],
            vec![],
            vec![],
            vec![],
            vec![],
            vec![],
            vec![3],
            vec![],
            vec![0, 0, 2],
        ];
        let h: BPoly = vec![vec![-1, 0, 1]];
        assert_eq!(b_gcd(&mul(&x, &h), &mul(&y, &h)).unwrap(), h);
    }
}
