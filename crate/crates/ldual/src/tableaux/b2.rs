use crate::error::{Error, Result};
use crate::liealg::CartanData;
use crate::tableaux::{
    check_map_family, component_iso, Alphabet, Layout, MapCheck, MapPart, Tableau, TableauCrystal,
};

/// C2 tableau with 2R single cells and R' columns; the tilde crystal of it
/// carries the B2 structure.
pub type TableauB2 = Tableau;

/// Parameters (ε, a, b, c, d) of the two threshold families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct B2Params {
    pub eps: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

/// Parameters of a dual tableau; same fields, different reading.
pub type DualParams = B2Params;

impl std::fmt::Display for B2Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "T_{}({},{},{},{})",
            self.eps, self.a, self.b, self.c, self.d
        )
    }
}

fn p(eps: usize, a: usize, b: usize, c: usize, d: usize) -> B2Params {
    B2Params { eps, a, b, c, d }
}

/// g-side T_ε(a,b,c,d) on `singles` single cells and `rp` columns. Bottom
/// row: 1 before a, 2 before b, 2bar before c, then 1bar. Top row
/// (positions singles+1..): 1 up to c-ε-1, 2 before d, then 2bar.
pub fn param_b2(singles: usize, rp: usize, q: B2Params) -> Result<TableauB2> {
    let n = singles + rp;
    let B2Params { eps, a, b, c, d } = q;
    if eps > 1 || a == 0 || a > b || b > c || c < eps {
        return Err(Error::Tableau(format!("{q} is not a parameter set")));
    }
    let bottom = (1..=n)
        .map(|i| {
            if i < a {
                1
            } else if i < b {
                2
            } else if i < c {
                3
            } else {
                4
            }
        })
        .collect();
    let top = (singles + 1..=n)
        .map(|i| {
            if i + eps < c {
                1
            } else if i < d {
                2
            } else {
                3
            }
        })
        .collect();
    let t = Tableau {
        alphabet: Alphabet::C2,
        layout: Layout::Right,
        top,
        bottom,
    };
    if !t.is_valid() {
        return Err(Error::Tableau(format!(
            "{q} gives an invalid tableau on ({singles},{rp})"
        )));
    }
    Ok(t)
}

/// Dual T^l_ε(a,b,c,d) with `mu1` columns and `mu2` further top cells.
/// Bottom row: 2 before a, 2bar before b, then 1bar. Top row: 1 up to
/// b-ε-1, 2 before c, 2bar before d, then 1bar.
pub fn dual_param_b2(mu1: usize, mu2: usize, q: DualParams) -> Result<Tableau> {
    let B2Params { eps, a, b, c, d } = q;
    if eps > 1 || a == 0 || a > b || b < eps + 1 || c > d {
        return Err(Error::Tableau(format!("{q} is not a dual parameter set")));
    }
    let bottom = (1..=mu1)
        .map(|i| {
            if i < a {
                2
            } else if i < b {
                3
            } else {
                4
            }
        })
        .collect();
    let top = (1..=mu1 + mu2)
        .map(|i| {
            if i + eps < b {
                1
            } else if i < c {
                2
            } else if i < d {
                3
            } else {
                4
            }
        })
        .collect();
    let t = Tableau {
        alphabet: Alphabet::C2,
        layout: Layout::Left,
        top,
        bottom,
    };
    if !t.is_valid() {
        return Err(Error::Tableau(format!(
            "{q} gives an invalid dual tableau on ({mu1},{mu2})"
        )));
    }
    Ok(t)
}

/// Every parameter set (thresholds up to one past the end of the top row
/// plus one) that materializes to `t`. Thresholds beyond the end of a row
/// are not determined by the entries, hence several answers.
pub fn dual_params_of(t: &Tableau) -> Vec<DualParams> {
    if t.alphabet != Alphabet::C2 || t.layout != Layout::Left {
        return vec![];
    }
    let mu1 = t.bottom.len();
    let len = t.top.len();
    let cap = len + 2;
    let below = |row: &[u8], x: u8| row.iter().filter(|&&y| y <= x).count();
    // a threshold equal to `count + 1` unless the row is exhausted
    let choices = |count: usize, row_len: usize| -> Vec<usize> {
        if count < row_len {
            vec![count + 1]
        } else {
            (row_len + 1..=cap).collect()
        }
    };
    let mut out = Vec::new();
    let top1 = below(&t.top, 1);
    for eps in 0..=1 {
        for a in choices(below(&t.bottom, 2), mu1) {
            for b in choices(below(&t.bottom, 3), mu1) {
                if b < a || b < eps + 1 || top1 != (b - eps - 1).min(len) {
                    continue;
                }
                for c in choices(below(&t.top, 2), len) {
                    for d in choices(below(&t.top, 3), len) {
                        let q = p(eps, a, b, c, d);
                        if dual_param_b2(mu1, len - mu1, q).as_ref() == Ok(t) {
                            out.push(q);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// The four Langlands highest weight tableaux T_λ, f1 T_λ, f1 f2 T_λ,
/// f1 f2 f1 T_λ of the g-side shape (2R, R').
pub fn dual_b2_highest(r: usize, rp: usize) -> Option<[TableauB2; 4]> {
    let t = Tableau::highest(Alphabet::C2, Layout::Right, 2 * r, rp);
    let t1 = t.f(0)?;
    let t2 = t.f(1)?.f(0)?;
    let t3 = t.f(0)?.f(1)?.f(0)?;
    Some([t, t1, t2, t3])
}

/// Source crystal of Ψ: B^L(Rω1 + (R'-1)ω2) or B^L((R-1)ω1 + (R'+1)ω2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PsiDomain {
    First,
    Second,
}

impl PsiDomain {
    /// (columns, singles) of the dual tableaux.
    pub fn shape(self, r: usize, rp: usize) -> Option<(usize, usize)> {
        match self {
            PsiDomain::First => Some((r, rp.checked_sub(1)?)),
            PsiDomain::Second => Some((r.checked_sub(1)?, rp + 1)),
        }
    }
}

/// Classification of dual parameters used by Ψ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PsiCase {
    A,
    B,
    C,
}

pub fn psi_case(r: usize, q: &DualParams) -> PsiCase {
    if q.b > r {
        PsiCase::C
    } else if q.c > r {
        PsiCase::B
    } else {
        PsiCase::A
    }
}

/// The case formulas of Ψ on parameters, as printed. `None` where the
/// printed table has no entry.
pub fn psi_target_b2(domain: PsiDomain, r: usize, q: &DualParams) -> Option<B2Params> {
    let B2Params { eps, a, b, c, d } = *q;
    let out = match (psi_case(r, q), domain) {
        (PsiCase::C, _) if eps != 0 => return None,
        (PsiCase::C, PsiDomain::First) => p(1, 2 * a - 1, b + r, 1 + r + c, 1 + r + d),
        (PsiCase::C, PsiDomain::Second) => p(0, 2 * a, b + r, r + c, r + d),
        (PsiCase::B, PsiDomain::First) => p(
            1,
            2 * a - 1,
            (2 * b).checked_sub(1 + eps)?,
            1 + r + c,
            1 + r + d,
        ),
        (PsiCase::B, PsiDomain::Second) => p(0, 2 * a, 2 * b - eps, r + c, r + d),
        (PsiCase::A, PsiDomain::First) => p(
            0,
            2 * a - 1,
            (2 * b).checked_sub(eps + 1)?,
            2 * c,
            1 + r + d,
        ),
        (PsiCase::A, PsiDomain::Second) if d > r && (eps == 1 || b < c) => {
            p(0, 2 * a, 2 * b - eps, 2 * c - 1, r + d)
        }
        (PsiCase::A, PsiDomain::Second) if d > r && eps == 0 && b == c => {
            p(0, 2 * a - 1, 2 * b, 2 * b, r + d)
        }
        (PsiCase::A, PsiDomain::Second) if d == r => p(
            0,
            2 * a - 1,
            (2 * b).checked_sub(1 + eps)?,
            2 * c,
            2 * r + 1,
        ),
        (PsiCase::A, PsiDomain::Second) => return None,
    };
    Some(out)
}

/// The printed table, except that parameters with ε = 1 and b = R + 1
/// (a column of 2 over 2bar at position R) take the case B formula; the
/// printed case C only covers ε = 0.
pub fn psi_target_amended(domain: PsiDomain, r: usize, q: &DualParams) -> Option<B2Params> {
    if q.eps == 1 && q.b == r + 1 {
        let B2Params { eps, a, b, c, d } = *q;
        return Some(match domain {
            PsiDomain::First => p(1, 2 * a - 1, 2 * b - 1 - eps, 1 + r + c, 1 + r + d),
            PsiDomain::Second => p(0, 2 * a, 2 * b - eps, r + c, r + d),
        });
    }
    psi_target_b2(domain, r, q)
}

/// Ψ on a dual tableau of the given domain, for the g-side shape (2R, R').
/// The parameter sets of `t` are tried in order; the first one for which
/// [`psi_target_amended`] gives a valid tableau is used.
pub fn bijection_psi_b2(r: usize, rp: usize, domain: PsiDomain, t: &Tableau) -> Result<TableauB2> {
    psi_with(r, rp, domain, t, psi_target_amended)
}

/// Ψ using only the printed case table.
pub fn bijection_psi_b2_printed(
    r: usize,
    rp: usize,
    domain: PsiDomain,
    t: &Tableau,
) -> Result<TableauB2> {
    psi_with(r, rp, domain, t, psi_target_b2)
}

fn psi_with(
    r: usize,
    rp: usize,
    domain: PsiDomain,
    t: &Tableau,
    table: fn(PsiDomain, usize, &DualParams) -> Option<B2Params>,
) -> Result<TableauB2> {
    let (mu1, mu2) = domain
        .shape(r, rp)
        .ok_or_else(|| Error::Tableau(format!("empty {domain:?} domain for ({r},{rp})")))?;
    if t.bottom.len() != mu1 || t.top.len() != mu1 + mu2 || !t.is_valid() {
        return Err(Error::Tableau(format!(
            "{t} is not in the {domain:?} domain"
        )));
    }
    let reps = dual_params_of(t);
    for q in &reps {
        if let Some(target) = table(domain, r, q) {
            if let Ok(img) = param_b2(2 * r, rp, target) {
                return Ok(img);
            }
        }
    }
    Err(Error::Tableau(format!(
        "no printed case applies to {t} (parameters {reps:?})"
    )))
}

/// The g-side crystal of shape (2R, R') for B2 in the labelling where node 1
/// is short, so that f_1 is doubled in the tilde crystal.
pub fn b2_crystal(r: usize, rp: usize) -> Result<crate::crystal::CrystalGraph<Tableau>> {
    TableauCrystal::new(CartanData::c(2), Alphabet::C2, false)?.crystal(Tableau::highest(
        Alphabet::C2,
        Layout::Right,
        2 * r,
        rp,
    ))
}

/// Checks the decomposition of the tilde crystal of shape (2R, R'): the
/// components of T_λ and f1 f2 f1 T_λ through the unique isomorphisms, and
/// Ψ on both of its domains. Needs R, R' > 0.
pub fn check_psi_shape(r: usize, rp: usize) -> Result<MapCheck> {
    if r == 0 || rp == 0 {
        return Ok(MapCheck::default());
    }
    let big = b2_crystal(r, rp)?;
    let target = big.tilde_subcrystal();
    let tops =
        dual_b2_highest(r, rp).ok_or_else(|| Error::Tableau("missing highest tableaux".into()))?;
    let dual_ops = TableauCrystal::new(CartanData::b(2), Alphabet::C2, true)?;
    let dual = |cols: usize, singles: usize| {
        dual_ops.crystal(Tableau::highest(Alphabet::C2, Layout::Left, singles, cols))
    };
    let top_dom = dual(r, rp)?;
    let bottom_dom = dual(r - 1, rp)?;
    let first = dual(r, rp - 1)?;
    let second = dual(r - 1, rp + 1)?;
    let top_iso = component_iso(&top_dom, &big, &tops[0])?;
    let bottom_iso = component_iso(&bottom_dom, &big, &tops[3])?;
    let by_top = |t: &Tableau| {
        top_iso
            .get(t)
            .cloned()
            .ok_or_else(|| Error::MissingElement(t.to_string()))
    };
    let by_bottom = |t: &Tableau| {
        bottom_iso
            .get(t)
            .cloned()
            .ok_or_else(|| Error::MissingElement(t.to_string()))
    };
    let psi1 = |t: &Tableau| bijection_psi_b2(r, rp, PsiDomain::First, t);
    let psi2 = |t: &Tableau| bijection_psi_b2(r, rp, PsiDomain::Second, t);
    let parts: [MapPart<'_>; 4] = [
        (&top_dom, &by_top),
        (&bottom_dom, &by_bottom),
        (&first, &psi1),
        (&second, &psi2),
    ];
    Ok(check_map_family(&target, &parts))
}

/// Elements of one domain on which the printed table gives no valid image,
/// with their parameter sets.
pub fn psi_printed_gaps(
    r: usize,
    rp: usize,
    domain: PsiDomain,
) -> Result<Vec<(Tableau, Vec<DualParams>)>> {
    let Some((mu1, mu2)) = domain.shape(r, rp) else {
        return Ok(vec![]);
    };
    let dual_ops = TableauCrystal::new(CartanData::b(2), Alphabet::C2, true)?;
    let dom = dual_ops.crystal(Tableau::highest(Alphabet::C2, Layout::Left, mu2, mu1))?;
    Ok(dom
        .elements
        .iter()
        .filter(|t| bijection_psi_b2_printed(r, rp, domain, t).is_err())
        .map(|t| (t.clone(), dual_params_of(t)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableaux::hw_enumerate_l;

    #[test]
    fn four_highest_tableaux() {
        for r in 1..=3 {
            for rp in 1..=3 {
                let tops = dual_b2_highest(r, rp).unwrap();
                let n = 2 * r + rp;
                assert_eq!(
                    tops[0],
                    param_b2(2 * r, rp, p(0, 2 * r + 1, n + 1, n + 1, n + 1)).unwrap()
                );
                assert_eq!(
                    tops[1],
                    param_b2(2 * r, rp, p(0, 2 * r, n + 1, n + 1, n + 1)).unwrap()
                );
                assert_eq!(
                    tops[2],
                    param_b2(2 * r, rp, p(1, 2 * r + 1, n, n + 1, n + 1)).unwrap()
                );
                assert_eq!(
                    tops[3],
                    param_b2(2 * r, rp, p(1, 2 * r, n, n + 1, n + 1)).unwrap()
                );
                let g = b2_crystal(r, rp).unwrap();
                let mut found: Vec<Tableau> = hw_enumerate_l(&g)
                    .into_iter()
                    .map(|x| g.elements[x].clone())
                    .collect();
                found.sort();
                let mut want = tops.to_vec();
                want.sort();
                assert_eq!(found, want, "({r},{rp})");
            }
        }
    }

    #[test]
    fn degenerate_shapes() {
        let g = b2_crystal(2, 0).unwrap();
        assert_eq!(hw_enumerate_l(&g).len(), 3);
        let g = b2_crystal(0, 2).unwrap();
        assert_eq!(hw_enumerate_l(&g).len(), 2);
        let g = b2_crystal(0, 0).unwrap();
        assert_eq!(hw_enumerate_l(&g).len(), 1);
    }

    #[test]
    fn dual_parameters_round_trip() {
        let ops = TableauCrystal::new(CartanData::b(2), Alphabet::C2, true).unwrap();
        for mu1 in 0..=3 {
            for mu2 in 0..=3 {
                let g = ops
                    .crystal(Tableau::highest(Alphabet::C2, Layout::Left, mu2, mu1))
                    .unwrap();
                for t in &g.elements {
                    let reps = dual_params_of(t);
                    assert!(!reps.is_empty(), "{t}");
                    for q in reps {
                        assert_eq!(&dual_param_b2(mu1, mu2, q).unwrap(), t);
                    }
                }
            }
        }
    }

    #[test]
    fn psi_preserves_weights_and_strings() {
        for r in 1..=4 {
            for rp in 1..=4 {
                let check = check_psi_shape(r, rp).unwrap();
                assert!(
                    check.ok(),
                    "({r},{rp}): {:?}",
                    &check.failures[..check.failures.len().min(5)]
                );
            }
        }
    }

    #[test]
    fn printed_table_misses_only_the_shifted_column() {
        for r in 1..=3 {
            for rp in 1..=3 {
                assert!(psi_printed_gaps(r, rp, PsiDomain::Second)
                    .unwrap()
                    .is_empty());
                let gaps = psi_printed_gaps(r, rp, PsiDomain::First).unwrap();
                assert!(!gaps.is_empty());
                for (t, reps) in gaps {
                    assert!(reps.iter().all(|q| q.eps == 1 && q.b == r + 1), "{t}");
                    assert_eq!((t.bottom[r - 1], t.top[r - 1]), (3, 2));
                }
            }
        }
    }

    #[test]
    fn case_c_second_domain_formula() {
        let q = p(0, 2, 4, 5, 5);
        assert_eq!(
            psi_target_b2(PsiDomain::Second, 2, &q),
            Some(p(0, 4, 6, 7, 7))
        );
    }
}
