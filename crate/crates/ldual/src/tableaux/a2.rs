use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::crystal::{lockstep_map, CrystalGraph};

use crate::error::{Error, Result};
use crate::liealg::CartanData;
use crate::tableaux::{
    check_map_family, component_iso, Alphabet, Layout, MapCheck, MapPart, Tableau, TableauCrystal,
};

/// A2 tableau with `R` single cells and `R'` columns.
pub type TableauA2 = Tableau;

/// Residue of λ = Rω1 + R'ω2 modulo the doubled lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum A2Class {
    Zero,
    Omega1,
    Omega2,
    Omega12,
}

pub fn a2_class(r: usize, rp: usize) -> A2Class {
    match (r % 2, rp % 2) {
        (0, 0) => A2Class::Zero,
        (1, 0) => A2Class::Omega1,
        (0, _) => A2Class::Omega2,
        _ => A2Class::Omega12,
    }
}

/// Which explicit map: `Phi` is the λ≡0 map onto the component of T1,
/// `PhiPrime`/`PhiSecond` land in the components of T0/T1 for the other
/// classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum A2Map {
    Phi,
    PhiPrime,
    PhiSecond,
}

/// The tableau T(a,b,c): bottom row 1 before a, 2 before b, then 3; top row
/// (positions R+1..R+R') 1 before c, then 2.
pub fn param_a2(r: usize, rp: usize, a: usize, b: usize, c: usize) -> Result<TableauA2> {
    let n = r + rp;
    if !(1 <= a && a <= b && b <= n + 1 && r < c && c <= n + 1) {
        return Err(Error::Tableau(format!(
            "T({a},{b},{c}) out of range for shape ({r},{rp})"
        )));
    }
    let bottom = (1..=n)
        .map(|i| {
            if i < a {
                1
            } else if i < b {
                2
            } else {
                3
            }
        })
        .collect();
    let top = (r + 1..=n).map(|i| if i < c { 1 } else { 2 }).collect();
    let t = Tableau {
        alphabet: Alphabet::A2,
        layout: Layout::Right,
        top,
        bottom,
    };
    if !t.is_valid() {
        return Err(Error::Tableau(format!(
            "T({a},{b},{c}) is not semistandard for shape ({r},{rp})"
        )));
    }
    Ok(t)
}

/// Inverse of [`param_a2`]; `None` when the top row contains a 3.
pub fn params_of_a2(t: &TableauA2) -> Option<(usize, usize, usize)> {
    if t.alphabet != Alphabet::A2 || t.layout != Layout::Right || t.top.contains(&3) {
        return None;
    }
    let count = |row: &[u8], x: u8| row.iter().filter(|&&y| y <= x).count();
    let r = t.singles();
    Some((
        1 + count(&t.bottom, 1),
        1 + count(&t.bottom, 2),
        r + 1 + count(&t.top, 1),
    ))
}

fn apply_word(t: &Tableau, word: &[usize]) -> Option<Tableau> {
    word.iter().rev().try_fold(t.clone(), |x, &i| x.f(i))
}

/// (T0, T1) for shape (R, R'), obtained from T_λ by the f-words attached
/// to the class of λ. Words act right to left. Needs R, R' > 0; T1 is
/// absent on small shapes.
pub fn a2_highest_params(r: usize, rp: usize) -> Option<(TableauA2, Option<TableauA2>)> {
    let t = Tableau::highest(Alphabet::A2, Layout::Right, r, rp);
    let (w0, w1): (&[usize], &[usize]) = match a2_class(r, rp) {
        A2Class::Zero => (&[], &[1, 0, 0, 1]),
        A2Class::Omega1 => (&[1], &[1, 0, 0]),
        A2Class::Omega2 => (&[0], &[0, 1, 1]),
        A2Class::Omega12 => (&[0, 1], &[1, 0]),
    };
    if r == 0 || rp == 0 {
        return None;
    }
    let t0 = apply_word(&t, w0)?;
    let t1 = apply_word(&t, w1).filter(|u| u.weight().0.iter().all(|&x| x >= 0));
    Some((t0, t1))
}

/// Shape of the domain crystal of a map for the shape (R, R').
pub fn a2_domain(class: A2Class, map: A2Map, r: usize, rp: usize) -> Option<(usize, usize)> {
    let (r, rp) = (r as i64, rp as i64);
    let (s, sp) = match (class, map) {
        (A2Class::Zero, A2Map::Phi) => (r / 2 - 1, rp / 2 - 1),
        (A2Class::Omega1, A2Map::PhiPrime) => ((r + 1) / 2, rp / 2 - 1),
        (A2Class::Omega1, A2Map::PhiSecond) => ((r - 3) / 2, rp / 2),
        (A2Class::Omega2, A2Map::PhiPrime) => (r / 2 - 1, (rp + 1) / 2),
        (A2Class::Omega2, A2Map::PhiSecond) => (r / 2, (rp - 3) / 2),
        (A2Class::Omega12, A2Map::PhiPrime | A2Map::PhiSecond) => ((r - 1) / 2, (rp - 1) / 2),
        _ => return None,
    };
    let fits = a2_class(r as usize, rp as usize) == class && r > 0 && rp > 0 && s >= 0 && sp >= 0;
    // the odd-class shapes need the subtracted parts to be genuinely present
    let present = match (class, map) {
        (A2Class::Omega1, A2Map::PhiSecond) => r >= 3,
        (A2Class::Omega2, A2Map::PhiSecond) => rp >= 3,
        _ => true,
    };
    (fits && present).then_some((s as usize, sp as usize))
}

/// The explicit crystal maps between A2 tableaux of the domain shape and the
/// tilde crystal of shape (R, R') for doubled A2. For the class of ω2 the
/// ω1 formulas are conjugated by the diagram symmetry.
pub fn bijection_a2(map: A2Map, r: usize, rp: usize, t: &TableauA2) -> Result<TableauA2> {
    let class = a2_class(r, rp);
    let (s, sp) = a2_domain(class, map, r, rp)
        .ok_or_else(|| Error::Tableau(format!("no {map:?} for shape ({r},{rp})")))?;
    if t.singles() != s || t.columns() != sp || !t.is_valid() || t.alphabet != Alphabet::A2 {
        return Err(Error::Tableau(format!(
            "{t} is not in the domain of shape ({s},{sp})"
        )));
    }
    if class == A2Class::Omega2 {
        let flipped = twist(s, sp)?[t].clone();
        let image = bijection_a2(map, rp, r, &flipped)?;
        let back = twist(rp, r)?;
        return Ok(back[&image].clone());
    }
    let (a, b, c) =
        params_of_a2(t).ok_or_else(|| Error::Tableau(format!("{t} has no parameters")))?;
    let (a2, b2, c2) = match (class, map) {
        (A2Class::Zero, A2Map::Phi) => (2 * a, 2 * b + 1, 2 * c + 2),
        (A2Class::Omega1, A2Map::PhiPrime) if 2 * a == r + 3 => (r + 1, 2 * b - 1, 2 * c),
        (A2Class::Omega1, A2Map::PhiPrime) => (2 * a - 1, 2 * b - 1, 2 * c - 1),
        (A2Class::Omega1, A2Map::PhiSecond) => (2 * a, 2 * b + 1, 2 * (c + 1)),
        (A2Class::Omega12, A2Map::PhiPrime) => (2 * a, 2 * b, 2 * c),
        (A2Class::Omega12, A2Map::PhiSecond) => (2 * a - 1, 2 * b, 2 * c + 1),
        _ => unreachable!("checked by a2_domain"),
    };
    param_a2(r, rp, a2, b2, c2)
}

type TwistTable = HashMap<Tableau, Tableau>;

/// The crystal isomorphism B(Rω1 + R'ω2) -> B(R'ω1 + Rω2) that exchanges
/// the two nodes.
fn twist(r: usize, rp: usize) -> Result<TwistTable> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), TwistTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("twist cache").get(&(r, rp)) {
        return Ok(t.clone());
    }
    let ops = TableauCrystal::new(CartanData::a(2), Alphabet::A2, false)?;
    let g = ops.crystal(Tableau::highest(Alphabet::A2, Layout::Right, r, rp))?;
    let h = ops.crystal(Tableau::highest(Alphabet::A2, Layout::Right, rp, r))?;
    let swapped = CrystalGraph::from_edges(
        h.cartan.clone(),
        h.elements.clone(),
        vec![h.f[1].clone(), h.f[0].clone()],
        h.wt.iter()
            .map(|w| crate::liealg::Weight(vec![w.0[1], w.0[0]]))
            .collect(),
    );
    let map =
        lockstep_map(&g, &swapped)?.ok_or_else(|| Error::Tableau("diagram twist failed".into()))?;
    let table: TwistTable = map
        .iter()
        .enumerate()
        .map(|(x, &y)| (g.elements[x].clone(), h.elements[y].clone()))
        .collect();
    cache
        .lock()
        .expect("twist cache")
        .insert((r, rp), table.clone());
    Ok(table)
}

/// The A2 tableau crystal of shape (R, R') for doubled A2 (both nodes with
/// Langlands factor 2).
pub fn doubled_a2_crystal(r: usize, rp: usize) -> Result<CrystalGraph<Tableau>> {
    let ops = TableauCrystal::new(CartanData::a(2).in_lacing(2)?, Alphabet::A2, false)?;
    ops.crystal(Tableau::highest(Alphabet::A2, Layout::Right, r, rp))
}

/// Checks the explicit maps of the class of (R, R') against the tilde
/// crystal: for λ≡0 the component of T_λ (through the unique isomorphism)
/// and φ; otherwise φ' and φ''.
pub fn check_a2_shape(r: usize, rp: usize) -> Result<MapCheck> {
    let class = a2_class(r, rp);
    let big = doubled_a2_crystal(r, rp)?;
    let target = big.tilde_subcrystal();
    let dual_ops = TableauCrystal::new(big.cartan.langlands_dual(), Alphabet::A2, false)?;
    let domain = |shape: Option<(usize, usize)>| -> Result<Option<CrystalGraph<Tableau>>> {
        shape
            .map(|(s, sp)| dual_ops.crystal(Tableau::highest(Alphabet::A2, Layout::Right, s, sp)))
            .transpose()
    };
    let Some((t0, _)) = a2_highest_params(r, rp) else {
        return Ok(MapCheck::default());
    };
    let maps: [A2Map; 2] = match class {
        A2Class::Zero => [A2Map::Phi, A2Map::Phi],
        _ => [A2Map::PhiPrime, A2Map::PhiSecond],
    };
    let first = if class == A2Class::Zero {
        domain(Some((r / 2, rp / 2)))?
    } else {
        domain(a2_domain(class, maps[0], r, rp))?
    };
    let second = domain(a2_domain(class, maps[1], r, rp))?;
    let iso = match (&first, class) {
        (Some(d), A2Class::Zero) => component_iso(d, &big, &t0)?,
        _ => Default::default(),
    };
    let lookup = |t: &Tableau| {
        iso.get(t)
            .cloned()
            .ok_or_else(|| Error::MissingElement(t.to_string()))
    };
    let prime = |t: &Tableau| bijection_a2(maps[0], r, rp, t);
    let second_map = |t: &Tableau| bijection_a2(maps[1], r, rp, t);
    let mut parts: Vec<MapPart<'_>> = Vec::new();
    if let Some(d) = &first {
        parts.push((
            d,
            if class == A2Class::Zero {
                &lookup
            } else {
                &prime
            },
        ));
    }
    if let Some(d) = &second {
        parts.push((d, &second_map));
    }
    Ok(check_map_family(&target, &parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableaux::hw_enumerate_l;

    #[test]
    fn highest_weight_parameters() {
        for (r, rp) in [(2, 2), (3, 2), (4, 1)] {
            let t = param_a2(r, rp, r + 1, r + rp + 1, r + rp + 1).unwrap();
            assert_eq!(t, Tableau::highest(Alphabet::A2, Layout::Right, r, rp));
            assert_eq!(params_of_a2(&t), Some((r + 1, r + rp + 1, r + rp + 1)));
        }
        assert!(param_a2(2, 2, 0, 3, 3).is_err());
        assert!(param_a2(2, 2, 1, 6, 3).is_err());
        // a 1 on top of a 1 is not allowed
        assert!(param_a2(2, 2, 4, 4, 5).is_err());
    }

    #[test]
    fn highest_pairs_match_the_case_list() {
        for r in 1..=5 {
            for rp in 1..=5 {
                let n = r + rp;
                let class = a2_class(r, rp);
                let (t0, t1) = a2_highest_params(r, rp).unwrap();
                let second = if class == A2Class::Zero {
                    A2Map::Phi
                } else {
                    A2Map::PhiSecond
                };
                assert_eq!(
                    t1.is_some(),
                    a2_domain(class, second, r, rp).is_some(),
                    "shape ({r},{rp})"
                );
                let (e0, e1) = match class {
                    A2Class::Zero => ((r + 1, n + 1, n + 1), (r, n - 1, n)),
                    A2Class::Omega1 => ((r + 1, n, n + 1), (r.saturating_sub(1), n, n + 1)),
                    A2Class::Omega12 => ((r + 1, n, n), (r, n, n + 1)),
                    A2Class::Omega2 => ((r, n + 1, n + 1), (r + 1, n - 1, n)),
                };
                assert_eq!(params_of_a2(&t0), Some(e0), "shape ({r},{rp})");
                if let Some(t1) = &t1 {
                    assert_eq!(params_of_a2(t1), Some(e1), "shape ({r},{rp})");
                }

                let g = doubled_a2_crystal(r, rp).unwrap();
                let mut tops: Vec<Tableau> = hw_enumerate_l(&g)
                    .into_iter()
                    .map(|x| g.elements[x].clone())
                    .collect();
                tops.sort();
                let mut want: Vec<Tableau> = std::iter::once(t0).chain(t1).collect();
                want.sort();
                assert_eq!(tops, want, "shape ({r},{rp})");
            }
        }
        let g = doubled_a2_crystal(0, 0).unwrap();
        assert_eq!(hw_enumerate_l(&g).len(), 1);
    }

    #[test]
    fn weight_condition_on_parameters() {
        let c = CartanData::a(2).in_lacing(2).unwrap();
        for r in 0..=4 {
            for rp in 0..=4 {
                let g = doubled_a2_crystal(r, rp).unwrap();
                for (k, t) in g.elements.iter().enumerate() {
                    if let Some((a, b, cc)) = params_of_a2(t) {
                        let cond = b % 2 == (1 + rp) % 2 && a % 2 == cc % 2;
                        assert_eq!(c.in_p_prime(&g.wt[k]), cond, "{t}");
                    }
                }
            }
        }
    }

    #[test]
    fn explicit_maps_preserve_weights_and_strings() {
        for r in 1..=6 {
            for rp in 1..=6 {
                let check = check_a2_shape(r, rp).unwrap();
                assert!(check.ok(), "({r},{rp}): {:?}", check.failures);
                let tilde = doubled_a2_crystal(r, rp).unwrap().tilde_subcrystal();
                let normal = crate::crystal::is_normal(&tilde, &tilde.cartan);
                assert_eq!(check.broken_edges == 0, normal, "({r},{rp})");
            }
        }
    }

    #[test]
    fn odd_class_tilde_crystal_can_be_connected() {
        // λ = 3ω1 + 2ω2: T0 and T1 lie in one Langlands component
        let t = doubled_a2_crystal(3, 2).unwrap().tilde_subcrystal();
        assert_eq!(t.len(), 9);
        assert_eq!(t.components().len(), 1);
        assert_eq!(t.sources().len(), 2);
    }

    #[test]
    fn phi_intertwines_with_squared_operators() {
        let (r, rp) = (6, 4);
        let big = doubled_a2_crystal(r, rp).unwrap();
        let ops = TableauCrystal::new(CartanData::a(2), Alphabet::A2, false).unwrap();
        let (s, sp) = a2_domain(A2Class::Zero, A2Map::Phi, r, rp).unwrap();
        let dom = ops
            .crystal(Tableau::highest(Alphabet::A2, Layout::Right, s, sp))
            .unwrap();
        let first = bijection_a2(A2Map::Phi, r, rp, &dom.elements[0]).unwrap();
        assert_eq!(params_of_a2(&first), Some((r, r + rp - 1, r + rp)));
        for t in &dom.elements {
            let img = bijection_a2(A2Map::Phi, r, rp, t).unwrap();
            let k = big.index_of(&img).unwrap();
            for i in 0..2 {
                let lhs = t.f(i).map(|u| bijection_a2(A2Map::Phi, r, rp, &u).unwrap());
                let rhs = big.f[i][k]
                    .and_then(|y| big.f[i][y])
                    .map(|y| big.elements[y].clone());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn omega12_prime_doubles_parameters() {
        let t = param_a2(1, 1, 2, 3, 3).unwrap();
        let img = bijection_a2(A2Map::PhiPrime, 3, 3, &t).unwrap();
        assert_eq!(params_of_a2(&img), Some((4, 6, 6)));
    }

    #[test]
    fn out_of_domain_inputs_are_rejected() {
        let t = Tableau::highest(Alphabet::A2, Layout::Right, 2, 2);
        assert!(bijection_a2(A2Map::Phi, 4, 4, &t).is_err());
        assert!(bijection_a2(A2Map::PhiPrime, 4, 4, &t).is_err());
    }
}
