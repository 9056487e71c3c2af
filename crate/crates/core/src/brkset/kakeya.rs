use crate::ffield::{Elem, Field};
use crate::multiplicity::grid_points;

use super::PointSet;

/// A Kakeya set in `F_q^n`.
///
/// The trivial choice is the whole space. The small construction takes the
/// hyperplane `x_n = 0`, which covers every direction with `b_n = 0`, plus for
/// each `b = (b_1, .., b_(n-1), 1)` the line `{(b_i^2 + t b_i)_i, t}`.
pub fn kakeya_set(field: &Field, n: usize, besicovitch: bool) -> PointSet {
    assert!(n >= 2, "dimension must be at least 2");
    if !besicovitch {
        return PointSet::full(field, n);
    }
    let f = field;
    let all: Vec<Elem> = f.elements().collect();
    let mut s = PointSet::new(f, n);
    for head in grid_points(&all, n - 1) {
        let mut pt = head;
        pt.push(f.zero());
        s.insert(pt);
    }
    for b in grid_points(&all, n - 1) {
        for &t in &all {
            let mut pt: Vec<Elem> = b.iter().map(|&bi| f.add(f.mul(bi, bi), f.mul(t, bi))).collect();
            pt.push(t);
            s.insert(pt);
        }
    }
    debug_assert!(verify_kakeya(&s).is_none());
    s
}

/// First normalised direction (leading nonzero coordinate 1) along which the
/// set contains no full line, or `None` if the set is Kakeya.
pub fn verify_kakeya(set: &PointSet) -> Option<Vec<Elem>> {
    let f = set.field();
    let n = set.dim();
    let all: Vec<Elem> = f.elements().collect();
    let directions = grid_points(&all, n).filter(|b| b.iter().find(|c| !c.is_zero()) == Some(&f.one()));
    for b in directions {
        let has_line = set.iter().any(|a| {
            all.iter().all(|&t| {
                let pt: Vec<Elem> = a.iter().zip(&b).map(|(&x, &y)| f.add(x, f.mul(t, y))).collect();
                set.contains(&pt)
            })
        });
        if !has_line {
            return Some(b);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_sets() {
        let f3 = Field::prime(3).unwrap();
        let s = kakeya_set(&f3, 2, false);
        assert_eq!(s.len(), 9);
        assert!(verify_kakeya(&s).is_none());
        assert_eq!(kakeya_set(&Field::prime(2).unwrap(), 2, false).len(), 4);
    }

    #[test]
    fn small_construction_is_kakeya_and_smaller() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let f = Field::with_order(q).unwrap();
            for n in 2..=3 {
                if q > 5 && n == 3 {
                    continue;
                }
                let s = kakeya_set(&f, n, true);
                assert!(verify_kakeya(&s).is_none(), "q={q} n={n}");
                if q > 2 {
                    assert!(s.len() < (q as usize).pow(n as u32), "q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn a_line_alone_is_not_kakeya() {
        let f = Field::prime(3).unwrap();
        let line = PointSet::from_points(&f, 2, f.elements().map(|t| vec![t, f.zero()])).unwrap();
        assert_eq!(verify_kakeya(&line), Some(vec![f.zero(), f.one()]));
    }
}
