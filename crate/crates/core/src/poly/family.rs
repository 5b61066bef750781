use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Exponent, MonomialOrder, PolyError};

pub type ExponentSet = BTreeSet<Exponent>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// `Σ αⱼ ≤ d`
    Total,
    /// `max αⱼ ≤ d`
    Max,
    /// `∏ (αⱼ + 1) ≤ d`, the positive orthant of the hyperbolic cross.
    Hyperbolic,
}

/// A nested sequence of finite exponent sets indexed by `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexFamily {
    pub kind: FamilyKind,
    pub n: usize,
}

impl IndexFamily {
    pub fn new(kind: FamilyKind, n: usize) -> Self {
        IndexFamily { kind, n }
    }

    pub fn total(n: usize) -> Self {
        Self::new(FamilyKind::Total, n)
    }

    pub fn max(n: usize) -> Self {
        Self::new(FamilyKind::Max, n)
    }

    pub fn hyperbolic(n: usize) -> Self {
        Self::new(FamilyKind::Hyperbolic, n)
    }

    pub fn contains(&self, exp: &Exponent, d: usize) -> bool {
        if exp.len() != self.n || !exp.is_natural() {
            return false;
        }
        let d = d as i64;
        let c = exp.coords();
        match self.kind {
            FamilyKind::Total => c.iter().sum::<i64>() <= d,
            FamilyKind::Max => c.iter().all(|&a| a <= d),
            FamilyKind::Hyperbolic => {
                let mut prod = 1i64;
                for &a in c {
                    prod = prod.saturating_mul(a + 1);
                    if prod > d {
                        return false;
                    }
                }
                true
            }
        }
    }

    pub fn members(&self, d: usize) -> ExponentSet {
        // every member has coordinates bounded by d in all three families
        let mut out = ExponentSet::new();
        let mut current = vec![0i64; self.n];
        self.enumerate(0, d as i64, &mut current, &mut out, d);
        out
    }

    fn enumerate(&self, i: usize, bound: i64, cur: &mut Vec<i64>, out: &mut ExponentSet, d: usize) {
        if i == self.n {
            let e = Exponent::new(cur.clone());
            if self.contains(&e, d) {
                out.insert(e);
            }
            return;
        }
        for a in 0..=bound {
            cur[i] = a;
            let partial = Exponent::new(
                cur[..=i]
                    .iter()
                    .copied()
                    .chain(std::iter::repeat_n(0, self.n - i - 1))
                    .collect(),
            );
            if !self.contains(&partial, d) {
                break;
            }
            self.enumerate(i + 1, bound, cur, out, d);
        }
        cur[i] = 0;
    }

    /// Members sorted ascending by `order`.
    pub fn members_sorted(&self, d: usize, order: &MonomialOrder) -> Vec<Exponent> {
        order.sorted(&self.members(d))
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Total => "total",
            FamilyKind::Max => "max",
            FamilyKind::Hyperbolic => "hyperbolic",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "total" | "T" => Ok(FamilyKind::Total),
            "max" | "M" => Ok(FamilyKind::Max),
            "hyperbolic" | "C" => Ok(FamilyKind::Hyperbolic),
            other => Err(PolyError::UnknownFamily(other.to_string())),
        }
    }
}

pub fn minkowski_sum(a: &ExponentSet, b: &ExponentSet) -> ExponentSet {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x + y))
        .collect()
}

/// `{b − a : a ∈ A, b ∈ B}` over ℤⁿ.
pub fn minkowski_difference(a: &ExponentSet, b: &ExponentSet) -> ExponentSet {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| y - x))
        .collect()
}

pub fn is_order_ideal(d: &ExponentSet) -> bool {
    d.iter()
        .all(|e| e.is_natural() && e.predecessors().all(|p| d.contains(&p)))
}

/// `(X₁D ∪ … ∪ XₙD) \ D`, with the convention `∂(∅) = {1}`.
pub fn border(d: &ExponentSet, n: usize) -> Result<ExponentSet, PolyError> {
    if let Some(e) = d.iter().find(|e| e.len() != n) {
        return Err(PolyError::DimensionMismatch {
            expected: n,
            found: e.len(),
        });
    }
    if !is_order_ideal(d) {
        return Err(PolyError::NotOrderIdeal);
    }
    if d.is_empty() {
        return Ok(std::iter::once(Exponent::zero(n)).collect());
    }
    Ok(d.iter()
        .flat_map(|e| (0..n).map(move |i| e.with_coord(i, 1)))
        .filter(|e| !d.contains(e))
        .collect())
}

/// Whether every member of `d` precedes every monomial outside it.
///
/// For an order ideal every non-member is a multiple of a border element,
/// and multiples never decrease under a monomial order, so comparing
/// `max(d)` with `min(∂d)` decides the condition for every supported order.
pub fn is_distinguished(d: &ExponentSet, order: &MonomialOrder) -> bool {
    if !is_order_ideal(d) || d.iter().any(|e| e.len() != order.n()) {
        return false;
    }
    let Ok(b) = border(d, order.n()) else {
        return false;
    };
    match (order.max(d), order.min(&b)) {
        (Some(top), Some(low)) => order.compare(top, low).is_lt(),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::OrderKind;
    use proptest::prelude::*;

    fn set(v: &[&[i64]]) -> ExponentSet {
        v.iter().map(|c| Exponent::new(c.to_vec())).collect()
    }

    fn binomial(n: u64, k: u64) -> u64 {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }

    #[test]
    fn family_examples() {
        assert_eq!(
            IndexFamily::total(2).members(1),
            set(&[&[0, 0], &[1, 0], &[0, 1]])
        );
        assert_eq!(IndexFamily::total(2).members(4).len(), 15);
        // enumerate all α with (α₁+1)(α₂+1) ≤ 2 over a generous box
        let brute: ExponentSet = (0..5)
            .flat_map(|a| (0..5).map(move |b| (a, b)))
            .filter(|(a, b)| (a + 1) * (b + 1) <= 2)
            .map(|(a, b)| Exponent::from([a, b]))
            .collect();
        assert_eq!(IndexFamily::hyperbolic(2).members(2), brute);
        assert_eq!(brute, set(&[&[0, 0], &[1, 0], &[0, 1]]));
        assert!(IndexFamily::hyperbolic(2).members(0).is_empty());
        assert_eq!(IndexFamily::max(2).members(2).len(), 9);
    }

    #[test]
    fn members_sorted_by_order() {
        let v = IndexFamily::total(2).members_sorted(2, &MonomialOrder::degrevlex(2));
        let expect: Vec<Exponent> = [[0, 0], [0, 1], [1, 0], [0, 2], [1, 1], [2, 0]]
            .into_iter()
            .map(Exponent::from)
            .collect();
        assert_eq!(v, expect);
    }

    #[test]
    fn sums_and_differences() {
        let t2 = IndexFamily::total(2).members(2);
        assert_eq!(minkowski_sum(&t2, &t2).len(), 15);
        assert_eq!(minkowski_difference(&t2, &t2).len(), 19);
        assert!(minkowski_sum(&ExponentSet::new(), &t2).is_empty());
        for d in 1..=3 {
            let m = IndexFamily::max(2).members(d);
            assert_eq!(
                minkowski_sum(&m, &m).len(),
                minkowski_difference(&m, &m).len()
            );
        }
    }

    #[test]
    fn border_examples() {
        let t1 = IndexFamily::total(2).members(1);
        assert_eq!(border(&t1, 2).unwrap(), set(&[&[2, 0], &[1, 1], &[0, 2]]));
        assert_eq!(border(&ExponentSet::new(), 2).unwrap(), set(&[&[0, 0]]));
        assert_eq!(border(&set(&[&[0]]), 1).unwrap(), set(&[&[1]]));
        assert_eq!(border(&set(&[&[1, 0]]), 2), Err(PolyError::NotOrderIdeal));
    }

    #[test]
    fn distinguished_examples() {
        for d in 0..5 {
            assert!(is_distinguished(
                &IndexFamily::total(2).members(d),
                &MonomialOrder::degrevlex(2)
            ));
            assert!(is_distinguished(
                &IndexFamily::total(3).members(d),
                &MonomialOrder::grlex(3)
            ));
        }
        for kind in [OrderKind::Lex, OrderKind::Grlex, OrderKind::Degrevlex] {
            for prec in [vec![0, 1], vec![1, 0]] {
                let ord = MonomialOrder::with_precedence(kind, prec).unwrap();
                for d in 1..4 {
                    assert!(!is_distinguished(&IndexFamily::max(2).members(d), &ord));
                }
            }
        }
        assert!(is_distinguished(&set(&[&[0, 0]]), &MonomialOrder::lex(2)));
        // lex: {1, X2, X2^2} precedes everything involving X1
        assert!(is_distinguished(
            &set(&[&[0, 0], &[0, 1], &[0, 2]]),
            &MonomialOrder::lex(2)
        ));
        assert!(!is_distinguished(
            &set(&[&[0, 0], &[1, 0]]),
            &MonomialOrder::lex(2)
        ));
        assert!(!is_distinguished(
            &set(&[&[1, 0]]),
            &MonomialOrder::degrevlex(2)
        ));
    }

    #[test]
    fn total_degree_count_is_binomial() {
        for n in 1..=4usize {
            for d in 0..=8usize {
                assert_eq!(
                    IndexFamily::total(n).members(d).len() as u64,
                    binomial((n + d) as u64, d as u64)
                );
            }
        }
    }

    #[test]
    fn families_are_monotone() {
        for kind in [FamilyKind::Total, FamilyKind::Max, FamilyKind::Hyperbolic] {
            for n in 1..=3 {
                let fam = IndexFamily::new(kind, n);
                for d in 0..12 {
                    assert!(
                        fam.members(d).is_subset(&fam.members(d + 1)),
                        "{kind} n={n} d={d}"
                    );
                }
            }
        }
    }

    fn order_ideal() -> impl Strategy<Value = ExponentSet> {
        prop::collection::vec(prop::collection::vec(0i64..4, 3), 0..6).prop_map(|gens| {
            // downward closure of random generators
            let mut out = ExponentSet::new();
            let mut stack: Vec<Exponent> = gens.into_iter().map(Exponent::new).collect();
            while let Some(e) = stack.pop() {
                if out.insert(e.clone()) {
                    stack.extend(e.predecessors());
                }
            }
            out
        })
    }

    proptest! {
        #[test]
        fn border_properties(d in order_ideal()) {
            let b = border(&d, 3).unwrap();
            prop_assert!(b.is_disjoint(&d));
            let union: ExponentSet = d.union(&b).cloned().collect();
            prop_assert!(is_order_ideal(&union));
        }
    }
}
