//! The index poset on `[1,n] x [1,n]`, its order ideals, and the coordinate
//! subspaces of the Borel subalgebra they cut out.
//!
//! The order is `(i,j) <= (r,s)` iff `i >= r` and `j <= s`. An ideal `S` is a
//! downward-closed subset; `b[S]` denotes the subspace of upper-triangular
//! matrices vanishing at the positions of `S`.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::modp;

/// Maximum n for ideal enumeration; beyond this the family is no longer
/// desk-scale.
pub const MAX_ENUMERATION_N: usize = 5;

/// A 1-based matrix position.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Position {
    pub i: usize,
    pub j: usize,
}

impl Position {
    pub fn new(i: usize, j: usize) -> Position {
        Position { i, j }
    }

    pub fn in_range(&self, n: usize) -> bool {
        self.i >= 1 && self.i <= n && self.j >= 1 && self.j <= n
    }

    pub fn is_upper(&self) -> bool {
        self.i <= self.j
    }

    /// Anti-diagonal level `i + n - j`; constant on the stripes that carry
    /// the shift matrices.
    pub fn level(&self, n: usize) -> usize {
        self.i + n - self.j
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.i, self.j).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (i, j) = <(usize, usize)>::deserialize(d)?;
        Ok(Position { i, j })
    }
}

/// The partial order: `a <= b` iff `a.i >= b.i` and `a.j <= b.j`.
pub fn leq(a: Position, b: Position) -> bool {
    a.i >= b.i && a.j <= b.j
}

/// Whether a set of positions is downward closed. Positions out of range are
/// a domain error.
pub fn is_ideal(members: &BTreeSet<Position>, n: usize) -> Result<bool> {
    for &p in members {
        if !p.in_range(n) {
            return Err(Error::PositionOutOfRange { i: p.i, j: p.j, n });
        }
    }
    Ok(closure_violation(members, n).is_none())
}

/// First `(present, missing)` witness against downward closure, if any.
fn closure_violation(members: &BTreeSet<Position>, n: usize) -> Option<(Position, Position)> {
    for &b in members {
        for i in b.i..=n {
            for j in 1..=b.j {
                let a = Position::new(i, j);
                if !members.contains(&a) {
                    return Some((b, a));
                }
            }
        }
    }
    None
}

/// An order ideal of the index poset. Construction validates downward
/// closure, so a value of this type is always a genuine ideal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct PosetIdeal {
    n: usize,
    members: BTreeSet<Position>,
}

impl PosetIdeal {
    pub fn new(n: usize, members: impl IntoIterator<Item = Position>) -> Result<PosetIdeal> {
        let members: BTreeSet<Position> = members.into_iter().collect();
        for &p in &members {
            if !p.in_range(n) {
                return Err(Error::PositionOutOfRange { i: p.i, j: p.j, n });
            }
        }
        if let Some((present, missing)) = closure_violation(&members, n) {
            return Err(Error::NotAnIdeal {
                pi: present.i,
                pj: present.j,
                mi: missing.i,
                mj: missing.j,
            });
        }
        Ok(PosetIdeal { n, members })
    }

    pub fn empty(n: usize) -> PosetIdeal {
        PosetIdeal {
            n,
            members: BTreeSet::new(),
        }
    }

    pub fn full(n: usize) -> PosetIdeal {
        let members = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| Position::new(i, j)))
            .collect();
        PosetIdeal { n, members }
    }

    /// The strict lower triangle; the largest ideal with `b[S] = b`.
    pub fn strict_lower(n: usize) -> PosetIdeal {
        let members = (2..=n)
            .flat_map(|i| (1..i).map(move |j| Position::new(i, j)))
            .collect();
        PosetIdeal { n, members }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &BTreeSet<Position> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: Position) -> bool {
        self.members.contains(&p)
    }

    /// Members on or above the diagonal, row-major.
    pub fn upper_members(&self) -> Vec<Position> {
        self.members.iter().copied().filter(Position::is_upper).collect()
    }

    /// The coordinates of `b[S]`: upper positions not in the ideal,
    /// row-major.
    pub fn free_positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in i..=self.n {
                let p = Position::new(i, j);
                if !self.members.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// All members with no strictly larger member, row-major.
    pub fn maximal_elements(&self) -> Vec<Position> {
        self.members
            .iter()
            .copied()
            .filter(|&b| !self.members.iter().any(|&c| c != b && leq(b, c)))
            .collect()
    }

    /// Extend by one position, revalidating closure.
    pub fn with_added(&self, p: Position) -> Result<PosetIdeal> {
        let mut members = self.members.clone();
        members.insert(p);
        PosetIdeal::new(self.n, members)
    }

    /// Remove a maximal element. Panics if removal breaks closure, which
    /// cannot happen for maximal elements.
    pub fn without_maximal(&self, p: Position) -> PosetIdeal {
        let mut members = self.members.clone();
        members.remove(&p);
        debug_assert!(closure_violation(&members, self.n).is_none());
        PosetIdeal {
            n: self.n,
            members,
        }
    }

    /// Peel off maximal elements `(s,t)` with `s <= t`, recording each with
    /// its level `r = s + n - t`, until only strictly-lower members remain.
    /// Ties are broken by smallest `r`, then lexicographically smallest
    /// `(s,t)`, which makes reports reproducible.
    pub fn peel_sequence(&self) -> Vec<(Position, usize)> {
        let mut current = self.clone();
        let mut out = Vec::new();
        loop {
            let pick = current
                .maximal_elements()
                .into_iter()
                .filter(Position::is_upper)
                .min_by_key(|p| (p.level(self.n), p.i, p.j));
            let Some(p) = pick else { break };
            out.push((p, p.level(self.n)));
            current = current.without_maximal(p);
        }
        debug_assert!(current.members.iter().all(|p| !p.is_upper()));
        out
    }

    /// Canonical enumeration key: size first, then the sorted member list.
    fn canonical_key(&self) -> (usize, Vec<Position>) {
        (self.members.len(), self.members.iter().copied().collect())
    }
}

impl fmt::Display for PosetIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl<'de> Deserialize<'de> for PosetIdeal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            members: Vec<Position>,
        }
        let repr = Repr::deserialize(d)?;
        PosetIdeal::new(repr.n, repr.members).map_err(serde::de::Error::custom)
    }
}

/// All order ideals for the given n, in canonical order (by size, then
/// lexicographically on the sorted member lists).
///
/// Small n is done by filtering all subsets; n = 4..5 grows ideals one
/// maximal-eligible element at a time, since 2^(n^2) subsets are out of
/// reach while the ideal count stays small.
pub fn enumerate_ideals(n: usize) -> Result<Vec<PosetIdeal>> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::Capacity {
            what: "enumerate_ideals n",
            actual: n,
            cap: MAX_ENUMERATION_N,
        });
    }
    let mut ideals = if n <= 3 {
        enumerate_by_subsets(n)
    } else {
        enumerate_by_growth(n)
    };
    ideals.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
    Ok(ideals)
}

fn all_positions(n: usize) -> Vec<Position> {
    (1..=n)
        .flat_map(|i| (1..=n).map(move |j| Position::new(i, j)))
        .collect()
}

fn enumerate_by_subsets(n: usize) -> Vec<PosetIdeal> {
    let positions = all_positions(n);
    let mut out = Vec::new();
    for mask in 0u32..(1 << positions.len()) {
        let members: BTreeSet<Position> = positions
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        if closure_violation(&members, n).is_none() {
            out.push(PosetIdeal { n, members });
        }
    }
    out
}

fn enumerate_by_growth(n: usize) -> Vec<PosetIdeal> {
    let positions = all_positions(n);
    let mut seen: BTreeSet<BTreeSet<Position>> = BTreeSet::new();
    let mut frontier = vec![PosetIdeal::empty(n)];
    seen.insert(BTreeSet::new());
    let mut out = vec![PosetIdeal::empty(n)];
    while let Some(ideal) = frontier.pop() {
        for &p in &positions {
            if ideal.contains(p) {
                continue;
            }
            // p is addable iff everything below it is already present
            let addable = all_positions(n)
                .into_iter()
                .filter(|&a| a != p && leq(a, p))
                .all(|a| ideal.contains(a));
            if !addable {
                continue;
            }
            let mut members = ideal.members.clone();
            members.insert(p);
            if seen.insert(members.clone()) {
                let grown = PosetIdeal { n, members };
                out.push(grown.clone());
                frontier.push(grown);
            }
        }
    }
    out
}

/// Block sizes of a standard parabolic subgroup; positive, summing to n.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BlockComposition {
    sizes: Vec<usize>,
}

impl BlockComposition {
    pub fn new(sizes: Vec<usize>) -> Result<BlockComposition> {
        if sizes.is_empty() || sizes.iter().any(|&s| s == 0) {
            return Err(Error::domain(
                "block composition needs positive sizes summing to n",
            ));
        }
        Ok(BlockComposition { sizes })
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Block index of each row, 1-based rows.
    fn block_of_row(&self) -> Vec<usize> {
        let mut out = vec![0; self.n() + 1];
        let mut row = 1;
        for (b, &size) in self.sizes.iter().enumerate() {
            for _ in 0..size {
                out[row] = b;
                row += 1;
            }
        }
        out
    }
}

impl std::str::FromStr for BlockComposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad block size {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        BlockComposition::new(sizes)
    }
}

/// The ideal whose subspace `b[S]` is the strictly-upper-block-triangular
/// space of the parabolic: everything below the diagonal plus the on-or-above
/// positions inside the diagonal blocks.
pub fn parabolic_to_ideal(blocks: &BlockComposition) -> PosetIdeal {
    let n = blocks.n();
    let block = blocks.block_of_row();
    let mut members = BTreeSet::new();
    for i in 1..=n {
        for j in 1..=n {
            if i > j || block[i] == block[j] {
                members.insert(Position::new(i, j));
            }
        }
    }
    PosetIdeal::new(n, members).expect("block-structured sets are downward closed")
}

/// Whether the span of the elementary matrices at the given upper positions
/// is closed under bracket with every elementary matrix of the Borel
/// subalgebra. Checked exactly via the structure constants
/// `[E_ab, E_kl] = d_bk E_al - d_la E_kb`.
pub fn is_coordinate_lie_ideal(upper_subset: &BTreeSet<Position>, n: usize) -> Result<bool> {
    for &p in upper_subset {
        if !p.in_range(n) {
            return Err(Error::PositionOutOfRange { i: p.i, j: p.j, n });
        }
        if !p.is_upper() {
            return Err(Error::domain(format!(
                "position {p} is below the diagonal; the subspace must lie in the Borel"
            )));
        }
    }
    for i in 1..=n {
        for j in i..=n {
            let borel = Position::new(i, j);
            for &span in upper_subset {
                // [E_borel, E_span] as an exact integer matrix
                let mut bracket = std::collections::BTreeMap::<Position, i64>::new();
                if borel.j == span.i {
                    *bracket.entry(Position::new(borel.i, span.j)).or_insert(0) += 1;
                }
                if span.j == borel.i {
                    *bracket.entry(Position::new(span.i, borel.j)).or_insert(0) -= 1;
                }
                for (pos, coeff) in bracket {
                    if coeff != 0 && !upper_subset.contains(&pos) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Outcome of the randomized B-invariance test.
#[derive(Clone, Debug, Serialize)]
pub struct BInvarianceReport {
    pub passed: bool,
    pub trials: u32,
    /// On failure: the trial index, the basis position that was conjugated,
    /// and the ideal position where a nonzero entry appeared.
    pub witness: Option<(u32, Position, Position)>,
}

/// For `trials` random invertible upper-triangular matrices b over F_p,
/// checks that `b X b^-1` vanishes on the ideal positions for X running over
/// the elementary basis of `b[S]`. Deterministic for a fixed seed.
pub fn check_b_invariance(ideal: &PosetIdeal, p: u64, trials: u32, seed: u64) -> BInvarianceReport {
    assert!(p >= 2, "p must be a prime");
    assert!(trials >= 1);
    let n = ideal.n();
    let free = ideal.free_positions();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for trial in 0..trials {
        // nonzero diagonal makes the sample invertible outright
        let mut b = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    b[i][j] = rng.gen_range(1..p);
                } else if i < j {
                    b[i][j] = rng.gen_range(0..p);
                }
            }
        }
        let binv = modp::upper_triangular_inverse(&b, p);
        for &basis in &free {
            // b * E_{kl} * b^-1 has entries b[i][k] * binv[l][j]
            let (k, l) = (basis.i - 1, basis.j - 1);
            for &member in ideal.members() {
                let (i, j) = (member.i - 1, member.j - 1);
                let entry = modp::mul(b[i][k], binv[l][j], p);
                if entry != 0 {
                    return BInvarianceReport {
                        passed: false,
                        trials: trial + 1,
                        witness: Some((trial, basis, member)),
                    };
                }
            }
        }
    }
    BInvarianceReport {
        passed: true,
        trials,
        witness: None,
    }
}

/// Randomized B-stability test for the span of elementary matrices at
/// arbitrary upper positions (not necessarily of the `b[S]` form): conjugates
/// of the basis by random invertible upper-triangular matrices must stay
/// supported inside the span. Used by the census.
pub fn check_span_b_invariance(
    upper_subset: &BTreeSet<Position>,
    n: usize,
    p: u64,
    trials: u32,
    seed: u64,
) -> Result<bool> {
    for &q in upper_subset {
        if !q.in_range(n) {
            return Err(Error::PositionOutOfRange { i: q.i, j: q.j, n });
        }
        if !q.is_upper() {
            return Err(Error::domain(format!("position {q} is below the diagonal")));
        }
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut b = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in i..n {
                b[i][j] = if i == j {
                    rng.gen_range(1..p)
                } else {
                    rng.gen_range(0..p)
                };
            }
        }
        let binv = modp::upper_triangular_inverse(&b, p);
        for &basis in upper_subset {
            let (k, l) = (basis.i - 1, basis.j - 1);
            for i in 1..=n {
                for j in i..=n {
                    if upper_subset.contains(&Position::new(i, j)) {
                        continue;
                    }
                    if modp::mul(b[i - 1][k], binv[l][j - 1], p) != 0 {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos(i: usize, j: usize) -> Position {
        Position::new(i, j)
    }

    fn ideal(n: usize, members: &[(usize, usize)]) -> PosetIdeal {
        PosetIdeal::new(n, members.iter().map(|&(i, j)| pos(i, j))).unwrap()
    }

    #[test]
    fn order_relation() {
        assert!(leq(pos(2, 1), pos(1, 2)));
        assert!(leq(pos(1, 1), pos(1, 1)));
        assert!(!leq(pos(1, 1), pos(2, 2)));
        assert!(!leq(pos(2, 2), pos(1, 1)));
    }

    #[test]
    fn ideal_predicate() {
        let members: BTreeSet<Position> = [pos(2, 1)].into();
        assert!(is_ideal(&members, 2).unwrap());
        let members: BTreeSet<Position> = [pos(1, 1)].into();
        assert!(!is_ideal(&members, 2).unwrap());
        assert!(is_ideal(&BTreeSet::new(), 2).unwrap());
        let out_of_range: BTreeSet<Position> = [pos(3, 1)].into();
        assert!(is_ideal(&out_of_range, 2).is_err());
    }

    #[test]
    fn enumerate_small() {
        let ideals = enumerate_ideals(1).unwrap();
        assert_eq!(ideals.len(), 2);
        let ideals = enumerate_ideals(2).unwrap();
        assert_eq!(ideals.len(), 6);
        let expected: Vec<PosetIdeal> = vec![
            PosetIdeal::empty(2),
            ideal(2, &[(2, 1)]),
            ideal(2, &[(1, 1), (2, 1)]),
            ideal(2, &[(2, 1), (2, 2)]),
            ideal(2, &[(1, 1), (2, 1), (2, 2)]),
            PosetIdeal::full(2),
        ];
        assert_eq!(ideals, expected);
        assert!(enumerate_ideals(MAX_ENUMERATION_N + 1).is_err());
    }

    #[test]
    fn growth_agrees_with_subsets_for_n3() {
        let mut grown = enumerate_by_growth(3);
        grown.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
        let mut brute = enumerate_by_subsets(3);
        brute.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
        assert_eq!(grown, brute);
    }

    #[test]
    fn maximal_elements_examples() {
        let s = ideal(2, &[(2, 1), (1, 1), (2, 2)]);
        assert_eq!(s.maximal_elements(), vec![pos(1, 1), pos(2, 2)]);
        assert!(PosetIdeal::empty(2).maximal_elements().is_empty());
        assert_eq!(PosetIdeal::full(2).maximal_elements(), vec![pos(1, 2)]);
    }

    #[test]
    fn peel_sequence_tiebreak_and_termination() {
        let s = ideal(2, &[(2, 1), (1, 1), (2, 2)]);
        assert_eq!(s.peel_sequence(), vec![(pos(1, 1), 2), (pos(2, 2), 2)]);
        assert!(PosetIdeal::strict_lower(3).peel_sequence().is_empty());
        // the full square peels its maximum first
        let full = PosetIdeal::full(3);
        let seq = full.peel_sequence();
        assert_eq!(seq[0], (pos(1, 3), 1));
        assert_eq!(seq.len(), full.upper_members().len());
    }

    #[test]
    fn peel_keeps_ideals_along_the_way() {
        for ideal in enumerate_ideals(3).unwrap() {
            let mut cur = ideal.clone();
            for (p, _) in ideal.peel_sequence() {
                cur = cur.without_maximal(p);
                assert!(is_ideal(cur.members(), 3).unwrap());
            }
            assert!(cur.members().iter().all(|m| !m.is_upper()));
        }
    }

    #[test]
    fn parabolic_ideals() {
        let borel = parabolic_to_ideal(&BlockComposition::new(vec![1, 1]).unwrap());
        assert_eq!(borel, ideal(2, &[(2, 1), (1, 1), (2, 2)]));
        assert_eq!(borel.free_positions(), vec![pos(1, 2)]);

        let whole_group = parabolic_to_ideal(&BlockComposition::new(vec![2]).unwrap());
        assert_eq!(whole_group, PosetIdeal::full(2));
        assert!(whole_group.free_positions().is_empty());

        let p21 = parabolic_to_ideal(&BlockComposition::new(vec![2, 1]).unwrap());
        assert_eq!(p21.free_positions(), vec![pos(1, 3), pos(2, 3)]);
    }

    #[test]
    fn free_positions_examples() {
        assert_eq!(
            PosetIdeal::empty(2).free_positions(),
            vec![pos(1, 1), pos(1, 2), pos(2, 2)]
        );
        assert_eq!(
            ideal(2, &[(2, 1), (1, 1)]).free_positions(),
            vec![pos(1, 2), pos(2, 2)]
        );
        assert!(PosetIdeal::full(2).free_positions().is_empty());
    }

    #[test]
    fn coordinate_lie_ideal_examples() {
        let span: BTreeSet<Position> = [pos(1, 1), pos(1, 2)].into();
        assert!(is_coordinate_lie_ideal(&span, 2).unwrap());
        let not_ideal: BTreeSet<Position> = [pos(1, 1)].into();
        assert!(!is_coordinate_lie_ideal(&not_ideal, 2).unwrap());
        let full: BTreeSet<Position> = [pos(1, 1), pos(1, 2), pos(2, 2)].into();
        assert!(is_coordinate_lie_ideal(&full, 2).unwrap());
        let lower: BTreeSet<Position> = [pos(2, 1)].into();
        assert!(is_coordinate_lie_ideal(&lower, 2).is_err());
    }

    #[test]
    fn every_ideal_subspace_is_a_lie_ideal() {
        for n in 1..=4 {
            for s in enumerate_ideals(n).unwrap() {
                let span: BTreeSet<Position> = s.free_positions().into_iter().collect();
                assert!(
                    is_coordinate_lie_ideal(&span, n).unwrap(),
                    "b[S] not a Lie ideal for S = {s}"
                );
            }
        }
    }

    #[test]
    fn b_invariance_holds_for_ideals() {
        let s = ideal(2, &[(2, 1), (1, 1), (2, 2)]);
        assert!(check_b_invariance(&s, 5, 50, 7).passed);
        let trivial = PosetIdeal::new(1, [pos(1, 1)]).unwrap();
        assert!(check_b_invariance(&trivial, 3, 5, 0).passed);
        let parabolic = parabolic_to_ideal(&BlockComposition::new(vec![2, 1]).unwrap());
        assert!(check_b_invariance(&parabolic, 7, 50, 1).passed);
    }

    #[test]
    fn span_b_invariance_separates_stable_spans() {
        // {E_11, E_12} is B-stable; {E_11} alone is not (conjugation leaks
        // into the (1,2) slot)
        let stable: BTreeSet<Position> = [pos(1, 1), pos(1, 2)].into();
        assert!(check_span_b_invariance(&stable, 2, 101, 20, 3).unwrap());
        let unstable: BTreeSet<Position> = [pos(1, 1)].into();
        assert!(!check_span_b_invariance(&unstable, 2, 101, 20, 3).unwrap());
    }

    #[test]
    fn ideal_json_roundtrip() {
        let s = ideal(2, &[(2, 1), (1, 1)]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"n":2,"members":[[1,1],[2,1]]}"#);
        let back: PosetIdeal = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        // non-ideals are rejected on deserialization
        let bad: std::result::Result<PosetIdeal, _> =
            serde_json::from_str(r#"{"n":2,"members":[[1,1]]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn peel_length_counts_upper_members() {
        for n in 1..=3 {
            for s in enumerate_ideals(n).unwrap() {
                assert_eq!(s.peel_sequence().len(), s.upper_members().len());
            }
        }
    }
}
