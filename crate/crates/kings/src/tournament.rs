//! Weak selections on finite ground sets and their king structure.
//!
//! Players are indices `0..n`. The selection is stored as one bit per
//! unordered pair in lexicographic pair order; a set bit means the pair's
//! higher index is selected. That makes exhaustive enumeration plain integer
//! counting and keeps a 512-player tournament at 16 KiB.

use std::collections::BTreeMap;

use crate::Error;

/// Lexicographic rank of the pair `{i, j}` with `i < j` among all pairs on
/// `0..n`: `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
#[inline]
pub(crate) fn pair_rank(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Number of unordered pairs on `n` players, erroring on overflow instead of
/// wrapping (documents can name absurd player counts).
pub(crate) fn pair_count(n: usize) -> Result<usize, Error> {
    n.checked_mul(n.saturating_sub(1))
        .map(|m| m / 2)
        .ok_or_else(|| Error::field("n", format!("{n} players would overflow the pair table")))
}

/// A weak selection on `n` players: one chosen element per unordered pair.
///
/// `choice(i, j)` returns the element the selection picks; under the
/// dominance convention, the *other* element of the pair is the winner, so
/// `arrow(a, b)` (`a` dominates `b`) holds iff `a == b` or `choice(a, b) == b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeakSelection {
    n: usize,
    /// Bit `pair_rank(i, j)` set means `choice({i, j}) = j` (the higher index).
    bits: Vec<u64>,
}

impl std::fmt::Debug for WeakSelection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WeakSelection(n={}", self.n)?;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                write!(f, ", {{{i},{j}}}->{}", self.choice(i, j))?;
            }
        }
        write!(f, ")")
    }
}

impl WeakSelection {
    /// Builds a selection by asking `choose(i, j)` (with `i < j`) for every
    /// pair; the answer must be `i` or `j`.
    pub fn from_choices(
        n: usize,
        mut choose: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self, Error> {
        let m = pair_count(n)?;
        let mut sel = WeakSelection {
            n,
            bits: vec![0u64; m.div_ceil(64)],
        };
        for i in 0..n {
            for j in (i + 1)..n {
                let pick = choose(i, j);
                if pick == j {
                    let r = pair_rank(n, i, j);
                    sel.bits[r / 64] |= 1 << (r % 64);
                } else if pick != i {
                    return Err(Error::field(
                        "choice",
                        format!("choice({{{i},{j}}}) = {pick} is not a member of the pair"),
                    ));
                }
            }
        }
        Ok(sel)
    }

    /// The `code`-th tournament on `n` players in lexicographic order of the
    /// pair-choice bit vector (pair 0 is the most significant bit).
    fn from_code(n: usize, code: u64) -> Self {
        let m = pair_count(n).expect("enumeration sizes are tiny");
        debug_assert!(m <= 63);
        let mut sel = WeakSelection {
            n,
            bits: vec![0u64; m.div_ceil(64)],
        };
        for r in 0..m {
            if code >> (m - 1 - r) & 1 == 1 {
                sel.bits[r / 64] |= 1 << (r % 64);
            }
        }
        sel
    }

    /// Number of players.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The element the selection picks from `{a, b}`.
    ///
    /// Panics if `a == b` or either index is out of range.
    pub fn choice(&self, a: usize, b: usize) -> usize {
        assert!(a < self.n && b < self.n, "player index out of range");
        assert!(a != b, "choice is defined on pairs of distinct players");
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        let r = pair_rank(self.n, i, j);
        if self.bits[r / 64] >> (r % 64) & 1 == 1 {
            j
        } else {
            i
        }
    }

    /// The dominance relation: `a` dominates `b` iff `a == b` or the
    /// selection picks `b` from the pair.
    ///
    /// Panics if either index is out of range.
    pub fn arrow(&self, a: usize, b: usize) -> bool {
        assert!(a < self.n && b < self.n, "player index out of range");
        a == b || self.choice(a, b) == b
    }

    /// Number of players `a` beats (self excluded).
    pub fn out_degree(&self, a: usize) -> usize {
        assert!(a < self.n, "player index out of range");
        (0..self.n).filter(|&b| b != a && self.arrow(a, b)).count()
    }

    /// A king found the classical way: any vertex of maximum out-degree is a
    /// king in a finite tournament. Ties break to the lowest index.
    pub fn landau_king(&self) -> Result<usize, Error> {
        if self.n == 0 {
            return Err(Error::EmptyTournament);
        }
        Ok((0..self.n)
            .map(|a| (a, self.out_degree(a)))
            .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)))
            .expect("non-empty")
            .0)
    }

    /// `K_x`: the players that reach `x` in at most two dominance steps,
    /// computed straight from the definition (scan over intermediates).
    ///
    /// Always contains `x` itself. Sorted ascending.
    pub fn k_set(&self, x: usize) -> Vec<usize> {
        assert!(x < self.n, "player index out of range");
        (0..self.n)
            .filter(|&z| (0..self.n).any(|y| self.arrow(z, y) && self.arrow(y, x)))
            .collect()
    }

    /// `K_x` again, but computed by composing the dominance relation with
    /// itself as a boolean matrix product restricted to target column `x`.
    ///
    /// Independent of [`k_set`](Self::k_set) in everything but the answer;
    /// the two are cross-checked exhaustively in the test suite.
    pub fn k_set_via_composition(&self, x: usize) -> Vec<usize> {
        assert!(x < self.n, "player index out of range");
        DominanceRelation::from_selection(self).compose_into_target(x)
    }

    /// Whether `z` is a king; on success returns one witness intermediate per
    /// target (the lowest-index `y` with `z -> y -> x`).
    pub fn is_king(&self, z: usize) -> Option<BTreeMap<usize, usize>> {
        assert!(z < self.n, "player index out of range");
        let mut witnesses = BTreeMap::new();
        for x in 0..self.n {
            let y = (0..self.n).find(|&y| self.arrow(z, y) && self.arrow(y, x))?;
            witnesses.insert(x, y);
        }
        Some(witnesses)
    }

    /// The king set, cheapest available route (dominance bitsets).
    pub fn kings(&self) -> Result<Vec<usize>, Error> {
        if self.n == 0 {
            return Err(Error::EmptyTournament);
        }
        let rel = DominanceRelation::from_selection(self);
        Ok((0..self.n).filter(|&z| rel.covers_all(z)).collect())
    }

    /// Full king analysis: the king set, every `K_x`, and a two-step witness
    /// for every (king, target) pair.
    ///
    /// Materializes all n k-sets; prefer [`kings`](Self::kings) when only the
    /// king set matters at large n.
    pub fn king_report(&self) -> Result<KingReport, Error> {
        if self.n == 0 {
            return Err(Error::EmptyTournament);
        }
        let rel = DominanceRelation::from_selection(self);
        let mut k_sets: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        let mut kings = Vec::new();
        for z in 0..self.n {
            let reach = rel.two_step_row(z);
            let mut all = true;
            for x in 0..self.n {
                if reach[x / 64] >> (x % 64) & 1 == 1 {
                    k_sets[x].push(z);
                } else {
                    all = false;
                }
            }
            if all {
                kings.push(z);
            }
        }
        let mut witnesses = BTreeMap::new();
        for &z in &kings {
            for x in 0..self.n {
                let y = (0..self.n)
                    .find(|&y| self.arrow(z, y) && self.arrow(y, x))
                    .expect("king reaches every target");
                witnesses.insert((z, x), y);
            }
        }
        Ok(KingReport {
            kings,
            k_sets,
            witnesses,
        })
    }

    /// Restricts the selection to `subset`, preserving pair choices.
    ///
    /// Returns the restricted selection together with the re-indexing table
    /// (`table[new] = old`). `subset` must be non-empty, in range, and free
    /// of duplicates; its order fixes the new indexing.
    pub fn restrict(&self, subset: &[usize]) -> Result<(WeakSelection, Vec<usize>), Error> {
        if subset.is_empty() {
            return Err(Error::field("subset", "must not be empty"));
        }
        let mut seen = vec![false; self.n];
        for &p in subset {
            if p >= self.n {
                return Err(Error::PlayerOutOfRange {
                    index: p,
                    n: self.n,
                });
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::field("subset", format!("duplicate player {p}")));
            }
        }
        let table = subset.to_vec();
        let sub = WeakSelection::from_choices(subset.len(), |i, j| {
            if self.choice(table[i], table[j]) == table[i] {
                i
            } else {
                j
            }
        })?;
        Ok((sub, table))
    }
}

/// Every labeled tournament on `n` players, in lexicographic order of the
/// pair-choice bit vector. `n` is capped at 6 (32768 tournaments).
pub fn enumerate_tournaments(n: usize) -> Result<impl Iterator<Item = WeakSelection>, Error> {
    if !(1..=6).contains(&n) {
        return Err(Error::field(
            "n",
            format!("exhaustive enumeration supports 1..=6 players, got {n}"),
        ));
    }
    let m = pair_count(n)?;
    Ok((0u64..1 << m).map(move |code| WeakSelection::from_code(n, code)))
}

/// The dominance relation of a selection, materialized as one bitset row per
/// player (`rows[a]` holds everything `a` dominates, including `a`).
///
/// Reflexive by construction; off the diagonal exactly one of `(a, b)`,
/// `(b, a)` is set because the underlying selection is total on pairs.
pub struct DominanceRelation {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl DominanceRelation {
    pub fn from_selection(sel: &WeakSelection) -> Self {
        let n = sel.len();
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for a in 0..n {
            rows[a * words + a / 64] |= 1 << (a % 64);
            for b in (a + 1)..n {
                if sel.choice(a, b) == b {
                    rows[a * words + b / 64] |= 1 << (b % 64);
                } else {
                    rows[b * words + a / 64] |= 1 << (a % 64);
                }
            }
        }
        DominanceRelation { n, words, rows }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn arrow(&self, a: usize, b: usize) -> bool {
        assert!(a < self.n && b < self.n, "player index out of range");
        self.row(a)[b / 64] >> (b % 64) & 1 == 1
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.rows[a * self.words..(a + 1) * self.words]
    }

    /// Union of the rows of everything `z` dominates: the set `z` reaches in
    /// at most two steps.
    fn two_step_row(&self, z: usize) -> Vec<u64> {
        let mut acc = vec![0u64; self.words];
        let zrow = self.row(z);
        for y in 0..self.n {
            if zrow[y / 64] >> (y % 64) & 1 == 1 {
                for (a, r) in acc.iter_mut().zip(self.row(y)) {
                    *a |= r;
                }
            }
        }
        acc
    }

    /// Whether `z` two-step-reaches every player.
    fn covers_all(&self, z: usize) -> bool {
        let reach = self.two_step_row(z);
        for (w, word) in reach.iter().enumerate() {
            let width = (self.n - w * 64).min(64);
            let mask = if width == 64 { !0 } else { (1u64 << width) - 1 };
            if word & mask != mask {
                return false;
            }
        }
        true
    }

    /// The composition route to `K_x`: pairs the relation with itself and
    /// keeps the first coordinate of every two-step chain ending at `x`.
    ///
    /// `z` belongs iff `row(z)` meets the set of in-neighbors of `x`.
    fn compose_into_target(&self, x: usize) -> Vec<usize> {
        let mut col = vec![0u64; self.words];
        for y in 0..self.n {
            if self.row(y)[x / 64] >> (x % 64) & 1 == 1 {
                col[y / 64] |= 1 << (y % 64);
            }
        }
        (0..self.n)
            .filter(|&z| self.row(z).iter().zip(&col).any(|(r, c)| r & c != 0))
            .collect()
    }
}

/// Result of a full king analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KingReport {
    /// The king set: intersection of all k-sets. Never empty for a non-empty
    /// tournament. Sorted ascending.
    pub kings: Vec<usize>,
    /// `k_sets[x]` = players reaching `x` in at most two steps, sorted.
    pub k_sets: Vec<Vec<usize>>,
    /// `(king z, target x) -> intermediate y` with `z -> y -> x`.
    pub witnesses: BTreeMap<(usize, usize), usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force king enumeration straight off the two-step definition.
    /// Kept deliberately naive: it is the oracle the implementation is
    /// checked against.
    fn brute_kings(sel: &WeakSelection) -> Vec<usize> {
        (0..sel.len())
            .filter(|&z| {
                (0..sel.len()).all(|x| (0..sel.len()).any(|y| sel.arrow(z, y) && sel.arrow(y, x)))
            })
            .collect()
    }

    /// 0 beats 1, 1 beats 2, 2 beats 0.
    fn three_cycle() -> WeakSelection {
        WeakSelection::from_choices(3, |i, j| match (i, j) {
            (0, 1) => 1,
            (1, 2) => 2,
            (0, 2) => 0,
            _ => unreachable!(),
        })
        .unwrap()
    }

    /// Larger index beats smaller: choice picks the loser, i.e. the minimum.
    fn transitive(n: usize) -> WeakSelection {
        WeakSelection::from_choices(n, |i, _| i).unwrap()
    }

    #[test]
    fn arrow_reflexive_and_oriented() {
        let sel = WeakSelection::from_choices(2, |_, j| j).unwrap();
        assert!(sel.arrow(0, 0));
        assert!(sel.arrow(0, 1));
        assert!(!sel.arrow(1, 0));
    }

    #[test]
    fn out_degrees() {
        let cycle = three_cycle();
        for a in 0..3 {
            assert_eq!(cycle.out_degree(a), 1);
        }
        assert_eq!(transitive(4).out_degree(3), 3);
        assert_eq!(transitive(1).out_degree(0), 0);
    }

    #[test]
    fn landau_king_examples() {
        assert_eq!(transitive(1).landau_king().unwrap(), 0);
        let t4 = transitive(4);
        assert_eq!(t4.landau_king().unwrap(), 3);
        assert_eq!(brute_kings(&t4), vec![3]);
        // All three cycle vertices are kings; tie-break pins index 0.
        let cycle = three_cycle();
        assert_eq!(cycle.landau_king().unwrap(), 0);
        assert_eq!(brute_kings(&cycle), vec![0, 1, 2]);
    }

    #[test]
    fn landau_rejects_empty() {
        let empty = WeakSelection::from_choices(0, |_, _| unreachable!()).unwrap();
        assert!(matches!(empty.landau_king(), Err(Error::EmptyTournament)));
        assert!(matches!(empty.king_report(), Err(Error::EmptyTournament)));
    }

    #[test]
    fn k_set_examples() {
        let cycle = three_cycle();
        assert_eq!(cycle.k_set(0), vec![0, 1, 2]);
        assert_eq!(transitive(3).k_set(2), vec![2]);
        for x in 0..3 {
            assert!(cycle.k_set(x).contains(&x));
        }
    }

    #[test]
    fn composition_route_agrees() {
        let cycle = three_cycle();
        assert_eq!(cycle.k_set_via_composition(1), vec![0, 1, 2]);
        assert_eq!(cycle.k_set_via_composition(1), cycle.k_set(1));
        let single = transitive(1);
        assert_eq!(single.k_set_via_composition(0), vec![0]);
    }

    #[test]
    fn king_report_examples() {
        assert_eq!(three_cycle().king_report().unwrap().kings, vec![0, 1, 2]);
        assert_eq!(transitive(4).king_report().unwrap().kings, vec![3]);
        // 2 players, selection picks 0, so 1 beats 0.
        let sel = WeakSelection::from_choices(2, |i, _| i).unwrap();
        assert_eq!(sel.king_report().unwrap().kings, vec![1]);
        assert_eq!(brute_kings(&sel), vec![1]);
    }

    #[test]
    fn king_report_internal_consistency() {
        for sel in enumerate_tournaments(4).unwrap() {
            let report = sel.king_report().unwrap();
            assert_eq!(report.kings, brute_kings(&sel));
            assert_eq!(report.kings, sel.kings().unwrap());
            // kings = intersection of all k-sets
            let inter: Vec<usize> = (0..sel.len())
                .filter(|z| report.k_sets.iter().all(|ks| ks.contains(z)))
                .collect();
            assert_eq!(report.kings, inter);
            // every witness is a valid two-step chain
            for (&(z, x), &y) in &report.witnesses {
                assert!(sel.arrow(z, y) && sel.arrow(y, x));
            }
            for &z in &report.kings {
                for x in 0..sel.len() {
                    assert!(report.witnesses.contains_key(&(z, x)));
                }
            }
        }
    }

    #[test]
    fn is_king_examples() {
        let t4 = transitive(4);
        let witnesses = t4.is_king(3).expect("3 is the king");
        for (&x, &y) in &witnesses {
            assert!(t4.arrow(3, y) && t4.arrow(y, x));
        }
        assert!(t4.is_king(0).is_none());
        assert!(transitive(1).is_king(0).is_some());
    }

    #[test]
    fn restrict_examples() {
        let cycle = three_cycle();
        let (pair, table) = cycle.restrict(&[0, 1]).unwrap();
        assert_eq!(table, vec![0, 1]);
        assert_eq!(pair.king_report().unwrap().kings, vec![0]);

        // restriction to the full set is the identity
        let (same, table) = cycle.restrict(&[0, 1, 2]).unwrap();
        assert_eq!(table, vec![0, 1, 2]);
        assert_eq!(same, cycle);

        // any 2-element restriction has the pair winner as unique king
        let t4 = transitive(4);
        let (sub, table) = t4.restrict(&[1, 3]).unwrap();
        let kings = sub.king_report().unwrap().kings;
        assert_eq!(kings.len(), 1);
        assert_eq!(table[kings[0]], 3);
    }

    #[test]
    fn restrict_rejects_bad_subsets() {
        let cycle = three_cycle();
        assert!(cycle.restrict(&[]).is_err());
        assert!(cycle.restrict(&[0, 0]).is_err());
        assert!(cycle.restrict(&[0, 7]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_tournaments(2).unwrap().count(), 2);
        assert_eq!(enumerate_tournaments(4).unwrap().count(), 64);
        assert_eq!(enumerate_tournaments(6).unwrap().count(), 32768);
        assert!(enumerate_tournaments(0).is_err());
        assert!(enumerate_tournaments(7).is_err());
    }

    #[test]
    fn enumeration_is_lexicographic_and_distinct() {
        let all: Vec<WeakSelection> = enumerate_tournaments(3).unwrap().collect();
        assert_eq!(all.len(), 8);
        // first tournament picks the lower index everywhere, last the higher
        assert_eq!(all[0].choice(0, 1), 0);
        assert_eq!(all[0].choice(1, 2), 1);
        assert_eq!(all[7].choice(0, 1), 1);
        // lexicographic: pair (0,1) is the most significant bit
        assert_eq!(all[1].choice(0, 1), 0);
        assert_eq!(all[1].choice(1, 2), 2);
        assert_eq!(all[4].choice(0, 1), 1);
        assert_eq!(all[4].choice(0, 2), 0);
        assert_eq!(all[4].choice(1, 2), 1);
        for (a, sel_a) in all.iter().enumerate() {
            for sel_b in &all[a + 1..] {
                assert_ne!(sel_a, sel_b);
            }
        }
    }

    #[test]
    fn dominance_relation_invariants() {
        for sel in enumerate_tournaments(5).unwrap().step_by(17) {
            let rel = DominanceRelation::from_selection(&sel);
            for a in 0..5 {
                assert!(rel.arrow(a, a));
                for b in 0..5 {
                    assert_eq!(rel.arrow(a, b), sel.arrow(a, b));
                    if a != b {
                        assert_ne!(rel.arrow(a, b), rel.arrow(b, a));
                    }
                }
            }
        }
    }

    #[test]
    fn choice_panics_on_self_pair() {
        let result = std::panic::catch_unwind(|| three_cycle().choice(1, 1));
        assert!(result.is_err());
    }
}
