//! Term orders.
//!
//! Every order is stored as a matrix order: a list of sparse integer rows, and
//! monomials compare by the lexicographic comparison of `row · exponents`.
//! The descriptive `OrderKind` is kept alongside for reports and cache keys.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ring::{BlockRing, Monomial};

/// Tie-break used after a weight row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TieBreak {
    Lex,
    DegRevLex,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    DegRevLex,
    Weight {
        weights: Vec<u32>,
        tie_break: TieBreak,
    },
    /// Any monomial involving a `front` variable beats every monomial free of them.
    Elimination {
        front: Vec<usize>,
        inner: Box<TermOrder>,
    },
}

type Row = Vec<(usize, i32)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermOrder {
    nvars: usize,
    kind: OrderKind,
    /// Variables from largest to smallest, used by lex/degrevlex and tie-breaks.
    priority: Vec<usize>,
    unrestricted: bool,
    rows: Vec<Row>,
}

fn lex_rows(priority: &[usize]) -> Vec<Row> {
    priority.iter().map(|&v| vec![(v, 1)]).collect()
}

fn degrevlex_rows(priority: &[usize]) -> Vec<Row> {
    let mut rows = vec![priority.iter().map(|&v| (v, 1)).collect::<Row>()];
    rows.extend(priority.iter().skip(1).rev().map(|&v| vec![(v, -1)]));
    rows
}

fn tie_rows(tie: TieBreak, priority: &[usize]) -> Vec<Row> {
    match tie {
        TieBreak::Lex => lex_rows(priority),
        TieBreak::DegRevLex => degrevlex_rows(priority),
    }
}

fn is_permutation(priority: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    priority.len() == n
        && priority.iter().all(|&v| {
            v < n && !std::mem::replace(&mut seen[v], true)
        })
}

impl TermOrder {
    fn build(nvars: usize, kind: OrderKind, priority: Vec<usize>, unrestricted: bool) -> Result<Self> {
        if !is_permutation(&priority, nvars) {
            return Err(Error::InvalidOrder(format!(
                "variable priority {priority:?} is not a permutation of 0..{nvars}"
            )));
        }
        let rows = match &kind {
            OrderKind::Lex => lex_rows(&priority),
            OrderKind::DegRevLex => degrevlex_rows(&priority),
            OrderKind::Weight { weights, tie_break } => {
                if weights.len() != nvars {
                    return Err(Error::InvalidOrder(format!(
                        "{} weights for {nvars} variables",
                        weights.len()
                    )));
                }
                if weights.iter().any(|&w| w > i32::MAX as u32 / 1024) {
                    return Err(Error::InvalidOrder("weight too large".into()));
                }
                let mut rows = vec![weights
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w != 0)
                    .map(|(v, &w)| (v, w as i32))
                    .collect::<Row>()];
                rows.extend(tie_rows(*tie_break, &priority));
                rows
            }
            OrderKind::Elimination { front, inner } => {
                if inner.nvars != nvars || front.iter().any(|&v| v >= nvars) {
                    return Err(Error::InvalidOrder("elimination order size mismatch".into()));
                }
                let mut rows = vec![front.iter().map(|&v| (v, 1)).collect::<Row>()];
                rows.extend(inner.rows.iter().cloned());
                rows
            }
        };
        Ok(TermOrder {
            nvars,
            kind,
            priority,
            unrestricted,
            rows,
        })
    }

    fn restricted(ring: &BlockRing, kind: OrderKind, priority: Vec<usize>) -> Result<Self> {
        let order = Self::build(ring.num_vars(), kind, priority, false)?;
        order.check_convention(ring)?;
        Ok(order)
    }

    fn canonical_priority(ring: &BlockRing) -> Vec<usize> {
        (0..ring.num_vars()).collect()
    }

    /// Degree reverse lexicographic, block 1 first, `x[i,1] > x[i,2] > …` within blocks.
    pub fn degrevlex(ring: &BlockRing) -> Self {
        Self::restricted(ring, OrderKind::DegRevLex, Self::canonical_priority(ring))
            .expect("canonical degrevlex respects the block convention")
    }

    pub fn lex(ring: &BlockRing) -> Self {
        Self::restricted(ring, OrderKind::Lex, Self::canonical_priority(ring))
            .expect("canonical lex respects the block convention")
    }

    /// Lex or degrevlex with an explicit variable priority (largest first).
    pub fn with_priority(ring: &BlockRing, kind: OrderKind, priority: Vec<usize>) -> Result<Self> {
        match kind {
            OrderKind::Lex | OrderKind::DegRevLex => Self::restricted(ring, kind, priority),
            _ => Err(Error::InvalidOrder(
                "with_priority takes lex or degrevlex".into(),
            )),
        }
    }

    /// Priority listing whole blocks in the given order (1-based block numbers).
    pub fn block_priority(ring: &BlockRing, blocks: &[usize]) -> Result<Vec<usize>> {
        let mut sorted = blocks.to_vec();
        sorted.sort_unstable();
        if sorted != (1..=ring.num_blocks()).collect::<Vec<_>>() {
            return Err(Error::InvalidOrder(format!(
                "block priority {blocks:?} is not a permutation of 1..={}",
                ring.num_blocks()
            )));
        }
        Ok(blocks.iter().flat_map(|&b| ring.block_range(b)).collect())
    }

    pub fn weight(ring: &BlockRing, weights: Vec<u32>, tie_break: TieBreak) -> Result<Self> {
        Self::restricted(
            ring,
            OrderKind::Weight { weights, tie_break },
            Self::canonical_priority(ring),
        )
    }

    pub fn weight_with_priority(
        ring: &BlockRing,
        weights: Vec<u32>,
        tie_break: TieBreak,
        priority: Vec<usize>,
    ) -> Result<Self> {
        Self::restricted(ring, OrderKind::Weight { weights, tie_break }, priority)
    }

    /// Elimination order for internal use; not required to respect the block convention.
    pub fn elimination(front: Vec<usize>, inner: TermOrder) -> Result<Self> {
        let nvars = inner.nvars;
        let priority = inner.priority.clone();
        Self::build(
            nvars,
            OrderKind::Elimination {
                front,
                inner: Box::new(inner),
            },
            priority,
            true,
        )
    }

    /// Unrestricted degrevlex on `nvars` variables in index order.
    pub fn plain_degrevlex(nvars: usize) -> Self {
        Self::build(nvars, OrderKind::DegRevLex, (0..nvars).collect(), true).unwrap()
    }

    /// Random weight vector with entries in 1..=1000, sorted non-increasing within each
    /// block so that the block convention holds, degrevlex tie-break.
    pub fn random_weight<R: Rng>(ring: &BlockRing, rng: &mut R) -> Self {
        let mut weights: Vec<u32> = (0..ring.num_vars()).map(|_| rng.random_range(1..=1000)).collect();
        for b in 1..=ring.num_blocks() {
            weights[ring.block_range(b)].sort_unstable_by(|a, b| b.cmp(a));
        }
        Self::weight(ring, weights, TieBreak::DegRevLex).expect("sorted weights respect the convention")
    }

    pub fn num_vars(&self) -> usize {
        self.nvars
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn is_unrestricted(&self) -> bool {
        self.unrestricted
    }

    pub(crate) fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Checks `x[i,j] > x[i,k]` for all `j < k`.
    pub fn check_convention(&self, ring: &BlockRing) -> Result<()> {
        if ring.num_vars() != self.nvars {
            return Err(Error::structural("order and ring have different sizes"));
        }
        for b in 1..=ring.num_blocks() {
            for j in 1..ring.block_size(b) {
                let a = Monomial::variable(self.nvars, ring.var(b, j));
                let c = Monomial::variable(self.nvars, ring.var(b, j + 1));
                if self.compare(&a, &c) != Ordering::Greater {
                    return Err(Error::InvalidOrder(format!(
                        "order violates x[{b},{j}] > x[{b},{}]",
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        compare_exps(&self.rows, a.exponents(), b.exponents())
    }

    /// Largest monomial in an iterator.
    pub fn max<'a>(&self, ms: impl IntoIterator<Item = &'a Monomial>) -> Option<&'a Monomial> {
        ms.into_iter().max_by(|a, b| self.compare(a, b))
    }

    /// Stable identifier, used as cache key and in reports.
    pub fn canonical(&self) -> String {
        let mut s = match &self.kind {
            OrderKind::Lex => "lex".to_string(),
            OrderKind::DegRevLex => "degrevlex".to_string(),
            OrderKind::Weight { weights, tie_break } => {
                let w: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                let t = match tie_break {
                    TieBreak::Lex => "lex",
                    TieBreak::DegRevLex => "degrevlex",
                };
                format!("weight:{};{t}", w.join(","))
            }
            OrderKind::Elimination { front, inner } => {
                let f: Vec<String> = front.iter().map(|v| v.to_string()).collect();
                format!("elim:{};{}", f.join(","), inner.canonical())
            }
        };
        if !matches!(self.kind, OrderKind::Elimination { .. })
            && self.priority.iter().enumerate().any(|(i, &v)| i != v)
        {
            let p: Vec<String> = self.priority.iter().map(|v| v.to_string()).collect();
            s.push_str(&format!("@{}", p.join(",")));
        }
        s
    }
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

#[inline]
pub(crate) fn compare_exps(rows: &[Row], a: &[u32], b: &[u32]) -> Ordering {
    for row in rows {
        let d: i64 = row
            .iter()
            .map(|&(v, c)| c as i64 * (a[v] as i64 - b[v] as i64))
            .sum();
        match d.cmp(&0) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// All variable priorities that keep each block's internal order, i.e. the
/// interleavings of the blocks. Returns `None` if there are more than `cap`.
pub fn block_respecting_priorities(ring: &BlockRing, cap: usize) -> Option<Vec<Vec<usize>>> {
    fn rec(
        ring: &BlockRing,
        next: &mut Vec<usize>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> bool {
        if cur.len() == ring.num_vars() {
            out.push(cur.clone());
            return out.len() <= cap;
        }
        for b in 1..=ring.num_blocks() {
            if next[b - 1] < ring.block_size(b) {
                cur.push(ring.var(b, next[b - 1] + 1));
                next[b - 1] += 1;
                let ok = rec(ring, next, cur, out, cap);
                next[b - 1] -= 1;
                cur.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let mut out = Vec::new();
    let ok = rec(ring, &mut vec![0; ring.num_blocks()], &mut Vec::new(), &mut out, cap);
    ok.then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r22() -> BlockRing {
        BlockRing::with_blocks(&[2, 2]).unwrap()
    }

    /// Degrevlex straight from the definition: higher total degree wins, otherwise the
    /// monomial whose last differing exponent (in priority order) is smaller wins.
    fn degrevlex_oracle(priority: &[usize], a: &Monomial, b: &Monomial) -> Ordering {
        let (da, db) = (a.total_degree(), b.total_degree());
        if da != db {
            return da.cmp(&db);
        }
        for &v in priority.iter().rev() {
            let (ea, eb) = (a.exponent(v), b.exponent(v));
            if ea != eb {
                return eb.cmp(&ea);
            }
        }
        Ordering::Equal
    }

    #[test]
    fn lex_compares_first_exponent() {
        let r = r22();
        let o = TermOrder::lex(&r);
        let a = r.monomial_from(&[(1, 1, 1)]);
        let b = r.monomial_from(&[(1, 2, 5)]);
        assert_eq!(o.compare(&a, &b), Ordering::Greater);
        assert_eq!(o.compare(&a, &a), Ordering::Equal);
    }

    #[test]
    fn degrevlex_antidiagonal_beats_diagonal() {
        let r = r22();
        let diag = r.monomial_from(&[(1, 1, 1), (2, 2, 1)]);
        let anti = r.monomial_from(&[(1, 2, 1), (2, 1, 1)]);
        let o = TermOrder::degrevlex(&r);
        let expected = degrevlex_oracle(o.priority(), &diag, &anti);
        assert_eq!(expected, Ordering::Less);
        assert_eq!(o.compare(&diag, &anti), expected);
        // With block 2 ahead of block 1 the smallest variable is x[1,2], which flips it.
        let p = TermOrder::block_priority(&r, &[2, 1]).unwrap();
        let o2 = TermOrder::with_priority(&r, OrderKind::DegRevLex, p).unwrap();
        assert_eq!(o2.compare(&diag, &anti), Ordering::Greater);
    }

    #[test]
    fn convention_is_enforced() {
        let r = r22();
        assert!(TermOrder::with_priority(&r, OrderKind::Lex, vec![1, 0, 2, 3]).is_err());
        assert!(TermOrder::weight(&r, vec![1, 5, 1, 1], TieBreak::DegRevLex).is_err());
        assert!(TermOrder::weight(&r, vec![5, 1, 1, 1], TieBreak::DegRevLex).is_ok());
        let elim = TermOrder::elimination(vec![3], TermOrder::plain_degrevlex(4)).unwrap();
        assert!(elim.is_unrestricted());
    }

    #[test]
    fn interleavings_count() {
        let r = BlockRing::with_blocks(&[2, 2, 2]).unwrap();
        let all = block_respecting_priorities(&r, 10_000).unwrap();
        assert_eq!(all.len(), 90);
        for p in &all {
            TermOrder::with_priority(&r, OrderKind::Lex, p.clone()).unwrap();
        }
        assert!(block_respecting_priorities(&r, 50).is_none());
    }

    #[test]
    fn canonical_strings_distinguish_orders() {
        let r = r22();
        assert_eq!(TermOrder::degrevlex(&r).canonical(), "degrevlex");
        let p = TermOrder::block_priority(&r, &[2, 1]).unwrap();
        let o = TermOrder::with_priority(&r, OrderKind::Lex, p).unwrap();
        assert_eq!(o.canonical(), "lex@2,3,0,1");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn mono(n: usize) -> impl Strategy<Value = Monomial> {
            prop::collection::vec(0u32..4, n).prop_map(Monomial::from_exponents)
        }

        fn order(ring: BlockRing) -> impl Strategy<Value = TermOrder> {
            let n = ring.num_vars();
            (0usize..3, prop::collection::vec(1u32..50, n)).prop_map(move |(k, mut w)| match k {
                0 => TermOrder::lex(&ring),
                1 => TermOrder::degrevlex(&ring),
                _ => {
                    for b in 1..=ring.num_blocks() {
                        w[ring.block_range(b)].sort_unstable_by(|a, b| b.cmp(a));
                    }
                    TermOrder::weight(&ring, w, TieBreak::DegRevLex).unwrap()
                }
            })
        }

        proptest! {
            #[test]
            fn multiplicative_total_order(
                o in order(BlockRing::with_blocks(&[2, 3]).unwrap()),
                a in mono(5), b in mono(5), c in mono(5),
            ) {
                prop_assert_eq!(o.compare(&a.mul(&c), &b.mul(&c)), o.compare(&a, &b));
                prop_assert_eq!(o.compare(&a, &b) == Ordering::Equal, a == b);
                prop_assert_eq!(o.compare(&a, &b), o.compare(&b, &a).reverse());
                prop_assert_ne!(o.compare(&Monomial::one(5), &a), Ordering::Greater);
            }

            #[test]
            fn degrevlex_matches_definition(a in mono(5), b in mono(5)) {
                let r = BlockRing::with_blocks(&[2, 3]).unwrap();
                let o = TermOrder::degrevlex(&r);
                prop_assert_eq!(o.compare(&a, &b), degrevlex_oracle(o.priority(), &a, &b));
            }
        }
    }
}
