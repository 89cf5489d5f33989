//! Row- and column-graded matrices of linear forms, their minors, and the checks
//! predicted for their determinantal ideals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field;
use crate::gin::DEFAULT_TRIALS;
use crate::groebner::Ideal;
use crate::monomial::MonomialIdeal;
use crate::order::TermOrder;
use crate::poly::Polynomial;
use crate::ring::{BlockRing, Multidegree};
use crate::theory::{self, BoundKind, CheckOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingMode {
    /// Row `i` is homogeneous of degree `e_i`.
    Row,
    /// Column `j` is homogeneous of degree `e_j`.
    Column,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMatrix {
    ring: BlockRing,
    mode: GradingMode,
    entries: Vec<Vec<Polynomial>>,
}

impl GradedMatrix {
    /// Validates shape and grading of explicitly given entries.
    pub fn from_entries(ring: &BlockRing, mode: GradingMode, entries: Vec<Vec<Polynomial>>) -> Result<Self> {
        let m = entries.len();
        let n = entries.first().map_or(0, Vec::len);
        if m == 0 || n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::structural("matrix rows must be nonempty and of equal length"));
        }
        let graded_dim = match mode {
            GradingMode::Row => m,
            GradingMode::Column => n,
        };
        if graded_dim > ring.num_blocks() {
            return Err(Error::structural(format!(
                "{mode:?}-graded matrix needs at most {} graded lines, has {graded_dim}",
                ring.num_blocks()
            )));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if e.num_vars() != ring.num_vars() {
                    return Err(Error::structural("matrix entry from a different ring"));
                }
                if e.is_zero() {
                    continue;
                }
                let block = match mode {
                    GradingMode::Row => i + 1,
                    GradingMode::Column => j + 1,
                };
                if !e.is_linear_form() || e.multidegree(ring).ok() != Some(ring.unit_degree(block)) {
                    return Err(Error::NotHomogeneous(format!(
                        "entry ({}, {}) = {} is not a linear form of degree {}",
                        i + 1,
                        j + 1,
                        e.format(ring),
                        ring.unit_degree(block)
                    )));
                }
            }
        }
        Ok(GradedMatrix {
            ring: ring.clone(),
            mode,
            entries,
        })
    }

    /// Column `j` is `A_j · x_j` with `A_j` an `m × n_j` coefficient matrix; one block per column.
    pub fn column_graded(ring: &BlockRing, m: usize, coefficients: &[Vec<Vec<i64>>]) -> Result<Self> {
        if coefficients.len() != ring.num_blocks() {
            return Err(Error::structural("need one coefficient matrix per block"));
        }
        let mut entries = vec![Vec::with_capacity(coefficients.len()); m];
        for (j, a) in coefficients.iter().enumerate() {
            check_shape(a, m, ring.block_size(j + 1))?;
            for (r, row) in a.iter().enumerate() {
                entries[r].push(linear_form(ring, j + 1, row));
            }
        }
        Self::from_entries(ring, GradingMode::Column, entries)
    }

    /// Row `i` is `(A_i · x_i)^T` with `A_i` an `n × n_i` coefficient matrix; one block per row.
    pub fn row_graded(ring: &BlockRing, n: usize, coefficients: &[Vec<Vec<i64>>]) -> Result<Self> {
        if coefficients.len() != ring.num_blocks() {
            return Err(Error::structural("need one coefficient matrix per block"));
        }
        let mut entries = Vec::with_capacity(coefficients.len());
        for (i, a) in coefficients.iter().enumerate() {
            check_shape(a, n, ring.block_size(i + 1))?;
            entries.push(a.iter().map(|row| linear_form(ring, i + 1, row)).collect());
        }
        Self::from_entries(ring, GradingMode::Row, entries)
    }

    /// Column-graded `m × v` matrix with random full-rank coefficient matrices.
    pub fn random_column_graded(ring: &BlockRing, m: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = ring.characteristic();
        let coeffs: Vec<_> = ring
            .block_sizes()
            .iter()
            .map(|&nj| random_full_rank(&mut rng, m, nj, p))
            .collect();
        Self::column_graded(ring, m, &coeffs)
    }

    /// Row-graded `v × n` matrix with random full-rank coefficient matrices.
    pub fn random_row_graded(ring: &BlockRing, n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = ring.characteristic();
        let coeffs: Vec<_> = ring
            .block_sizes()
            .iter()
            .map(|&ni| random_full_rank(&mut rng, n, ni, p))
            .collect();
        Self::row_graded(ring, n, &coeffs)
    }

    /// The matrix `(x[i,j])` of a ring whose blocks all have size `n`, graded by rows.
    pub fn generic_row_graded(ring: &BlockRing) -> Result<Self> {
        let n = ring.block_size(1);
        if ring.block_sizes().iter().any(|&s| s != n) {
            return Err(Error::structural("generic matrix needs equal block sizes"));
        }
        let entries = (1..=ring.num_blocks())
            .map(|i| (1..=n).map(|j| Polynomial::var(ring, i, j)).collect())
            .collect();
        Self::from_entries(ring, GradingMode::Row, entries)
    }

    pub fn ring(&self) -> &BlockRing {
        &self.ring
    }

    pub fn mode(&self) -> GradingMode {
        self.mode
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Polynomial>] {
        &self.entries
    }

    /// Nonzero `t × t` minors with their row and column indices (0-based), ordered by
    /// row tuple, then column tuple.
    pub fn minors_indexed(&self, t: usize) -> Result<Vec<(Vec<usize>, Vec<usize>, Polynomial)>> {
        if t == 0 || t > self.rows().min(self.cols()) {
            return Err(Error::Precondition(format!(
                "minor size {t} out of range 1..={}",
                self.rows().min(self.cols())
            )));
        }
        let mut out = Vec::new();
        for rs in subsets(self.rows(), t) {
            for cs in subsets(self.cols(), t) {
                let d = self.cofactor_det(&rs, &cs);
                if !d.is_zero() {
                    out.push((rs.clone(), cs, d));
                }
            }
        }
        Ok(out)
    }

    pub fn minors(&self, t: usize) -> Result<Vec<Polynomial>> {
        Ok(self.minors_indexed(t)?.into_iter().map(|(_, _, d)| d).collect())
    }

    /// `I_t(A)`.
    pub fn minors_ideal(&self, t: usize) -> Result<Ideal> {
        Ideal::new(&self.ring, self.minors(t)?)
    }

    /// Cofactor expansion along the first selected row.
    fn cofactor_det(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        if rows.len() == 1 {
            return self.entries[rows[0]][cols[0]].clone();
        }
        let mut acc = Polynomial::zero(&self.ring);
        for (k, &c) in cols.iter().enumerate() {
            let e = &self.entries[rows[0]][c];
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = e * &self.cofactor_det(&rows[1..], &rest);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    pub fn format(&self) -> String {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.format(&self.ring)).collect::<Vec<_>>().join(", "))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn check_shape(a: &[Vec<i64>], rows: usize, cols: usize) -> Result<()> {
    if a.len() != rows || a.iter().any(|r| r.len() != cols) {
        return Err(Error::structural(format!(
            "coefficient matrix must be {rows}×{cols}"
        )));
    }
    Ok(())
}

fn linear_form(ring: &BlockRing, block: usize, coeffs: &[i64]) -> Polynomial {
    let terms = coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| (ring.monomial_from(&[(block, k + 1, 1)]), c))
        .collect();
    Polynomial::from_terms(ring, terms).expect("monomials come from the ring")
}

fn random_full_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize, p: u32) -> Vec<Vec<i64>> {
    loop {
        let a: Vec<Vec<u32>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.random_range(0..p)).collect())
            .collect();
        if rank_mod_p(&a, p) == rows.min(cols) {
            return a.into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect();
        }
    }
}

fn rank_mod_p(a: &[Vec<u32>], p: u32) -> usize {
    let mut a = a.to_vec();
    let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = field::inv(a[rank][c], p);
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = field::mul(a[r][c], inv, p);
                for k in c..cols {
                    let sub = field::mul(f, a[rank][k], p);
                    a[r][k] = field::sub(a[r][k], sub, p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Increasing `t`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for k in start..n {
            cur.push(k);
            rec(k + 1, n, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, t, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct MainTheoremOptions {
    pub n_orders: usize,
    pub seed: u64,
    pub trials: usize,
}

impl Default for MainTheoremOptions {
    fn default() -> Self {
        MainTheoremOptions {
            n_orders: 20,
            seed: 0,
            trials: DEFAULT_TRIALS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemResult {
    pub item: char,
    pub description: String,
    pub passed: bool,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainTheoremTranscript {
    pub mode: GradingMode,
    pub shape: (usize, usize),
    pub orders_sampled: usize,
    pub items: Vec<ItemResult>,
    pub passed: bool,
}

fn sampled_orders(ring: &BlockRing, opts: &MainTheoremOptions) -> Vec<TermOrder> {
    let mut orders = vec![TermOrder::degrevlex(ring), TermOrder::lex(ring)];
    orders.extend(theory::sample_orders(ring, opts.n_orders, opts.seed, false));
    orders
}

/// Squarefree-ness (and optionally generator total degree) of sampled initial ideals.
fn initial_ideals_check(
    ideal: &Ideal,
    orders: &[TermOrder],
    degree: Option<u32>,
) -> Result<(bool, Vec<String>)> {
    let mut details = Vec::new();
    for o in orders {
        let init: MonomialIdeal = ideal.initial_ideal(o)?;
        if !init.is_radical() {
            details.push(format!("{}: initial ideal {} is not squarefree", o.canonical(), init));
        }
        if let Some(d) = degree {
            if init.generators().iter().any(|g| g.total_degree() != d) {
                details.push(format!("{}: initial ideal {} has a generator not of degree {d}", o.canonical(), init));
            }
        }
    }
    Ok((details.is_empty(), details))
}

/// Runs items (a)–(f) for the maximal minors `I_m(A)` and the 2-minors `I_2(A)`.
pub fn verify_main_theorem(a: &GradedMatrix, opts: &MainTheoremOptions) -> Result<MainTheoremTranscript> {
    let ring = a.ring();
    let (m, n) = (a.rows(), a.cols());
    if m > n {
        return Err(Error::HypothesisNotSatisfied(format!(
            "maximal-minor statements need m ≤ n, matrix is {m}×{n}"
        )));
    }
    let orders = sampled_orders(ring, opts);
    let check = CheckOptions {
        trials: opts.trials,
        seed: opts.seed,
        order: None,
    };
    let im_gens = a.minors(m)?;
    let im = Ideal::new(ring, im_gens.clone())?;
    let mut items = Vec::new();

    let (ok, details) = initial_ideals_check(&im, &orders, Some(m as u32))?;
    items.push(ItemResult {
        item: 'a',
        description: format!("initial ideals of I_{m} squarefree, generated in degree {m}"),
        passed: ok,
        details,
    });

    let graded_sum = |k: usize| {
        let mut d = Multidegree::zero(ring.num_blocks());
        for i in 0..k {
            d.0[i] = 1;
        }
        d
    };
    match a.mode() {
        GradingMode::Column => {
            let rep = theory::ugb_check(&im_gens, &im, opts.n_orders, opts.seed)?;
            items.push(ItemResult {
                item: 'b',
                description: format!("maximal minors form a universal Gröbner basis ({})", rep.note),
                passed: rep.passed,
                details: rep
                    .failures
                    .iter()
                    .map(|f| format!("{}: {}", f.order, f.element))
                    .chain(std::iter::once(format!("{} orders", rep.orders_tested)))
                    .collect(),
            });
        }
        GradingMode::Row => {
            let rep = theory::degree_bound_check(&im, &graded_sum(m), BoundKind::Exactly, opts.n_orders, opts.seed)?;
            items.push(ItemResult {
                item: 'b',
                description: format!("reduced Gröbner bases of I_{m} have degree exactly {}", rep.bound),
                passed: rep.holds,
                details: rep
                    .violations
                    .iter()
                    .map(|v| format!("{}: {} of degree {}", v.source, v.element, v.degree))
                    .collect(),
            });
        }
    }

    let i2 = if m >= 2 { Some(a.minors_ideal(2)?) } else { None };
    if let Some(i2) = &i2 {
        let (ok, details) = initial_ideals_check(i2, &orders, None)?;
        items.push(ItemResult {
            item: 'c',
            description: "initial ideals of I_2 squarefree".into(),
            passed: ok,
            details,
        });
        let bound = match a.mode() {
            GradingMode::Column => graded_sum(n),
            GradingMode::Row => graded_sum(m),
        };
        let rep = theory::degree_bound_check(i2, &bound, BoundKind::AtMost, opts.n_orders, opts.seed)?;
        items.push(ItemResult {
            item: 'd',
            description: format!("reduced Gröbner bases of I_2 have degree at most {}", rep.bound),
            passed: rep.holds,
            details: rep
                .violations
                .iter()
                .map(|v| format!("{}: {} of degree {}", v.source, v.element, v.degree))
                .collect(),
        });
    }

    let im_cs = theory::is_cs(&im, &check)?;
    let mut e_details = vec![format!("I_{m} CS: {} ({})", im_cs.verdict, im_cs.criterion)];
    let mut e_ok = im_cs.is_yes();
    if let Some(i2) = &i2 {
        let r = theory::is_cs(i2, &check)?;
        e_details.push(format!("I_2 CS: {} ({})", r.verdict, r.criterion));
        e_ok &= r.is_yes();
    }
    if a.mode() == GradingMode::Column {
        let r = theory::is_csstar(&im, &check)?;
        e_details.push(format!("I_{m} CS*: {} ({})", r.verdict, r.criterion));
        e_ok &= r.is_yes();
    }
    items.push(ItemResult {
        item: 'e',
        description: "membership in CS (and CS* for column-graded maximal minors)".into(),
        passed: e_ok,
        details: e_details,
    });

    let (f_ok, f_detail) = match im_cs.gin.regularity_strongly_stable() {
        Ok(r) => (r == m as u32, format!("regularity of gin(I_{m}) = {r}")),
        Err(e) => (false, e.to_string()),
    };
    items.push(ItemResult {
        item: 'f',
        description: format!("gin(I_{m}) has regularity {m}"),
        passed: f_ok && im_cs.is_yes(),
        details: vec![f_detail],
    });

    Ok(MainTheoremTranscript {
        mode: a.mode(),
        shape: (m, n),
        orders_sampled: orders.len(),
        passed: items.iter().all(|i| i.passed),
        items,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(blocks: &[usize]) -> BlockRing {
        BlockRing::with_blocks(blocks).unwrap()
    }

    fn x(r: &BlockRing, i: usize, j: usize) -> Polynomial {
        Polynomial::var(r, i, j)
    }

    /// Leibniz formula over all permutations.
    fn leibniz(m: &GradedMatrix, rows: &[usize], cols: &[usize]) -> Polynomial {
        fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
            if n == 0 {
                return vec![(Vec::new(), true)];
            }
            let mut out = Vec::new();
            for (p, even) in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    // Inserting at `pos` moves n−1 past (n−1−pos) elements.
                    out.push((q, even == (n - 1 - pos).is_multiple_of(2)));
                }
            }
            out
        }
        let mut acc = Polynomial::zero(m.ring());
        for (p, even) in perms(rows.len()) {
            let mut term = Polynomial::constant(m.ring(), 1);
            for (k, &r) in rows.iter().enumerate() {
                term = &term * m.entry(r, cols[p[k]]);
            }
            acc = if even { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn cofactor_matches_leibniz() {
        let ring = r(&[3, 3, 3, 3]);
        let a = GradedMatrix::random_row_graded(&ring, 5, 3).unwrap();
        for t in 1..=4 {
            for rs in subsets(a.rows(), t) {
                for cs in subsets(a.cols(), t) {
                    assert_eq!(a.cofactor_det(&rs, &cs), leibniz(&a, &rs, &cs));
                }
            }
        }
    }

    #[test]
    fn column_graded_examples() {
        let ring = r(&[1, 1]);
        let a = GradedMatrix::column_graded(&ring, 2, &[vec![vec![2], vec![3]], vec![vec![1], vec![5]]]).unwrap();
        assert!(a.entries().iter().flatten().all(|e| e.is_monomial()));

        let ring = r(&[2, 2]);
        let id = vec![vec![1, 0], vec![0, 1]];
        let a = GradedMatrix::column_graded(&ring, 2, &[id.clone(), id]).unwrap();
        assert_eq!(a.entry(0, 1), &x(&ring, 2, 1));
        assert_eq!(a.entry(1, 0), &x(&ring, 1, 2));

        let ring = r(&[2, 2, 2]);
        let a = GradedMatrix::random_column_graded(&ring, 2, 7).unwrap();
        assert_eq!((a.rows(), a.cols()), (2, 3));
        for i in 0..2 {
            for j in 0..3 {
                let (ok, d) = a.entry(i, j).is_multihomogeneous(&ring);
                assert!(ok);
                assert_eq!(d, Some(ring.unit_degree(j + 1)));
            }
        }
        assert!(GradedMatrix::column_graded(&ring, 2, &[vec![vec![1]]]).is_err());
    }

    #[test]
    fn row_graded_examples() {
        let ring = r(&[3, 3, 3]);
        let x3 = GradedMatrix::generic_row_graded(&ring).unwrap();
        assert_eq!(x3.entry(1, 2), &x(&ring, 2, 3));
        let z = Polynomial::zero(&ring);
        let sparse = GradedMatrix::from_entries(
            &ring,
            GradingMode::Row,
            vec![
                vec![x(&ring, 1, 1), x(&ring, 1, 2), x(&ring, 1, 3)],
                vec![x(&ring, 2, 1), x(&ring, 2, 2), z.clone()],
                vec![z.clone(), z, x(&ring, 3, 3)],
            ],
        )
        .unwrap();
        let minors = sparse.minors(2).unwrap();
        assert_eq!(minors.len(), 7);
        let det = &(&x(&ring, 1, 1) * &x(&ring, 2, 2)) - &(&x(&ring, 1, 2) * &x(&ring, 2, 1));
        assert!(minors.contains(&det));
        let row = GradedMatrix::from_entries(
            &ring,
            GradingMode::Row,
            vec![vec![&x(&ring, 1, 1) + &x(&ring, 1, 2), x(&ring, 1, 3)]],
        );
        assert!(row.is_ok());
        let bad = GradedMatrix::from_entries(&ring, GradingMode::Row, vec![vec![x(&ring, 2, 1)]]);
        assert!(matches!(bad, Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn minors_examples() {
        let ring = r(&[2, 2]);
        let a = GradedMatrix::generic_row_graded(&ring).unwrap();
        let det = &(&x(&ring, 1, 1) * &x(&ring, 2, 2)) - &(&x(&ring, 1, 2) * &x(&ring, 2, 1));
        assert_eq!(a.minors(2).unwrap(), vec![det]);
        assert_eq!(a.minors(1).unwrap().len(), 4);
        assert!(a.minors(3).is_err());
        let ring = r(&[2, 2, 2]);
        let a = GradedMatrix::random_column_graded(&ring, 2, 1).unwrap();
        for (_, cs, d) in a.minors_indexed(2).unwrap() {
            let mut expected = Multidegree::zero(3);
            for c in cs {
                expected.0[c] = 1;
            }
            assert_eq!(d.multidegree(&ring).unwrap(), expected);
        }
    }

    #[test]
    fn main_theorem_column_2x3() {
        let ring = r(&[2, 2, 2]);
        let a = GradedMatrix::random_column_graded(&ring, 2, 5).unwrap();
        let t = verify_main_theorem(&a, &MainTheoremOptions::default()).unwrap();
        assert!(t.passed, "{t:#?}");
        assert_eq!(t.items.len(), 6);
    }

    #[test]
    fn main_theorem_row_2x4() {
        let ring = r(&[4, 4]);
        let a = GradedMatrix::random_row_graded(&ring, 4, 2).unwrap();
        let t = verify_main_theorem(&a, &MainTheoremOptions::default()).unwrap();
        assert!(t.passed, "{t:#?}");
    }

    #[test]
    fn rank_and_subsets() {
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 4]], 7), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 5]], 7), 2);
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
    }
}
