#![allow(dead_code)]

use mgideal::{BlockRing, Ideal, Monomial, MonomialIdeal, Polynomial};
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn ring(blocks: &[usize]) -> BlockRing {
    BlockRing::with_blocks(blocks).unwrap()
}

/// Block sizes in `1..=max_size` with at most `max_vars` variables in total.
pub fn random_blocks<R: Rng>(rng: &mut R, max_blocks: usize, max_size: usize, max_vars: usize) -> Vec<usize> {
    loop {
        let v = rng.random_range(1..=max_blocks);
        let sizes: Vec<usize> = (0..v).map(|_| rng.random_range(1..=max_size)).collect();
        if sizes.iter().sum::<usize>() <= max_vars {
            return sizes;
        }
    }
}

pub fn random_monomial_of_degree<R: Rng>(rng: &mut R, ring: &BlockRing, degree: &[u32]) -> Monomial {
    let mut exps = vec![0u32; ring.num_vars()];
    for (b, &d) in degree.iter().enumerate() {
        let range = ring.block_range(b + 1);
        for _ in 0..d {
            exps[rng.random_range(range.clone())] += 1;
        }
    }
    Monomial::from_exponents(exps)
}

fn random_degree<R: Rng>(rng: &mut R, v: usize, max_entry: u32) -> Vec<u32> {
    loop {
        let d: Vec<u32> = (0..v).map(|_| rng.random_range(0..=max_entry)).collect();
        if d.iter().any(|&e| e > 0) {
            return d;
        }
    }
}

/// A monomial ideal with 1 to `max_gens` generators of block degrees at most `max_entry`.
pub fn random_monomial_ideal<R: Rng>(rng: &mut R, ring: &BlockRing, max_gens: usize, max_entry: u32) -> MonomialIdeal {
    let k = rng.random_range(1..=max_gens);
    let gens = (0..k)
        .map(|_| {
            let d = random_degree(rng, ring.num_blocks(), max_entry);
            random_monomial_of_degree(rng, ring, &d)
        })
        .collect();
    MonomialIdeal::new(ring, gens)
}

/// A squarefree monomial ideal with 1 to `max_gens` generators.
pub fn random_squarefree_ideal<R: Rng>(rng: &mut R, ring: &BlockRing, max_gens: usize) -> MonomialIdeal {
    let n = ring.num_vars();
    let k = rng.random_range(1..=max_gens);
    let gens = (0..k)
        .map(|_| loop {
            let exps: Vec<u32> = (0..n).map(|_| u32::from(rng.random_bool(0.35))).collect();
            if exps.iter().any(|&e| e > 0) {
                break Monomial::from_exponents(exps);
            }
        })
        .collect();
    MonomialIdeal::new(ring, gens)
}

/// A monomial ideal generated by monomials in the first variable of each block.
pub fn random_t_ideal<R: Rng>(rng: &mut R, ring: &BlockRing, max_gens: usize, max_entry: u32, squarefree: bool) -> MonomialIdeal {
    let k = rng.random_range(1..=max_gens);
    let top = if squarefree { 1 } else { max_entry };
    let gens = (0..k)
        .map(|_| {
            let d = random_degree(rng, ring.num_blocks(), top);
            let mut exps = vec![0u32; ring.num_vars()];
            for (b, &e) in d.iter().enumerate() {
                exps[ring.var(b + 1, 1)] = e;
            }
            Monomial::from_exponents(exps)
        })
        .collect();
    MonomialIdeal::new(ring, gens)
}

/// Closure under `x[i,j] -> x[i,k]` for `k < j` of random monomials using at most one
/// variable per block; the result is radical and Borel fixed.
pub fn random_squarefree_borel<R: Rng>(rng: &mut R, ring: &BlockRing, max_gens: usize) -> MonomialIdeal {
    let k = rng.random_range(1..=max_gens);
    let mut seeds: Vec<Vec<Option<usize>>> = Vec::new();
    for _ in 0..k {
        loop {
            let pick: Vec<Option<usize>> = (1..=ring.num_blocks())
                .map(|b| rng.random_bool(0.6).then(|| rng.random_range(1..=ring.block_size(b))))
                .collect();
            if pick.iter().any(Option::is_some) {
                seeds.push(pick);
                break;
            }
        }
    }
    let mut gens = Vec::new();
    for pick in seeds {
        let mut stack = vec![pick];
        while let Some(p) = stack.pop() {
            for (b, pos) in p.iter().enumerate() {
                if let Some(j) = *pos {
                    if j > 1 {
                        let mut q = p.clone();
                        q[b] = Some(j - 1);
                        stack.push(q);
                    }
                }
            }
            let factors: Vec<(usize, usize, u32)> = p
                .iter()
                .enumerate()
                .filter_map(|(b, pos)| pos.map(|j| (b + 1, j, 1)))
                .collect();
            gens.push(ring.monomial_from(&factors));
        }
    }
    MonomialIdeal::new(ring, gens)
}

/// A multihomogeneous polynomial of the given degree with up to `max_terms` terms.
pub fn random_form<R: Rng>(rng: &mut R, ring: &BlockRing, degree: &[u32], max_terms: usize) -> Polynomial {
    let p = i64::from(ring.characteristic());
    loop {
        let terms: Vec<(Monomial, i64)> = (0..rng.random_range(1..=max_terms))
            .map(|_| (random_monomial_of_degree(rng, ring, degree), rng.random_range(1..p)))
            .collect();
        let f = Polynomial::from_terms(ring, terms).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

/// An ideal of 1 to `max_gens` random multihomogeneous forms.
pub fn random_graded_ideal<R: Rng>(rng: &mut R, ring: &BlockRing, max_gens: usize, max_entry: u32, max_terms: usize) -> Ideal {
    let k = rng.random_range(1..=max_gens);
    let gens = (0..k)
        .map(|_| {
            let d = random_degree(rng, ring.num_blocks(), max_entry);
            random_form(rng, ring, &d, max_terms)
        })
        .collect();
    Ideal::new(ring, gens).unwrap()
}

/// A random nonzero linear form of degree `e_b` for a random block `b`.
pub fn random_linear_form<R: Rng>(rng: &mut R, ring: &BlockRing) -> Polynomial {
    let blocks: Vec<usize> = (1..=ring.num_blocks()).collect();
    let b = *blocks.choose(rng).unwrap();
    let mut degree = vec![0; ring.num_blocks()];
    degree[b - 1] = 1;
    let p = i64::from(ring.characteristic());
    loop {
        let terms: Vec<(Monomial, i64)> = (1..=ring.block_size(b))
            .map(|j| (ring.monomial_from(&[(b, j, 1)]), rng.random_range(0..p)))
            .collect();
        let f = Polynomial::from_terms(ring, terms).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

/// Every monomial with the given multidegree.
pub fn monomials_of_degree(ring: &BlockRing, degree: &[u32]) -> Vec<Monomial> {
    let mut out = vec![vec![0u32; ring.num_vars()]];
    for (b, &d) in degree.iter().enumerate() {
        let range: Vec<usize> = ring.block_range(b + 1).collect();
        let mut next = Vec::new();
        for base in &out {
            compositions(d, &range, 0, base.clone(), &mut next);
        }
        out = next;
    }
    out.into_iter().map(Monomial::from_exponents).collect()
}

fn compositions(left: u32, vars: &[usize], k: usize, cur: Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if k + 1 == vars.len() {
        let mut c = cur;
        c[vars[k]] += left;
        out.push(c);
        return;
    }
    for e in 0..=left {
        let mut c = cur.clone();
        c[vars[k]] += e;
        compositions(left - e, vars, k + 1, c, out);
    }
}

/// Every multidegree with nonnegative entries and total at most `max_total`.
pub fn degrees_up_to(v: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..v {
        out = out
            .into_iter()
            .flat_map(|d: Vec<u32>| {
                let used: u32 = d.iter().sum();
                (0..=max_total - used).map(move |e| {
                    let mut n = d.clone();
                    n.push(e);
                    n
                })
            })
            .collect();
    }
    out
}
