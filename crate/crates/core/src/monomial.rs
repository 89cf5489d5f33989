//! Combinatorics of monomial ideals: minimal generators, multigraded K-polynomials,
//! exchange properties, Alexander duality and polarization.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field;
use crate::groebner::Ideal;
use crate::poly::Polynomial;
use crate::ring::{BlockRing, Monomial, Multidegree};

/// Drops generators divisible by another one, removes duplicates and sorts.
pub fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.total_degree());
    gens.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort_unstable_by(|a, b| b.cmp(a));
    kept
}

/// Monomial ideal given by its minimal generators (an antichain under divisibility).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    ring: BlockRing,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(ring: &BlockRing, gens: Vec<Monomial>) -> Self {
        debug_assert!(gens.iter().all(|g| g.num_vars() == ring.num_vars()));
        MonomialIdeal {
            ring: ring.clone(),
            gens: minimalize(gens),
        }
    }

    pub fn zero(ring: &BlockRing) -> Self {
        Self::new(ring, Vec::new())
    }

    pub fn unit(ring: &BlockRing) -> Self {
        Self::new(ring, vec![ring.one()])
    }

    pub fn ring(&self) -> &BlockRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(Monomial::is_one)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn to_ideal(&self) -> Ideal {
        Ideal::from_monomials(&self.ring, &self.gens)
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Self::new(&self.ring, g)
    }

    /// `I : m`.
    pub fn colon_monomial(&self, m: &Monomial) -> MonomialIdeal {
        let gens = self
            .gens
            .iter()
            .map(|g| m.gcd(g).quotient_of(g).unwrap())
            .collect();
        Self::new(&self.ring, gens)
    }

    /// `I ∩ J` by the lcm rule.
    pub fn intersect(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let gens = self
            .gens
            .iter()
            .flat_map(|a| other.gens.iter().map(move |b| a.lcm(b)))
            .collect();
        Self::new(&self.ring, gens)
    }

    /// Radical iff every minimal generator is squarefree.
    pub fn is_radical(&self) -> bool {
        self.gens.iter().all(Monomial::is_squarefree)
    }

    /// Borel-fixed exchange condition in characteristic `p`.
    pub fn is_borel_fixed(&self, p: u32) -> bool {
        self.exchange_closed(|c, d| field::binomial_nonzero_mod(c as u64, d as u64, p))
    }

    /// `x[i,k] · u / x[i,j] ∈ I` for every generator `u`, every `x[i,j] | u` and `k < j`.
    pub fn is_strongly_stable(&self) -> bool {
        self.exchange_closed(|_, d| d == 1)
    }

    fn exchange_closed(&self, step_allowed: impl Fn(u32, u32) -> bool) -> bool {
        let ring = &self.ring;
        for u in &self.gens {
            for var in u.support() {
                let (block, pos) = ring.label(var);
                let c = u.exponent(var);
                for k in 1..pos {
                    let target = ring.var(block, k);
                    for d in 1..=c {
                        if !step_allowed(c, d) {
                            continue;
                        }
                        let mut w = u.clone();
                        w.exps_mut()[var] -= d;
                        w.exps_mut()[target] += d;
                        if !self.contains(&w) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Every generator only involves the first variable of each block.
    pub fn is_extended_from_t(&self) -> bool {
        let ring = &self.ring;
        self.gens
            .iter()
            .all(|g| g.support().all(|v| ring.label(v).1 == 1))
    }

    /// Regularity of a strongly stable ideal: the largest generator degree.
    pub fn regularity_strongly_stable(&self) -> Result<u32> {
        if !self.is_strongly_stable() {
            return Err(Error::NotStronglyStable);
        }
        Ok(self.max_degree())
    }

    pub fn max_degree(&self) -> u32 {
        self.gens.iter().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn multidegrees(&self) -> Vec<Multidegree> {
        self.gens.iter().map(|g| self.ring.degree_unchecked(g)).collect()
    }

    /// Alexander dual of a squarefree ideal: intersection of the primes generated by
    /// the supports of the generators.
    pub fn alexander_dual(&self) -> Result<MonomialIdeal> {
        if !self.is_radical() {
            return Err(Error::RequiresSquarefree);
        }
        let n = self.ring.num_vars();
        let mut cur = vec![Monomial::one(n)];
        for g in &self.gens {
            let supp: Vec<usize> = g.support().collect();
            let mut next = Vec::with_capacity(cur.len() * supp.len().max(1));
            for m in &cur {
                if supp.iter().any(|&v| m.exponent(v) > 0) {
                    next.push(m.clone());
                } else {
                    for &v in &supp {
                        let mut w = m.clone();
                        w.exps_mut()[v] = 1;
                        next.push(w);
                    }
                }
            }
            cur = minimalize(next);
        }
        Ok(Self::new(&self.ring, cur))
    }

    /// Polarization inside the ambient ring. A power `x[i,j]^a` becomes `x[i,j]` times
    /// `a − 1` variables of block `i` that no generator uses, taken in increasing position.
    /// For ideals extended from T this sends `x[i,1]^a` to `x[i,1]·x[i,2]⋯x[i,a]`.
    pub fn polarize(&self) -> Result<MonomialIdeal> {
        let ring = &self.ring;
        let n = ring.num_vars();
        // slots[v] = fresh variables standing for the second, third, ... power of v.
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); n];
        for b in 1..=ring.num_blocks() {
            let range = ring.block_range(b);
            let used: Vec<bool> = range
                .clone()
                .map(|v| self.gens.iter().any(|g| g.exponent(v) > 0))
                .collect();
            let mut free = range.clone().zip(&used).filter(|(_, &u)| !u).map(|(v, _)| v);
            let needed: usize = range
                .clone()
                .map(|v| {
                    self.gens
                        .iter()
                        .map(|g| g.exponent(v))
                        .max()
                        .unwrap_or(0)
                        .saturating_sub(1) as usize
                })
                .sum();
            let available = used.iter().filter(|u| !**u).count();
            if needed > available {
                return Err(Error::RingTooSmallToPolarize {
                    block: b,
                    needed,
                    available,
                });
            }
            for v in range {
                let e = self.gens.iter().map(|g| g.exponent(v)).max().unwrap_or(0);
                for _ in 1..e {
                    slots[v].push(free.next().unwrap());
                }
            }
        }
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let mut w = Monomial::one(n);
                for v in g.support() {
                    w.exps_mut()[v] = 1;
                    for &s in &slots[v][..g.exponent(v) as usize - 1] {
                        w.exps_mut()[s] = 1;
                    }
                }
                w
            })
            .collect();
        Ok(Self::new(ring, gens))
    }

    /// Multigraded K-polynomial of `S/I`.
    pub fn hilbert_numerator(&self) -> HilbertNumerator {
        k_polynomial(&self.ring, self.gens.clone())
    }

    pub fn format(&self) -> String {
        let parts: Vec<String> = self.gens.iter().map(|g| g.format(&self.ring)).collect();
        format!("({})", parts.join(", "))
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.format(&self.ring)).collect()
    }

    pub fn to_polynomials(&self) -> Vec<Polynomial> {
        self.gens
            .iter()
            .map(|g| Polynomial::monomial(&self.ring, g.clone()))
            .collect()
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// Whether `forms` is a regular sequence on `S/I`, in the given order: every colon
/// `(I + (f_1..f_{k−1})) : f_k` equals `I + (f_1..f_{k−1})`, and `I + (forms)` is proper
/// unless `allow_unit` is set.
pub fn regular_sequence_test(ideal: &Ideal, forms: &[Polynomial], allow_unit: bool) -> Result<bool> {
    if forms.iter().any(Polynomial::is_zero) {
        return Err(Error::Precondition("regular sequence elements must be nonzero".into()));
    }
    let mut cur = ideal.clone();
    for f in forms {
        let colon = cur.colon(f)?;
        if !colon.same_ideal(&cur)? {
            return Ok(false);
        }
        cur = cur.add_generators(std::slice::from_ref(f));
    }
    Ok(allow_unit || !cur.is_unit()?)
}

/// The forms `x[i,j] − x[i,1]` for every block `i` and `j ≥ 2`.
pub fn gamma_forms(ring: &BlockRing) -> Vec<Polynomial> {
    let mut out = Vec::new();
    for b in 1..=ring.num_blocks() {
        for j in 2..=ring.block_size(b) {
            out.push(&Polynomial::var(ring, b, j) - &Polynomial::var(ring, b, 1));
        }
    }
    out
}

/// Pivot recursion `K(S/I) = K(S/(I + (x))) + y^{deg x} · K(S/(I : x))`.
fn k_polynomial(ring: &BlockRing, gens: Vec<Monomial>) -> HilbertNumerator {
    let v = ring.num_blocks();
    let gens = minimalize(gens);
    if gens.is_empty() {
        return HilbertNumerator::one(v);
    }
    if gens.iter().any(Monomial::is_one) {
        return HilbertNumerator::zero();
    }
    // Pivot: the variable occurring in the most generators.
    let n = ring.num_vars();
    let mut freq = vec![0usize; n];
    for g in &gens {
        for var in g.support() {
            freq[var] += 1;
        }
    }
    let (pivot, &count) = freq.iter().enumerate().max_by_key(|(v, f)| (**f, std::cmp::Reverse(*v))).unwrap();
    if count <= 1 {
        // Pairwise coprime generators: a complete intersection.
        let mut acc = HilbertNumerator::one(v);
        for g in &gens {
            let mut factor = HilbertNumerator::one(v);
            factor.add_term(ring.degree_unchecked(g), -1);
            acc = acc.mul(&factor);
        }
        return acc;
    }
    let x = Monomial::variable(n, pivot);
    let mut plus: Vec<Monomial> = gens.iter().filter(|g| g.exponent(pivot) == 0).cloned().collect();
    plus.push(x.clone());
    let colon: Vec<Monomial> = gens.iter().map(|g| x.gcd(g).quotient_of(g).unwrap()).collect();
    let mut k = k_polynomial(ring, plus);
    let shifted = k_polynomial(ring, colon).shift(&ring.degree_unchecked(&x));
    k.add_assign(&shifted);
    k
}

/// Integer polynomial in `y_1..y_v`: the numerator of the Hilbert series of `S/I`
/// over the denominator `∏ (1 − y_i)^{n_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HilbertNumerator {
    coefficients: BTreeMap<Multidegree, i64>,
}

impl HilbertNumerator {
    pub fn zero() -> Self {
        HilbertNumerator {
            coefficients: BTreeMap::new(),
        }
    }

    pub fn one(v: usize) -> Self {
        Self::from_pairs(&[(Multidegree::zero(v), 1)])
    }

    pub fn from_pairs(pairs: &[(Multidegree, i64)]) -> Self {
        let mut h = Self::zero();
        for (d, c) in pairs {
            h.add_term(d.clone(), *c);
        }
        h
    }

    pub fn coefficients(&self) -> &BTreeMap<Multidegree, i64> {
        &self.coefficients
    }

    pub fn coefficient(&self, d: &Multidegree) -> i64 {
        self.coefficients.get(d).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, d: Multidegree, c: i64) {
        let e = self.coefficients.entry(d.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coefficients.remove(&d);
        }
    }

    pub fn add_assign(&mut self, other: &HilbertNumerator) {
        for (d, c) in &other.coefficients {
            self.add_term(d.clone(), *c);
        }
    }

    pub fn shift(&self, by: &Multidegree) -> HilbertNumerator {
        HilbertNumerator {
            coefficients: self.coefficients.iter().map(|(d, c)| (d.add(by), *c)).collect(),
        }
    }

    pub fn mul(&self, other: &HilbertNumerator) -> HilbertNumerator {
        let mut out = Self::zero();
        for (a, ca) in &self.coefficients {
            for (b, cb) in &other.coefficients {
                out.add_term(a.add(b), ca * cb);
            }
        }
        out
    }

    /// `dim (S/I)_a`, expanding the numerator against `∏ (1 − y_i)^{-n_i}`.
    pub fn series_coefficient(&self, a: &Multidegree, block_sizes: &[usize]) -> i64 {
        fn binom(n: i64, k: i64) -> i64 {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        self.coefficients
            .iter()
            .filter(|(b, _)| b.leq(a))
            .map(|(b, c)| {
                let mut prod = *c;
                for (i, &n) in block_sizes.iter().enumerate() {
                    let k = (a.0[i] - b.0[i]) as i64;
                    prod *= binom(n as i64 - 1 + k, k);
                }
                prod
            })
            .sum()
    }

    pub fn format(&self) -> String {
        if self.coefficients.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (d, c)) in self.coefficients.iter().enumerate() {
            let mono: Vec<String> = d
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("y{}", i + 1) } else { format!("y{}^{e}", i + 1) })
                .collect();
            let (neg, abs) = (*c < 0, c.unsigned_abs());
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (abs, mono.is_empty()) {
                (_, true) => out.push_str(&abs.to_string()),
                (1, false) => out.push_str(&mono.join("*")),
                _ => out.push_str(&format!("{abs}*{}", mono.join("*"))),
            }
        }
        out
    }
}

impl fmt::Display for HilbertNumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(blocks: &[usize]) -> BlockRing {
        BlockRing::with_blocks(blocks).unwrap()
    }

    fn m(r: &BlockRing, f: &[(usize, usize, u32)]) -> Monomial {
        r.monomial_from(f)
    }

    fn ideal(r: &BlockRing, gens: &[&[(usize, usize, u32)]]) -> MonomialIdeal {
        MonomialIdeal::new(r, gens.iter().map(|g| m(r, g)).collect())
    }

    #[test]
    fn minimalize_examples() {
        let r = r(&[2, 2]);
        let a = ideal(&r, &[&[(1, 1, 1)], &[(1, 1, 1), (2, 1, 1)]]);
        assert_eq!(a.generators(), &[m(&r, &[(1, 1, 1)])]);
        let b = ideal(
            &r,
            &[
                &[(1, 1, 1), (2, 2, 1)],
                &[(1, 2, 1), (2, 1, 1)],
                &[(1, 1, 1), (1, 2, 1), (2, 1, 1), (2, 2, 1)],
            ],
        );
        assert_eq!(b.generators().len(), 2);
        assert!(!b.contains(&m(&r, &[(1, 1, 1)])));
    }

    #[test]
    fn numerator_examples() {
        let r = r(&[2, 2]);
        assert_eq!(MonomialIdeal::zero(&r).hilbert_numerator(), HilbertNumerator::one(2));
        let h = ideal(&r, &[&[(1, 1, 1), (2, 1, 1)]]).hilbert_numerator();
        assert_eq!(
            h,
            HilbertNumerator::from_pairs(&[(Multidegree(vec![0, 0]), 1), (Multidegree(vec![1, 1]), -1)])
        );
        // Inclusion–exclusion over {x11, x12}: 1 − y1 − y1 + y1^2.
        let h = ideal(&r, &[&[(1, 1, 1)], &[(1, 2, 1)]]).hilbert_numerator();
        assert_eq!(
            h,
            HilbertNumerator::from_pairs(&[
                (Multidegree(vec![0, 0]), 1),
                (Multidegree(vec![1, 0]), -2),
                (Multidegree(vec![2, 0]), 1),
            ])
        );
        assert_eq!(h.format(), "1 - 2*y1 + y1^2");
        assert_eq!(MonomialIdeal::unit(&r).hilbert_numerator(), HilbertNumerator::zero());
    }

    #[test]
    fn radical_examples() {
        let r3 = r(&[3, 3, 3]);
        assert!(ideal(&r3, &[&[(1, 1, 1), (2, 1, 1)]]).is_radical());
        assert!(!ideal(&r3, &[&[(1, 1, 2)]]).is_radical());
        let j = ideal(
            &r3,
            &[
                &[(1, 2, 1), (2, 1, 1)],
                &[(1, 3, 1), (2, 1, 1)],
                &[(1, 3, 1), (2, 2, 1)],
                &[(1, 1, 1), (3, 3, 1)],
                &[(1, 2, 1), (3, 3, 1)],
                &[(2, 1, 1), (3, 3, 1)],
                &[(2, 2, 1), (3, 3, 1)],
            ],
        );
        assert!(j.is_radical());
    }

    #[test]
    fn borel_examples() {
        let r = r(&[2, 2]);
        let p = 32003;
        let a = ideal(&r, &[&[(1, 1, 1)]]);
        assert!(a.is_borel_fixed(p) && a.is_strongly_stable());
        let b = ideal(&r, &[&[(1, 2, 1)]]);
        assert!(!b.is_borel_fixed(p) && !b.is_strongly_stable());
        let c = ideal(&r, &[&[(1, 1, 2)], &[(1, 1, 1), (1, 2, 1)]]);
        assert!(c.is_borel_fixed(p) && c.is_strongly_stable());
        // In characteristic 2, (x11^2, x12^2) is Borel fixed but not strongly stable.
        let d = ideal(&r, &[&[(1, 1, 2)], &[(1, 2, 2)]]);
        assert!(d.is_borel_fixed(2));
        assert!(!d.is_strongly_stable());
    }

    #[test]
    fn dual_examples() {
        let r = r(&[2, 2]);
        let a = ideal(&r, &[&[(1, 1, 1), (2, 1, 1)]]);
        let a_dual = ideal(&r, &[&[(1, 1, 1)], &[(2, 1, 1)]]);
        assert_eq!(a.alexander_dual().unwrap(), a_dual);
        assert_eq!(a_dual.alexander_dual().unwrap(), a);
        let b = ideal(
            &r,
            &[&[(1, 1, 1), (2, 1, 1)], &[(1, 1, 1), (2, 2, 1)], &[(1, 2, 1), (2, 1, 1)]],
        );
        let expected = ideal(
            &r,
            &[&[(1, 1, 1), (2, 1, 1)], &[(1, 1, 1), (1, 2, 1)], &[(2, 1, 1), (2, 2, 1)]],
        );
        assert_eq!(b.alexander_dual().unwrap(), expected);
        assert_eq!(
            ideal(&r, &[&[(1, 1, 2)]]).alexander_dual(),
            Err(Error::RequiresSquarefree)
        );
        assert_eq!(MonomialIdeal::zero(&r).alexander_dual().unwrap(), MonomialIdeal::unit(&r));
        assert_eq!(MonomialIdeal::unit(&r).alexander_dual().unwrap(), MonomialIdeal::zero(&r));
    }

    #[test]
    fn polarize_examples() {
        let r22 = r(&[2, 2]);
        let a = ideal(&r22, &[&[(1, 1, 2)]]);
        assert_eq!(a.polarize().unwrap(), ideal(&r22, &[&[(1, 1, 1), (1, 2, 1)]]));
        let sq = ideal(&r22, &[&[(1, 1, 1), (2, 2, 1)], &[(1, 2, 1)]]);
        assert_eq!(sq.polarize().unwrap(), sq);
        let r31 = r(&[3, 1]);
        let b = ideal(&r31, &[&[(1, 1, 2), (2, 1, 1)]]);
        assert_eq!(b.polarize().unwrap(), ideal(&r31, &[&[(1, 1, 1), (1, 2, 1), (2, 1, 1)]]));
        let c = ideal(&r22, &[&[(1, 1, 3)]]);
        assert_eq!(
            c.polarize(),
            Err(Error::RingTooSmallToPolarize {
                block: 1,
                needed: 2,
                available: 1
            })
        );
    }

    #[test]
    fn extended_from_t_examples() {
        let r22 = r(&[2, 2]);
        assert!(ideal(&r22, &[&[(1, 1, 1), (2, 1, 1)]]).is_extended_from_t());
        assert!(!ideal(&r22, &[&[(1, 1, 1), (2, 2, 1)]]).is_extended_from_t());
        let r312 = r(&[3, 1, 2]);
        assert!(ideal(&r312, &[&[(1, 1, 3), (3, 1, 1)]]).is_extended_from_t());
    }

    #[test]
    fn regularity_examples() {
        let r22 = r(&[2, 2]);
        assert_eq!(ideal(&r22, &[&[(1, 1, 1)]]).regularity_strongly_stable(), Ok(1));
        let c = ideal(&r22, &[&[(1, 1, 2)], &[(1, 1, 1), (1, 2, 1)]]);
        assert_eq!(c.regularity_strongly_stable(), Ok(2));
        assert_eq!(
            ideal(&r22, &[&[(1, 2, 1)]]).regularity_strongly_stable(),
            Err(Error::NotStronglyStable)
        );
    }

    #[test]
    fn lcm_rule_and_colon() {
        let r22 = r(&[2, 2]);
        let a = ideal(&r22, &[&[(1, 1, 1)], &[(1, 2, 1)]]);
        let b = ideal(&r22, &[&[(1, 1, 1), (2, 1, 1)]]);
        assert_eq!(a.intersect(&b), b);
        let c = b.colon_monomial(&m(&r22, &[(2, 1, 1)]));
        assert_eq!(c, ideal(&r22, &[&[(1, 1, 1)]]));
    }
    #[test]
    fn regular_sequence_examples() {
        let r22 = r(&[2, 2]);
        let gamma = gamma_forms(&r22);
        assert_eq!(gamma.len(), 2);
        let a = ideal(&r22, &[&[(1, 1, 1), (2, 1, 1)]]).to_ideal();
        assert!(regular_sequence_test(&a, &gamma, false).unwrap());
        let b = ideal(&r22, &[&[(1, 1, 1)], &[(1, 2, 1)]]).to_ideal();
        assert!(!regular_sequence_test(&b, &gamma, false).unwrap());
        let zero = Ideal::zero(&r22);
        let forms = vec![Polynomial::var(&r22, 1, 1), Polynomial::var(&r22, 2, 2)];
        assert!(regular_sequence_test(&zero, &forms, false).unwrap());
        let unit = Ideal::unit(&r22);
        assert!(!regular_sequence_test(&unit, &gamma, false).unwrap());
        assert!(regular_sequence_test(&unit, &gamma, true).unwrap());
    }
}
