//! Sparse polynomials over F_p.
//!
//! Terms are stored strictly decreasing in the lexicographic order on exponent
//! vectors (lex with `x[1,1]` largest), whatever term order a computation uses.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field;
use crate::order::TermOrder;
use crate::ring::{BlockRing, Monomial, Multidegree};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    p: u32,
    terms: Vec<(Monomial, u32)>,
}

/// Result of a multihomogeneity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero polynomial is homogeneous of every degree.
    Zero,
    Homogeneous(Multidegree),
    Inhomogeneous,
}

impl Polynomial {
    pub fn zero(ring: &BlockRing) -> Self {
        Self::zero_raw(ring.num_vars(), ring.characteristic())
    }

    pub(crate) fn zero_raw(nvars: usize, p: u32) -> Self {
        Polynomial {
            nvars,
            p,
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &BlockRing, c: i64) -> Self {
        Self::from_terms_raw(
            ring.num_vars(),
            ring.characteristic(),
            vec![(ring.one(), field::from_i64(c, ring.characteristic()))],
        )
    }

    pub fn var(ring: &BlockRing, block: usize, pos: usize) -> Self {
        Self::monomial(ring, Monomial::variable(ring.num_vars(), ring.var(block, pos)))
    }

    pub fn monomial(ring: &BlockRing, m: Monomial) -> Self {
        Self::from_terms_raw(ring.num_vars(), ring.characteristic(), vec![(m, 1)])
    }

    /// Builds a polynomial from `(monomial, integer coefficient)` pairs; like terms are combined.
    pub fn from_terms(ring: &BlockRing, terms: Vec<(Monomial, i64)>) -> Result<Self> {
        let p = ring.characteristic();
        if let Some((m, _)) = terms.iter().find(|(m, _)| m.num_vars() != ring.num_vars()) {
            return Err(Error::structural(format!(
                "monomial with {} exponents in a ring with {} variables",
                m.num_vars(),
                ring.num_vars()
            )));
        }
        Ok(Self::from_terms_raw(
            ring.num_vars(),
            p,
            terms.into_iter().map(|(m, c)| (m, field::from_i64(c, p))).collect(),
        ))
    }

    pub(crate) fn from_terms_raw(nvars: usize, p: u32, terms: Vec<(Monomial, u32)>) -> Self {
        let mut acc: HashMap<Monomial, u32> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.num_vars(), nvars);
            let e = acc.entry(m).or_insert(0);
            *e = field::add(*e, c % p, p);
        }
        let mut terms: Vec<(Monomial, u32)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { nvars, p, terms }
    }

    /// Terms already strictly decreasing and zero-free.
    pub(crate) fn from_sorted_raw(nvars: usize, p: u32, terms: Vec<(Monomial, u32)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| *c != 0));
        Polynomial { nvars, p, terms }
    }

    pub fn num_vars(&self) -> usize {
        self.nvars
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter().map(|(m, _)| m)
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    /// Leading term under `order`.
    pub fn lead_term(&self, order: &TermOrder) -> Option<(&Monomial, u32)> {
        self.terms
            .iter()
            .max_by(|a, b| order.compare(&a.0, &b.0))
            .map(|(m, c)| (m, *c))
    }

    pub fn lead_monomial(&self, order: &TermOrder) -> Option<&Monomial> {
        self.lead_term(order).map(|(m, _)| m)
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let c = c % self.p;
        if c == 0 {
            return Self::zero_raw(self.nvars, self.p);
        }
        Polynomial {
            nvars: self.nvars,
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), field::mul(*a, c, self.p)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        // Multiplying by a monomial preserves the lexicographic order of exponent vectors.
        Polynomial {
            nvars: self.nvars,
            p: self.p,
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), *c)).collect(),
        }
    }

    /// Scales so the leading coefficient under `order` is 1.
    pub fn make_monic(&self, order: &TermOrder) -> Polynomial {
        match self.lead_term(order) {
            Some((_, c)) => self.scale(field::inv(c, self.p)),
            None => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::from_sorted_raw(
            self.nvars,
            self.p,
            vec![(Monomial::one(self.nvars), 1 % self.p)],
        );
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn homogeneity(&self, ring: &BlockRing) -> Homogeneity {
        let mut degs = self.terms.iter().map(|(m, _)| ring.degree_unchecked(m));
        match degs.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if degs.all(|e| e == d) {
                    Homogeneity::Homogeneous(d)
                } else {
                    Homogeneity::Inhomogeneous
                }
            }
        }
    }

    /// `(true, degree)` when all terms share one multidegree. Zero is reported as
    /// homogeneous with no degree.
    pub fn is_multihomogeneous(&self, ring: &BlockRing) -> (bool, Option<Multidegree>) {
        match self.homogeneity(ring) {
            Homogeneity::Zero => (true, None),
            Homogeneity::Homogeneous(d) => (true, Some(d)),
            Homogeneity::Inhomogeneous => (false, None),
        }
    }

    /// Multidegree of a nonzero multihomogeneous polynomial.
    pub fn multidegree(&self, ring: &BlockRing) -> Result<Multidegree> {
        match self.homogeneity(ring) {
            Homogeneity::Homogeneous(d) => Ok(d),
            Homogeneity::Zero => Err(Error::NotHomogeneous("zero polynomial has no degree".into())),
            Homogeneity::Inhomogeneous => Err(Error::NotHomogeneous(self.format(ring))),
        }
    }

    /// Linear form: every term has total degree exactly one.
    pub fn is_linear_form(&self) -> bool {
        !self.is_zero() && self.terms.iter().all(|(m, _)| m.total_degree() == 1)
    }

    /// Exact division by `d`, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        assert!(!d.is_zero(), "division by zero polynomial");
        // Terms are lex-sorted, so the first term is the lex leading term.
        let (dlead, dc) = &d.terms[0];
        let dinv = field::inv(*dc, self.p);
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let q = dlead.quotient_of(&m)?;
            let qc = field::mul(c, dinv, self.p);
            rem = &rem - &d.mul_monomial(&q).scale(qc);
            quot.push((q, qc));
        }
        Some(Polynomial::from_terms_raw(self.nvars, self.p, quot))
    }

    /// Replaces every variable by a polynomial (`images[v]` for variable `v`).
    pub fn substitute(&self, images: &[Polynomial], target_nvars: usize) -> Polynomial {
        assert_eq!(images.len(), self.nvars);
        let mut power_cache: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut acc = Polynomial::zero_raw(target_nvars, self.p);
        for (m, c) in &self.terms {
            let mut t = Polynomial::from_sorted_raw(
                target_nvars,
                self.p,
                vec![(Monomial::one(target_nvars), *c)],
            );
            for v in m.support() {
                let e = m.exponent(v);
                let pw = power_cache
                    .entry((v, e))
                    .or_insert_with(|| images[v].pow(e));
                t = &t * pw;
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Same polynomial in a ring with `extra` more variables appended.
    pub(crate) fn extend_vars(&self, extra: usize) -> Polynomial {
        Polynomial {
            nvars: self.nvars + extra,
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.exponents().to_vec();
                    e.extend(std::iter::repeat_n(0, extra));
                    (Monomial::from_exponents(e), *c)
                })
                .collect(),
        }
    }

    /// Drops the listed variables, which must not occur.
    pub(crate) fn drop_vars(&self, dropped: &[usize]) -> Polynomial {
        let keep: Vec<usize> = (0..self.nvars).filter(|v| !dropped.contains(v)).collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!(dropped.iter().all(|&v| m.exponent(v) == 0));
                (
                    Monomial::from_exponents(keep.iter().map(|&v| m.exponent(v)).collect()),
                    *c,
                )
            })
            .collect();
        Polynomial::from_terms_raw(keep.len(), self.p, terms)
    }

    pub fn format(&self, ring: &BlockRing) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let s = field::to_signed(*c, self.p);
            let (neg, abs) = (s < 0, s.unsigned_abs());
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.format(ring);
            match (abs, m.is_one()) {
                (_, true) => out.push_str(&abs.to_string()),
                (1, false) => out.push_str(&mono),
                _ => out.push_str(&format!("{abs}*{mono}")),
            }
        }
        out
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "polynomials from different rings");
        assert_eq!(self.p, other.p, "polynomials over different fields");
        let p = self.p;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let fix = |c: u32| if negate_other { field::neg(c, p) } else { c };
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((other.terms[j].0.clone(), fix(other.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field::add(self.terms[i].1, fix(other.terms[j].1), p);
                    if c != 0 {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), fix(*c))));
        Polynomial {
            nvars: self.nvars,
            p,
            terms: out,
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, true)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.p - 1)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomials from different rings");
        assert_eq!(self.p, rhs.p, "polynomials over different fields");
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                terms.push((a.mul(b), field::mul(*ca, *cb, self.p)));
            }
        }
        Polynomial::from_terms_raw(self.nvars, self.p, terms)
    }
}

/// Displays with `x[i,j]` names only when a ring is at hand; this fallback uses flat indices.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .support()
                    .map(|v| match m.exponent(v) {
                        1 => format!("v{v}"),
                        e => format!("v{v}^{e}"),
                    })
                    .collect();
                format!("{}*{}", field::to_signed(*c, self.p), vars.join("*"))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r22() -> BlockRing {
        BlockRing::with_blocks(&[2, 2]).unwrap()
    }

    fn x(r: &BlockRing, i: usize, j: usize) -> Polynomial {
        Polynomial::var(r, i, j)
    }

    #[test]
    fn homogeneity_examples() {
        let r = r22();
        let det = &(&x(&r, 1, 1) * &x(&r, 2, 2)) - &(&x(&r, 1, 2) * &x(&r, 2, 1));
        assert_eq!(
            det.is_multihomogeneous(&r),
            (true, Some(Multidegree(vec![1, 1])))
        );
        let f = &x(&r, 1, 1) + &x(&r, 2, 1);
        assert_eq!(f.is_multihomogeneous(&r), (false, None));
        let g = &x(&r, 1, 1) + &x(&r, 1, 2);
        assert_eq!(g.is_multihomogeneous(&r), (true, Some(Multidegree(vec![1, 0]))));
        assert_eq!(Polynomial::zero(&r).homogeneity(&r), Homogeneity::Zero);
    }

    #[test]
    fn exact_division() {
        let r = r22();
        let f = &x(&r, 1, 1) + &x(&r, 2, 2);
        let g = &x(&r, 1, 2) - &x(&r, 2, 1);
        let fg = &f * &g;
        assert_eq!(fg.div_exact(&f).unwrap(), g);
        assert!(fg.div_exact(&x(&r, 1, 1)).is_none());
    }

    #[test]
    fn formatting() {
        let r = r22();
        let det = &(&x(&r, 1, 1) * &x(&r, 2, 2)) - &(&x(&r, 1, 2) * &x(&r, 2, 1));
        assert_eq!(det.format(&r), "x[1,1]*x[2,2] - x[1,2]*x[2,1]");
        let c = &Polynomial::constant(&r, -3) + &x(&r, 1, 1).pow(2).scale(2);
        assert_eq!(c.format(&r), "2*x[1,1]^2 - 3");
    }

    fn poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..3, 4), -5i64..5), 0..6).prop_map(
            |ts| {
                let r = r22();
                Polynomial::from_terms(
                    &r,
                    ts.into_iter()
                        .map(|(e, c)| (Monomial::from_exponents(e), c))
                        .collect(),
                )
                .unwrap()
            },
        )
    }

    fn well_formed(f: &Polynomial) -> bool {
        f.terms.windows(2).all(|w| w[0].0 > w[1].0) && f.terms.iter().all(|(_, c)| *c != 0)
    }

    proptest! {
        #[test]
        fn ring_axioms(f in poly(), g in poly(), h in poly()) {
            let lhs = &(&f + &g) * &h;
            let rhs = &(&f * &h) + &(&g * &h);
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert!((&f - &f).is_zero());
            prop_assert!(well_formed(&lhs) && well_formed(&(&f - &g)));
        }

        #[test]
        fn degree_is_additive(a in prop::collection::vec(0u32..4, 4), b in prop::collection::vec(0u32..4, 4)) {
            let r = r22();
            let (a, b) = (Monomial::from_exponents(a), Monomial::from_exponents(b));
            let lhs = r.multidegree_of(&a.mul(&b)).unwrap();
            let rhs = r.multidegree_of(&a).unwrap().add(&r.multidegree_of(&b).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
