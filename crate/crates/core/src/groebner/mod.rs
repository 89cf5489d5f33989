//! Ideals, reduced Gröbner bases and the operations built on them.

mod engine;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::monomial::{HilbertNumerator, MonomialIdeal};
use crate::order::TermOrder;
use crate::poly::{Homogeneity, Polynomial};
use crate::ring::{BlockRing, Monomial};

use engine::Encoder;

/// Caps that turn a runaway computation into an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_basis: usize,
    pub max_terms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_basis: 5000,
            max_terms: 100_000,
        }
    }
}

/// Reduced Gröbner basis: monic, sorted by decreasing leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    order: TermOrder,
    elements: Vec<Polynomial>,
    leads: Vec<Monomial>,
}

impl GroebnerBasis {
    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn lead_monomials(&self) -> &[Monomial] {
        &self.leads
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Whether the basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.leads.len() == 1 && self.leads[0].is_one()
    }
}

/// Computes the reduced Gröbner basis of `gens` under `order` without touching any cache.
pub fn buchberger_raw(gens: &[Polynomial], order: &TermOrder, limits: &Limits) -> Result<GroebnerBasis> {
    let nvars = order.num_vars();
    if let Some(g) = gens.iter().find(|g| g.num_vars() != nvars) {
        return Err(Error::structural(format!(
            "generator in {} variables, order on {nvars}",
            g.num_vars()
        )));
    }
    let p = match gens.first() {
        Some(g) => g.characteristic(),
        None => {
            return Ok(GroebnerBasis {
                order: order.clone(),
                elements: Vec::new(),
                leads: Vec::new(),
            })
        }
    };
    if gens.iter().any(|g| g.characteristic() != p) {
        return Err(Error::structural("generators over different fields"));
    }
    let enc = Encoder::new(order, p);
    let basis = engine::groebner(&enc, gens, limits)?;
    let leads = basis.iter().map(|g| engine::lead_monomial(&enc, g)).collect();
    let elements = basis.iter().map(|g| enc.decode(g)).collect();
    Ok(GroebnerBasis {
        order: order.clone(),
        elements,
        leads,
    })
}

/// Remainder of `f` on division by the basis; no term of the result is divisible by a lead term.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    normal_form_limited(f, gb, &Limits::default()).expect("normal form exceeded resource limits")
}

pub fn normal_form_limited(f: &Polynomial, gb: &GroebnerBasis, limits: &Limits) -> Result<Polynomial> {
    if gb.elements.is_empty() {
        return Ok(f.clone());
    }
    let enc = Encoder::new(&gb.order, f.characteristic());
    let encoded: Vec<_> = gb.elements.iter().map(|g| enc.encode(g)).collect();
    engine::normal_form(&enc, f, &encoded, limits)
}

/// Post-hoc Buchberger criterion: every S-pair of the basis reduces to zero.
pub fn verify_s_pairs(gb: &GroebnerBasis, limits: &Limits) -> Result<bool> {
    let Some(first) = gb.elements.first() else {
        return Ok(true);
    };
    let enc = Encoder::new(&gb.order, first.characteristic());
    let encoded: Vec<_> = gb.elements.iter().map(|g| enc.encode(g)).collect();
    engine::s_pairs_reduce_to_zero(&enc, &encoded, limits)
}

/// An ideal of a block ring, with reduced Gröbner bases cached per term order.
pub struct Ideal {
    ring: BlockRing,
    generators: Vec<Polynomial>,
    limits: Limits,
    cache: Mutex<HashMap<String, Arc<GroebnerBasis>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            limits: self.limits,
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ideal")
            .field("ring", &self.ring.to_string())
            .field("generators", &self.generator_strings())
            .finish()
    }
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(ring: &BlockRing, generators: Vec<Polynomial>) -> Result<Self> {
        for g in &generators {
            if g.num_vars() != ring.num_vars() || g.characteristic() != ring.characteristic() {
                return Err(Error::structural("generator does not belong to the ring"));
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            limits: Limits::default(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn zero(ring: &BlockRing) -> Self {
        Self::new(ring, Vec::new()).unwrap()
    }

    pub fn unit(ring: &BlockRing) -> Self {
        Self::new(ring, vec![Polynomial::constant(ring, 1)]).unwrap()
    }

    pub fn from_monomials(ring: &BlockRing, ms: &[Monomial]) -> Self {
        Self::new(ring, ms.iter().map(|m| Polynomial::monomial(ring, m.clone())).collect()).unwrap()
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn ring(&self) -> &BlockRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.format(&self.ring)).collect()
    }

    /// Same limits, new generators.
    fn derived(&self, ring: &BlockRing, generators: Vec<Polynomial>) -> Ideal {
        Ideal::new(ring, generators).unwrap().with_limits(self.limits)
    }

    /// All generators multihomogeneous.
    pub fn is_graded(&self) -> bool {
        self.generators
            .iter()
            .all(|g| !matches!(g.homogeneity(&self.ring), Homogeneity::Inhomogeneous))
    }

    pub fn require_graded(&self) -> Result<()> {
        match self
            .generators
            .iter()
            .find(|g| matches!(g.homogeneity(&self.ring), Homogeneity::Inhomogeneous))
        {
            Some(g) => Err(Error::NotHomogeneous(g.format(&self.ring))),
            None => Ok(()),
        }
    }

    /// The monomial ideal, when every generator is a single term.
    pub fn as_monomial(&self) -> Option<MonomialIdeal> {
        self.generators
            .iter()
            .all(Polynomial::is_monomial)
            .then(|| {
                MonomialIdeal::new(
                    &self.ring,
                    self.generators.iter().map(|g| g.terms()[0].0.clone()).collect(),
                )
            })
    }

    /// Reduced Gröbner basis under `order`, computed once per order.
    pub fn groebner_basis(&self, order: &TermOrder) -> Result<Arc<GroebnerBasis>> {
        if order.num_vars() != self.ring.num_vars() {
            return Err(Error::structural("order and ideal live in different rings"));
        }
        let key = order.canonical();
        if let Some(gb) = self.cache.lock().unwrap().get(&key) {
            return Ok(gb.clone());
        }
        let gb = Arc::new(buchberger_raw(&self.generators, order, &self.limits)?);
        Ok(self
            .cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(gb)
            .clone())
    }

    pub fn initial_ideal(&self, order: &TermOrder) -> Result<MonomialIdeal> {
        let gb = self.groebner_basis(order)?;
        Ok(MonomialIdeal::new(&self.ring, gb.lead_monomials().to_vec()))
    }

    pub fn default_order(&self) -> TermOrder {
        TermOrder::degrevlex(&self.ring)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let gb = self.groebner_basis(&self.default_order())?;
        Ok(normal_form_limited(f, &gb, &self.limits)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as ideals (same reduced Gröbner basis).
    pub fn same_ideal(&self, other: &Ideal) -> Result<bool> {
        if self.ring != other.ring {
            return Ok(false);
        }
        let o = self.default_order();
        Ok(self.groebner_basis(&o)?.elements() == other.groebner_basis(&o)?.elements())
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner_basis(&self.default_order())?.is_unit())
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        self.derived(&self.ring, gens)
    }

    pub fn add_generators(&self, extra: &[Polynomial]) -> Ideal {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        self.derived(&self.ring, gens)
    }

    /// `I ∩ J` by eliminating `t` from `t·I + (1 − t)·J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        if self.ring != other.ring {
            return Err(Error::structural("intersecting ideals of different rings"));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(self.derived(&self.ring, Vec::new()));
        }
        let n = self.ring.num_vars();
        let p = self.ring.characteristic();
        let t = Polynomial::from_sorted_raw(n + 1, p, vec![(Monomial::variable(n + 1, n), 1)]);
        let one_minus_t = &Polynomial::from_sorted_raw(n + 1, p, vec![(Monomial::one(n + 1), 1)]) - &t;
        let mut gens: Vec<Polynomial> = self.generators.iter().map(|f| &f.extend_vars(1) * &t).collect();
        gens.extend(other.generators.iter().map(|g| &g.extend_vars(1) * &one_minus_t));
        let order = TermOrder::elimination(vec![n], TermOrder::plain_degrevlex(n + 1))?;
        let gb = buchberger_raw(&gens, &order, &self.limits)?;
        let kept = gb
            .elements()
            .iter()
            .filter(|g| g.monomials().all(|m| m.exponent(n) == 0))
            .map(|g| g.drop_vars(&[n]))
            .collect();
        Ok(self.derived(&self.ring, kept))
    }

    /// `I : f = { g : g·f ∈ I }`.
    pub fn colon(&self, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::Precondition("colon by the zero polynomial".into()));
        }
        let principal = self.derived(&self.ring, vec![f.clone()]);
        let meet = self.intersect(&principal)?;
        let gens = meet
            .generators
            .iter()
            .map(|g| {
                g.div_exact(f).ok_or_else(|| {
                    Error::InternalConsistency("element of I ∩ (f) not divisible by f".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.derived(&self.ring, gens))
    }

    /// `I ∩ K[variables not in vars]`, as an ideal of the same ring.
    pub fn eliminate(&self, vars: &[usize]) -> Result<Ideal> {
        if vars.iter().any(|&v| v >= self.ring.num_vars()) {
            return Err(Error::structural("eliminated variable out of range"));
        }
        let order = TermOrder::elimination(vars.to_vec(), TermOrder::degrevlex(&self.ring))?;
        let gb = self.groebner_basis(&order)?;
        let kept = gb
            .elements()
            .iter()
            .filter(|g| g.monomials().all(|m| vars.iter().all(|&v| m.exponent(v) == 0)))
            .cloned()
            .collect();
        Ok(self.derived(&self.ring, kept))
    }

    /// Multigraded K-polynomial of `S/I`, read off the initial ideal under `order`.
    pub fn hilbert_series(&self, order: &TermOrder) -> Result<HilbertNumerator> {
        self.require_graded()?;
        Ok(self.initial_ideal(order)?.hilbert_numerator())
    }

    /// A minimal multigraded generating set: generators are scanned by increasing
    /// total degree and kept only if not already in the ideal of those kept so far.
    pub fn minimal_generators(&self) -> Result<Vec<Polynomial>> {
        self.require_graded()?;
        if let Some(m) = self.as_monomial() {
            return Ok(m
                .generators()
                .iter()
                .map(|g| Polynomial::monomial(&self.ring, g.clone()))
                .collect());
        }
        let mut gens = self.generators.clone();
        gens.sort_by_key(|g| g.total_degree());
        let mut kept: Vec<Polynomial> = Vec::new();
        for g in gens {
            let current = self.derived(&self.ring, kept.clone());
            if kept.is_empty() || !current.contains(&g)? {
                kept.push(g);
            }
        }
        Ok(kept)
    }

    /// Applies a substitution of variables to every generator.
    pub fn map(&self, target: &BlockRing, images: &[Polynomial]) -> Ideal {
        let gens = self
            .generators
            .iter()
            .map(|g| g.substitute(images, target.num_vars()))
            .collect();
        self.derived(target, gens)
    }
}

/// `buchberger(I, o)`: the cached reduced Gröbner basis.
pub fn buchberger(ideal: &Ideal, order: &TermOrder) -> Result<Arc<GroebnerBasis>> {
    ideal.groebner_basis(order)
}
