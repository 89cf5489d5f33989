//! Membership tests for the CS and CS* families and checks of their structural
//! consequences: duality, closure operations, universal Gröbner bases, degree bounds.

use std::collections::HashSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field;
use crate::gin::{self, GinReport, DEFAULT_TRIALS};
use crate::groebner::{buchberger_raw, Ideal};
use crate::monomial::{gamma_forms, regular_sequence_test, MonomialIdeal};
use crate::order::{block_respecting_priorities, OrderKind, TermOrder};
use crate::poly::Polynomial;
use crate::ring::{BlockRing, Multidegree};

/// Permutation enumeration is only attempted up to this many variables.
pub const PERMUTATION_VAR_LIMIT: usize = 8;
const PERMUTATION_CAP: usize = 40_320;

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub trials: usize,
    pub seed: u64,
    /// Order used for gins; degrevlex when absent or not valid for the ring at hand.
    pub order: Option<TermOrder>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            trials: DEFAULT_TRIALS,
            seed: 0,
            order: None,
        }
    }
}

impl CheckOptions {
    pub fn with_seed(seed: u64) -> Self {
        CheckOptions {
            seed,
            ..Default::default()
        }
    }

    pub fn primary_order(&self, ring: &BlockRing) -> TermOrder {
        self.order
            .clone()
            .filter(|o| o.num_vars() == ring.num_vars() && o.check_convention(ring).is_ok())
            .unwrap_or_else(|| TermOrder::degrevlex(ring))
    }

    fn cross_order(&self, ring: &BlockRing) -> TermOrder {
        match self.primary_order(ring).kind() {
            OrderKind::Lex => TermOrder::degrevlex(ring),
            _ => TermOrder::lex(ring),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    /// "CS" or "CS*".
    pub property: &'static str,
    pub verdict: Verdict,
    /// The criterion the verdict rests on.
    pub criterion: String,
    #[serde(serialize_with = "gin::ser_ideal")]
    pub gin: MonomialIdeal,
    pub orders: Vec<String>,
    pub seeds: Vec<u64>,
    pub notes: Vec<String>,
}

impl MembershipReport {
    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }

    fn inconclusive(property: &'static str, rep: &GinReport) -> Self {
        MembershipReport {
            property,
            verdict: Verdict::Inconclusive,
            criterion: "gin trials disagree or are not Borel fixed".into(),
            gin: rep.result.clone(),
            orders: vec![rep.order.clone()],
            seeds: rep.seeds.clone(),
            notes: rep.candidates.iter().map(|c| format!("candidate {c}")).collect(),
        }
    }
}

/// CS membership: the gin under the primary order is radical. A "yes" is cross-checked
/// against the gin under a second order, which theory says must coincide.
pub fn is_cs(ideal: &Ideal, opts: &CheckOptions) -> Result<MembershipReport> {
    let ring = ideal.ring();
    let primary = opts.primary_order(ring);
    let rep = gin::gin(ideal, &primary, opts.trials, opts.seed)?;
    if !rep.is_conclusive() {
        return Ok(MembershipReport::inconclusive("CS", &rep));
    }
    if !rep.result.is_radical() {
        return Ok(MembershipReport {
            property: "CS",
            verdict: Verdict::No,
            criterion: "gin is not radical".into(),
            gin: rep.result,
            orders: vec![rep.order],
            seeds: rep.seeds,
            notes: Vec::new(),
        });
    }
    let cross = gin::gin(ideal, &opts.cross_order(ring), opts.trials, opts.seed)?;
    if !cross.is_conclusive() {
        return Ok(MembershipReport::inconclusive("CS", &cross));
    }
    if cross.result != rep.result {
        return Err(Error::InternalConsistency(format!(
            "radical gin {} under {} differs from {} under {}",
            rep.result, rep.order, cross.result, cross.order
        )));
    }
    Ok(MembershipReport {
        property: "CS",
        verdict: Verdict::Yes,
        criterion: "gin is radical".into(),
        gin: rep.result,
        orders: vec![rep.order, cross.order],
        seeds: rep.seeds,
        notes: Vec::new(),
    })
}

/// CS* membership: the gin is extended from T. For monomial input the regular-sequence
/// criterion with `x[i,j] − x[i,1]` is evaluated too and must agree.
pub fn is_csstar(ideal: &Ideal, opts: &CheckOptions) -> Result<MembershipReport> {
    let ring = ideal.ring();
    let rep = gin::gin(ideal, &opts.primary_order(ring), opts.trials, opts.seed)?;
    if !rep.is_conclusive() {
        return Ok(MembershipReport::inconclusive("CS*", &rep));
    }
    let extended = rep.result.is_extended_from_t();
    let mut criterion = if extended {
        "gin is extended from T".to_string()
    } else {
        "gin is not extended from T".to_string()
    };
    if ideal.as_monomial().is_some() {
        let regular = regular_sequence_test(ideal, &gamma_forms(ring), ideal.is_unit()?)?;
        if regular != extended {
            return Err(Error::InternalConsistency(format!(
                "gin {} extended from T: {extended}, but regular-sequence test says {regular}",
                rep.result
            )));
        }
        criterion.push_str(if regular {
            "; x[i,j] - x[i,1] form a regular sequence"
        } else {
            "; x[i,j] - x[i,1] do not form a regular sequence"
        });
    }
    Ok(MembershipReport {
        property: "CS*",
        verdict: if extended { Verdict::Yes } else { Verdict::No },
        criterion,
        gin: rep.result,
        orders: vec![rep.order],
        seeds: rep.seeds,
        notes: Vec::new(),
    })
}

/// The gin of a CS* ideal, the unique Borel fixed ideal extended from T with its Hilbert series.
pub fn csstar_canonical_c(ideal: &Ideal, opts: &CheckOptions) -> Result<MonomialIdeal> {
    let rep = is_csstar(ideal, opts)?;
    match rep.verdict {
        Verdict::Yes => Ok(rep.gin),
        v => Err(Error::Precondition(format!("ideal is not verified CS* (verdict {v})"))),
    }
}

/// Whether the multidegrees of a minimal generating set are pairwise incomparable.
pub fn check_incomparable_degrees(ideal: &Ideal) -> Result<bool> {
    let ring = ideal.ring();
    let degrees: Vec<Multidegree> = ideal
        .minimal_generators()?
        .iter()
        .map(|g| g.multidegree(ring))
        .collect::<Result<_>>()?;
    Ok(antichain(&degrees))
}

fn antichain(degrees: &[Multidegree]) -> bool {
    degrees
        .iter()
        .enumerate()
        .all(|(k, a)| degrees[k + 1..].iter().all(|b| !a.leq(b) && !b.leq(a)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualTranscript {
    #[serde(serialize_with = "gin::ser_ideal")]
    pub ideal: MonomialIdeal,
    #[serde(serialize_with = "gin::ser_ideal")]
    pub dual: MonomialIdeal,
    pub ideal_cs: MembershipReport,
    pub dual_csstar: MembershipReport,
    pub biconditional: bool,
    /// `gin(I)*`, computed when `I` is CS.
    #[serde(serialize_with = "ser_opt_ideal")]
    pub gin_dual: Option<MonomialIdeal>,
    /// `pol(gin(I*))`, computed when `I` is CS.
    #[serde(serialize_with = "ser_opt_ideal")]
    pub polarized_gin: Option<MonomialIdeal>,
    pub identity: Option<bool>,
    pub inconclusive: bool,
    pub holds: bool,
}

fn ser_opt_ideal<S: serde::Serializer>(m: &Option<MonomialIdeal>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match m {
        Some(m) => gin::ser_ideal(m, s),
        None => s.serialize_none(),
    }
}

/// `I ∈ CS ⇔ I* ∈ CS*`, and `gin(I)* = pol(gin(I*))` when `I ∈ CS`.
pub fn verify_dual_theorem(ideal: &MonomialIdeal, opts: &CheckOptions) -> Result<DualTranscript> {
    let dual = ideal.alexander_dual()?;
    let ideal_cs = is_cs(&ideal.to_ideal(), opts)?;
    let dual_csstar = is_csstar(&dual.to_ideal(), opts)?;
    let inconclusive = ideal_cs.verdict == Verdict::Inconclusive || dual_csstar.verdict == Verdict::Inconclusive;
    let biconditional = !inconclusive && ideal_cs.is_yes() == dual_csstar.is_yes();
    let (mut gin_dual, mut polarized_gin, mut identity) = (None, None, None);
    if ideal_cs.is_yes() && !inconclusive {
        let lhs = ideal_cs.gin.alexander_dual()?;
        let rhs = dual_csstar.gin.polarize()?;
        identity = Some(lhs == rhs);
        gin_dual = Some(lhs);
        polarized_gin = Some(rhs);
    }
    let holds = biconditional && identity.unwrap_or(true);
    Ok(DualTranscript {
        ideal: ideal.clone(),
        dual,
        ideal_cs,
        dual_csstar,
        biconditional,
        gin_dual,
        polarized_gin,
        identity,
        inconclusive,
        holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    #[serde(rename = "CS")]
    Cs,
    #[serde(rename = "CS*")]
    CsStar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureCheck {
    pub item: u8,
    pub description: String,
    pub expected: Family,
    /// `None` when the item does not apply (a block of size one cannot lose a variable).
    pub verdict: Option<Verdict>,
    pub generators: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureTranscript {
    pub families: Vec<Family>,
    pub linear_form: String,
    pub checks: Vec<ClosureCheck>,
    pub passed: bool,
}

/// Graded coordinate change bringing `L` to `x[b,n_b]`, and the smaller ring without it.
struct LinearFormChart {
    last: usize,
    /// `alpha(L) = x[b,n_b]`, as variable images.
    alpha: Vec<Polynomial>,
    small: Option<BlockRing>,
}

impl LinearFormChart {
    fn new(ring: &BlockRing, l: &Polynomial) -> Result<Self> {
        if !l.is_linear_form() || l.is_zero() {
            return Err(Error::Precondition(format!(
                "{} is not a nonzero linear form",
                l.format(ring)
            )));
        }
        let deg = l.multidegree(ring)?;
        let block = deg.entries().iter().position(|&e| e == 1).unwrap() + 1;
        let p = ring.characteristic();
        let range = ring.block_range(block);
        let n = range.len();
        let coeffs: Vec<u32> = range
            .clone()
            .map(|v| l.coefficient(&crate::ring::Monomial::variable(ring.num_vars(), v)))
            .collect();
        let j0 = (0..n).rev().find(|&j| coeffs[j] != 0).unwrap();
        // beta as a matrix on the block: column j holds the coordinates of beta(x[b,j+1]).
        let mut beta: Vec<Vec<u32>> = (0..n).map(|k| (0..n).map(|j| (k == j) as u32).collect()).collect();
        if j0 != n - 1 {
            beta[j0][j0] = 0;
            beta[n - 1][j0] = 1;
        }
        for (k, &c) in coeffs.iter().enumerate() {
            beta[k][n - 1] = c;
        }
        let inv = invert(&beta, p).ok_or_else(|| {
            Error::InternalConsistency("coordinate change for a linear form is singular".into())
        })?;
        let mut alpha: Vec<Polynomial> = (0..ring.num_vars())
            .map(|v| {
                let (i, j) = ring.label(v);
                Polynomial::var(ring, i, j)
            })
            .collect();
        for j in 0..n {
            let mut img = Polynomial::zero(ring);
            for (k, row) in inv.iter().enumerate() {
                if row[j] != 0 {
                    img = &img + &Polynomial::var(ring, block, k + 1).scale(row[j]);
                }
            }
            alpha[range.start + j] = img;
        }
        let small = if n > 1 {
            let mut sizes = ring.block_sizes().to_vec();
            sizes[block - 1] -= 1;
            Some(BlockRing::new(sizes, p)?)
        } else {
            None
        };
        Ok(LinearFormChart {
            last: range.end - 1,
            alpha,
            small,
        })
    }

    fn transport(&self, ideal: &Ideal) -> Ideal {
        ideal.map(ideal.ring(), &self.alpha)
    }

    /// `(I + (L))/(L)` as an ideal of the ring without `x[b,n_b]`.
    fn quotient(&self, ideal: &Ideal) -> Result<Option<Ideal>> {
        let Some(small) = &self.small else {
            return Ok(None);
        };
        let ring = ideal.ring();
        let moved = self.transport(ideal);
        let mut images: Vec<Polynomial> = (0..ring.num_vars())
            .map(|v| {
                let (i, j) = ring.label(v);
                Polynomial::var(ring, i, j)
            })
            .collect();
        images[self.last] = Polynomial::zero(ring);
        let gens = moved
            .generators()
            .iter()
            .map(|g| g.substitute(&images, ring.num_vars()).drop_vars(&[self.last]))
            .collect();
        Ok(Some(Ideal::new(small, gens)?.with_limits(ideal.limits())))
    }

    /// `I ∩ R` for the subring `R` generated by the preimages of every variable except
    /// `x[b,n_b]`, expressed in the ring without that variable.
    fn section(&self, ideal: &Ideal) -> Result<Option<Ideal>> {
        let Some(small) = &self.small else {
            return Ok(None);
        };
        let elim = self.transport(ideal).eliminate(&[self.last])?;
        let gens = elim.generators().iter().map(|g| g.drop_vars(&[self.last])).collect();
        Ok(Some(Ideal::new(small, gens)?.with_limits(ideal.limits())))
    }
}

/// Inverse of a square matrix over `F_p` by Gauss–Jordan elimination.
fn invert(m: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let n = m.len();
    let mut a: Vec<Vec<u32>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| (i == j) as u32));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let inv = field::inv(a[col][col], p);
        for x in a[col].iter_mut() {
            *x = field::mul(*x, inv, p);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..2 * n {
                    let sub = field::mul(f, a[col][c], p);
                    a[r][c] = field::sub(a[r][c], sub, p);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Applies every closure operation relevant to the families `I` belongs to and checks
/// that the result lies in the predicted family.
pub fn closure_suite(ideal: &Ideal, l: &Polynomial, opts: &CheckOptions) -> Result<ClosureTranscript> {
    let ring = ideal.ring();
    let chart = LinearFormChart::new(ring, l)?;
    let cs = is_cs(ideal, opts)?;
    let csstar = is_csstar(ideal, opts)?;
    let mut families = Vec::new();
    if csstar.is_yes() {
        families.push(Family::CsStar);
    }
    if cs.is_yes() {
        families.push(Family::Cs);
    }
    if families.is_empty() {
        return Err(Error::HypothesisNotSatisfied(format!(
            "ideal is in neither family (CS: {}, CS*: {})",
            cs.verdict, csstar.verdict
        )));
    }
    let principal = Ideal::new(ring, vec![l.clone()])?.with_limits(ideal.limits());

    let mut tasks: Vec<(u8, &str, Family, Option<Ideal>)> = Vec::new();
    if csstar.is_yes() {
        tasks.push((1, "(I + (L))/(L) in S/(L)", Family::CsStar, chart.quotient(ideal)?));
        tasks.push((2, "I : L", Family::CsStar, Some(ideal.colon(l)?)));
        tasks.push((3, "I ∩ (L)", Family::CsStar, Some(ideal.intersect(&principal)?)));
    }
    if cs.is_yes() {
        tasks.push((4, "I : L", Family::Cs, Some(ideal.colon(l)?)));
        tasks.push((5, "I + (L)", Family::Cs, Some(ideal.add_generators(std::slice::from_ref(l)))));
        tasks.push((5, "(I + (L))/(L) in S/(L)", Family::Cs, chart.quotient(ideal)?));
        tasks.push((6, "I ∩ R, R missing one direction of the block of L", Family::Cs, chart.section(ideal)?));
    }
    let checks = tasks
        .into_par_iter()
        .map(|(item, description, expected, target)| {
            let Some(target) = target else {
                return Ok(ClosureCheck {
                    item,
                    description: description.to_string(),
                    expected,
                    verdict: None,
                    generators: Vec::new(),
                    passed: true,
                });
            };
            let rep = match expected {
                Family::Cs => is_cs(&target, opts)?,
                Family::CsStar => is_csstar(&target, opts)?,
            };
            Ok(ClosureCheck {
                item,
                description: description.to_string(),
                expected,
                verdict: Some(rep.verdict),
                generators: target.generator_strings(),
                passed: rep.is_yes(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClosureTranscript {
        families,
        linear_form: l.format(ring),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// Random weight orders (deduplicated), then lex and degrevlex under every interleaving
/// of the blocks when the ring is small enough.
pub fn sample_orders(ring: &BlockRing, n_random: usize, seed: u64, with_permutations: bool) -> Vec<TermOrder> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < n_random && attempts < 20 * n_random.max(1) {
        attempts += 1;
        let o = TermOrder::random_weight(ring, &mut rng);
        if seen.insert(o.canonical()) {
            out.push(o);
        }
    }
    if with_permutations && ring.num_vars() <= PERMUTATION_VAR_LIMIT {
        if let Some(perms) = block_respecting_priorities(ring, PERMUTATION_CAP) {
            for perm in perms {
                for kind in [OrderKind::Lex, OrderKind::DegRevLex] {
                    let o = TermOrder::with_priority(ring, kind, perm.clone())
                        .expect("interleavings respect the block convention");
                    if seen.insert(o.canonical()) {
                        out.push(o);
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UgbFailure {
    pub order: String,
    /// Reduced Gröbner basis element whose leading term escapes the candidates' leading terms.
    pub element: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UgbReport {
    pub orders_tested: usize,
    pub orders: Vec<String>,
    pub failures: Vec<UgbFailure>,
    pub degree_profile: Vec<String>,
    pub passed: bool,
    pub note: &'static str,
}

/// Checks that the candidates' leading terms generate `in_o(I)` for every sampled order.
pub fn ugb_check(candidates: &[Polynomial], ideal: &Ideal, n_orders: usize, seed: u64) -> Result<UgbReport> {
    let ring = ideal.ring();
    let cand = Ideal::new(ring, candidates.to_vec())?.with_limits(ideal.limits());
    if !cand.same_ideal(ideal)? {
        return Err(Error::Precondition("candidates do not generate the ideal".into()));
    }
    let orders = sample_orders(ring, n_orders, seed, true);
    let limits = ideal.limits();
    let per_order: Vec<Vec<UgbFailure>> = orders
        .par_iter()
        .map(|o| {
            let gb = buchberger_raw(ideal.generators(), o, &limits)?;
            let leads: Vec<_> = candidates.iter().filter_map(|c| c.lead_monomial(o).cloned()).collect();
            Ok(gb
                .elements()
                .iter()
                .zip(gb.lead_monomials())
                .filter(|(_, lm)| !leads.iter().any(|c| c.divides(lm)))
                .map(|(g, _)| UgbFailure {
                    order: o.canonical(),
                    element: g.format(ring),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let failures: Vec<UgbFailure> = per_order.into_iter().flatten().collect();
    let degree_profile = candidates
        .iter()
        .map(|c| Ok(c.multidegree(ring)?.to_string()))
        .collect::<Result<_>>()?;
    Ok(UgbReport {
        orders_tested: orders.len(),
        orders: orders.iter().map(TermOrder::canonical).collect(),
        passed: failures.is_empty(),
        failures,
        degree_profile,
        note: "sampled, not certified",
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// Coordinatewise `≤ bound`.
    AtMost,
    /// Equal to the bound.
    Exactly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    /// Order of the reduced Gröbner basis, or "minimal generators".
    pub source: String,
    pub element: String,
    pub degree: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub bound: String,
    pub comparison: BoundKind,
    pub orders_tested: usize,
    pub violations: Vec<BoundViolation>,
    pub holds: bool,
}

/// Compares the multidegrees of the minimal generators and of every element of the
/// reduced Gröbner bases under degrevlex, lex and `n_orders` random weight orders.
pub fn degree_bound_check(
    ideal: &Ideal,
    bound: &Multidegree,
    comparison: BoundKind,
    n_orders: usize,
    seed: u64,
) -> Result<BoundReport> {
    let ring = ideal.ring();
    if bound.entries().len() != ring.num_blocks() {
        return Err(Error::structural("bound has the wrong number of entries"));
    }
    let fits = |d: &Multidegree| match comparison {
        BoundKind::AtMost => d.leq(bound),
        BoundKind::Exactly => d == bound,
    };
    let mut violations = Vec::new();
    for g in ideal.minimal_generators()? {
        let d = g.multidegree(ring)?;
        if !fits(&d) {
            violations.push(BoundViolation {
                source: "minimal generators".into(),
                element: g.format(ring),
                degree: d.to_string(),
            });
        }
    }
    let mut orders = vec![TermOrder::degrevlex(ring), TermOrder::lex(ring)];
    orders.extend(sample_orders(ring, n_orders, seed, false));
    let limits = ideal.limits();
    let per_order: Vec<Vec<BoundViolation>> = orders
        .par_iter()
        .map(|o| {
            let gb = buchberger_raw(ideal.generators(), o, &limits)?;
            let mut out = Vec::new();
            for g in gb.elements() {
                let d = g.multidegree(ring)?;
                if !fits(&d) {
                    out.push(BoundViolation {
                        source: o.canonical(),
                        element: g.format(ring),
                        degree: d.to_string(),
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    violations.extend(per_order.into_iter().flatten());
    Ok(BoundReport {
        bound: bound.to_string(),
        comparison,
        orders_tested: orders.len(),
        holds: violations.is_empty(),
        violations,
    })
}
