//! Generic initial ideals via random block upper-triangular changes of coordinates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::groebner::Ideal;
use crate::monomial::MonomialIdeal;
use crate::order::TermOrder;
use crate::poly::Polynomial;
use crate::ring::BlockRing;

pub const DEFAULT_TRIALS: usize = 3;

/// One invertible upper-triangular matrix per block. `blocks[i][k][j]` is the
/// coefficient of `x[i,k]` in the image of `x[i,j]`, zero for `k > j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorelElement {
    ring: BlockRing,
    blocks: Vec<Vec<Vec<u32>>>,
}

impl BorelElement {
    pub fn identity(ring: &BlockRing) -> Self {
        let blocks = ring
            .block_sizes()
            .iter()
            .map(|&n| (0..n).map(|k| (0..n).map(|j| (k == j) as u32).collect()).collect())
            .collect();
        BorelElement {
            ring: ring.clone(),
            blocks,
        }
    }

    pub fn ring(&self) -> &BlockRing {
        &self.ring
    }

    /// Matrix of block `i` (1-based).
    pub fn block(&self, i: usize) -> &[Vec<u32>] {
        &self.blocks[i - 1]
    }

    /// Images of the variables in flat order.
    pub fn images(&self) -> Vec<Polynomial> {
        let ring = &self.ring;
        let mut out = Vec::with_capacity(ring.num_vars());
        for (b, mat) in self.blocks.iter().enumerate() {
            let n = mat.len();
            for j in 0..n {
                let mut img = Polynomial::zero(ring);
                for (k, row) in mat.iter().enumerate().take(j + 1) {
                    if row[j] != 0 {
                        img = &img + &Polynomial::var(ring, b + 1, k + 1).scale(row[j]);
                    }
                }
                out.push(img);
            }
        }
        out
    }
}

/// Random Borel element: uniform entries above the diagonal, uniform nonzero diagonal.
pub fn random_borel(ring: &BlockRing, seed: u64) -> BorelElement {
    let p = ring.characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = ring
        .block_sizes()
        .iter()
        .map(|&n| {
            let mut mat = vec![vec![0u32; n]; n];
            for (k, row) in mat.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate().skip(k) {
                    *entry = if j == k {
                        rng.random_range(1..p)
                    } else {
                        rng.random_range(0..p)
                    };
                }
            }
            mat
        })
        .collect();
    BorelElement {
        ring: ring.clone(),
        blocks,
    }
}

pub fn apply_change(g: &BorelElement, ideal: &Ideal) -> Ideal {
    ideal.map(ideal.ring(), &g.images())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GinReport {
    /// The common initial ideal, or the first trial's when trials disagree.
    #[serde(serialize_with = "ser_ideal")]
    pub result: MonomialIdeal,
    /// Distinct initial ideals observed, in order of first appearance.
    #[serde(serialize_with = "ser_ideals")]
    pub candidates: Vec<MonomialIdeal>,
    pub trials: usize,
    pub agreement: bool,
    pub borel_fixed: bool,
    pub seeds: Vec<u64>,
    pub order: String,
}

impl GinReport {
    /// Trials agreed and the common result passed the Borel-fixed check.
    pub fn is_conclusive(&self) -> bool {
        self.agreement && self.borel_fixed
    }
}

pub(crate) fn ser_ideal<S: serde::Serializer>(m: &MonomialIdeal, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.generator_strings())
}

pub(crate) fn ser_ideals<S: serde::Serializer>(ms: &[MonomialIdeal], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ms.iter().map(|m| m.generator_strings()))
}

/// `in_o(b_s(I))` for `trials` seeds `seed, seed+1, ...`. Agreement with a result that
/// fails the Borel-fixed check is reported as inconclusive (`borel_fixed = false`),
/// which happens over very small fields.
pub fn gin(ideal: &Ideal, order: &TermOrder, trials: usize, seed: u64) -> Result<GinReport> {
    ideal.require_graded()?;
    let ring = ideal.ring();
    order.check_convention(ring)?;
    let trials = trials.max(1);
    let seeds: Vec<u64> = (0..trials as u64).map(|k| seed.wrapping_add(k)).collect();
    let outcomes: Vec<Result<MonomialIdeal>> = seeds
        .par_iter()
        .map(|&s| apply_change(&random_borel(ring, s), ideal).initial_ideal(order))
        .collect();
    let mut candidates: Vec<MonomialIdeal> = Vec::new();
    let mut all = Vec::with_capacity(trials);
    for o in outcomes {
        let m = o?;
        if !candidates.contains(&m) {
            candidates.push(m.clone());
        }
        all.push(m);
    }
    let agreement = candidates.len() == 1;
    let result = all.swap_remove(0);
    let borel_fixed = agreement && result.is_borel_fixed(ring.characteristic());
    Ok(GinReport {
        result,
        candidates,
        trials,
        agreement,
        borel_fixed,
        seeds,
        order: order.canonical(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderIndependence {
    pub independent: bool,
    /// Some gin computation disagreed across seeds, so no comparison was possible.
    pub inconclusive: bool,
    pub reports: Vec<GinReport>,
    /// Two orders whose gins differ, with the differing ideals.
    pub witness: Option<(String, String)>,
}

pub fn gin_order_independence(
    ideal: &Ideal,
    orders: &[TermOrder],
    trials: usize,
    seed: u64,
) -> Result<OrderIndependence> {
    let reports: Vec<GinReport> = orders
        .iter()
        .map(|o| gin(ideal, o, trials, seed))
        .collect::<Result<_>>()?;
    let inconclusive = reports.iter().any(|r| !r.is_conclusive());
    let mut witness = None;
    if !inconclusive {
        if let Some(r) = reports.iter().find(|r| r.result != reports[0].result) {
            witness = Some((reports[0].order.clone(), r.order.clone()));
        }
    }
    Ok(OrderIndependence {
        independent: !inconclusive && witness.is_none(),
        inconclusive,
        reports,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::TieBreak;

    fn r(blocks: &[usize]) -> BlockRing {
        BlockRing::with_blocks(blocks).unwrap()
    }

    fn x(r: &BlockRing, i: usize, j: usize) -> Polynomial {
        Polynomial::var(r, i, j)
    }

    fn mono(r: &BlockRing, gens: &[&[(usize, usize, u32)]]) -> MonomialIdeal {
        MonomialIdeal::new(r, gens.iter().map(|g| r.monomial_from(g)).collect())
    }

    #[test]
    fn random_borel_shape_and_determinism() {
        let ring = r(&[1, 1]);
        let g = random_borel(&ring, 5);
        assert!(g.block(1)[0][0] != 0 && g.block(2)[0][0] != 0);
        let ring = r(&[3, 2]);
        assert_eq!(random_borel(&ring, 9), random_borel(&ring, 9));
        let g = random_borel(&ring, 9);
        for b in 1..=2 {
            let m = g.block(b);
            for (k, row) in m.iter().enumerate() {
                assert_ne!(row[k], 0);
                assert!(row[..k].iter().all(|&e| e == 0));
            }
        }
        let mut seen: Vec<BorelElement> = Vec::new();
        for s in 0..100 {
            let g = random_borel(&ring, s);
            assert!(!seen.contains(&g));
            seen.push(g);
        }
    }

    #[test]
    fn action_is_triangular_and_graded() {
        let ring = r(&[3, 2]);
        let g = random_borel(&ring, 1);
        let imgs = g.images();
        assert_eq!(imgs[ring.var(1, 1)].len(), 1);
        assert_eq!(imgs[ring.var(2, 1)].len(), 1);
        assert_eq!(imgs[ring.var(1, 3)].len(), 3);
        let f = &(&x(&ring, 1, 2) * &x(&ring, 2, 2)) - &(&x(&ring, 1, 3) * &x(&ring, 2, 1));
        let gf = f.substitute(&imgs, ring.num_vars());
        assert_eq!(gf.multidegree(&ring), f.multidegree(&ring));
        let id = Ideal::new(&ring, vec![f.clone()]).unwrap();
        assert_eq!(apply_change(&BorelElement::identity(&ring), &id).generators(), &[f]);
    }

    #[test]
    fn gin_examples() {
        let ring = r(&[2, 2]);
        let o = TermOrder::degrevlex(&ring);
        let fixed = mono(&ring, &[&[(1, 1, 2)], &[(1, 1, 1), (1, 2, 1)]]);
        let rep = gin(&fixed.to_ideal(), &o, 3, 0).unwrap();
        assert!(rep.agreement && rep.borel_fixed);
        assert_eq!(rep.result, fixed);

        let lin = Ideal::new(&ring, vec![x(&ring, 1, 2)]).unwrap();
        assert_eq!(gin(&lin, &o, 3, 0).unwrap().result, mono(&ring, &[&[(1, 1, 1)]]));

        let det = &(&x(&ring, 1, 1) * &x(&ring, 2, 2)) - &(&x(&ring, 1, 2) * &x(&ring, 2, 1));
        let det = Ideal::new(&ring, vec![det]).unwrap();
        let expected = mono(&ring, &[&[(1, 1, 1), (2, 1, 1)]]);
        let orders = vec![
            TermOrder::degrevlex(&ring),
            TermOrder::lex(&ring),
            TermOrder::weight(&ring, vec![5, 2, 7, 1], TieBreak::DegRevLex).unwrap(),
        ];
        for o in &orders {
            let rep = gin(&det, o, 5, 11).unwrap();
            assert!(rep.is_conclusive());
            assert_eq!(rep.result, expected);
            assert_eq!(rep.seeds, vec![11, 12, 13, 14, 15]);
        }
        let ind = gin_order_independence(&det, &orders, 3, 2).unwrap();
        assert!(ind.independent && ind.witness.is_none());
    }

    #[test]
    fn gin_preserves_hilbert_series_and_is_idempotent() {
        let ring = r(&[2, 3]);
        let f = &(&x(&ring, 1, 2) * &x(&ring, 2, 3)) + &(&x(&ring, 1, 1) * &x(&ring, 2, 2));
        let g = &x(&ring, 1, 2).pow(2) - &(&x(&ring, 1, 1) * &x(&ring, 1, 2));
        let id = Ideal::new(&ring, vec![f, g]).unwrap();
        let o = TermOrder::degrevlex(&ring);
        let rep = gin(&id, &o, 3, 4).unwrap();
        assert!(rep.is_conclusive());
        assert_eq!(rep.result.hilbert_numerator(), id.hilbert_series(&o).unwrap());
        let again = gin(&rep.result.to_ideal(), &o, 3, 99).unwrap();
        assert_eq!(again.result, rep.result);
    }

    #[test]
    fn small_field_is_flagged() {
        // Over F_2 the only nonzero diagonal entry is 1, so trials often agree on a
        // non-generic answer; the report must not claim a conclusive gin then.
        let ring = BlockRing::new(vec![2, 2], 2).unwrap();
        let id = Ideal::new(&ring, vec![&x(&ring, 1, 1) * &x(&ring, 1, 2)]).unwrap();
        let rep = gin(&id, &TermOrder::degrevlex(&ring), 3, 0).unwrap();
        if rep.agreement {
            assert_eq!(rep.borel_fixed, rep.result.is_borel_fixed(2));
        }
    }
}
