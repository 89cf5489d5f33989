//! Buchberger's algorithm over F_p.
//!
//! Monomials are encoded as `[order key..., exponents...]` where the key is the
//! matrix-order image of the exponent vector. The key is linear in the
//! exponents, so products and quotients are elementwise sums and differences,
//! and the term order is the plain lexicographic order of the encoded slice.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field;
use crate::order::TermOrder;
use crate::poly::Polynomial;
use crate::ring::Monomial;

use super::Limits;

type EMono = Box<[i32]>;

#[derive(Debug, Clone)]
pub(crate) struct EPoly {
    /// Strictly decreasing; the leading coefficient is 1 for basis elements.
    terms: Vec<(EMono, u32)>,
}

impl EPoly {
    fn lead(&self) -> &EMono {
        &self.terms[0].0
    }
}

pub(crate) struct Encoder<'a> {
    order: &'a TermOrder,
    nkeys: usize,
    nvars: usize,
    p: u32,
}

impl<'a> Encoder<'a> {
    pub(crate) fn new(order: &'a TermOrder, p: u32) -> Self {
        Encoder {
            order,
            nkeys: order.rows().len(),
            nvars: order.num_vars(),
            p,
        }
    }

    fn key_into(&self, exps: &[i32], out: &mut [i32]) {
        for (slot, row) in out.iter_mut().zip(self.order.rows()) {
            *slot = row.iter().map(|&(v, c)| c * exps[v]).sum();
        }
    }

    fn encode_mono(&self, m: &Monomial) -> EMono {
        let mut v = vec![0i32; self.nkeys + self.nvars];
        for (dst, &e) in v[self.nkeys..].iter_mut().zip(m.exponents()) {
            *dst = e as i32;
        }
        let (key, exps) = v.split_at_mut(self.nkeys);
        self.key_into(exps, key);
        v.into_boxed_slice()
    }

    fn decode_mono(&self, m: &EMono) -> Monomial {
        Monomial::from_exponents(m[self.nkeys..].iter().map(|&e| e as u32).collect())
    }

    pub(crate) fn encode(&self, f: &Polynomial) -> EPoly {
        let mut terms: Vec<(EMono, u32)> =
            f.terms().iter().map(|(m, c)| (self.encode_mono(m), *c)).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        EPoly { terms }
    }

    pub(crate) fn decode(&self, f: &EPoly) -> Polynomial {
        Polynomial::from_terms_raw(
            self.nvars,
            self.p,
            f.terms.iter().map(|(m, c)| (self.decode_mono(m), *c)).collect(),
        )
    }

    fn exps<'m>(&self, m: &'m EMono) -> &'m [i32] {
        &m[self.nkeys..]
    }

    fn degree(&self, m: &EMono) -> i32 {
        self.exps(m).iter().sum()
    }

    fn divides(&self, a: &EMono, b: &EMono) -> bool {
        self.exps(a).iter().zip(self.exps(b)).all(|(x, y)| x <= y)
    }

    fn coprime(&self, a: &EMono, b: &EMono) -> bool {
        self.exps(a).iter().zip(self.exps(b)).all(|(x, y)| *x == 0 || *y == 0)
    }

    fn lcm(&self, a: &EMono, b: &EMono) -> EMono {
        let mut v = vec![0i32; self.nkeys + self.nvars];
        for (k, slot) in v[self.nkeys..].iter_mut().enumerate() {
            *slot = a[self.nkeys + k].max(b[self.nkeys + k]);
        }
        let (key, exps) = v.split_at_mut(self.nkeys);
        self.key_into(exps, key);
        v.into_boxed_slice()
    }

    fn sev(&self, m: &EMono) -> u64 {
        self.exps(m)
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |acc, (i, _)| acc | (1u64 << (i % 64)))
    }
}

fn mono_mul(a: &EMono, b: &EMono) -> EMono {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

fn mono_div(a: &EMono, b: &EMono) -> EMono {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

/// `f[from..] - c * q * g[1..]`, a sorted merge.
fn sub_scaled_tail(
    f: &[(EMono, u32)],
    g: &EPoly,
    q: &EMono,
    c: u32,
    p: u32,
) -> Vec<(EMono, u32)> {
    let gt = &g.terms[1..];
    let mut out = Vec::with_capacity(f.len() + gt.len());
    let (mut i, mut j) = (0, 0);
    let next_g = |j: usize| (mono_mul(&gt[j].0, q), field::neg(field::mul(gt[j].1, c, p), p));
    let mut pending: Option<(EMono, u32)> = if gt.is_empty() { None } else { Some(next_g(0)) };
    while i < f.len() {
        let Some((gm, gc)) = pending.take() else {
            break;
        };
        match f[i].0.cmp(&gm) {
            Ordering::Greater => {
                out.push(f[i].clone());
                i += 1;
                pending = Some((gm, gc));
            }
            Ordering::Less => {
                out.push((gm, gc));
                j += 1;
                pending = (j < gt.len()).then(|| next_g(j));
            }
            Ordering::Equal => {
                let s = field::add(f[i].1, gc, p);
                if s != 0 {
                    out.push((gm, s));
                }
                i += 1;
                j += 1;
                pending = (j < gt.len()).then(|| next_g(j));
            }
        }
    }
    out.extend(f[i..].iter().cloned());
    if let Some(t) = pending {
        out.push(t);
        j += 1;
        while j < gt.len() {
            out.push(next_g(j));
            j += 1;
        }
    }
    out
}

struct Reducers<'b> {
    polys: Vec<&'b EPoly>,
    sevs: Vec<u64>,
}

impl<'b> Reducers<'b> {
    fn new(enc: &Encoder, polys: Vec<&'b EPoly>) -> Self {
        let sevs = polys.iter().map(|g| enc.sev(g.lead())).collect();
        Reducers { polys, sevs }
    }

    fn find(&self, enc: &Encoder, m: &EMono) -> Option<&'b EPoly> {
        let s = enc.sev(m);
        self.polys
            .iter()
            .zip(&self.sevs)
            .find(|(g, &gs)| gs & !s == 0 && enc.divides(g.lead(), m))
            .map(|(g, _)| *g)
    }
}

/// Full reduction of `f` by monic polynomials; returns the remainder (not normalized).
fn reduce(enc: &Encoder, f: EPoly, reducers: &Reducers, limits: &Limits) -> Result<EPoly> {
    let p = enc.p;
    let mut rem: Vec<(EMono, u32)> = Vec::new();
    let mut cur = f.terms;
    let mut start = 0;
    while start < cur.len() {
        let (m, c) = (&cur[start].0, cur[start].1);
        match reducers.find(enc, m) {
            Some(g) => {
                let q = mono_div(m, g.lead());
                cur = sub_scaled_tail(&cur[start + 1..], g, &q, c, p);
                start = 0;
                if cur.len() > limits.max_terms {
                    return Err(Error::ResourceLimit(format!(
                        "polynomial support exceeded {} terms",
                        limits.max_terms
                    )));
                }
            }
            None => {
                rem.push(cur[start].clone());
                start += 1;
            }
        }
    }
    Ok(EPoly { terms: rem })
}

fn make_monic(f: &mut EPoly, p: u32) {
    if let Some(&(_, c)) = f.terms.first() {
        if c != 1 {
            let ci = field::inv(c, p);
            for t in &mut f.terms {
                t.1 = field::mul(t.1, ci, p);
            }
        }
    }
}

fn s_poly(g1: &EPoly, g2: &EPoly, lcm: &EMono, p: u32) -> EPoly {
    let q1 = mono_div(lcm, g1.lead());
    let q2 = mono_div(lcm, g2.lead());
    let a: Vec<(EMono, u32)> = g1.terms[1..].iter().map(|(m, c)| (mono_mul(m, &q1), *c)).collect();
    EPoly {
        terms: sub_scaled_tail(&a, g2, &q2, 1, p),
    }
}

#[derive(Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: EMono,
    degree: i32,
}

struct State<'e> {
    enc: &'e Encoder<'e>,
    polys: Vec<EPoly>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl State<'_> {
    /// Gebauer–Möller installation of the new element `h`.
    fn update(&mut self, h: usize) {
        let enc = self.enc;
        let lh = self.polys[h].lead().clone();
        let mut c: Vec<(usize, EMono, bool)> = (0..h)
            .filter(|&g| self.active[g])
            .map(|g| {
                let lg = self.polys[g].lead();
                (g, enc.lcm(&lh, lg), enc.coprime(&lh, lg))
            })
            .collect();
        let mut d: Vec<(usize, EMono, bool)> = Vec::new();
        while let Some((g1, l1, cop)) = c.pop() {
            let dominated = c.iter().chain(d.iter()).any(|(_, l2, _)| enc.divides(l2, &l1));
            if cop || !dominated {
                d.push((g1, l1, cop));
            }
        }
        let polys = &self.polys;
        self.pairs.retain(|pr| {
            !(enc.divides(&lh, &pr.lcm)
                && enc.lcm(polys[pr.i].lead(), &lh) != pr.lcm
                && enc.lcm(polys[pr.j].lead(), &lh) != pr.lcm)
        });
        for (g, l, cop) in d {
            if !cop {
                let degree = enc.degree(&l);
                self.pairs.push(Pair { i: g, j: h, lcm: l, degree });
            }
        }
        for g in 0..h {
            if self.active[g] && enc.divides(&lh, self.polys[g].lead()) {
                self.active[g] = false;
            }
        }
    }

    fn reducers(&self) -> Reducers<'_> {
        Reducers::new(
            self.enc,
            self.polys
                .iter()
                .zip(&self.active)
                .filter(|(_, &a)| a)
                .map(|(g, _)| g)
                .collect(),
        )
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by decreasing lead term.
pub(crate) fn groebner(enc: &Encoder, gens: &[Polynomial], limits: &Limits) -> Result<Vec<EPoly>> {
    let p = enc.p;
    // Input generators wait in `pending` as (degree, poly) and compete with the
    // S-pairs for selection.
    let mut pending: Vec<(i32, EPoly)> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let e = enc.encode(g);
            let d = e.terms.iter().map(|(m, _)| enc.degree(m)).max().unwrap_or(0);
            (d, e)
        })
        .collect();
    // Processed last-first, so keep the smallest at the end.
    pending.sort_by_key(|p| std::cmp::Reverse(p.0));
    let mut st = State {
        enc,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    loop {
        // Normal strategy: smallest degree, then smallest lcm; generators first on ties.
        let best_pair = (0..st.pairs.len()).min_by(|&a, &b| {
            let (x, y) = (&st.pairs[a], &st.pairs[b]);
            x.degree.cmp(&y.degree).then_with(|| x.lcm.cmp(&y.lcm))
        });
        let gen_degree = pending.last().map(|(d, _)| *d);
        let candidate = match (best_pair, gen_degree) {
            (None, None) => break,
            (Some(k), Some(d)) if st.pairs[k].degree < d => {
                let pr = st.pairs.swap_remove(k);
                s_poly(&st.polys[pr.i], &st.polys[pr.j], &pr.lcm, p)
            }
            (_, Some(_)) => pending.pop().unwrap().1,
            (Some(k), None) => {
                let pr = st.pairs.swap_remove(k);
                s_poly(&st.polys[pr.i], &st.polys[pr.j], &pr.lcm, p)
            }
        };
        let mut h = {
            let reducers = st.reducers();
            reduce(enc, candidate, &reducers, limits)?
        };
        if h.terms.is_empty() {
            continue;
        }
        make_monic(&mut h, p);
        let idx = st.polys.len();
        st.polys.push(h);
        st.active.push(true);
        st.update(idx);
        if st.polys.len() > limits.max_basis {
            return Err(Error::ResourceLimit(format!(
                "Gröbner basis exceeded {} elements",
                limits.max_basis
            )));
        }
    }
    interreduce(enc, st.polys, &st.active, limits)
}

fn interreduce(
    enc: &Encoder,
    polys: Vec<EPoly>,
    active: &[bool],
    limits: &Limits,
) -> Result<Vec<EPoly>> {
    let mut basis: Vec<EPoly> = polys
        .into_iter()
        .zip(active)
        .filter(|(_, &a)| a)
        .map(|(g, _)| g)
        .collect();
    basis.sort_by(|a, b| b.lead().cmp(a.lead()));
    let mut out = Vec::with_capacity(basis.len());
    for k in 0..basis.len() {
        let others = Reducers::new(
            enc,
            basis
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, g)| g)
                .collect(),
        );
        let g = &basis[k];
        let tail = EPoly {
            terms: g.terms[1..].to_vec(),
        };
        let mut r = reduce(enc, tail, &others, limits)?;
        r.terms.insert(0, g.terms[0].clone());
        out.push(r);
    }
    Ok(out)
}

/// Normal form of `f` modulo a Gröbner basis given in encoded form.
pub(crate) fn normal_form(
    enc: &Encoder,
    f: &Polynomial,
    basis: &[EPoly],
    limits: &Limits,
) -> Result<Polynomial> {
    let reducers = Reducers::new(enc, basis.iter().collect());
    let r = reduce(enc, enc.encode(f), &reducers, limits)?;
    Ok(enc.decode(&r))
}

/// Verifies that every S-polynomial of `basis` reduces to zero.
pub(crate) fn s_pairs_reduce_to_zero(enc: &Encoder, basis: &[EPoly], limits: &Limits) -> Result<bool> {
    let reducers = Reducers::new(enc, basis.iter().collect());
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let l = enc.lcm(basis[i].lead(), basis[j].lead());
            let s = s_poly(&basis[i], &basis[j], &l, enc.p);
            if !reduce(enc, s, &reducers, limits)?.terms.is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Leading monomial of an encoded polynomial, decoded.
pub(crate) fn lead_monomial(enc: &Encoder, f: &EPoly) -> Monomial {
    enc.decode_mono(f.lead())
}
