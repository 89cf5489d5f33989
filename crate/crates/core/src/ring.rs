//! The ℤ^v-graded polynomial ring: blocks of variables, monomials and multidegrees.
//!
//! Variable `x[i,j]` (block `i`, position `j`, both 1-based) has degree `e_i`.
//! Internally variables are addressed by a flat 0-based index, block 1 first.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BlockRing {
    block_sizes: Vec<usize>,
    characteristic: u32,
    #[serde(skip)]
    offsets: Vec<usize>,
}

impl BlockRing {
    pub fn new(block_sizes: Vec<usize>, characteristic: u32) -> Result<Self> {
        if block_sizes.is_empty() {
            return Err(Error::InvalidRing("need at least one block".into()));
        }
        if let Some(i) = block_sizes.iter().position(|&n| n == 0) {
            return Err(Error::InvalidRing(format!("block {} is empty", i + 1)));
        }
        if characteristic == 0 {
            return Err(Error::InvalidRing(
                "characteristic 0 is not supported; use a large prime".into(),
            ));
        }
        if characteristic > field::MAX_CHARACTERISTIC || !field::is_prime(characteristic) {
            return Err(Error::InvalidRing(format!(
                "characteristic {characteristic} is not a supported prime"
            )));
        }
        let mut offsets = Vec::with_capacity(block_sizes.len() + 1);
        let mut acc = 0;
        for &n in &block_sizes {
            offsets.push(acc);
            acc += n;
        }
        offsets.push(acc);
        Ok(BlockRing {
            block_sizes,
            characteristic,
            offsets,
        })
    }

    /// Ring with the default characteristic 32003.
    pub fn with_blocks(block_sizes: &[usize]) -> Result<Self> {
        Self::new(block_sizes.to_vec(), field::DEFAULT_CHARACTERISTIC)
    }

    /// Number of grading blocks `v`.
    pub fn num_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn block_size(&self, block: usize) -> usize {
        self.block_sizes[block - 1]
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn num_vars(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Flat index of `x[block, pos]` (1-based arguments).
    pub fn var(&self, block: usize, pos: usize) -> usize {
        assert!(
            block >= 1 && block <= self.num_blocks() && pos >= 1 && pos <= self.block_size(block),
            "x[{block},{pos}] is not a variable of {self}"
        );
        self.offsets[block - 1] + pos - 1
    }

    pub fn checked_var(&self, block: usize, pos: usize) -> Result<usize> {
        if block == 0 || block > self.num_blocks() {
            return Err(Error::structural(format!("block out of range: {block}")));
        }
        if pos == 0 || pos > self.block_size(block) {
            return Err(Error::structural(format!(
                "position out of range: x[{block},{pos}]"
            )));
        }
        Ok(self.var(block, pos))
    }

    /// `(block, pos)`, 1-based, of a flat variable index.
    pub fn label(&self, var: usize) -> (usize, usize) {
        let block = self.offsets.partition_point(|&o| o <= var);
        (block, var - self.offsets[block - 1] + 1)
    }

    /// Flat index range of the variables of a block (1-based block).
    pub fn block_range(&self, block: usize) -> std::ops::Range<usize> {
        self.offsets[block - 1]..self.offsets[block]
    }

    /// Same blocks, different characteristic.
    pub fn with_characteristic(&self, p: u32) -> Result<Self> {
        Self::new(self.block_sizes.clone(), p)
    }

    pub fn var_name(&self, var: usize) -> String {
        let (i, j) = self.label(var);
        format!("x[{i},{j}]")
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.num_vars())
    }

    pub fn monomial(&self, exps: Vec<u32>) -> Result<Monomial> {
        if exps.len() != self.num_vars() {
            return Err(Error::structural(format!(
                "monomial has {} exponents, ring has {} variables",
                exps.len(),
                self.num_vars()
            )));
        }
        Ok(Monomial(exps))
    }

    /// Monomial from `(block, pos, exponent)` triples.
    pub fn monomial_from(&self, factors: &[(usize, usize, u32)]) -> Monomial {
        let mut m = self.one();
        for &(i, j, e) in factors {
            m.0[self.var(i, j)] += e;
        }
        m
    }

    pub fn multidegree_of(&self, m: &Monomial) -> Result<Multidegree> {
        if m.num_vars() != self.num_vars() {
            return Err(Error::structural(format!(
                "monomial has {} exponents, ring has {} variables",
                m.num_vars(),
                self.num_vars()
            )));
        }
        Ok(self.degree_unchecked(m))
    }

    pub(crate) fn degree_unchecked(&self, m: &Monomial) -> Multidegree {
        Multidegree(
            (1..=self.num_blocks())
                .map(|b| m.0[self.block_range(b)].iter().sum())
                .collect(),
        )
    }

    /// Canonical basis vector `e_i` (1-based).
    pub fn unit_degree(&self, block: usize) -> Multidegree {
        let mut d = vec![0; self.num_blocks()];
        d[block - 1] = 1;
        Multidegree(d)
    }

    /// `Σ e_i`.
    pub fn all_ones(&self) -> Multidegree {
        Multidegree(vec![1; self.num_blocks()])
    }
}

impl fmt::Display for BlockRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.block_sizes.iter().map(|n| n.to_string()).collect();
        write!(
            f,
            "ring v={} blocks=[{}] char={}",
            self.num_blocks(),
            blocks.join(","),
            self.characteristic
        )
    }
}

/// Dense exponent vector, one entry per ring variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub(crate) Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn variable(nvars: usize, var: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[var] = 1;
        m
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    /// Variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub(crate) fn exps_mut(&mut self) -> &mut Vec<u32> {
        &mut self.0
    }

    pub fn format(&self, ring: &BlockRing) -> String {
        let factors: Vec<String> = self
            .support()
            .map(|v| match self.0[v] {
                1 => ring.var_name(v),
                e => format!("{}^{e}", ring.var_name(v)),
            })
            .collect();
        if factors.is_empty() {
            "1".into()
        } else {
            factors.join("*")
        }
    }
}

/// Element of ℤ^v (non-negative here: only degrees of monomials and K-polynomial terms occur).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multidegree(pub Vec<u32>);

impl Multidegree {
    pub fn zero(v: usize) -> Self {
        Multidegree(vec![0; v])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Coordinatewise `≤`.
    pub fn leq(&self, other: &Multidegree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r22() -> BlockRing {
        BlockRing::with_blocks(&[2, 2]).unwrap()
    }

    #[test]
    fn multidegree_examples() {
        let r = r22();
        let m = r.monomial_from(&[(1, 1, 1), (2, 2, 1)]);
        assert_eq!(r.multidegree_of(&m).unwrap(), Multidegree(vec![1, 1]));
        let m = r.monomial_from(&[(1, 2, 2)]);
        assert_eq!(r.multidegree_of(&m).unwrap(), Multidegree(vec![2, 0]));
        assert_eq!(r.multidegree_of(&r.one()).unwrap(), Multidegree(vec![0, 0]));
    }

    #[test]
    fn multidegree_rejects_wrong_length() {
        let r = r22();
        let m = Monomial::one(3);
        assert!(matches!(r.multidegree_of(&m), Err(Error::Structural(_))));
    }

    #[test]
    fn ring_validation() {
        assert!(BlockRing::new(vec![], 7).is_err());
        assert!(BlockRing::new(vec![2, 0], 7).is_err());
        assert!(BlockRing::new(vec![2], 0).is_err());
        assert!(BlockRing::new(vec![2], 8).is_err());
        assert!(BlockRing::new(vec![2, 3], 2).is_ok());
    }

    #[test]
    fn labels_round_trip() {
        let r = BlockRing::with_blocks(&[2, 3, 1]).unwrap();
        for v in 0..r.num_vars() {
            let (i, j) = r.label(v);
            assert_eq!(r.var(i, j), v);
        }
        assert_eq!(r.label(5), (3, 1));
        assert!(r.checked_var(4, 1).is_err());
        assert!(r.checked_var(1, 3).is_err());
    }
}
