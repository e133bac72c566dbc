//! Template subspaces and the Olympus derivation.
//!
//! A template fixes some table positions to `0` or `1` and leaves the rest
//! (`*`) free. The Olympus template fixes the positions on which symmetric
//! variants of the six best known rules all agree, choosing the variants so
//! that this agreement is as large as possible.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::error::Error;
use crate::rng::{self, tag};
use crate::rule::{Rule, TABLE_LEN};
use crate::symmetry::{symmetric_variants, Symmetry};

/// The published 77-dimensional Olympus template, code 0 first.
pub const CANONICAL_OLYMPUS: &str = "000*0*0* 0****1** 0***00** **0**1** 000***** 0*0**1** ******** 0*0**1*1 \
                                     0*0***** *****1** 111111** **0**111 ******** 0**1*1*1 11111**1 0*01*111";

/// Number of rules combined by [`derive_olympus`].
pub const DERIVATION_RULES: usize = 6;

/// 128 ternary symbols: fixed `0`/`1` positions and free `*` positions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OlympusTemplate {
    fixed_mask: u128,
    fixed_values: u128,
    free: Vec<u8>,
}

impl OlympusTemplate {
    pub fn from_parts(fixed_mask: u128, fixed_values: u128) -> Self {
        let free = (0..TABLE_LEN as u8).filter(|&k| fixed_mask >> k & 1 == 0).collect();
        OlympusTemplate { fixed_mask, fixed_values: fixed_values & fixed_mask, free }
    }

    /// Every position free: the whole rule space.
    pub fn full_space() -> Self {
        Self::from_parts(0, 0)
    }

    pub fn canonical() -> Self {
        CANONICAL_OLYMPUS.parse().expect("canonical template is well formed")
    }

    pub fn fixed_count(&self) -> usize {
        self.fixed_mask.count_ones() as usize
    }

    /// Free positions in increasing order; genotype bit `i` lives at `free_positions()[i]`.
    pub fn free_positions(&self) -> &[u8] {
        &self.free
    }

    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    pub fn fixed_mask(&self) -> u128 {
        self.fixed_mask
    }

    pub fn fixed_values(&self) -> u128 {
        self.fixed_values
    }

    /// `Some(bit)` at a fixed position, `None` at a free one.
    pub fn symbol(&self, position: usize) -> Option<bool> {
        (self.fixed_mask >> position & 1 == 1).then(|| self.fixed_values >> position & 1 == 1)
    }

    pub fn contains(&self, r: Rule) -> bool {
        (r.bits() ^ self.fixed_values) & self.fixed_mask == 0
    }

    /// Rule equal to the template at fixed positions and to `g` elsewhere.
    pub fn embed(&self, g: &Genotype) -> Result<Rule, Error> {
        if g.len() != self.dimension() {
            return Err(Error::GenotypeLength { expected: self.dimension(), found: g.len() });
        }
        let bits = self
            .free
            .iter()
            .enumerate()
            .fold(self.fixed_values, |acc, (i, &k)| acc | ((g.bits >> i & 1) << k));
        Ok(Rule::from_bits(bits))
    }

    /// Free-position bits of `r`; fails at the first fixed position where `r` disagrees.
    pub fn project(&self, r: Rule) -> Result<Genotype, Error> {
        let clash = (r.bits() ^ self.fixed_values) & self.fixed_mask;
        if clash != 0 {
            return Err(Error::NotInSubspace { position: clash.trailing_zeros() as usize });
        }
        let bits = self
            .free
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &k)| acc | ((r.bits() >> k & 1) << i));
        Ok(Genotype { bits, len: self.dimension() })
    }

    pub fn random_genotype<R: Rng + ?Sized>(&self, rng: &mut R) -> Genotype {
        Genotype::from_bits(rng.random::<u128>(), self.dimension())
    }

    /// Uniform member of the subspace.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Rule {
        let g = self.random_genotype(rng);
        self.embed(&g).expect("genotype sized to template")
    }

    /// Positions where the two templates carry different symbols.
    pub fn diff(&self, other: &OlympusTemplate) -> Vec<usize> {
        (0..TABLE_LEN).filter(|&k| self.symbol(k) != other.symbol(k)).collect()
    }

    /// The 128 symbols, code 0 first, in groups of `group` separated by
    /// spaces (`group = 0` for one unbroken string).
    pub fn to_grouped_string(&self, group: usize) -> String {
        let mut s = String::with_capacity(TABLE_LEN + TABLE_LEN / 4);
        for k in 0..TABLE_LEN {
            if group > 0 && k > 0 && k % group == 0 {
                s.push(' ');
            }
            s.push(match self.symbol(k) {
                Some(true) => '1',
                Some(false) => '0',
                None => '*',
            });
        }
        s
    }
}

/// Uniform member of `t`, keyed by `seed`.
pub fn sample_olympus(t: &OlympusTemplate, seed: u64) -> Rule {
    t.sample(&mut rng::rng(seed, tag::OLYMPUS, 0))
}

impl FromStr for OlympusTemplate {
    type Err = Error;

    /// Whitespace between symbols is ignored.
    fn from_str(s: &str) -> Result<Self, Error> {
        let (mut mask, mut values, mut count) = (0u128, 0u128, 0usize);
        for (position, c) in s.chars().filter(|c| !c.is_whitespace()).enumerate() {
            if position < TABLE_LEN {
                match c {
                    '0' => mask |= 1 << position,
                    '1' => {
                        mask |= 1 << position;
                        values |= 1 << position;
                    }
                    '*' => {}
                    _ => return Err(Error::TemplateChar { position, found: c }),
                }
            }
            count += 1;
        }
        if count != TABLE_LEN {
            return Err(Error::TemplateLength { found: count });
        }
        Ok(Self::from_parts(mask, values))
    }
}

impl fmt::Display for OlympusTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_grouped_string(0))
    }
}

impl fmt::Debug for OlympusTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OlympusTemplate({})", self.to_grouped_string(8))
    }
}

/// Coordinates of a rule inside a template: one bit per free position.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Genotype {
    bits: u128,
    len: usize,
}

impl Genotype {
    /// Keeps the low `len` bits of `bits`.
    pub fn from_bits(bits: u128, len: usize) -> Self {
        assert!(len <= TABLE_LEN);
        let mask = if len == TABLE_LEN { u128::MAX } else { (1u128 << len) - 1 };
        Genotype { bits: bits & mask, len }
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_bits(0, len)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.bits ^= 1 << i;
    }
}

/// Result of searching all symmetric-variant combinations.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub template: OlympusTemplate,
    /// Positions on which the chosen variants all agree.
    pub joint_bits: usize,
    /// Chosen variant of each input rule, in input order.
    pub chosen: Vec<(Symmetry, Rule)>,
    /// Every combination reaching `joint_bits`, in enumeration order.
    pub optimal: Vec<Vec<Symmetry>>,
    /// Number of combinations examined.
    pub combinations: usize,
}

/// Positions where all rules agree, and the agreed values.
fn agreement(rules: &[Rule]) -> (u128, u128) {
    let all = rules.iter().fold(u128::MAX, |a, r| a & r.bits());
    let any = rules.iter().fold(0, |a, r| a | r.bits());
    (all | !any, all)
}

/// Exhaustively picks one symmetric variant per rule to maximize the number
/// of positions on which all six agree.
///
/// Combinations are enumerated with the first rule most significant and each
/// rule's variants in identity, S01, Srl, S01*Srl order; the first maximum
/// wins ties.
pub fn derive_olympus(rules: &[Rule]) -> Result<Derivation, Error> {
    if rules.len() != DERIVATION_RULES {
        return Err(Error::RuleCount { expected: DERIVATION_RULES, found: rules.len() });
    }
    let variants: Vec<_> = rules.iter().map(|&r| symmetric_variants(r)).collect();
    let combinations: usize = variants.iter().map(Vec::len).product();

    let mut best = 0usize;
    let mut optimal: Vec<Vec<usize>> = Vec::new();
    let mut index = alloc::vec![0usize; rules.len()];
    let mut picked = alloc::vec![Rule::ZERO; rules.len()];
    for _ in 0..combinations {
        for (slot, (v, &i)) in picked.iter_mut().zip(variants.iter().zip(&index)) {
            *slot = v[i].1;
        }
        let joint = agreement(&picked).0.count_ones() as usize;
        if joint > best {
            best = joint;
            optimal.clear();
        }
        if joint == best {
            optimal.push(index.clone());
        }
        // Odometer, last rule fastest.
        for pos in (0..index.len()).rev() {
            index[pos] += 1;
            if index[pos] < variants[pos].len() {
                break;
            }
            index[pos] = 0;
        }
    }

    let first = &optimal[0];
    let chosen: Vec<(Symmetry, Rule)> =
        variants.iter().zip(first).map(|(v, &i)| v[i]).collect();
    let picked: Vec<Rule> = chosen.iter().map(|&(_, r)| r).collect();
    let (mask, values) = agreement(&picked);
    let optimal = optimal
        .iter()
        .map(|idx| variants.iter().zip(idx).map(|(v, &i)| v[i].0).collect())
        .collect();
    Ok(Derivation {
        template: OlympusTemplate::from_parts(mask, values),
        joint_bits: best,
        chosen,
        optimal,
        combinations,
    })
}
