//! The two symmetries of the majority task.
//!
//! Exchanging the roles of 0 and 1 (complementing both the neighborhood and
//! the output) and mirroring the lattice both map the task onto itself, so
//! they preserve performance. On a 7-bit code the 0/1 exchange maps code `k`
//! to `127 - k` and the mirror reverses the 7 bits of `k`.

use alloc::vec::Vec;

use crate::rule::{Rule, NEIGHBORHOOD, TABLE_LEN};

/// Reverses the 7 bits of a neighborhood code.
pub const fn mirror_code(k: usize) -> usize {
    (k as u8).reverse_bits() as usize >> (8 - NEIGHBORHOOD)
}

/// 0/1 symmetry: `y[k] = 1 - x[127 - k]`.
pub fn s01(r: Rule) -> Rule {
    // Bit reversal of the 128-bit table sends code k to 127 - k.
    Rule::from_bits(!r.bits().reverse_bits())
}

/// Right/left symmetry: `y[k] = x[mirror(k)]`.
pub fn srl(r: Rule) -> Rule {
    Rule::from_fn(|k| r.output(mirror_code(k)))
}

/// Which symmetry produced a variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symmetry {
    Identity,
    S01,
    Srl,
    Both,
}

impl Symmetry {
    pub const ALL: [Symmetry; 4] = [Symmetry::Identity, Symmetry::S01, Symmetry::Srl, Symmetry::Both];

    pub fn apply(self, r: Rule) -> Rule {
        match self {
            Symmetry::Identity => r,
            Symmetry::S01 => s01(r),
            Symmetry::Srl => srl(r),
            Symmetry::Both => s01(srl(r)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Identity => "id",
            Symmetry::S01 => "S01",
            Symmetry::Srl => "Srl",
            Symmetry::Both => "S01*Srl",
        }
    }
}

/// Distinct members of `{r, s01(r), srl(r), s01(srl(r))}`, each tagged with
/// the first symmetry (in [`Symmetry::ALL`] order) that produces it.
pub fn symmetric_variants(r: Rule) -> Vec<(Symmetry, Rule)> {
    let mut out: Vec<(Symmetry, Rule)> = Vec::with_capacity(4);
    for s in Symmetry::ALL {
        let v = s.apply(r);
        if out.iter().all(|&(_, u)| u != v) {
            out.push((s, v));
        }
    }
    out
}

/// Codes left in place by the mirror.
pub fn mirror_fixed_codes() -> impl Iterator<Item = usize> {
    (0..TABLE_LEN).filter(|&k| mirror_code(k) == k)
}
