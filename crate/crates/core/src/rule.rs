//! Radius-3 rule tables.
//!
//! A rule maps each of the 128 neighborhood codes to an output bit. For cell
//! `i` the code reads `s[i-3] s[i-2] s[i-1] s[i] s[i+1] s[i+2] s[i+3]` with
//! `s[i-3]` as the most significant bit.

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;

/// Radius of the neighborhood.
pub const RADIUS: usize = 3;
/// Cells read by one update.
pub const NEIGHBORHOOD: usize = 2 * RADIUS + 1;
/// Entries of a rule table.
pub const TABLE_LEN: usize = 1 << NEIGHBORHOOD;

/// A 128-entry rule table. Bit `k` of the inner word is the output for code `k`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rule(u128);

impl Rule {
    pub const ZERO: Rule = Rule(0);
    pub const ONE: Rule = Rule(u128::MAX);

    pub const fn from_bits(bits: u128) -> Self {
        Rule(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn output(self, code: usize) -> bool {
        debug_assert!(code < TABLE_LEN);
        (self.0 >> code) & 1 == 1
    }

    pub fn with_output(self, code: usize, value: bool) -> Self {
        let mask = 1u128 << code;
        if value {
            Rule(self.0 | mask)
        } else {
            Rule(self.0 & !mask)
        }
    }

    pub fn flip(self, code: usize) -> Self {
        Rule(self.0 ^ (1u128 << code))
    }

    pub fn hamming(self, other: Rule) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    pub fn count_ones(self) -> u32 {
        self.0.count_ones()
    }

    /// Builds a rule from a per-code output function.
    pub fn from_fn(mut f: impl FnMut(usize) -> bool) -> Self {
        (0..TABLE_LEN).fold(Rule::ZERO, |r, k| r.with_output(k, f(k)))
    }

    /// Parses 32 hexadecimal characters. The most significant bit of the
    /// first character is the output for code 0.
    pub fn from_hex(s: &str) -> Result<Self, Error> {
        let n = s.chars().count();
        if n != TABLE_LEN / 4 {
            return Err(Error::RuleLength { expected: TABLE_LEN / 4, found: n });
        }
        let mut msb_first = 0u128;
        for (position, c) in s.chars().enumerate() {
            let nibble = c.to_digit(16).ok_or(Error::RuleChar { position, found: c })?;
            msb_first = (msb_first << 4) | nibble as u128;
        }
        Ok(Rule(msb_first.reverse_bits()))
    }

    /// Uppercase 32-character hexadecimal form.
    pub fn to_hex(self) -> String {
        alloc::format!("{:032X}", self.0.reverse_bits())
    }

    /// Parses 128 characters of `0`/`1`, code 0 first.
    pub fn from_bit_string(s: &str) -> Result<Self, Error> {
        let n = s.chars().count();
        if n != TABLE_LEN {
            return Err(Error::RuleLength { expected: TABLE_LEN, found: n });
        }
        let mut r = Rule::ZERO;
        for (position, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => r = r.with_output(position, true),
                _ => return Err(Error::RuleChar { position, found: c }),
            }
        }
        Ok(r)
    }

    pub fn to_bit_string(self) -> String {
        (0..TABLE_LEN).map(|k| if self.output(k) { '1' } else { '0' }).collect()
    }
}

impl FromStr for Rule {
    type Err = Error;

    /// Accepts either the 32-character hex form or the 128-character bit form.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.len() == TABLE_LEN && s.chars().all(|c| c == '0' || c == '1') {
            Rule::from_bit_string(s)
        } else {
            Rule::from_hex(s)
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rule({})", self.to_hex())
    }
}

/// The six best rules known for the task, with their reported standard
/// performance at 10^4 initial configurations.
pub mod known {
    pub const GKL: &str = "005F005F005F005F005FFF5F005FFF5F";
    pub const DAS: &str = "009F038F001FBF1F002FFB5F001FFF1F";
    pub const DAVIS: &str = "070007FF0F000FFF0F0007FF0F310FFF";
    pub const ABK: &str = "050055050500550555FF55FF55FF55FF";
    pub const COE1: &str = "011430D7110F395705B4FF17F13DF957";
    pub const COE2: &str = "1451305C0050CE5F1711FF5F0F53CF5F";

    /// `(name, hex, reported performance)` in the order GKL, Das, Davis, ABK, Coe1, Coe2.
    pub const BEST_KNOWN: [(&str, &str, f64); 6] = [
        ("GKL", GKL, 0.815),
        ("Das", DAS, 0.823),
        ("Davis", DAVIS, 0.818),
        ("ABK", ABK, 0.824),
        ("Coe1", COE1, 0.851),
        ("Coe2", COE2, 0.860),
    ];
}
