//! Binary ring configurations.

use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;

/// Lattice width used throughout the literature on this task.
pub const DEFAULT_WIDTH: usize = 149;

/// A configuration of an odd number of binary cells on a ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    cells: Vec<bool>,
}

impl Configuration {
    pub fn new(cells: Vec<bool>) -> Result<Self, Error> {
        if cells.len().is_multiple_of(2) {
            return Err(Error::EvenWidth(cells.len()));
        }
        Ok(Configuration { cells })
    }

    pub fn zeros(width: usize) -> Result<Self, Error> {
        Self::new(alloc::vec![false; width])
    }

    pub fn ones(width: usize) -> Result<Self, Error> {
        Self::new(alloc::vec![true; width])
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bit_str(s: &str) -> Result<Self, Error> {
        let mut cells = Vec::with_capacity(s.len());
        for (position, c) in s.chars().enumerate() {
            match c {
                '0' => cells.push(false),
                '1' => cells.push(true),
                _ => return Err(Error::RuleChar { position, found: c }),
            }
        }
        Self::new(cells)
    }

    pub fn width(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn get(&self, i: usize) -> bool {
        self.cells[i]
    }

    /// Cell at a signed offset from `i`, wrapping around the ring.
    #[inline]
    pub fn get_wrapped(&self, i: usize, offset: isize) -> bool {
        let n = self.cells.len() as isize;
        self.cells[(i as isize + offset).rem_euclid(n) as usize]
    }

    pub fn ones_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Fraction of cells in state 1.
    pub fn density(&self) -> f64 {
        self.ones_count() as f64 / self.cells.len() as f64
    }

    /// True when ones outnumber zeros (never tied on an odd ring).
    pub fn majority(&self) -> bool {
        2 * self.ones_count() > self.cells.len()
    }

    pub fn is_uniform(&self) -> Option<bool> {
        let first = *self.cells.first()?;
        self.cells.iter().all(|&c| c == first).then_some(first)
    }

    pub fn complement(&self) -> Self {
        Configuration { cells: self.cells.iter().map(|c| !c).collect() }
    }

    /// Mirror image, cell `i` moves to `width - 1 - i`.
    pub fn reverse(&self) -> Self {
        Configuration { cells: self.cells.iter().rev().copied().collect() }
    }

    /// Rotation by `j` cells: the result at `i` is the input at `i - j`.
    pub fn rotate(&self, j: usize) -> Self {
        let mut cells = self.cells.clone();
        let n = cells.len();
        cells.rotate_right(j % n);
        Configuration { cells }
    }

    pub(crate) fn from_cells_unchecked(cells: Vec<bool>) -> Self {
        Configuration { cells }
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.cells {
            f.write_str(if c { "1" } else { "0" })?;
        }
        Ok(())
    }
}
