//! Synchronous simulation of a radius-3 rule on a ring.
//!
//! [`step`] and [`evolve`] work on one [`Configuration`] at a time and serve as
//! the reference path. [`Circuit`] is the fast path: it packs 64 initial
//! configurations into the bits of one `u64` per cell and evaluates the rule
//! table as a multiplexer tree over whole words, so one pass of the tree
//! advances 64 lattices by one step.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::lattice::Configuration;
use crate::rule::{Rule, NEIGHBORHOOD, RADIUS, TABLE_LEN};

/// Relaxation budget, a little over twice the default lattice width.
pub const DEFAULT_MAX_STEPS: u32 = 320;

/// Lanes per packed word.
pub const LANES: usize = 64;

/// Result of relaxing one initial configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// Reached the all-0 fixed point after `t` steps.
    AllZeros(u32),
    /// Reached the all-1 fixed point after `t` steps.
    AllOnes(u32),
    /// No uniform fixed point within the step budget.
    Undecided,
}

impl Outcome {
    /// The uniform state reached, if any.
    pub fn verdict(self) -> Option<bool> {
        match self {
            Outcome::AllZeros(_) => Some(false),
            Outcome::AllOnes(_) => Some(true),
            Outcome::Undecided => None,
        }
    }

    pub fn steps(self) -> Option<u32> {
        match self {
            Outcome::AllZeros(t) | Outcome::AllOnes(t) => Some(t),
            Outcome::Undecided => None,
        }
    }
}

#[inline]
fn code_at(c: &Configuration, i: usize) -> usize {
    let mut code = 0;
    for offset in -(RADIUS as isize)..=RADIUS as isize {
        code = (code << 1) | c.get_wrapped(i, offset) as usize;
    }
    code
}

/// One synchronous update with periodic boundaries.
pub fn step(rule: Rule, c: &Configuration) -> Configuration {
    let cells = (0..c.width()).map(|i| rule.output(code_at(c, i))).collect();
    Configuration::from_cells_unchecked(cells)
}

fn fixed_uniform(rule: Rule, c: &Configuration) -> Option<bool> {
    match c.is_uniform()? {
        false if !rule.output(0) => Some(false),
        true if rule.output(TABLE_LEN - 1) => Some(true),
        _ => None,
    }
}

/// Iterates `step` until a uniform fixed point or `max_steps` updates.
pub fn evolve(rule: Rule, c: &Configuration, max_steps: u32) -> Outcome {
    let mut state = c.clone();
    for t in 0..=max_steps {
        match fixed_uniform(rule, &state) {
            Some(false) => return Outcome::AllZeros(t),
            Some(true) => return Outcome::AllOnes(t),
            None if t < max_steps => state = step(rule, &state),
            None => {}
        }
    }
    Outcome::Undecided
}

/// Relaxes every configuration; identical to mapping [`evolve`].
pub fn classify_batch(rule: Rule, ics: &[Configuration], max_steps: u32) -> Vec<Outcome> {
    let circuit = Circuit::compile(rule);
    let mut out = Vec::with_capacity(ics.len());
    for chunk in ics.chunks(LANES) {
        let width = chunk[0].width();
        if chunk.iter().any(|c| c.width() != width) {
            out.extend(chunk.iter().map(|c| evolve(rule, c, max_steps)));
            continue;
        }
        let mut words = alloc::vec![0u64; width];
        for (lane, ic) in chunk.iter().enumerate() {
            for (w, &cell) in words.iter_mut().zip(ic.cells()) {
                *w |= (cell as u64) << lane;
            }
        }
        let lanes = if chunk.len() == LANES { u64::MAX } else { (1u64 << chunk.len()) - 1 };
        let packed = circuit.simulator(width).run(&mut words, lanes, max_steps);
        out.extend((0..chunk.len()).map(|lane| packed.outcome(lane)));
    }
    out
}

/// Per-lane results of one packed run.
#[derive(Clone, Debug)]
pub struct PackedOutcome {
    /// Lanes that reached the all-0 fixed point.
    pub zeros: u64,
    /// Lanes that reached the all-1 fixed point.
    pub ones: u64,
    /// Step at which each decided lane settled.
    pub steps: [u32; LANES],
}

impl PackedOutcome {
    pub fn outcome(&self, lane: usize) -> Outcome {
        let bit = 1u64 << lane;
        if self.zeros & bit != 0 {
            Outcome::AllZeros(self.steps[lane])
        } else if self.ones & bit != 0 {
            Outcome::AllOnes(self.steps[lane])
        } else {
            Outcome::Undecided
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Src {
    Zero,
    One,
    /// Neighborhood cell `d`, `d = 0` being the leftmost (code MSB).
    Var(u8),
    NotVar(u8),
    Reg(u16),
}

/// `dst = if sel { hi } else { lo }`, lane-wise.
#[derive(Clone, Copy, Debug)]
struct Mux {
    dst: u16,
    sel: u8,
    lo: Src,
    hi: Src,
}

/// A rule table compiled into a shared multiplexer DAG.
///
/// Sub-tables that are constant, equal to a single input or its negation, or
/// independent of the selecting input are folded away, and identical
/// sub-tables are computed once. A dense random rule needs at most 47
/// multiplexers per cell instead of 127.
#[derive(Clone, Debug)]
pub struct Circuit {
    rule: Rule,
    ops: Vec<Mux>,
    out: Src,
    registers: usize,
    negated: u8,
}

fn low_mask(width: u32) -> u128 {
    if width >= 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

struct Builder {
    ops: Vec<Mux>,
    memo: BTreeMap<(u8, u128), Src>,
    next_reg: u16,
}

impl Builder {
    fn node(&mut self, depth: u8, sub: u128) -> Src {
        let width = 1u32 << (NEIGHBORHOOD as u32 - depth as u32);
        let full = low_mask(width);
        if sub == 0 {
            return Src::Zero;
        }
        if sub == full {
            return Src::One;
        }
        let half = width / 2;
        let hmask = low_mask(half);
        let (lo, hi) = (sub & hmask, sub >> half);
        if lo == hi {
            return self.node(depth + 1, lo);
        }
        if lo == 0 && hi == hmask {
            return Src::Var(depth);
        }
        if lo == hmask && hi == 0 {
            return Src::NotVar(depth);
        }
        if let Some(&src) = self.memo.get(&(depth, sub)) {
            return src;
        }
        let lo = self.node(depth + 1, lo);
        let hi = self.node(depth + 1, hi);
        let dst = self.next_reg;
        self.next_reg += 1;
        self.ops.push(Mux { dst, sel: depth, lo, hi });
        self.memo.insert((depth, sub), Src::Reg(dst));
        Src::Reg(dst)
    }
}

impl Circuit {
    pub fn compile(rule: Rule) -> Self {
        let mut b = Builder { ops: Vec::new(), memo: BTreeMap::new(), next_reg: 0 };
        let out = b.node(0, rule.bits());
        let mut circuit = Circuit { rule, ops: b.ops, out, registers: 0, negated: 0 };
        circuit.allocate_registers(b.next_reg as usize);
        circuit
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    /// Multiplexers evaluated per cell and step.
    pub fn mux_count(&self) -> usize {
        self.ops.len()
    }

    // Linear-scan reuse of registers whose last reader has run.
    fn allocate_registers(&mut self, ssa_regs: usize) {
        let mut last_use = alloc::vec![usize::MAX; ssa_regs];
        let note = |src: Src, at: usize, last_use: &mut Vec<usize>| {
            if let Src::Reg(r) = src {
                last_use[r as usize] = at;
            }
        };
        for (i, op) in self.ops.iter().enumerate() {
            note(op.lo, i, &mut last_use);
            note(op.hi, i, &mut last_use);
        }
        note(self.out, self.ops.len(), &mut last_use);

        let mut map = alloc::vec![0u16; ssa_regs];
        let mut free: Vec<u16> = Vec::new();
        let mut count = 0u16;
        let remap = |src: Src, map: &[u16]| match src {
            Src::Reg(r) => Src::Reg(map[r as usize]),
            other => other,
        };
        for i in 0..self.ops.len() {
            let op = self.ops[i];
            let lo = remap(op.lo, &map);
            let hi = remap(op.hi, &map);
            // Dying operands are released only after the destination is
            // picked: the kernel takes the destination buffer out while reading.
            let dst = free.pop().unwrap_or_else(|| {
                count += 1;
                count - 1
            });
            for src in [op.lo, op.hi] {
                if let Src::Reg(r) = src {
                    if last_use[r as usize] == i && !free.contains(&map[r as usize]) {
                        free.push(map[r as usize]);
                    }
                }
            }
            map[op.dst as usize] = dst;
            self.ops[i] = Mux { dst, sel: op.sel, lo, hi };
        }
        self.out = remap(self.out, &map);
        self.registers = count as usize;

        let mut negated = 0u8;
        for op in &self.ops {
            for src in [op.lo, op.hi] {
                if let Src::NotVar(d) = src {
                    negated |= 1 << d;
                }
            }
        }
        if let Src::NotVar(d) = self.out {
            negated |= 1 << d;
        }
        self.negated = negated;
    }

    /// Scratch space for simulating lattices of `width` cells.
    pub fn simulator(&self, width: usize) -> Simulator<'_> {
        assert!(width % 2 == 1, "lattice width must be odd");
        Simulator {
            circuit: self,
            width,
            padded: alloc::vec![0; width + 2 * RADIUS],
            negated: alloc::vec![Vec::new(); NEIGHBORHOOD],
            registers: alloc::vec![alloc::vec![0; width]; self.registers],
        }
    }
}

/// Reusable buffers for running a [`Circuit`] on packed lattices.
pub struct Simulator<'a> {
    circuit: &'a Circuit,
    width: usize,
    padded: Vec<u64>,
    negated: Vec<Vec<u64>>,
    registers: Vec<Vec<u64>>,
}

enum Operand<'a> {
    Const(bool),
    Words(&'a [u64]),
}

#[inline(always)]
fn mux_into(dst: &mut [u64], sel: &[u64], lo: Operand<'_>, hi: Operand<'_>) {
    match (lo, hi) {
        (Operand::Words(l), Operand::Words(h)) => {
            for (((d, &s), &l), &h) in dst.iter_mut().zip(sel).zip(l).zip(h) {
                *d = l ^ ((l ^ h) & s);
            }
        }
        (Operand::Const(false), Operand::Words(h)) => {
            for ((d, &s), &h) in dst.iter_mut().zip(sel).zip(h) {
                *d = h & s;
            }
        }
        (Operand::Const(true), Operand::Words(h)) => {
            for ((d, &s), &h) in dst.iter_mut().zip(sel).zip(h) {
                *d = h | !s;
            }
        }
        (Operand::Words(l), Operand::Const(false)) => {
            for ((d, &s), &l) in dst.iter_mut().zip(sel).zip(l) {
                *d = l & !s;
            }
        }
        (Operand::Words(l), Operand::Const(true)) => {
            for ((d, &s), &l) in dst.iter_mut().zip(sel).zip(l) {
                *d = l | s;
            }
        }
        (Operand::Const(l), Operand::Const(h)) => {
            for (d, &s) in dst.iter_mut().zip(sel) {
                let (l, h) = (0u64.wrapping_sub(l as u64), 0u64.wrapping_sub(h as u64));
                *d = l ^ ((l ^ h) & s);
            }
        }
    }
}

impl Simulator<'_> {
    /// Relaxes the packed lattices in `cells` (one word per cell, one lattice
    /// per bit) for at most `max_steps` steps. Only bits set in `lanes` are
    /// tracked; the run stops once all of them have settled. `cells` holds the
    /// final state on return.
    pub fn run(&mut self, cells: &mut [u64], lanes: u64, max_steps: u32) -> PackedOutcome {
        assert_eq!(cells.len(), self.width);
        #[cfg(all(feature = "std", target_arch = "x86_64"))]
        {
            if std::is_x86_feature_detected!("avx512f") {
                // SAFETY: the CPU supports AVX-512F, checked just above.
                return unsafe { self.run_avx512(cells, lanes, max_steps) };
            }
            if std::is_x86_feature_detected!("avx2") {
                // SAFETY: the CPU supports AVX2, checked just above.
                return unsafe { self.run_avx2(cells, lanes, max_steps) };
            }
        }
        self.run_generic(cells, lanes, max_steps)
    }

    #[cfg(all(feature = "std", target_arch = "x86_64"))]
    #[target_feature(enable = "avx512f")]
    unsafe fn run_avx512(&mut self, cells: &mut [u64], lanes: u64, max_steps: u32) -> PackedOutcome {
        self.run_generic(cells, lanes, max_steps)
    }

    #[cfg(all(feature = "std", target_arch = "x86_64"))]
    #[target_feature(enable = "avx2")]
    unsafe fn run_avx2(&mut self, cells: &mut [u64], lanes: u64, max_steps: u32) -> PackedOutcome {
        self.run_generic(cells, lanes, max_steps)
    }

    #[inline(always)]
    fn run_generic(&mut self, cells: &mut [u64], lanes: u64, max_steps: u32) -> PackedOutcome {
        let rule = self.circuit.rule;
        let zero_fixed = if rule.output(0) { 0 } else { u64::MAX };
        let one_fixed = if rule.output(TABLE_LEN - 1) { u64::MAX } else { 0 };
        let mut result = PackedOutcome { zeros: 0, ones: 0, steps: [0; LANES] };
        let mut decided = 0u64;
        for t in 0..=max_steps {
            let (any, all) = cells.iter().fold((0u64, u64::MAX), |(o, a), &w| (o | w, a & w));
            let zeros = !any & zero_fixed & lanes & !decided;
            let ones = all & one_fixed & lanes & !decided;
            let fresh = zeros | ones;
            if fresh != 0 {
                result.zeros |= zeros;
                result.ones |= ones;
                let mut bits = fresh;
                while bits != 0 {
                    result.steps[bits.trailing_zeros() as usize] = t;
                    bits &= bits - 1;
                }
                decided |= fresh;
            }
            if decided == lanes || t == max_steps {
                break;
            }
            self.advance(cells);
        }
        result
    }

    #[inline(always)]
    fn advance(&mut self, cells: &mut [u64]) {
        let n = self.width;
        for (k, p) in self.padded.iter_mut().enumerate() {
            *p = cells[(k + 4 * n - RADIUS) % n];
        }
        let circuit = self.circuit;
        for d in 0..NEIGHBORHOOD {
            if circuit.negated & (1 << d) != 0 {
                let src = &self.padded[d..d + n];
                let dst = &mut self.negated[d];
                dst.clear();
                dst.extend(src.iter().map(|w| !w));
            }
        }
        for op in &circuit.ops {
            let mut dst = core::mem::take(&mut self.registers[op.dst as usize]);
            let sel = &self.padded[op.sel as usize..op.sel as usize + n];
            let lo = self.operand(op.lo);
            let hi = self.operand(op.hi);
            mux_into(&mut dst, sel, lo, hi);
            self.registers[op.dst as usize] = dst;
        }
        match self.operand(circuit.out) {
            Operand::Const(v) => cells.fill(0u64.wrapping_sub(v as u64)),
            Operand::Words(w) => cells.copy_from_slice(w),
        }
    }

    #[inline(always)]
    fn operand(&self, src: Src) -> Operand<'_> {
        let n = self.width;
        match src {
            Src::Zero => Operand::Const(false),
            Src::One => Operand::Const(true),
            Src::Var(d) => Operand::Words(&self.padded[d as usize..d as usize + n]),
            Src::NotVar(d) => Operand::Words(&self.negated[d as usize]),
            Src::Reg(r) => Operand::Words(&self.registers[r as usize]),
        }
    }
}
