//! Transition-table construction.
//!
//! Each safety formula is split into its top-level conjuncts, and conjuncts
//! with the same support (current variables read, whether the next input is
//! read, whether the next output is read) are grouped. A group is tabulated
//! over the product of its support only, so a conjunct such as a wall
//! constraint on the next robot cell is evaluated |Y| times instead of
//! |Σ|·|X|·|Y| times. The innermost primed dimension of a group (the next
//! input for environment groups, the next output for system groups) is
//! stored as a bit row, and the valid moves at a state are the AND of the
//! relevant rows.

use std::collections::BTreeMap;

use crate::expr::{Expr, VarDecl};

/// Tables larger than this many bits are not materialised; their groups are
/// evaluated directly on each candidate move instead.
const TABLE_BIT_LIMIT: u64 = 1 << 28;

pub(crate) struct Layout<'a> {
    pub vars: &'a [VarDecl],
    pub num_env: usize,
    /// Per-variable stride in the state index.
    pub strides: Vec<u64>,
    pub num_inputs: u64,
    pub num_outputs: u64,
}

impl Layout<'_> {
    #[inline]
    pub fn value_of(&self, state: u64, var: usize) -> i64 {
        let d = &self.vars[var].domain;
        ((state / self.strides[var]) % d.size()) as i64 + d.lo()
    }

    pub fn decode_into(&self, state: u64, out: &mut [i64]) {
        for (v, slot) in out.iter_mut().enumerate() {
            *slot = self.value_of(state, v);
        }
    }

    fn set_input(&self, x: u64, next: &mut [i64]) {
        for (v, slot) in next.iter_mut().enumerate().take(self.num_env) {
            *slot = self.value_of(x * self.num_outputs, v);
        }
    }

    fn set_output(&self, y: u64, next: &mut [i64]) {
        for (v, slot) in next.iter_mut().enumerate().skip(self.num_env) {
            *slot = self.value_of(y, v);
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum RowDim {
    None,
    Input,
    Output,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    support: Vec<usize>,
    /// The next input is part of the key (system groups only).
    keyed_input: bool,
    row: RowDim,
}

enum Storage {
    /// `words` words per key; a single-bit "row" when the group has no row
    /// dimension.
    Table { words: usize, data: Vec<u64> },
    /// Evaluated on demand.
    Direct,
}

struct Group {
    sig: Signature,
    exprs: Vec<Expr>,
    proj_strides: Vec<u64>,
    storage: Storage,
}

fn signature(e: &Expr, num_env: usize, for_env: bool) -> Signature {
    let mut support = Vec::new();
    let (mut uses_input, mut uses_output) = (false, false);
    e.visit_refs(&mut |r| {
        if r.primed {
            if r.var < num_env {
                uses_input = true;
            } else {
                uses_output = true;
            }
        } else {
            support.push(r.var);
        }
    });
    support.sort_unstable();
    support.dedup();
    let (keyed_input, row) = if for_env {
        (
            false,
            if uses_input {
                RowDim::Input
            } else {
                RowDim::None
            },
        )
    } else {
        (
            uses_input,
            if uses_output {
                RowDim::Output
            } else {
                RowDim::None
            },
        )
    };
    Signature {
        support,
        keyed_input,
        row,
    }
}

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64).max(1)
}

/// Sets the first `bits` bits of `row`, clearing the rest.
pub(crate) fn fill_ones(row: &mut [u64], bits: usize) {
    row.fill(0);
    for w in row.iter_mut().take(bits / 64) {
        *w = u64::MAX;
    }
    if !bits.is_multiple_of(64) {
        row[bits / 64] = (1u64 << (bits % 64)) - 1;
    }
}

/// Indices of set bits, ascending.
pub(crate) fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let tz = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(w * 64 + tz)
        })
    })
}

#[inline]
fn clear_bit(row: &mut [u64], i: usize) {
    row[i / 64] &= !(1 << (i % 64));
}

impl Group {
    fn proj_count(&self, layout: &Layout<'_>) -> u64 {
        self.sig
            .support
            .iter()
            .map(|&v| layout.vars[v].domain.size())
            .product()
    }

    fn key_inputs(&self, layout: &Layout<'_>) -> u64 {
        if self.sig.keyed_input {
            layout.num_inputs
        } else {
            1
        }
    }

    fn row_width(&self, layout: &Layout<'_>) -> u64 {
        match self.sig.row {
            RowDim::None => 1,
            RowDim::Input => layout.num_inputs,
            RowDim::Output => layout.num_outputs,
        }
    }

    #[inline]
    fn projection(&self, layout: &Layout<'_>, state: u64) -> u64 {
        self.sig
            .support
            .iter()
            .zip(&self.proj_strides)
            .map(|(&v, &ps)| {
                let d = &layout.vars[v].domain;
                ((state / layout.strides[v]) % d.size()) * ps
            })
            .sum()
    }

    fn tabulate(&mut self, layout: &Layout<'_>) {
        let proj_count = self.proj_count(layout);
        let key_inputs = self.key_inputs(layout);
        let width = self.row_width(layout);
        let words = words_for(width as usize);
        let keys = proj_count.saturating_mul(key_inputs);
        if keys.saturating_mul(words as u64 * 64) > TABLE_BIT_LIMIT {
            return;
        }
        let nv = layout.vars.len();
        let mut cur: Vec<i64> = layout.vars.iter().map(|v| v.domain.lo()).collect();
        let mut next = cur.clone();
        let mut data = vec![0u64; keys as usize * words];
        for p in 0..proj_count {
            let mut rest = p;
            for &v in self.sig.support.iter().rev() {
                let d = &layout.vars[v].domain;
                cur[v] = (rest % d.size()) as i64 + d.lo();
                rest /= d.size();
            }
            for kx in 0..key_inputs {
                if self.sig.keyed_input {
                    layout.set_input(kx, &mut next);
                }
                let key = (p * key_inputs + kx) as usize;
                let row = &mut data[key * words..(key + 1) * words];
                for r in 0..width {
                    match self.sig.row {
                        RowDim::None => {}
                        RowDim::Input => layout.set_input(r, &mut next),
                        RowDim::Output => layout.set_output(r, &mut next),
                    }
                    if self.exprs.iter().all(|e| e.eval_total(&cur, &next)) {
                        row[r as usize / 64] |= 1 << (r % 64);
                    }
                }
            }
        }
        debug_assert_eq!(next.len(), nv);
        self.storage = Storage::Table { words, data };
    }

    /// ANDs this group's row for (`state`, `input`) into `row`.
    #[inline]
    fn apply(&self, layout: &Layout<'_>, state: u64, input: u64, row: &mut [u64]) {
        let Storage::Table { words, data } = &self.storage else {
            return;
        };
        let key = (self.projection(layout, state) * self.key_inputs(layout)
            + if self.sig.keyed_input { input } else { 0 }) as usize;
        let src = &data[key * words..(key + 1) * words];
        if self.sig.row == RowDim::None {
            if src[0] & 1 == 0 {
                row.fill(0);
            }
        } else {
            for (r, d) in row.iter_mut().zip(src) {
                *r &= d;
            }
        }
    }
}

fn build_groups(formulas: &[Expr], layout: &Layout<'_>, for_env: bool) -> Vec<Group> {
    let mut by_sig: BTreeMap<Signature, Vec<Expr>> = BTreeMap::new();
    for f in formulas {
        for c in f.conjuncts() {
            by_sig
                .entry(signature(c, layout.num_env, for_env))
                .or_default()
                .push(c.clone());
        }
    }
    by_sig
        .into_iter()
        .map(|(sig, exprs)| {
            let mut proj_strides = vec![0u64; sig.support.len()];
            let mut acc = 1u64;
            for (k, &v) in sig.support.iter().enumerate().rev() {
                proj_strides[k] = acc;
                acc *= layout.vars[v].domain.size();
            }
            let mut g = Group {
                sig,
                exprs,
                proj_strides,
                storage: Storage::Direct,
            };
            g.tabulate(layout);
            g
        })
        .collect()
}

/// Enumerates valid inputs and outputs of every state.
pub(crate) struct Enumerator<'a> {
    layout: &'a Layout<'a>,
    env: Vec<Group>,
    sys: Vec<Group>,
    input_words: usize,
    output_words: usize,
    cur: Vec<i64>,
    next: Vec<i64>,
}

impl<'a> Enumerator<'a> {
    pub fn new(layout: &'a Layout<'a>, env_safety: &[Expr], sys_safety: &[Expr]) -> Self {
        let nv = layout.vars.len();
        Enumerator {
            env: build_groups(env_safety, layout, true),
            sys: build_groups(sys_safety, layout, false),
            input_words: words_for(layout.num_inputs as usize),
            output_words: words_for(layout.num_outputs as usize),
            layout,
            cur: vec![0; nv],
            next: vec![0; nv],
        }
    }

    fn check_direct(groups: &[Group], cur: &[i64], next: &[i64], keyed: Option<bool>) -> bool {
        groups
            .iter()
            .filter(|g| matches!(g.storage, Storage::Direct))
            .filter(|g| keyed.is_none_or(|k| g.sig.keyed_input == k))
            .all(|g| g.exprs.iter().all(|e| e.eval_total(cur, next)))
    }

    fn has_direct(groups: &[Group]) -> bool {
        groups.iter().any(|g| matches!(g.storage, Storage::Direct))
    }

    /// Valid inputs at `state`, as a bit row.
    pub fn inputs(&mut self, state: u64, row: &mut Vec<u64>) {
        row.resize(self.input_words, 0);
        fill_ones(row, self.layout.num_inputs as usize);
        for g in &self.env {
            g.apply(self.layout, state, 0, row);
        }
        if Self::has_direct(&self.env) {
            self.layout.decode_into(state, &mut self.cur);
            let candidates: Vec<usize> = ones(row).collect();
            for x in candidates {
                self.layout.set_input(x as u64, &mut self.next);
                if !Self::check_direct(&self.env, &self.cur, &self.next, None) {
                    clear_bit(row, x);
                }
            }
        }
    }

    /// Valid outputs at `state` under `input`, as a bit row.
    pub fn outputs(&mut self, state: u64, input: u64, row: &mut Vec<u64>) {
        row.resize(self.output_words, 0);
        fill_ones(row, self.layout.num_outputs as usize);
        for g in &self.sys {
            g.apply(self.layout, state, input, row);
        }
        if Self::has_direct(&self.sys) {
            self.layout.decode_into(state, &mut self.cur);
            self.layout.set_input(input, &mut self.next);
            let candidates: Vec<usize> = ones(row).collect();
            for y in candidates {
                self.layout.set_output(y as u64, &mut self.next);
                if !Self::check_direct(&self.sys, &self.cur, &self.next, None) {
                    clear_bit(row, y);
                }
            }
        }
    }
}
