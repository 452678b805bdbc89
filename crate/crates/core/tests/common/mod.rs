//! Brute-force oracles and random contexts shared by the integration tests.
//!
//! Everything here works on plain `Vec<Vec<bool>>` tables and `u64` masks so
//! it shares no code with the library under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use galex::{ContextFormat, FormalContext};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const K_DM: &str = include_str!("../../fixtures/k_dm.csv");

pub fn k_dm() -> FormalContext {
    FormalContext::parse(K_DM, ContextFormat::Csv).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A plain incidence table, indexed `[object][attribute]`.
#[derive(Clone, Debug)]
pub struct Table {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    pub cells: Vec<Vec<bool>>,
}

impl Table {
    pub fn random(rng: &mut StdRng, max_objects: usize, max_attributes: usize) -> Self {
        let n = rng.random_range(1..=max_objects);
        let m = rng.random_range(1..=max_attributes);
        let density: f64 = rng.random_range(0.05..0.95);
        Table {
            objects: (0..n).map(|i| format!("o{i:02}")).collect(),
            attributes: (0..m).map(|j| format!("a{j:02}")).collect(),
            cells: (0..n)
                .map(|_| (0..m).map(|_| rng.random_bool(density)).collect())
                .collect(),
        }
    }

    pub fn context(&self) -> FormalContext {
        FormalContext::from_matrix(self.objects.clone(), self.attributes.clone(), &self.cells).unwrap()
    }

    /// Reads a table back out of a context, in the context's own order.
    pub fn of(ctx: &FormalContext) -> Self {
        Table {
            objects: ctx.objects().to_vec(),
            attributes: ctx.attributes().to_vec(),
            cells: (0..ctx.object_count())
                .map(|o| (0..ctx.attribute_count()).map(|a| ctx.has(o, a)).collect())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.objects.len()
    }

    pub fn m(&self) -> usize {
        self.attributes.len()
    }

    pub fn row(&self, o: usize) -> u64 {
        mask(self.cells[o].iter().copied())
    }

    pub fn column(&self, a: usize) -> u64 {
        mask(self.cells.iter().map(|r| r[a]))
    }

    /// Objects owning every attribute of `attrs`.
    pub fn extent(&self, attrs: u64) -> u64 {
        (0..self.n())
            .filter(|&o| self.row(o) & attrs == attrs)
            .fold(0, |m, o| m | 1 << o)
    }

    /// Attributes shared by every object of `objs`.
    pub fn intent(&self, objs: u64) -> u64 {
        (0..self.m())
            .filter(|&a| self.column(a) & objs == objs)
            .fold(0, |m, a| m | 1 << a)
    }

    /// Every concept as an (extent, intent) mask pair, from the closure of
    /// every attribute subset.
    pub fn concepts(&self) -> BTreeSet<(u64, u64)> {
        (0..1u64 << self.m())
            .map(|s| {
                let e = self.extent(s);
                (e, self.intent(e))
            })
            .collect()
    }

    pub fn implications(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for a in 0..self.m() {
            for b in 0..self.m() {
                if a != b && self.column(a) & !self.column(b) == 0 {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    pub fn mutexes(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for a in 0..self.m() {
            for b in a + 1..self.m() {
                if self.column(a) & self.column(b) == 0 {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    pub fn classify(&self, attrs: u64) -> &'static str {
        if (0..self.n()).any(|o| self.row(o) == attrs) {
            "VALID"
        } else if self.extent(attrs) == 0 {
            "INVALID"
        } else if self.intent(self.extent(attrs)) == attrs {
            "MAXIMAL_PARTIAL"
        } else {
            "PARTIAL"
        }
    }
}

pub fn mask(bits: impl Iterator<Item = bool>) -> u64 {
    bits.enumerate().filter(|(_, b)| *b).fold(0, |m, (i, _)| m | 1 << i)
}

pub fn indices(m: u64) -> Vec<usize> {
    (0..64).filter(|i| m >> i & 1 == 1).collect()
}

pub fn set_mask(it: impl Iterator<Item = usize>) -> u64 {
    it.fold(0, |m, i| m | 1 << i)
}

/// Shuffles a CSV table's rows and columns.
pub fn permuted_csv(t: &Table, rng: &mut StdRng) -> String {
    use rand::seq::SliceRandom;
    let mut rows: Vec<usize> = (0..t.n()).collect();
    let mut cols: Vec<usize> = (0..t.m()).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let mut s = String::new();
    for &c in &cols {
        s.push(',');
        s.push_str(&t.attributes[c]);
    }
    s.push('\n');
    for &r in &rows {
        s.push_str(&t.objects[r]);
        for &c in &cols {
            s.push(',');
            if t.cells[r][c] {
                s.push('x');
            }
        }
        s.push('\n');
    }
    s
}

/// n objects, n attributes, object i owns every attribute except i.
pub fn contranominal(n: usize) -> Table {
    Table {
        objects: (0..n).map(|i| format!("o{i:02}")).collect(),
        attributes: (0..n).map(|j| format!("a{j:02}")).collect(),
        cells: (0..n).map(|i| (0..n).map(|j| i != j).collect()).collect(),
    }
}
