//! Posets and graphs up to isomorphism, by explicit canonical forms.
//!
//! A poset on `n` points is encoded by the strict order restricted to a
//! linear extension: bit `(i, j)` for `i < j` says position `i` lies below
//! position `j`. Pairs are read column by column, `(0,1), (0,2), (1,2),
//! (0,3), ...`, first pair most significant. The canonical code is the
//! least such code over all linear extensions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::space::OrthoSpace;

pub const DEFAULT_CAP: usize = 7;
/// Codes live in a `u64`; 11 points need 55 bits.
pub const MAX_CAP: usize = 11;
pub const GRAPH_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    All,
    Bounded,
    Lattice,
    Chain,
}

impl FromStr for Filter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Filter, String> {
        match s {
            "all" => Ok(Filter::All),
            "bounded" => Ok(Filter::Bounded),
            "lattice" => Ok(Filter::Lattice),
            "chain" => Ok(Filter::Chain),
            _ => Err(format!("unknown filter `{s}`")),
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Filter::All => "all",
            Filter::Bounded => "bounded",
            Filter::Lattice => "lattice",
            Filter::Chain => "chain",
        })
    }
}

/// One representative per isomorphism class, sorted by canonical code.
#[derive(Clone, Debug)]
pub struct PosetCatalogue {
    pub n: usize,
    pub filter: Filter,
    pub codes: Vec<u64>,
    pub posets: Vec<Poset>,
}

impl PosetCatalogue {
    fn from_codes(n: usize, filter: Filter, codes: impl IntoIterator<Item = u64>) -> PosetCatalogue {
        let codes: Vec<u64> = codes.into_iter().collect();
        let posets = codes.iter().map(|&c| decode(n, c)).collect();
        PosetCatalogue { n, filter, codes, posets }
    }

    pub fn len(&self) -> usize {
        self.posets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Poset> {
        self.posets.iter()
    }
}

fn pair_count(n: usize) -> u32 {
    (n * n.saturating_sub(1) / 2) as u32
}

/// Mask of the first `used` bits of a `total`-bit code.
fn prefix_mask(total: u32, used: u32) -> u64 {
    if used == 0 {
        0
    } else {
        ((1u64 << used) - 1) << (total - used)
    }
}

struct Search<'a> {
    p: &'a Poset,
    total: u32,
    best: u64,
    best_perm: Vec<usize>,
    perm: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, placed: Bits, code: u64) {
        let j = self.perm.len();
        if j == self.p.len() {
            if code < self.best {
                self.best = code;
                self.best_perm = self.perm.clone();
            }
            return;
        }
        let used = pair_count(j + 1);
        let mask = prefix_mask(self.total, used);
        for x in self.p.carrier().minus(placed) {
            if !self.p.down(x).without(x).is_subset(placed) {
                continue;
            }
            let mut c = code;
            let base = pair_count(j);
            for (i, &y) in self.perm.iter().enumerate() {
                if self.p.leq(y, x) {
                    c |= 1 << (self.total - 1 - (base + i as u32));
                }
            }
            if c & mask > self.best & mask {
                continue;
            }
            self.perm.push(x);
            self.run(placed.with(x), c);
            self.perm.pop();
        }
    }
}

/// The canonical code and a relabelling achieving it: new element `i` is
/// old element `perm[i]`.
pub fn canonical(p: &Poset) -> (u64, Vec<usize>) {
    assert!(p.len() <= MAX_CAP, "canonical codes support at most {MAX_CAP} points");
    let mut s = Search { p, total: pair_count(p.len()), best: u64::MAX, best_perm: Vec::new(), perm: Vec::new() };
    s.run(Bits::EMPTY, 0);
    (s.best, s.best_perm)
}

pub fn canonical_code(p: &Poset) -> u64 {
    canonical(p).0
}

/// The catalogue representative isomorphic to `p`.
pub fn canonical_form(p: &Poset) -> Poset {
    let (code, _) = canonical(p);
    decode(p.len(), code)
}

/// Rebuilds the poset encoded by `code`, with standard labels.
pub fn decode(n: usize, code: u64) -> Poset {
    let total = pair_count(n);
    let bit = |i: usize, j: usize| code >> (total - 1 - (pair_count(j) + i as u32)) & 1 == 1;
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let p = Poset::from_relation(labels, |x, y| x == y || (x < y && bit(x, y))).expect("codes encode partial orders");
    let labels = standard_labels(&p);
    p.relabeled(labels).expect("standard labels are distinct")
}

/// `0` for a least element, `1` for a greatest one, letters for the rest.
pub fn standard_labels(p: &Poset) -> Vec<String> {
    let (bottom, top) = (p.bottom(), p.top());
    let mut letters = (b'a'..=b'z').map(|c| (c as char).to_string());
    (0..p.len())
        .map(|x| {
            if bottom == Some(x) {
                "0".to_string()
            } else if top == Some(x) {
                "1".to_string()
            } else {
                letters.next().expect("fewer than 27 points")
            }
        })
        .collect()
}

fn check_size(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let cap = cap.min(MAX_CAP);
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(())
}

/// Canonical codes of all posets on `n` points: every poset arises from
/// one on `n - 1` points by adding a maximal element above a down-set.
fn all_codes(n: usize) -> BTreeSet<u64> {
    let mut codes = BTreeSet::from([0u64]);
    for k in 2..=n {
        codes = codes
            .par_iter()
            .flat_map_iter(|&c| {
                let q = decode(k - 1, c);
                let labels: Vec<String> = (0..k).map(|i| i.to_string()).collect();
                q.down_sets()
                    .into_iter()
                    .map(|d| {
                        let p = Poset::from_relation(labels.clone(), |x, y| {
                            if y == k - 1 {
                                x == y || d.contains(x)
                            } else {
                                x != k - 1 && q.leq(x, y)
                            }
                        })
                        .expect("adding a maximal element keeps a partial order");
                        canonical_code(&p)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    codes
}

pub fn enumerate_posets(n: usize, filter: Filter) -> Result<PosetCatalogue> {
    enumerate_posets_capped(n, filter, DEFAULT_CAP)
}

pub fn enumerate_posets_capped(n: usize, filter: Filter, cap: usize) -> Result<PosetCatalogue> {
    check_size(n, cap)?;
    let codes: BTreeSet<u64> = match filter {
        Filter::All => all_codes(n),
        Filter::Bounded if n <= 2 => all_codes(n).into_iter().filter(|&c| decode(n, c).is_bounded()).collect(),
        Filter::Bounded => all_codes(n - 2)
            .into_iter()
            .map(|c| {
                let inner = decode(n - 2, c);
                let p = inner.with_bounds("⊥", "⊤").expect("fresh bound labels");
                canonical_code(&p)
            })
            .collect(),
        Filter::Lattice => {
            return Ok(retain(enumerate_posets_capped(n, Filter::Bounded, cap)?, Filter::Lattice, Poset::is_lattice))
        }
        Filter::Chain => return Ok(retain(enumerate_posets_capped(n, Filter::All, cap)?, Filter::Chain, Poset::is_chain)),
    };
    Ok(PosetCatalogue::from_codes(n, filter, codes))
}

fn retain(cat: PosetCatalogue, filter: Filter, keep: fn(&Poset) -> bool) -> PosetCatalogue {
    let n = cat.n;
    let (codes, posets) = cat.codes.into_iter().zip(cat.posets).filter(|(_, p)| keep(p)).unzip();
    PosetCatalogue { n, filter, codes, posets }
}

/// All bounded posets with at most `n_max` points, smallest first.
pub fn bounded_catalogue(n_max: usize, cap: usize) -> Result<Vec<Poset>> {
    check_size(n_max, cap)?;
    let mut out = Vec::new();
    for k in 1..=n_max {
        out.extend(enumerate_posets_capped(k, Filter::Bounded, cap)?.posets);
    }
    Ok(out)
}

fn graph_code(m: usize, adj: &[Bits], perm: &[usize]) -> u64 {
    let total = pair_count(m);
    let mut code = 0;
    for j in 1..m {
        for i in 0..j {
            if adj[perm[i]].contains(perm[j]) {
                code |= 1 << (total - 1 - (pair_count(j) + i as u32));
            }
        }
    }
    code
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for x in 0..m {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(m, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(m, &mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Orthogonality spaces on `m` points, one per graph isomorphism class.
pub fn enumerate_graphs(m: usize) -> Result<Vec<OrthoSpace>> {
    if m > GRAPH_CAP {
        return Err(Error::CapExceeded { n: m, cap: GRAPH_CAP });
    }
    let total = pair_count(m);
    let perms = permutations(m);
    let pairs: Vec<(usize, usize)> = (1..m).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let codes: BTreeSet<u64> = (0..1u64 << total)
        .into_par_iter()
        .map(|mask| {
            let mut adj = vec![Bits::EMPTY; m];
            for (t, &(i, j)) in pairs.iter().enumerate() {
                if mask >> (total - 1 - t as u32) & 1 == 1 {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
            perms.iter().map(|p| graph_code(m, &adj, p)).min().expect("at least one permutation")
        })
        .collect();
    let labels: Vec<String> = (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Ok(codes
        .into_iter()
        .map(|code| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|&(t, _)| code >> (total - 1 - t as u32) & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            OrthoSpace::new(labels.clone(), &edges).expect("simple graph")
        })
        .collect())
}
