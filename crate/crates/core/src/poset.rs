//! Finite posets, their bound operators and the Dedekind-MacNeille completion.
//!
//! Elements are indexed densely `0..n` in declaration order; labels only
//! matter for I/O. The order is stored as principal ideals and filters.

use std::collections::HashMap;
use std::fmt::Write;

use serde::Serialize;

use crate::bits::{self, Bits, CAPACITY};
use crate::dot;
use crate::error::{Error, Result};
use crate::text;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    labels: Vec<String>,
    // down[x] = { y : y <= x }
    down: Vec<Bits>,
    // up[x] = { y : x <= y }
    up: Vec<Bits>,
}

/// A down-closed subset of a poset's carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DownSet(Bits);

impl DownSet {
    pub fn members(self) -> Bits {
        self.0
    }
}

impl Poset {
    /// Builds a poset from a full order relation, checking the partial order
    /// axioms.
    pub fn from_relation<F>(labels: Vec<String>, leq: F) -> Result<Poset>
    where
        F: Fn(usize, usize) -> bool,
    {
        let n = labels.len();
        check_carrier(&labels)?;
        if let Some(x) = (0..n).find(|&x| !leq(x, x)) {
            return Err(Error::NotAnOrder(format!("not reflexive at `{}`", labels[x])));
        }
        let mut down = vec![Bits::EMPTY; n];
        for (y, row) in down.iter_mut().enumerate() {
            for x in 0..n {
                if leq(x, y) {
                    row.insert(x);
                }
            }
        }
        let p = Poset::from_down(labels, down);
        for x in 0..p.len() {
            for y in p.down[x].without(x) {
                if p.leq(x, y) {
                    return Err(Error::Cycle(p.labels[y].clone(), p.labels[x].clone()));
                }
                if !p.down[y].is_subset(p.down[x]) {
                    return Err(Error::NotAnOrder(format!("not transitive below `{}`", p.labels[x])));
                }
            }
        }
        Ok(p)
    }

    /// Builds a poset from a generating relation `(lower, upper)` by taking
    /// the reflexive-transitive closure.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Poset> {
        let n = labels.len();
        check_carrier(&labels)?;
        let mut down: Vec<Bits> = (0..n).map(Bits::singleton).collect();
        for &(a, b) in covers {
            if a == b {
                return Err(Error::Cycle(labels[a].clone(), labels[b].clone()));
            }
            down[b].insert(a);
        }
        // Warshall over bit rows.
        for k in 0..n {
            let dk = down[k];
            for row in down.iter_mut() {
                if row.contains(k) {
                    *row = row.or(dk);
                }
            }
        }
        for x in 0..n {
            for y in down[x].without(x) {
                if down[y].contains(x) {
                    let (a, b) = if y < x { (y, x) } else { (x, y) };
                    return Err(Error::Cycle(labels[a].clone(), labels[b].clone()));
                }
            }
        }
        Ok(Poset::from_down(labels, down))
    }

    pub(crate) fn from_down(labels: Vec<String>, down: Vec<Bits>) -> Poset {
        let n = labels.len();
        let mut up = vec![Bits::EMPTY; n];
        for (y, d) in down.iter().enumerate() {
            for x in d.iter() {
                up[x].insert(y);
            }
        }
        Poset { labels, down, up }
    }

    /// Parses the `elements:` / `covers:` text format.
    pub fn parse(input: &str) -> Result<Poset> {
        let mut labels: Option<Vec<String>> = None;
        let mut raw_covers = Vec::new();
        for s in text::sections(input)? {
            match s.key.as_str() {
                "elements" => {
                    if labels.is_some() {
                        return Err(Error::Syntax { line: s.line, message: "repeated `elements:` line".into() });
                    }
                    let ls: Vec<String> = s.value.split_whitespace().map(str::to_string).collect();
                    for l in &ls {
                        text::check_label(s.line, l, &['<'])?;
                    }
                    labels = Some(ls);
                }
                "covers" => raw_covers.extend(text::pairs(s.line, &s.value, '<')?),
                other => {
                    return Err(Error::Syntax { line: s.line, message: format!("unknown key `{other}`") });
                }
            }
        }
        let labels = labels.ok_or(Error::Syntax { line: 0, message: "missing `elements:` line".into() })?;
        check_carrier(&labels)?;
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let lookup = |l: &str| index.get(l).copied().ok_or_else(|| Error::UnknownLabel(l.to_string()));
        let covers = raw_covers
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Poset::from_covers(labels, &covers)
    }

    /// Serializes to the text format, emitting the cover relation in
    /// declaration order.
    pub fn to_text(&self) -> String {
        let mut out = String::from("elements:");
        for l in &self.labels {
            out.push(' ');
            out.push_str(l);
        }
        out.push_str("\ncovers:");
        let covers = self.covers();
        for (i, (a, b)) in covers.iter().enumerate() {
            let _ = write!(out, "{}{}<{}", if i == 0 { " " } else { ", " }, self.labels[*a], self.labels[*b]);
        }
        out.push('\n');
        out
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Replaces the labels, keeping the order.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<Poset> {
        assert_eq!(labels.len(), self.len());
        check_carrier(&labels)?;
        Ok(Poset { labels, down: self.down.clone(), up: self.up.clone() })
    }

    pub fn carrier(&self) -> Bits {
        Bits::full(self.len())
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// The principal ideal `x↓`.
    pub fn down(&self, x: usize) -> Bits {
        self.down[x]
    }

    /// The principal filter `x↑`.
    pub fn up(&self, x: usize) -> Bits {
        self.up[x]
    }

    /// `X↓`: common lower bounds of `xs`. The empty set yields the carrier.
    pub fn lower_bounds(&self, xs: Bits) -> Bits {
        xs.iter().fold(self.carrier(), |acc, x| acc.and(self.down[x]))
    }

    /// `X↑`: common upper bounds of `xs`. The empty set yields the carrier.
    pub fn upper_bounds(&self, xs: Bits) -> Bits {
        xs.iter().fold(self.carrier(), |acc, x| acc.and(self.up[x]))
    }

    /// The greatest element of `xs`, if there is one.
    pub fn greatest(&self, xs: Bits) -> Option<usize> {
        xs.iter().find(|&g| xs.is_subset(self.down[g]))
    }

    /// The least element of `xs`, if there is one.
    pub fn least(&self, xs: Bits) -> Option<usize> {
        xs.iter().find(|&l| xs.is_subset(self.up[l]))
    }

    pub fn maximal(&self, xs: Bits) -> Bits {
        xs.iter().filter(|&x| self.up[x].and(xs) == Bits::singleton(x)).collect()
    }

    pub fn minimal(&self, xs: Bits) -> Bits {
        xs.iter().filter(|&x| self.down[x].and(xs) == Bits::singleton(x)).collect()
    }

    pub fn bottom(&self) -> Option<usize> {
        self.least(self.carrier())
    }

    pub fn top(&self) -> Option<usize> {
        self.greatest(self.carrier())
    }

    /// `(0, 1)` when the poset is bounded.
    pub fn bounds(&self) -> Option<(usize, usize)> {
        Some((self.bottom()?, self.top()?))
    }

    pub fn is_bounded(&self) -> bool {
        self.bounds().is_some()
    }

    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        self.greatest(self.down[x].and(self.down[y]))
    }

    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        self.least(self.up[x].and(self.up[y]))
    }

    /// The first pair (in index order) lacking a meet or a join.
    pub fn non_lattice_pair(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .find(|&(x, y)| self.meet(x, y).is_none() || self.join(x, y).is_none())
    }

    pub fn is_lattice(&self) -> bool {
        self.non_lattice_pair().is_none()
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|x| self.down[x].or(self.up[x]) == self.carrier())
    }

    pub fn is_down_set(&self, xs: Bits) -> bool {
        xs.iter().all(|x| self.down[x].is_subset(xs))
    }

    pub fn is_up_set(&self, xs: Bits) -> bool {
        xs.iter().all(|x| self.up[x].is_subset(xs))
    }

    pub fn down_set(&self, xs: Bits) -> Option<DownSet> {
        self.is_down_set(xs).then_some(DownSet(xs))
    }

    /// All down-sets, in bitset order.
    pub fn down_sets(&self) -> Vec<Bits> {
        let order = self.linear_extension();
        let mut out = Vec::new();
        // Walk elements top-down in a linear extension: x may be added only
        // when everything above it that was decided is excluded or x is
        // forced by a member above it.
        fn rec(p: &Poset, order: &[usize], i: usize, acc: Bits, out: &mut Vec<Bits>) {
            let Some(&x) = order.get(i) else {
                out.push(acc);
                return;
            };
            let above = p.up[x].without(x);
            if above.intersects(acc) {
                rec(p, order, i + 1, acc.with(x), out);
            } else {
                rec(p, order, i + 1, acc, out);
                rec(p, order, i + 1, acc.with(x), out);
            }
        }
        let rev: Vec<usize> = order.into_iter().rev().collect();
        rec(self, &rev, 0, Bits::EMPTY, &mut out);
        out.sort_unstable();
        out
    }

    /// All up-sets, in bitset order.
    pub fn up_sets(&self) -> Vec<Bits> {
        let carrier = self.carrier();
        let mut out: Vec<Bits> = self.down_sets().into_iter().map(|d| carrier.minus(d)).collect();
        out.sort_unstable();
        out
    }

    /// Elements sorted so that `x < y` implies `x` precedes `y`.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&x| (self.down[x].len(), x));
        idx
    }

    /// The cover relation (transitive reduction), sorted by `(lower, upper)`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in self.up[x].without(x) {
                let between = self.up[x].and(self.down[y]).without(x).without(y);
                if between.is_empty() {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// The order dual, same labels.
    pub fn dual(&self) -> Poset {
        Poset { labels: self.labels.clone(), down: self.up.clone(), up: self.down.clone() }
    }

    /// Relabels the carrier so that old element `perm[i]` becomes new
    /// element `i`.
    pub fn permuted(&self, perm: &[usize]) -> Poset {
        let n = self.len();
        assert_eq!(perm.len(), n);
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let down = perm
            .iter()
            .map(|&p| self.down[p].iter().map(|q| inv[q]).collect())
            .collect();
        Poset::from_down(labels, down)
    }

    /// Adjoins a new bottom and top, labelled `bottom` and `top`.
    pub fn with_bounds(&self, bottom: &str, top: &str) -> Result<Poset> {
        let n = self.len();
        let mut labels = Vec::with_capacity(n + 2);
        labels.push(bottom.to_string());
        labels.extend(self.labels.iter().cloned());
        labels.push(top.to_string());
        Poset::from_relation(labels, |x, y| {
            x == y || x == 0 || y == n + 1 || (x >= 1 && x <= n && y >= 1 && y <= n && self.leq(x - 1, y - 1))
        })
    }

    pub fn set_labels(&self, xs: Bits) -> Vec<String> {
        xs.iter().map(|x| self.labels[x].clone()).collect()
    }

    pub fn to_dot(&self) -> String {
        dot::hasse("poset", &self.labels, &self.covers(), &[])
    }

    /// The Dedekind-MacNeille completion as the closed ideals `I = I↑↓`.
    pub fn macneille(&self) -> CompletionLattice {
        let ideals = bits::intersection_closure(self.carrier(), (0..self.len()).map(|x| self.down[x]));
        let embedding = (0..self.len())
            .map(|x| ideals.binary_search(&self.down[x]).expect("principal ideals are closed"))
            .collect();
        CompletionLattice { ideals, embedding }
    }

    /// A closed ideal with at least two maximal elements, if any.
    pub fn nonlattice_witness(&self) -> Option<DownSet> {
        self.macneille()
            .ideals
            .into_iter()
            .find(|&i| self.maximal(i).len() >= 2)
            .map(DownSet)
    }
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.to_text().trim_end())
    }
}

fn check_carrier(labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::Empty);
    }
    if labels.len() > CAPACITY {
        return Err(Error::TooLarge { what: "poset", size: labels.len(), max: CAPACITY });
    }
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Closed ideals of a poset ordered by inclusion, with the canonical
/// embedding `x ↦ x↓`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionLattice {
    /// Closed ideals in bitset order; the last one is the carrier.
    pub ideals: Vec<Bits>,
    /// `embedding[x]` is the index of `x↓` in `ideals`.
    pub embedding: Vec<usize>,
}

impl CompletionLattice {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn index_of(&self, ideal: Bits) -> Option<usize> {
        self.ideals.binary_search(&ideal).ok()
    }

    pub fn is_embedding_surjective(&self) -> bool {
        let mut hit = vec![false; self.ideals.len()];
        for &e in &self.embedding {
            hit[e] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Join of a family: the closure `(∪ I)↑↓`.
    pub fn join(&self, p: &Poset, family: &[usize]) -> usize {
        let union = family.iter().fold(Bits::EMPTY, |acc, &i| acc.or(self.ideals[i]));
        let closed = p.lower_bounds(p.upper_bounds(union));
        self.index_of(closed).expect("closure of a union is a closed ideal")
    }

    /// Meet of a family: the intersection.
    pub fn meet(&self, p: &Poset, family: &[usize]) -> usize {
        let inter = family.iter().fold(p.carrier(), |acc, &i| acc.and(self.ideals[i]));
        self.index_of(inter).expect("closed ideals are closed under intersection")
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.ideals.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.ideals[a].is_subset(self.ideals[b]) {
                    continue;
                }
                let between = (0..n).any(|c| {
                    c != a
                        && c != b
                        && self.ideals[a].is_subset(self.ideals[c])
                        && self.ideals[c].is_subset(self.ideals[b])
                });
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn to_dot(&self, p: &Poset) -> String {
        let labels: Vec<String> = self
            .ideals
            .iter()
            .map(|&i| format!("{{{}}}", p.set_labels(i).join(",")))
            .collect();
        dot::hasse("completion", &labels, &self.covers(), &[])
    }
}
