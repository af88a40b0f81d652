//! Orthogonality spaces: a finite point set with a symmetric irreflexive
//! relation, the `⊥` and `⊥⊥` operators, the logic of orthoclosed sets,
//! bases and the Dacey property.

use std::collections::HashMap;
use std::fmt::Write;

use crate::bits::{self, Bits, CAPACITY};
use crate::error::{Error, Result};
use crate::lattice::Ortholattice;
use crate::text;

#[derive(Clone, PartialEq, Eq)]
pub struct OrthoSpace {
    labels: Vec<String>,
    adj: Vec<Bits>,
}

impl OrthoSpace {
    /// Builds a space from an orthogonality edge list.
    pub fn new(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<OrthoSpace> {
        if labels.len() > CAPACITY {
            return Err(Error::TooLarge { what: "orthogonality space", size: labels.len(), max: CAPACITY });
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut adj = vec![Bits::EMPTY; labels.len()];
        for &(a, b) in edges {
            if a == b {
                return Err(Error::Reflexive(labels[a].clone()));
            }
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Ok(OrthoSpace { labels, adj })
    }

    /// Builds a space from adjacency rows, checking symmetry and
    /// irreflexivity.
    pub fn from_rows(labels: Vec<String>, adj: Vec<Bits>) -> Result<OrthoSpace> {
        assert_eq!(labels.len(), adj.len());
        let edges: Vec<(usize, usize)> = adj
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().map(move |b| (a, b)))
            .collect();
        let space = OrthoSpace::new(labels, &edges)?;
        if space.adj != adj {
            return Err(Error::NotAnOrder("orthogonality rows are not symmetric".into()));
        }
        Ok(space)
    }

    /// Builds a space without checking symmetry or irreflexivity. Only
    /// meant for constructing deliberately broken fixtures.
    pub fn from_rows_unchecked(labels: Vec<String>, adj: Vec<Bits>) -> OrthoSpace {
        OrthoSpace { labels, adj }
    }

    /// Parses the `points:` / `edges:` text format.
    pub fn parse(input: &str) -> Result<OrthoSpace> {
        let mut labels: Option<Vec<String>> = None;
        let mut raw = Vec::new();
        for s in text::sections(input)? {
            match s.key.as_str() {
                "points" => {
                    if labels.is_some() {
                        return Err(Error::Syntax { line: s.line, message: "repeated `points:` line".into() });
                    }
                    let ls: Vec<String> = s.value.split_whitespace().map(str::to_string).collect();
                    for l in &ls {
                        text::check_label(s.line, l, &['-'])?;
                    }
                    labels = Some(ls);
                }
                "edges" => raw.extend(text::pairs(s.line, &s.value, '-')?),
                other => return Err(Error::Syntax { line: s.line, message: format!("unknown key `{other}`") }),
            }
        }
        let labels = labels.ok_or(Error::Syntax { line: 0, message: "missing `points:` line".into() })?;
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let lookup = |l: &str| index.get(l).copied().ok_or_else(|| Error::UnknownLabel(l.to_string()));
        let edges = raw
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        OrthoSpace::new(labels.clone(), &edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("points:");
        for l in &self.labels {
            out.push(' ');
            out.push_str(l);
        }
        out.push_str("\nedges:");
        let mut first = true;
        for (a, row) in self.adj.iter().enumerate() {
            for b in row.iter().filter(|&b| b > a) {
                let _ = write!(out, "{}{}-{}", if first { " " } else { ", " }, self.labels[a], self.labels[b]);
                first = false;
            }
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

    pub fn points(&self) -> Bits {
        Bits::full(self.len())
    }

    /// The points orthogonal to `x`.
    pub fn row(&self, x: usize) -> Bits {
        self.adj[x]
    }

    pub fn rows(&self) -> &[Bits] {
        &self.adj
    }

    pub fn orthogonal(&self, x: usize, y: usize) -> bool {
        self.adj[x].contains(y)
    }

    /// Whether every point of `xs` is orthogonal to every point of `ys`.
    pub fn sets_orthogonal(&self, xs: Bits, ys: Bits) -> bool {
        xs.iter().all(|x| ys.is_subset(self.adj[x]))
    }

    pub fn is_pairwise_orthogonal(&self, xs: Bits) -> bool {
        xs.iter().all(|x| xs.without(x).is_subset(self.adj[x]))
    }

    /// `X⊥`, the points orthogonal to every member of `xs`.
    pub fn perp(&self, xs: Bits) -> Bits {
        xs.iter().fold(self.points(), |acc, x| acc.and(self.adj[x]))
    }

    /// `X⊥⊥`.
    pub fn closure(&self, xs: Bits) -> Bits {
        self.perp(self.perp(xs))
    }

    pub fn is_orthoclosed(&self, xs: Bits) -> bool {
        self.closure(xs) == xs
    }

    fn require_closed(&self, xs: Bits) -> Result<()> {
        if self.is_orthoclosed(xs) {
            Ok(())
        } else {
            Err(Error::NotOrthoclosed)
        }
    }

    /// Maximal pairwise orthogonal subsets of `within`, in bitset order.
    /// No closedness requirement.
    pub fn maximal_cliques(&self, within: Bits) -> Vec<Bits> {
        let mut out = Vec::new();
        self.bron_kerbosch(Bits::EMPTY, within, Bits::EMPTY, &mut out);
        out.sort_unstable();
        out
    }

    fn bron_kerbosch(&self, r: Bits, mut p: Bits, mut x: Bits, out: &mut Vec<Bits>) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r);
            }
            return;
        }
        let pivot = p
            .or(x)
            .iter()
            .max_by_key(|&u| p.and(self.adj[u]).len())
            .expect("p is nonempty");
        for v in p.minus(self.adj[pivot]) {
            let nv = self.adj[v];
            self.bron_kerbosch(r.with(v), p.and(nv), x.and(nv), out);
            p = p.without(v);
            x = x.with(v);
        }
    }

    /// The bases of an orthoclosed set.
    pub fn bases(&self, xs: Bits) -> Result<Vec<Bits>> {
        self.require_closed(xs)?;
        Ok(self.maximal_cliques(xs))
    }

    /// The first basis `B` (in bitset order) with `B⊥ ⊈ X⊥`, or `None` when
    /// `X` is a Dacey set.
    pub fn dacey_set_witness(&self, xs: Bits) -> Result<Option<Bits>> {
        let xp = self.perp(xs);
        Ok(self.bases(xs)?.into_iter().find(|&b| !self.perp(b).is_subset(xp)))
    }

    pub fn is_dacey_set(&self, xs: Bits) -> Result<bool> {
        Ok(self.dacey_set_witness(xs)?.is_none())
    }

    /// A non-Dacey orthoclosed set together with a basis that does not
    /// close back to it, or `None` when the space is Dacey. Among all such
    /// pairs the one with the least basis (then the least set) in bitset
    /// order is reported.
    pub fn dacey_space_witness(&self, logic: &Logic) -> Option<(Bits, Bits)> {
        logic
            .sets()
            .iter()
            .filter_map(|&x| {
                let xp = self.perp(x);
                self.maximal_cliques(x)
                    .into_iter()
                    .find(|&b| !self.perp(b).is_subset(xp))
                    .map(|b| (b, x))
            })
            .min()
            .map(|(b, x)| (x, b))
    }

    pub fn is_dacey_space(&self) -> bool {
        self.dacey_space_witness(&self.logic()).is_none()
    }

    /// All orthoclosed sets with their ortholattice structure.
    pub fn logic(&self) -> Logic {
        let top = self.points();
        let mut sets = bits::intersection_closure(top, self.adj.iter().copied());
        let empty_closed = self.perp(top).is_empty();
        if empty_closed && sets.first() != Some(&Bits::EMPTY) {
            sets.insert(0, Bits::EMPTY);
        }
        Logic::from_sets(self, sets)
    }

    pub fn set_labels(&self, xs: Bits) -> Vec<String> {
        xs.iter().map(|x| self.labels[x].clone()).collect()
    }
}

impl std::fmt::Debug for OrthoSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.to_text().trim_end())
    }
}

/// The complete ortholattice of orthoclosed subsets of a space.
#[derive(Clone, Debug)]
pub struct Logic {
    sets: Vec<Bits>,
    index: HashMap<Bits, usize>,
    lattice: Ortholattice,
}

impl Logic {
    fn from_sets(space: &OrthoSpace, sets: Vec<Bits>) -> Logic {
        let n = sets.len();
        let index: HashMap<Bits, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let at = |s: Bits| index[&s];
        let perps: Vec<Bits> = sets.iter().map(|&s| space.perp(s)).collect();
        let ocompl: Vec<usize> = perps.iter().map(|&p| at(p)).collect();
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for i in 0..n {
            for j in i..n {
                let m = at(sets[i].and(sets[j])) as u32;
                let jn = at(space.perp(perps[i].and(perps[j]))) as u32;
                meet[i * n + j] = m;
                meet[j * n + i] = m;
                join[i * n + j] = jn;
                join[j * n + i] = jn;
            }
        }
        let bottom = 0;
        let top = n - 1;
        let lattice = Ortholattice::from_tables(n, |x, y| sets[x].is_subset(sets[y]), meet, join, ocompl, bottom, top);
        Logic { sets, index, lattice }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Orthoclosed sets in bitset order; index 0 is the bottom and the last
    /// index is the top.
    pub fn sets(&self) -> &[Bits] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> Bits {
        self.sets[i]
    }

    pub fn index_of(&self, xs: Bits) -> Option<usize> {
        self.index.get(&xs).copied()
    }

    pub fn lattice(&self) -> &Ortholattice {
        &self.lattice
    }

    /// Replaces the orthocomplement table (negative controls).
    pub fn with_ocompl(&self, ocompl: Vec<usize>) -> Logic {
        Logic { lattice: self.lattice.with_ocompl(ocompl), ..self.clone() }
    }

    pub fn meet_sets(&self, x: Bits, y: Bits) -> Option<Bits> {
        let (i, j) = (self.index_of(x)?, self.index_of(y)?);
        Some(self.sets[self.lattice.meet(i, j)])
    }

    pub fn join_sets(&self, x: Bits, y: Bits) -> Option<Bits> {
        let (i, j) = (self.index_of(x)?, self.index_of(y)?);
        Some(self.sets[self.lattice.join(i, j)])
    }

    pub fn to_dot(&self, labels: &[String]) -> String {
        self.lattice.to_dot("logic", labels)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn path() -> OrthoSpace {
        OrthoSpace::parse("points: a b c d\nedges: a-b, b-c, c-d").unwrap()
    }

    fn edge() -> OrthoSpace {
        OrthoSpace::parse("points: a b\nedges: a-b").unwrap()
    }

    fn s(space: &OrthoSpace, ls: &str) -> Bits {
        ls.chars().map(|c| space.labels().iter().position(|l| l == &c.to_string()).unwrap()).collect()
    }

    /// Brute force: every subset `X` with `X = X⊥⊥`.
    fn closed_oracle(space: &OrthoSpace) -> Vec<Bits> {
        (0..1u128 << space.len()).map(Bits).filter(|&x| space.is_orthoclosed(x)).collect()
    }

    #[test]
    fn perp_examples() {
        let p = path();
        assert_eq!(p.perp(s(&p, "b")), s(&p, "ac"));
        assert_eq!(p.perp(Bits::EMPTY), p.points());
        assert_eq!(p.perp(s(&p, "bd")), s(&p, "c"));
    }

    #[test]
    fn closure_examples() {
        let p = path();
        assert_eq!(p.closure(s(&p, "b")), s(&p, "b"));
        assert_eq!(p.closure(p.points()), p.points());
        assert_eq!(p.closure(s(&p, "a")), s(&p, "ac"));
    }

    #[test]
    fn logic_examples() {
        let e = edge();
        let l = e.logic();
        assert_eq!(l.sets(), closed_oracle(&e).as_slice());
        assert_eq!(l.sets(), &[Bits::EMPTY, s(&e, "a"), s(&e, "b"), s(&e, "ab")]);
        assert!(l.lattice().is_boolean());

        let p = path();
        let l = p.logic();
        assert_eq!(l.sets(), closed_oracle(&p).as_slice());
        let mut expected = vec![Bits::EMPTY, s(&p, "b"), s(&p, "c"), s(&p, "ac"), s(&p, "bd"), p.points()];
        expected.sort();
        assert_eq!(l.sets(), expected.as_slice());

        let empty = OrthoSpace::new(vec![], &[]).unwrap();
        let l = empty.logic();
        assert_eq!(l.sets(), &[Bits::EMPTY]);
        assert!(l.lattice().validate().all_pass());
    }

    #[test]
    fn path_logic_is_the_hexagon() {
        let p = path();
        let l = p.logic();
        let lat = l.lattice();
        assert!(lat.validate().all_pass());
        assert!(!lat.is_orthomodular());
        let at = |x: &str| l.index_of(s(&p, x)).unwrap();
        assert_eq!(lat.orthomodular_witness(), Some((at("b"), at("bd"))));
        let hex = lat.find_hexagon().unwrap();
        assert_eq!(hex.elements(), [0, at("b"), at("bd"), at("c"), at("ac"), 5]);
        assert_eq!(l.join_sets(s(&p, "b"), s(&p, "c")), Some(p.points()));
    }

    #[test]
    fn path_logic_boolean_witness() {
        let p = path();
        let l = p.logic();
        let lat = l.lattice();
        let oracle = (0..l.len())
            .flat_map(|a| (0..l.len()).map(move |b| (a, b)))
            .find(|&(a, b)| l.set(a).and(l.set(b)).is_empty() && !l.set(a).is_subset(p.perp(l.set(b))));
        assert_eq!(oracle, Some((l.index_of(s(&p, "ac")).unwrap(), l.index_of(s(&p, "bd")).unwrap())));
        assert_eq!(lat.boolean_witness(), oracle);
    }

    #[test]
    fn bases_examples() {
        let p = path();
        assert_eq!(p.bases(s(&p, "bd")).unwrap(), vec![s(&p, "b"), s(&p, "d")]);
        assert_eq!(p.bases(Bits::EMPTY).unwrap(), vec![Bits::EMPTY]);
        let e = edge();
        assert_eq!(e.bases(e.points()).unwrap(), vec![e.points()]);
        assert_eq!(p.bases(s(&p, "a")), Err(Error::NotOrthoclosed));
    }

    #[test]
    fn dacey_set_examples() {
        let p = path();
        assert_eq!(p.dacey_set_witness(s(&p, "bd")).unwrap(), Some(s(&p, "b")));
        assert_ne!(p.closure(s(&p, "b")), s(&p, "bd"));
        assert!(p.is_dacey_set(Bits::EMPTY).unwrap());
        let e = edge();
        assert!(e.is_dacey_set(e.points()).unwrap());
        assert_eq!(p.is_dacey_set(s(&p, "ab")), Err(Error::NotOrthoclosed));
    }

    #[test]
    fn dacey_space_examples() {
        assert!(edge().is_dacey_space());
        let p = path();
        assert_eq!(p.dacey_space_witness(&p.logic()), Some((s(&p, "bd"), s(&p, "b"))));
        assert!(OrthoSpace::new(vec![], &[]).unwrap().is_dacey_space());
    }

    #[test]
    fn maximal_cliques_match_brute_force() {
        let p = path();
        let all = p.points();
        let oracle: Vec<Bits> = (0..16u128)
            .map(Bits)
            .filter(|&c| p.is_pairwise_orthogonal(c))
            .filter(|&c| all.minus(c).iter().all(|v| !c.is_subset(p.row(v))))
            .collect();
        assert_eq!(p.maximal_cliques(all), oracle);
    }

    #[test]
    fn space_text() {
        let p = path();
        assert_eq!(p.to_text(), "points: a b c d\nedges: a-b, b-c, c-d\n");
        assert_eq!(OrthoSpace::parse(&p.to_text()).unwrap(), p);
        assert_eq!(OrthoSpace::parse("points: a\nedges: a-a"), Err(Error::Reflexive("a".into())));
        assert_eq!(OrthoSpace::parse("points: a\nedges: a-b"), Err(Error::UnknownLabel("b".into())));
    }

    #[test]
    fn rows_must_be_symmetric() {
        let rows = vec![Bits::singleton(1), Bits::EMPTY];
        assert!(OrthoSpace::from_rows(vec!["a".into(), "b".into()], rows).is_err());
    }
}
