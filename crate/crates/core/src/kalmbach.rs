//! The Kalmbach construction on a bounded poset, its isomorphism with the
//! logic of the quotient space, and the MacNeille embedding `I ↦ τ(I)`.

use std::collections::HashMap;

use serde::Serialize;

use crate::bits::Bits;
use crate::dot;
use crate::error::{Error, Result};
use crate::lattice::Ortholattice;
use crate::poset::{CompletionLattice, Poset};
use crate::quotient::QuotientSpace;
use crate::space::Logic;

/// A chain with an even number of elements, stored bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EvenChain {
    pub members: Vec<usize>,
}

impl EvenChain {
    /// Sorts `members` along the order and checks it is an even chain.
    pub fn new(p: &Poset, members: Bits) -> Option<EvenChain> {
        let mut v: Vec<usize> = members.iter().collect();
        v.sort_by_key(|&x| p.down(x).len());
        let ok = v.len().is_multiple_of(2) && v.windows(2).all(|w| p.lt(w[0], w[1]));
        ok.then_some(EvenChain { members: v })
    }

    pub fn bits(&self) -> Bits {
        self.members.iter().copied().collect()
    }

    /// Consecutive pairs `(x₁,x₂), (x₃,x₄), ...`.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.members.chunks_exact(2).map(|c| (c[0], c[1]))
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn label(&self, p: &Poset) -> String {
        if self.members.is_empty() {
            return "∅".to_string();
        }
        let inner: Vec<&str> = self.members.iter().map(|&x| p.label(x)).collect();
        format!("[{}]", inner.join("<"))
    }
}

#[derive(Clone, Debug)]
pub struct KalmbachLattice {
    poset: Poset,
    chains: Vec<EvenChain>,
    index: HashMap<Bits, usize>,
    leq: Vec<bool>,
    ocompl: Vec<usize>,
    bottom: usize,
    top: usize,
}

/// Every even chain of `p`, in bitset order of the member sets.
pub fn even_chains(p: &Poset) -> Vec<EvenChain> {
    fn extend(p: &Poset, chain: &mut Vec<usize>, out: &mut Vec<EvenChain>) {
        if chain.len().is_multiple_of(2) {
            out.push(EvenChain { members: chain.clone() });
        }
        let last = chain.last().copied();
        for y in 0..p.len() {
            if last.is_none_or(|x| p.lt(x, y)) {
                chain.push(y);
                extend(p, chain, out);
                chain.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(p, &mut Vec::new(), &mut out);
    out.sort_by_key(|c| c.bits());
    out
}

impl KalmbachLattice {
    pub fn new(p: &Poset) -> Result<KalmbachLattice> {
        let (zero, one) = p.bounds().ok_or(Error::Unbounded)?;
        let chains = even_chains(p);
        let index: HashMap<Bits, usize> = chains.iter().enumerate().map(|(i, c)| (c.bits(), i)).collect();
        let n = chains.len();
        let mut leq = vec![false; n * n];
        for (i, c) in chains.iter().enumerate() {
            for (j, d) in chains.iter().enumerate() {
                leq[i * n + j] = c
                    .blocks()
                    .all(|(x1, x2)| d.blocks().any(|(y1, y2)| p.leq(y1, x1) && p.leq(x2, y2)));
            }
        }
        let bottom = index[&Bits::EMPTY];
        let ocompl: Vec<usize>;
        let top;
        if zero == one {
            // one-element poset: {0,1} is not an even chain
            ocompl = vec![bottom];
            top = bottom;
        } else {
            let flip = Bits::from_indices([zero, one]);
            ocompl = chains
                .iter()
                .map(|c| index.get(&c.bits().xor(flip)).copied().expect("C △ {0,1} is an even chain"))
                .collect();
            top = index[&flip];
        }
        Ok(KalmbachLattice { poset: p.clone(), chains, index, leq, ocompl, bottom, top })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn chains(&self) -> &[EvenChain] {
        &self.chains
    }

    pub fn chain(&self, i: usize) -> &EvenChain {
        &self.chains[i]
    }

    pub fn index_of(&self, members: Bits) -> Option<usize> {
        self.index.get(&members).copied()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    pub fn ocompl(&self, i: usize) -> usize {
        self.ocompl[i]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// The table form. Fails when the block order is not a lattice, which
    /// can happen for bounded non-lattices.
    pub fn ortholattice(&self) -> Result<Ortholattice> {
        Ortholattice::from_order(self.len(), |x, y| self.leq(x, y), self.ocompl.clone())
    }

    pub fn labels(&self) -> Vec<String> {
        self.chains.iter().map(|c| c.label(&self.poset)).collect()
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut covers = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y
                    && self.leq(x, y)
                    && !(0..n).any(|z| z != x && z != y && self.leq(x, z) && self.leq(z, y))
                {
                    covers.push((x, y));
                }
            }
        }
        covers
    }

    pub fn to_dot(&self) -> String {
        let n = self.len();
        let covers = self.covers();
        let dashed: Vec<(usize, usize)> =
            (0..n).filter(|&x| x < self.ocompl(x)).map(|x| (x, self.ocompl(x))).collect();
        dot::hasse("kalmbach", &self.labels(), &covers, &dashed)
    }
}

/// `f(C) = [x₁<x₂]↓ ∪ … ∪ [x₂ₙ₋₁<x₂ₙ]↓`.
pub fn chain_to_set(qs: &QuotientSpace, chain: &EvenChain) -> Bits {
    chain.blocks().fold(Bits::EMPTY, |acc, (lo, hi)| {
        let q = qs.index_of(lo, hi).expect("blocks of a chain are proper quotients");
        acc.or(qs.principal_down(q))
    })
}

/// `g(X)`: the endpoints of the maximal elements of a chain-type set.
pub fn set_to_chain(qs: &QuotientSpace, xs: Bits) -> Result<EvenChain> {
    if !qs.is_chain_type(xs)? {
        return Err(Error::NotChainType);
    }
    let p = qs.poset();
    let ends = qs.maximal(xs).iter().fold(Bits::EMPTY, |acc, q| {
        let q = qs.quotient(q);
        acc.with(q.lower).with(q.upper)
    });
    EvenChain::new(p, ends).ok_or(Error::NotChainType)
}

/// One row of the `K(P) ≅ L(Q(P))` correspondence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoRow {
    pub chain: String,
    pub set: Vec<String>,
}

/// Checks that `f` and `g` are mutually inverse bijections preserving order
/// and orthocomplement. Returns the correspondence table, or a description
/// of the first failure.
pub fn verify_isomorphism(k: &KalmbachLattice, qs: &QuotientSpace, logic: &Logic) -> Result<Vec<IsoRow>, String> {
    let p = qs.poset();
    if k.len() != logic.len() {
        return Err(format!("|K(P)| = {} but the logic has {} elements", k.len(), logic.len()));
    }
    let mut f = Vec::with_capacity(k.len());
    for c in k.chains() {
        let x = chain_to_set(qs, c);
        let i = logic
            .index_of(x)
            .ok_or_else(|| format!("f({}) is not orthoclosed", c.label(p)))?;
        f.push(i);
    }
    for (ci, c) in k.chains().iter().enumerate() {
        let back = set_to_chain(qs, logic.set(f[ci])).map_err(|e| format!("g(f({})): {e}", c.label(p)))?;
        if &back != c {
            return Err(format!("g(f({})) = {}", c.label(p), back.label(p)));
        }
    }
    for (xi, &x) in logic.sets().iter().enumerate() {
        let c = set_to_chain(qs, x).map_err(|e| format!("g({:?}): {e}", qs.set_labels(x)))?;
        let ci = k
            .index_of(c.bits())
            .ok_or_else(|| format!("g({:?}) is not in K(P)", qs.set_labels(x)))?;
        if f[ci] != xi {
            return Err(format!("f(g({:?})) differs", qs.set_labels(x)));
        }
    }
    let lat = logic.lattice();
    for i in 0..k.len() {
        if f[k.ocompl(i)] != lat.ocompl(f[i]) {
            return Err(format!("f does not preserve the complement of {}", k.chain(i).label(p)));
        }
        for j in 0..k.len() {
            if k.leq(i, j) != lat.leq(f[i], f[j]) {
                return Err(format!(
                    "order mismatch between {} and {}",
                    k.chain(i).label(p),
                    k.chain(j).label(p)
                ));
            }
        }
    }
    Ok(k
        .chains()
        .iter()
        .zip(&f)
        .map(|(c, &i)| IsoRow { chain: c.label(p), set: qs.set_labels(logic.set(i)) })
        .collect())
}

/// `τ` on the closed ideals of a bounded poset: `image[i]` is the logic
/// index of `τ(ideals[i])`.
pub fn macneille_embedding(qs: &QuotientSpace, completion: &CompletionLattice, logic: &Logic) -> Result<Vec<usize>> {
    if !qs.poset().is_bounded() {
        return Err(Error::Unbounded);
    }
    completion
        .ideals
        .iter()
        .map(|&i| logic.index_of(qs.tau(i)).ok_or(Error::NotOrthoclosed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(labels: &str) -> Poset {
        let ls: Vec<String> = labels.split_whitespace().map(String::from).collect();
        let covers: Vec<_> = (1..ls.len()).map(|i| (i - 1, i)).collect();
        Poset::from_covers(ls, &covers).unwrap()
    }

    fn diamond() -> Poset {
        Poset::parse("elements: 0 a b 1\ncovers: 0<a, 0<b, a<1, b<1").unwrap()
    }

    fn n_poset() -> Poset {
        Poset::parse("elements: 0 a b c d 1\ncovers: 0<a, 0<b, a<c, a<d, b<c, b<d, c<1, d<1").unwrap()
    }

    /// Brute force: subsets of the carrier that are even chains.
    fn even_chain_oracle(p: &Poset) -> Vec<Bits> {
        (0..1u128 << p.len())
            .map(Bits)
            .filter(|s| s.len() % 2 == 0 && s.iter().all(|x| s.iter().all(|y| p.comparable(x, y))))
            .collect()
    }

    fn set_of(p: &Poset, ls: &[&str]) -> Bits {
        ls.iter().map(|l| p.index_of(l).unwrap()).collect()
    }

    #[test]
    fn two_chain() {
        let k = KalmbachLattice::new(&chain("0 1")).unwrap();
        assert_eq!(k.len(), 2);
        let l = k.ortholattice().unwrap();
        assert!(l.is_boolean() && l.validate().all_pass());
    }

    #[test]
    fn three_chain() {
        let p = chain("0 m 1");
        let k = KalmbachLattice::new(&p).unwrap();
        assert_eq!(k.len(), even_chain_oracle(&p).len());
        assert_eq!(k.len(), 4);
        let i = k.index_of(set_of(&p, &["0", "m"])).unwrap();
        assert_eq!(k.chain(k.ocompl(i)).bits(), set_of(&p, &["m", "1"]));
        let l = k.ortholattice().unwrap();
        assert!(l.validate().all_pass() && l.is_boolean());
    }

    #[test]
    fn diamond_kalmbach() {
        let p = diamond();
        let k = KalmbachLattice::new(&p).unwrap();
        let oracle = even_chain_oracle(&p);
        assert_eq!(oracle.len(), 6);
        assert_eq!(k.chains().iter().map(|c| c.bits()).collect::<Vec<_>>(), oracle);
        let l = k.ortholattice().unwrap();
        assert!(l.validate().all_pass());
        assert!(l.is_orthomodular());
        assert!(!l.is_boolean());
    }

    #[test]
    fn singleton_kalmbach() {
        let p = Poset::parse("elements: 0").unwrap();
        let k = KalmbachLattice::new(&p).unwrap();
        assert_eq!(k.len(), 1);
        assert!(k.ortholattice().unwrap().validate().all_pass());
    }

    #[test]
    fn unbounded_rejected() {
        let p = Poset::parse("elements: a b").unwrap();
        assert!(matches!(KalmbachLattice::new(&p), Err(Error::Unbounded)));
    }

    #[test]
    fn f_and_g() {
        let p = chain("0 m 1");
        let qs = QuotientSpace::new(&p).unwrap();
        let empty = EvenChain { members: vec![] };
        assert_eq!(chain_to_set(&qs, &empty), Bits::EMPTY);
        let whole = EvenChain::new(&p, set_of(&p, &["0", "1"])).unwrap();
        assert_eq!(chain_to_set(&qs, &whole), qs.all());
        let low = EvenChain::new(&p, set_of(&p, &["0", "m"])).unwrap();
        let lo_q = qs.index_of(0, 1).unwrap();
        assert_eq!(chain_to_set(&qs, &low), Bits::singleton(lo_q));
        assert_eq!(set_to_chain(&qs, Bits::EMPTY).unwrap(), empty);
        assert_eq!(set_to_chain(&qs, qs.all()).unwrap(), whole);
        assert_eq!(set_to_chain(&qs, Bits::singleton(lo_q)).unwrap(), low);
    }

    #[test]
    fn isomorphism_on_lattices() {
        for p in [chain("0 m 1"), diamond(), chain("0 x y 1")] {
            let qs = QuotientSpace::new(&p).unwrap();
            let logic = qs.space().logic();
            let k = KalmbachLattice::new(&p).unwrap();
            let table = verify_isomorphism(&k, &qs, &logic).unwrap();
            assert_eq!(table.len(), logic.len());
        }
    }

    #[test]
    fn g_rejects_non_chain_type() {
        let p = n_poset();
        let qs = QuotientSpace::new(&p).unwrap();
        let tau = qs.tau(set_of(&p, &["0", "a", "b"]));
        assert!(matches!(set_to_chain(&qs, tau), Err(Error::NotChainType)));
    }

    #[test]
    fn embedding_examples() {
        let p = n_poset();
        let qs = QuotientSpace::new(&p).unwrap();
        let logic = qs.space().logic();
        let comp = p.macneille();
        let image = macneille_embedding(&qs, &comp, &logic).unwrap();
        let carrier = comp.index_of(p.carrier()).unwrap();
        assert_eq!(logic.set(image[carrier]), qs.all());
        let zero = comp.index_of(set_of(&p, &["0"])).unwrap();
        assert_eq!(logic.set(image[zero]), Bits::EMPTY);
        let ab = comp.index_of(set_of(&p, &["0", "a", "b"])).unwrap();
        assert_eq!(qs.set_labels(logic.set(image[ab])), vec!["0<a", "0<b"]);
    }

    #[test]
    fn embedding_not_onto_for_three_chain() {
        let p = chain("0 m 1");
        let qs = QuotientSpace::new(&p).unwrap();
        let logic = qs.space().logic();
        let comp = p.macneille();
        // brute-force counts of both sides
        let ideals = (0..8u128).map(Bits).filter(|&i| p.lower_bounds(p.upper_bounds(i)) == i).count();
        let closed = (0..8u128).map(Bits).filter(|&x| qs.space().is_orthoclosed(x)).count();
        assert_eq!((comp.len(), logic.len()), (ideals, closed));
        assert_eq!((ideals, closed), (3, 4));
        let image = macneille_embedding(&qs, &comp, &logic).unwrap();
        let mut sorted = image.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 3);
    }
}
