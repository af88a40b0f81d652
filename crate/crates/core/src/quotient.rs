//! The orthogonality space of proper quotients `[a<b]` of a poset.
//!
//! Quotients are ordered by interval inclusion and two quotients are
//! orthogonal when one sits entirely above the other. [`Analysis`] runs
//! every decision procedure on one poset independently; the theorem
//! equivalences are compared only afterwards.

use std::collections::HashMap;

use serde::Serialize;

use crate::bits::{Bits, CAPACITY};
use crate::error::{Error, Result};
use crate::lattice::Hexagon;
use crate::poset::Poset;
use crate::space::{Logic, OrthoSpace};

/// A proper quotient `[lower < upper]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Quotient {
    pub lower: usize,
    pub upper: usize,
}

#[derive(Clone, Debug)]
pub struct QuotientSpace {
    poset: Poset,
    quotients: Vec<Quotient>,
    index: HashMap<(usize, usize), usize>,
    // below[q] = { r : r <= q }
    below: Vec<Bits>,
    space: OrthoSpace,
}

impl QuotientSpace {
    pub fn new(poset: &Poset) -> Result<QuotientSpace> {
        let n = poset.len();
        let quotients: Vec<Quotient> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| poset.lt(a, b))
            .map(|(lower, upper)| Quotient { lower, upper })
            .collect();
        if quotients.len() > CAPACITY {
            return Err(Error::TooLarge { what: "quotient space", size: quotients.len(), max: CAPACITY });
        }
        let index = quotients.iter().enumerate().map(|(i, q)| ((q.lower, q.upper), i)).collect();
        let m = quotients.len();
        let mut below = vec![Bits::EMPTY; m];
        let mut adj = vec![Bits::EMPTY; m];
        for (i, p) in quotients.iter().enumerate() {
            for (j, q) in quotients.iter().enumerate() {
                if poset.leq(p.lower, q.lower) && poset.leq(q.upper, p.upper) {
                    below[i].insert(j);
                }
                if poset.leq(p.upper, q.lower) || poset.leq(q.upper, p.lower) {
                    adj[i].insert(j);
                }
            }
        }
        let labels = quotients
            .iter()
            .map(|q| format!("{}<{}", poset.label(q.lower), poset.label(q.upper)))
            .collect();
        let space = OrthoSpace::from_rows(labels, adj)?;
        Ok(QuotientSpace { poset: poset.clone(), quotients, index, below, space })
    }

    /// Same quotients and order, different orthogonality relation. Used to
    /// plant faults in negative controls.
    pub fn with_space(&self, space: OrthoSpace) -> QuotientSpace {
        assert_eq!(space.len(), self.len());
        QuotientSpace { space, ..self.clone() }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn space(&self) -> &OrthoSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn quotients(&self) -> &[Quotient] {
        &self.quotients
    }

    pub fn quotient(&self, i: usize) -> Quotient {
        self.quotients[i]
    }

    pub fn index_of(&self, lower: usize, upper: usize) -> Option<usize> {
        self.index.get(&(lower, upper)).copied()
    }

    pub fn all(&self) -> Bits {
        Bits::full(self.len())
    }

    /// `[a<b] <= [c<d]` iff `c <= a` and `b <= d`.
    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.below[q].contains(p)
    }

    /// `τ(U)`: quotients whose upper end lies in `u`.
    pub fn tau(&self, u: Bits) -> Bits {
        self.select(|q| u.contains(q.upper))
    }

    /// `β(U)`: quotients whose lower end lies in `u`.
    pub fn beta(&self, u: Bits) -> Bits {
        self.select(|q| u.contains(q.lower))
    }

    fn select<F: Fn(&Quotient) -> bool>(&self, f: F) -> Bits {
        self.quotients.iter().enumerate().filter(|(_, q)| f(q)).map(|(i, _)| i).collect()
    }

    /// `q↓` in the quotient order.
    pub fn principal_down(&self, q: usize) -> Bits {
        self.below[q]
    }

    pub fn is_lower_set(&self, xs: Bits) -> bool {
        xs.iter().all(|q| self.below[q].is_subset(xs))
    }

    pub fn maximal(&self, xs: Bits) -> Bits {
        xs.iter()
            .filter(|&q| xs.without(q).iter().all(|r| !self.leq(q, r)))
            .collect()
    }

    /// Union of the principal downs of `qs`.
    pub fn down_closure(&self, qs: Bits) -> Bits {
        qs.iter().fold(Bits::EMPTY, |acc, q| acc.or(self.below[q]))
    }

    /// The first pair of distinct maximal elements of a lower set that are
    /// not orthogonal or not strictly separated, or `None` if `xs` is of
    /// chain type.
    pub fn chain_type_violation(&self, xs: Bits) -> Result<Option<(usize, usize)>> {
        if !self.is_lower_set(xs) {
            return Err(Error::NotLowerSet);
        }
        let p = &self.poset;
        let max: Vec<usize> = self.maximal(xs).iter().collect();
        for (i, &s) in max.iter().enumerate() {
            for &t in &max[i + 1..] {
                let (qs, qt) = (self.quotients[s], self.quotients[t]);
                let separated = p.lt(qs.upper, qt.lower) || p.lt(qt.upper, qs.lower);
                if !self.space.orthogonal(s, t) || !separated {
                    return Ok(Some((s, t)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_chain_type(&self, xs: Bits) -> Result<bool> {
        Ok(self.chain_type_violation(xs)?.is_none())
    }

    pub fn label(&self, q: usize) -> &str {
        &self.space.labels()[q]
    }

    pub fn set_labels(&self, xs: Bits) -> Vec<String> {
        self.space.set_labels(xs)
    }

    /// Node label for an orthoclosed set: its maximal elements when it is of
    /// chain type, its members otherwise.
    pub fn display_set(&self, xs: Bits) -> String {
        if xs.is_empty() {
            return "∅".to_string();
        }
        match self.is_chain_type(xs) {
            Ok(true) => format!("↓{{{}}}", self.set_labels(self.maximal(xs)).join(", ")),
            _ => format!("{{{}}}", self.set_labels(xs).join(", ")),
        }
    }

    pub fn logic_dot(&self, logic: &Logic) -> String {
        let labels: Vec<String> = logic.sets().iter().map(|&s| self.display_set(s)).collect();
        logic.to_dot(&labels)
    }
}

/// Every verdict on one poset together with its witness, each computed by
/// its own procedure.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub qs: QuotientSpace,
    pub logic: Logic,
    pub bounded: bool,
    pub lattice: bool,
    pub chain: bool,
    pub nonlattice_ideal: Option<Bits>,
    /// First orthoclosed set that is not of chain type (or not a lower set).
    pub non_chain_type: Option<Bits>,
    /// `(X, B)` with `B` a basis of `X` and `B⊥⊥ != X`.
    pub non_dacey: Option<(Bits, Bits)>,
    pub orthomodular_failure: Option<(usize, usize)>,
    pub hexagon: Option<Hexagon>,
    pub non_boolean: Option<(usize, usize)>,
}

impl Analysis {
    pub fn new(poset: &Poset) -> Result<Analysis> {
        Ok(Analysis::of(QuotientSpace::new(poset)?))
    }

    pub fn of(qs: QuotientSpace) -> Analysis {
        let logic = qs.space().logic();
        Analysis::with_logic(qs, logic)
    }

    pub fn with_logic(qs: QuotientSpace, logic: Logic) -> Analysis {
        let p = qs.poset();
        let bounded = p.is_bounded();
        let lattice = p.is_lattice();
        let chain = p.is_chain();
        let nonlattice_ideal = p.nonlattice_witness().map(|d| d.members());
        let non_chain_type = logic
            .sets()
            .iter()
            .copied()
            .find(|&x| !matches!(qs.is_chain_type(x), Ok(true)));
        let non_dacey = qs.space().dacey_space_witness(&logic);
        let lat = logic.lattice();
        let orthomodular_failure = lat.orthomodular_witness();
        let hexagon = lat.find_hexagon();
        let non_boolean = lat.boolean_witness();
        Analysis {
            qs,
            logic,
            bounded,
            lattice,
            chain,
            nonlattice_ideal,
            non_chain_type,
            non_dacey,
            orthomodular_failure,
            hexagon,
            non_boolean,
        }
    }

    pub fn chain_type(&self) -> bool {
        self.non_chain_type.is_none()
    }

    pub fn dacey(&self) -> bool {
        self.non_dacey.is_none()
    }

    pub fn orthomodular(&self) -> bool {
        self.orthomodular_failure.is_none()
    }

    pub fn boolean(&self) -> bool {
        self.non_boolean.is_none()
    }

    /// The four verdicts that must coincide on finite bounded posets.
    pub fn main_verdicts(&self) -> [bool; 4] {
        [self.lattice, self.chain_type(), self.dacey(), self.orthomodular()]
    }

    pub fn main_theorem(&self) -> TheoremStatus {
        if !self.bounded {
            return TheoremStatus::NotApplicable;
        }
        let v = self.main_verdicts();
        TheoremStatus::from_bool(v.iter().all(|&b| b == v[0]))
    }

    pub fn chain_boolean_theorem(&self) -> TheoremStatus {
        if !self.bounded {
            return TheoremStatus::NotApplicable;
        }
        TheoremStatus::from_bool(self.chain == self.boolean())
    }

    fn logic_labels(&self, i: usize) -> Vec<String> {
        self.qs.set_labels(self.logic.set(i))
    }

    pub fn report(&self) -> ClassificationReport {
        let qs = &self.qs;
        let p = qs.poset();
        let witnesses = Witnesses {
            nonlattice_ideal: self.nonlattice_ideal.map(|i| p.set_labels(i)),
            non_chain_type: self.non_chain_type.map(|x| qs.set_labels(x)),
            non_dacey: self.non_dacey.map(|(set, basis)| NonDacey {
                set: qs.set_labels(set),
                basis: qs.set_labels(basis),
            }),
            orthomodular_failure: self
                .orthomodular_failure
                .map(|(x, y)| [self.logic_labels(x), self.logic_labels(y)]),
            hexagon: self.hexagon.map(|h| h.elements().iter().map(|&e| self.logic_labels(e)).collect()),
            non_boolean: self.non_boolean.map(|(a, b)| [self.logic_labels(a), self.logic_labels(b)]),
        };
        ClassificationReport {
            poset: p.to_text(),
            bounded: self.bounded,
            lattice: self.lattice,
            chain: self.chain,
            chain_type: self.chain_type(),
            dacey: self.dacey(),
            orthomodular: self.orthomodular(),
            boolean: self.boolean(),
            hexagon: self.hexagon.is_some(),
            logic_size: self.logic.len(),
            q_size: qs.len(),
            witnesses,
            theorems: Theorems { main: self.main_theorem(), chain_boolean: self.chain_boolean_theorem() },
        }
    }
}

/// Runs every decision procedure on `poset`.
pub fn classify(poset: &Poset) -> Result<ClassificationReport> {
    Ok(Analysis::new(poset)?.report())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremStatus {
    Holds,
    Fails,
    NotApplicable,
}

impl TheoremStatus {
    fn from_bool(b: bool) -> Self {
        if b {
            TheoremStatus::Holds
        } else {
            TheoremStatus::Fails
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonDacey {
    pub set: Vec<String>,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    pub nonlattice_ideal: Option<Vec<String>>,
    pub non_chain_type: Option<Vec<String>>,
    pub non_dacey: Option<NonDacey>,
    pub orthomodular_failure: Option<[Vec<String>; 2]>,
    pub hexagon: Option<Vec<Vec<String>>>,
    pub non_boolean: Option<[Vec<String>; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorems {
    pub main: TheoremStatus,
    pub chain_boolean: TheoremStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub poset: String,
    pub bounded: bool,
    pub lattice: bool,
    pub chain: bool,
    /// Every orthoclosed set is of chain type.
    pub chain_type: bool,
    pub dacey: bool,
    pub orthomodular: bool,
    pub boolean: bool,
    pub hexagon: bool,
    pub logic_size: usize,
    pub q_size: usize,
    pub witnesses: Witnesses,
    pub theorems: Theorems,
}
