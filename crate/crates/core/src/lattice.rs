//! Finite ortholattices as explicit tables.
//!
//! An [`Ortholattice`] stores its order as bit rows together with meet,
//! join and orthocomplement tables. Set-based logics fill the tables from
//! intersections and double perps; abstract lattices derive them from the
//! order. The structural checks (orthomodular law, hexagon search,
//! Boolean test, axiom validation) only look at the tables.

use serde::Serialize;

use crate::dot;
use crate::error::{Error, Result};

/// Default size limit for the cubic distributivity scan.
pub const DISTRIBUTIVITY_CAP: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitMatrix {
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix { words, data: vec![0; words * n] }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }
}

fn row_ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(w * 64 + b)
        })
    })
}

fn row_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ortholattice {
    n: usize,
    // down.get(y, x) iff x <= y
    down: BitMatrix,
    meet: Vec<u32>,
    join: Vec<u32>,
    ocompl: Vec<usize>,
    bottom: usize,
    top: usize,
}

/// The six elements `(0, a, b, b⊥, a⊥, 1)` of a hexagon sub-ortholattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Hexagon {
    pub bottom: usize,
    pub a: usize,
    pub b: usize,
    pub b_perp: usize,
    pub a_perp: usize,
    pub top: usize,
}

impl Hexagon {
    pub fn elements(&self) -> [usize; 6] {
        [self.bottom, self.a, self.b, self.b_perp, self.a_perp, self.top]
    }
}

impl Ortholattice {
    /// Builds from an order relation and an orthocomplement map. Fails when
    /// the order is not a bounded lattice; the ortholattice axioms are not
    /// checked here (see [`Ortholattice::validate`]).
    pub fn from_order<F>(n: usize, leq: F, ocompl: Vec<usize>) -> Result<Ortholattice>
    where
        F: Fn(usize, usize) -> bool,
    {
        if n == 0 {
            return Err(Error::Empty);
        }
        assert_eq!(ocompl.len(), n);
        let mut down = BitMatrix::new(n);
        let mut up = BitMatrix::new(n);
        for y in 0..n {
            for x in 0..n {
                if leq(x, y) {
                    down.set(y, x);
                    up.set(x, y);
                }
            }
        }
        let height: Vec<u32> = (0..n).map(|x| down.row(x).iter().map(|w| w.count_ones()).sum()).collect();
        let depth: Vec<u32> = (0..n).map(|x| up.row(x).iter().map(|w| w.count_ones()).sum()).collect();
        let extreme = |m: &BitMatrix, rank: &[u32], a: usize, b: usize| -> Option<usize> {
            let common: Vec<u64> = m.row(a).iter().zip(m.row(b)).map(|(x, y)| x & y).collect();
            let best = row_ones(&common).max_by_key(|&c| (rank[c], std::cmp::Reverse(c)))?;
            row_subset(&common, m.row(best)).then_some(best)
        };
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for x in 0..n {
            for y in x..n {
                let m = extreme(&down, &height, x, y)
                    .ok_or_else(|| Error::NotALattice(format!("elements {x} and {y} have no meet")))?;
                let j = extreme(&up, &depth, x, y)
                    .ok_or_else(|| Error::NotALattice(format!("elements {x} and {y} have no join")))?;
                meet[x * n + y] = m as u32;
                meet[y * n + x] = m as u32;
                join[x * n + y] = j as u32;
                join[y * n + x] = j as u32;
            }
        }
        let all: Vec<usize> = (0..n).collect();
        let bottom = all.iter().fold(0, |acc, &x| meet[acc * n + x] as usize);
        let top = all.iter().fold(0, |acc, &x| join[acc * n + x] as usize);
        Ok(Ortholattice { n, down, meet, join, ocompl, bottom, top })
    }

    /// Builds from precomputed tables. `meet` and `join` are row-major
    /// `n × n`.
    pub(crate) fn from_tables<F>(
        n: usize,
        leq: F,
        meet: Vec<u32>,
        join: Vec<u32>,
        ocompl: Vec<usize>,
        bottom: usize,
        top: usize,
    ) -> Ortholattice
    where
        F: Fn(usize, usize) -> bool,
    {
        let mut down = BitMatrix::new(n);
        for y in 0..n {
            for x in 0..n {
                if leq(x, y) {
                    down.set(y, x);
                }
            }
        }
        Ortholattice { n, down, meet, join, ocompl, bottom, top }
    }

    /// The hexagon `0 < a < b < 1`, `0 < b' < a' < 1`, indexed in that
    /// order `[0, a, b, b', a', 1]`.
    pub fn hexagon() -> Ortholattice {
        let up: [&[usize]; 6] = [&[0, 1, 2, 3, 4, 5], &[1, 2, 5], &[2, 5], &[3, 4, 5], &[4, 5], &[5]];
        Ortholattice::from_order(6, |x, y| up[x].contains(&y), vec![5, 4, 3, 2, 1, 0]).expect("hexagon is a lattice")
    }

    /// The Boolean algebra of subsets of a `k`-element set, elements indexed
    /// by their bitmask.
    pub fn boolean_algebra(k: u32) -> Ortholattice {
        let n = 1usize << k;
        let full = n - 1;
        Ortholattice::from_order(n, |x, y| x & !y == 0, (0..n).map(|x| full ^ x).collect())
            .expect("powerset is a lattice")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down.get(y, x)
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n + y] as usize
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y] as usize
    }

    #[inline]
    pub fn ocompl(&self, x: usize) -> usize {
        self.ocompl[x]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn big_meet(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.top, |acc, &x| self.meet(acc, x))
    }

    pub fn big_join(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.bottom, |acc, &x| self.join(acc, x))
    }

    /// Returns a copy with a different orthocomplement map.
    pub fn with_ocompl(&self, ocompl: Vec<usize>) -> Ortholattice {
        assert_eq!(ocompl.len(), self.n);
        Ortholattice { ocompl, ..self.clone() }
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| (0..self.n).map(move |y| (x, y)))
    }

    /// First comparable pair `x <= y` violating `y = x ∨ (y ∧ x⊥)`.
    pub fn orthomodular_witness(&self) -> Option<(usize, usize)> {
        for x in 0..self.n {
            let xp = self.ocompl(x);
            for y in 0..self.n {
                if self.leq(x, y) && self.join(x, self.meet(y, xp)) != y {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_orthomodular(&self) -> bool {
        self.orthomodular_witness().is_none()
    }

    /// Searches for a sub-ortholattice isomorphic to the hexagon. Candidate
    /// pairs `a < b` with `b ∧ a⊥ = 0` are scanned in index order and the
    /// six generated elements are verified against [`Ortholattice::hexagon`]
    /// table by table.
    pub fn find_hexagon(&self) -> Option<Hexagon> {
        let reference = Ortholattice::hexagon();
        for a in 0..self.n {
            let ap = self.ocompl(a);
            for b in 0..self.n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                if self.meet(b, ap) != self.bottom {
                    continue;
                }
                let hex = Hexagon {
                    bottom: self.bottom,
                    a,
                    b,
                    b_perp: self.ocompl(b),
                    a_perp: ap,
                    top: self.top,
                };
                if self.embeds(&reference, &hex.elements()) {
                    return Some(hex);
                }
            }
        }
        None
    }

    /// Whether `image` is an injective ortholattice embedding of `sub`.
    pub fn embeds(&self, sub: &Ortholattice, image: &[usize]) -> bool {
        let k = sub.len();
        if image.len() != k {
            return false;
        }
        for i in 0..k {
            if image[..i].contains(&image[i]) {
                return false;
            }
            if self.ocompl(image[i]) != image[sub.ocompl(i)] {
                return false;
            }
            for j in 0..k {
                if self.leq(image[i], image[j]) != sub.leq(i, j)
                    || self.meet(image[i], image[j]) != image[sub.meet(i, j)]
                    || self.join(image[i], image[j]) != image[sub.join(i, j)]
                {
                    return false;
                }
            }
        }
        true
    }

    /// First pair with `a ∧ b = 0` but `a ≰ b⊥`.
    pub fn boolean_witness(&self) -> Option<(usize, usize)> {
        self.pairs()
            .find(|&(a, b)| self.meet(a, b) == self.bottom && !self.leq(a, self.ocompl(b)))
    }

    pub fn is_boolean(&self) -> bool {
        self.boolean_witness().is_none()
    }

    /// First triple violating `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        for x in 0..self.n {
            for y in 0..self.n {
                for z in 0..self.n {
                    if self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Distributivity, or `None` when the lattice is larger than `cap`.
    pub fn check_distributive(&self, cap: usize) -> Option<bool> {
        (self.n <= cap).then(|| self.distributivity_witness().is_none())
    }

    /// All complements of `x` (`x ∧ y = 0`, `x ∨ y = 1`).
    pub fn complements(&self, x: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&y| self.meet(x, y) == self.bottom && self.join(x, y) == self.top)
            .collect()
    }

    /// Checks every ortholattice axiom and reports the first counterexample
    /// of each.
    pub fn validate(&self) -> ValidationReport {
        let n = self.n;
        let mut checks = Vec::new();
        let mut check = |axiom: &'static str, cx: Option<Vec<usize>>| {
            checks.push(AxiomCheck { axiom, passed: cx.is_none(), counterexample: cx });
        };
        let el = || 0..n;

        check(
            "reflexive",
            el().find(|&x| !self.leq(x, x)).map(|x| vec![x]),
        );
        check(
            "antisymmetric",
            self.pairs().find(|&(x, y)| x != y && self.leq(x, y) && self.leq(y, x)).map(|(x, y)| vec![x, y]),
        );
        check("transitive", {
            let mut cx = None;
            'outer: for y in el() {
                for x in row_ones(self.down.row(y)) {
                    if !row_subset(self.down.row(x), self.down.row(y)) {
                        cx = Some(vec![x, y]);
                        break 'outer;
                    }
                }
            }
            cx
        });
        check(
            "bounds",
            el().find(|&x| !self.leq(self.bottom, x) || !self.leq(x, self.top)).map(|x| vec![x]),
        );
        check("meet is greatest lower bound", {
            self.pairs()
                .find_map(|(x, y)| {
                    let m = self.meet(x, y);
                    if m >= n || !self.leq(m, x) || !self.leq(m, y) {
                        return Some(vec![x, y]);
                    }
                    let common: Vec<u64> =
                        self.down.row(x).iter().zip(self.down.row(y)).map(|(a, b)| a & b).collect();
                    (!row_subset(&common, self.down.row(m))).then(|| vec![x, y])
                })
        });
        check("join is least upper bound", {
            self.pairs().find_map(|(x, y)| {
                let j = self.join(x, y);
                if j >= n || !self.leq(x, j) || !self.leq(y, j) {
                    return Some(vec![x, y]);
                }
                el().find(|&z| self.leq(x, z) && self.leq(y, z) && !self.leq(j, z)).map(|_| vec![x, y])
            })
        });
        check(
            "0⊥=1, 1⊥=0",
            (self.ocompl(self.bottom) != self.top || self.ocompl(self.top) != self.bottom)
                .then(|| vec![self.bottom, self.top]),
        );
        check("x⊥⊥=x", el().find(|&x| self.ocompl(self.ocompl(x)) != x).map(|x| vec![x]));
        check(
            "antitone",
            self.pairs()
                .find(|&(x, y)| self.leq(x, y) && !self.leq(self.ocompl(y), self.ocompl(x)))
                .map(|(x, y)| vec![x, y]),
        );
        check(
            "(x∨y)⊥=x⊥∧y⊥",
            self.pairs()
                .find(|&(x, y)| self.ocompl(self.join(x, y)) != self.meet(self.ocompl(x), self.ocompl(y)))
                .map(|(x, y)| vec![x, y]),
        );
        check(
            "(x∧y)⊥=x⊥∨y⊥",
            self.pairs()
                .find(|&(x, y)| self.ocompl(self.meet(x, y)) != self.join(self.ocompl(x), self.ocompl(y)))
                .map(|(x, y)| vec![x, y]),
        );
        check(
            "x∧x⊥=0",
            el().find(|&x| self.meet(x, self.ocompl(x)) != self.bottom).map(|x| vec![x]),
        );
        check(
            "x∨x⊥=1",
            el().find(|&x| self.join(x, self.ocompl(x)) != self.top).map(|x| vec![x]),
        );
        ValidationReport { checks }
    }

    /// Hasse edges `(lower, upper)`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in 0..self.n {
            let below: Vec<usize> = row_ones(self.down.row(y)).filter(|&x| x != y).collect();
            for &x in &below {
                let between = below.iter().any(|&z| z != x && self.leq(x, z));
                if !between {
                    out.push((x, y));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Hasse diagram with the orthocomplement drawn as dashed edges.
    pub fn to_dot(&self, name: &str, labels: &[String]) -> String {
        let dashed: Vec<(usize, usize)> = (0..self.n)
            .filter(|&x| x < self.ocompl(x))
            .map(|x| (x, self.ocompl(x)))
            .collect();
        dot::hasse(name, labels, &self.covers(), &dashed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    pub counterexample: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}
