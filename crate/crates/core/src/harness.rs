//! Exhaustive checking of the structural theorems over the catalogue of
//! small bounded posets and small graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::Bits;
use crate::enumerate::{self, DEFAULT_CAP};
use crate::error::Result;
use crate::kalmbach::{self, KalmbachLattice};
use crate::poset::Poset;
use crate::quotient::{self, Analysis, ClassificationReport, QuotientSpace};
use crate::space::{Logic, OrthoSpace};

/// Deliberate corruption used to show the checks are not vacuous.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    #[default]
    None,
    /// Toggle orthogonality between the first two quotients of each Q(P).
    FlipAdjacency,
    /// Send the bottom of each logic to itself under the complement.
    Orthocomplement,
}

impl FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Mutation, String> {
        match s {
            "none" => Ok(Mutation::None),
            "flip-adjacency" => Ok(Mutation::FlipAdjacency),
            "orthocomplement" => Ok(Mutation::Orthocomplement),
            _ => Err(format!("unknown mutation `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub n_max: usize,
    pub cap: usize,
    pub seed: u64,
    /// Graphs on up to this many vertices are checked as well.
    pub graph_max: usize,
    /// Lemma checks run over every instance up to this poset size and over
    /// a seeded sample above it.
    pub exhaustive_max: usize,
    pub samples: usize,
    pub mutation: Mutation,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            n_max: DEFAULT_CAP,
            cap: DEFAULT_CAP,
            seed: 0,
            graph_max: 5,
            exhaustive_max: 6,
            samples: 48,
            mutation: Mutation::None,
        }
    }
}

pub const MAIN_EQUIVALENCE: &str = "lattice/chain-type/dacey/orthomodular agree";
pub const CHAIN_BOOLEAN: &str = "chain iff boolean logic";
pub const DACEY_OM: &str = "dacey space iff orthomodular logic";
pub const HEXAGON_OM: &str = "no hexagon iff orthomodular";
pub const LOGIC_VALID: &str = "logic is an ortholattice";
pub const NONLATTICE_WITNESS: &str = "non-lattice iff ideal with two maxima";
pub const KALMBACH_OML: &str = "kalmbach lattice is orthomodular";
pub const KALMBACH_ISO: &str = "kalmbach lattice isomorphic to logic";
pub const MACNEILLE: &str = "completion embeds into logic";
pub const ROUND_TRIP: &str = "text and json round trip";
pub const ENDPOINTS_COMPARABLE: &str = "orthogonal endpoints comparable";
pub const HEREDITARY: &str = "orthogonality is hereditary";
pub const CLOSED_ARE_LOWER: &str = "orthoclosed sets are lower sets";
pub const PERP_OF_QUOTIENT: &str = "perp of a quotient decomposes";
pub const PERP_OF_TAU_BETA: &str = "perp of tau and beta";
pub const TAU_CLOSURE: &str = "closure of tau";
pub const CLOSURE_OF_QUOTIENT: &str = "closure of a quotient is its down-set";
pub const PRINCIPAL_DACEY: &str = "principal down-sets are dacey";
pub const NONORTHOGONAL_MERGE: &str = "non-orthogonal quotients merge";
pub const TOUCHING_MERGE: &str = "touching quotients merge";
pub const CHAIN_TYPE_DACEY: &str = "chain-type sets are closed and dacey";
pub const DACEY_UNION: &str = "orthogonal union of dacey sets";
pub const DACEY_CHARACTERISATION: &str = "dacey characterisations agree";
pub const COVERAGE: &str = "every operation exercised";

pub const CHECKS: &[&str] = &[
    MAIN_EQUIVALENCE,
    CHAIN_BOOLEAN,
    DACEY_OM,
    HEXAGON_OM,
    LOGIC_VALID,
    NONLATTICE_WITNESS,
    KALMBACH_OML,
    KALMBACH_ISO,
    MACNEILLE,
    ROUND_TRIP,
    ENDPOINTS_COMPARABLE,
    HEREDITARY,
    CLOSED_ARE_LOWER,
    PERP_OF_QUOTIENT,
    PERP_OF_TAU_BETA,
    TAU_CLOSURE,
    CLOSURE_OF_QUOTIENT,
    PRINCIPAL_DACEY,
    NONORTHOGONAL_MERGE,
    TOUCHING_MERGE,
    CHAIN_TYPE_DACEY,
    DACEY_UNION,
    DACEY_CHARACTERISATION,
    COVERAGE,
];

/// Library operations the harness is expected to reach on every run.
pub const OPERATIONS: &[&str] = &[
    "parse_poset",
    "bounds",
    "lower_bounds",
    "upper_bounds",
    "poset_meet",
    "poset_join",
    "is_lattice",
    "is_chain",
    "is_bounded",
    "macneille",
    "nonlattice_witness",
    "perp",
    "closure",
    "logic",
    "bases",
    "is_dacey_set",
    "is_dacey_space",
    "lattice_meet",
    "lattice_join",
    "big_meet",
    "big_join",
    "is_orthomodular",
    "find_hexagon",
    "is_boolean",
    "validate_ortholattice",
    "quotient_space",
    "tau",
    "beta",
    "principal_down",
    "is_chain_type",
    "classify",
    "kalmbach",
    "kalmbach_to_logic",
    "logic_to_kalmbach",
    "macneille_embedding",
    "enumerate_posets",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub check: String,
    /// The poset or space in its text format, ready to replay.
    pub subject: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub check: String,
    pub passed: usize,
    pub failed: usize,
}

/// What happens to the Kalmbach construction on bounded non-lattices.
/// Recorded only; nothing is asserted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Observations {
    pub bounded_nonlattices: usize,
    pub kalmbach_is_lattice: usize,
    pub kalmbach_is_orthomodular: usize,
    pub kalmbach_isomorphic_to_logic: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    pub n_max: usize,
    pub seed: u64,
    pub mutation: Mutation,
    pub catalogue_size: usize,
    pub lattices: usize,
    pub graphs: usize,
    pub checks: Vec<Tally>,
    pub discrepancies: Vec<Discrepancy>,
    pub coverage: Vec<String>,
    pub observations: Observations,
    pub posets: Vec<ClassificationReport>,
}

impl HarnessReport {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn tally(&self, check: &str) -> Option<&Tally> {
        self.checks.iter().find(|t| t.check == check)
    }

    pub fn verdict(&self) -> String {
        match self.discrepancies.len() {
            0 => "all theorems verified, 0 discrepancies".to_string(),
            1 => "1 discrepancy".to_string(),
            k => format!("{k} discrepancies"),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for HarnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "bounded posets with at most {} points: {} ({} lattices); graphs: {}",
            self.n_max, self.catalogue_size, self.lattices, self.graphs
        )?;
        let width = self.checks.iter().map(|t| t.check.chars().count()).max().unwrap_or(0);
        for t in &self.checks {
            let pad = width - t.check.chars().count();
            writeln!(f, "  {}{}  {:>6} passed  {:>4} failed", t.check, " ".repeat(pad), t.passed, t.failed)?;
        }
        for d in self.discrepancies.iter().take(20) {
            writeln!(f, "discrepancy in `{}`: {}", d.check, d.detail)?;
            for line in d.subject.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        if self.discrepancies.len() > 20 {
            writeln!(f, "... and {} more", self.discrepancies.len() - 20)?;
        }
        write!(f, "{}", self.verdict())
    }
}

#[derive(Default)]
struct Outcome {
    tallies: BTreeMap<&'static str, (usize, usize)>,
    discrepancies: Vec<Discrepancy>,
    coverage: BTreeSet<&'static str>,
}

impl Outcome {
    fn record(&mut self, check: &'static str, subject: &str, result: std::result::Result<(), String>) {
        let t = self.tallies.entry(check).or_default();
        match result {
            Ok(()) => t.0 += 1,
            Err(detail) => {
                t.1 += 1;
                self.discrepancies.push(Discrepancy { check: check.to_string(), subject: subject.to_string(), detail });
            }
        }
    }

    fn cover(&mut self, ops: &[&'static str]) {
        self.coverage.extend(ops);
    }

    fn merge(&mut self, other: Outcome) {
        for (k, (p, f)) in other.tallies {
            let t = self.tallies.entry(k).or_default();
            t.0 += p;
            t.1 += f;
        }
        self.discrepancies.extend(other.discrepancies);
        self.coverage.extend(other.coverage);
    }
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

/// Picks every instance, or a seeded sample when above the exhaustive size.
struct Sampler {
    rng: Option<ChaCha8Rng>,
    k: usize,
}

impl Sampler {
    fn pick<T: Copy>(&mut self, items: Vec<T>) -> Vec<T> {
        match &mut self.rng {
            Some(rng) if items.len() > self.k => {
                let mut idx = index::sample(rng, items.len(), self.k).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(|i| items[i]).collect()
            }
            _ => items,
        }
    }
}

pub fn theorem_harness(n_max: usize) -> Result<HarnessReport> {
    run(&HarnessConfig { n_max, ..HarnessConfig::default() })
}

pub fn run(cfg: &HarnessConfig) -> Result<HarnessReport> {
    let mut catalogue: Vec<(u64, Poset)> = Vec::new();
    for k in 1..=cfg.n_max.max(1) {
        let cat = enumerate::enumerate_posets_capped(k, enumerate::Filter::Bounded, cfg.cap)?;
        catalogue.extend(cat.codes.into_iter().zip(cat.posets));
    }
    let graphs: Vec<OrthoSpace> = (0..=cfg.graph_max)
        .map(enumerate::enumerate_graphs)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let per_poset: Vec<(ClassificationReport, Outcome, Observations)> =
        catalogue.par_iter().map(|(code, p)| check_poset(p, *code, cfg)).collect();
    let per_graph: Vec<Outcome> = graphs.par_iter().map(check_graph).collect();

    let mut total = Outcome::default();
    total.cover(&["enumerate_posets"]);
    let mut observations = Observations::default();
    let mut posets = Vec::with_capacity(per_poset.len());
    let mut lattices = 0;
    for (report, outcome, obs) in per_poset {
        lattices += report.lattice as usize;
        posets.push(report);
        total.merge(outcome);
        observations.bounded_nonlattices += obs.bounded_nonlattices;
        observations.kalmbach_is_lattice += obs.kalmbach_is_lattice;
        observations.kalmbach_is_orthomodular += obs.kalmbach_is_orthomodular;
        observations.kalmbach_isomorphic_to_logic += obs.kalmbach_isomorphic_to_logic;
    }
    for outcome in per_graph {
        total.merge(outcome);
    }
    let missing: Vec<&str> = OPERATIONS.iter().copied().filter(|op| !total.coverage.contains(op)).collect();
    total.record(COVERAGE, "", ensure(missing.is_empty(), || format!("never exercised: {}", missing.join(", "))));

    let checks = CHECKS
        .iter()
        .map(|&c| {
            let (passed, failed) = total.tallies.get(c).copied().unwrap_or_default();
            Tally { check: c.to_string(), passed, failed }
        })
        .collect();
    Ok(HarnessReport {
        n_max: cfg.n_max,
        seed: cfg.seed,
        mutation: cfg.mutation,
        catalogue_size: catalogue.len(),
        lattices,
        graphs: graphs.len(),
        checks,
        discrepancies: total.discrepancies,
        coverage: total.coverage.into_iter().map(String::from).collect(),
        observations,
        posets,
    })
}

fn flip_first_pair(space: &OrthoSpace) -> OrthoSpace {
    let mut rows = space.rows().to_vec();
    rows[0] = rows[0].xor(Bits::singleton(1));
    rows[1] = rows[1].xor(Bits::singleton(0));
    OrthoSpace::from_rows_unchecked(space.labels().to_vec(), rows)
}

fn check_poset(p: &Poset, code: u64, cfg: &HarnessConfig) -> (ClassificationReport, Outcome, Observations) {
    let subject = p.to_text();
    let mut o = Outcome::default();
    let mut obs = Observations::default();

    let mut qs = QuotientSpace::new(p).expect("catalogue posets have at most 128 quotients");
    o.cover(&["quotient_space"]);
    if cfg.mutation == Mutation::FlipAdjacency && qs.len() >= 2 {
        qs = qs.with_space(flip_first_pair(qs.space()));
    }
    let mut logic = qs.space().logic();
    o.cover(&["logic"]);
    if cfg.mutation == Mutation::Orthocomplement && logic.len() >= 2 {
        let lat = logic.lattice();
        let mut oc: Vec<usize> = (0..logic.len()).map(|x| lat.ocompl(x)).collect();
        oc[lat.bottom()] = lat.bottom();
        logic = logic.with_ocompl(oc);
    }
    let a = Analysis::with_logic(qs, logic);
    o.cover(&[
        "is_bounded",
        "is_lattice",
        "is_chain",
        "nonlattice_witness",
        "is_chain_type",
        "is_dacey_space",
        "is_orthomodular",
        "find_hexagon",
        "is_boolean",
    ]);
    let report = a.report();

    let round_trip = (|| {
        let parsed = Poset::parse(&subject).map_err(|e| format!("reparse failed: {e}"))?;
        ensure(&parsed == p, || "reparsed poset differs".to_string())?;
        let json = serde_json::to_string(&report).map_err(|e| e.to_string())?;
        let value: serde_json::Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
        ensure(value["poset"] == subject.as_str(), || "json poset field differs".to_string())?;
        if cfg.mutation == Mutation::None {
            let again = quotient::classify(p).map_err(|e| e.to_string())?;
            ensure(again == report, || "classify is not reproducible".to_string())?;
        }
        Ok(())
    })();
    o.cover(&["parse_poset"]);
    if cfg.mutation == Mutation::None {
        o.cover(&["classify"]);
    }
    o.record(ROUND_TRIP, &subject, round_trip);

    let v = a.main_verdicts();
    o.record(
        MAIN_EQUIVALENCE,
        &subject,
        ensure(v.iter().all(|&b| b == v[0]), || {
            format!("lattice={} chain_type={} dacey={} orthomodular={}", v[0], v[1], v[2], v[3])
        }),
    );
    o.record(
        CHAIN_BOOLEAN,
        &subject,
        ensure(a.chain == a.boolean(), || format!("chain={} boolean={}", a.chain, a.boolean())),
    );
    o.record(
        NONLATTICE_WITNESS,
        &subject,
        ensure(a.lattice == a.nonlattice_ideal.is_none(), || format!("lattice={}", a.lattice)),
    );
    check_logic(&mut o, &subject, a.qs.space(), &a.logic, Some(a.dacey()));

    if a.lattice {
        check_kalmbach(&mut o, &subject, &a);
    } else {
        obs.bounded_nonlattices = 1;
        if let Ok(k) = KalmbachLattice::new(p) {
            if let Ok(lat) = k.ortholattice() {
                obs.kalmbach_is_lattice = 1;
                obs.kalmbach_is_orthomodular = lat.is_orthomodular() as usize;
            }
            obs.kalmbach_isomorphic_to_logic = kalmbach::verify_isomorphism(&k, &a.qs, &a.logic).is_ok() as usize;
        }
    }
    check_macneille(&mut o, &subject, &a);

    let mut sampler = Sampler {
        rng: (p.len() > cfg.exhaustive_max)
            .then(|| ChaCha8Rng::seed_from_u64(cfg.seed ^ code.rotate_left(17) ^ p.len() as u64)),
        k: cfg.samples,
    };
    check_quotient_lemmas(&mut o, &subject, &a, &mut sampler);
    check_space_lemmas(&mut o, &subject, a.qs.space(), &a.logic, &mut sampler);
    (report, o, obs)
}

/// Checks shared by every space: the logic is an ortholattice, Dacey
/// agrees with orthomodularity, and hexagons appear exactly when
/// orthomodularity fails.
fn check_logic(o: &mut Outcome, subject: &str, space: &OrthoSpace, logic: &Logic, dacey: Option<bool>) {
    let lat = logic.lattice();
    let validation = lat.validate();
    o.cover(&["validate_ortholattice"]);
    let valid = validation.all_pass();
    o.record(
        LOGIC_VALID,
        subject,
        ensure(valid, || {
            let names: Vec<&str> = validation.failures().map(|c| c.axiom).collect();
            format!("failed axioms: {}", names.join(", "))
        }),
    );
    let dacey = dacey.unwrap_or_else(|| space.dacey_space_witness(logic).is_none());
    let om = lat.is_orthomodular();
    o.record(DACEY_OM, subject, ensure(dacey == om, || format!("dacey={dacey} orthomodular={om}")));
    if valid {
        let hex = lat.find_hexagon().is_some();
        o.record(HEXAGON_OM, subject, ensure(hex != om, || format!("hexagon={hex} orthomodular={om}")));
    }
}

fn check_kalmbach(o: &mut Outcome, subject: &str, a: &Analysis) {
    o.cover(&["kalmbach", "kalmbach_to_logic", "logic_to_kalmbach"]);
    let k = match KalmbachLattice::new(a.qs.poset()) {
        Ok(k) => k,
        Err(e) => return o.record(KALMBACH_OML, subject, Err(e.to_string())),
    };
    match k.ortholattice() {
        Ok(lat) => {
            let validation = lat.validate();
            let om = lat.is_orthomodular();
            o.record(
                KALMBACH_OML,
                subject,
                ensure(validation.all_pass() && om, || format!("valid={} orthomodular={om}", validation.all_pass())),
            );
            if validation.all_pass() {
                let hex = lat.find_hexagon().is_some();
                o.record(HEXAGON_OM, subject, ensure(hex != om, || format!("kalmbach hexagon={hex} orthomodular={om}")));
            }
        }
        Err(e) => o.record(KALMBACH_OML, subject, Err(e.to_string())),
    }
    o.record(KALMBACH_ISO, subject, kalmbach::verify_isomorphism(&k, &a.qs, &a.logic).map(drop));
}

fn check_macneille(o: &mut Outcome, subject: &str, a: &Analysis) {
    o.cover(&["macneille", "macneille_embedding", "lattice_meet", "lattice_join", "big_meet", "big_join", "bounds"]);
    let p = a.qs.poset();
    let comp = p.macneille();
    let lat = a.logic.lattice();
    let result = (|| {
        let (_, _) = p.bounds().ok_or("catalogue poset is unbounded")?;
        let image = kalmbach::macneille_embedding(&a.qs, &comp, &a.logic).map_err(|e| e.to_string())?;
        let distinct: BTreeSet<usize> = image.iter().copied().collect();
        ensure(distinct.len() == image.len(), || "not injective".to_string())?;
        let top = comp.index_of(p.carrier()).ok_or("carrier is not closed")?;
        let bottom = comp.meet(p, &(0..comp.len()).collect::<Vec<_>>());
        ensure(image[top] == lat.top() && image[bottom] == lat.bottom(), || "bounds not preserved".to_string())?;
        for i in 0..comp.len() {
            for j in 0..comp.len() {
                let m = comp.meet(p, &[i, j]);
                let jn = comp.join(p, &[i, j]);
                ensure(image[m] == lat.meet(image[i], image[j]), || format!("meet of ideals {i},{j}"))?;
                ensure(image[jn] == lat.join(image[i], image[j]), || format!("join of ideals {i},{j}"))?;
            }
        }
        // a proper subfamily, to exercise the big operations on more than two
        let family: Vec<usize> = (0..comp.len()).filter(|&i| !comp.ideals[i].contains(0) || i == top).collect();
        let images: Vec<usize> = family.iter().map(|&i| image[i]).collect();
        ensure(image[comp.meet(p, &family)] == lat.big_meet(&images), || "meet of family".to_string())?;
        ensure(image[comp.join(p, &family)] == lat.big_join(&images), || "join of family".to_string())?;
        Ok(())
    })();
    o.record(MACNEILLE, subject, result);
}

fn check_quotient_lemmas(o: &mut Outcome, subject: &str, a: &Analysis, s: &mut Sampler) {
    let qs = &a.qs;
    let sp = qs.space();
    let p = qs.poset();
    let logic = &a.logic;
    let nq = qs.len();
    o.cover(&["perp", "closure", "tau", "beta", "principal_down", "lower_bounds", "upper_bounds", "bases", "is_dacey_set"]);

    let r = (|| {
        for b in s.pick(sp.maximal_cliques(qs.all())) {
            let ends = b.iter().fold(Bits::EMPTY, |acc, q| acc.with(qs.quotient(q).lower).with(qs.quotient(q).upper));
            for x in ends {
                for y in ends {
                    ensure(p.comparable(x, y), || format!("{:?} has incomparable endpoints", qs.set_labels(b)))?;
                }
            }
        }
        Ok(())
    })();
    o.record(ENDPOINTS_COMPARABLE, subject, r);

    let r = (|| {
        for u in 0..nq {
            for q in 0..nq {
                if !qs.leq(u, q) {
                    continue;
                }
                for c in sp.row(q) {
                    ensure(sp.orthogonal(u, c), || {
                        format!("{} ≤ {} ⊥ {} but not {} ⊥ {}", qs.label(u), qs.label(q), qs.label(c), qs.label(u), qs.label(c))
                    })?;
                }
            }
        }
        Ok(())
    })();
    o.record(HEREDITARY, subject, r);

    let r = (|| {
        for x in s.pick(logic.sets().to_vec()) {
            ensure(qs.is_lower_set(x), || format!("{:?} is closed but not a lower set", qs.set_labels(x)))?;
        }
        Ok(())
    })();
    o.record(CLOSED_ARE_LOWER, subject, r);

    let quotients: Vec<usize> = (0..nq).collect();
    let picked = s.pick(quotients);
    let r = (|| {
        for &q in &picked {
            let (x, y) = (qs.quotient(q).lower, qs.quotient(q).upper);
            let perp = qs.tau(p.down(x)).or(qs.beta(p.up(y)));
            ensure(sp.perp(Bits::singleton(q)) == perp, || format!("perp of {}", qs.label(q)))?;
            let down = qs.beta(p.up(x)).and(qs.tau(p.down(y)));
            ensure(qs.principal_down(q) == down, || format!("down-set of {}", qs.label(q)))?;
        }
        Ok(())
    })();
    o.record(PERP_OF_QUOTIENT, subject, r);

    let r = (|| {
        if p.bottom().is_some() {
            for i in s.pick(p.down_sets()) {
                ensure(sp.perp(qs.tau(i)) == qs.beta(p.upper_bounds(i)), || {
                    format!("perp of tau({:?})", p.set_labels(i))
                })?;
            }
        }
        if p.top().is_some() {
            for f in s.pick(p.up_sets()) {
                ensure(sp.perp(qs.beta(f)) == qs.tau(p.lower_bounds(f)), || {
                    format!("perp of beta({:?})", p.set_labels(f))
                })?;
            }
        }
        Ok(())
    })();
    o.record(PERP_OF_TAU_BETA, subject, r);

    let r = (|| {
        for i in s.pick(p.down_sets()) {
            let closed = p.lower_bounds(p.upper_bounds(i));
            ensure(sp.closure(qs.tau(i)) == qs.tau(closed), || format!("closure of tau({:?})", p.set_labels(i)))?;
        }
        Ok(())
    })();
    o.record(TAU_CLOSURE, subject, r);

    let r = (|| {
        for &q in &picked {
            ensure(sp.closure(Bits::singleton(q)) == qs.principal_down(q), || format!("closure of {}", qs.label(q)))?;
        }
        Ok(())
    })();
    o.record(CLOSURE_OF_QUOTIENT, subject, r);

    let r = (|| {
        for &q in &picked {
            let down = qs.principal_down(q);
            let (x, y) = (qs.quotient(q).lower, qs.quotient(q).upper);
            ensure(sp.is_dacey_set(down).unwrap_or(false), || format!("down-set of {} is not dacey", qs.label(q)))?;
            for b in sp.bases(down).map_err(|e| e.to_string())? {
                let mut blocks: Vec<(usize, usize)> =
                    b.iter().map(|r| (qs.quotient(r).lower, qs.quotient(r).upper)).collect();
                blocks.sort_by_key(|&(c, _)| p.down(c).len());
                let partitions = blocks.first().map(|b| b.0) == Some(x)
                    && blocks.last().map(|b| b.1) == Some(y)
                    && blocks.windows(2).all(|w| w[0].1 == w[1].0);
                ensure(partitions, || format!("basis {:?} does not partition {}", qs.set_labels(b), qs.label(q)))?;
            }
        }
        Ok(())
    })();
    o.record(PRINCIPAL_DACEY, subject, r);

    if a.lattice {
        o.cover(&["poset_meet", "poset_join"]);
        let r = (|| {
            let meet = |x, y| p.meet(x, y).ok_or("meet missing in a lattice");
            let join = |x, y| p.join(x, y).ok_or("join missing in a lattice");
            for x in s.pick(logic.sets().to_vec()) {
                for r in x {
                    for t in x {
                        if sp.orthogonal(r, t) {
                            continue;
                        }
                        let (qa, qb) = (qs.quotient(r), qs.quotient(t));
                        let m = qs
                            .index_of(meet(qa.lower, qb.lower)?, join(qa.upper, qb.upper)?)
                            .ok_or("merged pair is not a quotient")?;
                        ensure(x.contains(m), || {
                            format!("{} and {} in {:?} but not {}", qs.label(r), qs.label(t), qs.set_labels(x), qs.label(m))
                        })?;
                    }
                }
            }
            let pairs: Vec<(usize, usize)> =
                (0..nq).flat_map(|r| (0..nq).map(move |t| (r, t))).filter(|&(r, t)| !sp.orthogonal(r, t)).collect();
            for (r, t) in s.pick(pairs) {
                let (qa, qb) = (qs.quotient(r), qs.quotient(t));
                let lo = meet(qa.lower, qb.lower)?;
                let hi = join(qa.upper, qb.upper)?;
                let expected = qs.beta(p.up(hi)).or(qs.tau(p.down(lo)));
                ensure(sp.perp(Bits::from_indices([r, t])) == expected, || {
                    format!("perp of {{{}, {}}}", qs.label(r), qs.label(t))
                })?;
            }
            Ok(())
        })();
        o.record(NONORTHOGONAL_MERGE, subject, r);
    }

    let r = (|| {
        for x in s.pick(logic.sets().to_vec()) {
            for r in x {
                for t in x {
                    let (qa, qb) = (qs.quotient(r), qs.quotient(t));
                    // qa = [p<q2], qb = [q1<r]
                    if p.leq(qb.lower, qa.upper) && p.lt(qa.lower, qb.upper) {
                        let m = qs.index_of(qa.lower, qb.upper).ok_or("outer pair is not a quotient")?;
                        ensure(x.contains(m), || {
                            format!("{} and {} in {:?} but not {}", qs.label(r), qs.label(t), qs.set_labels(x), qs.label(m))
                        })?;
                    }
                }
            }
        }
        Ok(())
    })();
    o.record(TOUCHING_MERGE, subject, r);

    let r = (|| {
        let chains = kalmbach::even_chains(p);
        for i in s.pick((0..chains.len()).collect()) {
            let c = &chains[i];
            let x = kalmbach::chain_to_set(qs, c);
            let label = || c.label(p);
            ensure(qs.is_chain_type(x).unwrap_or(false), || format!("f({}) is not of chain type", label()))?;
            ensure(sp.is_orthoclosed(x), || format!("f({}) is not closed", label()))?;
            ensure(sp.is_dacey_set(x).unwrap_or(false), || format!("f({}) is not dacey", label()))?;
            ensure(sp.closure(qs.maximal(x)) == x, || format!("max of f({}) does not generate it", label()))?;
        }
        Ok(())
    })();
    o.record(CHAIN_TYPE_DACEY, subject, r);
}

fn check_space_lemmas(o: &mut Outcome, subject: &str, sp: &OrthoSpace, logic: &Logic, s: &mut Sampler) {
    let mut dacey: HashMap<Bits, bool> = HashMap::new();
    let mut is_dacey = |x: Bits| *dacey.entry(x).or_insert_with(|| sp.is_dacey_set(x).unwrap_or(false));

    let r = (|| {
        for x in s.pick(logic.sets().to_vec()) {
            let xp = sp.perp(x);
            let bases = sp.bases(x).map_err(|e| e.to_string())?;
            let closes = bases.iter().all(|&b| sp.closure(b) == x);
            let same_perp = bases.iter().all(|&b| sp.perp(b) == xp);
            let sub_perp = bases.iter().all(|&b| sp.perp(b).is_subset(xp));
            let d = is_dacey(x);
            ensure(closes == same_perp && same_perp == sub_perp && sub_perp == d, || {
                format!("{:?}: {closes} {same_perp} {sub_perp} {d}", sp.set_labels(x))
            })?;
        }
        Ok(())
    })();
    o.record(DACEY_CHARACTERISATION, subject, r);

    let r = (|| {
        let n = logic.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        for (i, j) in s.pick(pairs) {
            let (x, y) = (logic.set(i), logic.set(j));
            let u = x.or(y);
            if sp.sets_orthogonal(x, y) && logic.index_of(u).is_some() && is_dacey(x) && is_dacey(y) {
                ensure(is_dacey(u), || format!("{:?} ∪ {:?} is not dacey", sp.set_labels(x), sp.set_labels(y)))?;
            }
        }
        Ok(())
    })();
    o.record(DACEY_UNION, subject, r);
}

fn check_graph(space: &OrthoSpace) -> Outcome {
    let subject = space.to_text();
    let mut o = Outcome::default();
    let logic = space.logic();
    check_logic(&mut o, &subject, space, &logic, None);
    let round = OrthoSpace::parse(&subject).map_err(|e| e.to_string()).and_then(|s| {
        ensure(s.rows() == space.rows() && s.labels() == space.labels(), || "reparsed space differs".to_string())
    });
    o.record(ROUND_TRIP, &subject, round);
    let mut all = Sampler { rng: None, k: 0 };
    check_space_lemmas(&mut o, &subject, space, &logic, &mut all);
    o
}
