//! Acceptance run over the full catalogue. Prints one line per criterion
//! and exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use orthologic::enumerate;
use orthologic::harness::{self, HarnessConfig, HarnessReport, Mutation};
use orthologic::{Analysis, Bits, OrthoSpace, Poset, QuotientSpace};
use serde_json::{json, Value};

const N_MAX: usize = 7;
const GRAPH_MAX: usize = 5;
const RUNTIME_LIMIT: Duration = Duration::from_secs(600);

/// Isomorphism classes of posets on `n` points, counted by brute force:
/// every labelled strict order, reduced to its least adjacency matrix over
/// all relabellings.
fn poset_classes_oracle(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut classes = BTreeSet::new();
    let mut lt = vec![0u16; n];
    fn go(
        n: usize,
        pairs: &[(usize, usize)],
        k: usize,
        lt: &mut Vec<u16>,
        perms: &[Vec<usize>],
        out: &mut BTreeSet<u64>,
    ) {
        if k == pairs.len() {
            let transitive = (0..n).all(|x| (0..n).all(|y| lt[x] >> y & 1 == 0 || lt[y] & !lt[x] == 0));
            if transitive {
                let code = perms
                    .iter()
                    .map(|p| (0..n * n).fold(0u64, |c, t| c << 1 | (lt[p[t / n]] >> p[t % n] & 1) as u64))
                    .min()
                    .unwrap();
                out.insert(code);
            }
            return;
        }
        let (i, j) = pairs[k];
        go(n, pairs, k + 1, lt, perms, out);
        lt[i] |= 1 << j;
        go(n, pairs, k + 1, lt, perms, out);
        lt[i] &= !(1 << j);
        lt[j] |= 1 << i;
        go(n, pairs, k + 1, lt, perms, out);
        lt[j] &= !(1 << i);
    }
    go(n, &pairs, 0, &mut lt, &perms, &mut classes);
    classes.len()
}

fn graph_classes_oracle(m: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let perms = permutations(m);
    let classes: BTreeSet<u64> = (0..1u64 << pairs.len())
        .map(|mask| {
            perms
                .iter()
                .map(|p| {
                    let mut edges: Vec<(usize, usize)> = pairs
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| mask >> t & 1 == 1)
                        .map(|(_, &(i, j))| (p[i].min(p[j]), p[i].max(p[j])))
                        .collect();
                    edges.sort();
                    edges.iter().fold(0u64, |c, &(i, j)| c | 1 << (i * m + j))
                })
                .min()
                .unwrap()
        })
        .collect();
    classes.len()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

struct Criteria {
    failed: usize,
}

impl Criteria {
    fn report(&mut self, n: usize, name: &str, result: Result<String, String>) {
        match result {
            Ok(note) => println!("criterion {n} PASS  {name}: {note}"),
            Err(why) => {
                self.failed += 1;
                println!("criterion {n} FAIL  {name}: {why}");
            }
        }
    }
}

fn zero_failures(report: &HarnessReport, check: &str, expected: usize) -> Result<String, String> {
    let t = report.tally(check).ok_or(format!("no tally for `{check}`"))?;
    if t.failed != 0 {
        let d = report.discrepancies.iter().find(|d| d.check == check).map(|d| d.detail.clone());
        return Err(format!("{} failures in `{check}`, first: {:?}", t.failed, d));
    }
    if t.passed != expected {
        return Err(format!("`{check}` ran {} times, expected {expected}", t.passed));
    }
    Ok(format!("{expected} instances"))
}

fn golden(name: &str) -> Value {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).expect("golden file")).expect("golden json")
}

fn space_summary(s: &OrthoSpace) -> Value {
    let logic = s.logic();
    let lat = logic.lattice();
    let witness = s.dacey_space_witness(&logic);
    json!({
        "space": s.to_text(),
        "logic": logic.sets().iter().map(|&x| s.set_labels(x)).collect::<Vec<_>>(),
        "ocompl": (0..logic.len()).map(|x| lat.ocompl(x)).collect::<Vec<_>>(),
        "boolean": lat.is_boolean(),
        "orthomodular": lat.is_orthomodular(),
        "dacey": witness.is_none(),
        "non_dacey": witness.map(|(x, b)| json!({ "set": s.set_labels(x), "basis": s.set_labels(b) })),
        "hexagon": lat.find_hexagon().map(|h| h.elements().iter().map(|&e| s.set_labels(logic.set(e))).collect::<Vec<_>>()),
    })
}

fn n_summary(p: &Poset) -> Value {
    let a = Analysis::new(p).unwrap();
    let ideal = p.nonlattice_witness().map(|d| d.members()).unwrap_or(Bits::EMPTY);
    json!({
        "poset": p.to_text(),
        "bounded": a.bounded,
        "lattice": a.lattice,
        "dacey": a.dacey(),
        "orthomodular": a.orthomodular(),
        "nonlattice_ideal": p.set_labels(ideal),
        "tau_of_ideal": a.qs.set_labels(a.qs.tau(ideal)),
        "non_dacey": a.non_dacey.map(|(x, b)| json!({ "set": a.qs.set_labels(x), "basis": a.qs.set_labels(b) })),
    })
}

fn compare(name: &str, computed: Value) -> Result<(), String> {
    let expected = golden(name);
    if computed == expected {
        Ok(())
    } else {
        Err(format!("{name} differs:\n{}", serde_json::to_string_pretty(&computed).unwrap()))
    }
}

fn main() -> ExitCode {
    let mut c = Criteria { failed: 0 };
    let start = Instant::now();
    let cfg = HarnessConfig { n_max: N_MAX, graph_max: GRAPH_MAX, ..HarnessConfig::default() };
    let report = harness::run(&cfg).expect("harness runs");
    let elapsed = start.elapsed();
    let other_seed = harness::run(&HarnessConfig { seed: 1, ..cfg.clone() }).expect("harness runs");
    let graphs = report.graphs;
    let lattices = report.lattices;

    // 1. four-way equivalence over the whole catalogue
    let oracle: Vec<usize> = (1..=N_MAX - 2).map(poset_classes_oracle).collect();
    let expected_catalogue = 1 + 1 + oracle.iter().sum::<usize>();
    c.report(
        1,
        "lattice, chain-type, Dacey and orthomodular verdicts agree",
        (|| {
            if oracle != [1, 2, 5, 16, 63] {
                return Err(format!("labelled-enumeration oracle gave {oracle:?}"));
            }
            if report.catalogue_size != expected_catalogue || expected_catalogue != 89 {
                return Err(format!("catalogue has {} posets, oracle {expected_catalogue}", report.catalogue_size));
            }
            if elapsed > RUNTIME_LIMIT {
                return Err(format!("took {elapsed:?}, limit {RUNTIME_LIMIT:?}"));
            }
            zero_failures(&report, harness::MAIN_EQUIVALENCE, 89)
                .map(|s| format!("{s}, catalogue 89 matches oracle, {:.2}s", elapsed.as_secs_f64()))
        })(),
    );

    // 2. chain iff Boolean, and the unbounded antichain
    c.report(
        2,
        "chain iff Boolean logic; two-element antichain counterexample",
        (|| {
            let s = zero_failures(&report, harness::CHAIN_BOOLEAN, 89)?;
            let antichain = Poset::parse("elements: a b").unwrap();
            let a = Analysis::new(&antichain).unwrap();
            if !a.qs.is_empty() {
                return Err("Q(antichain) is not empty".into());
            }
            if a.chain || !a.boolean() {
                return Err(format!("antichain: chain={} boolean={}", a.chain, a.boolean()));
            }
            Ok(format!("{s}; antichain has empty Q, logic of size {}, Boolean but not a chain", a.logic.len()))
        })(),
    );

    // 3. Kalmbach isomorphism on lattices
    c.report(
        3,
        "K(P) is isomorphic to the logic via f and g",
        (|| {
            if lattices != 78 {
                return Err(format!("{lattices} lattices in the catalogue, expected 78"));
            }
            zero_failures(&report, harness::KALMBACH_ISO, lattices)
        })(),
    );

    // 4. Kalmbach lattices are orthomodular
    c.report(4, "K(P) is an orthomodular lattice", zero_failures(&report, harness::KALMBACH_OML, lattices));

    // 5. Dacey iff orthomodular over Q(P) spaces and graphs
    c.report(
        5,
        "Dacey space iff orthomodular logic",
        (|| {
            let five = enumerate::enumerate_graphs(5).map_err(|e| e.to_string())?.len();
            let oracle = graph_classes_oracle(5);
            if five != 34 || oracle != 34 {
                return Err(format!("graphs on 5 vertices: {five}, oracle {oracle}"));
            }
            zero_failures(&report, harness::DACEY_OM, 89 + graphs)
                .map(|s| format!("{s} ({graphs} graphs on at most 5 vertices, 34 on exactly 5)"))
        })(),
    );

    // 6. hexagon iff not orthomodular on every ortholattice produced
    c.report(
        6,
        "no hexagon iff orthomodular",
        (|| {
            zero_failures(&report, harness::LOGIC_VALID, 89 + graphs)?;
            zero_failures(&report, harness::HEXAGON_OM, 89 + graphs + lattices)
        })(),
    );

    // 7. lemma suite, exhaustive to 6 points and sampled at 7 under two seeds
    c.report(
        7,
        "lemma suite",
        (|| {
            let per_poset = [
                harness::ENDPOINTS_COMPARABLE,
                harness::HEREDITARY,
                harness::CLOSED_ARE_LOWER,
                harness::PERP_OF_QUOTIENT,
                harness::PERP_OF_TAU_BETA,
                harness::TAU_CLOSURE,
                harness::CLOSURE_OF_QUOTIENT,
                harness::PRINCIPAL_DACEY,
                harness::TOUCHING_MERGE,
                harness::CHAIN_TYPE_DACEY,
            ];
            let per_space = [harness::DACEY_UNION, harness::DACEY_CHARACTERISATION];
            for r in [&report, &other_seed] {
                for check in per_poset {
                    zero_failures(r, check, 89)?;
                }
                zero_failures(r, harness::NONORTHOGONAL_MERGE, lattices)?;
                for check in per_space {
                    zero_failures(r, check, 89 + graphs)?;
                }
                zero_failures(r, harness::COVERAGE, 1)?;
            }
            Ok(format!("{} lemma checks clean under seeds 0 and 1", per_poset.len() + per_space.len() + 1))
        })(),
    );

    // 8. worked examples
    c.report(
        8,
        "worked examples match golden files",
        (|| {
            let path = OrthoSpace::parse("points: a b c d\nedges: a-b, b-c, c-d").unwrap();
            compare("path_space.json", space_summary(&path))?;
            let edge = OrthoSpace::parse("points: a b\nedges: a-b").unwrap();
            compare("edge_space.json", space_summary(&edge))?;
            let n = Poset::parse("elements: 0 a b c d 1\ncovers: 0<a, 0<b, a<c, a<d, b<c, b<d, c<1, d<1").unwrap();
            compare("n_poset.json", n_summary(&n))?;
            let qs = QuotientSpace::new(&n).unwrap();
            if qs.space().logic().len() < 2 {
                return Err("degenerate logic for N".into());
            }
            Ok("path space hexagon, edge space Boolean algebra, N witness (τ(I), {[0<a]})".into())
        })(),
    );

    // 9. negative controls
    c.report(
        9,
        "mutations are detected",
        (|| {
            let mut notes = Vec::new();
            for mutation in [Mutation::FlipAdjacency, Mutation::Orthocomplement] {
                let r = harness::run(&HarnessConfig { mutation, ..cfg.clone() }).map_err(|e| e.to_string())?;
                if r.is_clean() {
                    return Err(format!("{mutation:?} produced no discrepancy"));
                }
                notes.push(format!("{mutation:?}: {}", r.discrepancies.len()));
            }
            Ok(notes.join(", "))
        })(),
    );

    println!("{}", report.verdict());
    if c.failed == 0 {
        println!("acceptance: 9 of 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of 9 criteria fail", c.failed);
        ExitCode::FAILURE
    }
}
