use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use orthologic::enumerate::{self, DEFAULT_CAP, MAX_CAP};
use orthologic::harness::{self, HarnessConfig, Mutation};
use orthologic::kalmbach::{self, KalmbachLattice};
use orthologic::quotient::{Analysis, QuotientSpace};
use orthologic::{Bits, Logic, OrthoSpace, Poset};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "orthologic", version, about = "Orthogonality spaces of quotients of finite posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide lattice, chain-type, Dacey, orthomodular and Boolean properties
    Classify(Common),
    /// The logic of orthoclosed sets of Q(P), or of a space given with --space
    Logic {
        #[command(flatten)]
        common: Common,
        /// Read an orthogonality space (`points:` / `edges:`) instead of a poset
        #[arg(long)]
        space: bool,
    },
    /// The lattice of even chains, with the correspondence table for lattices
    Kalmbach(Common),
    /// The Dedekind-MacNeille completion and its image under tau
    Macneille(Common),
    /// Check every theorem over all small bounded posets and graphs
    Harness(HarnessArgs),
    /// Only the failure witnesses, or "none"
    Witness(Common),
}

#[derive(Args)]
struct Common {
    /// Poset file in the `elements:` / `covers:` format
    #[arg(long, short, conflicts_with = "text", required_unless_present = "text")]
    input: Option<PathBuf>,
    /// Inline description; `;` separates sections
    #[arg(long, short)]
    text: Option<String>,
    /// Write to a file instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, short, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct HarnessArgs {
    /// Largest poset size to check
    #[arg(long, default_value_t = DEFAULT_CAP)]
    max: usize,
    /// Seed for the sampled lemma checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest graph size to check
    #[arg(long, default_value_t = 5)]
    graphs: usize,
    /// Exit with status 3 if anything fails
    #[arg(long)]
    strict: bool,
    /// Corrupt every structure on purpose: flip-adjacency or orthocomplement
    #[arg(long, default_value = "none")]
    mutate: Mutation,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, short, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

enum Failure {
    Usage(anyhow::Error),
    Io(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify(c) => {
            no_dot(&c, "classify")?;
            let a = analyse(&read_poset(&c)?)?;
            let out = match c.format {
                Format::Json => pretty(&a.report()),
                _ => classify_text(&a),
            };
            emit(&c.output, &out)?;
        }
        Command::Logic { common: c, space } => {
            let text = read_input(&c)?;
            let out = if space {
                let s = OrthoSpace::parse(&text).map_err(|e| anyhow!(e))?;
                let logic = s.logic();
                let labels: Vec<String> = logic.sets().iter().map(|&x| braces(&s.set_labels(x))).collect();
                logic_output(&logic, &labels, &[], c.format)
            } else {
                let a = analyse(&parse_poset(&text)?)?;
                let labels: Vec<String> = a.logic.sets().iter().map(|&x| a.qs.display_set(x)).collect();
                let quotients: Vec<String> = (0..a.qs.len()).map(|q| a.qs.label(q).to_string()).collect();
                match c.format {
                    Format::Dot => a.qs.logic_dot(&a.logic),
                    f => logic_output(&a.logic, &labels, &quotients, f),
                }
            };
            emit(&c.output, &out)?;
        }
        Command::Kalmbach(c) => {
            let p = read_poset(&c)?;
            let k = KalmbachLattice::new(&p).map_err(|e| anyhow!(e))?;
            let out = match c.format {
                Format::Dot => k.to_dot(),
                f => kalmbach_output(&p, &k, f)?,
            };
            emit(&c.output, &out)?;
        }
        Command::Macneille(c) => {
            let p = read_poset(&c)?;
            let comp = p.macneille();
            let out = match c.format {
                Format::Dot => comp.to_dot(&p),
                f => macneille_output(&p, f)?,
            };
            emit(&c.output, &out)?;
        }
        Command::Witness(c) => {
            no_dot(&c, "witness")?;
            let a = analyse(&read_poset(&c)?)?;
            let out = match c.format {
                Format::Json => pretty(&a.report().witnesses),
                _ => witness_text(&a),
            };
            emit(&c.output, &out)?;
        }
        Command::Harness(h) => return harness(h),
    }
    Ok(0)
}

fn no_dot(c: &Common, cmd: &str) -> Result<(), Failure> {
    if c.format == Format::Dot {
        return Err(anyhow!("`{cmd}` has no dot output; use json or text").into());
    }
    Ok(())
}

fn read_input(c: &Common) -> Result<String, Failure> {
    match (&c.input, &c.text) {
        (Some(path), _) => {
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::Io)
        }
        (None, Some(text)) => Ok(text.clone()),
        (None, None) => Err(anyhow!("either --input or --text is required").into()),
    }
}

fn parse_poset(text: &str) -> Result<Poset, Failure> {
    Poset::parse(text).map_err(|e| anyhow!(e).context("malformed poset").into())
}

fn read_poset(c: &Common) -> Result<Poset, Failure> {
    parse_poset(&read_input(c)?)
}

fn analyse(p: &Poset) -> Result<Analysis, Failure> {
    Ok(Analysis::new(p).map_err(|e| anyhow!(e))?)
}

fn emit(path: &Option<PathBuf>, out: &str) -> Result<(), Failure> {
    let mut out = out.to_string();
    if !out.ends_with('\n') {
        out.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, out).with_context(|| format!("writing {}", p.display())).map_err(Failure::Io),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn braces(items: &[String]) -> String {
    if items.is_empty() {
        return "∅".to_string();
    }
    format!("{{{}}}", items.join(", "))
}

fn bracketed(qs: &QuotientSpace, xs: Bits) -> String {
    let items: Vec<String> = qs.set_labels(xs).iter().map(|l| format!("[{l}]")).collect();
    braces(&items)
}

fn classify_text(a: &Analysis) -> String {
    let r = a.report();
    let mut s = String::new();
    let _ = writeln!(s, "{}", r.poset.trim_end());
    for (name, v) in [
        ("bounded", r.bounded),
        ("lattice", r.lattice),
        ("chain", r.chain),
        ("chain type", r.chain_type),
        ("dacey", r.dacey),
        ("orthomodular", r.orthomodular),
        ("boolean", r.boolean),
        ("hexagon", r.hexagon),
    ] {
        let _ = writeln!(s, "{name}: {v}");
    }
    let _ = writeln!(s, "quotients: {}", r.q_size);
    let _ = writeln!(s, "orthoclosed sets: {}", r.logic_size);
    s.push_str(&witness_text(a));
    s
}

fn witness_text(a: &Analysis) -> String {
    let qs = &a.qs;
    let p = qs.poset();
    let mut lines = Vec::new();
    if let Some(i) = a.nonlattice_ideal {
        lines.push(format!("closed ideal with several maxima: {}", braces(&p.set_labels(i))));
    }
    if let Some(x) = a.non_chain_type {
        lines.push(format!("orthoclosed set not of chain type: {}", bracketed(qs, x)));
    }
    if let Some((x, b)) = a.non_dacey {
        lines.push(format!("non-dacey set: {} with basis {}", bracketed(qs, x), bracketed(qs, b)));
    }
    if let Some(h) = a.hexagon {
        let els: Vec<String> = h.elements().iter().map(|&e| bracketed(qs, a.logic.set(e))).collect();
        lines.push(format!("hexagon: {}", els.join(" ")));
    }
    if let Some((x, y)) = a.orthomodular_failure {
        lines.push(format!(
            "orthomodular law fails at {} ≤ {}",
            bracketed(qs, a.logic.set(x)),
            bracketed(qs, a.logic.set(y))
        ));
    }
    if let Some((x, y)) = a.non_boolean {
        lines.push(format!(
            "disjoint but not orthogonal: {} and {}",
            bracketed(qs, a.logic.set(x)),
            bracketed(qs, a.logic.set(y))
        ));
    }
    if lines.is_empty() {
        "none\n".to_string()
    } else {
        lines.join("\n") + "\n"
    }
}

fn logic_output(logic: &Logic, labels: &[String], quotients: &[String], format: Format) -> String {
    let lat = logic.lattice();
    match format {
        Format::Json => {
            let mut v = json!({
                "elements": labels,
                "covers": lat.covers(),
                "ocompl": (0..logic.len()).map(|x| lat.ocompl(x)).collect::<Vec<_>>(),
                "bottom": lat.bottom(),
                "top": lat.top(),
            });
            if !quotients.is_empty() {
                v["quotients"] = json!(quotients);
            }
            pretty(&v)
        }
        Format::Dot => logic.to_dot(labels),
        Format::Text => {
            let mut s = String::new();
            for (i, l) in labels.iter().enumerate() {
                let _ = writeln!(s, "{i}: {l}  ⊥ {}", lat.ocompl(i));
            }
            s
        }
    }
}

fn kalmbach_output(p: &Poset, k: &KalmbachLattice, format: Format) -> Result<String, Failure> {
    let labels = k.labels();
    let table = if p.is_lattice() {
        let qs = QuotientSpace::new(p).map_err(|e| anyhow!(e))?;
        let logic = qs.space().logic();
        Some(kalmbach::verify_isomorphism(k, &qs, &logic).map_err(|e| anyhow!(e))?)
    } else {
        None
    };
    let lat = k.ortholattice().ok();
    if format == Format::Json {
        return Ok(pretty(&json!({
            "elements": labels,
            "covers": k.covers(),
            "ocompl": (0..k.len()).map(|x| k.ocompl(x)).collect::<Vec<_>>(),
            "lattice": lat.is_some(),
            "orthomodular": lat.as_ref().map(|l| l.is_orthomodular()),
            "isomorphism": table,
        })));
    }
    let mut s = String::new();
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(s, "{i}: {l}  ⊥ {}", k.ocompl(i));
    }
    match &lat {
        Some(l) => {
            let _ = writeln!(s, "orthomodular: {}", l.is_orthomodular());
        }
        None => s.push_str("the block order is not a lattice\n"),
    }
    if let Some(rows) = table {
        s.push_str("correspondence:\n");
        for r in rows {
            let _ = writeln!(s, "  {} ↦ {}", r.chain, braces(&r.set));
        }
    }
    Ok(s)
}

fn macneille_output(p: &Poset, format: Format) -> Result<String, Failure> {
    let comp = p.macneille();
    let ideals: Vec<Vec<String>> = comp.ideals.iter().map(|&i| p.set_labels(i)).collect();
    let image: Option<Vec<Vec<String>>> = if p.is_bounded() {
        let qs = QuotientSpace::new(p).map_err(|e| anyhow!(e))?;
        let logic = qs.space().logic();
        let img = kalmbach::macneille_embedding(&qs, &comp, &logic).map_err(|e| anyhow!(e))?;
        Some(img.iter().map(|&x| qs.set_labels(logic.set(x))).collect())
    } else {
        None
    };
    if format == Format::Json {
        let embedding: serde_json::Map<String, Value> =
            (0..p.len()).map(|x| (p.label(x).to_string(), json!(comp.embedding[x]))).collect();
        return Ok(pretty(&json!({
            "ideals": ideals,
            "covers": comp.covers(),
            "embedding": embedding,
            "surjective": comp.is_embedding_surjective(),
            "tau": image,
        })));
    }
    let mut s = String::new();
    for (i, ideal) in ideals.iter().enumerate() {
        let _ = write!(s, "{i}: {}", braces(ideal));
        if let Some(img) = &image {
            let _ = write!(s, "  ↦ {}", braces(&img[i]));
        }
        s.push('\n');
    }
    let _ = writeln!(s, "embedding is onto: {}", comp.is_embedding_surjective());
    Ok(s)
}

fn cap() -> Result<usize, Failure> {
    match std::env::var("ORTHOLOGIC_CAP") {
        Ok(v) => {
            let cap: usize = v.trim().parse().map_err(|_| anyhow!("ORTHOLOGIC_CAP must be a number, got `{v}`"))?;
            if cap > MAX_CAP {
                return Err(anyhow!("ORTHOLOGIC_CAP may be at most {MAX_CAP}").into());
            }
            Ok(cap)
        }
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn harness(h: HarnessArgs) -> Result<u8, Failure> {
    if h.format == Format::Dot {
        return Err(anyhow!("`harness` has no dot output; use json or text").into());
    }
    let cap = cap()?;
    if h.max > cap {
        return Err(anyhow!(orthologic::Error::CapExceeded { n: h.max, cap })
            .context("raise ORTHOLOGIC_CAP to go further")
            .into());
    }
    if h.max >= 8 {
        eprintln!("warning: checking posets with {} points takes a long time", h.max);
    }
    if h.graphs > enumerate::GRAPH_CAP {
        return Err(anyhow!("--graphs may be at most {}", enumerate::GRAPH_CAP).into());
    }
    let cfg = HarnessConfig { n_max: h.max, cap, seed: h.seed, graph_max: h.graphs, mutation: h.mutate, ..Default::default() };
    let report = harness::run(&cfg).map_err(|e| anyhow!(e))?;
    let out = match h.format {
        Format::Json => report.to_json(),
        _ => report.to_string(),
    };
    emit(&h.output, &out)?;
    Ok(if h.strict && !report.is_clean() { 3 } else { 0 })
}
