use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use kcrit::bounds::{self, BoundReport};
use kcrit::coloring::{self, CriticalityObstruction, ForcingRelation};
use kcrit::constructions::{self, GkFamily};
use kcrit::graph::io;
use kcrit::ore::{self, Recognition};
use kcrit::potential::{self, Mode};
use kcrit::search::{self, FigureQuery};
use kcrit::{Graph, Limits, VertexSet, VertexSplit};

#[derive(Parser)]
#[command(name = "kcrit", version, about = "Sparse k-critical graphs: potentials, Ore recognition, constructions, bounds")]
struct Cli {
    /// Emit exactly one JSON document on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Accepted for scripting; no current subcommand samples.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Graph format for input and output; input is auto-detected otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<GraphFormat>,
    /// Print coloring certificates.
    #[arg(long, global = true)]
    witness: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    EdgeList,
    Graph6,
}

impl GraphFormat {
    fn io(self) -> io::Format {
        match self {
            GraphFormat::EdgeList => io::Format::EdgeList,
            GraphFormat::Graph6 => io::Format::Graph6,
        }
    }
}

#[derive(Args)]
struct Input {
    /// Graph file; stdin when absent or `-`.
    file: Option<PathBuf>,
}

#[derive(Args)]
struct KInput {
    #[arg(short, long)]
    k: usize,
    #[command(flatten)]
    input: Input,
}

#[derive(Subcommand)]
enum Cmd {
    /// k-potential of the whole graph, of a set, or its minima.
    Potential {
        #[command(flatten)]
        g: KInput,
        /// Comma-separated vertex set; only its potential is reported.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
    },
    /// Chromatic number.
    Chi {
        #[command(flatten)]
        input: Input,
    },
    /// k-criticality test. Exit 1 if not k-critical.
    Critical {
        #[command(flatten)]
        g: KInput,
    },
    /// k-Ore recognition. Exit 1 if not k-Ore.
    Recognize {
        #[command(flatten)]
        g: KInput,
    },
    /// Ore decomposition. Exit 1 if not k-Ore.
    Decompose {
        #[command(flatten)]
        g: KInput,
        /// Indented tree instead of a summary.
        #[arg(long)]
        tree: bool,
    },
    /// DHGO composition of two graphs.
    Compose {
        first: PathBuf,
        second: PathBuf,
        /// Edge `x,y` of the first graph.
        #[arg(long, value_parser = parse_pair)]
        edge: (usize, usize),
        /// Vertex of the second graph to split.
        #[arg(long)]
        split: usize,
        /// Neighbors of the split vertex that go to `x`; the rest go to `y`.
        #[arg(long, value_delimiter = ',', required = true)]
        to_x: Vec<usize>,
    },
    /// Generators.
    #[command(subcommand)]
    Gen(Gen),
    /// Edge-count bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// How all c-colorings treat a vertex pair.
    Forcing {
        #[arg(short, long)]
        c: usize,
        #[arg(short, long)]
        a: usize,
        #[arg(short, long)]
        b: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Classes of low vertices with equal closed neighborhoods.
    Clusters {
        #[command(flatten)]
        g: KInput,
    },
    /// Standard sets of a k-critical graph.
    StandardSets {
        #[command(flatten)]
        g: KInput,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Chain of j copies of K_k.
    Gallai {
        #[arg(short, long)]
        k: usize,
        #[arg(short, long)]
        j: usize,
    },
    /// Two K_{k-1} joined through t cross pairs and a hub.
    Hkt {
        #[arg(short, long)]
        k: usize,
        #[arg(short, long)]
        t: usize,
    },
    /// Iterated Toft extension.
    Gk {
        #[arg(short, long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        steps: usize,
    },
    /// K_{k+1} minus a triangle with a K_{k-1} matched onto the triangle.
    TriangleSplit {
        #[arg(short, long)]
        k: usize,
        /// Three part sizes summing to k-1, e.g. 2,1,1
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<usize>,
    },
    /// Exhaustive search for k-critical graphs of given order and size.
    Search {
        #[arg(short, long)]
        k: usize,
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        m: Option<usize>,
        #[arg(long)]
        three_connected: bool,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// TSV of n, F(k,n), Gallai value, known exact value and cases.
    Table {
        #[arg(short, long)]
        k: usize,
        #[arg(long)]
        n_from: usize,
        #[arg(long)]
        n_to: usize,
    },
    /// Checks a graph against every applicable bound. Exit 1 on a violation.
    Verify {
        #[command(flatten)]
        g: KInput,
    },
    /// Repeated composition with K_k. Exit 1 if an increment is off.
    Recurrence {
        #[arg(short, long)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        steps: usize,
        /// Base graph; K_k when absent.
        file: Option<PathBuf>,
    },
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected `x,y`")?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(a)?, num(b)?))
}

/// The math said no.
struct No;

struct Ctx {
    json: bool,
    witness: bool,
    format: Option<GraphFormat>,
}

impl Ctx {
    fn read(&self, path: Option<&PathBuf>) -> Result<Graph> {
        let text = match path {
            Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
            _ => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
                s
            }
        };
        let g = io::parse(&text, self.format.map(GraphFormat::io))?;
        Ok(g)
    }

    fn emit<T: Serialize>(&self, value: &T, human: impl FnOnce() -> String) -> Result<()> {
        let mut out = std::io::stdout().lock();
        if self.json {
            serde_json::to_writer_pretty(&mut out, value)?;
            writeln!(out)?;
        } else {
            write!(out, "{}", human())?;
        }
        Ok(())
    }

    fn graph_text(&self, g: &Graph) -> String {
        match self.format.unwrap_or(GraphFormat::EdgeList) {
            GraphFormat::EdgeList => io::to_edge_list(g),
            GraphFormat::Graph6 => format!("{}\n", io::to_graph6(g)),
        }
    }

    fn emit_graph(&self, g: &Graph) -> Result<()> {
        let doc = json!({
            "n": g.n(),
            "m": g.m(),
            "graph6": io::to_graph6(g),
            "labels": g.labels(),
            "edges": g.edges(),
        });
        self.emit(&doc, || self.graph_text(g))
    }
}

fn verdict(ok: bool) -> Result<Option<No>> {
    Ok((!ok).then_some(No))
}

fn run(cli: Cli) -> Result<Option<No>> {
    if let Ok(spec) = std::env::var("KCRIT_LIMITS") {
        Limits::set(Limits::get().with_overrides(&spec)?);
    }
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    let ctx = Ctx {
        json: cli.json,
        witness: cli.witness,
        format: cli.format,
    };
    match cli.cmd {
        Cmd::Potential { g, set } => {
            let graph = ctx.read(g.input.file.as_ref())?;
            if let Some(set) = set {
                for &v in &set {
                    if v >= graph.n() {
                        bail!("vertex {v} out of range for a graph on {} vertices", graph.n());
                    }
                }
                let s: VertexSet = set.iter().copied().collect();
                let value = potential::rho(&graph, g.k, &s)?;
                ctx.emit(&json!({ "k": g.k, "set": s, "rho": value }), || format!("{value}\n"))?;
            } else {
                let mode = if graph.n() >= 3 { Mode::ProperNontrivial } else { Mode::AllNonempty };
                let r = potential::min_potential(&graph, g.k, mode)?;
                ctx.emit(&r, || {
                    let tilde = r.p_tilde.map_or("-".to_string(), |p| p.to_string());
                    format!("rho\t{}\nP_k\t{}\nP~_k\t{}\n", r.rho_full, r.p_k, tilde)
                })?;
            }
            Ok(None)
        }
        Cmd::Chi { input } => {
            let g = ctx.read(input.file.as_ref())?;
            let chi = coloring::chromatic_number(&g)?;
            let cert = if ctx.witness && chi > 0 { coloring::colorable(&g, chi)?.into_witness() } else { None };
            ctx.emit(&json!({ "chi": chi, "witness": cert }), || match &cert {
                Some(c) => format!("{chi}\n{}\n", join(c.as_slice())),
                None => format!("{chi}\n"),
            })?;
            Ok(None)
        }
        Cmd::Critical { g } => {
            let graph = ctx.read(g.input.file.as_ref())?;
            let mut r = coloring::check_critical(&graph, g.k)?;
            if !ctx.witness {
                r.per_edge.clear();
            }
            ctx.emit(&r, || {
                let mut s = if r.is_critical {
                    format!("{}-critical\n", g.k)
                } else {
                    let why = match &r.obstruction {
                        Some(CriticalityObstruction::Colorable { .. }) => format!("{}-colorable", g.k - 1),
                        Some(CriticalityObstruction::RedundantEdge { edge }) => {
                            format!("edge {} {} is not critical", edge.0, edge.1)
                        }
                        Some(CriticalityObstruction::IsolatedVertex { vertex }) => format!("vertex {vertex} is isolated"),
                        None => "unknown".into(),
                    };
                    format!("not {}-critical: {why}\n", g.k)
                };
                if let Some(CriticalityObstruction::Colorable { coloring }) = &r.obstruction {
                    if ctx.witness {
                        s.push_str(&format!("{}\n", join(coloring.as_slice())));
                    }
                }
                for w in &r.per_edge {
                    s.push_str(&format!("{} {}\t{}\n", w.edge.0, w.edge.1, join(w.coloring.as_slice())));
                }
                s
            })?;
            verdict(r.is_critical)
        }
        Cmd::Recognize { g } => {
            let graph = ctx.read(g.input.file.as_ref())?;
            let r = ore::recognize(&graph, g.k)?;
            ctx.emit(&r, || match &r {
                Recognition::Yes(d) => format!("yes ({} copies of K_{})\n", d.tree.leaves(), g.k),
                Recognition::No(rej) => format!("no (step {}, depth {}): {}\n", rej.step, rej.depth, rej.reason),
            })?;
            verdict(r.is_yes())
        }
        Cmd::Decompose { g, tree } => {
            let graph = ctx.read(g.input.file.as_ref())?;
            let r = ore::recognize(&graph, g.k)?;
            ctx.emit(&r, || match &r {
                Recognition::Yes(d) if tree => d.tree.pretty(),
                Recognition::Yes(d) => format!("leaves\t{}\ndepth\t{}\n", d.tree.leaves(), d.tree.depth()),
                Recognition::No(rej) => format!("not {}-Ore (step {}): {}\n", g.k, rej.step, rej.reason),
            })?;
            verdict(r.is_yes())
        }
        Cmd::Compose {
            first,
            second,
            edge,
            split,
            to_x,
        } => {
            let g1 = ctx.read(Some(&first))?;
            let g2 = ctx.read(Some(&second))?;
            if split >= g2.n() {
                bail!("split vertex {split} out of range for a graph on {} vertices", g2.n());
            }
            let first: VertexSet = to_x.iter().copied().collect();
            let rest: Vec<usize> = g2.neighbors(split).iter().filter(|v| !first.contains(*v)).collect();
            let out = ore::compose(&g1, edge, &g2, &VertexSplit::new(split, to_x, rest))?;
            ctx.emit_graph(&out)?;
            Ok(None)
        }
        Cmd::Gen(gen) => run_gen(&ctx, gen),
        Cmd::Bounds(b) => run_bounds(&ctx, b),
        Cmd::Forcing { c, a, b, input } => {
            let g = ctx.read(input.file.as_ref())?;
            let mut r = coloring::forcing(&g, c, a, b)?;
            if !ctx.witness {
                r.equal_witness = None;
                r.distinct_witness = None;
            }
            ctx.emit(&r, || {
                let name = match r.relation {
                    ForcingRelation::AlwaysEqual => "always-equal",
                    ForcingRelation::AlwaysDistinct => "always-distinct",
                    ForcingRelation::Free => "free",
                    ForcingRelation::Uncolorable => "uncolorable",
                };
                let mut s = format!("{name}\n");
                for (tag, w) in [("equal", &r.equal_witness), ("distinct", &r.distinct_witness)] {
                    if let Some(w) = w {
                        s.push_str(&format!("{tag}\t{}\n", join(w.as_slice())));
                    }
                }
                s
            })?;
            Ok(None)
        }
        Cmd::Clusters { g } => {
            let graph = ctx.read(g.input.file.as_ref())?;
            let cs = coloring::clusters(&graph, g.k);
            ctx.emit(&cs, || cs.iter().map(|c| format!("{}\n", join(&c.to_vec()))).collect())?;
            Ok(None)
        }
        Cmd::StandardSets { g } => {
            let graph = ctx.read(g.input.file.as_ref())?;
            let sets = coloring::find_standard_sets(&graph, g.k)?;
            ctx.emit(&sets, || {
                sets.iter()
                    .map(|s| format!("{} {}\t{}\n", s.x, s.y, join(&s.set.to_vec())))
                    .collect()
            })?;
            Ok(None)
        }
    }
}

fn run_gen(ctx: &Ctx, gen: Gen) -> Result<Option<No>> {
    let g = match gen {
        Gen::Gallai { k, j } => constructions::gallai_chain(k, j)?,
        Gen::Hkt { k, t } => constructions::hkt(k, t)?,
        Gen::Gk { k, steps } => GkFamily::new(k)?.nth(steps).expect("family is unbounded")?,
        Gen::TriangleSplit { k, parts } => {
            let [a, b, c] = parts[..] else {
                bail!("--parts takes exactly three sizes");
            };
            constructions::triangle_split(k, (a, b, c))?
        }
        Gen::Search {
            k,
            n,
            m,
            three_connected,
        } => {
            let q = FigureQuery {
                k,
                n,
                m,
                three_connected,
            };
            let found = search::find_figure_graphs(&q)?;
            let codes: Vec<String> = found.graphs.iter().map(io::to_graph6).collect();
            let doc = json!({ "query": q, "count": codes.len(), "graphs": codes, "stats": found.stats });
            ctx.emit(&doc, || found.graphs.iter().map(|g| ctx.graph_text(g)).collect())?;
            return verdict(!found.graphs.is_empty());
        }
    };
    ctx.emit_graph(&g)?;
    Ok(None)
}

fn run_bounds(ctx: &Ctx, b: BoundsCmd) -> Result<Option<No>> {
    match b {
        BoundsCmd::Table { k, n_from, n_to } => {
            let rows = bounds::table(k, n_from, n_to)?;
            ctx.emit(&rows, || {
                let mut s = String::from("n\tF\tgallai\texact\tcases\n");
                for r in &rows {
                    let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
                    let cases = if r.cases.is_empty() { "-".to_string() } else { r.cases.join(",") };
                    s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", r.n, r.f, opt(r.gallai), opt(r.exact), cases));
                }
                s
            })?;
            Ok(None)
        }
        BoundsCmd::Verify { g } => {
            let graph = ctx.read(g.input.file.as_ref())?;
            let r = bounds::verify_graph(&graph, g.k)?;
            ctx.emit(&r, || describe_report(&r))?;
            verdict(r.consistent())
        }
        BoundsCmd::Recurrence { k, steps, file } => {
            let base = match file {
                Some(p) => ctx.read(Some(&p))?,
                None => Graph::complete(k),
            };
            let s = bounds::check_ore_recurrence(k, &base, steps)?;
            ctx.emit(&s, || {
                let mut out = format!("expected increment {}\n", s.expected_increment);
                for st in &s.steps {
                    let inc = st.increment.map_or("-".to_string(), |d| d.to_string());
                    let crit = st.critical.map_or("?", |c| if c { "critical" } else { "NOT critical" });
                    out.push_str(&format!("n={}\tm={}\t+{inc}\t{crit}\n", st.n, st.m));
                }
                if let Some(t) = &s.truncated {
                    out.push_str(&format!("stopped: {t}\n"));
                }
                out
            })?;
            verdict(s.holds())
        }
    }
}

fn describe_report(r: &BoundReport) -> String {
    let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
    let flag = |v: Option<bool>| v.map_or("-", |b| if b { "yes" } else { "NO" });
    format!(
        "k\t{}\nn\t{}\nm\t{}\nF(k,n)\t{}\nrho\t{}\ny_k\t{}\ncritical\t{}\nore\t{}\nmeets F\t{}\nextremal\t{}\nrho <= y_k\t{}\ntight\t{}\n",
        r.k,
        r.n,
        r.m,
        opt(r.f_kn),
        r.rho_full,
        r.y_k,
        r.is_critical,
        r.is_ore,
        flag(r.verdicts.meets_f),
        r.verdicts.is_extremal,
        flag(r.verdicts.non_ore_bound_ok),
        flag(r.verdicts.non_ore_tight),
    )
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(No)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
