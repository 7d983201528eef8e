use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boxloop::complexes::io::{parse_complex, parse_poset, write_complex, write_poset};
use boxloop::complexes::{
    box_complex, box_complex_bigraph, clique_complex, hom_complex, neighborhood_complex,
    order_complex, Poset, SimplicialComplex,
};
use boxloop::graph::io::{parse_graph, write_bigraph, write_graph, GraphFile};
use boxloop::graph::{
    interval_bigraph, kronecker_cover, standard_graph, Bigraph, Graph, OddInvolution, StandardKind,
    Vertex,
};
use boxloop::loop_spaces::{stabilize, TowerSource};
use boxloop::topology::{abelianization, edge_path_presentation, homology, stong_core};
use boxloop::two_fundamental::{even_loops, format_loop, pi2_even_classes, census_level, Move2Convention};
use boxloop::verify::{load_manifest, parse_claims, reflection_involution, run_suite, Budgets};
use boxloop::{Caps, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "boxloop", version, about = "Box complexes, loop-space towers and their checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a poset or complex file from graph or poset files.
    Build(BuildArgs),
    /// Homology, components or fundamental group of a complex or poset file.
    Inv(InvArgs),
    /// Build a loop-space tower and report stabilization.
    Tower(TowerArgs),
    /// Census of even loop classes at a basepoint.
    Loops(LoopsArgs),
    /// Run the claim checks over a corpus manifest.
    Verify(VerifyArgs),
    /// Write a standard graph or bigraph file.
    Gen(GenArgs),
}

#[derive(Args, Clone, Default)]
struct CapArgs {
    /// Vertex bound for exponential graphs and loop-space levels.
    #[arg(long)]
    cap_exponential: Option<usize>,
    /// Element bound for Hom and box posets.
    #[arg(long)]
    cap_poset: Option<usize>,
    /// Simplex bound when a complex is expanded into faces.
    #[arg(long)]
    cap_faces: Option<usize>,
    /// Size bound for isomorphism searches.
    #[arg(long)]
    cap_iso: Option<usize>,
    /// Edge bound when a level is turned into a graph.
    #[arg(long)]
    cap_edges: Option<usize>,
}

impl CapArgs {
    fn resolve(&self, base: Caps) -> Caps {
        Caps {
            exponential_vertices: self.cap_exponential.unwrap_or(base.exponential_vertices),
            poset_elements: self.cap_poset.unwrap_or(base.poset_elements),
            complex_faces: self.cap_faces.unwrap_or(base.complex_faces),
            iso_vertices: self.cap_iso.unwrap_or(base.iso_vertices),
            level_edges: self.cap_edges.unwrap_or(base.level_edges),
        }
    }
}

fn caps_banner(c: &Caps) -> String {
    format!(
        "cap-exponential={} cap-poset={} cap-faces={} cap-iso={} cap-edges={}",
        c.exponential_vertices, c.poset_elements, c.complex_faces, c.iso_vertices, c.level_edges
    )
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    /// B(G) of a graph.
    Box,
    /// B_{/K₂}(X) of a bigraph.
    Boxb,
    /// Hom(T, G); takes two graph files.
    Hom,
    /// N(G).
    Nbhd,
    /// Clique complex of the looped part.
    Clique,
    /// Order complex of a poset file.
    Order,
    /// Stong core of a poset file.
    Core,
}

#[derive(Args)]
struct BuildArgs {
    kind: BuildKind,
    #[arg(required = true, num_args = 1..=2)]
    inputs: Vec<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum InvKind {
    Homology,
    Pi0,
    Pi1,
}

#[derive(Args)]
struct InvArgs {
    kind: InvKind,
    /// A complex (`facet` lines) or poset (`el`/`cov` lines) file.
    input: PathBuf,
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    /// Basepoint label for pi1; the first vertex when absent.
    #[arg(long)]
    base: Option<String>,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TowerKind {
    Omega,
    Free,
    Twisted,
    Cycle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Parity {
    Even,
    Odd,
}

#[derive(Args)]
struct TowerArgs {
    kind: TowerKind,
    /// A plain graph (towers run over K₂ × G) or a bigraph file.
    #[arg(long)]
    graph: PathBuf,
    /// Last level built.
    #[arg(long, default_value_t = 4)]
    levels: usize,
    #[arg(long, default_value_t = 2)]
    window: usize,
    /// Per-component homology up to this dimension; 0 compares components only.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Basepoint for omega.
    #[arg(long)]
    base: Option<String>,
    /// Neighbor of the basepoint for omega.
    #[arg(long)]
    neighbor: Option<String>,
    #[arg(long, value_enum, default_value = "even")]
    parity: Parity,
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct LoopsArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    base: Option<String>,
    /// Longest even loop in the census.
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    /// Let move (2) also pair equal positions.
    #[arg(long)]
    move2_reflexive: bool,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value = "all")]
    claims: String,
    /// Directory for `report.txt` and evidence files.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long)]
    census_len: Option<usize>,
    #[arg(long)]
    census_max_len: Option<usize>,
    #[arg(long)]
    omega_levels: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    cycle_levels: Option<usize>,
    #[arg(long)]
    fiber_level: Option<usize>,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    /// K_n.
    Complete,
    /// C_n.
    Cycle,
    /// Reflexive path I_n.
    Interval,
    /// Path on n vertices.
    Path,
    /// Star with n leaves.
    Star,
    /// L_{a,b}; takes `a b`.
    Lab,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(required = true, num_args = 1..=2, allow_negative_numbers = true)]
    params: Vec<i64>,
    /// Write the Kronecker cover K₂ × G instead.
    #[arg(long)]
    kronecker: bool,
    #[arg(long)]
    name: Option<String>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn banner(text: &str) {
    eprintln!("# config: {text}");
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<GraphFile, Failure> {
    Ok(parse_graph(&read(path)?)?)
}

/// A complex file, or a poset file read through its order complex.
fn load_complex(path: &Path, caps: &Caps) -> Result<SimplicialComplex, Failure> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.starts_with("el ") {
        Ok(order_complex(&parse_poset(&text)?, caps)?)
    } else {
        Ok(parse_complex(&text)?)
    }
}

fn load_poset(path: &Path) -> Result<Poset, Failure> {
    Ok(parse_poset(&read(path)?)?)
}

fn cmd_build(a: &BuildArgs) -> CmdResult {
    let caps = a.caps.resolve(Caps::default());
    let kind = a.kind.to_possible_value().unwrap().get_name().to_string();
    banner(&format!("build {kind} {}", caps_banner(&caps)));
    let want = if matches!(a.kind, BuildKind::Hom) { 2 } else { 1 };
    if a.inputs.len() != want {
        return Err(Failure::Usage(format!("build {kind} takes {want} input file(s)")));
    }
    let text = match a.kind {
        BuildKind::Box => write_poset(&box_complex(&load_graph(&a.inputs[0])?.graph, &caps)?.0),
        BuildKind::Boxb => {
            let f = load_graph(&a.inputs[0])?;
            let x = match f.colors {
                Some(_) => f.bigraph()?,
                None => kronecker_cover(&f.graph).0,
            };
            write_poset(&box_complex_bigraph(&x, None, &caps)?.0)
        }
        BuildKind::Hom => {
            let t = load_graph(&a.inputs[0])?.graph;
            let g = load_graph(&a.inputs[1])?.graph;
            write_poset(&hom_complex(&t, &g, &caps)?)
        }
        BuildKind::Nbhd => write_complex(&neighborhood_complex(&load_graph(&a.inputs[0])?.graph)),
        BuildKind::Clique => write_complex(&clique_complex(&load_graph(&a.inputs[0])?.graph)),
        BuildKind::Order => write_complex(&order_complex(&load_poset(&a.inputs[0])?, &caps)?),
        BuildKind::Core => write_poset(&stong_core(&load_poset(&a.inputs[0])?).0),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_inv(a: &InvArgs) -> CmdResult {
    let caps = a.caps.resolve(Caps::default());
    banner(&format!(
        "inv max-dim={} base={} {}",
        a.max_dim,
        a.base.as_deref().unwrap_or("-"),
        caps_banner(&caps)
    ));
    let k = load_complex(&a.input, &caps)?;
    let text = match a.kind {
        InvKind::Homology => homology(&k, a.max_dim, &caps)?.to_string(),
        InvKind::Pi0 => format!("pi0: {}\n", homology(&k, 0, &caps)?.components),
        InvKind::Pi1 => {
            let base = match &a.base {
                None if k.vertex_count() == 0 => {
                    return Err(Failure::Usage("pi1 of the empty complex".into()))
                }
                None => 0,
                Some(b) => k
                    .labels()
                    .iter()
                    .position(|l| l == b)
                    .ok_or_else(|| Failure::Usage(format!("unknown vertex `{b}`")))?,
            };
            let p = edge_path_presentation(&k, base, &caps)?;
            let mut out = String::new();
            if p.generators.is_empty() {
                out.push_str("trivial\n");
            } else {
                out.push_str(&p.to_string());
            }
            writeln!(out, "abelianization: {}", abelianization(&p)).unwrap();
            out
        }
    };
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn vertex_index(g: &Graph, label: &str) -> Result<usize, Failure> {
    let v: Vertex = label.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    g.index_of(&v).ok_or_else(|| Failure::Usage(format!("unknown vertex `{label}`")))
}

/// The bigraph a tower runs over and, for plain graphs, the graph itself.
fn tower_bigraph(f: &GraphFile) -> Result<(Bigraph, Option<OddInvolution>), Failure> {
    match f.colors {
        Some(_) => {
            let x = f.bigraph()?;
            let a = reflection_involution(&x);
            Ok((x, a))
        }
        None => {
            let (x, a) = kronecker_cover(&f.graph);
            Ok((x, Some(a)))
        }
    }
}

fn cmd_tower(a: &TowerArgs) -> CmdResult {
    let caps = a.caps.resolve(Caps::default());
    let f = load_graph(&a.graph)?;
    let source = match a.kind {
        TowerKind::Cycle => {
            if f.colors.is_some() {
                return Err(Failure::Usage("cycle towers take a plain graph".into()));
            }
            TowerSource::Cycle {
                g: f.graph.clone(),
                odd: a.parity == Parity::Odd,
            }
        }
        TowerKind::Free => TowerSource::FreeLoop { x: tower_bigraph(&f)?.0 },
        TowerKind::Twisted => {
            let (x, alpha) = tower_bigraph(&f)?;
            let alpha = alpha.ok_or_else(|| Failure::Usage("no odd involution for this bigraph".into()))?;
            TowerSource::TwistedLoop { x, alpha }
        }
        TowerKind::Omega => {
            let (x, _) = tower_bigraph(&f)?;
            let base = match f.colors {
                Some(_) => {
                    let v = match &a.base {
                        Some(b) => vertex_index(x.graph(), b)?,
                        None => x.part(0).first().copied().ok_or_else(|| Failure::Usage("empty bigraph".into()))?
                            as usize,
                    };
                    let w = match &a.neighbor {
                        Some(b) => vertex_index(x.graph(), b)?,
                        None => *x.graph().neighbors(v).first().ok_or_else(|| Failure::Usage("isolated basepoint".into()))?
                            as usize,
                    };
                    if x.color(v) == 0 {
                        (v as u32, w as u32)
                    } else {
                        (w as u32, v as u32)
                    }
                }
                None => {
                    let g = &f.graph;
                    let v = match &a.base {
                        Some(b) => vertex_index(g, b)?,
                        None => 0,
                    };
                    let w = match &a.neighbor {
                        Some(b) => vertex_index(g, b)?,
                        None => *g
                            .neighbors(v)
                            .first()
                            .ok_or_else(|| Failure::Usage("isolated basepoint".into()))? as usize,
                    };
                    (v as u32, (g.len() + w) as u32)
                }
            };
            TowerSource::Omega { x, base }
        }
    };
    banner(&format!(
        "tower {} graph={} levels={} window={} dim={} base={} neighbor={} parity={} {}",
        source.name(),
        f.name,
        a.levels,
        a.window,
        a.dim,
        a.base.as_deref().unwrap_or("-"),
        a.neighbor.as_deref().unwrap_or("-"),
        if a.parity == Parity::Odd { "odd" } else { "even" },
        caps_banner(&caps)
    ));
    let report = stabilize(&source, a.levels, a.window, a.dim, &caps)?;
    emit(a.out.as_deref(), &report.to_string())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_loops(a: &LoopsArgs) -> CmdResult {
    let caps = a.caps.resolve(Caps::default());
    let f = load_graph(&a.graph)?;
    let g = &f.graph;
    let v = match &a.base {
        Some(b) => vertex_index(g, b)?,
        None => 0,
    } as u32;
    let conv = if a.move2_reflexive {
        Move2Convention::Reflexive
    } else {
        Move2Convention::Loopless
    };
    banner(&format!(
        "loops graph={} base={} max-len={} move2={} {}",
        f.name,
        g.vertex(v as usize),
        a.max_len,
        if a.move2_reflexive { "reflexive" } else { "loopless" },
        caps_banner(&caps)
    ));
    let census = pi2_even_classes(g, v, a.max_len, census_level(a.max_len), &caps)?;
    let loops = even_loops(g, v, a.max_len, caps.exponential_vertices)?;
    let mut out = String::new();
    writeln!(
        out,
        "census: loops={} level={} components-hit={} level-components={}",
        census.loops, census.level, census.components_hit, census.level_components
    )
    .unwrap();
    writeln!(
        out,
        "move classes: {}",
        boxloop::verify::move_census(g, &loops, conv)
    )
    .unwrap();
    for l in census.representatives.values() {
        writeln!(out, "{}", format_loop(&f.name, g, l)).unwrap();
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    let d = Budgets::default();
    let budgets = Budgets {
        caps: a.caps.resolve(d.caps.clone()),
        max_dim: a.max_dim.unwrap_or(d.max_dim),
        census_len: a.census_len.unwrap_or(d.census_len),
        census_max_len: a.census_max_len.unwrap_or(d.census_max_len),
        omega_levels: a.omega_levels.unwrap_or(d.omega_levels),
        window: a.window.unwrap_or(d.window),
        cycle_levels: a.cycle_levels.unwrap_or(d.cycle_levels),
        fiber_level: a.fiber_level.unwrap_or(d.fiber_level),
    };
    let claims = parse_claims(&a.claims)?;
    let ids: Vec<&str> = claims.iter().map(|c| c.id()).collect();
    banner(&format!(
        "verify corpus={} claims={} jobs={} {budgets}",
        a.corpus.display(),
        ids.join(","),
        a.jobs
    ));
    let corpus = load_manifest(&a.corpus)?;
    let report = run_suite(&corpus, &claims, &budgets, a.jobs)?;
    let text = report.render();
    if let Some(dir) = &a.out {
        report
            .write_evidence(dir)
            .and_then(|_| std::fs::write(dir.join("report.txt"), &text))
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", dir.display())))?;
    }
    print!("{text}");
    Ok(if report.any_fail() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_gen(a: &GenArgs) -> CmdResult {
    let one = || -> Result<usize, Failure> {
        match a.params.as_slice() {
            [n] if *n >= 0 => Ok(*n as usize),
            _ => Err(Failure::Usage("expected one non-negative size".into())),
        }
    };
    let int = |i: usize| Vertex::Int(i as i64);
    let (default_name, file) = match a.kind {
        GenKind::Complete => (format!("k{}", one()?), standard_graph(StandardKind::Complete, one()?)?),
        GenKind::Cycle => (format!("c{}", one()?), standard_graph(StandardKind::Cycle, one()?)?),
        GenKind::Interval => (format!("i{}", one()?), standard_graph(StandardKind::Interval, one()?)?),
        GenKind::Path => {
            let n = one()?;
            let g = Graph::new((0..n).map(int), (1..n).map(|i| (int(i - 1), int(i))))?;
            (format!("p{n}"), g)
        }
        GenKind::Star => {
            let n = one()?;
            let g = Graph::new((0..=n).map(int), (1..=n).map(|i| (int(0), int(i))))?;
            (format!("star{n}"), g)
        }
        GenKind::Lab => {
            let [lo, hi] = a.params[..] else {
                return Err(Failure::Usage("lab takes `a b`".into()));
            };
            let x = interval_bigraph(lo, hi)?;
            let name = a.name.clone().unwrap_or_else(|| format!("l{lo}_{hi}").replace('-', "m"));
            banner(&format!("gen lab a={lo} b={hi}"));
            emit(a.out.as_deref(), &write_bigraph(&name, &x))?;
            return Ok(ExitCode::SUCCESS);
        }
    };
    let name = a.name.clone().unwrap_or(if a.kronecker {
        format!("k2x{default_name}")
    } else {
        default_name
    });
    banner(&format!("gen {} params={:?} kronecker={}", name, a.params, a.kronecker));
    let text = if a.kronecker {
        write_bigraph(&name, &kronecker_cover(&file).0)
    } else {
        write_graph(&name, &file)
    };
    emit(a.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.cmd {
        Cmd::Build(a) => cmd_build(a),
        Cmd::Inv(a) => cmd_inv(a),
        Cmd::Tower(a) => cmd_tower(a),
        Cmd::Loops(a) => cmd_loops(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Gen(a) => cmd_gen(a),
    };
    match r {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("budget exceeded: {m}");
            ExitCode::from(3)
        }
    }
}
