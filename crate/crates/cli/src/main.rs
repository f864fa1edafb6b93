use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use clubcover::bench::{run_bench, run_instance, to_json_lines, BenchConfig};
use clubcover::cover::{greedy_club_cover, validate_cover, ClubCover};
use clubcover::gen::{gen_gnp, gen_planted_clubs, gen_random_3sat, gen_random_5dsat};
use clubcover::io;
use clubcover::oracles::{
    double_sat_brute, has_h_cover, min_clique_partition_exact, min_dominating_set_exact,
    min_s_club_cover_exact, sat_brute,
};
use clubcover::reductions::{self, check_lemmas, prepare_5dsat, Construction, LabeledGraph};
use clubcover::sat::{lift_assignment, reduce_3sat_to_5dsat, restrict_assignment};
use clubcover::Error;

const FILES_NOTE: &str = "All vertex and variable numbers in files are 1-indexed \
(graphs: `p edge n m` / `e u v`; formulas: DIMACS CNF; covers and partitions: JSON). \
They are converted to 0-indexed internally.";

#[derive(Parser)]
#[command(name = "clubcover", version, about = "Cover graphs with s-clubs", long_about = None, after_help = FILES_NOTE)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Greedy,
    Exact,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    #[value(name = "cp-cover2")]
    CpCover2,
    #[value(name = "sat3-dsat5")]
    Sat3Dsat5,
    #[value(name = "dsat5-cover32")]
    Dsat5Cover32,
    #[value(name = "cp-cover3-pendant")]
    CpCover3Pendant,
}

impl Kind {
    fn construction(self) -> Option<Construction> {
        match self {
            Kind::CpCover2 => Some(Construction::CliquePartitionToCover2),
            Kind::Dsat5Cover32 => Some(Construction::DoubleSatToCover32),
            Kind::CpCover3Pendant => Some(Construction::CliquePartitionToCover3Pendant),
            Kind::Sat3Dsat5 => None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Forward,
    Back,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Cover,
    CliquePartition,
    DominatingSet,
    Sat,
    DoubleSat,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Gnp,
    Planted,
    #[value(name = "3sat")]
    Sat3,
    #[value(name = "5dsat")]
    Dsat5,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute an s-club cover and print it as JSON.
    #[command(after_help = FILES_NOTE)]
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "greedy")]
        algo: Algo,
        /// Club diameter; the greedy only supports 2.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        s: u8,
        /// Write the cover here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append a JSON report line here instead of stderr.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a cover file against a graph. Prints `ok`, or `no` and the
    /// violations.
    #[command(after_help = FILES_NOTE)]
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cover: PathBuf,
    },
    /// Build a reduction image. Graph constructions write `OUT.graph` and
    /// `OUT.labels`; `sat3-dsat5` writes `OUT.cnf`.
    #[command(after_help = FILES_NOTE)]
    Reduce {
        #[arg(long, value_enum)]
        construction: Kind,
        /// Source graph or formula.
        #[arg(long)]
        input: PathBuf,
        /// Output path prefix.
        #[arg(long)]
        out: PathBuf,
    },
    /// Carry a solution across a reduction. Forward maps a source solution
    /// (partition or assignment) to the image; back maps an image solution
    /// to the source.
    #[command(name = "map-solution", after_help = FILES_NOTE)]
    MapSolution {
        #[arg(long, value_enum)]
        construction: Kind,
        #[arg(long, value_enum)]
        direction: Direction,
        /// Source graph or formula.
        #[arg(long)]
        source: PathBuf,
        /// Image graph (graph constructions) or reduced formula (`sat3-dsat5`).
        #[arg(long)]
        image: PathBuf,
        /// Label sidecar of the image graph.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact solvers. With `--h`, answers the decision question and exits 1
    /// with `no` when the answer is negative.
    #[command(after_help = FILES_NOTE)]
    Oracle {
        #[arg(long, value_enum)]
        problem: Problem,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long)]
        h: Option<usize>,
    },
    /// Seeded instance generators.
    #[command(after_help = FILES_NOTE)]
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        p: f64,
        /// Planted cluster count.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Variable count.
        #[arg(long, default_value_t = 6)]
        q: usize,
        /// Clause count.
        #[arg(long, default_value_t = 4)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write here instead of stdout; planted graphs also get `OUT.cover.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy versus exact on random graphs; one JSON report per line.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "10,15,20")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0.2)]
        p: f64,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long)]
        threads: Option<usize>,
        /// Skip the exact solver.
        #[arg(long)]
        no_exact: bool,
        /// Append to this file instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the structural property checks of a constructed graph.
    #[command(name = "check-lemmas", after_help = FILES_NOTE)]
    CheckLemmas {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: PathBuf,
    },
}

/// How a command ended, short of success.
enum Fail {
    /// Negative answer or invalid solution: `no` on stdout, exit 1.
    No(String),
    /// Bad usage, bad input, provenance mismatch: exit 2.
    Usage(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Usage(e.to_string())
    }
}

type Res = Result<(), Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Res {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Fail::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn append(path: &Path, text: &str) -> Res {
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Turns a rejected solution into a `no` answer; other errors stay usage
/// errors.
fn answer(e: Error) -> Fail {
    match e {
        Error::InvalidInput(m) | Error::Precondition(m) | Error::Invariant(m) => Fail::No(m),
        e => e.into(),
    }
}

fn solve(
    graph: &Path,
    algo: Algo,
    s: u8,
    out: Option<&Path>,
    report: Option<&Path>,
    seed: u64,
) -> Res {
    let g = io::parse_graph(&read(graph)?)?;
    let s = s as usize;
    let t = Instant::now();
    let cover = match algo {
        Algo::Greedy if s != 2 => {
            return Err(Fail::Usage(
                "the greedy algorithm builds 2-clubs; use --s 2".into(),
            ))
        }
        Algo::Greedy => greedy_club_cover(&g),
        Algo::Exact => min_s_club_cover_exact(&g, s)?,
    };
    let elapsed = t.elapsed().as_secs_f64();
    write_or_print(out, &io::emit_cover(&cover))?;

    let mut rep = run_instance(&g, seed, false)?.remove(0);
    rep.solver = match algo {
        Algo::Greedy => "greedy",
        Algo::Exact => "exact",
    }
    .into();
    rep.s = s;
    rep.cover_size = cover.len();
    rep.wall_time = elapsed;
    if let Algo::Exact = algo {
        rep.exact_optimum = Some(cover.len());
        rep.ratio = Some(1.0);
    }
    let line = rep.to_json() + "\n";
    match report {
        Some(p) => append(p, &line),
        None => {
            eprint!("{line}");
            Ok(())
        }
    }
}

fn verify(graph: &Path, cover: &Path) -> Res {
    let g = io::parse_graph(&read(graph)?)?;
    let c = io::parse_cover(&read(cover)?)?;
    let violations = validate_cover(&g, &c);
    if violations.is_empty() {
        println!("ok");
        return Ok(());
    }
    let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
    Err(Fail::No(text.join("\n")))
}

fn reduce(kind: Kind, input: &Path, out: &Path) -> Res {
    let text = read(input)?;
    let lg = match kind {
        Kind::Sat3Dsat5 => {
            let red = reduce_3sat_to_5dsat(&io::parse_cnf(&text)?)?;
            return write_or_print(Some(&with_ext(out, "cnf")), &io::emit_cnf(&red.formula));
        }
        Kind::CpCover2 => reductions::reduce_cp_to_cover2(&io::parse_graph(&text)?),
        Kind::CpCover3Pendant => reductions::reduce_cp_to_cover3_pendant(&io::parse_graph(&text)?),
        Kind::Dsat5Cover32 => {
            let inst = prepare_5dsat(&io::parse_cnf(&text)?)?;
            reductions::reduce_5dsat_to_cover3(&inst)?
        }
    };
    fs::write(with_ext(out, "graph"), io::emit_graph(&lg.graph))?;
    fs::write(with_ext(out, "labels"), io::emit_labels(&lg))?;
    Ok(())
}

fn load_image(kind: Kind, image: &Path, labels: Option<&Path>) -> Result<LabeledGraph, Fail> {
    let labels =
        labels.ok_or_else(|| Fail::Usage("--labels is required for graph constructions".into()))?;
    let lg = io::load_labeled_graph(&read(image)?, &read(labels)?)?;
    if Some(lg.construction) != kind.construction() {
        return Err(Fail::Usage(format!(
            "provenance mismatch: labels describe a {} graph",
            lg.construction
        )));
    }
    Ok(lg)
}

fn check_digest(lg: &LabeledGraph, digest: String) -> Res {
    if !lg.source_digest.is_empty() && lg.source_digest != digest {
        return Err(Fail::Usage(format!(
            "provenance mismatch: source digest {digest}, image built from {}",
            lg.source_digest
        )));
    }
    Ok(())
}

/// A label file without a `# source:` line is trusted to belong to the
/// given source.
fn stamped(mut lg: LabeledGraph, digest: &str) -> LabeledGraph {
    if lg.source_digest.is_empty() {
        lg.source_digest = digest.to_string();
    }
    lg
}

#[allow(clippy::too_many_arguments)]
fn map_solution(
    kind: Kind,
    dir: Direction,
    source: &Path,
    image: &Path,
    labels: Option<&Path>,
    solution: &Path,
    out: Option<&Path>,
) -> Res {
    let src = read(source)?;
    let sol = read(solution)?;
    let text = match kind {
        Kind::Sat3Dsat5 => {
            let f3 = io::parse_cnf(&src)?;
            let red = reduce_3sat_to_5dsat(&f3)?;
            let f5 = io::parse_cnf(&read(image)?)?;
            if io::digest_formula(&f5) != io::digest_formula(&red.formula) {
                return Err(Fail::Usage(
                    "provenance mismatch: image is not the reduction of the source".into(),
                ));
            }
            match dir {
                Direction::Forward => {
                    let a = io::parse_assignment(&sol, f3.num_vars)?;
                    io::emit_assignment(&lift_assignment(&f3, &a, &red).map_err(answer)?)
                }
                Direction::Back => {
                    let a = io::parse_assignment(&sol, f5.num_vars)?;
                    if !f5.is_double_satisfied_by(&a)? {
                        return Err(Fail::No(
                            "assignment does not double-satisfy the image".into(),
                        ));
                    }
                    io::emit_assignment(&restrict_assignment(&a, &red)?)
                }
            }
        }
        Kind::CpCover2 | Kind::CpCover3Pendant => {
            let gp = io::parse_graph(&src)?;
            let digest = io::digest_graph(&gp);
            let lg = load_image(kind, image, labels)?;
            check_digest(&lg, digest.clone())?;
            let lg = stamped(lg, &digest);
            if lg.source_graph()? != gp {
                return Err(Fail::Usage(
                    "provenance mismatch: image was built from another graph".into(),
                ));
            }
            let pendant = kind == Kind::CpCover3Pendant;
            match dir {
                Direction::Forward => {
                    let part = io::parse_partition(&sol)?;
                    let cover = if pendant {
                        reductions::map_cliques_to_clubs3(&part, &lg)
                    } else {
                        reductions::map_cliques_to_clubs2(&part, &lg)
                    };
                    io::emit_cover(&cover.map_err(answer)?)
                }
                Direction::Back => {
                    let cover = io::parse_cover(&sol)?;
                    let part = if pendant {
                        reductions::map_clubs3_to_cliques(&cover, &lg, &gp)
                    } else {
                        reductions::map_clubs2_to_cliques(&cover, &lg, &gp)
                    };
                    io::emit_partition(&part.map_err(answer)?)
                }
            }
        }
        Kind::Dsat5Cover32 => {
            let f = io::parse_cnf(&src)?;
            let digest = io::digest_formula(&f);
            let lg = load_image(kind, image, labels)?;
            check_digest(&lg, digest.clone())?;
            let lg = stamped(lg, &digest);
            if io::digest_formula(&lg.source_formula()?) != digest {
                return Err(Fail::Usage(
                    "provenance mismatch: image was built from another formula".into(),
                ));
            }
            match dir {
                Direction::Forward => {
                    let inst = prepare_5dsat(&f)?;
                    let a = io::parse_assignment(&sol, f.num_vars)?;
                    let cover =
                        reductions::map_assignment_to_clubs3(&inst, &a, &lg).map_err(answer)?;
                    io::emit_cover(&cover)
                }
                Direction::Back => {
                    let cover = io::parse_cover(&sol)?;
                    let a = reductions::map_clubs3_to_assignment(&cover, &lg).map_err(answer)?;
                    io::emit_assignment(&a)
                }
            }
        }
    };
    write_or_print(out, &text)
}

fn oracle(
    problem: Problem,
    graph: Option<&Path>,
    cnf: Option<&Path>,
    s: usize,
    h: Option<usize>,
) -> Res {
    let need_graph = || -> Result<_, Fail> {
        let p = graph.ok_or_else(|| Fail::Usage("--graph is required for this problem".into()))?;
        Ok(io::parse_graph(&read(p)?)?)
    };
    let need_cnf = || -> Result<_, Fail> {
        let p = cnf.ok_or_else(|| Fail::Usage("--cnf is required for this problem".into()))?;
        Ok(io::parse_cnf(&read(p)?)?)
    };
    let decide = |size: usize| -> Res {
        match h {
            Some(h) if size > h => Err(Fail::No(format!("optimum is {size} > {h}"))),
            _ => Ok(()),
        }
    };
    match problem {
        Problem::Cover => {
            let g = need_graph()?;
            let cover: ClubCover = match h {
                Some(h) => has_h_cover(&g, s, h)?
                    .ok_or_else(|| Fail::No(format!("no cover by {h} {s}-clubs")))?,
                None => min_s_club_cover_exact(&g, s)?,
            };
            print!("{}", io::emit_cover(&cover));
        }
        Problem::CliquePartition => {
            let g = need_graph()?;
            let part = min_clique_partition_exact(&g)?;
            decide(part.len())?;
            print!("{}", io::emit_partition(&part));
        }
        Problem::DominatingSet => {
            let g = need_graph()?;
            let d = min_dominating_set_exact(&g)?;
            decide(d.len())?;
            let ids: Vec<String> = d.iter().map(|v| (v + 1).to_string()).collect();
            println!("{}", ids.join(" "));
        }
        Problem::Sat | Problem::DoubleSat => {
            let f = need_cnf()?;
            let found = match problem {
                Problem::Sat => sat_brute(&f)?,
                _ => double_sat_brute(&f)?,
            };
            let a = found.ok_or_else(|| Fail::No("unsatisfiable".into()))?;
            print!("{}", io::emit_assignment(&a));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn generate(
    kind: GenKind,
    n: usize,
    p: f64,
    k: usize,
    q: usize,
    clauses: usize,
    seed: u64,
    out: Option<&Path>,
) -> Res {
    let text = match kind {
        GenKind::Gnp => io::emit_graph(&gen_gnp(n, p, seed)?),
        GenKind::Planted => {
            let (g, cover) = gen_planted_clubs(n, k, seed)?;
            if let Some(o) = out {
                fs::write(with_ext(o, "cover.json"), io::emit_cover(&cover))?;
            }
            io::emit_graph(&g)
        }
        GenKind::Sat3 => io::emit_cnf(&gen_random_3sat(q, clauses, seed)?),
        GenKind::Dsat5 => io::emit_cnf(&gen_random_5dsat(q, clauses, seed)?),
    };
    write_or_print(out, &text)
}

fn bench(
    sizes: Vec<usize>,
    p: f64,
    seeds: u64,
    threads: Option<usize>,
    no_exact: bool,
    out: Option<&Path>,
) -> Res {
    let mut cfg = BenchConfig {
        sizes,
        p,
        seeds: 0..seeds,
        exact: !no_exact,
        ..BenchConfig::default()
    };
    if let Some(t) = threads {
        cfg.threads = t;
    }
    let lines = to_json_lines(&run_bench(&cfg)?);
    match out {
        Some(path) => append(path, &lines),
        None => {
            print!("{lines}");
            Ok(())
        }
    }
}

fn lemmas(graph: &Path, labels: &Path) -> Res {
    let lg = io::load_labeled_graph(&read(graph)?, &read(labels)?)?;
    let checks = check_lemmas(&lg);
    let mut failed = 0;
    for c in &checks {
        println!(
            "{} {}: {}",
            if c.holds { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        failed += usize::from(!c.holds);
    }
    if failed > 0 {
        return Err(Fail::No(format!(
            "{failed} of {} checks failed",
            checks.len()
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Res {
    match cli.cmd {
        Cmd::Solve {
            graph,
            algo,
            s,
            out,
            report,
            seed,
        } => solve(&graph, algo, s, out.as_deref(), report.as_deref(), seed),
        Cmd::Verify { graph, cover } => verify(&graph, &cover),
        Cmd::Reduce {
            construction,
            input,
            out,
        } => reduce(construction, &input, &out),
        Cmd::MapSolution {
            construction,
            direction,
            source,
            image,
            labels,
            solution,
            out,
        } => map_solution(
            construction,
            direction,
            &source,
            &image,
            labels.as_deref(),
            &solution,
            out.as_deref(),
        ),
        Cmd::Oracle {
            problem,
            graph,
            cnf,
            s,
            h,
        } => oracle(problem, graph.as_deref(), cnf.as_deref(), s, h),
        Cmd::Gen {
            kind,
            n,
            p,
            k,
            q,
            clauses,
            seed,
            out,
        } => generate(kind, n, p, k, q, clauses, seed, out.as_deref()),
        Cmd::Bench {
            sizes,
            p,
            seeds,
            threads,
            no_exact,
            out,
        } => bench(sizes, p, seeds, threads, no_exact, out.as_deref()),
        Cmd::CheckLemmas { graph, labels } => lemmas(&graph, &labels),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::No(reason)) => {
            println!("no");
            eprintln!("{reason}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
