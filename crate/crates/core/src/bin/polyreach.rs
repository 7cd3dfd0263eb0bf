use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use polyreach::formula::{adequate_closure, parse, Formula};
use polyreach::geometry::{Maze, PolyhedralModel, RoomWeights, SAFE_EXIT_QUERY};
use polyreach::kripke::{
    axiom_suite, bounded_sat_stats, witness_path, AuditConfig, Evaluator, PosetModel,
    PreorderModel, SatOutcome, MAX_SAT_WORLDS,
};
use polyreach::report::{RunReport, EXIT_INPUT_ERROR};
use polyreach::transforms::{
    cut, filtrate, is_updown_morphism, nerve, plr_pipeline, preservation_failures,
};

#[derive(Parser)]
#[command(name = "polyreach", version, about = "Reachability model checking on posets and polyhedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate formulas on a model file.
    Check {
        model: PathBuf,
        formula: Option<String>,
        /// Report the truth value at this world; exits 1 if false.
        #[arg(long)]
        world: Option<String>,
        #[arg(long)]
        formulas: Option<PathBuf>,
    },
    /// Search small posets for a model of a formula.
    Sat {
        formula: String,
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
    },
    /// Chain poset of a poset model.
    Nerve {
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Drop the non-strict part of every cluster.
    Cut {
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quotient by the theories of the closure of the given formulas.
    Filtrate {
        model: PathBuf,
        gamma: Vec<String>,
        #[arg(long)]
        formulas: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refined filtration followed by the cut, with preservation checks.
    Pipeline {
        model: PathBuf,
        gamma: Vec<String>,
        #[arg(long)]
        formulas: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Geometric realization of a poset model as a complex file.
    Realize {
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Face-poset model of a complex file.
    Companion {
        complex: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate (or load) a maze and evaluate a query on its triangles.
    Maze {
        #[arg(long, default_value_t = 8)]
        width: usize,
        #[arg(long, default_value_t = 8)]
        height: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = SAFE_EXIT_QUERY)]
        query: String,
        /// Rows of room symbols instead of a generated maze.
        #[arg(long)]
        layout: Option<PathBuf>,
        /// Print a witness polyline for every satisfying triangle.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Soundness suite on a model file, or structural audit of a complex file.
    Audit {
        path: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 40)]
        instances: usize,
        #[arg(long)]
        geometric_audit: bool,
    },
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Result<T> = std::result::Result<T, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let start = Instant::now();
    match run(cli.command, echo) {
        Ok(mut report) => {
            report.set_elapsed(start.elapsed());
            print!("{}", report.render());
            eprintln!("elapsed_ms\t{:.3}", start.elapsed().as_secs_f64() * 1e3);
            ExitCode::from(report.exit_code() as u8)
        }
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_formula(text: &str) -> Result<Formula> {
    parse(text).map_err(|e| InputError(format!("formula `{text}`: {e}")))
}

fn load_model(report: &mut RunReport, path: &Path) -> Result<PreorderModel> {
    let text = read(path)?;
    report.input("model", text.as_bytes());
    PreorderModel::parse(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_poset(report: &mut RunReport, path: &Path, verb: &str) -> Result<PosetModel> {
    let m = load_model(report, path)?;
    if let Some((a, b)) = m.cluster_witness() {
        return Err(InputError(format!(
            "{verb} needs a poset, but {} and {} form a cluster",
            m.name(a),
            m.name(b)
        )));
    }
    Ok(m.into_poset()?)
}

/// Formulas from positional arguments followed by the lines of `file`.
/// Blank lines and lines starting with `#` are skipped.
fn collect_formulas(report: &mut RunReport, inline: &[String], file: Option<&Path>) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    for text in inline {
        out.push(parse_formula(text)?);
    }
    if let Some(path) = file {
        let text = read(path)?;
        report.input("formulas", text.as_bytes());
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            out.push(parse(line).map_err(|e| InputError(format!("{}:{}: {e}", path.display(), i + 1)))?);
        }
    }
    Ok(out)
}

/// Writes `text` to `out` or attaches it as the report payload.
fn emit(report: &mut RunReport, text: String, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            report.field("output", path.display().to_string());
            report.field("output-digest", format!("sha256:{}", polyreach::report::sha256_hex(text.as_bytes())));
        }
        None => {
            report.payload(text);
        }
    }
    Ok(())
}

fn model_reparses(report: &mut RunReport, text: &str) {
    let witness = match PreorderModel::parse(text) {
        Ok(m) if m.to_text() == text => None,
        Ok(_) => Some("re-rendered text differs".to_string()),
        Err(e) => Some(e.to_string()),
    };
    report.check("output-reparses", witness.is_none(), witness);
}

fn complex_reparses(report: &mut RunReport, text: &str) {
    let witness = match PolyhedralModel::parse(text) {
        Ok(k) => match k.validate() {
            Ok(()) if k.to_text() == text => None,
            Ok(()) => Some("re-rendered text differs".to_string()),
            Err(e) => Some(e.to_string()),
        },
        Err(e) => Some(e.to_string()),
    };
    report.check("output-reparses", witness.is_none(), witness);
}

fn run(command: Command, echo: String) -> Result<RunReport> {
    let mut report = RunReport::new(echo);
    match command {
        Command::Check { model, formula, world, formulas } => {
            let m = load_model(&mut report, &model)?;
            let fs = collect_formulas(&mut report, formula.as_slice(), formulas.as_deref())?;
            if fs.is_empty() {
                return Err(InputError("no formula given".into()));
            }
            let at = match &world {
                Some(name) => Some(
                    m.world(name).ok_or_else(|| InputError(format!("unknown world `{name}`")))?,
                ),
                None => None,
            };
            check(&mut report, &m, &fs, at);
        }
        Command::Sat { formula, max_worlds } => {
            if !(1..=MAX_SAT_WORLDS).contains(&max_worlds) {
                return Err(InputError(format!("--max-worlds must be between 1 and {MAX_SAT_WORLDS}")));
            }
            let f = parse_formula(&formula)?;
            let atoms = f.atoms().len();
            if max_worlds * atoms >= 40 {
                return Err(InputError(format!("{atoms} atoms on {max_worlds} worlds is too large to search")));
            }
            report.field("formula", f.to_string());
            let (outcome, stats) = bounded_sat_stats(&f, max_worlds);
            report.field("posets-tried", stats.posets.to_string());
            report.field("valuations-tried", stats.valuations.to_string());
            match outcome {
                SatOutcome::Sat { model, world } => {
                    report.field("result", "SAT");
                    report.field("worlds", model.world_count().to_string());
                    report.field("world", model.name(world));
                    report.check("satisfiable", true, None);
                    report.payload(model.to_text());
                }
                SatOutcome::UnsatUpTo { bound } => {
                    report.field("result", format!("UNSAT-UP-TO {bound}"));
                    report.check("satisfiable", false, Some(format!("no poset with at most {bound} worlds")));
                }
            }
        }
        Command::Nerve { model, out } => {
            let m = load_poset(&mut report, &model, "nerve")?;
            let n = nerve(&m);
            report.field("worlds", n.world_count().to_string());
            let witness = is_updown_morphism(&n.max_map(), n.model(), &m).err().map(|e| e.to_string());
            report.check("max-updown-morphism", witness.is_none(), witness);
            let text = n.to_text();
            model_reparses(&mut report, &text);
            emit(&mut report, text, out.as_deref())?;
        }
        Command::Cut { model, out } => {
            let m = load_model(&mut report, &model)?;
            let c = cut(&m);
            report.field("worlds", c.world_count().to_string());
            let text = c.to_text();
            model_reparses(&mut report, &text);
            emit(&mut report, text, out.as_deref())?;
        }
        Command::Filtrate { model, gamma, formulas, out } => {
            let m = load_model(&mut report, &model)?;
            let gamma = collect_formulas(&mut report, &gamma, formulas.as_deref())?;
            let sigma = adequate_closure(&gamma);
            let cm = filtrate(&m, &sigma);
            report.field("sigma-size", sigma.len().to_string());
            report.field("classes", cm.world_count().to_string());
            for w in m.worlds() {
                report.field("class", format!("{}\t{}", m.name(w), cm.name(cm.class_of(w))));
            }
            let failures = preservation_failures(&m, cm.model(), cm.class_map(), sigma.iter());
            let witness = failures.first().map(|f| {
                format!("{} at {}: source {} image {}", f.formula, m.name(f.world), f.source, f.image)
            });
            report.check("filtration-truth", failures.is_empty(), witness);
            let text = cm.to_text();
            model_reparses(&mut report, &text);
            emit(&mut report, text, out.as_deref())?;
        }
        Command::Pipeline { model, gamma, formulas, out } => {
            let m = load_model(&mut report, &model)?;
            let gamma = collect_formulas(&mut report, &gamma, formulas.as_deref())?;
            let p = plr_pipeline(&m, &gamma);
            let r = &p.report;
            report.field("advisory", r.advisory.to_string());
            report.field("sigma-size", p.sigma.len().to_string());
            report.field("sigma-hat-size", p.sigma_hat.len().to_string());
            report.field("classes", p.result.world_count().to_string());
            report.field("formulas-checked", r.formulas_checked.to_string());
            report.field("witnesses-checked", r.witnesses_checked.to_string());
            for w in m.worlds() {
                let class = p.classes.class_of(w);
                report.field("class", format!("{}\t{}", m.name(w), p.result.name(class)));
            }
            let mut push = |name: &str, passed: bool, witness: Option<String>| {
                if r.advisory {
                    report.advisory_check(name, passed, witness);
                } else {
                    report.check(name, passed, witness);
                }
            };
            push("output-is-poset", r.output_is_poset, None);
            push(
                "preservation",
                r.preservation.is_empty(),
                r.preservation.first().map(|f| {
                    format!("{} at {}: source {} image {}", f.formula, m.name(f.world), f.source, f.image)
                }),
            );
            push(
                "normalized-witness",
                r.normalization.is_empty(),
                r.normalization
                    .first()
                    .map(|f| format!("{} at class {}", f.formula, p.result.name(f.class))),
            );
            let text = p.result.to_text();
            model_reparses(&mut report, &text);
            emit(&mut report, text, out.as_deref())?;
        }
        Command::Realize { model, out } => {
            let m = load_poset(&mut report, &model, "realize")?;
            let k = polyreach::geometry::realize(&m);
            report.field("vertices", k.complex().vertex_count().to_string());
            report.field("simplices", k.complex().simplex_count().to_string());
            let text = k.to_text();
            complex_reparses(&mut report, &text);
            emit(&mut report, text, out.as_deref())?;
        }
        Command::Companion { complex, out } => {
            let text = read(&complex)?;
            report.input("complex", text.as_bytes());
            let k = PolyhedralModel::parse(&text)
                .map_err(|e| InputError(format!("{}: {e}", complex.display())))?;
            k.validate().map_err(|e| InputError(format!("{}: {e}", complex.display())))?;
            let c = k.companion();
            report.field("worlds", c.world_count().to_string());
            let text = c.to_text();
            model_reparses(&mut report, &text);
            emit(&mut report, text, out.as_deref())?;
        }
        Command::Maze { width, height, seed, query, layout, witness, out } => {
            let maze = match &layout {
                Some(path) => {
                    let text = read(path)?;
                    report.input("layout", text.as_bytes());
                    Maze::parse(&text)?
                }
                None => {
                    let seed = seed.ok_or_else(|| InputError("maze generation requires --seed".into()))?;
                    report.field("seed", seed.to_string());
                    Maze::generate(width, height, seed, &RoomWeights::default())?
                }
            };
            let q = parse_formula(&query)?;
            maze_report(&mut report, &maze, &q, witness);
            let k = maze.polyhedral_model();
            let text = k.to_text();
            if let Some(path) = out.as_deref() {
                complex_reparses(&mut report, &text);
                emit(&mut report, text, Some(path))?;
            } else {
                report.payload(maze.to_string());
            }
        }
        Command::Audit { path, seed, instances, geometric_audit } => {
            let text = read(&path)?;
            if looks_like_complex(&text) {
                report.input("complex", text.as_bytes());
                let k = PolyhedralModel::parse(&text)
                    .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                report.field("kind", "complex");
                let issues = k.complex().structural_issues();
                report.check("structure", issues.is_empty(), issues.first().map(|e| e.to_string()));
                if geometric_audit {
                    let crossings = k.complex().geometric_audit();
                    let witness = crossings.first().map(|c| {
                        let coords: Vec<String> = c.point.iter().map(|x| format!("{x}")).collect();
                        format!(
                            "{} meets {} at ({})",
                            k.complex().label(c.first),
                            k.complex().label(c.second),
                            coords.join(", ")
                        )
                    });
                    report.check("geometric-intersection", crossings.is_empty(), witness);
                }
            } else {
                report.input("model", text.as_bytes());
                let m = PreorderModel::parse(&text)
                    .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                let seed = seed.ok_or_else(|| InputError("auditing a model requires --seed".into()))?;
                report.field("kind", "model");
                report.field("poset", m.is_antisymmetric().to_string());
                report.field("seed", seed.to_string());
                let suite = axiom_suite(&m, &AuditConfig { seed, instances, ..AuditConfig::default() });
                for c in &suite.checks {
                    let witness = c.violations.first().map(|v| {
                        let mut s = format!("{} refuted at {}", v.instance, m.name(v.world));
                        if !v.premises.is_empty() {
                            let ps: Vec<String> = v.premises.iter().map(|p| p.to_string()).collect();
                            s.push_str(&format!(" with valid premises {}", ps.join(" ; ")));
                        }
                        s
                    });
                    if c.required {
                        report.check(c.name, c.passed(), witness);
                    } else {
                        report.advisory_check(c.name, c.passed(), witness);
                    }
                }
            }
        }
    }
    Ok(report)
}

fn looks_like_complex(text: &str) -> bool {
    text.lines()
        .filter_map(|l| l.split('#').next()?.split_whitespace().next())
        .next()
        .is_some_and(|d| matches!(d, "vertex" | "simplex" | "faces"))
}

/// `gamma(a, b)` itself or a conjunct of it.
fn find_reach(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Reach(a, b) => Some((a, b)),
        Formula::And(l, r) => find_reach(l).or_else(|| find_reach(r)),
        _ => None,
    }
}

fn check(report: &mut RunReport, m: &PreorderModel, fs: &[Formula], at: Option<usize>) {
    let mut eval = Evaluator::new(m);
    for f in fs {
        let ext = eval.eval(f);
        report.field("formula", f.to_string());
        report.field("extension", m.format_set(&ext));
        if let Some(w) = at {
            let holds = ext.contains(w);
            report.field("holds", format!("{}\t{holds}", m.name(w)));
            report.check(
                &format!("holds-at {}", m.name(w)),
                holds,
                (!holds).then(|| format!("{f} is false at {}", m.name(w))),
            );
        }
        if let Formula::Reach(a, b) = f {
            let (a, b) = (eval.eval(a), eval.eval(b));
            let worlds: Vec<usize> = match at {
                Some(w) => ext.contains(w).then_some(w).into_iter().collect(),
                None => ext.iter().collect(),
            };
            for w in worlds {
                let path = witness_path(m, w, &a, &b).expect("extension member has a witness path");
                report.field("witness", format!("{}\t{}", m.name(w), path.display(m)));
            }
        }
    }
}

fn maze_report(report: &mut RunReport, maze: &Maze, q: &Formula, witness: bool) {
    let k = maze.polyhedral_model();
    let companion = k.companion();
    let mut eval = Evaluator::new(&companion);
    let ext = eval.eval(q);
    report.field("width", maze.width().to_string());
    report.field("height", maze.height().to_string());
    report.field("query", q.to_string());
    let reach = find_reach(q).map(|(a, b)| (eval.eval(a), eval.eval(b)));
    let mut count = 0;
    for (x, y, _) in maze.squares() {
        for (half, t) in ["lower", "upper"].iter().zip(maze.triangles(k.complex(), x, y)) {
            if !ext.contains(t) {
                continue;
            }
            count += 1;
            report.field("cell", format!("{x},{y}\t{half}\t{}", k.complex().label(t)));
            if !witness {
                continue;
            }
            let Some((a, b)) = &reach else { continue };
            let Some(path) = witness_path(&companion, t, a, b) else { continue };
            let x0 = k.complex().barycenter(t);
            let end = path.end().expect("paths are non-empty");
            let y0 = k.complex().barycenter(end);
            let line = polyreach::geometry::path_witness_poly(&k, &x0, &y0, path.middle())
                .expect("a companion path is an up-down path of the face poset");
            let pts: Vec<String> = line
                .iter()
                .map(|p| format!("({})", p.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(",")))
                .collect();
            report.field("polyline", format!("{x},{y}\t{half}\t{}", pts.join(" ")));
        }
    }
    report.field("satisfying-cells", count.to_string());
}
