//! Batch CLI over the spectree library.
//!
//! Conventions: stdout carries bare data (so outputs compose in pipelines);
//! `--out FILE` writes a document with a config header instead. While a file
//! is being produced, a `<FILE>.partial` marked `complete=false` exists; it
//! is renamed over the target only after the full run succeeded. Exit code 0
//! means no errors and no consistency violations.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use spectree::numerics::{spectrum_from_charfn, EigSource, DEFAULT_SAMPLE_SEED};
use spectree::search::{
    default_attach_family, find_cospectral_pairs, find_equal_m_vertex_pairs,
    find_remark35_witnesses, verify_surgery_exhaustive, verify_surgery_random, verify_theorems,
    SearchOptions, SearchReport,
};
use spectree::spectral::{char_fn, cospectral, PendantMode, ProblemSpec, RootCondition};
use spectree::trees::{attach, enumerate_trees_with_max, RootedTree, Tree, TreeJson, DEFAULT_MAX_N};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "spectree", version, about = "Exact spectra of equilateral trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RootCondArg {
    Neumann,
    Dirichlet,
}

impl From<RootCondArg> for RootCondition {
    fn from(v: RootCondArg) -> Self {
        match v {
            RootCondArg::Neumann => RootCondition::Neumann,
            RootCondArg::Dirichlet => RootCondition::Dirichlet,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PendantModeArg {
    Dirichlet,
    Neumann,
}

impl From<PendantModeArg> for PendantMode {
    fn from(v: PendantModeArg) -> Self {
        match v {
            PendantModeArg::Dirichlet => PendantMode::DirichletPendants,
            PendantModeArg::Neumann => PendantMode::NeumannPendants,
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Process only trees with index ≡ i (mod k), written i/k.
    #[arg(long)]
    shard: Option<String>,
    /// Worker threads for the scan.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Seed echoed into reports and used by sampled subroutines.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_SEED)]
    seed: u64,
    /// Enumeration size guard.
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    max_n: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Stream all non-isomorphic trees on n vertices.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        shard: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Characteristic function of a rooted problem on a tree file.
    Charfn {
        #[arg(long)]
        tree: PathBuf,
        /// Root vertex; falls back to the file's "root" field, then 0.
        #[arg(long)]
        root: Option<usize>,
        #[arg(long = "root-cond", value_enum, default_value_t = RootCondArg::Neumann)]
        root_cond: RootCondArg,
        #[arg(long = "pendant-mode", value_enum, default_value_t = PendantModeArg::Dirichlet)]
        pendant_mode: PendantModeArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Identify the root of one tree with a vertex of another.
    Attach {
        #[arg(long)]
        base: PathBuf,
        /// Vertex of the base tree to attach at.
        #[arg(long)]
        at: usize,
        #[arg(long)]
        attached: PathBuf,
        /// Root of the attached tree; falls back to its "root" field, then 0.
        #[arg(long = "attached-root")]
        attached_root: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the characteristic functions of two rooted problems.
    Cospectral {
        #[arg(long = "tree-a")]
        tree_a: PathBuf,
        #[arg(long = "tree-b")]
        tree_b: PathBuf,
        #[arg(long = "root-a")]
        root_a: Option<usize>,
        #[arg(long = "root-b")]
        root_b: Option<usize>,
        #[arg(long = "root-cond", value_enum, default_value_t = RootCondArg::Neumann)]
        root_cond: RootCondArg,
        #[arg(long = "pendant-mode", value_enum, default_value_t = PendantModeArg::Dirichlet)]
        pendant_mode: PendantModeArg,
    },
    /// Group all trees on n vertices by cospectrality and report collisions.
    SearchPairs {
        #[arg(long)]
        n: usize,
        #[arg(long = "pendant-mode", value_enum, default_value_t = PendantModeArg::Neumann)]
        pendant_mode: PendantModeArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Find vertex pairs indistinguishable by attachment (fast criterion).
    SearchEqualM {
        #[arg(long)]
        n: usize,
        #[arg(long = "pendant-mode", value_enum, default_value_t = PendantModeArg::Dirichlet)]
        pendant_mode: PendantModeArg,
        /// Also scan pairs involving pendant roots (direct criterion there).
        #[arg(long = "include-pendant-roots", default_value_t = false)]
        include_pendant_roots: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Exhaustive biconditional/attachment verification up to n-max, plus
    /// surgery-vs-direct consistency sweeps.
    Verify {
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(long = "pendant-mode", value_enum, default_value_t = PendantModeArg::Dirichlet)]
        pendant_mode: PendantModeArg,
        /// Extra randomized surgery-vs-direct cases on larger trees.
        #[arg(long = "random-surgery", default_value_t = 0)]
        random_surgery: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Witnesses where unequal degrees break function equality.
    Remark35 {
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(long = "pendant-mode", value_enum, default_value_t = PendantModeArg::Dirichlet)]
        pendant_mode: PendantModeArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// List the K smallest eigenvalues of a rooted problem.
    Spectrum {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        root: Option<usize>,
        #[arg(long = "root-cond", value_enum, default_value_t = RootCondArg::Neumann)]
        root_cond: RootCondArg,
        #[arg(long = "pendant-mode", value_enum, default_value_t = PendantModeArg::Dirichlet)]
        pendant_mode: PendantModeArg,
        #[arg(short = 'K', long = "count", default_value_t = 10)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a tree as DOT (open circles = pendants) plus a JSON sidecar.
    ExportDot {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in worked-example suite and print a pass/fail table.
    Fixtures,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn parse_shard(s: &Option<String>) -> Result<Option<(usize, usize)>> {
    match s {
        None => Ok(None),
        Some(s) => {
            let (i, k) = s
                .split_once('/')
                .ok_or_else(|| anyhow!("shard must be written i/k, got {s:?}"))?;
            let i: usize = i.trim().parse().context("shard index")?;
            let k: usize = k.trim().parse().context("shard count")?;
            if k == 0 || i >= k {
                bail!("shard index {i} out of range for {k} shards");
            }
            Ok(Some((i, k)))
        }
    }
}

fn load_tree(path: &Path) -> Result<TreeJson> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading tree file {}", path.display()))?;
    let js: TreeJson = serde_json::from_str(&text)
        .with_context(|| format!("parsing tree file {} (expected {{\"n\", \"edges\", \"root\"}})", path.display()))?;
    js.to_tree()
        .map_err(|e| anyhow!("invalid tree in {}: field 'edges': {e}", path.display()))?;
    Ok(js)
}

fn load_rooted(path: &Path, root_override: Option<usize>) -> Result<RootedTree> {
    let js = load_tree(path)?;
    js.to_rooted(root_override)
        .map_err(|e| anyhow!("invalid root in {}: field 'root': {e}", path.display()))
}

/// Write a document to a file through a `.partial` marked incomplete, so an
/// interrupted run never leaves a file that claims to be complete.
fn write_out(path: &Path, render: &dyn Fn(bool) -> String) -> Result<()> {
    let partial = path.with_extension(format!(
        "{}partial",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    fs::write(&partial, render(false)).with_context(|| format!("writing {}", partial.display()))?;
    fs::write(&partial, render(true)).with_context(|| format!("writing {}", partial.display()))?;
    fs::rename(&partial, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

/// Emit to stdout (bare) or to a file (with header), depending on `out`.
fn emit(out: &Option<PathBuf>, bare: String, render: &dyn Fn(bool) -> String) -> Result<()> {
    match out {
        None => {
            println!("{bare}");
            Ok(())
        }
        Some(path) => write_out(path, render),
    }
}

fn search_options(args: &SearchArgs, include_pendant_roots: bool) -> Result<SearchOptions> {
    Ok(SearchOptions {
        max_n: args.max_n,
        include_pendant_roots,
        shard: parse_shard(&args.shard)?,
        jobs: args.jobs,
        seed: args.seed,
    })
}

fn emit_report(report: &SearchReport, args: &SearchArgs) -> Result<i32> {
    let render = |r: &SearchReport| match args.format {
        Format::Csv | Format::Text => r.to_csv(),
        _ => r.to_json(),
    };
    match &args.out {
        None => println!("{}", render(report)),
        Some(path) => {
            let report = report.clone();
            write_out(path, &move |complete: bool| {
                let mut r = report.clone();
                r.complete = complete;
                render(&r)
            })?;
        }
    }
    Ok(if report.stats.violations == 0 { 0 } else { 2 })
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Enumerate {
            n,
            format,
            out,
            shard,
            max_n,
        } => {
            let shard = parse_shard(&shard)?;
            let (si, sk) = shard.unwrap_or((0, 1));
            let trees: Vec<(usize, Tree)> = enumerate_trees_with_max(n, max_n)?
                .enumerate()
                .filter(|(i, _)| i % sk == si)
                .collect();
            let render_body = |format: Format| -> String {
                match format {
                    Format::Json => {
                        let list: Vec<TreeJson> =
                            trees.iter().map(|(_, t)| TreeJson::from_tree(t, None)).collect();
                        serde_json::to_string_pretty(&list).unwrap()
                    }
                    Format::Dot => trees
                        .iter()
                        .map(|(i, t)| t.to_dot(&format!("t{i}")))
                        .collect::<Vec<_>>()
                        .join(""),
                    _ => trees
                        .iter()
                        .map(|(i, t)| {
                            let edges = t
                                .edges()
                                .iter()
                                .map(|(u, v)| format!("{u}-{v}"))
                                .collect::<Vec<_>>()
                                .join(";");
                            format!("{i}\t{edges}\t{}", t.canon_code())
                        })
                        .collect::<Vec<_>>()
                        .join("\n"),
                }
            };
            let header = format!(
                "# enumerate n={n} shard={si}/{sk} count={}\n",
                trees.len()
            );
            emit(&out, render_body(format), &|complete| {
                format!(
                    "{}# complete={complete}\n{}\n",
                    header,
                    render_body(format)
                )
            })?;
            Ok(0)
        }

        Command::Charfn {
            tree,
            root,
            root_cond,
            pendant_mode,
            format,
            out,
        } => {
            let rt = load_rooted(&tree, root)?;
            let spec = ProblemSpec::new(root_cond.into(), pendant_mode.into());
            let f = char_fn(&rt, spec)?;
            let bare = match format {
                Format::Text => f.to_string(),
                _ => serde_json::to_string(&f)?,
            };
            let config = format!(
                "root={} root_cond={:?} pendant_mode={:?} tree={}",
                rt.root(),
                spec.root_condition,
                spec.pendant_mode,
                tree.display()
            );
            emit(&out, bare, &|complete| match format {
                Format::Text => format!("# charfn {config}\n# complete={complete}\n{f}\n"),
                _ => serde_json::to_string_pretty(&serde_json::json!({
                    "config": config,
                    "complete": complete,
                    "charfn": f,
                }))
                .unwrap(),
            })?;
            Ok(0)
        }

        Command::Attach {
            base,
            at,
            attached,
            attached_root,
            format,
            out,
        } => {
            let base_tree = load_tree(&base)?.to_tree()?;
            let att = load_rooted(&attached, attached_root)?;
            let merged = attach(&base_tree, at, &att)?;
            let js = TreeJson::from_tree(&merged, Some(at));
            let bare = match format {
                Format::Dot => merged.to_dot("merged"),
                Format::Text => format!(
                    "n={} edges={}",
                    merged.n(),
                    merged
                        .edges()
                        .iter()
                        .map(|(u, v)| format!("{u}-{v}"))
                        .collect::<Vec<_>>()
                        .join(";")
                ),
                _ => serde_json::to_string(&js)?,
            };
            emit(&out, bare.clone(), &|complete| match format {
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "config": {"base": base.display().to_string(), "at": at,
                               "attached": attached.display().to_string()},
                    "complete": complete,
                    "tree": js,
                }))
                .unwrap(),
                _ => format!("# attach at={at}\n# complete={complete}\n{bare}\n"),
            })?;
            Ok(0)
        }

        Command::Cospectral {
            tree_a,
            tree_b,
            root_a,
            root_b,
            root_cond,
            pendant_mode,
        } => {
            let spec = ProblemSpec::new(root_cond.into(), pendant_mode.into());
            let fa = char_fn(&load_rooted(&tree_a, root_a)?, spec)?;
            let fb = char_fn(&load_rooted(&tree_b, root_b)?, spec)?;
            let result = cospectral(&fa, &fb);
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "cospectral": result,
                    "charfn_a": fa,
                    "charfn_b": fb,
                }))?
            );
            Ok(0)
        }

        Command::SearchPairs {
            n,
            pendant_mode,
            search,
        } => {
            let opts = search_options(&search, false)?;
            let report = find_cospectral_pairs(n, pendant_mode.into(), &opts)?;
            emit_report(&report, &search)
        }

        Command::SearchEqualM {
            n,
            pendant_mode,
            include_pendant_roots,
            search,
        } => {
            let opts = search_options(&search, include_pendant_roots)?;
            let report = find_equal_m_vertex_pairs(n, pendant_mode.into(), &opts)?;
            emit_report(&report, &search)
        }

        Command::Verify {
            n_max,
            pendant_mode,
            random_surgery,
            search,
        } => {
            let opts = search_options(&search, false)?;
            let mode = pendant_mode.into();
            let report = verify_theorems(n_max, &default_attach_family(), mode, &opts)?;
            let surgery = verify_surgery_exhaustive(n_max.min(6), 3, mode)?;
            let random = if random_surgery > 0 {
                Some(verify_surgery_random(
                    random_surgery,
                    (n_max + 1, n_max + 3),
                    (2, 4),
                    mode,
                    opts.seed,
                )?)
            } else {
                None
            };
            let mismatches =
                surgery.mismatches + random.as_ref().map_or(0, |r| r.mismatches);
            let body = serde_json::to_string_pretty(&serde_json::json!({
                "theorems": report,
                "surgery_exhaustive": surgery,
                "surgery_random": random,
            }))?;
            match &search.out {
                None => println!("{body}"),
                Some(path) => {
                    let body = body.clone();
                    write_out(path, &move |complete| {
                        format!("{{\"complete\":{complete},\"result\":{body}}}\n")
                    })?;
                }
            }
            Ok(if report.stats.violations == 0 && mismatches == 0 { 0 } else { 2 })
        }

        Command::Remark35 {
            n_max,
            pendant_mode,
            search,
        } => {
            let opts = search_options(&search, false)?;
            let report = find_remark35_witnesses(n_max, pendant_mode.into(), &opts)?;
            emit_report(&report, &search)
        }

        Command::Spectrum {
            tree,
            root,
            root_cond,
            pendant_mode,
            k,
            format,
            out,
        } => {
            let rt = load_rooted(&tree, root)?;
            let spec = ProblemSpec::new(root_cond.into(), pendant_mode.into());
            let f = char_fn(&rt, spec)?;
            let sp = spectrum_from_charfn(&f, k)?;
            let to_csv = |complete: Option<bool>| {
                let mut s = String::new();
                if let Some(c) = complete {
                    s.push_str(&format!(
                        "# spectrum root={} root_cond={:?} pendant_mode={:?} K={k} complete={c}\n",
                        rt.root(),
                        spec.root_condition,
                        spec.pendant_mode
                    ));
                }
                s.push_str("index,lambda,multiplicity,source\n");
                for (i, e) in sp.eigenvalues.iter().enumerate() {
                    let src = match e.source {
                        EigSource::SFactor => "s-factor",
                        EigSource::PRoot => "P-root",
                    };
                    s.push_str(&format!("{i},{:.12},{},{src}\n", e.lambda, e.multiplicity));
                }
                s
            };
            let bare = match format {
                Format::Json => serde_json::to_string_pretty(&sp)?,
                _ => to_csv(None).trim_end().to_string(),
            };
            emit(&out, bare, &|complete| match format {
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "complete": complete,
                    "spectrum": sp,
                }))
                .unwrap(),
                _ => to_csv(Some(complete)),
            })?;
            Ok(0)
        }

        Command::ExportDot { tree, out } => {
            let js = load_tree(&tree)?;
            let t = js.to_tree()?;
            write_out(&out, &|complete| {
                format!("// complete={complete}\n{}", t.to_dot("tree"))
            })?;
            let sidecar = out.with_extension("dot.json");
            fs::write(&sidecar, serde_json::to_string_pretty(&js)?)
                .with_context(|| format!("writing sidecar {}", sidecar.display()))?;
            println!("wrote {} and {}", out.display(), sidecar.display());
            Ok(0)
        }

        Command::Fixtures => {
            let results = spectree::fixtures::fixture_suite();
            let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
            let mut failed = 0;
            for r in &results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                println!("{status}  {:width$}  {}", r.name, r.detail);
                if !r.pass {
                    failed += 1;
                }
            }
            println!("{} checks, {} failed", results.len(), failed);
            Ok(if failed == 0 { 0 } else { 2 })
        }
    }
}
