//! `lowdist` command-line tool.
//!
//! Exit codes: 0 success, 1 input error, 2 obstruction found, 3 verification
//! bound exceeded, 4 internal invariant violated.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use lowdist::generators::{generate, Family, GenSpec};
use lowdist::graph::{all_pairs_distances, weighted_all_pairs};
use lowdist::io::{default_names, parse_edge_list, parse_weighted_edge_list, to_dot, write_edge_list, write_weighted, NamedGraph};
use lowdist::layering::build_layering_partition;
use lowdist::outerplanar::{
    approximate_outerplanar_embedding_with, find_min_feasible_lambda, structure_report, validate_obstruction,
    verify_outerplanar_bounds, OuterplanarError, OuterplanarOutcome,
};
use lowdist::scalar::parse_rational;
use lowdist::tree_embed::{approximate_tree_embedding_with, certify_tree_embedding};
use lowdist::{distortion::multiplicative_report, Matrix, Rational, WeightedGraph};

const EXIT_OBSTRUCTION: u8 = 2;
const EXIT_BOUND: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "lowdist", version, about = "Low-distortion tree and outerplanar embeddings of graph metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the layering partition, its cluster tree and supports.
    Layering {
        input: PathBuf,
        /// Root vertex name; defaults to the first name in natural order.
        #[arg(long)]
        root: Option<String>,
    },
    /// Build the trees H, H', H_ell, H'_ell and certify them.
    TreeEmbed {
        input: PathBuf,
        #[arg(long)]
        root: Option<String>,
        /// Writes PREFIX.H, PREFIX.Hprime, PREFIX.Hell and PREFIX.Hpell.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an outerplanar host for a target distortion, or report a witness.
    OuterplanarEmbed {
        input: PathBuf,
        #[arg(long)]
        root: Option<String>,
        /// Exact rational `p/q` or integer, at least 1.
        #[arg(long)]
        lambda: String,
        /// Write the host as a weighted edge list.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print per-cluster classes and attachment decisions.
        #[arg(long)]
        explain: bool,
    },
    /// Find the smallest candidate lambda with an outerplanar host.
    SearchLambda {
        input: PathBuf,
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a weighted host against a graph.
    Verify {
        graph: PathBuf,
        host: PathBuf,
        /// Exact rational `p/q` or integer.
        #[arg(long)]
        bound: String,
    },
    /// Print a weighted edge list as DOT.
    ExportDot { host: PathBuf },
    /// Generate an instance as an edge list.
    Gen {
        #[arg(value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        /// Edge probability `p/q` for random-connected.
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        chords: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Tree,
    Cycle,
    SubdividedK2r,
    RandomConnected,
    TreePlusChords,
}

struct Internal(String);

impl std::fmt::Debug for Internal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::fmt::Display for Internal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Internal {}

fn outerplanar_error(e: OuterplanarError) -> anyhow::Error {
    match e {
        OuterplanarError::Classify(c) => anyhow!(c),
        other => anyhow!(Internal(other.to_string())),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load(path: &Path) -> Result<NamedGraph> {
    parse_edge_list(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn root_of(g: &NamedGraph, root: Option<&str>) -> Result<usize> {
    match root {
        None => Ok(0),
        Some(name) => g.id_of(name).ok_or_else(|| anyhow!("unknown vertex `{name}`")),
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Layering { input, root } => {
            let g = load(&input)?;
            let s = root_of(&g, root.as_deref())?;
            let lp = build_layering_partition(&g.graph, s);
            let dm = all_pairs_distances(&g.graph);
            print!("{}", report::layering(&g.names, &g.graph, &lp, &dm));
            Ok(0)
        }
        Command::TreeEmbed { input, root, out } => {
            let g = load(&input)?;
            let s = root_of(&g, root.as_deref())?;
            let lp = build_layering_partition(&g.graph, s);
            let dm = all_pairs_distances(&g.graph);
            let emb = approximate_tree_embedding_with(&lp, &dm);
            let cert = certify_tree_embedding(&g.graph, &dm, s, &emb).map_err(|e| anyhow!(Internal(e.to_string())))?;
            if let Some(prefix) = out {
                let to_rational = |t: &WeightedGraph<u32>| {
                    WeightedGraph::from_edges(
                        t.node_count(),
                        t.edges().iter().map(|&(u, v, w)| (u, v, Rational::from(i64::from(w)))).collect(),
                    )
                };
                write(&with_suffix(&prefix, ".H"), &write_weighted(&g.names, &to_rational(&emb.h_graph())))?;
                write(&with_suffix(&prefix, ".Hprime"), &write_weighted(&g.names, &to_rational(&emb.h_prime)))?;
                write(&with_suffix(&prefix, ".Hell"), &write_weighted(&g.names, &emb.h_ell()))?;
                write(&with_suffix(&prefix, ".Hpell"), &write_weighted(&g.names, &emb.h_prime_ell()))?;
            }
            print!("{}", report::tree_embed(&g.names, s, &emb, &cert));
            Ok(if cert.all_pass() { 0 } else { EXIT_BOUND })
        }
        Command::OuterplanarEmbed {
            input,
            root,
            lambda,
            out,
            explain,
        } => {
            let lambda = parse_rational(&lambda).context("--lambda")?;
            let g = load(&input)?;
            let s = root_of(&g, root.as_deref())?;
            let lp = build_layering_partition(&g.graph, s);
            let dm = all_pairs_distances(&g.graph);
            match approximate_outerplanar_embedding_with(&g.graph, &lp, &dm, lambda).map_err(outerplanar_error)? {
                OuterplanarOutcome::Embedding(emb) => {
                    let structure = structure_report(emb.n, &emb.edges);
                    let cert = verify_outerplanar_bounds(&g.graph, &dm, &emb).map_err(outerplanar_error)?;
                    if let Some(path) = out {
                        write(&path, &write_weighted(&g.names, &emb.host()))?;
                    }
                    print!("{}", report::embedding(&g.names, s, &emb, &structure, &cert));
                    if explain {
                        print!("{}", report::explain(&g.names, &lp, &emb));
                    }
                    if !report::structure_ok(&structure) {
                        return Err(anyhow!(Internal("host fails the outerplanar structure check".into())));
                    }
                    Ok(0)
                }
                OuterplanarOutcome::Obstruction(o) => {
                    let valid = validate_obstruction(&g.graph, &lp, &dm, &o).is_ok();
                    print!("{}", report::obstruction(&g.names, &dm, s, &o, valid));
                    if !valid {
                        return Err(anyhow!(Internal("witness failed independent validation".into())));
                    }
                    Ok(EXIT_OBSTRUCTION)
                }
            }
        }
        Command::SearchLambda { input, root, out } => {
            let g = load(&input)?;
            let s = root_of(&g, root.as_deref())?;
            let dm = all_pairs_distances(&g.graph);
            let search = find_min_feasible_lambda(&g.graph, s).map_err(outerplanar_error)?;
            let emb = &search.embedding;
            let structure = structure_report(emb.n, &emb.edges);
            let cert = verify_outerplanar_bounds(&g.graph, &dm, emb).map_err(outerplanar_error)?;
            if let Some(path) = out {
                write(&path, &write_weighted(&g.names, &emb.host()))?;
            }
            println!("candidates: {}", search.candidates.len());
            let non_monotone = if search.non_monotone.is_empty() {
                "none".to_string()
            } else {
                search
                    .non_monotone
                    .iter()
                    .map(lowdist::scalar::format_rational)
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            println!("infeasible_above_minimum: {non_monotone}");
            print!("{}", report::embedding(&g.names, s, emb, &structure, &cert));
            Ok(0)
        }
        Command::Verify { graph, host, bound } => {
            let bound = parse_rational(&bound).context("--bound")?;
            let g = load(&graph)?;
            let h = parse_weighted_edge_list(&read(&host)?).with_context(|| format!("{}", host.display()))?;
            let ids: Vec<usize> = g
                .names
                .iter()
                .map(|name| h.id_of(name).ok_or_else(|| anyhow!("vertex `{name}` missing from host")))
                .collect::<Result<_>>()?;
            let full = weighted_all_pairs(&h.graph).map_err(|e| anyhow!("host: {e}"))?;
            let n = g.graph.n();
            let rows = (0..n).map(|u| (0..n).map(|v| *full.get(ids[u], ids[v])).collect()).collect();
            let host_metric: Matrix<Rational> = Matrix::from_rows(rows);
            let dm = all_pairs_distances(&g.graph);
            let r = multiplicative_report(&dm, &host_metric);
            print!("{}", report::verify(&g.names, &r, &bound));
            Ok(if r.within(&bound) { 0 } else { EXIT_BOUND })
        }
        Command::ExportDot { host } => {
            let h = parse_weighted_edge_list(&read(&host)?).with_context(|| format!("{}", host.display()))?;
            print!("{}", to_dot(&h.names, &h.graph));
            Ok(0)
        }
        Command::Gen {
            family,
            n,
            r,
            t,
            p,
            chords,
            seed,
            out,
        } => {
            let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("--{flag} is required for this family"));
            let family = match family {
                FamilyArg::Tree => Family::Tree { n: need(n, "n")? },
                FamilyArg::Cycle => Family::Cycle { n: need(n, "n")? },
                FamilyArg::SubdividedK2r => Family::SubdividedK2r {
                    r: need(r, "r")?,
                    t: need(t, "t")?,
                },
                FamilyArg::RandomConnected => {
                    let Some(p) = p else { bail!("--p is required for this family") };
                    Family::RandomConnected {
                        n: need(n, "n")?,
                        p: parse_rational(&p).context("--p")?,
                    }
                }
                FamilyArg::TreePlusChords => Family::TreePlusChords {
                    n: need(n, "n")?,
                    chords: need(chords, "chords")?,
                },
            };
            let g = generate(&GenSpec::new(family, seed))?;
            let text = write_edge_list(&default_names(g.n()), &g);
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Internal>().is_some() {
                ExitCode::from(EXIT_INTERNAL)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
