//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. All tolerances are exact (zero) except
//! the wall-clock budget of criterion 9.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use lowdist::cluster::{analyze_clusters, check_taxonomy, LambdaParams};
use lowdist::generators::{expected_witness, generate, ExpectedOutcome, Family, GenSpec};
use lowdist::graph::{all_pairs_distances, ball, components_avoiding, weighted_all_pairs};
use lowdist::layering::{build_layering_partition, LayeringPartition};
use lowdist::outerplanar::{
    approximate_outerplanar_embedding_with, host_metric, lambda_candidates, structure_report, validate_obstruction,
    verify_outerplanar_bounds, ObstructionKind, OuterplanarOutcome,
};
use lowdist::scalar::{format_rational, int, rational};
use lowdist::tree_embed::{approximate_tree_embedding_with, certify_tree_embedding};
use lowdist::{DistanceMatrix, Graph, Matrix, Rational, Scalar, WeightedGraph};

/// Zero tolerance everywhere: every comparison below is exact.
const PERFORMANCE_BUDGET: Duration = Duration::from_secs(5);
const LAYERING_BUDGET: Duration = Duration::from_secs(10);
const CORPUS_SIZE: usize = 200;

struct Instance {
    label: String,
    spec: GenSpec,
    g: Graph,
}

fn corpus() -> Vec<Instance> {
    let mut specs = Vec::new();
    for i in 0..60u64 {
        let n = 8 + 2 * i as usize;
        // a little above the connectivity threshold ln(n)/n
        let c = (n as f64).ln().ceil() as i64 + 2;
        let p = rational(c.min(n as i64), n as i64);
        specs.push(GenSpec::new(Family::RandomConnected { n, p }, i));
    }
    for i in 0..60u64 {
        let n = 10 + 2 * i as usize;
        specs.push(GenSpec::new(
            Family::TreePlusChords {
                n,
                chords: 1 + (i as usize % 8),
            },
            1000 + i,
        ));
    }
    for i in 0..40usize {
        specs.push(GenSpec::new(Family::Cycle { n: 5 + 5 * i }, 0));
    }
    for i in 0..20u64 {
        specs.push(GenSpec::new(Family::Tree { n: 1 + 6 * i as usize }, 2000 + i));
    }
    for i in 0..20usize {
        specs.push(GenSpec::new(
            Family::SubdividedK2r {
                r: 2 + i % 4,
                t: 1 + 2 * (i / 4),
            },
            0,
        ));
    }
    assert_eq!(specs.len(), CORPUS_SIZE);
    specs
        .into_par_iter()
        .map(|spec| Instance {
            label: format!("{:?}/seed {}", spec.family, spec.seed),
            g: generate(&spec).expect("corpus instance"),
            spec,
        })
        .collect()
}

type Outcome = Result<String, String>;
type Verdict = Result<(), String>;

fn check(cond: bool, label: &str, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(format!("{label}: {}", what()))
    }
}

/// Clusters recomputed from the definition: per layer, the components of
/// `G` minus the ball of radius `i - 1`, restricted to layer `i`.
fn reference_layering(g: &Graph, s: usize) -> BTreeSet<Vec<usize>> {
    let dist = g.bfs_distances(s);
    let depth = dist.iter().copied().max().unwrap_or(0);
    let mut out = BTreeSet::new();
    for i in 0..=depth {
        for part in components_avoiding(g, &ball(g, s, i64::from(i) - 1)) {
            let mut layer: Vec<usize> = part.into_iter().filter(|&v| dist[v] == i).collect();
            layer.sort_unstable();
            if !layer.is_empty() {
                out.insert(layer);
            }
        }
    }
    out
}

fn criterion_layering(corpus: &[Instance]) -> Outcome {
    let start = Instant::now();
    corpus.par_iter().try_for_each(|inst| {
        let lp = build_layering_partition(&inst.g, 0);
        let got: BTreeSet<Vec<usize>> = lp.clusters.iter().map(|c| c.members.clone()).collect();
        check(got.len() == lp.cluster_count(), &inst.label, || "repeated cluster".into())?;
        check(got == reference_layering(&inst.g, 0), &inst.label, || "clusters differ from reference".into())
    })?;
    let elapsed = start.elapsed();
    check(elapsed < LAYERING_BUDGET, "corpus", || format!("took {elapsed:?}"))?;
    Ok(format!("{} instances identical, {elapsed:.2?}", corpus.len()))
}

/// Real-vertex block of a host metric, via Dijkstra on the whole host.
fn host_block<T: Scalar>(host: &WeightedGraph<T>, n: usize) -> Matrix<T> {
    let full = weighted_all_pairs(host).expect("connected host");
    Matrix::from_rows((0..n).map(|u| (0..n).map(|v| full.get(u, v).clone()).collect()).collect())
}

struct TreeRun {
    label: String,
    n: usize,
    dm: DistanceMatrix,
    lp: LayeringPartition,
    h: Matrix<u32>,
    h_prime: Matrix<u32>,
    h_ell: Matrix<Rational>,
    h_prime_ell: Matrix<Rational>,
    h_edges: Vec<(usize, usize)>,
    ell_h: u32,
    lb_claimed: Rational,
}

fn tree_runs(corpus: &[Instance]) -> Vec<TreeRun> {
    corpus
        .par_iter()
        .map(|inst| {
            let n = inst.g.n();
            let lp = build_layering_partition(&inst.g, 0);
            let dm = all_pairs_distances(&inst.g);
            let emb = approximate_tree_embedding_with(&lp, &dm);
            TreeRun {
                label: inst.label.clone(),
                n,
                h: host_block(&emb.h_graph(), n),
                h_prime: host_block(&emb.h_prime, n),
                h_ell: host_block(&emb.h_ell(), n),
                h_prime_ell: host_block(&emb.h_prime_ell(), n),
                h_edges: emb.h.clone(),
                ell_h: emb.ell_h,
                lb_claimed: emb.lower_bound,
                dm,
                lp,
            }
        })
        .collect()
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

fn max_cluster_diameter(run: &TreeRun) -> u32 {
    run.lp
        .clusters
        .iter()
        .flat_map(|c| c.members.iter().flat_map(|&a| c.members.iter().map(move |&b| (a, b))))
        .map(|(a, b)| run.dm.d(a, b))
        .max()
        .unwrap_or(0)
}

fn criterion_additive(runs: &[TreeRun]) -> Outcome {
    let mut checked = 0usize;
    for run in runs {
        let d_max = max_cluster_diameter(run);
        for (u, v) in pairs(run.n) {
            let (d, dh, dhp) = (run.dm.d(u, v), *run.h.get(u, v), *run.h_prime.get(u, v));
            check(dh <= d + 2 && d <= dh + d_max, &run.label, || format!("H pair ({u},{v}): d={d} dH={dh} D={d_max}"))?;
            check(dhp <= d && d <= dhp + d_max, &run.label, || format!("H' pair ({u},{v}): d={d} dH'={dhp} D={d_max}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs, both sandwiches exact"))
}

fn criterion_noncontraction(runs: &[TreeRun]) -> Outcome {
    let mut checked = 0usize;
    for run in runs {
        for (u, v) in pairs(run.n) {
            let d = int(i64::from(run.dm.d(u, v)));
            check(d <= *run.h_ell.get(u, v), &run.label, || format!("H_ell contracts ({u},{v})"))?;
            check(d <= *run.h_prime_ell.get(u, v), &run.label, || format!("H'_ell contracts ({u},{v})"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs non-contracting in H_ell and H'_ell"))
}

fn max_ratio(dm: &DistanceMatrix, host: &Matrix<Rational>) -> Rational {
    pairs(dm.n())
        .map(|(u, v)| *host.get(u, v) / i64::from(dm.d(u, v)))
        .fold(int(1), Rational::max)
}

/// `max(1, D/3, g(m))` with `g(m) = (m+1)/3` for `m >= 5`, else `max(1, (m-1)/2)`.
fn lower_bound(d_max: u32, m: u32) -> Rational {
    let m_r = int(i64::from(m));
    let g = if m >= 5 {
        (m_r + 1) / 3
    } else {
        ((m_r - 1) / 2).max(int(1))
    };
    int(1).max(int(i64::from(d_max)) / 3).max(g)
}

fn criterion_factors(runs: &[TreeRun]) -> Outcome {
    let mut worst_h = int(0);
    let mut worst_hp = int(0);
    for run in runs {
        let d_max = max_cluster_diameter(run);
        let m = run.h_edges.iter().map(|&(u, v)| run.dm.d(u, v)).max().unwrap_or(1).max(1);
        let lb = lower_bound(d_max, m);
        check(lb == run.lb_claimed, &run.label, || {
            format!("LB {} but reference {}", format_rational(&run.lb_claimed), format_rational(&lb))
        })?;
        let (rh, rhp) = (max_ratio(&run.dm, &run.h_ell), max_ratio(&run.dm, &run.h_prime_ell));
        check(rh <= lb * 9, &run.label, || format!("distortion(H_ell) = {} > 9 LB", format_rational(&rh)))?;
        check(rhp <= lb * 6 + 2, &run.label, || format!("distortion(H'_ell) = {} > 6 LB + 2", format_rational(&rhp)))?;
        worst_h = worst_h.max(rh / lb);
        worst_hp = worst_hp.max(rhp / lb);
    }
    Ok(format!(
        "max distortion/LB: H_ell {}, H'_ell {}",
        format_rational(&worst_h),
        format_rational(&worst_hp)
    ))
}

fn criterion_tree_identity(corpus: &[Instance], runs: &[TreeRun]) -> Outcome {
    let mut trees = 0;
    for (inst, run) in corpus.iter().zip(runs) {
        if !matches!(inst.spec.family, Family::Tree { .. }) {
            continue;
        }
        trees += 1;
        let normalize = |e: &(usize, usize)| (e.0.min(e.1), e.0.max(e.1));
        let h: BTreeSet<_> = run.h_edges.iter().map(normalize).collect();
        let g: BTreeSet<_> = inst.g.edges().collect();
        check(h == g, &run.label, || "H differs from G".into())?;
        check(run.ell_h == 1, &run.label, || format!("ell = {}", run.ell_h))?;
        let r = max_ratio(&run.dm, &run.h_ell);
        check(r == int(1), &run.label, || format!("distortion {}", format_rational(&r)))?;
    }
    check(trees > 0, "corpus", || "no trees".into())?;
    Ok(format!("{trees} trees reproduced with ell = 1, distortion 1"))
}

#[derive(Default)]
struct OuterplanarTally {
    runs: usize,
    embeddings: usize,
    cycles: usize,
    obstructions: [usize; 3],
    taxonomy_runs: usize,
}

/// Runs every candidate lambda on every instance; returns the failures of
/// criteria 6, 7 (soundness part) and 8 separately.
fn outerplanar_sweep(corpus: &[Instance]) -> (OuterplanarTally, Verdict, Verdict, Verdict) {
    let results: Vec<_> = corpus
        .par_iter()
        .map(|inst| {
            let g = &inst.g;
            let lp = build_layering_partition(g, 0);
            let dm = all_pairs_distances(g);
            let mut tally = OuterplanarTally::default();
            let (mut c6, mut c7, mut c8) = (Ok(()), Ok(()), Ok(()));
            for lambda in lambda_candidates(&dm) {
                let label = format!("{} lambda={}", inst.label, format_rational(&lambda));
                tally.runs += 1;
                let outcome = match approximate_outerplanar_embedding_with(g, &lp, &dm, lambda) {
                    Ok(o) => o,
                    Err(e) => {
                        c6 = c6.and(Err(format!("{label}: {e}")));
                        continue;
                    }
                };
                match outcome {
                    OuterplanarOutcome::Embedding(emb) => {
                        tally.embeddings += 1;
                        let params = LambdaParams::new(lambda).unwrap();
                        match analyze_clusters(g, &lp, &dm, &params) {
                            Ok(analyses) => {
                                tally.taxonomy_runs += 1;
                                if let Err(v) = check_taxonomy(g, &lp, &dm, &params, &analyses) {
                                    c8 = c8.and(Err(format!("{label}: {v}")));
                                }
                            }
                            Err(e) => c8 = c8.and(Err(format!("{label}: {e}"))),
                        }
                        let s = structure_report(emb.n, &emb.edges);
                        tally.cycles += s.cycle_lengths.len();
                        let r = check(s.edges_or_cycles, &label, || "block neither edge nor cycle".into())
                            .and(check(s.cycles_even, &label, || format!("odd cycle in {:?}", s.cycle_lengths)))
                            .and(check(s.cycles_vertex_disjoint, &label, || "cycles share a vertex".into()))
                            .and(exact_theorem_bound(g, &dm, &emb, &label))
                            .and(verify_outerplanar_bounds(g, &dm, &emb).map(|_| ()).map_err(|e| format!("{label}: {e}")));
                        c6 = c6.and(r);
                    }
                    OuterplanarOutcome::Obstruction(o) => {
                        let kind = match o.kind {
                            ObstructionKind::FarTriple { .. } => 0,
                            ObstructionKind::TwoBigSons { .. } => 1,
                            ObstructionKind::BigWithTwoSpreadSons { .. } => 2,
                        };
                        tally.obstructions[kind] += 1;
                        if let Err(e) = validate_obstruction(g, &lp, &dm, &o) {
                            c7 = c7.and(Err(format!("{label}: {e}")));
                        }
                    }
                }
            }
            (tally, c6, c7, c8)
        })
        .collect();
    let mut total = OuterplanarTally::default();
    let (mut c6, mut c7, mut c8) = (Ok(()), Ok(()), Ok(()));
    for (t, a, b, c) in results {
        total.runs += t.runs;
        total.embeddings += t.embeddings;
        total.cycles += t.cycles;
        total.taxonomy_runs += t.taxonomy_runs;
        for k in 0..3 {
            total.obstructions[k] += t.obstructions[k];
        }
        c6 = c6.and(a);
        c7 = c7.and(b);
        c8 = c8.and(c);
    }
    (total, c6, c7, c8)
}

/// `d_G <= d_G' <= (100 lambda + 75) d_G` over all pairs, host distances
/// from Dijkstra on the weighted host.
fn exact_theorem_bound(
    g: &Graph,
    dm: &DistanceMatrix,
    emb: &lowdist::outerplanar::OuterplanarEmbedding,
    label: &str,
) -> Result<(), String> {
    let host = weighted_all_pairs(&emb.host()).map_err(|e| format!("{label}: {e}"))?;
    let hops = host_metric(emb).map_err(|e| format!("{label}: {e}"))?;
    let bound = emb.lambda * 100 + 75;
    for (u, v) in pairs(g.n()) {
        let d = int(i64::from(dm.d(u, v)));
        let h = *host.get(u, v);
        check(h == *hops.get(u, v), label, || "host metrics disagree".into())?;
        check(d <= h && h <= bound * d, label, || {
            format!("pair ({u},{v}): d={} host={}", format_rational(&d), format_rational(&h))
        })?;
    }
    Ok(())
}

fn criterion_far_triple_boundary() -> Outcome {
    let mut lines = Vec::new();
    for t in [4usize, 6, 10] {
        let spec = GenSpec::new(Family::SubdividedK2r { r: 3, t }, 0);
        let g = generate(&spec).unwrap();
        let lp = build_layering_partition(&g, 0);
        let dm = all_pairs_distances(&g);
        let boundary = rational(t as i64 - 1, 2);
        check(
            expected_witness(&spec) == Some(ExpectedOutcome::FarTripleBelow(boundary)),
            "expected_witness",
            || format!("t={t}"),
        )?;
        let (mut below, mut above) = (0, 0);
        for lambda in lambda_candidates(&dm) {
            let outcome = approximate_outerplanar_embedding_with(&g, &lp, &dm, lambda).map_err(|e| e.to_string())?;
            let far = matches!(
                outcome.obstruction().map(|o| &o.kind),
                Some(ObstructionKind::FarTriple { .. })
            );
            let label = format!("t={t} lambda={}", format_rational(&lambda));
            check(far == (lambda < boundary), &label, || format!("far triple reported: {far}"))?;
            if let Some(o) = outcome.obstruction() {
                validate_obstruction(&g, &lp, &dm, o).map_err(|e| format!("{label}: {e}"))?;
            }
            if lambda < boundary {
                below += 1;
            } else {
                above += 1;
            }
        }
        check(below > 0 && above > 0, &format!("t={t}"), || "boundary not straddled".into())?;
        lines.push(format!("t={t}: {below} below / {above} at-or-above {}", format_rational(&boundary)));
    }
    // hand-built thetas: two extra x-y paths below a root fork
    for (k, len, want) in [(20usize, 40usize, 1usize), (15, 30, 2)] {
        let g = theta(k, len);
        let lp = build_layering_partition(&g, 0);
        let dm = all_pairs_distances(&g);
        let label = format!("theta({k}, {len})");
        let outcome = approximate_outerplanar_embedding_with(&g, &lp, &dm, int(1)).map_err(|e| e.to_string())?;
        let o = outcome.obstruction().ok_or_else(|| format!("{label}: no obstruction"))?;
        let kind = match o.kind {
            ObstructionKind::FarTriple { .. } => 0,
            ObstructionKind::TwoBigSons { .. } => 1,
            ObstructionKind::BigWithTwoSpreadSons { .. } => 2,
        };
        check(kind == want, &label, || format!("{:?}", o.kind))?;
        validate_obstruction(&g, &lp, &dm, o).map_err(|e| format!("{label}: {e}"))?;
    }
    lines.push("theta instances give valid two-big-sons and big-with-two-spread-sons witnesses".into());
    Ok(lines.join("; "))
}

/// Root paths of length `k` to `x` and `y`, plus two more `x`-`y` paths of
/// length `len`.
fn theta(k: usize, len: usize) -> Graph {
    let mut edges = Vec::new();
    let mut n = 1;
    let mut path = |from: usize, steps: usize, to: Option<usize>| {
        let mut prev = from;
        for step in 1..=steps {
            let v = match to {
                Some(end) if step == steps => end,
                _ => {
                    n += 1;
                    n - 1
                }
            };
            edges.push((prev, v));
            prev = v;
        }
        prev
    };
    let x = path(0, k, None);
    let y = path(0, k, None);
    path(x, len, Some(y));
    path(x, len, Some(y));
    Graph::from_edges(n, &edges).unwrap()
}

fn criterion_performance() -> Outcome {
    let spec = GenSpec::new(
        Family::RandomConnected {
            n: 1000,
            p: rational(8, 999),
        },
        1,
    );
    let g = generate(&spec).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let lp = build_layering_partition(&g, 0);
    let dm = all_pairs_distances(&g);
    let emb = approximate_tree_embedding_with(&lp, &dm);
    let cert = certify_tree_embedding(&g, &dm, 0, &emb).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(cert.all_pass(), "n=1000", || "certificates failed".into())?;
    check(elapsed < PERFORMANCE_BUDGET, "n=1000", || format!("took {elapsed:?}"))?;
    Ok(format!("|V|=1000 |E|={} in {elapsed:.2?}", g.edge_count()))
}

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_lowdist")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(binary()).args(args).output().map_err(|e| e.to_string())?;
    let mut bytes = out.stdout;
    bytes.extend_from_slice(format!("exit: {}\n", out.status.code().unwrap_or(-1)).as_bytes());
    Ok(bytes)
}

/// Commands whose output is pinned for one golden instance.
fn golden_runs(name: &str, gen: &[&str], lambda: &str, dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let input = dir.join(format!("{name}.txt"));
    let input = input.to_str().unwrap();
    let mut gen_args = vec!["gen"];
    gen_args.extend_from_slice(gen);
    gen_args.extend_from_slice(&["--out", input]);
    run_cli(&gen_args)?;
    let gen_text = std::fs::read(input).map_err(|e| e.to_string())?;
    Ok(vec![
        (format!("{name}.txt"), gen_text),
        (format!("{name}.layering"), run_cli(&["layering", input])?),
        (format!("{name}.tree"), run_cli(&["tree-embed", input])?),
        (
            format!("{name}.outerplanar"),
            run_cli(&["outerplanar-embed", input, "--lambda", lambda, "--explain"])?,
        ),
        (format!("{name}.search"), run_cli(&["search-lambda", input])?),
    ])
}

fn criterion_determinism() -> Outcome {
    let cases: [(&str, &[&str], &str); 4] = [
        ("cycle6", &["cycle", "--n", "6"], "1"),
        ("cycle100", &["cycle", "--n", "100"], "1"),
        ("tree32", &["tree", "--n", "32", "--seed", "32"], "1"),
        ("k2r_3_6", &["subdivided-k2r", "--r", "3", "--t", "6"], "2"),
    ];
    let golden = golden_dir();
    let bless = std::env::var_os("LOWDIST_BLESS").is_some();
    let mut compared = 0;
    for (name, gen, lambda) in cases {
        let first_dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let second_dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let first = golden_runs(name, gen, lambda, first_dir.path())?;
        let second = golden_runs(name, gen, lambda, second_dir.path())?;
        for ((file, a), (_, b)) in first.iter().zip(&second) {
            check(a == b, file, || "two runs differ".into())?;
            let path = golden.join(file);
            if bless {
                std::fs::write(&path, a).map_err(|e| e.to_string())?;
            }
            let expected = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            check(*a == expected, file, || "differs from golden file".into())?;
            compared += 1;
        }
    }
    Ok(format!("{compared} outputs byte-identical across runs and to golden files"))
}

fn report(number: usize, name: &str, outcome: Outcome) -> bool {
    match outcome {
        Ok(detail) => {
            println!("criterion {number:>2} {name}: PASS ({detail})");
            true
        }
        Err(detail) => {
            println!("criterion {number:>2} {name}: FAIL ({detail})");
            false
        }
    }
}

fn main() -> ExitCode {
    let corpus = corpus();
    let mut ok = true;
    ok &= report(1, "layering oracle equivalence", criterion_layering(&corpus));
    let runs = tree_runs(&corpus);
    ok &= report(2, "additive certificates for H and H'", criterion_additive(&runs));
    ok &= report(3, "tree pipeline non-contraction", criterion_noncontraction(&runs));
    ok &= report(4, "factor certificates 9 LB and 6 LB + 2", criterion_factors(&runs));
    ok &= report(5, "tree identity", criterion_tree_identity(&corpus, &runs));
    drop(runs);
    let (tally, c6, c7, c8) = outerplanar_sweep(&corpus);
    let summary = format!(
        "{} (instance, lambda) runs, {} embeddings, {} cycles",
        tally.runs, tally.embeddings, tally.cycles
    );
    ok &= report(6, "outerplanar soundness", c6.map(|_| summary));
    let boundary = criterion_far_triple_boundary();
    let c7 = c7.and(boundary).map(|b| {
        format!(
            "{} far-triple / {} two-big-sons / {} big-with-two-spread-sons witnesses valid; {b}",
            tally.obstructions[0], tally.obstructions[1], tally.obstructions[2]
        )
    });
    ok &= report(7, "obstruction soundness", c7);
    let taxonomy_runs = tally.taxonomy_runs;
    ok &= report(8, "cluster taxonomy assertions", c8.map(|_| format!("{taxonomy_runs} embedding runs")));
    ok &= report(9, "performance of the tree pipeline", criterion_performance());
    ok &= report(10, "determinism and golden files", criterion_determinism());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
