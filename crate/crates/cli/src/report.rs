//! Plain `key: value` renderings of pipeline results.

use std::fmt::Write as _;

use lowdist::cluster::{ClusterAnalysis, ClusterClass};
use lowdist::distortion::DistortionReport;
use lowdist::io::node_name;
use lowdist::layering::{cluster_diameters, LayeringPartition};
use lowdist::outerplanar::{
    Obstruction, ObstructionKind, OuterplanarCertificate, OuterplanarEmbedding, StructureReport,
};
use lowdist::scalar::{format_decimal, format_rational};
use lowdist::tree_embed::{TreeCertificate, TreeEmbedding};
use lowdist::{DistanceMatrix, Graph, Rational};

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn join(names: &[String], ids: &[usize]) -> String {
    ids.iter().map(|&v| node_name(names, v)).collect::<Vec<_>>().join(" ")
}

fn exact(value: &Rational) -> String {
    let text = format_rational(value);
    if value.is_integer() {
        text
    } else {
        format!("{text} (~{})", format_decimal(value))
    }
}

pub fn layering(names: &[String], g: &Graph, lp: &LayeringPartition, dm: &DistanceMatrix) -> String {
    let diameters = cluster_diameters(lp, dm);
    let mut out = String::new();
    writeln!(out, "vertices: {}", g.n()).unwrap();
    writeln!(out, "edges: {}", g.edge_count()).unwrap();
    writeln!(out, "root: {}", names[lp.root]).unwrap();
    writeln!(out, "depth: {}", lp.depth()).unwrap();
    writeln!(out, "clusters: {}", lp.cluster_count()).unwrap();
    writeln!(out, "D: {}", diameters.iter().max().copied().unwrap_or(0)).unwrap();
    for (id, cluster) in lp.clusters.iter().enumerate() {
        let parent = lp.parent(id).map_or("-".to_string(), |p| p.to_string());
        let support = lp.support[id].map_or("-".to_string(), |x| names[x].clone());
        writeln!(
            out,
            "cluster {id}: layer {} parent {parent} support {support} diameter {} members {}",
            cluster.layer,
            diameters[id],
            join(names, &cluster.members)
        )
        .unwrap();
    }
    out
}

fn distortion_lines(out: &mut String, label: &str, names: &[String], report: &DistortionReport<Rational>) {
    writeln!(out, "{label}_distortion: {}", exact(&report.max_ratio)).unwrap();
    if let Some((u, v)) = report.worst_expansion_pair {
        writeln!(out, "{label}_worst_pair: {} {}", names[u], names[v]).unwrap();
    }
    writeln!(out, "{label}_non_contracting: {}", report.non_contracting).unwrap();
}

pub fn tree_embed(names: &[String], root: usize, emb: &TreeEmbedding, cert: &TreeCertificate) -> String {
    let mut out = String::new();
    writeln!(out, "vertices: {}", emb.n).unwrap();
    writeln!(out, "root: {}", names[root]).unwrap();
    writeln!(out, "D: {}", emb.max_diameter).unwrap();
    writeln!(out, "m: {}", emb.max_h_edge_distance).unwrap();
    writeln!(out, "ell_H: {}", emb.ell_h).unwrap();
    writeln!(out, "ell_H': {}", format_rational(&emb.ell_h_prime)).unwrap();
    writeln!(out, "LB: {}", exact(&emb.lower_bound)).unwrap();
    distortion_lines(&mut out, "H_ell", names, &cert.h_ell);
    distortion_lines(&mut out, "H'_ell", names, &cert.h_prime_ell);
    let lb = emb.lower_bound;
    let checks = [
        ("root_isometry", cert.root_isometry),
        ("additive_H", cert.h_additive),
        ("additive_H'", cert.h_prime_additive),
        ("non_contracting_H_ell", cert.h_ell.non_contracting),
        ("non_contracting_H'_ell", cert.h_prime_ell.non_contracting),
        ("pair_bound_H_ell", cert.h_ell_bound),
        ("pair_bound_H'_ell", cert.h_prime_ell_bound),
        ("edge_checks_agree", cert.shortcuts_agree),
    ];
    for (name, ok) in checks {
        writeln!(out, "check {name}: {}", verdict(ok)).unwrap();
    }
    writeln!(out, "check H_ell <= {}: {}", format_rational(&(lb * 9)), verdict(cert.h_ell_factor)).unwrap();
    writeln!(
        out,
        "check H'_ell <= {}: {}",
        format_rational(&(lb * 6 + 2)),
        verdict(cert.h_prime_ell_factor)
    )
    .unwrap();
    writeln!(out, "certificates: {}", verdict(cert.all_pass())).unwrap();
    out
}

fn structure_lines(out: &mut String, s: &StructureReport) {
    let lengths = if s.cycle_lengths.is_empty() {
        "none".to_string()
    } else {
        s.cycle_lengths.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
    };
    writeln!(out, "cycles: {}", s.cycle_lengths.len()).unwrap();
    writeln!(out, "cycle_lengths: {lengths}").unwrap();
    writeln!(out, "check blocks_edges_or_cycles: {}", verdict(s.edges_or_cycles)).unwrap();
    writeln!(out, "check cycles_even: {}", verdict(s.cycles_even)).unwrap();
    writeln!(out, "check cycles_disjoint: {}", verdict(s.cycles_vertex_disjoint)).unwrap();
}

pub fn structure_ok(s: &StructureReport) -> bool {
    s.edges_or_cycles && s.cycles_even && s.cycles_vertex_disjoint
}

pub fn embedding(
    names: &[String],
    root: usize,
    emb: &OuterplanarEmbedding,
    structure: &StructureReport,
    cert: &OuterplanarCertificate,
) -> String {
    let mut out = String::new();
    writeln!(out, "outcome: embedding").unwrap();
    writeln!(out, "root: {}", names[root]).unwrap();
    writeln!(out, "lambda: {}", format_rational(&emb.lambda)).unwrap();
    writeln!(out, "w: {}", format_rational(&emb.weight)).unwrap();
    writeln!(out, "host_edges: {}", emb.edges.len()).unwrap();
    structure_lines(&mut out, structure);
    writeln!(out, "bound: {}", format_rational(&cert.bound)).unwrap();
    distortion_lines(&mut out, "G'", names, &cert.report);
    writeln!(out, "check edge_expansion: {}", verdict(cert.edge_expansion_ok)).unwrap();
    writeln!(out, "check edge_non_contraction: {}", verdict(cert.edge_noncontraction_ok)).unwrap();
    writeln!(out, "check bounds: {}", verdict(cert.report.within(&cert.bound))).unwrap();
    out
}

fn class_name(a: &ClusterAnalysis) -> &'static str {
    match a.class {
        ClusterClass::Small => "small",
        ClusterClass::Medium => "medium",
        ClusterClass::Big => "big",
    }
}

pub fn explain(names: &[String], lp: &LayeringPartition, emb: &OuterplanarEmbedding) -> String {
    let mut out = String::new();
    for a in &emb.analyses {
        let cells = a
            .cells
            .iter()
            .map(|c| format!("[{}: {}]", names[c.center], join(names, &c.members)))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(
            out,
            "cluster {}: layer {} class {}{} diameter {}{} cells {cells}",
            a.cluster,
            lp.clusters[a.cluster].layer,
            class_name(a),
            if a.almost_big { " (almost big)" } else { "" },
            a.diameter,
            if a.spread { " spread" } else { "" },
        )
        .unwrap();
    }
    for at in &emb.attachments {
        let edges = at
            .edges
            .iter()
            .map(|&(u, v)| format!("{}-{}", names[u], names[v]))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(out, "attach {} -> {}: case {} edges {edges}", at.child, at.father, at.case.number()).unwrap();
    }
    out
}

pub fn obstruction(
    names: &[String],
    dm: &DistanceMatrix,
    root: usize,
    o: &Obstruction,
    valid: bool,
) -> String {
    let mut out = String::new();
    writeln!(out, "outcome: obstruction").unwrap();
    writeln!(out, "root: {}", names[root]).unwrap();
    writeln!(out, "lambda: {}", format_rational(&o.lambda)).unwrap();
    match &o.kind {
        ObstructionKind::FarTriple { cluster, vertices } => {
            let [a, b, c] = *vertices;
            writeln!(out, "kind: far-triple").unwrap();
            writeln!(out, "cluster: {cluster}").unwrap();
            writeln!(out, "vertices: {}", join(names, vertices)).unwrap();
            writeln!(out, "distances: {} {} {}", dm.d(a, b), dm.d(a, c), dm.d(b, c)).unwrap();
            writeln!(out, "threshold: {}", format_rational(&(o.lambda * 4 + 2))).unwrap();
        }
        ObstructionKind::TwoBigSons { cluster, sons } => {
            writeln!(out, "kind: two-big-sons").unwrap();
            writeln!(out, "cluster: {cluster}").unwrap();
            writeln!(out, "sons: {} {}", sons.0, sons.1).unwrap();
        }
        ObstructionKind::BigWithTwoSpreadSons { cluster, sons } => {
            writeln!(out, "kind: big-with-two-spread-sons").unwrap();
            writeln!(out, "cluster: {cluster}").unwrap();
            writeln!(out, "sons: {} {}", sons.0, sons.1).unwrap();
        }
    }
    writeln!(out, "witness: {}", if valid { "valid" } else { "INVALID" }).unwrap();
    out
}

pub fn verify(names: &[String], report: &DistortionReport<Rational>, bound: &Rational) -> String {
    let mut out = String::new();
    writeln!(out, "non_contracting: {}", report.non_contracting).unwrap();
    if let Some((u, v)) = report.worst_contraction_pair {
        writeln!(out, "worst_contraction_pair: {} {}", names[u], names[v]).unwrap();
    }
    writeln!(out, "max_ratio: {}", exact(&report.max_ratio)).unwrap();
    if let Some((u, v)) = report.worst_expansion_pair {
        writeln!(out, "worst_pair: {} {}", names[u], names[v]).unwrap();
    }
    writeln!(out, "additive_expansion: {}", format_rational(&report.additive_slack.0)).unwrap();
    writeln!(out, "additive_contraction: {}", format_rational(&report.additive_slack.1)).unwrap();
    writeln!(out, "bound: {}", format_rational(bound)).unwrap();
    writeln!(out, "within_bound: {}", report.within(bound)).unwrap();
    out
}
