//! Cross-checking harness: runs the dynamic program, the greedy coloring and
//! the exhaustive oracles side by side and tabulates the results.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chordal::is_chordal;
use crate::coloring::{greedy_color, verify_coloring, GreedyOptions};
use crate::dp::nu_r;
use crate::error::{Error, Result};
use crate::generate::{generate, GeneratorSpec};
use crate::graph::Graph;
use crate::io::serialize_graph6;
use crate::matching::classify_matching;
use crate::oracle::{
    brute_chromatic_index_r, brute_nu_r, brute_nu_variants, MatchingNumbers, OracleLimits,
};

/// One line of the oracle survey table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub r: usize,
    pub nu_r: usize,
    pub chi_r: Option<usize>,
    pub nu_s: usize,
    pub nu_1: usize,
    pub nu_ur: usize,
    pub nu: usize,
}

impl SurveyRow {
    /// Fills every column from the oracles; `chi_r` only when the graph has at
    /// most `chi_max_edges` edges.
    pub fn compute(graph_id: &str, g: &Graph, r: usize, chi_max_edges: usize) -> Result<Self> {
        let limits = OracleLimits::matching();
        let v = brute_nu_variants(g, &limits)?;
        Self::with_variants(graph_id, g, r, chi_max_edges, v)
    }

    fn with_variants(
        graph_id: &str,
        g: &Graph,
        r: usize,
        chi_max_edges: usize,
        v: MatchingNumbers,
    ) -> Result<Self> {
        let chi_r = if g.m() <= chi_max_edges {
            let limits = OracleLimits {
                max_edges: chi_max_edges,
                ..OracleLimits::chromatic()
            };
            Some(brute_chromatic_index_r(g, r, &limits)?)
        } else {
            None
        };
        Ok(SurveyRow {
            graph_id: graph_id.to_string(),
            n: g.n(),
            m: g.m(),
            delta: g.max_degree(),
            r,
            nu_r: brute_nu_r(g, r, &OracleLimits::matching())?,
            chi_r,
            nu_s: v.nu_s,
            nu_1: v.nu_1,
            nu_ur: v.nu_ur,
            nu: v.nu,
        })
    }
}

pub fn write_survey_csv<W: Write>(rows: &[SurveyRow], out: W) -> Result<()> {
    write_csv(rows, out)
}

fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)
            .map_err(|e| Error::Internal(format!("csv: {e}")))?;
    }
    w.flush()
        .map_err(|e| Error::Internal(format!("csv: {e}")))?;
    Ok(())
}

/// A benchmark suite file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Suite {
    pub instances: Vec<SuiteEntry>,
    #[serde(default = "default_rs")]
    pub r: Vec<usize>,
    #[serde(default = "default_chi_edges")]
    pub chi_max_edges: usize,
}

/// A generator spec repeated `count` times with consecutive seeds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteEntry {
    #[serde(flatten)]
    pub spec: GeneratorSpec,
    #[serde(default = "one")]
    pub count: u64,
}

fn default_rs() -> Vec<usize> {
    vec![1, 2, 3]
}

fn default_chi_edges() -> usize {
    12
}

fn one() -> u64 {
    1
}

impl Suite {
    /// Every concrete instance as `(graph_id, graph)`, in file order.
    pub fn expand(&self) -> Result<Vec<(String, Graph)>> {
        let mut out = Vec::new();
        for entry in &self.instances {
            for i in 0..entry.count {
                let spec = entry.spec.clone().with_seed(entry.spec.seed + i);
                let family = serde_json::to_value(spec.family).expect("family serializes");
                let id = format!(
                    "{:04}-{}-n{}-s{}",
                    out.len(),
                    family.as_str().unwrap_or("graph"),
                    spec.n,
                    spec.seed
                );
                out.push((id, generate(&spec)?));
            }
        }
        Ok(out)
    }
}

/// Survey columns plus the cross-check verdicts for one (graph, r) pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub r: usize,
    pub nu_r: usize,
    pub chi_r: Option<usize>,
    pub nu_s: usize,
    pub nu_1: usize,
    pub nu_ur: usize,
    pub nu: usize,
    pub graph6: String,
    pub chordal: bool,
    pub nu_r_dp: Option<usize>,
    pub witness_ok: Option<bool>,
    pub greedy_colors: usize,
    pub palette_k: usize,
    pub greedy_ok: bool,
    pub chain_ok: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BenchSummary {
    pub instances: usize,
    pub rows: usize,
    pub dp_checked: usize,
    pub dp_agree: usize,
    pub witness_ok: usize,
    pub greedy_ok: usize,
    pub chain_ok: usize,
    pub chi_checked: usize,
    pub disagreements: usize,
}

/// Runs every check on one graph for one `r`.
pub fn bench_instance(
    graph_id: &str,
    g: &Graph,
    r: usize,
    chi_max_edges: usize,
) -> Result<BenchRow> {
    let variants = brute_nu_variants(g, &OracleLimits::matching())?;
    bench_with_variants(graph_id, g, r, chi_max_edges, variants)
}

fn bench_with_variants(
    graph_id: &str,
    g: &Graph,
    r: usize,
    chi_max_edges: usize,
    variants: MatchingNumbers,
) -> Result<BenchRow> {
    let survey = SurveyRow::with_variants(graph_id, g, r, chi_max_edges, variants)?;
    let chordal = is_chordal(g);
    let (nu_r_dp, witness_ok) = if chordal {
        let sol = nu_r(g, r)?;
        let class = classify_matching(g, &sol.matching, r)?;
        let ok = class.is_r_degenerate && sol.matching.len() as i64 == sol.value;
        (Some(sol.value as usize), Some(ok))
    } else {
        (None, None)
    };
    let greedy = greedy_color(g, r, &GreedyOptions::default())?;
    let greedy_ok = verify_coloring(g, &greedy.coloring, r).is_ok()
        && greedy.coloring.max_color() <= greedy.palette.k;
    let greedy_colors = greedy.coloring.colors_used();
    let chain_ok =
        survey.nu_s <= survey.nu_1 && survey.nu_1 <= survey.nu_ur && survey.nu_ur <= survey.nu;
    let agree = nu_r_dp.is_none_or(|v| v == survey.nu_r)
        && witness_ok.unwrap_or(true)
        && greedy_ok
        && chain_ok
        && survey.chi_r.is_none_or(|c| c <= greedy_colors);
    Ok(BenchRow {
        graph6: serialize_graph6(g),
        chordal,
        nu_r_dp,
        witness_ok,
        greedy_colors,
        palette_k: greedy.palette.k,
        greedy_ok,
        chain_ok,
        agree,
        graph_id: survey.graph_id,
        n: survey.n,
        m: survey.m,
        delta: survey.delta,
        r: survey.r,
        nu_r: survey.nu_r,
        chi_r: survey.chi_r,
        nu_s: survey.nu_s,
        nu_1: survey.nu_1,
        nu_ur: survey.nu_ur,
        nu: survey.nu,
    })
}

/// Runs a suite on `jobs` threads. Rows come back in instance order, so the
/// output does not depend on `jobs`.
pub fn run_suite(suite: &Suite, jobs: usize) -> Result<(Vec<BenchRow>, BenchSummary)> {
    let instances = suite.expand()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let per_instance: Vec<Result<Vec<BenchRow>>> = pool.install(|| {
        instances
            .par_iter()
            .map(|(id, g)| {
                let variants = brute_nu_variants(g, &OracleLimits::matching())?;
                suite
                    .r
                    .iter()
                    .map(|&r| bench_with_variants(id, g, r, suite.chi_max_edges, variants))
                    .collect()
            })
            .collect()
    });
    let mut rows = Vec::new();
    for chunk in per_instance {
        rows.extend(chunk?);
    }
    let mut s = BenchSummary {
        instances: instances.len(),
        rows: rows.len(),
        ..Default::default()
    };
    for row in &rows {
        if let Some(v) = row.nu_r_dp {
            s.dp_checked += 1;
            s.dp_agree += usize::from(v == row.nu_r);
        }
        s.witness_ok += usize::from(row.witness_ok == Some(true));
        s.greedy_ok += usize::from(row.greedy_ok);
        s.chain_ok += usize::from(row.chain_ok);
        s.chi_checked += usize::from(row.chi_r.is_some());
        s.disagreements += usize::from(!row.agree);
    }
    Ok((rows, s))
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    write_csv(rows, out)
}

/// graph6 of the lexicographically smallest relabelling among those that
/// list vertices by non-decreasing degree. Isomorphic graphs get the same
/// string.
pub fn canonical_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut by_degree: Vec<usize> = g.vertices().collect();
    by_degree.sort_by_key(|&v| (g.degree(v), v));
    // groups of equal degree, permuted independently
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &v in &by_degree {
        match groups.last_mut() {
            Some(grp) if g.degree(grp[0]) == g.degree(v) => grp.push(v),
            _ => groups.push(vec![v]),
        }
    }
    let mut best: Option<String> = None;
    let mut order: Vec<usize> = Vec::with_capacity(n);

    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let head = rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, head);
                out.push(tail);
            }
        }
        out
    }

    fn go(g: &Graph, groups: &[Vec<usize>], order: &mut Vec<usize>, best: &mut Option<String>) {
        let Some((first, rest)) = groups.split_first() else {
            let mut label = vec![0; g.n()];
            for (new, &old) in order.iter().enumerate() {
                label[old] = new;
            }
            let relabelled =
                Graph::from_edges(g.n(), g.edges().iter().map(|e| (label[e.0], label[e.1])))
                    .expect("relabelling preserves simplicity");
            let code = serialize_graph6(&relabelled);
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        };
        for perm in permutations(first) {
            let len = order.len();
            order.extend_from_slice(&perm);
            go(g, rest, order, best);
            order.truncate(len);
        }
    }

    go(g, &groups, &mut order, &mut best);
    best.unwrap_or_else(|| serialize_graph6(g))
}

/// A connected graph where `ν_{Δ−1}` differs from the perfect-matching rule
/// (`ν − 1` with a perfect matching, `ν` otherwise).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeRecord {
    pub graph6: String,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub nu: usize,
    pub nu_delta_minus_1: usize,
    pub perfect_matching: bool,
    pub predicted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub max_n: usize,
    pub connected_graphs: usize,
    pub disagreements: Vec<ProbeRecord>,
}

/// Compares `ν_{Δ−1}` with the perfect-matching rule on every connected
/// labelled graph with `2 ≤ n ≤ max_n`. Disagreements are reported once per
/// isomorphism class, sorted by `(n, m, graph6)`.
pub fn degree_minus_one_probe(max_n: usize) -> Result<ProbeReport> {
    if max_n > 7 {
        return Err(Error::LimitsExceeded(
            "probe enumerates all graphs; max_n <= 7".into(),
        ));
    }
    let limits = OracleLimits::matching();
    let mut connected = 0usize;
    let mut found = std::collections::BTreeMap::new();
    for n in 2..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        for mask in 0u64..(1 << pairs.len()) {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            let g = Graph::from_edges(n, edges)?;
            if !g.is_connected() {
                continue;
            }
            connected += 1;
            let delta = g.max_degree();
            let nu = brute_nu_r(&g, n, &limits)?;
            let nu_dm1 = brute_nu_r(&g, delta - 1, &limits)?;
            let perfect = 2 * nu == n;
            let predicted = if perfect { nu - 1 } else { nu };
            if nu_dm1 != predicted {
                let code = canonical_graph6(&g);
                found
                    .entry((n, g.m(), code.clone()))
                    .or_insert(ProbeRecord {
                        graph6: code,
                        n,
                        m: g.m(),
                        delta,
                        nu,
                        nu_delta_minus_1: nu_dm1,
                        perfect_matching: perfect,
                        predicted,
                    });
            }
        }
    }
    Ok(ProbeReport {
        max_n,
        connected_graphs: connected,
        disagreements: found.into_values().collect(),
    })
}
