//! Runs engine variants over instances under a per-run time limit and
//! tabulates the results.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::csp_search::{solve_csp_bnb, CspSearchConfig, Variant};
use crate::problem::{Limits, Problem, SearchResult, SolveStats, Status};
use crate::subset_search::{solve_subset_bnb, Strategy, SubsetConfig};

/// Marker for a run that hit its limit.
pub const TIMEOUT_MARK: &str = "—";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineVariant {
    SubsetDfs,
    SubsetBfs,
    Csp(Variant),
}

impl EngineVariant {
    pub const ALL: [EngineVariant; 6] = [
        EngineVariant::SubsetDfs,
        EngineVariant::SubsetBfs,
        EngineVariant::Csp(Variant::BbS),
        EngineVariant::Csp(Variant::BbSNg),
        EngineVariant::Csp(Variant::BbSInc),
        EngineVariant::Csp(Variant::BbSNgInc),
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineVariant::SubsetDfs => "subset-dfs",
            EngineVariant::SubsetBfs => "subset-bfs",
            EngineVariant::Csp(v) => v.name(),
        }
    }

    /// Accepts the names above; `csp-` prefixes are ignored.
    pub fn from_name(s: &str) -> Option<Self> {
        let s = s.strip_prefix("csp-").unwrap_or(s);
        EngineVariant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
    }

    /// Runs the variant with only a deadline (subset search gets no node budget).
    pub fn run(self, p: &Problem, limits: Limits) -> SearchResult {
        match self {
            EngineVariant::SubsetDfs | EngineVariant::SubsetBfs => {
                let strategy = if self == EngineVariant::SubsetDfs {
                    Strategy::DepthFirst
                } else {
                    Strategy::BestFirst
                };
                let cfg = SubsetConfig {
                    limits,
                    ..SubsetConfig::default().with_strategy(strategy)
                };
                solve_subset_bnb(p, cfg)
            }
            EngineVariant::Csp(v) => solve_csp_bnb(
                p,
                CspSearchConfig {
                    limits,
                    ..CspSearchConfig::variant(v)
                },
            ),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchCell {
    pub instance: String,
    pub variant: String,
    pub status: Status,
    /// `None` when the run timed out.
    pub value: Option<f64>,
    pub seconds: f64,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub instances: Vec<String>,
    pub variants: Vec<String>,
    pub timeout_secs: f64,
    pub cells: Vec<BenchCell>,
    /// Instances on which completed variants disagree on the optimal value.
    pub mismatches: Vec<String>,
}

impl BenchReport {
    pub fn cell(&self, instance: &str, variant: &str) -> Option<&BenchCell> {
        self.cells
            .iter()
            .find(|c| c.instance == instance && c.variant == variant)
    }

    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// One row per variant and instance: value, time, and the work counters.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "instance\tmethod\tvalue\ttime_sec\tsubsets_generated\tsubsets_until_opt\ttree_nodes\tproperty_backtracks\titem_backtracks\tnogood_hits\n",
        );
        for c in &self.cells {
            let (value, time) = match c.value {
                Some(v) => (format!("{v}"), format!("{:.3}", c.seconds)),
                None => (TIMEOUT_MARK.to_string(), TIMEOUT_MARK.to_string()),
            };
            let s = &c.stats;
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                c.instance,
                c.variant,
                value,
                time,
                s.nodes_generated,
                s.nodes_until_opt,
                s.tree_nodes,
                s.property_backtracks,
                s.item_backtracks,
                s.nogood_hits
            )
            .expect("writing to a String");
        }
        out
    }

    /// Times only: one row per variant, one column per instance.
    pub fn time_table(&self) -> String {
        let mut out = format!("method\t{}\n", self.instances.join("\t"));
        for v in &self.variants {
            out.push_str(v);
            for i in &self.instances {
                let t = match self.cell(i, v) {
                    Some(BenchCell {
                        value: Some(_),
                        seconds,
                        ..
                    }) => format!("{seconds:.3}"),
                    _ => TIMEOUT_MARK.to_string(),
                };
                out.push('\t');
                out.push_str(&t);
            }
            out.push('\n');
        }
        out
    }
}

/// Runs every variant on every instance, each with `timeout`.
pub fn run_benchmark(
    instances: &[(String, Problem)],
    variants: &[EngineVariant],
    timeout: Duration,
) -> BenchReport {
    let mut cells = Vec::new();
    let mut mismatches = Vec::new();
    for (name, p) in instances {
        let mut seen: Option<f64> = None;
        for &v in variants {
            let started = Instant::now();
            let r = v.run(p, Limits::timeout(timeout));
            let seconds = started.elapsed().as_secs_f64();
            let value = match r.status {
                Status::Optimal => Some(r.value),
                Status::Infeasible => Some(f64::NEG_INFINITY),
                Status::LimitReached => None,
            };
            if let Some(x) = value {
                match seen {
                    Some(y) if y != x => {
                        if !mismatches.contains(name) {
                            mismatches.push(name.clone());
                        }
                    }
                    _ => seen = Some(x),
                }
            }
            cells.push(BenchCell {
                instance: name.clone(),
                variant: v.name().to_string(),
                status: r.status,
                value,
                seconds,
                stats: r.stats,
            });
        }
    }
    BenchReport {
        instances: instances.iter().map(|(n, _)| n.clone()).collect(),
        variants: variants.iter().map(|v| v.name().to_string()).collect(),
        timeout_secs: timeout.as_secs_f64(),
        cells,
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixtures::senators_problem;

    #[test]
    fn senators_all_variants_agree() {
        let inst = vec![("senators".to_string(), senators_problem(true))];
        let rep = run_benchmark(&inst, &EngineVariant::ALL, Duration::from_secs(10));
        assert!(rep.is_consistent());
        assert!(rep.cells.iter().all(|c| c.value == Some(11.0)));
        let tsv = rep.to_tsv();
        assert_eq!(tsv.lines().count(), 7);
        assert!(rep.time_table().starts_with("method\tsenators\n"));
    }

    #[test]
    fn names_round_trip() {
        for v in EngineVariant::ALL {
            assert_eq!(EngineVariant::from_name(v.name()), Some(v));
        }
        assert_eq!(
            EngineVariant::from_name("csp-BB-S+ng"),
            Some(EngineVariant::Csp(Variant::BbSNg))
        );
        assert_eq!(EngineVariant::from_name("nope"), None);
    }
}
