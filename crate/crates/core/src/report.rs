//! JSON report (schema 1) and its comparison with the expected structure.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::expected::{ExpectedStructure, Label, ShapeLattice, FLAG_Y_DELTA, LABELS};
use crate::geometry::{Family, Rank3Params};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    pub family: Family,
    pub m: usize,
    pub n: usize,
    pub ell: u32,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Points {
    pub nonsingular: usize,
    pub singular: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupInfo {
    pub order: String,
    pub formula_order: String,
    pub rank: usize,
    pub suborbits: Vec<usize>,
    /// "deterministic" or "bounds".
    pub certificate: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FactorEntry {
    pub label: Label,
    pub dim: usize,
    pub mult: usize,
    pub abs_irred: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LayerEntry {
    pub label: Label,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub id: usize,
    pub dim: usize,
    /// Composition factors of the submodule.
    pub factors: Vec<LayerEntry>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeEntry {
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    #[serde(rename = "match")]
    pub matched: bool,
    pub flags: Vec<String>,
    pub diffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema: u32,
    pub input: Input,
    pub points: Points,
    pub params: Rank3Params,
    pub roots: [i64; 2],
    pub group: GroupInfo,
    pub factors: Vec<FactorEntry>,
    pub socle_series: Vec<Vec<LayerEntry>>,
    pub lattice: LatticeEntry,
    pub verdict: Verdict,
    pub timings_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    /// JSON without timings, for determinism comparisons.
    pub fn stable_json(&self) -> String {
        let mut r = self.clone();
        r.timings_ms.clear();
        r.to_json()
    }

    /// Lattice shape from node factor lists and covering edges.
    pub fn shape(&self) -> ShapeLattice {
        let n = self.lattice.nodes.len();
        let counts: Vec<Vec<usize>> = self
            .lattice
            .nodes
            .iter()
            .map(|node| {
                let mut c = vec![0; LABELS.len()];
                for e in &node.factors {
                    c[e.label.index()] += 1;
                }
                c
            })
            .collect();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.lattice.nodes[i].dim));
        for &i in &order {
            for e in self.lattice.edges.iter().filter(|e| e[0] == i) {
                let up = le[e[1]].clone();
                for (x, &y) in le[i].iter_mut().zip(&up) {
                    *x |= y;
                }
            }
        }
        ShapeLattice { counts, le }
    }

    /// Text rendering derived from the same data as the JSON.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let i = &self.input;
        s += &format!("{} m={} n={} ell={} seed={}\n", i.family, i.m, i.n, i.ell, i.seed);
        s += &format!("points: |P|={} |P0|={}\n", self.points.nonsingular, self.points.singular);
        let p = &self.params;
        s += &format!(
            "params: v={} a={} b={} r={} s={}  roots: {} {}\n",
            p.v, p.a, p.b, p.r, p.s, self.roots[0], self.roots[1]
        );
        s += &format!(
            "group: order {} (formula {}, {}) rank {} suborbits {:?}\n",
            self.group.order, self.group.formula_order, self.group.certificate, self.group.rank, self.group.suborbits
        );
        if !self.factors.is_empty() {
            let fs: Vec<String> = self
                .factors
                .iter()
                .map(|f| format!("{}({})x{}{}", f.label, f.dim, f.mult, if f.abs_irred { "" } else { "*" }))
                .collect();
            s += &format!("factors: {}\n", fs.join(" "));
            let layers: Vec<String> = self
                .socle_series
                .iter()
                .map(|l| l.iter().map(|e| format!("{}({})", e.label, e.dim)).collect::<Vec<_>>().join("+"))
                .collect();
            s += &format!("socle series: {}\n", layers.join(" - "));
            s += &format!("lattice: {} nodes, {} covering edges\n", self.lattice.nodes.len(), self.lattice.edges.len());
        }
        let v = &self.verdict;
        s += &format!("verdict: {}", if v.matched { "PASS" } else { "FAIL" });
        if !v.flags.is_empty() {
            s += &format!(" flags: {}", v.flags.join(", "));
        }
        s += "\n";
        for d in &v.diffs {
            s += &format!("  diff: {d}\n");
        }
        s
    }
}

fn multiset(entries: impl Iterator<Item = (Label, usize)>) -> BTreeMap<Label, usize> {
    let mut m = BTreeMap::new();
    for (l, c) in entries {
        *m.entry(l).or_insert(0) += c;
    }
    m
}

fn show(m: &BTreeMap<Label, usize>) -> String {
    m.iter().map(|(l, c)| format!("{l}x{c}")).collect::<Vec<_>>().join(" ")
}

/// Compares a report with the expected structure. Dimension mismatches that
/// agree with a catalogued correction raise a flag instead of a diff.
pub fn verify(report: &Report, exp: &ExpectedStructure) -> Verdict {
    let mut diffs = Vec::new();
    let mut flags = Vec::new();
    if report.input.family != exp.family || report.input.m != exp.m || report.input.ell != exp.ell {
        diffs.push("report and expectation describe different instances".to_string());
    }
    let got = multiset(report.factors.iter().map(|f| (f.label, f.mult)));
    let want = multiset(exp.factor_multiset().into_iter());
    if got != want {
        diffs.push(format!("factors: computed {} expected {}", show(&got), show(&want)));
    }
    for f in &report.factors {
        if f.label == Label::Unknown {
            diffs.push(format!("factor of dimension {} matches no label", f.dim));
            continue;
        }
        let Some(d) = exp.dims.iter().find(|d| d.label == f.label) else { continue };
        if f.dim != d.dim {
            diffs.push(format!("dim {}: computed {} expected {}", f.label, f.dim, d.dim));
        } else if d.dim != d.quoted && f.label == Label::Y && !flags.iter().any(|x| x == FLAG_Y_DELTA) {
            flags.push(FLAG_Y_DELTA.to_string());
        }
        if !f.abs_irred {
            flags.push(format!("NOT_ABS_IRRED_{}", f.label));
        }
    }
    for fl in &exp.flags {
        if fl != FLAG_Y_DELTA && !flags.contains(fl) {
            flags.push(fl.clone());
        }
    }
    let got_layers: Vec<Vec<Label>> = report
        .socle_series
        .iter()
        .map(|l| {
            let mut v: Vec<Label> = l.iter().map(|e| e.label).collect();
            v.sort();
            v
        })
        .collect();
    if got_layers != exp.layers() {
        let fmt = |ls: &[Vec<Label>]| {
            ls.iter().map(|l| l.iter().map(|x| x.name()).collect::<Vec<_>>().join("+")).collect::<Vec<_>>().join(" - ")
        };
        diffs.push(format!("socle series: computed {} expected {}", fmt(&got_layers), fmt(&exp.layers())));
    }
    let total: usize = report.socle_series.iter().flatten().map(|e| e.dim).sum();
    if total != report.points.nonsingular {
        diffs.push(format!("socle layer dimensions sum to {total}, not |P| = {}", report.points.nonsingular));
    }
    if report.lattice.nodes.is_empty() {
        diffs.push("lattice not computed".to_string());
    } else {
        let shape = report.shape();
        let want = exp.lattice(exp.ell);
        if !shape.isomorphic(&want) {
            diffs.push(format!(
                "lattice: computed {} nodes / {} covers, expected {} nodes / {} covers, not isomorphic",
                shape.len(),
                shape.covers().len(),
                want.len(),
                want.covers().len()
            ));
        }
    }
    Verdict { matched: diffs.is_empty(), flags, diffs }
}
