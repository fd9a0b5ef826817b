//! End-to-end analysis of one instance, verification against the expected
//! structure, and the instance suite.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::action::PermSection;
use crate::error::{cert, invalid, Error, Result};
use crate::expected::{expected, ExpectedStructure, Label};
use crate::field::make_prime_field;
use crate::geometry::{
    brute_params, build_space, closed_params, closed_singular_count, enumerate_points, quadratic_roots, root_pattern,
    Family, PointSets, Rank3Params, Roots, Space, SpaceSpec,
};
use crate::group::{build_group_with, rank_and_orbitals, GroupAction, OrderCertificate, RankInfo};
use crate::lattice::{socle_series, submodule_lattice, Lattice, LatticeConfig};
use crate::linalg::{Echelon, Matrix};
use crate::meataxe::{chop, classify, sharpen_kits, Factor, FactorClass, MeataxeConfig};
use crate::module::{ModCtx, Rank3Module, Section, Submodule};
use crate::report::{
    verify, FactorEntry, GroupInfo, Input, LatticeEntry, LayerEntry, NodeEntry, Points, Report, Verdict, SCHEMA,
};

pub const DEFAULT_MAX_P: usize = 3000;

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub max_p_size: usize,
    pub skip_order: bool,
    pub lattice: LatticeConfig,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, max_p_size: DEFAULT_MAX_P, skip_order: false, lattice: LatticeConfig::default() }
    }
}

/// Spec from the user-facing size: n for orthogonal families, m for unitary.
pub fn space_spec(family: Family, size: usize) -> Result<SpaceSpec> {
    match family {
        Family::Unitary => SpaceSpec::unitary(size),
        _ => SpaceSpec::orthogonal(family, size),
    }
}

pub fn check_ell(ell: u32) -> Result<()> {
    let prime = ell >= 2 && (2..ell).take_while(|d| d * d <= ell).all(|d| !ell.is_multiple_of(d));
    if !prime || ell == 2 {
        return Err(invalid(format!("ℓ = {ell} must be an odd prime")));
    }
    if ell > 251 {
        return Err(invalid(format!("ℓ = {ell} exceeds the supported bound 251")));
    }
    Ok(())
}

fn describe(spec: SpaceSpec) -> String {
    match spec.family {
        Family::Unitary => format!("U m={}", spec.dim),
        f => format!("{f} n={}", spec.n()),
    }
}

/// Fails with `OutOfScale` when |P| exceeds `max`, naming the smallest case
/// of the family that the bound excludes.
pub fn desk_scale_guard(spec: SpaceSpec, max: usize) -> Result<()> {
    let v = closed_params(spec).v as usize;
    if v <= max {
        return Ok(());
    }
    let start = if spec.family == Family::Unitary { 4 } else { 3 };
    let smallest = (start..)
        .map(|s| space_spec(spec.family, s).expect("size in range"))
        .find(|s| closed_params(*s).v as usize > max)
        .expect("point counts grow without bound");
    Err(Error::OutOfScale(format!(
        "{} has |P| = {v} > {max}; the smallest excluded case of this family is {} with |P| = {}",
        describe(spec),
        describe(smallest),
        closed_params(smallest).v
    )))
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// Q is equivariant on random vectors and Q(S(FP)) is neither 0 nor T(FP⁰).
fn check_cross_maps(m: &Rank3Module, seed: u64) -> Result<()> {
    let f = m.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9a_c2055);
    let n = m.p.dim();
    let x = Matrix::from_vec(4, n, (0..4 * n).map(|_| rng.gen_range(0..f.modulus()) as u8).collect());
    let y = Matrix::from_vec(4, m.p0.dim(), (0..4 * m.p0.dim()).map(|_| rng.gen_range(0..f.modulus()) as u8).collect());
    for (g, g0) in m.p.gens.iter().zip(&m.p0.gens) {
        if m.q_apply(&g.apply(f, &x)) != g0.apply(f, &m.q_apply(&x)) {
            return Err(cert("Q does not commute with the group"));
        }
        if m.r_apply(&g0.apply(f, &y)) != g.apply(f, &m.r_apply(&y)) {
            return Err(cert("R does not commute with the group"));
        }
    }
    let (s, _) = m.p.distinguished();
    let img = Echelon::from_rows(f, m.q_apply(s.basis()));
    let (_, t0) = m.p0.distinguished();
    if img.dim() == 0 || img == t0 {
        return Err(cert(format!("Q(S(FP)) has dimension {} and is 0 or T(FP⁰)", img.dim())));
    }
    Ok(())
}

fn contains(ctx: &ModCtx, a: &Submodule, b: &Submodule) -> bool {
    a.dim() <= b.dim() && ctx.sum(a, b).dim() == b.dim()
}

/// A chain 0 ⊂ ⋯ ⊂ FP through the known submodules, so that each section
/// handed to the meataxe is small.
fn seed_chain(ctx: &ModCtx, known: Vec<Submodule>) -> Result<Vec<Submodule>> {
    let mut cands = vec![ctx.zero(), ctx.full()];
    let push = |c: Submodule, cands: &mut Vec<Submodule>| {
        if !cands.contains(&c) {
            cands.push(c);
        }
    };
    for k in known {
        let p = ctx.perp(&k)?;
        push(k, &mut cands);
        push(p, &mut cands);
    }
    let base = cands.len();
    for i in 2..base {
        for j in i + 1..base {
            let (a, b) = (cands[i].clone(), cands[j].clone());
            push(ctx.sum(&a, &b), &mut cands);
            push(ctx.intersect(&a, &b), &mut cands);
        }
    }
    cands.sort_by_key(|c| c.dim());
    // longest chain under containment
    let k = cands.len();
    let mut best = vec![1usize; k];
    let mut prev = vec![usize::MAX; k];
    for j in 0..k {
        for i in 0..j {
            if cands[i].dim() < cands[j].dim() && best[i] + 1 > best[j] && contains(ctx, &cands[i], &cands[j]) {
                best[j] = best[i] + 1;
                prev[j] = i;
            }
        }
    }
    let mut chain = Vec::new();
    let mut cur = k - 1;
    while cur != usize::MAX {
        chain.push(cands[cur].clone());
        cur = prev[cur];
    }
    chain.reverse();
    if chain[0].dim() != 0 {
        return Err(cert("seed chain does not start at 0"));
    }
    Ok(chain)
}

fn factors_along(ctx: &ModCtx, chain: &[Submodule], cfg: &MeataxeConfig) -> Result<Vec<Factor>> {
    let secs: Vec<Section> =
        chain.windows(2).map(|w| Section::new(&ctx.f, w[1].clone(), w[0].clone())).collect::<Result<_>>()?;
    let per: Vec<Vec<Factor>> = secs
        .par_iter()
        .map(|sec| {
            let rep = PermSection::new(ctx, sec).rep()?;
            chop(&rep, cfg)
        })
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

fn label_classes(classes: &[FactorClass], exp: &ExpectedStructure) -> Vec<Label> {
    classes
        .iter()
        .map(|c| match c.dim() {
            1 if c.is_trivial() => Label::Trivial,
            1 => Label::Omega,
            d => exp.label_for_dim(d).unwrap_or(Label::Unknown),
        })
        .collect()
}

fn entries(counts: &[usize], classes: &[FactorClass], labels: &[Label]) -> Vec<LayerEntry> {
    let mut out: Vec<LayerEntry> = counts
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n(LayerEntry { label: labels[i], dim: classes[i].dim() }, c))
        .collect();
    out.sort();
    out
}

/// Points, counted parameters and roots, each checked against the closed
/// formulas.
pub struct GeometryStage {
    pub spec: SpaceSpec,
    pub space: Space,
    pub ps: Arc<PointSets>,
    pub params: Rank3Params,
    pub roots: Roots,
}

pub fn geometry_stage(spec: SpaceSpec, max_p_size: usize) -> Result<GeometryStage> {
    desk_scale_guard(spec, max_p_size)?;
    let space = build_space(spec)?;
    let ps = Arc::new(enumerate_points(&space));
    let params = brute_params(&ps)?;
    let closed = closed_params(spec);
    if params != closed {
        return Err(cert(format!("counted parameters {params:?} differ from the closed formulas {closed:?}")));
    }
    if ps.p0.len() as i64 != closed_singular_count(spec) {
        return Err(cert("singular point count differs from the closed formula"));
    }
    if !params.is_consistent() {
        return Err(cert("parameters violate a(a-r-1) = bs"));
    }
    let roots = quadratic_roots(&params)?;
    if roots != root_pattern(spec) {
        return Err(cert(format!("roots {roots:?} differ from the family pattern")));
    }
    Ok(GeometryStage { spec, space, ps, params, roots })
}

pub struct GroupStage {
    pub group: GroupAction,
    pub rank: RankInfo,
}

impl GroupStage {
    pub fn info(&self) -> GroupInfo {
        GroupInfo {
            order: self.group.order.to_string(),
            formula_order: self.group.formula_order.to_string(),
            rank: self.rank.rank,
            suborbits: self.rank.suborbits.clone(),
            certificate: match self.group.certificate {
                OrderCertificate::Deterministic => "deterministic",
                OrderCertificate::Bounds => "bounds",
            }
            .to_string(),
        }
    }
}

/// Generators with certified order, and the rank of the action on P.
pub fn group_stage(geo: &GeometryStage, seed: u64, skip_order: bool) -> Result<GroupStage> {
    let group = build_group_with(&geo.space, &geo.ps, seed, !skip_order)?;
    let rank = rank_and_orbitals(&group.point_perms(), &geo.ps, 0)?;
    if !rank.transitive || rank.rank != 3 {
        return Err(cert(format!("action has rank {} (transitive: {})", rank.rank, rank.transitive)));
    }
    Ok(GroupStage { group, rank })
}

/// Full analysis of one instance; the verdict compares it with the expected
/// structure.
pub fn analyze(family: Family, size: usize, ell: u32, opts: &Options) -> Result<Report> {
    Ok(analyze_full(family, size, ell, opts)?.report)
}

/// The report together with the objects it was read from.
pub struct Analysis {
    pub report: Report,
    pub module: Rank3Module,
    pub classes: Vec<FactorClass>,
    /// Absent when the composition length exceeds the lattice bound.
    pub lattice: Option<Lattice>,
}

pub fn analyze_full(family: Family, size: usize, ell: u32, opts: &Options) -> Result<Analysis> {
    check_ell(ell)?;
    let exp = expected(family, size, ell)?;
    let spec = space_spec(family, size)?;
    let mut timings = BTreeMap::new();

    let t = Instant::now();
    let geo = geometry_stage(spec, opts.max_p_size)?;
    timings.insert("geometry".to_string(), ms(t));

    let t = Instant::now();
    let gs = group_stage(&geo, opts.seed, opts.skip_order)?;
    timings.insert("group".to_string(), ms(t));

    let ps = geo.ps.clone();
    let group = &gs.group;
    let mut report = Report {
        schema: SCHEMA,
        input: Input { family, m: spec.dim, n: spec.n(), ell, seed: opts.seed },
        points: Points { nonsingular: ps.p.len(), singular: ps.p0.len() },
        params: geo.params,
        roots: [geo.roots.c, geo.roots.d],
        group: gs.info(),
        factors: Vec::new(),
        socle_series: Vec::new(),
        lattice: LatticeEntry::default(),
        verdict: Verdict::default(),
        timings_ms: timings,
    };
    let f = make_prime_field(ell as i64)?;
    let mcfg = MeataxeConfig { seed: opts.seed, ..MeataxeConfig::default() };

    let t = Instant::now();
    let m = Rank3Module::new(f, ps.clone(), &group.point_perms(), &group.singular_perms())?;
    check_cross_maps(&m, opts.seed)?;
    let [c, d] = report.roots;
    let (uc, ud) = (m.graph_submodule(c), m.graph_submodule(d));
    let known = vec![uc.clone(), ud.clone(), m.u_c(c), m.u_c(d), m.p.distinguished().0, m.p.distinguished().1];
    let chain = seed_chain(&m.p, known)?;
    report.timings_ms.insert("modules".to_string(), ms(t));

    let t = Instant::now();
    let factors = factors_along(&m.p, &chain, &mcfg)?;
    let mut classes = classify(&factors)?;
    sharpen_kits(&mut classes, &mcfg)?;
    let labels = label_classes(&classes, &exp);
    report.factors = classes
        .iter()
        .zip(&labels)
        .map(|(c, &label)| FactorEntry { label, dim: c.dim(), mult: c.mult, abs_irred: c.abs_irred })
        .collect();
    report.timings_ms.insert("factors".to_string(), ms(t));

    let t = Instant::now();
    let ctx = &m.p;
    let series = socle_series(ctx, &classes, &ctx.full(), &ctx.zero())?;
    report.socle_series = series.layers.iter().map(|l| entries(l, &classes, &labels)).collect();
    report.timings_ms.insert("socle".to_string(), ms(t));

    let t = Instant::now();
    let lattice = match submodule_lattice(ctx, &classes, &opts.lattice) {
        Ok(lat) => {
            lat.certify_closure()?;
            let perp = lat.certify_perp(ctx)?;
            lat.certify_head_socle(ctx, &classes, &perp)?;
            let (_, tp) = ctx.distinguished();
            let t_node = lat.find(&tp).ok_or_else(|| cert("T(FP) is not a lattice node"))?;
            let graph: Vec<usize> = [&uc, &ud]
                .iter()
                .map(|u| lat.find(u).ok_or_else(|| cert("a graph submodule is not a lattice node")))
                .collect::<Result<_>>()?;
            lat.certify_minimality(t_node, &graph)?;
            if lat.dims_along_chain(&classes) != ps.v() {
                return Err(cert("dimensions along a maximal chain do not sum to |P|"));
            }
            report.lattice = LatticeEntry {
                nodes: (0..lat.len())
                    .map(|i| NodeEntry {
                        id: i,
                        dim: lat.nodes[i].dim(),
                        factors: entries(&lat.factors[i], &classes, &labels),
                    })
                    .collect(),
                edges: lat.edges.iter().map(|&(a, b, _)| [a, b]).collect(),
            };
            Some(lat)
        }
        Err(Error::Budget(_)) => None,
        Err(e) => return Err(e),
    };
    report.timings_ms.insert("lattice".to_string(), ms(t));

    report.verdict = verify(&report, &exp);
    Ok(Analysis { report, module: m, classes, lattice })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIPPED")]
    Skipped,
    #[serde(rename = "ERROR")]
    Error,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SuiteEntry {
    pub family: Family,
    pub size: usize,
    pub ell: u32,
    pub status: Status,
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
}

/// One instance per verifiable row; U m=7 only when extended.
pub fn suite_instances(extended: bool) -> Vec<(Family, usize, u32)> {
    use Family::*;
    let mut v = vec![
        (OPlus, 3, 5),
        (OPlus, 3, 7),
        (OPlus, 3, 3),
        (OPlus, 4, 3),
        (OMinus, 3, 5),
        (OMinus, 3, 7),
        (OMinus, 3, 3),
        (OMinus, 4, 3),
        (OMinus, 4, 17),
        (Unitary, 4, 7),
        (Unitary, 4, 5),
        (Unitary, 4, 3),
        (Unitary, 5, 5),
        (Unitary, 5, 11),
        (Unitary, 5, 3),
        (Unitary, 6, 3),
    ];
    if extended {
        v.push((Unitary, 7, 3));
    }
    v
}

/// The odd unitary row at ℓ = 3 with n ≡ 1 (mod 3): its smallest instance.
pub const OUT_OF_SCALE_CASE: (Family, usize, u32) = (Family::Unitary, 9, 3);

/// The suite's marker for the row no desk-scale instance reaches.
pub fn out_of_scale_entry(opts: &Options) -> SuiteEntry {
    let (family, size, ell) = OUT_OF_SCALE_CASE;
    let note = match desk_scale_guard(space_spec(family, size).expect("listed"), opts.max_p_size) {
        Err(e) => format!("OUT_OF_SCALE: {e}"),
        Ok(()) => "OUT_OF_SCALE: not attempted".to_string(),
    };
    SuiteEntry { family, size, ell, status: Status::Skipped, note, report: None }
}

pub fn suite(opts: &Options, extended: bool) -> Vec<SuiteEntry> {
    let mut out: Vec<SuiteEntry> = suite_instances(extended)
        .into_par_iter()
        .map(|(family, size, ell)| match analyze(family, size, ell, opts) {
            Ok(r) => {
                let status = if r.verdict.matched { Status::Pass } else { Status::Fail };
                let note = r.verdict.flags.join(",");
                SuiteEntry { family, size, ell, status, note, report: Some(r) }
            }
            Err(e) => SuiteEntry { family, size, ell, status: Status::Error, note: e.to_string(), report: None },
        })
        .collect();
    out.push(out_of_scale_entry(opts));
    out.sort_by_key(|e| (e.family, e.size, e.ell));
    out
}
