//! Socles, socle series and the full submodule lattice of a permutation
//! module, built from homomorphisms out of the composition factors.

use std::collections::{HashMap, VecDeque};

use crate::action::PermSection;
use crate::error::{cert, Error, Result};
use crate::linalg::{Echelon, Matrix};
use crate::meataxe::{is_iso, FactorClass};
use crate::module::{ModCtx, Section, Submodule};

/// Socle of Top/Bot as an ambient submodule, with the multiplicity of
/// each factor class in it.
pub fn socle(
    ctx: &ModCtx,
    classes: &[FactorClass],
    top: &Submodule,
    bot: &Submodule,
) -> Result<(Submodule, Vec<usize>)> {
    let f = &ctx.f;
    let sec = Section::new(f, top.clone(), bot.clone())?;
    let act = PermSection::new(ctx, &sec);
    let mut local = Echelon::zero(sec.dim());
    let mut counts = Vec::with_capacity(classes.len());
    for c in classes {
        let img = c.kit.image_sum(&act)?;
        if img.dim() % c.dim() != 0 {
            return Err(cert("homogeneous component dimension is not a multiple of the factor dimension"));
        }
        counts.push(img.dim() / c.dim());
        local = local.sum(f, &img);
    }
    if sec.dim() > 0 && local.dim() == 0 {
        return Err(cert("nonzero section with zero socle; a composition factor is missing"));
    }
    Ok((sec.lift_sub(f, &local), counts))
}

#[derive(Clone, Debug)]
pub struct SocleSeries {
    /// Bot = S₀ ⊂ S₁ ⊂ ⋯ ⊂ S_k = Top.
    pub chain: Vec<Submodule>,
    /// Class multiplicities of each layer Sᵢ/Sᵢ₋₁.
    pub layers: Vec<Vec<usize>>,
}

pub fn socle_series(ctx: &ModCtx, classes: &[FactorClass], top: &Submodule, bot: &Submodule) -> Result<SocleSeries> {
    let mut chain = vec![bot.clone()];
    let mut layers = Vec::new();
    while chain.last().map(|s| s.dim()) != Some(top.dim()) {
        let cur = chain.last().expect("chain is nonempty");
        let (s, counts) = socle(ctx, classes, top, cur)?;
        if s.dim() <= cur.dim() {
            return Err(cert("socle series stalled"));
        }
        chain.push(s);
        layers.push(counts);
    }
    Ok(SocleSeries { chain, layers })
}

#[derive(Clone, Copy, Debug)]
pub struct LatticeConfig {
    /// Largest composition length accepted.
    pub length_bound: usize,
    pub node_budget: usize,
    /// Largest multiplicity of one class in a socle layer that is enumerated.
    pub max_mult: usize,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig { length_bound: 8, node_budget: 5000, max_mult: 3 }
    }
}

/// Submodules ordered by (dimension, basis), with covering edges labelled by
/// the factor class of the quotient.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub nodes: Vec<Submodule>,
    /// (lower, upper, class)
    pub edges: Vec<(usize, usize, usize)>,
    /// Class multiplicities of each node.
    pub factors: Vec<Vec<usize>>,
    index: HashMap<Echelon, usize>,
    /// above[i] has bit j set iff node i ⊆ node j.
    above: Vec<Vec<u64>>,
}

/// Points of the projective space P^{k−1}(F_ℓ): first nonzero coordinate 1.
fn projective_points(p: u32, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for lead in 0..k {
        let free = k - lead - 1;
        let total = (p as usize).pow(free as u32);
        for mut t in 0..total {
            let mut x = vec![0u8; k];
            x[lead] = 1;
            for slot in x.iter_mut().skip(lead + 1) {
                *slot = (t % p as usize) as u8;
                t /= p as usize;
            }
            out.push(x);
        }
    }
    out
}

pub fn submodule_lattice(ctx: &ModCtx, classes: &[FactorClass], cfg: &LatticeConfig) -> Result<Lattice> {
    let f = &ctx.f;
    let n = ctx.dim();
    let length: usize = classes.iter().map(|c| c.mult).sum();
    if length > cfg.length_bound {
        return Err(Error::Budget(format!(
            "composition length {length} exceeds the lattice length bound {}; raise the bound to enumerate",
            cfg.length_bound
        )));
    }
    let mut nodes = vec![Echelon::zero(n)];
    let mut factors = vec![vec![0usize; classes.len()]];
    let mut index: HashMap<Echelon, usize> = HashMap::new();
    index.insert(nodes[0].clone(), 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let full = Echelon::full(n);
    while let Some(i) = queue.pop_front() {
        if nodes[i].dim() == n {
            continue;
        }
        let sec = Section::new(f, full.clone(), nodes[i].clone())?;
        let act = PermSection::new(ctx, &sec);
        for (ci, c) in classes.iter().enumerate() {
            let maps = c.kit.hom_into(&act)?;
            let k = maps.len();
            if k == 0 {
                continue;
            }
            if k > cfg.max_mult * c.kit.hom_into(&c.kit.rep)?.len() {
                return Err(Error::Budget(format!("homogeneous socle multiplicity {k} exceeds the enumeration cap")));
            }
            for x in projective_points(f.modulus(), k) {
                let mut h = Matrix::zeros(c.dim(), sec.dim());
                for (m, &s) in maps.iter().zip(&x) {
                    if s != 0 {
                        h = crate::linalg::mat_add(f, &h, &crate::linalg::mat_scale(f, m, s));
                    }
                }
                let img = Echelon::from_rows(f, h);
                if img.dim() != c.dim() {
                    return Err(cert("nonzero map from a simple module is not injective"));
                }
                let up = sec.lift_sub(f, &img);
                let j = match index.get(&up) {
                    Some(&j) => j,
                    None => {
                        if nodes.len() >= cfg.node_budget {
                            return Err(Error::Budget(format!(
                                "submodule lattice exceeds {} nodes; lower the length bound",
                                cfg.node_budget
                            )));
                        }
                        let j = nodes.len();
                        let mut fac = factors[i].clone();
                        fac[ci] += 1;
                        index.insert(up.clone(), j);
                        nodes.push(up);
                        factors.push(fac);
                        queue.push_back(j);
                        j
                    }
                };
                edges.push((i, j, ci));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Lattice::canonical(nodes, edges, factors)
}

impl Lattice {
    fn canonical(
        nodes: Vec<Submodule>,
        edges: Vec<(usize, usize, usize)>,
        factors: Vec<Vec<usize>>,
    ) -> Result<Lattice> {
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (&nodes[a], &nodes[b]);
            (x.dim(), x.pivots(), x.basis().data()).cmp(&(y.dim(), y.pivots(), y.basis().data()))
        });
        let mut rank = vec![0; nodes.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let mut nodes_sorted = Vec::with_capacity(nodes.len());
        let mut factors_sorted = Vec::with_capacity(nodes.len());
        let mut slots: Vec<Option<Submodule>> = nodes.into_iter().map(Some).collect();
        for &old in &order {
            nodes_sorted.push(slots[old].take().expect("each node moved once"));
            factors_sorted.push(factors[old].clone());
        }
        let mut e: Vec<(usize, usize, usize)> = edges.into_iter().map(|(a, b, c)| (rank[a], rank[b], c)).collect();
        e.sort_unstable();
        let index = nodes_sorted.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut lat = Lattice { nodes: nodes_sorted, edges: e, factors: factors_sorted, index, above: Vec::new() };
        lat.above = lat.reachability();
        Ok(lat)
    }

    fn reachability(&self) -> Vec<Vec<u64>> {
        let n = self.nodes.len();
        let words = n.div_ceil(64);
        let mut above = vec![vec![0u64; words]; n];
        let mut succ = vec![Vec::new(); n];
        for &(a, b, _) in &self.edges {
            succ[a].push(b);
        }
        // nodes are sorted by dimension and edges go up, so reverse order works
        for i in (0..n).rev() {
            above[i][i / 64] |= 1 << (i % 64);
            for &j in &succ[i] {
                let (lo, hi) = above.split_at_mut(j);
                for (w, &v) in lo[i].iter_mut().zip(&hi[0]) {
                    *w |= v;
                }
            }
        }
        above
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.nodes.iter().map(|n| n.dim()).collect()
    }

    pub fn find(&self, s: &Submodule) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Node i ⊆ node j, read from the covering edges.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.above[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Every pair has a join and a meet among the nodes, certified by
    /// dim(join) + dim(meet) = dim A + dim B with the order taken from edges.
    pub fn certify_closure(&self) -> Result<()> {
        let n = self.len();
        let dims = self.dims();
        if dims[0] != 0 || dims[n - 1] != self.nodes[0].ambient() {
            return Err(cert("lattice is missing the zero or the full module"));
        }
        for a in 0..n {
            for b in a + 1..n {
                let join = (0..n).filter(|&u| self.le(a, u) && self.le(b, u)).min_by_key(|&u| dims[u]);
                let meet = (0..n).filter(|&l| self.le(l, a) && self.le(l, b)).max_by_key(|&l| dims[l]);
                match (join, meet) {
                    (Some(u), Some(l)) if dims[u] + dims[l] == dims[a] + dims[b] => {}
                    _ => return Err(cert(format!("nodes {a} and {b} have no sum or intersection in the lattice"))),
                }
            }
        }
        Ok(())
    }

    /// N ↦ N⊥ maps the node set onto itself and reverses every edge.
    pub fn certify_perp(&self, ctx: &ModCtx) -> Result<Vec<usize>> {
        let mut perp = Vec::with_capacity(self.len());
        for s in &self.nodes {
            let p = s.perp(&ctx.f);
            perp.push(self.find(&p).ok_or_else(|| cert("perp of a submodule is not in the lattice"))?);
        }
        let mut edges: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b, _)| (a, b)).collect();
        edges.sort_unstable();
        for &(a, b, _) in &self.edges {
            if edges.binary_search(&(perp[b], perp[a])).is_err() {
                return Err(cert("perp does not reverse the covering relation"));
            }
        }
        Ok(perp)
    }

    /// Classes labelling edges that leave `low` towards nodes inside `high`.
    fn socle_labels(&self, low: usize, high: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.0 == low && self.le(e.1, high)).map(|e| e.2).collect()
    }

    /// Classes labelling edges that enter `high` from nodes above `low`.
    fn head_labels(&self, low: usize, high: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.1 == high && self.le(low, e.0)).map(|e| e.2).collect()
    }

    /// For each node N that is nondegenerate (N ∩ N⊥ = 0) or contains its
    /// perp, the section N/(N ∩ N⊥) is self-dual; if its socle is simple and
    /// self-dual its head must be the same simple module. Returns the number
    /// of sections checked.
    pub fn certify_head_socle(&self, ctx: &ModCtx, classes: &[FactorClass], perp: &[usize]) -> Result<usize> {
        let self_dual: Vec<bool> =
            classes.iter().map(|c| c.kit.rep.dual().and_then(|d| is_iso(&c.kit, &d))).collect::<Result<_>>()?;
        let mut checked = 0;
        for (node, &pn) in perp.iter().enumerate().skip(1) {
            let low = if self.le(pn, node) {
                pn
            } else {
                let meet = self.nodes[node].intersect(&ctx.f, &self.nodes[pn]);
                if meet.dim() != 0 {
                    continue;
                }
                0
            };
            if low == node {
                continue;
            }
            let soc = self.socle_labels(low, node);
            if soc.len() != 1 || !self_dual[soc[0]] {
                continue;
            }
            let head = self.head_labels(low, node);
            if head.is_empty() || head.iter().any(|&h| h != soc[0]) {
                return Err(cert(format!("self-dual section at node {node} has socle and head that differ")));
            }
            checked += 1;
        }
        Ok(checked)
    }

    /// Every nonzero node other than `t` contains one of `graph_nodes`.
    pub fn certify_minimality(&self, t: usize, graph_nodes: &[usize]) -> Result<()> {
        for node in 1..self.len() {
            if node != t && !graph_nodes.iter().any(|&g| self.le(g, node)) {
                return Err(cert(format!("node {node} contains no graph submodule")));
            }
        }
        Ok(())
    }

    /// Classes along a maximal chain from 0 to the top, one per edge.
    pub fn dims_along_chain(&self, classes: &[FactorClass]) -> usize {
        let mut cur = 0;
        let mut total = 0;
        while cur != self.top() {
            let Some(&(_, b, c)) = self.edges.iter().find(|e| e.0 == cur) else { break };
            total += classes[c].dim();
            cur = b;
        }
        total
    }
}
