//! Isometry-group generators, their permutation actions, order
//! certification, and the rank-3 check.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{cert, Result};
use crate::field::Gf4;
use crate::geometry::{coord, normalize, scale, unit, Family, MatGen, PointSets, Space, SpaceSpec, Vector};
use crate::perm::{orbit, Bsgs, Perm};

/// Vector-action degree up to which the order is certified by a complete
/// deterministic Schreier–Sims run rather than by the bound argument.
pub const DETERMINISTIC_DEGREE: usize = 2100;

/// The closed formula for |O±2n(2)| or |GUm(2)|.
pub fn formula_order(spec: SpaceSpec) -> BigUint {
    let one = BigUint::from(1u32);
    let two = |k: u64| BigUint::from(1u32) << k;
    match spec.family {
        Family::OPlus | Family::OMinus => {
            let n = spec.n() as u64;
            let top = if spec.family == Family::OPlus { two(n) - &one } else { two(n) + &one };
            let mut acc = BigUint::from(2u32) * two(n * (n - 1)) * top;
            for i in 1..n {
                acc *= two(2 * i) - &one;
            }
            acc
        }
        Family::Unitary => {
            let m = spec.dim as u64;
            let mut acc = two(m * (m - 1) / 2);
            for i in 1..=m {
                acc *= if i % 2 == 0 { two(i) - &one } else { two(i) + &one };
            }
            acc
        }
    }
}

/// True if `g` preserves the form (and Q for orthogonal spaces) on every
/// pair of basis vectors, hence everywhere.
pub fn is_isometry(space: &Space, g: &MatGen) -> bool {
    let m = space.dim();
    for i in 0..m {
        for j in 0..m {
            if space.form(g.rows[i], g.rows[j]) != space.form(unit(i), unit(j)) {
                return false;
            }
        }
        if space.family().is_orthogonal() && space.quadratic(g.rows[i]).ok() != space.quadratic(unit(i)).ok() {
            return false;
        }
    }
    true
}

/// t_v: x ↦ x + (x,v)v for Q(v) = 1.
pub fn transvection(space: &Space, v: Vector) -> MatGen {
    MatGen { rows: (0..space.dim()).map(|i| unit(i) ^ scale(v, space.form(unit(i), v))).collect() }
}

/// r_{v,λ}: x ↦ x + (λ − 1)(x,v)v for (v,v) = 1.
pub fn pseudo_reflection(space: &Space, v: Vector, lambda: Gf4) -> MatGen {
    let mu = lambda + Gf4::ONE;
    MatGen { rows: (0..space.dim()).map(|i| unit(i) ^ scale(v, mu * space.form(unit(i), v))).collect() }
}

fn pool_vectors(space: &Space) -> Vec<Vector> {
    let m = space.dim();
    let n = space.n();
    let mut b1: Vec<Vector> = (0..m).map(unit).collect();
    for i in 0..n {
        b1.push(space.e(i) ^ space.f(i));
        if !space.family().is_orthogonal() {
            b1.push(space.e(i) ^ scale(space.f(i), Gf4::TAU));
        }
    }
    let mut out = b1.clone();
    let lambdas: &[Gf4] = if space.family().is_orthogonal() { &[Gf4::ONE] } else { &Gf4::NONZERO };
    for (k, &u) in b1.iter().enumerate() {
        for &w in &b1[k + 1..] {
            for &l in lambdas {
                out.push(u ^ scale(w, l));
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    out.into_iter().map(normalize).filter(|&v| v != 0 && !space.is_singular(v) && seen.insert(v)).collect()
}

/// Reflections (transvections or pseudo-reflections) in a pool of
/// nonsingular vectors, each checked to be an isometry.
pub fn reflection_pool(space: &Space) -> Result<Vec<MatGen>> {
    let mut out = Vec::new();
    for v in pool_vectors(space) {
        if space.family().is_orthogonal() {
            out.push(transvection(space, v));
        } else {
            out.push(pseudo_reflection(space, v, Gf4::TAU));
            out.push(pseudo_reflection(space, v, Gf4::TAU2));
        }
    }
    for g in &out {
        if !is_isometry(space, g) {
            return Err(cert(format!("reflection {:?} is not an isometry", g.rows)));
        }
    }
    Ok(out)
}

/// Nonsingular vectors: the points themselves over F2, and the three
/// scalar multiples of each point over F4.
pub struct VectorIndex {
    vectors: Vec<Vector>,
}

impl VectorIndex {
    pub fn new(space: &Space, ps: &PointSets) -> VectorIndex {
        let mut vectors: Vec<Vector> = if space.family().is_orthogonal() {
            ps.p.clone()
        } else {
            ps.p.iter().flat_map(|&p| Gf4::NONZERO.iter().map(move |&l| scale(p, l))).collect()
        };
        vectors.sort_unstable();
        VectorIndex { vectors }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn perm(&self, g: &MatGen) -> Result<Perm> {
        let mut out = Vec::with_capacity(self.vectors.len());
        for &v in &self.vectors {
            let w = g.apply(v);
            let j =
                self.vectors.binary_search(&w).map_err(|_| cert("matrix maps a nonsingular vector outside the set"))?;
            out.push(j as u32);
        }
        Ok(Perm(out))
    }
}

/// Induced permutations of P and P⁰.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermPair {
    pub p: Perm,
    pub p0: Perm,
}

pub fn induced_perm(g: &MatGen, ps: &PointSets) -> Result<PermPair> {
    let map = |pts: &[Vector], lookup: &dyn Fn(Vector) -> Option<usize>| -> Result<Perm> {
        let mut out = Vec::with_capacity(pts.len());
        for &x in pts {
            let j = lookup(g.apply(x)).ok_or_else(|| cert("image point missing from the index; not an isometry"))?;
            out.push(j as u32);
        }
        Ok(Perm(out))
    };
    let p = map(&ps.p, &|x| ps.index_of(x))?;
    let p0 = map(&ps.p0, &|x| ps.index_of_singular(x))?;
    if !p.is_valid() || !p0.is_valid() {
        return Err(cert("induced map is not a bijection"));
    }
    Ok(PermPair { p, p0 })
}

/// Greedy subset of `pool` whose vector action reaches `target`, followed by
/// a removal pass.
fn prune(pool: &[Perm], target: &BigUint, seed: u64) -> Result<Vec<usize>> {
    let mut kept: Vec<usize> = Vec::new();
    let mut chain: Option<Bsgs> = None;
    for (i, g) in pool.iter().enumerate() {
        if chain.as_ref().is_some_and(|c| c.contains(g)) {
            continue;
        }
        kept.push(i);
        let gens: Vec<Perm> = kept.iter().map(|&k| pool[k].clone()).collect();
        let mut c = Bsgs::new(&gens);
        c.random_phase(seed, 25, Some(target));
        let done = &c.order() == target;
        chain = Some(c);
        if done {
            break;
        }
    }
    if chain.as_ref().is_none_or(|c| &c.order() != target) {
        return Err(cert("reflection pool does not generate the full isometry group"));
    }
    let mut k = kept.len();
    while k > 0 && kept.len() > 1 {
        k -= 1;
        let trial: Vec<Perm> =
            kept.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &i)| pool[i].clone()).collect();
        let mut c = Bsgs::new(&trial);
        c.random_phase(seed, 25, Some(target));
        if &c.order() == target {
            kept.remove(k);
        }
    }
    Ok(kept)
}

/// How the group order was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrderCertificate {
    /// A complete Schreier–Sims run, independent of the formula.
    Deterministic,
    /// Lower bound from a random Schreier–Sims phase meeting the isometry
    /// group order as upper bound.
    Bounds,
}

/// Generators, actions and certified order for one instance.
#[derive(Clone, Debug)]
pub struct GroupAction {
    /// Minimal generating subset of the reflection pool.
    pub reflections: Vec<MatGen>,
    /// Two random words in the reflections that still generate the group;
    /// these drive every module computation.
    pub gens: Vec<MatGen>,
    pub perms: Vec<PermPair>,
    /// Order of the faithful action on nonsingular vectors.
    pub order: BigUint,
    pub formula_order: BigUint,
    pub certificate: OrderCertificate,
    /// Order of the (possibly non-faithful) action on P.
    pub point_order: BigUint,
}

impl GroupAction {
    pub fn point_perms(&self) -> Vec<Perm> {
        self.perms.iter().map(|p| p.p.clone()).collect()
    }

    pub fn singular_perms(&self) -> Vec<Perm> {
        self.perms.iter().map(|p| p.p0.clone()).collect()
    }
}

// Random length: reflections are involutions or have determinant ≠ 1, so a
// fixed-length word could be trapped in a proper normal subgroup.
fn random_word(rng: &mut ChaCha8Rng, gens: &[MatGen]) -> MatGen {
    let m = gens[0].rows.len();
    let len = rng.gen_range(12..24);
    (0..len).fold(MatGen::identity(m), |acc, _| acc.then(&gens[rng.gen_range(0..gens.len())]))
}

/// Builds the reflection generators, two generating words, and certifies the
/// order of the generated group against the closed formula.
pub fn build_group(space: &Space, ps: &PointSets, seed: u64) -> Result<GroupAction> {
    build_group_with(space, ps, seed, true)
}

/// As `build_group`; with `deterministic` false the complete Schreier–Sims
/// run is skipped and the order rests on the bounds certificate.
pub fn build_group_with(space: &Space, ps: &PointSets, seed: u64, deterministic: bool) -> Result<GroupAction> {
    let pool = reflection_pool(space)?;
    let vi = VectorIndex::new(space, ps);
    let pool_perms: Vec<Perm> = pool.iter().map(|g| vi.perm(g)).collect::<Result<_>>()?;
    let formula = formula_order(space.spec);
    let kept = prune(&pool_perms, &formula, seed)?;
    let reflections: Vec<MatGen> = kept.iter().map(|&i| pool[i].clone()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f9e);
    let mut chosen = None;
    for _ in 0..64 {
        let words = vec![random_word(&mut rng, &reflections), random_word(&mut rng, &reflections)];
        let perms: Vec<Perm> = words.iter().map(|g| vi.perm(g)).collect::<Result<_>>()?;
        let mut c = Bsgs::new(&perms);
        c.random_phase(seed, 25, Some(&formula));
        if c.order() == formula {
            chosen = Some((words, perms));
            break;
        }
    }
    let (gens, vec_perms) = chosen.ok_or_else(|| cert("no pair of random words generates the full group"))?;

    let (order, certificate) = if deterministic && vi.len() <= DETERMINISTIC_DEGREE {
        let mut c = Bsgs::new(&vec_perms);
        c.complete();
        (c.order(), OrderCertificate::Deterministic)
    } else {
        // random phase reached the formula value, which bounds |G| above
        (formula.clone(), OrderCertificate::Bounds)
    };
    if order != formula {
        return Err(cert(format!("computed order {order} differs from the formula order {formula}")));
    }
    let perms: Vec<PermPair> = gens.iter().map(|g| induced_perm(g, ps)).collect::<Result<_>>()?;
    let point_perms: Vec<Perm> = perms.iter().map(|p| p.p.clone()).collect();
    let kernel = if space.family().is_orthogonal() { 1u32 } else { 3u32 };
    let point_target = &formula / kernel;
    let mut pc = Bsgs::new(&point_perms);
    pc.random_phase(seed, 25, Some(&point_target));
    if deterministic && ps.v() <= DETERMINISTIC_DEGREE {
        pc.complete();
    }
    let point_order = pc.order();
    if point_order != point_target {
        return Err(cert(format!("point action has order {point_order}, expected {point_target}")));
    }
    Ok(GroupAction { reflections, gens, perms, order, formula_order: formula, certificate, point_order })
}

/// Exact order of the group generated by the given matrices, computed on
/// their faithful action on nonsingular vectors.
pub fn matrix_group_order(space: &Space, ps: &PointSets, gens: &[MatGen]) -> Result<BigUint> {
    let vi = VectorIndex::new(space, ps);
    let perms: Vec<Perm> = gens.iter().map(|g| vi.perm(g)).collect::<Result<_>>()?;
    let mut c = Bsgs::new(&perms);
    c.random_phase(0, 20, None);
    c.complete();
    Ok(c.order())
}

/// Transitivity, rank, and suborbit lengths of the action on P.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankInfo {
    pub transitive: bool,
    pub rank: usize,
    /// Suborbit lengths at the base point, in order of first appearance.
    pub suborbits: Vec<usize>,
}

/// Orbitals as orbits on ordered pairs, each checked against the
/// {α}, Δ(α), Φ(α) partition from the geometry.
pub fn rank_and_orbitals(perms: &[Perm], ps: &PointSets, alpha0: usize) -> Result<RankInfo> {
    let v = ps.v();
    let transitive = orbit(perms, alpha0 as u32).len() == v;
    let mut seen = vec![0u64; (v * v).div_ceil(64)];
    let mark = |seen: &mut [u64], k: usize| -> bool {
        let (w, b) = (k / 64, k % 64);
        let fresh = seen[w] >> b & 1 == 0;
        seen[w] |= 1 << b;
        fresh
    };
    let mut suborbits = Vec::new();
    let mut class_of = vec![usize::MAX; v];
    for j in 0..v {
        if class_of[j] != usize::MAX {
            continue;
        }
        let start = alpha0 * v + j;
        if !mark(&mut seen, start) {
            continue;
        }
        let cls = suborbits.len();
        let mut queue = vec![start as u32];
        let mut count = 0;
        while let Some(k) = queue.pop() {
            let (x, y) = (k as usize / v, k as usize % v);
            if x == alpha0 {
                class_of[y] = cls;
                count += 1;
            }
            for g in perms {
                let nk = g.image(x as u32) as usize * v + g.image(y as u32) as usize;
                if mark(&mut seen, nk) {
                    queue.push(nk as u32);
                }
            }
        }
        suborbits.push(count);
    }
    let rank = suborbits.len();
    let info = RankInfo { transitive, rank, suborbits };
    if !transitive || rank != 3 {
        return Err(cert(format!("action is not rank 3: {info:?}")));
    }
    let delta_cls = class_of[ps.delta[alpha0][0] as usize];
    for (j, &cls) in class_of.iter().enumerate().take(v) {
        let expected_delta = ps.adjacent(alpha0, j);
        let same = if j == alpha0 { cls != delta_cls } else { (cls == delta_cls) == expected_delta };
        if !same {
            return Err(cert(format!("orbital of point {j} disagrees with the orthogonality classes")));
        }
    }
    Ok(info)
}

/// True if the permutation maps Δ-edges to Δ-edges.
pub fn preserves_adjacency(g: &Perm, ps: &PointSets) -> bool {
    (0..ps.v()).all(|i| ps.delta[i].iter().all(|&j| ps.adjacent(g.image(i as u32) as usize, g.image(j) as usize)))
}

/// True if α ⊥ β ⟺ αg ⊥ βg between P and P⁰.
pub fn preserves_cross_orthogonality(pp: &PermPair, ps: &PointSets) -> bool {
    (0..ps.v()).all(|i| {
        let mut img: Vec<u32> = ps.lambda[i].iter().map(|&j| pp.p0.image(j)).collect();
        img.sort_unstable();
        img == ps.lambda[pp.p.image(i as u32) as usize]
    })
}

/// First coordinate helper used when reporting generator matrices.
pub fn matrix_entries(g: &MatGen) -> Vec<Vec<Gf4>> {
    let m = g.rows.len();
    g.rows.iter().map(|&r| (0..m).map(|j| coord(r, j)).collect()).collect()
}
