//! Permutation modules FP and FP⁰, submodules by spinning, and sections
//! (subquotients) with their induced dense representations.

use std::sync::Arc;

use crate::error::{cert, invalid, Result};
use crate::field::{Elem, PrimeField};
use crate::geometry::PointSets;
use crate::linalg::{dot, inverse, mat_mul, Echelon, Matrix};
use crate::perm::Perm;

/// Subspaces are kept as canonical echelon bases.
pub type Submodule = Echelon;

/// A generator acting on row vectors.
#[derive(Clone, Debug)]
pub enum Gen {
    /// Coordinate permutation: coefficient at i moves to position image(i).
    Perm(Perm),
    Dense(Matrix),
}

impl Gen {
    pub fn dim(&self) -> usize {
        match self {
            Gen::Perm(p) => p.degree(),
            Gen::Dense(m) => m.rows(),
        }
    }

    pub fn apply(&self, f: &PrimeField, x: &Matrix) -> Matrix {
        match self {
            Gen::Perm(p) => permute_cols(x, p),
            Gen::Dense(m) => mat_mul(f, x, m),
        }
    }
}

pub fn permute_cols(x: &Matrix, p: &Perm) -> Matrix {
    let mut out = Matrix::zeros(x.rows(), x.cols());
    for r in 0..x.rows() {
        let src = x.row(r);
        let dst = out.row_mut(r);
        for (i, &c) in src.iter().enumerate() {
            dst[p.0[i] as usize] = c;
        }
    }
    out
}

/// Smallest generator-closed subspace containing the rows of `seeds`.
pub fn spin(f: &PrimeField, gens: &[Gen], seeds: &Matrix) -> Submodule {
    spin_from(f, gens, Echelon::zero(seeds.cols()), seeds)
}

/// Spins `seeds` on top of an already closed subspace `base`.
pub fn spin_from(f: &PrimeField, gens: &[Gen], mut base: Echelon, seeds: &Matrix) -> Submodule {
    let mut frontier = base.extend(f, seeds);
    while frontier.rows() > 0 {
        let images: Vec<Matrix> = gens.iter().map(|g| g.apply(f, &frontier)).collect();
        let refs: Vec<&Matrix> = images.iter().collect();
        frontier = base.extend(f, &Matrix::stack(&refs));
    }
    base
}

/// Closure certificate: every generator maps every basis row into the space.
pub fn is_closed(f: &PrimeField, gens: &[Gen], e: &Echelon) -> bool {
    gens.iter().all(|g| e.contains_all(f, &g.apply(f, e.basis())))
}

/// A permutation module FΩ with its generator permutations.
#[derive(Clone, Debug)]
pub struct ModCtx {
    pub f: PrimeField,
    pub gens: Vec<Gen>,
    dim: usize,
}

impl ModCtx {
    pub fn new(f: PrimeField, perms: &[Perm]) -> Result<ModCtx> {
        let dim = perms.first().map_or(0, |p| p.degree());
        if perms.iter().any(|p| p.degree() != dim || !p.is_valid()) {
            return Err(invalid("generators must be permutations of a common degree"));
        }
        Ok(ModCtx { f, gens: perms.iter().cloned().map(Gen::Perm).collect(), dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> Vec<Elem> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    pub fn spin(&self, seeds: &Matrix) -> Submodule {
        spin(&self.f, &self.gens, seeds)
    }

    pub fn certify(&self, e: &Echelon) -> Result<()> {
        if e.ambient() != self.dim || !is_closed(&self.f, &self.gens, e) {
            return Err(cert("subspace is not closed under the generators"));
        }
        Ok(())
    }

    pub fn zero(&self) -> Submodule {
        Echelon::zero(self.dim)
    }

    pub fn full(&self) -> Submodule {
        Echelon::full(self.dim)
    }

    /// (S(FΩ), T(FΩ)): coefficient-sum zero vectors, and multiples of [Ω].
    pub fn distinguished(&self) -> (Submodule, Submodule) {
        let n = self.dim;
        let mut s = Matrix::zeros(0, n);
        for i in 1..n {
            let mut r = vec![0; n];
            r[0] = 1;
            r[i] = self.f.neg(1);
            s.push_row(&r);
        }
        let t = Matrix::from_vec(1, n, vec![1; n]);
        (Echelon::from_rows(&self.f, s), Echelon::from_rows(&self.f, t))
    }

    pub fn inner(&self, u: &[Elem], v: &[Elem]) -> Elem {
        dot(&self.f, u, v)
    }

    pub fn perp(&self, e: &Submodule) -> Result<Submodule> {
        let p = e.perp(&self.f);
        self.certify(&p)?;
        Ok(p)
    }

    pub fn sum(&self, a: &Submodule, b: &Submodule) -> Submodule {
        a.sum(&self.f, b)
    }

    pub fn intersect(&self, a: &Submodule, b: &Submodule) -> Submodule {
        a.intersect(&self.f, b)
    }
}

/// FP and FP⁰ together with the adjacency operator and the cross maps.
#[derive(Clone, Debug)]
pub struct Rank3Module {
    pub p: ModCtx,
    pub p0: ModCtx,
    pub ps: Arc<PointSets>,
}

impl Rank3Module {
    pub fn new(f: PrimeField, ps: Arc<PointSets>, p_perms: &[Perm], p0_perms: &[Perm]) -> Result<Rank3Module> {
        let p = ModCtx::new(f.clone(), p_perms)?;
        let p0 = ModCtx::new(f, p0_perms)?;
        if p.dim() != ps.v() || p0.dim() != ps.p0.len() {
            return Err(invalid("generator degrees do not match the point sets"));
        }
        Ok(Rank3Module { p, p0, ps })
    }

    pub fn field(&self) -> &PrimeField {
        &self.p.f
    }

    /// [Δ(α)].
    pub fn delta_sum(&self, alpha: usize) -> Result<Vec<Elem>> {
        if alpha >= self.ps.v() {
            return Err(invalid(format!("point {alpha} is not a nonsingular point index")));
        }
        let mut v = vec![0; self.ps.v()];
        for &j in &self.ps.delta[alpha] {
            v[j as usize] = 1;
        }
        Ok(v)
    }

    /// Rows of `x` multiplied by the adjacency matrix.
    pub fn apply_t(&self, x: &Matrix) -> Matrix {
        gather(&self.p.f, x, &self.ps.delta, self.ps.v())
    }

    /// v_{c,α} = cα + [Δ(α)].
    pub fn v_c(&self, c: i64, alpha: usize) -> Result<Vec<Elem>> {
        let mut v = self.delta_sum(alpha)?;
        v[alpha] = self.p.f.reduce_int(c as i128);
        Ok(v)
    }

    fn v_c_all(&self, c: i64) -> Matrix {
        let n = self.ps.v();
        let mut m = Matrix::zeros(n, n);
        let cc = self.p.f.reduce_int(c as i128);
        for a in 0..n {
            let row = m.row_mut(a);
            for &j in &self.ps.delta[a] {
                row[j as usize] = 1;
            }
            row[a] = cc;
        }
        m
    }

    /// U′_c: spanned by v_{c,α} − v_{c,β}. Spinning the differences against a
    /// fixed α₀ suffices by transitivity.
    pub fn graph_submodule(&self, c: i64) -> Submodule {
        let f = &self.p.f;
        let n = self.ps.v();
        let base = self.v_c(c, 0).expect("point 0 exists");
        let mut seeds = Matrix::zeros(0, n);
        for b in 1..n {
            let vb = self.v_c(c, b).expect("index in range");
            let d: Vec<Elem> = base.iter().zip(&vb).map(|(&x, &y)| f.sub(x, y)).collect();
            seeds.push_row(&d);
        }
        self.p.spin(&seeds)
    }

    /// U_c: spanned by all v_{c,α}.
    pub fn u_c(&self, c: i64) -> Submodule {
        self.p.spin(&self.v_c_all(c))
    }

    /// Q: α ↦ [Λ(α)], from FP to FP⁰.
    pub fn q_apply(&self, x: &Matrix) -> Matrix {
        scatter(&self.p.f, x, &self.ps.lambda, self.ps.p0.len())
    }

    /// R: β ↦ [Γ(β)], from FP⁰ to FP.
    pub fn r_apply(&self, y: &Matrix) -> Matrix {
        scatter(&self.p.f, y, &self.ps.gamma, self.ps.v())
    }
}

// out[r][j] = Σ_{i ∈ nbrs[j]} x[r][i]
fn gather(f: &PrimeField, x: &Matrix, nbrs: &[Vec<u32>], cols: usize) -> Matrix {
    let mut out = Matrix::zeros(x.rows(), cols);
    for r in 0..x.rows() {
        let src = x.row(r);
        let dst = out.row_mut(r);
        for (j, nb) in nbrs.iter().enumerate() {
            let s: u32 = nb.iter().map(|&i| src[i as usize] as u32).sum();
            dst[j] = f.reduce_u32(s);
        }
    }
    out
}

// out[r][j] = Σ_{i : j ∈ nbrs[i]} x[r][i]
fn scatter(f: &PrimeField, x: &Matrix, nbrs: &[Vec<u32>], cols: usize) -> Matrix {
    let mut out = Matrix::zeros(x.rows(), cols);
    let mut acc = vec![0u32; cols];
    for r in 0..x.rows() {
        acc.iter_mut().for_each(|a| *a = 0);
        for (i, &c) in x.row(r).iter().enumerate() {
            if c != 0 {
                for &j in &nbrs[i] {
                    acc[j as usize] += c as u32;
                }
            }
        }
        for (d, &a) in out.row_mut(r).iter_mut().zip(&acc) {
            *d = f.reduce_u32(a);
        }
    }
    out
}

/// Dense matrix representation: one invertible matrix per generator, acting
/// on row vectors.
#[derive(Clone, Debug)]
pub struct ModuleRep {
    pub f: PrimeField,
    pub gens: Vec<Matrix>,
    dim: usize,
}

impl ModuleRep {
    pub fn new(f: PrimeField, gens: Vec<Matrix>) -> Result<ModuleRep> {
        let dim = gens.first().map_or(0, |g| g.rows());
        if gens.iter().any(|g| g.rows() != dim || g.cols() != dim) {
            return Err(invalid("generator matrices must be square of a common size"));
        }
        Ok(ModuleRep { f, gens, dim })
    }

    /// The zero module with `k` generators.
    pub fn zero(f: PrimeField, k: usize) -> ModuleRep {
        ModuleRep { f, gens: vec![Matrix::zeros(0, 0); k], dim: 0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn dense_gens(&self) -> Vec<Gen> {
        self.gens.iter().cloned().map(Gen::Dense).collect()
    }

    pub fn spin(&self, seeds: &Matrix) -> Submodule {
        spin(&self.f, &self.dense_gens(), seeds)
    }

    /// Matrix of a word given as generator indices, applied left to right.
    pub fn word(&self, w: &[usize]) -> Matrix {
        w.iter().fold(Matrix::identity(self.dim), |acc, &i| mat_mul(&self.f, &acc, &self.gens[i]))
    }

    pub fn transposed(&self) -> ModuleRep {
        ModuleRep { f: self.f.clone(), gens: self.gens.iter().map(|g| g.transpose()).collect(), dim: self.dim }
    }

    /// Contragredient module: g ↦ (g⁻¹)ᵀ.
    pub fn dual(&self) -> Result<ModuleRep> {
        let gens = self
            .gens
            .iter()
            .map(|g| inverse(&self.f, g).map(|i| i.transpose()).ok_or_else(|| cert("generator matrix is singular")))
            .collect::<Result<_>>()?;
        Ok(ModuleRep { f: self.f.clone(), gens, dim: self.dim })
    }

    /// Subrepresentation on a closed subspace given in echelon form.
    pub fn sub(&self, e: &Echelon) -> Result<ModuleRep> {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let img = mat_mul(&self.f, e.basis(), g);
                if !e.contains_all(&self.f, &img) {
                    return Err(cert("subspace is not invariant"));
                }
                Ok(img.select_cols(e.pivots()))
            })
            .collect::<Result<_>>()?;
        Ok(ModuleRep { f: self.f.clone(), gens, dim: e.dim() })
    }

    /// Quotient by a closed subspace, on the complement of its pivots.
    pub fn quotient(&self, e: &Echelon) -> Result<ModuleRep> {
        let keep = complement_pivots(e.pivots(), self.dim);
        let mut basis = Matrix::zeros(0, self.dim);
        for &j in &keep {
            let mut r = vec![0; self.dim];
            r[j] = 1;
            basis.push_row(&r);
        }
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let img = e.reduce_rows(&self.f, &mat_mul(&self.f, &basis, g));
                img.select_cols(&keep)
            })
            .collect();
        if !is_closed(&self.f, &self.dense_gens(), e) {
            return Err(cert("subspace is not invariant"));
        }
        Ok(ModuleRep { f: self.f.clone(), gens, dim: keep.len() })
    }

    /// The generator with index `i` acts as the identity.
    pub fn acts_trivially(&self, i: usize) -> bool {
        self.gens[i] == Matrix::identity(self.dim)
    }
}

fn complement_pivots(pivots: &[usize], n: usize) -> Vec<usize> {
    let mut is_piv = vec![false; n];
    for &p in pivots {
        is_piv[p] = true;
    }
    (0..n).filter(|&j| !is_piv[j]).collect()
}

/// Subquotient Top/Bot of a module given by generators on an ambient space.
/// Vectors of the section are ambient rows reduced modulo Bot; `comp` is the
/// reduced echelon basis of a complement of Bot in Top.
#[derive(Clone, Debug)]
pub struct Section {
    pub top: Submodule,
    pub bot: Submodule,
    comp: Echelon,
}

impl Section {
    pub fn new(f: &PrimeField, top: Submodule, bot: Submodule) -> Result<Section> {
        if !top.contains_space(f, &bot) {
            return Err(invalid("section bottom is not contained in its top"));
        }
        let comp = Echelon::from_rows(f, bot.reduce_rows(f, top.basis()));
        Ok(Section { top, bot, comp })
    }

    pub fn whole(n: usize) -> Section {
        Section { top: Echelon::full(n), bot: Echelon::zero(n), comp: Echelon::full(n) }
    }

    pub fn dim(&self) -> usize {
        self.comp.dim()
    }

    pub fn ambient(&self) -> usize {
        self.top.ambient()
    }

    pub fn complement(&self) -> &Matrix {
        self.comp.basis()
    }

    /// Local coordinates of ambient rows lying in Top.
    pub fn coords(&self, f: &PrimeField, x: &Matrix) -> Matrix {
        self.bot.reduce_rows(f, x).select_cols(self.comp.pivots())
    }

    /// Ambient representatives of local coordinate rows.
    pub fn lift(&self, f: &PrimeField, x: &Matrix) -> Matrix {
        if x.rows() == 0 {
            return Matrix::zeros(0, self.ambient());
        }
        mat_mul(f, x, self.comp.basis())
    }

    /// Submodule of the ambient module between Bot and Top corresponding to a
    /// local subspace.
    pub fn lift_sub(&self, f: &PrimeField, local: &Echelon) -> Submodule {
        let mut out = self.bot.clone();
        out.extend(f, &self.lift(f, local.basis()));
        out
    }

    /// Local subspace for an ambient submodule between Bot and Top.
    pub fn local_sub(&self, f: &PrimeField, sub: &Submodule) -> Echelon {
        Echelon::from_rows(f, self.coords(f, sub.basis()))
    }

    /// Dense representation on the complement coordinates, certified
    /// generator by generator.
    pub fn rep(&self, f: &PrimeField, gens: &[Gen]) -> Result<ModuleRep> {
        let mut mats = Vec::with_capacity(gens.len());
        for g in gens {
            let img = g.apply(f, self.comp.basis());
            if !self.top.contains_all(f, &img) {
                return Err(cert("generator does not preserve the section top"));
            }
            let red = self.bot.reduce_rows(f, &img);
            let local = red.select_cols(self.comp.pivots());
            let back = self.lift(f, &local);
            if back != red {
                return Err(cert("generator image does not reduce into the complement"));
            }
            mats.push(local);
        }
        if !is_closed(f, gens, &self.bot) {
            return Err(cert("generator does not preserve the section bottom"));
        }
        ModuleRep::new(f.clone(), mats)
    }
}
