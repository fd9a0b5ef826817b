//! Composition factors (meataxe with Norton's irreducibility test), and
//! homomorphisms out of irreducible modules by the standard-basis method.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::action::{Action, AlgElem};
use crate::error::{cert, Error, Result};
use crate::field::{Elem, PrimeField};
use crate::linalg::{inverse, left_kernel, mat_mul, mat_sub, right_kernel, Echelon, Matrix};
use crate::module::{spin, ModuleRep};
use crate::poly::{charpoly, low_degree_factors, Poly};

#[derive(Clone, Copy, Debug)]
pub struct MeataxeConfig {
    pub seed: u64,
    /// Random algebra elements tried per split before giving up.
    pub budget: usize,
    /// Maximal word length in a random element.
    pub max_len: usize,
    /// Largest characteristic-polynomial factor degree examined.
    pub max_deg: usize,
}

impl Default for MeataxeConfig {
    fn default() -> Self {
        MeataxeConfig { seed: 0, budget: 300, max_len: 8, max_deg: 4 }
    }
}

/// Norton certificate: p is irreducible, p(A) has nullity deg p, a kernel
/// vector generates the module and a kernel vector of p(A)ᵀ generates the
/// transposed module.
#[derive(Clone, Debug)]
pub struct IrredCert {
    pub elem: AlgElem,
    pub poly: Poly,
}

#[derive(Clone, Debug)]
pub enum Split {
    Irreducible(IrredCert),
    Reducible(Echelon),
}

pub fn split(rep: &ModuleRep, rng: &mut ChaCha8Rng, cfg: &MeataxeConfig) -> Result<Split> {
    let f = &rep.f;
    let n = rep.dim();
    if n == 0 {
        return Err(cert("cannot split the zero module"));
    }
    let gens = rep.dense_gens();
    let tgens = rep.transposed().dense_gens();
    let max_deg = if n <= 8 { n } else { cfg.max_deg };
    for _ in 0..cfg.budget {
        let elem = AlgElem::random(rng, f, rep.ngens(), cfg.max_len);
        let a = elem.dense(rep);
        let cp = charpoly(f, &a);
        for p in low_degree_factors(f, &cp, max_deg, rng) {
            let np = p.eval_matrix(f, &a);
            let k = left_kernel(f, &np);
            let s = spin(f, &gens, &Matrix::from_vec(1, n, k.row(0).to_vec()));
            if s.dim() < n {
                return Ok(Split::Reducible(s));
            }
            if k.rows() != p.degree() {
                continue;
            }
            let kt = right_kernel(f, &np);
            let st = spin(f, &tgens, &Matrix::from_vec(1, n, kt.row(0).to_vec()));
            if st.dim() < n {
                return Ok(Split::Reducible(st.perp(f)));
            }
            return Ok(Split::Irreducible(IrredCert { elem, poly: p }));
        }
    }
    Err(Error::Budget(format!(
        "no split or irreducibility certificate for a module of dimension {n} after {} elements",
        cfg.budget
    )))
}

/// A composition factor with its certificate.
#[derive(Clone, Debug)]
pub struct Factor {
    pub rep: ModuleRep,
    pub cert: IrredCert,
}

/// Composition factors, bottom to top of the series found.
pub fn chop(rep: &ModuleRep, cfg: &MeataxeConfig) -> Result<Vec<Factor>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    chop_into(rep.clone(), &mut rng, cfg, &mut out)?;
    Ok(out)
}

fn chop_into(rep: ModuleRep, rng: &mut ChaCha8Rng, cfg: &MeataxeConfig, out: &mut Vec<Factor>) -> Result<()> {
    if rep.dim() == 0 {
        return Ok(());
    }
    match split(&rep, rng, cfg)? {
        Split::Irreducible(c) => out.push(Factor { rep, cert: c }),
        Split::Reducible(s) => {
            let sub = rep.sub(&s)?;
            let quo = rep.quotient(&s)?;
            chop_into(sub, rng, cfg, out)?;
            chop_into(quo, rng, cfg, out)?;
        }
    }
    Ok(())
}

/// Traces of the prefixes of a fixed generator chain; equal for
/// isomorphic modules on the same generators.
pub fn fingerprint(rep: &ModuleRep) -> Vec<Elem> {
    const CHAIN: [usize; 16] = [0, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 1, 0, 0, 0, 1];
    let f = &rep.f;
    let k = rep.ngens().max(1);
    let mut w = Matrix::identity(rep.dim());
    let mut out = Vec::with_capacity(CHAIN.len());
    for (t, &g) in CHAIN.iter().enumerate() {
        w = mat_mul(f, &w, &rep.gens[(g + t) % k]);
        out.push(w.trace(f));
    }
    out
}

/// Standard basis of an irreducible module from a kernel vector of p(A),
/// recording how each basis vector arises from an earlier one.
#[derive(Clone, Debug)]
pub struct HomKit {
    pub rep: ModuleRep,
    pub elem: AlgElem,
    pub poly: Poly,
    tree: Vec<(usize, usize)>,
    binv: Matrix,
    cg: Vec<Matrix>,
}

impl HomKit {
    pub fn new(rep: ModuleRep, elem: AlgElem, poly: Poly) -> Result<HomKit> {
        let f = rep.f.clone();
        let n = rep.dim();
        let k = rep.poly_kernel(&elem, &poly);
        if k.rows() == 0 {
            return Err(cert("kit polynomial has trivial kernel"));
        }
        let mut basis = Matrix::from_vec(1, n, k.row(0).to_vec());
        let mut span = Echelon::from_rows(&f, basis.clone());
        let mut tree = vec![(usize::MAX, usize::MAX)];
        let mut i = 0;
        while i < basis.rows() && basis.rows() < n {
            let b = Matrix::from_vec(1, n, basis.row(i).to_vec());
            for (g, gm) in rep.gens.iter().enumerate() {
                let img = mat_mul(&f, &b, gm);
                if span.extend(&f, &img).rows() > 0 {
                    basis.push_row(img.row(0));
                    tree.push((i, g));
                }
            }
            i += 1;
        }
        if basis.rows() != n {
            return Err(cert("kernel vector does not generate the module; it is not irreducible"));
        }
        let binv = inverse(&f, &basis).ok_or_else(|| cert("standard basis is singular"))?;
        let cg = rep.gens.iter().map(|g| mat_mul(&f, &mat_mul(&f, &basis, g), &binv)).collect();
        Ok(HomKit { rep, elem, poly, tree, binv, cg })
    }

    pub fn from_factor(fac: &Factor) -> Result<HomKit> {
        HomKit::new(fac.rep.clone(), fac.cert.elem.clone(), fac.cert.poly.clone())
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Basis of Hom(S, target); each map is a dim S × dim target matrix in
    /// the local coordinates of both.
    pub fn hom_into(&self, target: &dyn Action) -> Result<Vec<Matrix>> {
        let f = target.field().clone();
        let ds = self.dim();
        let k = target.poly_kernel(&self.elem, &self.poly);
        let kk = k.rows();
        if kk == 0 {
            return Ok(Vec::new());
        }
        // Φ_j: images of standard basis vector j when v ↦ K_i, on representatives.
        let mut phis: Vec<Matrix> = Vec::with_capacity(ds);
        phis.push(target.lift(&k));
        for &(parent, g) in &self.tree[1..] {
            let next = target.act_rep(g, &phis[parent]);
            phis.push(next);
        }
        let r = phis[0].cols();
        let refs: Vec<&Matrix> = phis.iter().collect();
        let psi = Matrix::stack(&refs);
        let flat = Matrix::from_vec(ds, kk * r, psi.data().to_vec());
        let mut cons: Vec<Matrix> = Vec::new();
        for g in 0..self.cg.len() {
            let moved = target.act_rep(g, &psi);
            let mixed = mat_mul(&f, &self.cg[g], &flat);
            let d = mat_sub(&f, &moved, &Matrix::from_vec(ds * kk, r, mixed.data().to_vec()));
            cons.push(target.to_local(&d));
        }
        let dt = target.dim();
        // E[i][(g, j, col)] = cons_g[(j, i)][col]
        let mut e = Matrix::zeros(kk, self.cg.len() * ds * dt);
        for (g, c) in cons.iter().enumerate() {
            for j in 0..ds {
                for i in 0..kk {
                    let off = (g * ds + j) * dt;
                    e.row_mut(i)[off..off + dt].copy_from_slice(c.row(j * kk + i));
                }
            }
        }
        let sols = left_kernel(&f, &e);
        if sols.rows() == 0 {
            return Ok(Vec::new());
        }
        let local = target.to_local(&psi);
        let mut out = Vec::with_capacity(sols.rows());
        for x in sols.row_iter() {
            let mut h = Matrix::zeros(ds, dt);
            for j in 0..ds {
                let row = h.row_mut(j);
                for (i, &c) in x.iter().enumerate() {
                    if c != 0 {
                        crate::linalg::axpy(&f, row, local.row(j * kk + i), c);
                    }
                }
            }
            out.push(mat_mul(&f, &self.binv, &h));
        }
        Ok(out)
    }

    /// Sum of the images of all homomorphisms S → target, in local
    /// coordinates.
    pub fn image_sum(&self, target: &dyn Action) -> Result<Echelon> {
        let maps = self.hom_into(target)?;
        let mut e = Echelon::zero(target.dim());
        for h in &maps {
            e.extend(target.field(), h);
        }
        Ok(e)
    }
}

/// Isomorphism of two irreducible modules on the same generators,
/// confirmed by an explicit nonzero map.
pub fn is_iso(kit: &HomKit, other: &ModuleRep) -> Result<bool> {
    if kit.dim() != other.dim() || fingerprint(&kit.rep) != fingerprint(other) {
        return Ok(false);
    }
    Ok(!kit.hom_into(other)?.is_empty())
}

/// dim End(S) = 1.
pub fn abs_irred(kit: &HomKit) -> Result<bool> {
    Ok(kit.hom_into(&kit.rep)?.len() == 1)
}

/// An isomorphism class of composition factors.
#[derive(Clone, Debug)]
pub struct FactorClass {
    pub kit: HomKit,
    pub mult: usize,
    pub fingerprint: Vec<Elem>,
    pub abs_irred: bool,
}

impl FactorClass {
    pub fn dim(&self) -> usize {
        self.kit.dim()
    }

    /// Every generator acts as the identity.
    pub fn is_trivial(&self) -> bool {
        (0..self.kit.rep.ngens()).all(|i| self.kit.rep.acts_trivially(i))
    }
}

/// Groups factors into isomorphism classes, sorted by dimension (stable).
pub fn classify(factors: &[Factor]) -> Result<Vec<FactorClass>> {
    let mut classes: Vec<FactorClass> = Vec::new();
    'outer: for fac in factors {
        let fp = fingerprint(&fac.rep);
        for c in classes.iter_mut() {
            if c.dim() == fac.rep.dim() && c.fingerprint == fp && is_iso(&c.kit, &fac.rep)? {
                c.mult += 1;
                continue 'outer;
            }
        }
        let kit = HomKit::from_factor(fac)?;
        let abs = abs_irred(&kit)?;
        classes.push(FactorClass { kit, mult: 1, fingerprint: fp, abs_irred: abs });
    }
    classes.sort_by_key(|c| c.dim());
    Ok(classes)
}

/// Replaces each class's kit element by one whose polynomial is singular on
/// that class only, when such an element is found within the budget. This
/// keeps kernels small in large targets.
pub fn sharpen_kits(classes: &mut [FactorClass], cfg: &MeataxeConfig) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9);
    for i in 0..classes.len() {
        let f: PrimeField = classes[i].kit.rep.f.clone();
        let rep = &classes[i].kit.rep;
        let max_deg = cfg.max_deg.min(rep.dim());
        let mut found = None;
        'search: for _ in 0..cfg.budget / 4 {
            let elem = AlgElem::random(&mut rng, &f, rep.ngens(), cfg.max_len);
            let a = elem.dense(rep);
            let cp = charpoly(&f, &a);
            for p in low_degree_factors(&f, &cp, max_deg, &mut rng) {
                if rep.poly_kernel(&elem, &p).rows() != p.degree() {
                    continue;
                }
                let others_ok =
                    classes.iter().enumerate().all(|(j, c)| j == i || c.kit.rep.poly_kernel(&elem, &p).rows() == 0);
                if others_ok {
                    found = Some((elem, p));
                    break 'search;
                }
            }
        }
        if let Some((elem, p)) = found {
            let rep = classes[i].kit.rep.clone();
            classes[i].kit = HomKit::new(rep, elem, p)?;
        }
    }
    Ok(())
}
