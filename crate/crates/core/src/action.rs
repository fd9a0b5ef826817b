//! Group-algebra elements and the two ways a module can be acted on: dense
//! matrices, or a section of a permutation module where group elements stay
//! permutations.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Elem, PrimeField};
use crate::linalg::{axpy, left_kernel, mat_add, mat_mul, mat_scale, Matrix};
use crate::module::{permute_cols, Gen, ModCtx, ModuleRep, Section};
use crate::perm::Perm;
use crate::poly::Poly;

/// A = Σ_t c_t · g_{chain[0]} ⋯ g_{chain[t]}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgElem {
    pub chain: Vec<usize>,
    pub coeffs: Vec<Elem>,
}

impl AlgElem {
    pub fn random(rng: &mut ChaCha8Rng, f: &PrimeField, ngens: usize, max_len: usize) -> AlgElem {
        let len = rng.gen_range(1..=max_len);
        let chain = (0..len).map(|_| rng.gen_range(0..ngens)).collect();
        let mut coeffs: Vec<Elem> = (0..len).map(|_| rng.gen_range(0..f.modulus()) as Elem).collect();
        if coeffs.iter().all(|&c| c == 0) {
            coeffs[len - 1] = 1;
        }
        AlgElem { chain, coeffs }
    }

    /// A single group element: the word itself.
    pub fn word(chain: Vec<usize>) -> AlgElem {
        let mut coeffs = vec![0; chain.len()];
        if let Some(c) = coeffs.last_mut() {
            *c = 1;
        }
        AlgElem { chain, coeffs }
    }

    pub fn dense(&self, rep: &ModuleRep) -> Matrix {
        let f = &rep.f;
        let n = rep.dim();
        let mut w = Matrix::identity(n);
        let mut acc = Matrix::zeros(n, n);
        for (&g, &c) in self.chain.iter().zip(&self.coeffs) {
            w = mat_mul(f, &w, &rep.gens[g]);
            if c != 0 {
                acc = mat_add(f, &acc, &mat_scale(f, &w, c));
            }
        }
        acc
    }

    fn perms(&self, gens: &[Perm]) -> Vec<(Elem, Perm)> {
        let mut out = Vec::new();
        let mut w = Perm::identity(gens[0].degree());
        for (&g, &c) in self.chain.iter().zip(&self.coeffs) {
            w = w.then(&gens[g]);
            if c != 0 {
                out.push((c, w.clone()));
            }
        }
        out
    }
}

/// A module whose vectors have ambient representatives on which generators
/// act cheaply; local coordinates are obtained by `to_local`.
pub trait Action {
    fn field(&self) -> &PrimeField;
    fn dim(&self) -> usize;
    fn ngens(&self) -> usize;
    /// Lift local rows to representatives.
    fn lift(&self, local: &Matrix) -> Matrix;
    /// Generator `i` on representatives.
    fn act_rep(&self, i: usize, x: &Matrix) -> Matrix;
    /// Local coordinates of representatives.
    fn to_local(&self, x: &Matrix) -> Matrix;
    /// Local basis of the left kernel of p(A).
    fn poly_kernel(&self, a: &AlgElem, p: &Poly) -> Matrix;

    fn act(&self, i: usize, local: &Matrix) -> Matrix {
        self.to_local(&self.act_rep(i, &self.lift(local)))
    }
}

impl Action for ModuleRep {
    fn field(&self) -> &PrimeField {
        &self.f
    }

    fn dim(&self) -> usize {
        ModuleRep::dim(self)
    }

    fn ngens(&self) -> usize {
        ModuleRep::ngens(self)
    }

    fn lift(&self, local: &Matrix) -> Matrix {
        local.clone()
    }

    fn act_rep(&self, i: usize, x: &Matrix) -> Matrix {
        mat_mul(&self.f, x, &self.gens[i])
    }

    fn to_local(&self, x: &Matrix) -> Matrix {
        x.clone()
    }

    fn poly_kernel(&self, a: &AlgElem, p: &Poly) -> Matrix {
        left_kernel(&self.f, &p.eval_matrix(&self.f, &a.dense(self)))
    }
}

/// Section Top/Bot of a permutation module.
pub struct PermSection<'a> {
    pub ctx: &'a ModCtx,
    pub sec: &'a Section,
    perms: Vec<Perm>,
}

impl<'a> PermSection<'a> {
    pub fn new(ctx: &'a ModCtx, sec: &'a Section) -> PermSection<'a> {
        let perms = ctx
            .gens
            .iter()
            .map(|g| match g {
                Gen::Perm(p) => p.clone(),
                Gen::Dense(_) => panic!("permutation module with a dense generator"),
            })
            .collect();
        PermSection { ctx, sec, perms }
    }

    /// Dense representation of the section.
    pub fn rep(&self) -> crate::Result<ModuleRep> {
        self.sec.rep(&self.ctx.f, &self.ctx.gens)
    }
}

impl Action for PermSection<'_> {
    fn field(&self) -> &PrimeField {
        &self.ctx.f
    }

    fn dim(&self) -> usize {
        self.sec.dim()
    }

    fn ngens(&self) -> usize {
        self.perms.len()
    }

    fn lift(&self, local: &Matrix) -> Matrix {
        self.sec.lift(&self.ctx.f, local)
    }

    fn act_rep(&self, i: usize, x: &Matrix) -> Matrix {
        permute_cols(x, &self.perms[i])
    }

    fn to_local(&self, x: &Matrix) -> Matrix {
        self.sec.coords(&self.ctx.f, x)
    }

    // Horner on representatives; Bot is invariant so reduction waits until
    // the end.
    fn poly_kernel(&self, a: &AlgElem, p: &Poly) -> Matrix {
        let f = &self.ctx.f;
        let terms = a.perms(&self.perms);
        let c = self.sec.complement();
        let coeffs = p.coeffs();
        let mut y = mat_scale(f, c, *coeffs.last().unwrap_or(&0));
        for &k in coeffs.iter().rev().skip(1) {
            let mut next = mat_scale(f, c, k);
            for (s, w) in &terms {
                let img = permute_cols(&y, w);
                for r in 0..next.rows() {
                    axpy(f, next.row_mut(r), img.row(r), *s);
                }
            }
            y = next;
        }
        left_kernel(f, &self.to_local(&y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_prime_field;
    use crate::linalg::Echelon;
    use rand::SeedableRng;

    #[test]
    fn section_kernel_matches_dense() {
        let f = make_prime_field(5).unwrap();
        // S_4 acting on 4 points, section S(FΩ)/0 and FΩ/T(FΩ)
        let perms = vec![Perm(vec![1, 0, 2, 3]), Perm(vec![1, 2, 3, 0])];
        let ctx = ModCtx::new(f.clone(), &perms).unwrap();
        let (s, t) = ctx.distinguished();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for sec in [Section::new(&f, s, Echelon::zero(4)).unwrap(), Section::new(&f, Echelon::full(4), t).unwrap()] {
            let ps = PermSection::new(&ctx, &sec);
            let rep = ps.rep().unwrap();
            for _ in 0..10 {
                let a = AlgElem::random(&mut rng, &f, 2, 6);
                let p = Poly::from_coeffs(vec![rng.gen_range(0..5), rng.gen_range(0..5), 1]);
                let k1 = Echelon::from_rows(&f, ps.poly_kernel(&a, &p));
                let k2 = Echelon::from_rows(&f, rep.poly_kernel(&a, &p));
                assert_eq!(k1, k2);
                let x = Matrix::identity(3);
                assert_eq!(ps.act(1, &x), Action::act(&rep, 1, &x));
            }
        }
    }
}
