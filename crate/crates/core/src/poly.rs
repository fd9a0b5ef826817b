//! Univariate polynomials over F_ℓ: characteristic polynomials and
//! factorization into low-degree irreducibles.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Elem, PrimeField};
use crate::linalg::{axpy, mat_mul, Matrix};

/// Coefficients from the constant term upward; never has a zero leading
/// coefficient (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly(Vec<Elem>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly(vec![1])
    }

    pub fn x() -> Poly {
        Poly(vec![0, 1])
    }

    pub fn from_coeffs(mut c: Vec<Elem>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly(c)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Elem {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn monic(&self, f: &PrimeField) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = f.inv_nz(self.lead());
        Poly(self.0.iter().map(|&c| f.mul(c, inv)).collect())
    }

    pub fn add(&self, f: &PrimeField, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let c = (0..n).map(|i| f.add(*self.0.get(i).unwrap_or(&0), *o.0.get(i).unwrap_or(&0))).collect();
        Poly::from_coeffs(c)
    }

    pub fn sub(&self, f: &PrimeField, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let c = (0..n).map(|i| f.sub(*self.0.get(i).unwrap_or(&0), *o.0.get(i).unwrap_or(&0))).collect();
        Poly::from_coeffs(c)
    }

    pub fn mul(&self, f: &PrimeField, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            axpy(f, &mut c[i..i + o.0.len()], &o.0, a);
        }
        Poly::from_coeffs(c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, f: &PrimeField, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.0.len() < d.0.len() {
            return (Poly::zero(), self.clone());
        }
        let mut r = self.0.clone();
        let dl = d.0.len();
        let inv = f.inv_nz(d.lead());
        let mut q = vec![0; r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dl - 1], inv);
            q[i] = c;
            if c != 0 {
                axpy(f, &mut r[i..i + dl], &d.0, f.neg(c));
            }
        }
        r.truncate(dl - 1);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    pub fn rem(&self, f: &PrimeField, d: &Poly) -> Poly {
        self.divrem(f, d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, f: &PrimeField, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn powmod(&self, f: &PrimeField, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(f, m);
        let mut acc = Poly::one().rem(f, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m);
            }
            base = base.mul(f, &base).rem(f, m);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, f: &PrimeField, x: Elem) -> Elem {
        self.0.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_matrix(&self, f: &PrimeField, a: &Matrix) -> Matrix {
        let n = a.rows();
        let mut acc = Matrix::scalar(n, self.lead());
        for &c in self.0.iter().rev().skip(1) {
            acc = mat_mul(f, &acc, a);
            for i in 0..n {
                let v = acc.get(i, i);
                acc.set(i, i, f.add(v, c));
            }
        }
        acc
    }
}

/// Characteristic polynomial det(xI − A) via reduction to upper Hessenberg
/// form.
pub fn charpoly(f: &PrimeField, a: &Matrix) -> Poly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    let mut h = a.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
            continue;
        };
        if i != j + 1 {
            for c in 0..n {
                let (x, y) = (h.get(i, c), h.get(j + 1, c));
                h.set(i, c, y);
                h.set(j + 1, c, x);
            }
            for r in 0..n {
                let (x, y) = (h.get(r, i), h.get(r, j + 1));
                h.set(r, i, y);
                h.set(r, j + 1, x);
            }
        }
        let inv = f.inv_nz(h.get(j + 1, j));
        let pivot_row: Vec<Elem> = h.row(j + 1)[j..].to_vec();
        let mut mult = vec![0 as Elem; n];
        for (k, m) in mult.iter_mut().enumerate().skip(j + 2) {
            let u = f.mul(h.get(k, j), inv);
            if u != 0 {
                axpy(f, &mut h.row_mut(k)[j..], &pivot_row, f.neg(u));
                *m = u;
            }
        }
        if mult.iter().any(|&u| u != 0) {
            // column j+1 += Σ u_k · column k
            for r in 0..n {
                let row = h.row(r);
                let mut s = row[j + 1] as u32;
                for k in j + 2..n {
                    s = f.reduce_small(s + mult[k] as u32 * row[k] as u32);
                }
                h.set(r, j + 1, s as Elem);
            }
        }
    }
    // p_m = (x − h_mm) p_{m−1} − Σ_i h_im (Π_{k=i+1..m} h_{k,k−1}) p_{i−1}
    let mut ps: Vec<Vec<Elem>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &ps[m - 1];
        let mut t = vec![0 as Elem; m + 1];
        t[1..].copy_from_slice(prev);
        axpy(f, &mut t[..m], prev, f.neg(h.get(m - 1, m - 1)));
        let mut prod: Elem = 1;
        for i in (1..m).rev() {
            prod = f.mul(prod, h.get(i, i - 1));
            if prod == 0 {
                break;
            }
            let c = f.mul(h.get(i - 1, m - 1), prod);
            if c != 0 {
                let q = &ps[i - 1];
                axpy(f, &mut t[..q.len()], q, f.neg(c));
            }
        }
        ps.push(t);
    }
    Poly::from_coeffs(ps.pop().unwrap())
}

fn random_poly(f: &PrimeField, rng: &mut ChaCha8Rng, below: usize) -> Poly {
    let p = f.modulus() as Elem;
    Poly::from_coeffs((0..below).map(|_| rng.gen_range(0..p)).collect())
}

/// Splits a monic squarefree product of irreducibles of degree `d`.
fn equal_degree_split(f: &PrimeField, g: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    if g.degree() == d {
        out.push(g.clone());
        return;
    }
    let q = f.modulus() as u64;
    let e = (q.pow(d as u32) - 1) / 2;
    loop {
        let a = random_poly(f, rng, g.degree());
        if a.degree() == 0 {
            continue;
        }
        let b = a.powmod(f, e, g).sub(f, &Poly::one());
        let h = g.gcd(f, &b);
        if h.degree() > 0 && h.degree() < g.degree() {
            let (rest, _) = g.divrem(f, &h);
            equal_degree_split(f, &h, d, rng, out);
            equal_degree_split(f, &rest.monic(f), d, rng, out);
            return;
        }
    }
}

/// The distinct monic irreducible factors of `p` of degree at most
/// `max_deg`, sorted by degree then coefficients.
pub fn low_degree_factors(f: &PrimeField, p: &Poly, max_deg: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let mut rest = p.monic(f);
    let mut out = Vec::new();
    let q = f.modulus() as u64;
    let mut xq = Poly::x();
    for d in 1..=max_deg {
        if rest.degree() < d {
            break;
        }
        xq = xq.powmod(f, q, &rest);
        let g = rest.gcd(f, &xq.sub(f, &Poly::x()));
        if g.degree() == 0 {
            continue;
        }
        // strip every power of the degree-d factors before moving on
        loop {
            let h = rest.gcd(f, &g);
            if h.degree() == 0 {
                break;
            }
            rest = rest.divrem(f, &h).0;
        }
        xq = xq.rem(f, &rest);
        let mut found = Vec::new();
        equal_degree_split(f, &g, d, rng, &mut found);
        found.sort();
        out.extend(found);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_prime_field;
    use crate::linalg::inverse;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    /// Every monic irreducible of degree `d`, by sieving products of lower
    /// degree monics.
    fn brute_irreducibles(f: &PrimeField, d: usize) -> Vec<Poly> {
        let p = f.modulus() as usize;
        let monics = |k: usize| -> Vec<Poly> {
            (0..p.pow(k as u32))
                .map(|mut idx| {
                    let mut c = Vec::with_capacity(k + 1);
                    for _ in 0..k {
                        c.push((idx % p) as Elem);
                        idx /= p;
                    }
                    c.push(1);
                    Poly::from_coeffs(c)
                })
                .collect()
        };
        monics(d)
            .into_iter()
            .filter(|m| (1..=d / 2).all(|k| monics(k).iter().all(|g| !m.rem(f, g).is_zero())))
            .collect()
    }

    fn brute_det(f: &PrimeField, m: &Matrix) -> Elem {
        let mut a = m.clone();
        let n = a.rows();
        let mut det: Elem = 1;
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| a.get(r, c) != 0) else {
                return 0;
            };
            if r != c {
                for j in 0..n {
                    let (x, y) = (a.get(r, j), a.get(c, j));
                    a.set(r, j, y);
                    a.set(c, j, x);
                }
                det = f.neg(det);
            }
            let piv = a.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv).unwrap();
            for r2 in c + 1..n {
                let u = f.mul(a.get(r2, c), inv);
                for j in 0..n {
                    let v = f.sub(a.get(r2, j), f.mul(u, a.get(c, j)));
                    a.set(r2, j, v);
                }
            }
        }
        det
    }

    #[test]
    fn irreducible_counts() {
        // number of monic irreducibles of degree d over F_q is (1/d)Σ μ(d/k) q^k
        let f = make_prime_field(3).unwrap();
        let counts: Vec<usize> = (1..=4).map(|d| brute_irreducibles(&f, d).len()).collect();
        assert_eq!(counts, vec![3, 3, 8, 18]);
    }

    #[test]
    fn factors_of_products_of_irreducibles() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ell in [3, 5] {
            let f = make_prime_field(ell).unwrap();
            let pool: Vec<Poly> = (1..=4).flat_map(|d| brute_irreducibles(&f, d)).collect();
            for trial in 0..40 {
                let mut chosen: Vec<Poly> = Vec::new();
                let mut prod = Poly::one();
                for k in 0..4 {
                    let g = pool[(trial * 7 + k * 13 + k * k) % pool.len()].clone();
                    prod = prod.mul(&f, &g);
                    if k % 2 == 0 {
                        prod = prod.mul(&f, &g);
                    }
                    if !chosen.contains(&g) {
                        chosen.push(g);
                    }
                }
                chosen.sort_by(|a, b| (a.degree(), a).cmp(&(b.degree(), b)));
                let got = low_degree_factors(&f, &prod, 4, &mut rng);
                assert_eq!(got, chosen);
            }
        }
    }

    #[test]
    fn high_degree_factor_is_skipped() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = make_prime_field(3).unwrap();
        let quint = brute_irreducibles(&f, 5)[0].clone();
        let lin = Poly::from_coeffs(vec![1, 1]);
        let got = low_degree_factors(&f, &quint.mul(&f, &lin), 4, &mut rng);
        assert_eq!(got, vec![lin]);
    }

    #[test]
    fn charpoly_of_companion_matrix() {
        let f = make_prime_field(7).unwrap();
        // x^3 + 2x^2 + 5x + 3 as companion in row convention
        let c = [3u8, 5, 2];
        let mut m = Matrix::zeros(3, 3);
        m.set(0, 1, 1);
        m.set(1, 2, 1);
        for (j, &cj) in c.iter().enumerate() {
            m.set(2, j, f.neg(cj));
        }
        assert_eq!(charpoly(&f, &m), Poly::from_coeffs(vec![3, 5, 2, 1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn charpoly_matches_determinants(seed in any::<u64>(), n in 1usize..9, ell in prop::sample::select(vec![3i64, 5, 7, 17])) {
            let f = make_prime_field(ell).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = f.modulus() as u8;
            let mut a = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    // sparse entries exercise the zero-pivot paths
                    if rng.gen_bool(0.4) {
                        a.set(i, j, rng.gen_range(0..p));
                    }
                }
            }
            let cp = charpoly(&f, &a);
            prop_assert_eq!(cp.degree(), n);
            prop_assert_eq!(cp.lead(), 1);
            for x in f.elements() {
                let mut xi_a = Matrix::scalar(n, x);
                for i in 0..n {
                    for j in 0..n {
                        xi_a.set(i, j, f.sub(xi_a.get(i, j), a.get(i, j)));
                    }
                }
                prop_assert_eq!(cp.eval(&f, x), brute_det(&f, &xi_a));
            }
            // Cayley–Hamilton
            prop_assert!(cp.eval_matrix(&f, &a).is_zero());
            if let Some(inv) = inverse(&f, &a) {
                prop_assert_eq!(charpoly(&f, &inv).degree(), n);
            }
        }

        #[test]
        fn division_identity(seed in any::<u64>()) {
            let f = make_prime_field(11).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_poly(&f, &mut rng, 12);
            let b = random_poly(&f, &mut rng, 5);
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&f, &b);
            prop_assert_eq!(q.mul(&f, &b).add(&f, &r), a.clone());
            prop_assert!(r.is_zero() || r.degree() < b.degree());
            let g = a.gcd(&f, &b);
            prop_assert!(a.rem(&f, &g).is_zero() && b.rem(&f, &g).is_zero());
        }
    }
}
