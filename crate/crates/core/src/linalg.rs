//! Dense linear algebra over F_ℓ with the row-vector convention `v ↦ v·M`.

use rayon::prelude::*;

use crate::field::{Elem, PrimeField};

/// Work (multiply-adds) above which row loops are spread over threads.
const PAR_WORK: usize = 1 << 18;

/// A dense row-major matrix of field elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix::scalar(n, 1)
    }

    pub fn scalar(n: usize, c: Elem) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<Elem>]) -> Matrix {
        let mut m = Matrix::zeros(0, cols);
        for r in rows {
            m.push_row(r);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn push_row(&mut self, r: &[Elem]) {
        assert_eq!(r.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(r);
        self.rows += 1;
    }

    /// Stacks `other` below `self`.
    pub fn append(&mut self, other: &Matrix) {
        assert_eq!(self.cols, other.cols, "column mismatch");
        self.data.extend_from_slice(&other.data);
        self.rows += other.rows;
    }

    pub fn stack(parts: &[&Matrix]) -> Matrix {
        let cols = parts.first().map_or(0, |m| m.cols);
        let mut out = Matrix::zeros(0, cols);
        for p in parts {
            out.append(p);
        }
        out
    }

    pub fn truncate_rows(&mut self, rows: usize) {
        self.rows = self.rows.min(rows);
        self.data.truncate(self.rows * self.cols);
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(0, self.cols);
        for &i in idx {
            out.push_row(self.row(i));
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            let src = self.row(i);
            let dst = out.row_mut(i);
            for (d, &j) in dst.iter_mut().zip(idx) {
                *d = src[j];
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        const B: usize = 32;
        for i0 in (0..self.rows).step_by(B) {
            for j0 in (0..self.cols).step_by(B) {
                for i in i0..(i0 + B).min(self.rows) {
                    for j in j0..(j0 + B).min(self.cols) {
                        out.data[j * self.rows + i] = self.data[i * self.cols + j];
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self, f: &PrimeField) -> Elem {
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }
}

/// `dst += s·src`, elementwise.
#[inline]
pub fn axpy(f: &PrimeField, dst: &mut [Elem], src: &[Elem], s: Elem) {
    if s == 0 {
        return;
    }
    let s = s as u32;
    for (d, &x) in dst.iter_mut().zip(src) {
        *d = f.reduce_small(*d as u32 + s * x as u32) as Elem;
    }
}

#[inline]
pub fn scale_row(f: &PrimeField, row: &mut [Elem], s: Elem) {
    let s = s as u32;
    for d in row.iter_mut() {
        *d = f.reduce_small(*d as u32 * s) as Elem;
    }
}

pub fn dot(f: &PrimeField, u: &[Elem], v: &[Elem]) -> Elem {
    let p1 = (f.modulus() - 1) as u64;
    let limit = ((u32::MAX as u64 - p1) / (p1 * p1)) as usize;
    let mut acc = 0u32;
    for (cu, cv) in u.chunks(limit).zip(v.chunks(limit)) {
        for (&a, &b) in cu.iter().zip(cv) {
            acc += a as u32 * b as u32;
        }
        acc = f.reduce_u32(acc) as u32;
    }
    acc as Elem
}

/// `a·b` with 32-bit accumulators and delayed reduction.
pub fn mat_mul(f: &PrimeField, a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols, b.rows, "inner dimensions differ");
    let (r, k, c) = (a.rows, a.cols, b.cols);
    let mut out = Matrix::zeros(r, c);
    if r == 0 || c == 0 {
        return out;
    }
    let p1 = (f.modulus() - 1) as u64;
    let limit = ((u32::MAX as u64 - p1) / (p1 * p1)).max(1) as usize;
    let work = |(i, orow): (usize, &mut [Elem])| {
        let mut acc = vec![0u32; c];
        let arow = a.row(i);
        let mut pending = 0;
        for (t, &x) in arow.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u32;
            for (s, &y) in acc.iter_mut().zip(b.row(t)) {
                *s += x * y as u32;
            }
            pending += 1;
            if pending == limit {
                for s in acc.iter_mut() {
                    *s = f.reduce_u32(*s) as u32;
                }
                pending = 0;
            }
        }
        for (o, &s) in orow.iter_mut().zip(&acc) {
            *o = f.reduce_u32(s);
        }
    };
    if r.saturating_mul(k).saturating_mul(c) >= PAR_WORK && r > 1 {
        out.data.par_chunks_mut(c).enumerate().for_each(work);
    } else {
        out.data.chunks_mut(c).enumerate().for_each(work);
    }
    out
}

pub fn mat_add(f: &PrimeField, a: &Matrix, b: &Matrix) -> Matrix {
    assert!(a.rows == b.rows && a.cols == b.cols, "shape mismatch");
    let data = a.data.iter().zip(&b.data).map(|(&x, &y)| f.add(x, y)).collect();
    Matrix { rows: a.rows, cols: a.cols, data }
}

pub fn mat_sub(f: &PrimeField, a: &Matrix, b: &Matrix) -> Matrix {
    assert!(a.rows == b.rows && a.cols == b.cols, "shape mismatch");
    let data = a.data.iter().zip(&b.data).map(|(&x, &y)| f.sub(x, y)).collect();
    Matrix { rows: a.rows, cols: a.cols, data }
}

pub fn mat_scale(f: &PrimeField, a: &Matrix, s: Elem) -> Matrix {
    let mut out = a.clone();
    scale_row(f, &mut out.data, s);
    out
}

/// `v·m` for a single row vector.
pub fn vec_mat(f: &PrimeField, v: &[Elem], m: &Matrix) -> Vec<Elem> {
    let a = Matrix::from_vec(1, v.len(), v.to_vec());
    mat_mul(f, &a, m).data
}

/// Reduces `m` in place to reduced row echelon form, drops zero rows, and
/// returns the pivot columns.
pub fn rref(f: &PrimeField, m: &mut Matrix) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m.data[i * cols + col] != 0) else {
            continue;
        };
        if pr != r {
            for j in col..cols {
                m.data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv_nz(m.data[r * cols + col]);
        scale_row(f, &mut m.data[r * cols + col..(r + 1) * cols], inv);
        let prow: Vec<Elem> = m.data[r * cols + col..(r + 1) * cols].to_vec();
        let eliminate = |(i, row): (usize, &mut [Elem])| {
            if i == r {
                return;
            }
            let x = row[col];
            if x != 0 {
                axpy(f, &mut row[col..], &prow, f.neg(x));
            }
        };
        if rows * (cols - col) >= PAR_WORK {
            m.data.par_chunks_mut(cols).enumerate().for_each(eliminate);
        } else {
            m.data.chunks_mut(cols).enumerate().for_each(eliminate);
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate_rows(r);
    pivots
}

pub fn rank(f: &PrimeField, m: &Matrix) -> usize {
    let mut c = m.clone();
    rref(f, &mut c).len()
}

/// Basis (as rows) of `{x : m·xᵀ = 0}`.
pub fn right_kernel(f: &PrimeField, m: &Matrix) -> Matrix {
    let mut r = m.clone();
    let pivots = rref(f, &mut r);
    kernel_from_rref(f, &r, &pivots)
}

fn kernel_from_rref(f: &PrimeField, r: &Matrix, pivots: &[usize]) -> Matrix {
    let n = r.cols;
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
    let mut out = Matrix::zeros(free.len(), n);
    for (k, &fc) in free.iter().enumerate() {
        let row = out.row_mut(k);
        row[fc] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            row[p] = f.neg(r.get(i, fc));
        }
    }
    out
}

/// Basis (as rows) of `{z : z·m = 0}`.
pub fn left_kernel(f: &PrimeField, m: &Matrix) -> Matrix {
    right_kernel(f, &m.transpose())
}

pub fn inverse(f: &PrimeField, m: &Matrix) -> Option<Matrix> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.rows;
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        aug.row_mut(i)[..n].copy_from_slice(m.row(i));
        aug.row_mut(i)[n + i] = 1;
    }
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let idx: Vec<usize> = (n..2 * n).collect();
    Some(aug.select_cols(&idx))
}

/// A subspace of F_ℓⁿ stored as its canonical reduced row echelon basis.
///
/// Two echelons over the same ambient space are equal iff the subspaces are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Echelon {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn zero(n: usize) -> Echelon {
        Echelon { basis: Matrix::zeros(0, n), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Echelon {
        Echelon { basis: Matrix::identity(n), pivots: (0..n).collect() }
    }

    pub fn from_rows(f: &PrimeField, mut m: Matrix) -> Echelon {
        let pivots = rref(f, &mut m);
        Echelon { basis: m, pivots }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.basis.cols
    }

    #[inline]
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    #[inline]
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn into_basis(self) -> Matrix {
        self.basis
    }

    /// Residues of the rows of `m` modulo this subspace. Each residue is zero
    /// at every pivot column, so residues are canonical coset representatives.
    pub fn reduce_rows(&self, f: &PrimeField, m: &Matrix) -> Matrix {
        if self.dim() == 0 || m.rows == 0 {
            return m.clone();
        }
        let coeffs = m.select_cols(&self.pivots);
        let sub = mat_mul(f, &coeffs, &self.basis);
        mat_sub(f, m, &sub)
    }

    pub fn reduce(&self, f: &PrimeField, v: &mut [Elem]) {
        for (i, &p) in self.pivots.iter().enumerate() {
            let x = v[p];
            if x != 0 {
                axpy(f, v, self.basis.row(i), f.neg(x));
            }
        }
    }

    pub fn contains(&self, f: &PrimeField, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn contains_all(&self, f: &PrimeField, m: &Matrix) -> bool {
        self.reduce_rows(f, m).is_zero()
    }

    pub fn contains_space(&self, f: &PrimeField, other: &Echelon) -> bool {
        other.dim() <= self.dim() && self.contains_all(f, &other.basis)
    }

    /// Coordinates of a vector known to lie in the subspace.
    pub fn coords(&self, v: &[Elem]) -> Vec<Elem> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }

    /// Adds the rows of `m` and returns the new reduced rows that enlarged
    /// the space (empty if nothing new).
    pub fn extend(&mut self, f: &PrimeField, m: &Matrix) -> Matrix {
        let n = self.ambient();
        let mut resid = self.reduce_rows(f, m);
        let new_pivots = rref(f, &mut resid);
        if new_pivots.is_empty() {
            return Matrix::zeros(0, n);
        }
        if self.dim() > 0 {
            let coeffs = self.basis.select_cols(&new_pivots);
            let sub = mat_mul(f, &coeffs, &resid);
            self.basis = mat_sub(f, &self.basis, &sub);
        }
        let mut order: Vec<(usize, bool, usize)> = self
            .pivots
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, false, i))
            .chain(new_pivots.iter().enumerate().map(|(i, &p)| (p, true, i)))
            .collect();
        order.sort_unstable();
        let mut basis = Matrix::zeros(0, n);
        basis.data.reserve(order.len() * n);
        for &(_, new, i) in &order {
            basis.push_row(if new { resid.row(i) } else { self.basis.row(i) });
        }
        self.basis = basis;
        self.pivots = order.iter().map(|o| o.0).collect();
        resid
    }

    pub fn sum(&self, f: &PrimeField, other: &Echelon) -> Echelon {
        let (big, small) = if self.dim() >= other.dim() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        out.extend(f, &small.basis);
        out
    }

    pub fn intersect(&self, f: &PrimeField, other: &Echelon) -> Echelon {
        let n = self.ambient();
        if self.dim() == 0 || other.dim() == 0 {
            return Echelon::zero(n);
        }
        if self.contains_space(f, other) {
            return other.clone();
        }
        if other.contains_space(f, self) {
            return self.clone();
        }
        // (x, y) with x·A = y·B; the rows x·A span the intersection.
        let stacked = Matrix::stack(&[&self.basis, &other.basis]);
        let rel = left_kernel(f, &stacked);
        let idx: Vec<usize> = (0..self.dim()).collect();
        let xs = rel.select_cols(&idx);
        Echelon::from_rows(f, mat_mul(f, &xs, &self.basis))
    }

    /// Orthogonal complement under the standard dot product.
    pub fn perp(&self, f: &PrimeField) -> Echelon {
        let k = kernel_from_rref(f, &self.basis, &self.pivots);
        Echelon::from_rows(f, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_prime_field;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(f: &PrimeField, rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix {
        let p = f.modulus() as u8;
        Matrix::from_vec(r, c, (0..r * c).map(|_| rng.gen_range(0..p)).collect())
    }

    /// Plain triple loop with `%`, independent of the blocked kernel.
    fn naive_mul(f: &PrimeField, a: &Matrix, b: &Matrix) -> Matrix {
        let p = f.modulus() as u64;
        let mut out = Matrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut s = 0u64;
                for t in 0..a.cols() {
                    s += a.get(i, t) as u64 * b.get(t, j) as u64;
                }
                out.set(i, j, (s % p) as Elem);
            }
        }
        out
    }

    #[test]
    fn gemm_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for ell in [3, 7, 251] {
            let f = make_prime_field(ell).unwrap();
            for (r, k, c) in [(1, 1, 1), (5, 9, 3), (40, 70, 33), (80, 300, 90)] {
                let a = random_matrix(&f, &mut rng, r, k);
                let b = random_matrix(&f, &mut rng, k, c);
                assert_eq!(mat_mul(&f, &a, &b), naive_mul(&f, &a, &b));
            }
        }
    }

    #[test]
    fn gemm_survives_long_inner_dimension() {
        // all entries ℓ-1 force the delayed-reduction path
        let f = make_prime_field(251).unwrap();
        let k = 70_000;
        let a = Matrix::from_vec(1, k, vec![250; k]);
        let b = Matrix::from_vec(k, 1, vec![250; k]);
        let expect = ((250u64 * 250 * k as u64) % 251) as Elem;
        assert_eq!(mat_mul(&f, &a, &b).get(0, 0), expect);
        assert_eq!(dot(&f, a.data(), b.data()), expect);
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = make_prime_field(5).unwrap();
        let mut found = 0;
        while found < 5 {
            let a = random_matrix(&f, &mut rng, 12, 12);
            if let Some(inv) = inverse(&f, &a) {
                assert_eq!(mat_mul(&f, &a, &inv), Matrix::identity(12));
                found += 1;
            } else {
                assert!(rank(&f, &a) < 12);
            }
        }
        assert!(inverse(&f, &Matrix::zeros(3, 3)).is_none());
    }

    #[test]
    fn kernels() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = make_prime_field(7).unwrap();
        let a = random_matrix(&f, &mut rng, 6, 15);
        let k = right_kernel(&f, &a);
        assert_eq!(k.rows(), 15 - rank(&f, &a));
        assert!(mat_mul(&f, &a, &k.transpose()).is_zero());
        let l = left_kernel(&f, &a.transpose());
        assert!(mat_mul(&f, &l, &a.transpose()).is_zero());
        assert_eq!(rank(&f, &l), l.rows());
    }

    #[test]
    fn echelon_sum_and_intersection() {
        let f = make_prime_field(3).unwrap();
        let a = Echelon::from_rows(&f, Matrix::from_rows(4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]));
        let b = Echelon::from_rows(&f, Matrix::from_rows(4, &[vec![0, 1, 0, 0], vec![0, 0, 1, 2]]));
        assert_eq!(a.sum(&f, &b).dim(), 3);
        let i = a.intersect(&f, &b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&f, &[0, 2, 0, 0]));
        assert_eq!(a.intersect(&f, &a), a);
        let p = a.perp(&f);
        assert_eq!(p, Echelon::from_rows(&f, Matrix::from_rows(4, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]])));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rref_is_canonical(seed in any::<u64>(), r in 1usize..12, c in 1usize..20, ell in prop::sample::select(vec![3i64, 5, 13])) {
            let f = make_prime_field(ell).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&f, &mut rng, r, c);
            let e = Echelon::from_rows(&f, a.clone());
            // same row space from a different spanning set
            let g = random_matrix(&f, &mut rng, r + 2, r);
            let e2 = Echelon::from_rows(&f, mat_mul(&f, &g, &a));
            prop_assert!(e.contains_space(&f, &e2));
            if e2.dim() == e.dim() {
                prop_assert_eq!(&e, &e2);
            }
            for (i, &p) in e.pivots().iter().enumerate() {
                for k in 0..e.dim() {
                    prop_assert_eq!(e.basis().get(k, p), u8::from(k == i));
                }
            }
        }

        #[test]
        fn modular_dimension_law(seed in any::<u64>(), ra in 0usize..8, rb in 0usize..8) {
            let f = make_prime_field(5).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 10;
            let a = Echelon::from_rows(&f, random_matrix(&f, &mut rng, ra, n));
            let b = Echelon::from_rows(&f, random_matrix(&f, &mut rng, rb, n));
            let s = a.sum(&f, &b);
            let i = a.intersect(&f, &b);
            prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
            prop_assert!(a.contains_space(&f, &i) && b.contains_space(&f, &i));
            prop_assert!(s.contains_space(&f, &a) && s.contains_space(&f, &b));
            prop_assert_eq!(a.perp(&f).perp(&f), a.clone());
            prop_assert_eq!(a.perp(&f).dim(), n - a.dim());
        }

        #[test]
        fn extend_matches_rebuild(seed in any::<u64>(), ra in 0usize..6, rb in 0usize..6) {
            let f = make_prime_field(11).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&f, &mut rng, ra, 9);
            let b = random_matrix(&f, &mut rng, rb, 9);
            let mut e = Echelon::from_rows(&f, a.clone());
            let before = e.dim();
            let added = e.extend(&f, &b);
            prop_assert_eq!(e.dim(), before + added.rows());
            prop_assert_eq!(e, Echelon::from_rows(&f, Matrix::stack(&[&a, &b])));
        }
    }
}
