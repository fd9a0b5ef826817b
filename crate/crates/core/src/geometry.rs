//! Formed spaces over F2 (quadratic) and F4 (hermitian), their points, and
//! the rank-3 parameters of the action on nonsingular points.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{cert, invalid, Result};
use crate::field::{Gf2, Gf4};

/// Largest supported dimension (each plane of a [`Vector`] has 32 bits).
pub const MAX_DIM: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "o+")]
    OPlus,
    #[serde(rename = "o-")]
    OMinus,
    #[serde(rename = "u")]
    Unitary,
}

impl Family {
    pub fn is_orthogonal(self) -> bool {
        self != Family::Unitary
    }

    /// Unitary families take Δ(α) to be the points orthogonal to α; the
    /// orthogonal families take the non-orthogonal ones.
    pub fn delta_is_orthogonal(self) -> bool {
        self == Family::Unitary
    }

    pub fn code(self) -> &'static str {
        match self {
            Family::OPlus => "o+",
            Family::OMinus => "o-",
            Family::Unitary => "u",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "o+" | "O+" | "oplus" => Ok(Family::OPlus),
            "o-" | "O-" | "ominus" => Ok(Family::OMinus),
            "u" | "U" | "unitary" => Ok(Family::Unitary),
            _ => Err(invalid(format!("unknown family {s:?}; expected o+, o- or u"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A family together with the dimension of its natural module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub family: Family,
    pub dim: usize,
}

impl SpaceSpec {
    pub fn new(family: Family, dim: usize) -> Result<SpaceSpec> {
        if dim > MAX_DIM {
            return Err(invalid(format!("dimension {dim} exceeds the supported maximum {MAX_DIM}")));
        }
        match family {
            Family::OPlus | Family::OMinus => {
                if dim % 2 == 1 {
                    return Err(invalid(format!("orthogonal dimension must be even, got {dim}")));
                }
                if dim < 6 {
                    return Err(invalid(format!("orthogonal groups need 2n with n >= 3, got {dim}")));
                }
            }
            Family::Unitary => {
                if dim < 4 {
                    return Err(invalid(format!("unitary groups need m >= 4, got {dim}")));
                }
            }
        }
        Ok(SpaceSpec { family, dim })
    }

    /// Orthogonal spec from the Witt index n (dimension 2n).
    pub fn orthogonal(family: Family, n: usize) -> Result<SpaceSpec> {
        if !family.is_orthogonal() {
            return Err(invalid("orthogonal constructor used with the unitary family"));
        }
        SpaceSpec::new(family, 2 * n)
    }

    pub fn unitary(m: usize) -> Result<SpaceSpec> {
        SpaceSpec::new(Family::Unitary, m)
    }

    /// The number of hyperbolic pairs e_i, f_i.
    pub fn n(&self) -> usize {
        self.dim / 2
    }

    pub fn has_g(&self) -> bool {
        self.family == Family::Unitary && self.dim % 2 == 1
    }

    /// Field size of the defining field (2 or 4).
    pub fn q(&self) -> u64 {
        if self.family.is_orthogonal() {
            2
        } else {
            4
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::OPlus => write!(f, "O+{}(2)", self.dim),
            Family::OMinus => write!(f, "O-{}(2)", self.dim),
            Family::Unitary => write!(f, "U{}(2)", self.dim),
        }
    }
}

/// A vector over F4 (or F2 ⊂ F4) stored bit-sliced: bit i of the low word
/// and bit i of the high word hold a and b in the coordinate a + bτ.
///
/// Coordinates are ordered e1..en, f1..fn, then g for odd unitary spaces.
pub type Vector = u64;

const LO: u64 = 0xFFFF_FFFF;

#[inline]
pub fn coord(v: Vector, i: usize) -> Gf4 {
    Gf4::from_bits((((v >> i) & 1) | (((v >> (32 + i)) & 1) << 1)) as u8)
}

pub fn from_coords(c: &[Gf4]) -> Vector {
    c.iter().enumerate().fold(0, |v, (i, x)| {
        let b = x.bits() as u64;
        v | ((b & 1) << i) | (((b >> 1) & 1) << (32 + i))
    })
}

pub fn to_coords(v: Vector, m: usize) -> Vec<Gf4> {
    (0..m).map(|i| coord(v, i)).collect()
}

pub fn unit(i: usize) -> Vector {
    1 << i
}

#[inline]
pub fn add(u: Vector, v: Vector) -> Vector {
    u ^ v
}

#[inline]
pub fn scale(v: Vector, s: Gf4) -> Vector {
    let (a, b) = (v & LO, v >> 32);
    match s.bits() {
        0 => 0,
        1 => v,
        // (a + bτ)τ = b + (a + b)τ
        2 => b | ((a ^ b) << 32),
        // (a + bτ)τ² = (a + b) + aτ
        _ => (a ^ b) | (a << 32),
    }
}

/// Scales `v` so that its first nonzero coordinate is 1.
pub fn normalize(v: Vector) -> Vector {
    if v == 0 {
        return 0;
    }
    let support = (v & LO) | (v >> 32);
    let i = support.trailing_zeros() as usize;
    match coord(v, i).inv() {
        Ok(x) => scale(v, x),
        Err(_) => unreachable!("support bit implies a nonzero coordinate"),
    }
}

/// A formed space with its standard basis.
#[derive(Clone, Debug)]
pub struct Space {
    pub spec: SpaceSpec,
    n: usize,
    m: usize,
    e_mask: u64,
    g_mask: u64,
}

pub fn build_space(spec: SpaceSpec) -> Result<Space> {
    let spec = SpaceSpec::new(spec.family, spec.dim)?;
    let n = spec.n();
    let e_mask = (1u64 << n) - 1;
    let g_mask = if spec.has_g() { 1u64 << (2 * n) } else { 0 };
    Ok(Space { spec, n, m: spec.dim, e_mask, g_mask })
}

impl Space {
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn e(&self, i: usize) -> Vector {
        unit(i)
    }

    pub fn f(&self, i: usize) -> Vector {
        unit(self.n + i)
    }

    pub fn g(&self) -> Option<Vector> {
        self.spec.has_g().then(|| unit(2 * self.n))
    }

    /// The scalars of the defining field.
    pub fn scalars(&self) -> &'static [Gf4] {
        if self.spec.family.is_orthogonal() {
            &[Gf4::ZERO, Gf4::ONE]
        } else {
            &Gf4::ALL
        }
    }

    /// Swaps the e and f blocks plane by plane, fixing g.
    #[inline]
    fn swap_ef(&self, plane: u64) -> u64 {
        ((plane & self.e_mask) << self.n) | ((plane >> self.n) & self.e_mask) | (plane & self.g_mask)
    }

    /// The bilinear form (orthogonal) or the hermitian form (unitary), linear
    /// in the first argument.
    #[inline]
    pub fn form(&self, u: Vector, v: Vector) -> Gf4 {
        let (ua, ub) = (u & LO, u >> 32);
        let (mut c, d) = (self.swap_ef(v & LO), self.swap_ef(v >> 32));
        if !self.spec.family.is_orthogonal() {
            c ^= d;
        }
        let lo = ((ua & c) ^ (ub & d)).count_ones() & 1;
        let hi = ((ua & d) ^ (ub & c) ^ (ub & d)).count_ones() & 1;
        Gf4::from_bits((lo | (hi << 1)) as u8)
    }

    /// The quadratic form; only defined for the orthogonal families.
    pub fn quadratic(&self, v: Vector) -> Result<Gf2> {
        if !self.spec.family.is_orthogonal() {
            return Err(invalid("the unitary space carries no quadratic form"));
        }
        Ok(self.q_unchecked(v))
    }

    #[inline]
    fn q_unchecked(&self, v: Vector) -> Gf2 {
        let a = v & LO;
        let mut q = (a & self.e_mask & (a >> self.n)).count_ones() & 1;
        if self.spec.family == Family::OMinus {
            q ^= (((a >> (self.n - 1)) ^ (a >> (2 * self.n - 1))) & 1) as u32;
        }
        Gf2(q == 1)
    }

    /// Gram matrix of the form on the standard basis.
    pub fn gram(&self) -> Vec<Vec<Gf4>> {
        (0..self.m).map(|i| (0..self.m).map(|j| self.form(unit(i), unit(j))).collect()).collect()
    }

    /// Q on the basis vectors (orthogonal families).
    pub fn q_basis(&self) -> Result<Vec<Gf2>> {
        (0..self.m).map(|i| self.quadratic(unit(i))).collect()
    }

    pub fn is_singular(&self, v: Vector) -> bool {
        if self.spec.family.is_orthogonal() {
            !self.q_unchecked(v).0
        } else {
            self.form(v, v).is_zero()
        }
    }

    /// Every nonzero normalized vector, in increasing order.
    pub fn all_points(&self) -> Vec<Vector> {
        let m = self.m;
        let mut out = Vec::new();
        if self.spec.family.is_orthogonal() {
            out.extend(1..(1u64 << m));
        } else {
            for lo in 0..(1u64 << m) {
                for hi in 0..(1u64 << m) {
                    let v = lo | (hi << 32);
                    if v != 0 && normalize(v) == v {
                        out.push(v);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// A matrix over the defining field acting on row vectors; row i is the
/// image of the i-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatGen {
    pub rows: Vec<Vector>,
}

impl MatGen {
    pub fn identity(m: usize) -> MatGen {
        MatGen { rows: (0..m).map(unit).collect() }
    }

    #[inline]
    pub fn apply(&self, v: Vector) -> Vector {
        self.rows.iter().enumerate().fold(0, |acc, (i, &r)| acc ^ scale(r, coord(v, i)))
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &MatGen) -> MatGen {
        MatGen { rows: self.rows.iter().map(|&r| other.apply(r)).collect() }
    }
}

/// Nonsingular and singular points with the neighbourhoods used throughout.
#[derive(Clone, Debug)]
pub struct PointSets {
    pub space: Space,
    /// Nonsingular points, sorted.
    pub p: Vec<Vector>,
    /// Singular points, sorted.
    pub p0: Vec<Vector>,
    /// Δ(α) for α ∈ P, sorted index lists.
    pub delta: Vec<Vec<u32>>,
    /// Λ(α): singular points orthogonal to α ∈ P.
    pub lambda: Vec<Vec<u32>>,
    /// Γ(β): nonsingular points orthogonal to β ∈ P⁰.
    pub gamma: Vec<Vec<u32>>,
    adj: Vec<u64>,
    words: usize,
}

pub fn enumerate_points(space: &Space) -> PointSets {
    let all = space.all_points();
    let (p0, p): (Vec<Vector>, Vec<Vector>) = all.into_iter().partition(|&v| space.is_singular(v));
    let v = p.len();
    let words = v.div_ceil(64);
    let orth_delta = space.family().delta_is_orthogonal();
    let rows: Vec<(Vec<u32>, Vec<u64>, Vec<u32>)> = p
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let mut bits = vec![0u64; words];
            let mut d = Vec::new();
            for (j, &y) in p.iter().enumerate() {
                if i != j && space.form(x, y).is_zero() == orth_delta {
                    d.push(j as u32);
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            let l = p0.iter().enumerate().filter(|(_, &y)| space.form(x, y).is_zero()).map(|(j, _)| j as u32).collect();
            (d, bits, l)
        })
        .collect();
    let mut delta = Vec::with_capacity(v);
    let mut lambda = Vec::with_capacity(v);
    let mut adj = Vec::with_capacity(v * words);
    for (d, bits, l) in rows {
        delta.push(d);
        adj.extend(bits);
        lambda.push(l);
    }
    let mut gamma = vec![Vec::new(); p0.len()];
    for (i, l) in lambda.iter().enumerate() {
        for &j in l {
            gamma[j as usize].push(i as u32);
        }
    }
    PointSets { space: space.clone(), p, p0, delta, lambda, gamma, adj, words }
}

impl PointSets {
    pub fn v(&self) -> usize {
        self.p.len()
    }

    pub fn index_of(&self, x: Vector) -> Option<usize> {
        self.p.binary_search(&normalize(x)).ok()
    }

    pub fn index_of_singular(&self, x: Vector) -> Option<usize> {
        self.p0.binary_search(&normalize(x)).ok()
    }

    #[inline]
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        (self.adj[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    fn adj_row(&self, i: usize) -> &[u64] {
        &self.adj[i * self.words..(i + 1) * self.words]
    }

    /// |Δ(i) ∩ Δ(j)|.
    pub fn common(&self, i: usize, j: usize) -> usize {
        self.adj_row(i).iter().zip(self.adj_row(j)).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// Φ(α): the points other than α outside Δ(α).
    pub fn phi(&self, i: usize) -> Vec<u32> {
        (0..self.v()).filter(|&j| j != i && !self.adjacent(i, j)).map(|j| j as u32).collect()
    }
}

/// Parameters (v, a, b, r, s) of a rank-3 action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rank3Params {
    pub v: i64,
    pub a: i64,
    pub b: i64,
    pub r: i64,
    pub s: i64,
}

impl Rank3Params {
    pub fn is_consistent(&self) -> bool {
        let (a, b, r, s) = (self.a as i128, self.b as i128, self.r as i128, self.s as i128);
        self.a + self.b + 1 == self.v && a * (a - r - 1) == b * s
    }
}

/// Counts a, r, s at every choice of points and fails if any count varies.
pub fn brute_params(ps: &PointSets) -> Result<Rank3Params> {
    let v = ps.v();
    if v < 3 {
        return Err(cert("too few nonsingular points for a rank-3 action"));
    }
    let a = ps.delta[0].len();
    if let Some(bad) = ps.delta.iter().position(|d| d.len() != a) {
        return Err(cert(format!("|Δ| is {} at point {bad} but {a} at point 0", ps.delta[bad].len())));
    }
    let pick = |adjacent: bool| (1..v).find(|&j| ps.adjacent(0, j) == adjacent);
    let (Some(beta), Some(gamma)) = (pick(true), pick(false)) else {
        return Err(cert("Δ(α) or Φ(α) is empty"));
    };
    let r = ps.common(0, beta);
    let s = ps.common(0, gamma);
    let bad = (0..v).into_par_iter().find_map_any(|i| {
        (i + 1..v).find_map(|j| {
            let want = if ps.adjacent(i, j) { r } else { s };
            let got = ps.common(i, j);
            (got != want).then_some((i, j, got, want))
        })
    });
    if let Some((i, j, got, want)) = bad {
        return Err(cert(format!("common-neighbour count {got} at ({i},{j}) differs from {want}")));
    }
    let p = Rank3Params { v: v as i64, a: a as i64, b: (v - 1 - a) as i64, r: r as i64, s: s as i64 };
    Ok(p)
}

/// Point counts and parameters from the closed formulas.
pub fn closed_params(spec: SpaceSpec) -> Rank3Params {
    let p2 = |k: i64| -> i64 { 1i64 << k };
    let n = spec.n() as i64;
    let (v, a, b, r, s) = match spec.family {
        Family::OPlus => (
            p2(2 * n - 1) - p2(n - 1),
            p2(2 * n - 2) - p2(n - 1),
            p2(2 * n - 2) - 1,
            p2(2 * n - 3) - p2(n - 2),
            p2(2 * n - 3) - p2(n - 1),
        ),
        Family::OMinus => (
            p2(2 * n - 1) + p2(n - 1),
            p2(2 * n - 2) + p2(n - 1),
            p2(2 * n - 2) - 1,
            p2(2 * n - 3) + p2(n - 2),
            p2(2 * n - 3) + p2(n - 1),
        ),
        Family::Unitary if spec.dim.is_multiple_of(2) => (
            (p2(4 * n - 1) - p2(2 * n - 1)) / 3,
            (p2(4 * n - 3) + p2(2 * n - 2)) / 3,
            p2(4 * n - 3) - p2(2 * n - 2) - 1,
            (p2(4 * n - 5) - p2(2 * n - 3)) / 3,
            (p2(4 * n - 5) + p2(2 * n - 2)) / 3,
        ),
        Family::Unitary => (
            (p2(4 * n + 1) + p2(2 * n)) / 3,
            (p2(4 * n - 1) - p2(2 * n - 1)) / 3,
            p2(4 * n - 1) + p2(2 * n - 1) - 1,
            (p2(4 * n - 3) + p2(2 * n - 2)) / 3,
            (p2(4 * n - 3) - p2(2 * n - 1)) / 3,
        ),
    };
    Rank3Params { v, a, b, r, s }
}

/// |P⁰| from the point total minus |P|.
pub fn closed_singular_count(spec: SpaceSpec) -> i64 {
    let q = spec.q() as i64;
    let total = (q.pow(spec.dim as u32) - 1) / (q - 1);
    total - closed_params(spec).v
}

/// The integer roots of x² + (r−s)x + (s−a), smaller absolute value first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Roots {
    pub c: i64,
    pub d: i64,
}

pub fn quadratic_roots(p: &Rank3Params) -> Result<Roots> {
    let (bb, cc) = ((p.r - p.s) as i128, (p.s - p.a) as i128);
    let disc = bb * bb - 4 * cc;
    if disc < 0 {
        return Err(cert(format!("negative discriminant {disc}")));
    }
    let sq = (disc as u128).isqrt() as i128;
    if sq * sq != disc {
        return Err(cert(format!("discriminant {disc} is not a square")));
    }
    if (sq - bb) % 2 != 0 {
        return Err(cert("roots are not integers"));
    }
    let (x1, x2) = (((-bb + sq) / 2) as i64, ((-bb - sq) / 2) as i64);
    let (c, d) = if x1.abs() <= x2.abs() { (x1, x2) } else { (x2, x1) };
    Ok(Roots { c, d })
}

/// The family's root pattern written directly in n.
pub fn root_pattern(spec: SpaceSpec) -> Roots {
    let n = spec.n() as u32;
    let p2 = |k: u32| 1i64 << k;
    match spec.family {
        Family::OPlus => Roots { c: p2(n - 2), d: -p2(n - 1) },
        Family::OMinus => Roots { c: -p2(n - 2), d: p2(n - 1) },
        Family::Unitary if spec.dim.is_multiple_of(2) => Roots { c: -p2(2 * n - 3), d: p2(2 * n - 2) },
        Family::Unitary => Roots { c: p2(2 * n - 2), d: -p2(2 * n - 1) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(family: Family, dim: usize) -> PointSets {
        enumerate_points(&build_space(SpaceSpec::new(family, dim).unwrap()).unwrap())
    }

    /// Forms evaluated coordinate by coordinate with field arithmetic.
    fn slow_form(space: &Space, u: Vector, v: Vector) -> Gf4 {
        let n = space.n();
        let conj = |x: Gf4| if space.family().is_orthogonal() { x } else { x.conj() };
        let mut s = Gf4::ZERO;
        for i in 0..n {
            s = s + coord(u, i) * conj(coord(v, n + i)) + coord(u, n + i) * conj(coord(v, i));
        }
        if space.spec.has_g() {
            s = s + coord(u, 2 * n) * conj(coord(v, 2 * n));
        }
        s
    }

    #[test]
    fn spec_validation() {
        assert!(SpaceSpec::new(Family::OPlus, 4).is_err());
        assert!(SpaceSpec::new(Family::OMinus, 7).is_err());
        assert!(SpaceSpec::new(Family::Unitary, 3).is_err());
        assert!(SpaceSpec::new(Family::Unitary, 4).is_ok());
        assert!(SpaceSpec::orthogonal(Family::Unitary, 3).is_err());
    }

    #[test]
    fn basis_conditions() {
        for (fam, dim) in [(Family::OPlus, 6), (Family::OMinus, 6), (Family::Unitary, 4), (Family::Unitary, 5)] {
            let s = build_space(SpaceSpec::new(fam, dim).unwrap()).unwrap();
            let n = s.n();
            for i in 0..n {
                for j in 0..n {
                    let d = if i == j { Gf4::ONE } else { Gf4::ZERO };
                    assert_eq!(s.form(s.e(i), s.f(j)), d);
                    assert_eq!(s.form(s.f(j), s.e(i)), d);
                    assert_eq!(s.form(s.e(i), s.e(j)), Gf4::ZERO);
                    assert_eq!(s.form(s.f(i), s.f(j)), Gf4::ZERO);
                }
            }
            match fam {
                Family::OPlus => assert!(s.q_basis().unwrap().iter().all(|q| !q.0)),
                Family::OMinus => {
                    let q = s.q_basis().unwrap();
                    for (i, qi) in q.iter().enumerate() {
                        assert_eq!(qi.0, i == n - 1 || i == 2 * n - 1);
                    }
                }
                Family::Unitary => {
                    assert!(s.q_basis().is_err());
                    if let Some(g) = s.g() {
                        assert_eq!(s.form(g, g), Gf4::ONE);
                        for i in 0..n {
                            assert!(s.form(g, s.e(i)).is_zero() && s.form(g, s.f(i)).is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn form_examples() {
        let o6 = build_space(SpaceSpec::new(Family::OPlus, 6).unwrap()).unwrap();
        assert_eq!(o6.quadratic(o6.e(0) ^ o6.f(0)).unwrap(), Gf2::ONE);
        let om = build_space(SpaceSpec::new(Family::OMinus, 6).unwrap()).unwrap();
        assert_eq!(om.quadratic(om.e(2) ^ om.f(2)).unwrap(), Gf2::ONE);
        let u4 = build_space(SpaceSpec::new(Family::Unitary, 4).unwrap()).unwrap();
        let v = u4.e(0) ^ scale(u4.f(0), Gf4::TAU);
        assert_eq!(u4.form(v, v), Gf4::ONE);
        assert!(!u4.is_singular(v));
    }

    #[test]
    fn forms_agree_with_coordinate_evaluation() {
        for (fam, dim) in [(Family::OPlus, 6), (Family::OMinus, 8), (Family::Unitary, 4), (Family::Unitary, 5)] {
            let s = build_space(SpaceSpec::new(fam, dim).unwrap()).unwrap();
            let pts = s.all_points();
            let sample: Vec<Vector> = pts.iter().step_by(7).copied().collect();
            for &u in &sample {
                for &v in &sample {
                    let b = s.form(u, v);
                    assert_eq!(b, slow_form(&s, u, v));
                    // symmetric or hermitian
                    let back = s.form(v, u);
                    assert_eq!(b, if fam.is_orthogonal() { back } else { back.conj() });
                    for &x in s.scalars() {
                        assert_eq!(s.form(scale(u, x), v), x * b);
                    }
                    if fam.is_orthogonal() {
                        // polarization Q(u+v) = Q(u) + Q(v) + (u,v)
                        let q = |w| Gf4::from_bits(s.quadratic(w).unwrap().0 as u8);
                        assert_eq!(q(u ^ v), q(u) + q(v) + b);
                    }
                }
            }
        }
    }

    #[test]
    fn point_counts() {
        let o = ps(Family::OPlus, 6);
        assert_eq!((o.p.len(), o.p0.len()), (28, 35));
        let u = ps(Family::Unitary, 4);
        assert_eq!((u.p.len(), u.p0.len()), (40, 45));
        assert_eq!(ps(Family::Unitary, 5).p.len(), 176);
        for v in u.p.iter().chain(&u.p0) {
            assert_eq!(normalize(*v), *v);
        }
    }

    #[test]
    fn params_examples() {
        let cases = [
            (Family::OPlus, 6, (28, 12, 15, 6, 4)),
            (Family::OMinus, 6, (36, 20, 15, 10, 12)),
            (Family::Unitary, 5, (176, 40, 135, 12, 8)),
            (Family::Unitary, 4, (40, 12, 27, 2, 4)),
            (Family::OPlus, 8, (120, 56, 63, 28, 24)),
            (Family::OMinus, 8, (136, 72, 63, 36, 40)),
        ];
        for (fam, dim, (v, a, b, r, s)) in cases {
            let spec = SpaceSpec::new(fam, dim).unwrap();
            let want = Rank3Params { v, a, b, r, s };
            assert_eq!(closed_params(spec), want);
            assert_eq!(brute_params(&ps(fam, dim)).unwrap(), want);
        }
    }

    #[test]
    fn roots_examples() {
        let r = |fam, dim| quadratic_roots(&closed_params(SpaceSpec::new(fam, dim).unwrap())).unwrap();
        assert_eq!(r(Family::OPlus, 6), Roots { c: 2, d: -4 });
        assert_eq!(r(Family::Unitary, 4), Roots { c: -2, d: 4 });
        assert_eq!(r(Family::Unitary, 5), Roots { c: 4, d: -8 });
    }

    #[test]
    fn closed_formulas_are_consistent_to_n_12() {
        for n in 3..=12 {
            for fam in [Family::OPlus, Family::OMinus] {
                let spec = SpaceSpec::orthogonal(fam, n).unwrap();
                let p = closed_params(spec);
                assert!(p.is_consistent(), "{spec} {p:?}");
                assert_eq!(quadratic_roots(&p).unwrap(), root_pattern(spec));
            }
        }
        for m in 4..=25 {
            let spec = SpaceSpec::unitary(m).unwrap();
            let p = closed_params(spec);
            assert!(p.is_consistent(), "{spec} {p:?}");
            assert_eq!(quadratic_roots(&p).unwrap(), root_pattern(spec));
        }
    }

    #[test]
    fn adjacency_is_symmetric_and_strongly_regular() {
        for (fam, dim) in [
            (Family::OPlus, 6),
            (Family::OMinus, 6),
            (Family::Unitary, 4),
            (Family::Unitary, 5),
            (Family::OPlus, 8),
            (Family::OMinus, 8),
        ] {
            let x = ps(fam, dim);
            for i in 0..x.v() {
                for &j in &x.delta[i] {
                    assert!(x.adjacent(j as usize, i));
                }
            }
            let p = brute_params(&x).unwrap();
            for i in 0..x.v() {
                assert_eq!(x.phi(i).len() as i64, p.b);
            }
        }
    }

    #[test]
    fn lambda_and_gamma_are_transposes() {
        let x = ps(Family::OPlus, 6);
        // |Λ(α)| = 2^{2n−2} − 1 = 15 for n = 3
        assert!(x.lambda.iter().all(|l| l.len() == 15));
        let total: usize = x.gamma.iter().map(Vec::len).sum();
        assert_eq!(total, 28 * 15);
    }
}
