//! Permutations and base-and-strong-generating-set computations.

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A permutation of `0..n`, mapping `i` to `self.0[i]`.
///
/// Permutations act on the right, so `a.then(&b)` applies `a` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn image(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u32;
        }
        Perm(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// True if the images form a bijection of `0..n`.
    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        for &j in &self.0 {
            match seen.get_mut(j as usize) {
                Some(s) if !*s => *s = true,
                _ => return false,
            }
        }
        true
    }

    pub fn first_moved(&self) -> Option<u32> {
        self.0.iter().enumerate().find(|(i, &j)| *i as u32 != j).map(|(i, _)| i as u32)
    }

    pub fn order(&self) -> BigUint {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut acc = BigUint::from(1u32);
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0u64;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            let l = BigUint::from(len);
            let g = gcd(&acc, &l);
            acc = acc * &l / g;
        }
        acc
    }
}

fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = (a.clone(), b.clone());
    while b != BigUint::from(0u32) {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Orbit of `start` under `gens`, in breadth-first order.
pub fn orbit(gens: &[Perm], start: u32) -> Vec<u32> {
    let n = gens.first().map_or(0, Perm::degree);
    let mut seen = vec![false; n.max(start as usize + 1)];
    seen[start as usize] = true;
    let mut out = vec![start];
    let mut k = 0;
    while k < out.len() {
        let x = out[k];
        for g in gens {
            let y = g.image(x);
            if !seen[y as usize] {
                seen[y as usize] = true;
                out.push(y);
            }
        }
        k += 1;
    }
    out
}

struct Level {
    point: u32,
    /// Strong generators fixing all earlier base points, with inverses.
    gens: Vec<(Perm, Perm)>,
    orbit: Vec<u32>,
    /// For each point of the orbit, the generator used to reach it, or
    /// `NONE`; the base point itself holds `ROOT`.
    label: Vec<u32>,
}

const NONE: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

impl Level {
    fn new(point: u32, n: usize) -> Level {
        let mut l = Level { point, gens: Vec::new(), orbit: Vec::new(), label: vec![NONE; n] };
        l.rebuild();
        l
    }

    fn rebuild(&mut self) {
        self.label.fill(NONE);
        self.label[self.point as usize] = ROOT;
        self.orbit = vec![self.point];
        let mut k = 0;
        while k < self.orbit.len() {
            let x = self.orbit[k];
            for (gi, (g, _)) in self.gens.iter().enumerate() {
                let y = g.image(x);
                if self.label[y as usize] == NONE {
                    self.label[y as usize] = gi as u32;
                    self.orbit.push(y);
                }
            }
            k += 1;
        }
    }

    #[inline]
    fn contains(&self, x: u32) -> bool {
        self.label[x as usize] != NONE
    }

    /// Replaces `h` by `h·u⁻¹` where u is the transversal element taking the
    /// base point to `h(point)`.
    fn strip(&self, h: &mut Perm) {
        let mut y = h.image(self.point);
        while self.label[y as usize] != ROOT {
            let (_, ginv) = &self.gens[self.label[y as usize] as usize];
            *h = h.then(ginv);
            y = ginv.image(y);
        }
    }

    /// The transversal element taking the base point to `x`.
    fn transversal(&self, x: u32, n: usize) -> Perm {
        let mut path = Vec::new();
        let mut y = x;
        while self.label[y as usize] != ROOT {
            let gi = self.label[y as usize] as usize;
            path.push(gi);
            y = self.gens[gi].1.image(y);
        }
        let mut u = Perm::identity(n);
        for &gi in path.iter().rev() {
            u = u.then(&self.gens[gi].0);
        }
        u
    }
}

/// A stabilizer chain for a permutation group.
pub struct Bsgs {
    n: usize,
    gens: Vec<Perm>,
    levels: Vec<Level>,
}

/// Outcome of sifting an element through the chain.
enum Sift {
    Member,
    /// Residue fixing the base points before `level`; `level == depth`
    /// means it fixes the whole base but is not the identity.
    Residue {
        h: Perm,
        level: usize,
    },
}

impl Bsgs {
    pub fn new(gens: &[Perm]) -> Bsgs {
        let n = gens.first().map_or(0, Perm::degree);
        Bsgs { n, gens: gens.iter().filter(|g| !g.is_identity()).cloned().collect(), levels: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Product of the basic orbit lengths. It is a lower bound for the group
    /// order after any phase and equals it once the chain is complete.
    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        self.levels.first().map(|l| l.gens.iter().map(|g| g.0.clone()).collect()).unwrap_or_default()
    }

    fn sift(&self, g: &Perm) -> Sift {
        let mut h = g.clone();
        for (i, l) in self.levels.iter().enumerate() {
            if !l.contains(h.image(l.point)) {
                return Sift::Residue { h, level: i };
            }
            l.strip(&mut h);
        }
        if h.is_identity() {
            Sift::Member
        } else {
            let level = self.levels.len();
            Sift::Residue { h, level }
        }
    }

    /// Membership test; only conclusive once the chain is complete.
    pub fn contains(&self, g: &Perm) -> bool {
        matches!(self.sift(g), Sift::Member)
    }

    /// Adds `h` (fixing the base points before `level`) as a strong
    /// generator, extending the base if it fixes all of it.
    fn add_strong(&mut self, h: Perm, level: usize) {
        if level == self.levels.len() {
            let pt = h.first_moved().expect("residue is not the identity");
            self.levels.push(Level::new(pt, self.n));
        }
        let inv = h.inverse();
        for l in &mut self.levels[..=level] {
            l.gens.push((h.clone(), inv.clone()));
            l.rebuild();
        }
    }

    /// Random Schreier–Sims. Stops once `stop_after` consecutive random
    /// elements sift through, or as soon as the order reaches `target`.
    pub fn random_phase(&mut self, seed: u64, stop_after: usize, target: Option<&BigUint>) {
        if self.gens.is_empty() {
            return;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<Perm> = self.gens.clone();
        while pool.len() < 10 {
            pool.push(self.gens[pool.len() % self.gens.len()].clone());
        }
        let mut acc = Perm::identity(self.n);
        // product replacement warm-up
        for _ in 0..50 {
            product_replacement(&mut rng, &mut pool, &mut acc);
        }
        for g in self.gens.clone() {
            if let Sift::Residue { h, level } = self.sift(&g) {
                self.add_strong(h, level);
            }
        }
        let mut quiet = 0;
        while quiet < stop_after {
            if target.is_some_and(|t| &self.order() == t) {
                return;
            }
            product_replacement(&mut rng, &mut pool, &mut acc);
            match self.sift(&acc) {
                Sift::Member => quiet += 1,
                Sift::Residue { h, level } => {
                    self.add_strong(h, level);
                    quiet = 0;
                }
            }
        }
    }

    /// Deterministic Schreier–Sims: checks every Schreier generator and adds
    /// residues until the chain is complete.
    pub fn complete(&mut self) {
        for g in self.gens.clone() {
            if let Sift::Residue { h, level } = self.sift(&g) {
                self.add_strong(h, level);
            }
        }
        let mut i = self.levels.len();
        while i > 0 {
            let lvl = i - 1;
            match self.bad_schreier_generator(lvl) {
                Some((h, level)) => {
                    self.add_strong(h, level);
                    i = self.levels.len().min(level + 1);
                }
                None => i -= 1,
            }
        }
    }

    fn bad_schreier_generator(&self, lvl: usize) -> Option<(Perm, usize)> {
        let l = &self.levels[lvl];
        let reps: Vec<Perm> = l.orbit.iter().map(|&x| l.transversal(x, self.n)).collect();
        for (k, &x) in l.orbit.iter().enumerate() {
            for (s, _) in &l.gens {
                let y = s.image(x);
                let mut g = reps[k].then(s);
                // g · u_y⁻¹ fixes the level's base point
                l.strip(&mut g);
                debug_assert_eq!(g.image(l.point), l.point, "stripped element must fix the base point at {y}");
                let mut h = g;
                let mut failed = None;
                for (j, lj) in self.levels.iter().enumerate().skip(lvl + 1) {
                    if !lj.contains(h.image(lj.point)) {
                        failed = Some(j);
                        break;
                    }
                    lj.strip(&mut h);
                }
                match failed {
                    Some(j) => return Some((h, j)),
                    None if !h.is_identity() => return Some((h, self.levels.len())),
                    None => {}
                }
            }
        }
        None
    }
}

fn product_replacement(rng: &mut ChaCha8Rng, pool: &mut [Perm], acc: &mut Perm) {
    let k = pool.len();
    let i = rng.gen_range(0..k);
    let mut j = rng.gen_range(0..k - 1);
    if j >= i {
        j += 1;
    }
    pool[i] = if rng.gen_bool(0.5) { pool[i].then(&pool[j]) } else { pool[j].then(&pool[i]) };
    *acc = acc.then(&pool[i]);
}

/// Exact order of ⟨gens⟩ by deterministic Schreier–Sims.
pub fn group_order(gens: &[Perm]) -> BigUint {
    let mut b = Bsgs::new(gens);
    b.random_phase(0, 20, None);
    b.complete();
    b.order()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, pts: &[u32]) -> Perm {
        let mut p = Perm::identity(n);
        for w in 0..pts.len() {
            p.0[pts[w] as usize] = pts[(w + 1) % pts.len()];
        }
        p
    }

    fn factorial(n: u32) -> BigUint {
        (1..=n).fold(BigUint::from(1u32), |a, k| a * BigUint::from(k))
    }

    /// Closure by breadth-first multiplication; only for tiny groups.
    fn brute_order(gens: &[Perm]) -> usize {
        let n = gens[0].degree();
        let mut seen = std::collections::HashSet::new();
        let mut queue = vec![Perm::identity(n)];
        seen.insert(Perm::identity(n));
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = x.then(g);
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn perm_basics() {
        let a = cycle(5, &[0, 1, 2]);
        let b = cycle(5, &[2, 3]);
        assert_eq!(a.then(&a.inverse()), Perm::identity(5));
        assert_eq!(a.then(&b).image(1), 3);
        assert_eq!(a.order(), BigUint::from(3u32));
        assert_eq!(a.then(&b).order(), BigUint::from(4u32));
        assert!(a.is_valid() && !Perm(vec![0, 0]).is_valid());
    }

    #[test]
    fn symmetric_and_alternating_orders() {
        for n in [5usize, 7, 10] {
            let s = vec![cycle(n, &(0..n as u32).collect::<Vec<_>>()), cycle(n, &[0, 1])];
            assert_eq!(group_order(&s), factorial(n as u32));
            let a: Vec<Perm> = (0..n as u32 - 2).map(|i| cycle(n, &[i, i + 1, i + 2])).collect();
            assert_eq!(group_order(&a), factorial(n as u32) / 2u32);
        }
    }

    #[test]
    fn matches_brute_closure() {
        let n = 8;
        let cases = vec![
            vec![cycle(n, &[0, 1, 2, 3]), cycle(n, &[4, 5])],
            vec![cycle(n, &[0, 1, 2, 3, 4, 5, 6, 7]), cycle(n, &[0, 4])],
            vec![cycle(n, &[0, 1]), cycle(n, &[2, 3]), cycle(n, &[0, 2])],
            vec![cycle(n, &[0, 1, 2]), cycle(n, &[3, 4, 5, 6])],
        ];
        for gens in cases {
            let brute = brute_order(&gens);
            assert_eq!(group_order(&gens), BigUint::from(brute));
            let mut r = Bsgs::new(&gens);
            r.random_phase(5, 40, None);
            assert!(r.order() <= BigUint::from(brute));
        }
    }

    #[test]
    fn membership_after_completion() {
        let n = 6;
        let gens = vec![cycle(n, &[0, 1, 2]), cycle(n, &[3, 4, 5])];
        let mut b = Bsgs::new(&gens);
        b.complete();
        assert!(b.contains(&cycle(n, &[0, 2, 1])));
        assert!(!b.contains(&cycle(n, &[0, 3])));
    }

    #[test]
    fn orbits() {
        let gens = vec![cycle(6, &[0, 1]), cycle(6, &[1, 2])];
        let mut o = orbit(&gens, 2);
        o.sort();
        assert_eq!(o, vec![0, 1, 2]);
        assert_eq!(orbit(&gens, 4), vec![4]);
    }
}
