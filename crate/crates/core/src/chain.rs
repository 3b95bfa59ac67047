//! Deterministic Schreier-Sims stabilizer chains.
//!
//! Each level `i` stores a base point `b_i`, the indices of the strong
//! generators registered there (all of which fix `b_0..b_{i-1}`), the orbit
//! of `b_i` under them and explicit transversal elements `u_x` with
//! `b_i^{u_x} = x`. Transversal entries are never rewritten once set, so a
//! Schreier generator checked once stays checked; `checked[p]` records how
//! many of the level's generators have been tried against orbit position `p`.

use num_bigint::BigUint;

use crate::perm::Perm;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<usize>,
    orbit: Vec<u32>,
    transversal: Vec<Option<Perm>>,
    inverse: Vec<Option<Perm>>,
    checked: Vec<usize>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut transversal = vec![None; degree];
        let mut inverse = vec![None; degree];
        transversal[base] = Some(Perm::identity(degree));
        inverse[base] = Some(Perm::identity(degree));
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base as u32],
            transversal,
            inverse,
            checked: vec![0],
        }
    }
}

#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabChain {
    /// An empty chain whose base starts with `prefix` (distinct points).
    pub fn with_base_prefix(degree: usize, prefix: &[usize]) -> Self {
        let mut levels: Vec<Level> = Vec::with_capacity(prefix.len());
        for &b in prefix {
            assert!(b < degree, "base point {b} out of range");
            assert!(
                levels.iter().all(|l| l.base != b),
                "repeated base point {b}"
            );
            levels.push(Level::new(degree, b));
        }
        StabChain {
            degree,
            strong: Vec::new(),
            levels,
        }
    }

    pub fn from_generators(degree: usize, gens: &[Perm], prefix: &[usize]) -> Self {
        let mut chain = StabChain::with_base_prefix(degree, prefix);
        for g in gens {
            chain.add_generator(g);
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong
    }

    /// Fundamental orbit lengths along the base.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| {
            acc * BigUint::from(l.orbit.len())
        })
    }

    /// Generators of the pointwise stabilizer of the first `k` base points.
    pub fn stabilizer_generators(&self, k: usize) -> Vec<Perm> {
        match self.levels.get(k) {
            Some(level) => level.gens.iter().map(|&i| self.strong[i].clone()).collect(),
            None => Vec::new(),
        }
    }

    /// Strips `g` through levels `from..`; returns the residue and the level
    /// at which stripping stopped (`levels.len()` if it went all the way).
    fn sift(&self, g: &Perm, from: usize) -> (Perm, usize) {
        let mut g = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let x = g.image(level.base);
            match &level.inverse[x] {
                Some(ui) => g = g.then(ui),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (r, j) = self.sift(g, 0);
        j == self.levels.len() && r.is_identity()
    }

    /// Adds `g` to the group; returns false when it was already a member.
    pub fn add_generator(&mut self, g: &Perm) -> bool {
        assert_eq!(g.degree(), self.degree, "generator degree");
        let (r, j) = self.sift(g, 0);
        if j == self.levels.len() && r.is_identity() {
            return false;
        }
        self.insert(r, 0, j);
        self.complete(j);
        true
    }

    /// Registers `r` as a strong generator on levels `lo..=hi`, opening a new
    /// level when `hi` is past the end.
    fn insert(&mut self, r: Perm, lo: usize, hi: usize) {
        if hi == self.levels.len() {
            let base = r
                .first_moved()
                .expect("a residue past the last level is not the identity");
            self.levels.push(Level::new(self.degree, base));
        }
        let idx = self.strong.len();
        self.strong.push(r);
        for l in lo..=hi {
            self.levels[l].gens.push(idx);
            self.extend_orbit(l, idx);
        }
    }

    fn extend_orbit(&mut self, l: usize, new_gen: usize) {
        let strong = &self.strong;
        let level = &mut self.levels[l];
        let s = &strong[new_gen];
        let old_len = level.orbit.len();
        for p in 0..old_len {
            let x = level.orbit[p] as usize;
            let y = s.image(x);
            if level.transversal[y].is_none() {
                let u = level.transversal[x].as_ref().expect("orbit point").then(s);
                level.inverse[y] = Some(u.inverse());
                level.transversal[y] = Some(u);
                level.orbit.push(y as u32);
                level.checked.push(0);
            }
        }
        let mut head = old_len;
        while head < level.orbit.len() {
            let x = level.orbit[head] as usize;
            for &gi in &level.gens {
                let g = &strong[gi];
                let y = g.image(x);
                if level.transversal[y].is_none() {
                    let u = level.transversal[x].as_ref().expect("orbit point").then(g);
                    level.inverse[y] = Some(u.inverse());
                    level.transversal[y] = Some(u);
                    level.orbit.push(y as u32);
                    level.checked.push(0);
                }
            }
            head += 1;
        }
    }

    /// Next Schreier generator of level `i` that does not sift through the
    /// levels below, as (residue, level where sifting stopped).
    fn next_failure(&mut self, i: usize) -> Option<(Perm, usize)> {
        let n_orbit = self.levels[i].orbit.len();
        for p in 0..n_orbit {
            while self.levels[i].checked[p] < self.levels[i].gens.len() {
                let level = &self.levels[i];
                let q = level.gens[level.checked[p]];
                let x = level.orbit[p] as usize;
                let s = &self.strong[q];
                let y = s.image(x);
                let h = level.transversal[x]
                    .as_ref()
                    .expect("orbit point")
                    .then(s)
                    .then(level.inverse[y].as_ref().expect("orbit closed"));
                self.levels[i].checked[p] += 1;
                if h.is_identity() {
                    continue;
                }
                let (r, j) = self.sift(&h, i + 1);
                if j < self.levels.len() || !r.is_identity() {
                    return Some((r, j));
                }
            }
        }
        None
    }

    fn complete(&mut self, start: usize) {
        let mut i = start.min(self.levels.len().saturating_sub(1));
        if self.levels.is_empty() {
            return;
        }
        loop {
            match self.next_failure(i) {
                Some((r, j)) => {
                    self.insert(r, i + 1, j);
                    i = j;
                }
                None => {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
        Perm::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn symmetric_and_alternating_orders() {
        let s5 =
            StabChain::from_generators(5, &[cyc(5, &[&[1, 2]]), cyc(5, &[&[1, 2, 3, 4, 5]])], &[]);
        assert_eq!(s5.order(), BigUint::from(120u32));
        let a5 = StabChain::from_generators(
            5,
            &[cyc(5, &[&[1, 2, 3]]), cyc(5, &[&[1, 2, 3, 4, 5]])],
            &[],
        );
        assert_eq!(a5.order(), BigUint::from(60u32));
        assert!(a5.contains(&cyc(5, &[&[2, 4, 5]])));
        assert!(!a5.contains(&cyc(5, &[&[4, 5]])));
    }

    #[test]
    fn empty_chain_is_trivial() {
        let c = StabChain::from_generators(4, &[Perm::identity(4)], &[]);
        assert_eq!(c.order(), BigUint::from(1u32));
        assert!(c.contains(&Perm::identity(4)));
        assert!(!c.contains(&cyc(4, &[&[1, 2]])));
    }

    #[test]
    fn base_prefix_gives_pointwise_stabilizers() {
        // S4 with base starting at 4: stabilizer of 4 is S3 on {1,2,3}
        let gens = [cyc(4, &[&[1, 2]]), cyc(4, &[&[1, 2, 3, 4]])];
        let c = StabChain::from_generators(4, &gens, &[3]);
        assert_eq!(c.base()[0], 3);
        let stab = StabChain::from_generators(4, &c.stabilizer_generators(1), &[]);
        assert_eq!(stab.order(), BigUint::from(6u32));
        assert_eq!(c.order(), BigUint::from(24u32));
    }
}
