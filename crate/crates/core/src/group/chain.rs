//! Deterministic Schreier–Sims stabilizer chains.

use crate::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    /// `transversal[b]` maps the base point to `b`, for `b` in the basic orbit.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            transversal: vec![None; degree],
            orbit: Vec::new(),
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.transversal[self.base] = Some(Permutation::identity(degree));
        self.orbit = vec![self.base];
        let mut i = 0;
        while i < self.orbit.len() {
            let b = self.orbit[i];
            let u = self.transversal[b].clone().expect("orbit point has a transversal");
            for g in &self.gens {
                let c = g.image(b);
                if self.transversal[c].is_none() {
                    self.transversal[c] = Some(u.mul(g));
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
    }
}

/// A base and strong generating set with basic orbit transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        let gens: Vec<Permutation> = generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for g in &gens {
            if chain.levels.iter().all(|l| g.image(l.base) == l.base) {
                let moved = (0..degree).find(|&i| g.image(i) != i).expect("non-identity");
                chain.levels.push(Level::new(moved, degree));
            }
        }
        // S_i = generators fixing the first i base points.
        let bases: Vec<usize> = chain.levels.iter().map(|l| l.base).collect();
        for (i, level) in chain.levels.iter_mut().enumerate() {
            level.gens = gens
                .iter()
                .filter(|g| bases[..i].iter().all(|&b| g.image(b) == b))
                .cloned()
                .collect();
            level.rebuild_orbit(degree);
        }
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            let mut restart = None;
            'search: for &beta in &self.levels[li].orbit.clone() {
                let u_beta = self.levels[li].transversal[beta].clone().unwrap();
                for s in self.levels[li].gens.clone() {
                    let image = s.image(beta);
                    let u_image = self.levels[li].transversal[image].as_ref().unwrap();
                    let schreier = u_beta.mul(&s).mul(&u_image.inverse());
                    let (residue, dropped) = self.sift_from(schreier, li + 1);
                    if !residue.is_identity() {
                        if dropped == self.levels.len() {
                            let moved = (0..self.degree)
                                .find(|&p| residue.image(p) != p)
                                .expect("non-identity residue");
                            self.levels.push(Level::new(moved, self.degree));
                        }
                        for l in li + 1..=dropped {
                            self.levels[l].gens.push(residue.clone());
                            self.levels[l].rebuild_orbit(self.degree);
                        }
                        restart = Some(dropped);
                        break 'search;
                    }
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    /// Strips `g` through the levels starting at `start`; returns the residue and the level
    /// where sifting stopped (`levels.len()` if it went all the way through).
    fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (idx, level) in self.levels.iter().enumerate().skip(start) {
            let b = g.image(level.base);
            match &level.transversal[b] {
                Some(u) => g = g.mul(&u.inverse()),
                None => return (g, idx),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift_from(g.clone(), 0).0.is_identity()
    }

    /// Group order as a product of basic orbit lengths.
    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }
}
