use std::sync::Arc;

use super::{is_normal, ElementSet, PermGroup};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// `G -> G/N` realised as the action of `G` on the right cosets of `N`.
///
/// For `N = 1` the image is `G` itself and `forward` is the identity.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: PermGroup,
    kernel: PermGroup,
    image: PermGroup,
    source_elements: Arc<ElementSet>,
    /// Coset index of every source element (indexed like `source_elements`); empty for `N = 1`.
    coset_of: Vec<u32>,
    /// Least element of each coset.
    coset_reps: Vec<Permutation>,
}

impl QuotientMap {
    pub fn source(&self) -> &PermGroup {
        &self.source
    }

    pub fn kernel(&self) -> &PermGroup {
        &self.kernel
    }

    pub fn image(&self) -> &PermGroup {
        &self.image
    }

    fn is_identity_map(&self) -> bool {
        self.coset_of.is_empty()
    }

    pub fn coset_index(&self, g: &Permutation) -> Result<usize> {
        let idx = self
            .source_elements
            .index_of(g)
            .ok_or_else(|| Error::Domain(format!("{g} is not in the source group")))?;
        Ok(if self.is_identity_map() {
            idx
        } else {
            self.coset_of[idx] as usize
        })
    }

    pub fn forward(&self, g: &Permutation) -> Result<Permutation> {
        if self.is_identity_map() {
            if !self.source.contains(g) {
                return Err(Error::Domain(format!("{g} is not in the source group")));
            }
            return Ok(g.clone());
        }
        self.source_elements
            .index_of(g)
            .ok_or_else(|| Error::Domain(format!("{g} is not in the source group")))?;
        let images: Vec<usize> = self
            .coset_reps
            .iter()
            .map(|r| self.coset_of[self.source_elements.index_of(&r.mul(g)).unwrap()] as usize)
            .collect();
        Permutation::from_images(&images)
    }

    /// Full preimage of a subgroup of the image.
    pub fn preimage(&self, sub: &PermGroup) -> Result<PermGroup> {
        if !sub.is_subgroup_of(&self.image) {
            return Err(Error::Domain("not a subgroup of the quotient".into()));
        }
        let mut elems = Vec::new();
        for g in self.source_elements.iter() {
            if sub.contains(&self.forward(g)?) {
                elems.push(g.clone());
            }
        }
        Ok(PermGroup::from_elements(self.source.degree(), elems))
    }
}

pub fn quotient(g: &PermGroup, n: &PermGroup) -> Result<QuotientMap> {
    if !is_normal(g, n)? {
        return Err(Error::Domain("kernel is not normal in the source group".into()));
    }
    let source_elements = g.elements()?;
    if n.is_trivial() {
        return Ok(QuotientMap {
            source: g.clone(),
            kernel: n.clone(),
            image: g.clone(),
            source_elements,
            coset_of: Vec::new(),
            coset_reps: Vec::new(),
        });
    }
    let kernel_elements = n.elements()?;
    let mut coset_of = vec![u32::MAX; source_elements.len()];
    let mut coset_reps = Vec::new();
    for (i, x) in source_elements.iter().enumerate() {
        if coset_of[i] != u32::MAX {
            continue;
        }
        let c = coset_reps.len() as u32;
        for k in kernel_elements.iter() {
            coset_of[source_elements.index_of(&k.mul(x)).unwrap()] = c;
        }
        coset_reps.push(x.clone());
    }
    let mut map = QuotientMap {
        source: g.clone(),
        kernel: n.clone(),
        image: PermGroup::trivial(coset_reps.len().max(1)),
        source_elements,
        coset_of,
        coset_reps,
    };
    let gens = g
        .generators()
        .iter()
        .map(|s| map.forward(s))
        .collect::<Result<Vec<_>>>()?;
    map.image = PermGroup::new(map.coset_reps.len(), gens)?;
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, c: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, &c.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn a4_mod_v4() {
        let a4 = PermGroup::new(4, vec![cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[0, 1], &[2, 3]])]).unwrap();
        let v4 = PermGroup::new(4, vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])]).unwrap();
        let q = quotient(&a4, &v4).unwrap();
        assert_eq!(q.image().order(), 3);
        // homomorphism and kernel
        let elems = a4.elements().unwrap();
        for a in elems.iter() {
            for b in elems.iter() {
                let lhs = q.forward(&a.mul(b)).unwrap();
                let rhs = q.forward(a).unwrap().mul(&q.forward(b).unwrap());
                assert_eq!(lhs, rhs);
            }
            assert_eq!(q.forward(a).unwrap().is_identity(), v4.contains(a));
        }
        assert!(q.preimage(&PermGroup::trivial(3)).unwrap().same_group(&v4));
    }

    #[test]
    fn degenerate_kernels() {
        let s3 = PermGroup::new(3, vec![cyc(3, &[&[0, 1, 2]]), cyc(3, &[&[0, 1]])]).unwrap();
        let whole = quotient(&s3, &s3).unwrap();
        assert_eq!(whole.image().order(), 1);
        let id = quotient(&s3, &PermGroup::trivial(3)).unwrap();
        assert!(id.image().same_group(&s3));
        let g = cyc(3, &[&[0, 1]]);
        assert_eq!(id.forward(&g).unwrap(), g);
        let t = PermGroup::new(3, vec![cyc(3, &[&[0, 1]])]).unwrap();
        assert!(matches!(quotient(&s3, &t), Err(Error::Domain(_))));
    }
}
