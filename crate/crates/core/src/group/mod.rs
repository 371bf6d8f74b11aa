//! Finite permutation groups.
//!
//! Order and membership come from a stabilizer chain. Everything that needs conjugacy
//! information enumerates the elements, which is only allowed up to
//! [`ENUMERATION_LIMIT`] elements.

mod chain;
mod quotient;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;

pub use chain::StabChain;
pub use quotient::{quotient, QuotientMap};

use crate::arith::{p_part, p_prime_part, require_prime};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Groups with more elements than this are rejected by enumeration-backed operations.
pub const ENUMERATION_LIMIT: u64 = 100_000;

/// All elements of a group, sorted lexicographically by image array.
#[derive(Debug)]
pub struct ElementSet {
    elems: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
}

impl ElementSet {
    fn from_sorted(elems: Vec<Permutation>) -> Self {
        let index = elems.iter().enumerate().map(|(i, g)| (g.clone(), i as u32)).collect();
        ElementSet { elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn get(&self, i: usize) -> &Permutation {
        &self.elems[i]
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[Permutation] {
        &self.elems
    }
}

/// Conjugacy classes ordered by representative; each representative is the
/// lexicographically least member of its class, so the identity class comes first.
#[derive(Debug)]
pub struct ConjugacyClasses {
    reps: Vec<Permutation>,
    sizes: Vec<usize>,
    orders: Vec<u64>,
    /// Class index of each element, indexed like the group's [`ElementSet`].
    class_of: Vec<u32>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representatives(&self) -> &[Permutation] {
        &self.reps
    }

    pub fn representative(&self, k: usize) -> &Permutation {
        &self.reps[k]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, k: usize) -> usize {
        self.sizes[k]
    }

    /// Element order of the class representatives.
    pub fn element_order(&self, k: usize) -> u64 {
        self.orders[k]
    }

    /// Class index of the element with the given position in the element list.
    pub fn class_of_index(&self, element_index: usize) -> usize {
        self.class_of[element_index] as usize
    }

    pub fn element_to_class(&self) -> &[u32] {
        &self.class_of
    }
}

/// A permutation group on `{0, .., degree-1}` given by generators.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabChain,
    elements: OnceLock<Arc<ElementSet>>,
    classes: OnceLock<Arc<ConjugacyClasses>>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(degree {}, order {}, gens [", self.degree, self.order())?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "])")
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Input("degree must be positive".into()));
        }
        if let Some(bad) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::Input(format!(
                "generator {bad} has degree {} but the group has degree {degree}",
                bad.degree()
            )));
        }
        let generators: Vec<Permutation> = generators.into_iter().filter(|g| !g.is_identity()).collect();
        let chain = StabChain::new(degree, &generators);
        Ok(PermGroup {
            degree,
            generators,
            chain,
            elements: OnceLock::new(),
            classes: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).expect("trivial group is valid")
    }

    /// Builds a group from a complete, multiplicatively closed, element list.
    /// A small generating set is chosen greedily in lexicographic order.
    pub(crate) fn from_elements(degree: usize, mut elems: Vec<Permutation>) -> Self {
        elems.sort_unstable();
        let mut gens = Vec::new();
        let mut current: HashSet<Permutation> = HashSet::new();
        current.insert(Permutation::identity(degree));
        for g in &elems {
            if current.contains(g) {
                continue;
            }
            gens.push(g.clone());
            current = closure(degree, &gens);
            if current.len() == elems.len() {
                break;
            }
        }
        let group = PermGroup::new(degree, gens).expect("elements share the degree");
        debug_assert_eq!(group.order() as usize, elems.len());
        let _ = group.elements.set(Arc::new(ElementSet::from_sorted(elems)));
        group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn order(&self) -> u64 {
        u64::try_from(self.chain.order()).unwrap_or(u64::MAX)
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain.contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// Same set of elements.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    fn check_capacity(&self) -> Result<()> {
        if self.chain.order() > ENUMERATION_LIMIT as u128 {
            return Err(Error::Capacity(format!(
                "group of order {} exceeds the enumeration limit {ENUMERATION_LIMIT}",
                self.chain.order()
            )));
        }
        Ok(())
    }

    pub fn elements(&self) -> Result<Arc<ElementSet>> {
        if let Some(e) = self.elements.get() {
            return Ok(e.clone());
        }
        self.check_capacity()?;
        let mut elems: Vec<Permutation> = closure(self.degree, &self.generators).into_iter().collect();
        elems.sort_unstable();
        Ok(self
            .elements
            .get_or_init(|| Arc::new(ElementSet::from_sorted(elems)))
            .clone())
    }

    pub fn conjugacy_classes(&self) -> Result<Arc<ConjugacyClasses>> {
        if let Some(c) = self.classes.get() {
            return Ok(c.clone());
        }
        let elements = self.elements()?;
        let n = elements.len();
        let mut class_of = vec![u32::MAX; n];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let mut orders = Vec::new();
        for start in 0..n {
            if class_of[start] != u32::MAX {
                continue;
            }
            let k = reps.len() as u32;
            class_of[start] = k;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let x = elements.get(orbit[i]).clone();
                for g in &self.generators {
                    let y = elements.index_of(&x.conjugate_by(g)).expect("closed under conjugation");
                    if class_of[y] == u32::MAX {
                        class_of[y] = k;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            let rep = elements.get(start).clone();
            orders.push(rep.order());
            reps.push(rep);
            sizes.push(orbit.len());
        }
        let classes = ConjugacyClasses {
            reps,
            sizes,
            orders,
            class_of,
        };
        Ok(self.classes.get_or_init(|| Arc::new(classes)).clone())
    }

    /// Class index of `g`, which must lie in the group.
    pub fn class_of(&self, g: &Permutation) -> Result<usize> {
        let elements = self.elements()?;
        let idx = elements
            .index_of(g)
            .ok_or_else(|| Error::Domain(format!("{g} is not an element of the group")))?;
        Ok(self.conjugacy_classes()?.class_of_index(idx))
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> Result<u64> {
        let classes = self.conjugacy_classes()?;
        Ok((0..classes.len()).fold(1u64, |acc, k| acc.lcm(&classes.element_order(k))))
    }

    fn require_member(&self, g: &Permutation) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{g} is not an element of the group")))
        }
    }

    fn require_subgroup(&self, h: &PermGroup) -> Result<()> {
        if h.is_subgroup_of(self) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{h:?} is not a subgroup of {self:?}")))
        }
    }

    fn filter(&self, pred: impl Fn(&Permutation) -> bool) -> Result<PermGroup> {
        let elems: Vec<Permutation> = self.elements()?.iter().filter(|g| pred(g)).cloned().collect();
        Ok(PermGroup::from_elements(self.degree, elems))
    }
}

fn closure(degree: usize, gens: &[Permutation]) -> HashSet<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::new();
    seen.insert(id.clone());
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = x.mul(g);
            if !seen.contains(&y) {
                seen.insert(y.clone());
                queue.push(y);
            }
        }
    }
    seen
}

pub fn group_from_generators(degree: usize, gens: Vec<Permutation>) -> Result<PermGroup> {
    PermGroup::new(degree, gens)
}

pub fn conjugacy_classes(g: &PermGroup) -> Result<Arc<ConjugacyClasses>> {
    g.conjugacy_classes()
}

/// `{g in G : gx = xg}`.
pub fn centralizer(g: &PermGroup, x: &Permutation) -> Result<PermGroup> {
    g.require_member(x)?;
    g.filter(|y| y.commutes_with(x))
}

/// `{g in G : H^g = H}`.
pub fn normalizer(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    g.require_subgroup(h)?;
    g.filter(|y| h.generators().iter().all(|s| h.contains(&s.conjugate_by(y))))
}

pub fn centralizer_of_subgroup(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    g.require_subgroup(h)?;
    g.filter(|y| h.generators().iter().all(|s| s.commutes_with(y)))
}

pub fn subgroup_generated(g: &PermGroup, elems: &[Permutation]) -> Result<PermGroup> {
    for e in elems {
        g.require_member(e)?;
    }
    PermGroup::new(g.degree, elems.to_vec())
}

pub fn is_normal(g: &PermGroup, h: &PermGroup) -> Result<bool> {
    g.require_subgroup(h)?;
    Ok(g.generators()
        .iter()
        .all(|x| h.generators().iter().all(|s| h.contains(&s.conjugate_by(x)))))
}

pub fn intersection(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    if a.degree != b.degree {
        return Err(Error::Domain("groups act on different point sets".into()));
    }
    a.filter(|x| b.contains(x))
}

/// Smallest normal subgroup of `G` containing `elems`.
pub fn normal_closure(g: &PermGroup, elems: &[Permutation]) -> Result<PermGroup> {
    let mut h = subgroup_generated(g, elems)?;
    loop {
        let mut extra = None;
        'scan: for x in g.generators() {
            for s in h.generators() {
                let c = s.conjugate_by(x);
                if !h.contains(&c) {
                    extra = Some(c);
                    break 'scan;
                }
            }
        }
        match extra {
            Some(c) => {
                let mut gens = h.generators().to_vec();
                gens.push(c);
                h = PermGroup::new(g.degree, gens)?;
            }
            None => return Ok(h),
        }
    }
}

pub fn derived_subgroup(g: &PermGroup) -> Result<PermGroup> {
    let gens = g.generators();
    let mut comms = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = a.inverse().mul(&b.inverse()).mul(a).mul(b);
            if !c.is_identity() {
                comms.push(c);
            }
        }
    }
    normal_closure(g, &comms)
}

pub fn is_solvable(g: &PermGroup) -> Result<bool> {
    let mut current = g.clone();
    loop {
        if current.is_trivial() {
            return Ok(true);
        }
        let next = derived_subgroup(&current)?;
        if next.order() == current.order() {
            return Ok(false);
        }
        current = next;
    }
}

/// A Sylow p-subgroup, grown one step at a time: from a p-subgroup `P`, pass to
/// `<P, y>` for the least `y` in `N_G(P) \ P` with `y^p` in `P`.
pub fn sylow_subgroup(g: &PermGroup, p: u64) -> Result<PermGroup> {
    require_prime(p)?;
    let target = p_part(g.order(), p);
    let mut current = PermGroup::trivial(g.degree);
    while current.order() < target {
        let norm = normalizer(g, &current)?;
        let step = norm
            .elements()?
            .iter()
            .find(|y| !current.contains(y) && current.contains(&y.pow(p as i64)))
            .cloned()
            .ok_or_else(|| {
                Error::violation(
                    "Sylow",
                    format!("no p-element extends a p-subgroup of order {}", current.order()),
                )
            })?;
        let mut gens = current.generators().to_vec();
        gens.push(step);
        current = PermGroup::new(g.degree, gens)?;
    }
    Ok(current)
}

/// The subgroup generated by all p'-elements.
pub fn p_prime_elements_subgroup(g: &PermGroup, p: u64) -> Result<PermGroup> {
    let classes = g.conjugacy_classes()?;
    let elements = g.elements()?;
    let mut gens: Vec<Permutation> = Vec::new();
    let mut current = PermGroup::trivial(g.degree);
    for (i, x) in elements.iter().enumerate() {
        if classes.element_order(classes.class_of_index(i)) % p == 0 || current.contains(x) {
            continue;
        }
        gens.push(x.clone());
        current = PermGroup::new(g.degree, gens.clone())?;
    }
    Ok(current)
}

/// True iff the p'-elements generate a subgroup of order `|G|_{p'}`; that subgroup is
/// then the unique normal p-complement.
pub fn has_normal_p_complement(g: &PermGroup, p: u64) -> Result<bool> {
    require_prime(p)?;
    Ok(p_prime_elements_subgroup(g, p)?.order() == p_prime_part(g.order(), p))
}

/// `O_{p'}(G)`: generated by the elements whose normal closure has p'-order.
pub fn core_p_prime(g: &PermGroup, p: u64) -> Result<PermGroup> {
    require_prime(p)?;
    let classes = g.conjugacy_classes()?;
    let mut keep = Vec::new();
    for k in 1..classes.len() {
        if classes.element_order(k) % p == 0 {
            continue;
        }
        let ncl = normal_closure(g, &[classes.representative(k).clone()])?;
        if ncl.order() % p != 0 {
            keep.push(classes.representative(k).clone());
        }
    }
    normal_closure(g, &keep)
}
