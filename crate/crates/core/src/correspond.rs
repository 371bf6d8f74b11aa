//! The relative Glauberman correspondence and canonical p-rational extensions.
//!
//! Both are computed from restriction data and every side condition is checked on the
//! result. A failed check is reported as [`Error::TheoremViolation`].

use std::collections::BTreeSet;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{p_part, require_prime};
use crate::blocks::{block_distribution, is_p_rational_character, BlockPartition};
use crate::chartab::{
    class_action, conjugate_by_action, constituents, extensions_of, induce_character, inner_product,
    restrict_character, CharacterTable, ClassFunction, TableCache,
};
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{centralizer_of_subgroup, is_normal, subgroup_generated, sylow_subgroup, PermGroup};
use crate::perm::Permutation;

const THEOREM_E: &str = "relative Glauberman correspondence";
const THEOREM_F: &str = "canonical p-rational extension";

/// A p-group `P` acting by conjugation on `N <= G`, all inside an ambient `Gamma = GP`.
#[derive(Clone, Debug)]
pub struct ActionScene {
    pub ambient: PermGroup,
    pub g: PermGroup,
    pub n: PermGroup,
    pub p_group: PermGroup,
    pub p: u64,
}

impl ActionScene {
    /// Checks `G, N normal in Gamma`, `N <= G`, `Gamma = GP`, `P` a p-group and `G/N` a p'-group.
    pub fn new(ambient: PermGroup, g: PermGroup, n: PermGroup, p_group: PermGroup, p: u64) -> Result<Self> {
        require_prime(p)?;
        if !is_normal(&ambient, &g)? || !is_normal(&ambient, &n)? {
            return Err(Error::Domain("G and N must be normal in the ambient group".into()));
        }
        if !n.is_subgroup_of(&g) {
            return Err(Error::Domain("N must be a subgroup of G".into()));
        }
        if !p_group.is_subgroup_of(&ambient) || p_part(p_group.order(), p) != p_group.order() {
            return Err(Error::Domain(format!("P must be a {p}-subgroup of the ambient group")));
        }
        if (g.order() / n.order()).is_multiple_of(p) {
            return Err(Error::Domain(format!("G/N must be a {p}'-group")));
        }
        let mut gens = g.generators().to_vec();
        gens.extend(p_group.generators().iter().cloned());
        let gp = subgroup_generated(&ambient, &gens)?;
        if gp.order() != ambient.order() {
            return Err(Error::Domain("the ambient group must equal GP".into()));
        }
        Ok(ActionScene {
            ambient,
            g,
            n,
            p_group,
            p,
        })
    }
}

/// Irreducibles of `t` fixed by conjugation with every generator of `p_group`.
pub fn p_invariant_characters(t: &CharacterTable, p_group: &PermGroup) -> Result<Vec<usize>> {
    let actions = p_group
        .generators()
        .iter()
        .map(|x| class_action(t, x))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..t.num_classes())
        .filter(|&i| {
            let chi = t.irreducible(i);
            actions.iter().all(|a| conjugate_by_action(chi, a) == *chi)
        })
        .collect())
}

/// The preimage `C` of `C_(G/N)(P)`: all `g` with `g^-1 g^x` in `N` for every `x` in `P`.
pub fn compute_c(scene: &ActionScene) -> Result<PermGroup> {
    let elems: Vec<Permutation> = scene
        .g
        .elements()?
        .iter()
        .filter(|g| {
            let gi = g.inverse();
            scene
                .p_group
                .generators()
                .iter()
                .all(|x| scene.n.contains(&gi.mul(&g.conjugate_by(x))))
        })
        .cloned()
        .collect();
    Ok(PermGroup::from_elements(scene.g.degree(), elems))
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondencePair {
    /// Index in `Irr(G)`.
    pub chi: usize,
    /// Index in `Irr(C)`.
    pub star: usize,
    /// Multiplicity of `chi*` in `chi_C`.
    pub e: u64,
    /// Constituents over P-invariant characters of `N` with multiplicity divisible by `p`,
    /// with multiplicities divided by `p`.
    pub delta: Vec<(usize, u64)>,
    /// Constituents lying over no P-invariant character of `N`.
    pub xi: Vec<(usize, u64)>,
    pub degree: u64,
    pub chi_principal: bool,
    pub star_principal: bool,
}

/// Side conditions verified on a correspondence; every flag is true on success.
#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceChecks {
    pub multiplicity_pm1: bool,
    pub bijection: bool,
    pub field_equality: bool,
    pub principal_block: bool,
    pub clifford_conjugacy: bool,
    /// Only meaningful when `P` acts trivially on `G/N`.
    pub trivial_action_invariance: Option<bool>,
    pub galois_equivariance: bool,
    pub galois_multipliers: usize,
}

#[derive(Clone, Debug)]
pub struct CorrespondenceResult {
    pub c: PermGroup,
    pub table_g: Arc<CharacterTable>,
    pub table_c: Arc<CharacterTable>,
    pub table_n: Arc<CharacterTable>,
    pub pairs: Vec<CorrespondencePair>,
    pub checks: CorrespondenceChecks,
}

/// Orbits of the conjugation action of `acting` on `Irr(N)`, as an orbit label per character.
fn orbit_labels(tn: &CharacterTable, acting: &PermGroup) -> Result<Vec<usize>> {
    let r = tn.num_classes();
    let perms = acting
        .generators()
        .iter()
        .map(|x| {
            let a = class_action(tn, x)?;
            (0..r)
                .map(|i| {
                    tn.index_of(&conjugate_by_action(tn.irreducible(i), &a))
                        .ok_or_else(|| Error::Arithmetic("conjugate character is not irreducible".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut label = vec![usize::MAX; r];
    for start in 0..r {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = start;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for perm in &perms {
                let j = perm[i];
                if label[j] == usize::MAX {
                    label[j] = start;
                    stack.push(j);
                }
            }
        }
    }
    Ok(label)
}

fn restriction_constituents(
    chi: &ClassFunction,
    big: &CharacterTable,
    small: &CharacterTable,
) -> Result<Vec<(usize, u64)>> {
    constituents(small, &restrict_character(chi, big, small)?)
}

fn units_mod(n: u64) -> Vec<u64> {
    (1..=n.max(1))
        .filter(|k| k.gcd(&n) == 1 && (*k < n || n == 1))
        .collect()
}

pub fn relative_glauberman(scene: &ActionScene, cache: &mut TableCache) -> Result<CorrespondenceResult> {
    let p = scene.p;
    let c = compute_c(scene)?;
    let tg = cache.table(&scene.g)?;
    let tc = cache.table(&c)?;
    let tn = cache.table(&scene.n)?;
    let inv_g = p_invariant_characters(&tg, &scene.p_group)?;
    let inv_c = p_invariant_characters(&tc, &scene.p_group)?;
    let inv_n: BTreeSet<usize> = p_invariant_characters(&tn, &scene.p_group)?.into_iter().collect();

    // constituents of C over some P-invariant character of N
    let over_invariant: Vec<bool> = tc
        .irreducibles()
        .iter()
        .map(|psi| {
            Ok(restriction_constituents(psi, &tc, &tn)?
                .iter()
                .any(|(t, _)| inv_n.contains(t)))
        })
        .collect::<Result<_>>()?;
    let c_orbits = orbit_labels(&tn, &c)?;
    let blocks_g: Arc<BlockPartition> = block_distribution(&tg, p)?;
    let blocks_c: Arc<BlockPartition> = block_distribution(&tc, p)?;

    let mut pairs = Vec::with_capacity(inv_g.len());
    for &i in &inv_g {
        let chi = tg.irreducible(i);
        // invariant constituents of chi_N exist and form one C-orbit
        let over: Vec<usize> = restriction_constituents(chi, &tg, &tn)?
            .into_iter()
            .map(|(t, _)| t)
            .filter(|t| inv_n.contains(t))
            .collect();
        if over.is_empty() || over.iter().any(|&t| c_orbits[t] != c_orbits[over[0]]) {
            return Err(Error::violation(
                THEOREM_E,
                format!("P-invariant constituents {over:?} of chi_{i} restricted to N are not one C-orbit"),
            ));
        }
        let parts = restriction_constituents(chi, &tg, &tc)?;
        let mut qualifying = Vec::new();
        let mut delta = Vec::new();
        let mut xi = Vec::new();
        for &(j, m) in &parts {
            if !over_invariant[j] {
                xi.push((j, m));
            } else if m % p != 0 {
                qualifying.push((j, m));
            } else {
                delta.push((j, m / p));
            }
        }
        if qualifying.len() != 1 {
            return Err(Error::violation(
                THEOREM_E,
                format!(
                    "chi_{i} restricted to C has {} constituents of multiplicity prime to {p} over P-invariant characters of N: {qualifying:?}",
                    qualifying.len()
                ),
            ));
        }
        let (star, e) = qualifying[0];
        pairs.push(CorrespondencePair {
            chi: i,
            star,
            e,
            delta,
            xi,
            degree: chi.degree(),
            chi_principal: blocks_g.in_principal(i),
            star_principal: blocks_c.in_principal(star),
        });
    }

    // bijection onto Irr_P(C)
    let images: BTreeSet<usize> = pairs.iter().map(|q| q.star).collect();
    let target: BTreeSet<usize> = inv_c.iter().copied().collect();
    if images.len() != pairs.len() || images != target {
        return Err(Error::violation(
            THEOREM_E,
            format!(
                "map {:?} is not a bijection onto Irr_P(C) = {inv_c:?}",
                pairs.iter().map(|q| (q.chi, q.star)).collect::<Vec<_>>()
            ),
        ));
    }
    for q in &pairs {
        let r = q.e % p;
        if r != 1 && r != p - 1 {
            return Err(Error::violation(
                THEOREM_E,
                format!("e = {} for chi_{} is not +-1 mod {p}", q.e, q.chi),
            ));
        }
    }
    let n_common = tg.exponent().lcm(&tc.exponent());
    let units = units_mod(n_common);
    let perms: Vec<(Vec<usize>, Vec<usize>)> = units
        .iter()
        .map(|&k| Ok((tg.galois_permutation(k as i64)?, tc.galois_permutation(k as i64)?)))
        .collect::<Result<_>>()?;
    for q in &pairs {
        // equal fields iff equal stabilizers in Gal(Q(zeta_n)/Q)
        let same_field = perms
            .iter()
            .all(|(pg, pc)| (pg[q.chi] == q.chi) == (pc[q.star] == q.star));
        if !same_field {
            return Err(Error::violation(
                THEOREM_E,
                format!("Q(chi_{}) differs from Q(chi*_{})", q.chi, q.star),
            ));
        }
        if q.degree % p != 0 && q.chi_principal != q.star_principal {
            return Err(Error::violation(
                THEOREM_E,
                format!(
                    "principal block membership differs for chi_{} and chi*_{}",
                    q.chi, q.star
                ),
            ));
        }
    }
    for (&k, (pg, pc)) in units.iter().zip(&perms) {
        for q in &pairs {
            let moved = pairs.iter().find(|r| r.chi == pg[q.chi]).ok_or_else(|| {
                Error::violation(
                    THEOREM_E,
                    "Galois conjugate of a P-invariant character is not P-invariant",
                )
            })?;
            if moved.star != pc[q.star] {
                return Err(Error::violation(
                    THEOREM_E,
                    format!("correspondence does not commute with zeta -> zeta^{k} at chi_{}", q.chi),
                ));
            }
        }
    }
    // P acting trivially on G/N: Irr(G | theta) is P-invariant for P-invariant theta
    let trivial_action = if c.order() == scene.g.order() {
        let inv: BTreeSet<usize> = inv_g.iter().copied().collect();
        for &t in &inv_n {
            let over = crate::chartab::irr_over(&tg, &tn, tn.irreducible(t))?;
            if let Some(&bad) = over.iter().find(|i| !inv.contains(i)) {
                return Err(Error::violation(
                    THEOREM_E,
                    format!("chi_{bad} lies over P-invariant theta_{t} but is not P-invariant"),
                ));
            }
        }
        Some(true)
    } else {
        None
    };
    Ok(CorrespondenceResult {
        c,
        table_g: tg,
        table_c: tc,
        table_n: tn,
        pairs,
        checks: CorrespondenceChecks {
            multiplicity_pm1: true,
            bijection: true,
            field_equality: true,
            principal_block: true,
            clifford_conjugacy: true,
            trivial_action_invariance: trivial_action,
            galois_equivariance: true,
            galois_multipliers: units.len(),
        },
    })
}

#[derive(Clone, Debug)]
pub struct FExtension {
    pub table_g: Arc<CharacterTable>,
    /// Index of the canonical extension in `Irr(G)`.
    pub chi: usize,
    /// `M = N C_G(Q)`.
    pub m: PermGroup,
    /// Index of `eta` in `Irr(M)`.
    pub eta: usize,
    /// Number of distinct subgroups `N<m>` used to assemble `eta`.
    pub cyclic_overgroups: usize,
    /// All p-rational extensions of theta lying in the principal block of `G`.
    pub p_rational_principal_extensions: Vec<usize>,
}

fn hypothesis(msg: impl Into<String>) -> Error {
    Error::Hypothesis(msg.into())
}

/// The unique p-rational extension of `theta` to `h` in the principal block, or a violation.
fn unique_principal_extension(
    th: &CharacterTable,
    tn: &CharacterTable,
    theta: &ClassFunction,
    p: u64,
) -> Result<usize> {
    let blocks = block_distribution(th, p)?;
    let mut found = Vec::new();
    for i in extensions_of(th, tn, theta)? {
        if blocks.in_principal(i) && is_p_rational_character(th, th.irreducible(i), p)? {
            found.push(i);
        }
    }
    match found.as_slice() {
        [i] => Ok(*i),
        _ => Err(Error::violation(
            THEOREM_F,
            format!(
                "theta has {} p-rational principal-block extensions to a subgroup of order {}",
                found.len(),
                th.order()
            ),
        )),
    }
}

/// Builds the canonical p-rational extension of `theta` (an irreducible of `N`, given by index).
pub fn theorem_f_extension(
    g: &PermGroup,
    n: &PermGroup,
    theta: usize,
    p: u64,
    cache: &mut TableCache,
) -> Result<FExtension> {
    require_prime(p)?;
    if p == 2 {
        return Err(hypothesis("p must be odd"));
    }
    if !n.is_subgroup_of(g) || !is_normal(g, n)? {
        return Err(hypothesis("N must be normal in G"));
    }
    let tg = cache.table(g)?;
    let tn = cache.table(n)?;
    let th = tn.irreducible(theta).clone();
    if th.degree() % p == 0 {
        return Err(hypothesis("theta must have p'-degree"));
    }
    if !is_p_rational_character(&tn, &th, p)? {
        return Err(hypothesis("theta must be p-rational"));
    }
    for x in g.generators() {
        if conjugate_by_action(&th, &class_action(&tn, x)?) != th {
            return Err(hypothesis("theta must be G-invariant"));
        }
    }
    if !block_distribution(&tn, p)?.in_principal(theta) {
        return Err(hypothesis("theta must lie in the principal block of N"));
    }
    let q = sylow_subgroup(n, p)?;
    let cq = centralizer_of_subgroup(g, &q)?;
    let mut gens = n.generators().to_vec();
    gens.extend(cq.generators().iter().cloned());
    let m = subgroup_generated(g, &gens)?;
    let index = g.order() / m.order();
    if p_part(index, p) != index {
        return Err(hypothesis("|G : N C_G(Q)| must be a power of p"));
    }

    // eta(x) = eta_(N<x>)(x) on class representatives of M
    let tm = cache.table(&m)?;
    let mut overgroups = BTreeSet::new();
    let mut eta_values = Vec::with_capacity(tm.num_classes());
    for x in tm.classes().representatives() {
        let mut hg = n.generators().to_vec();
        hg.push(x.clone());
        let h = subgroup_generated(g, &hg)?;
        let t_h = cache.table(&h)?;
        overgroups.insert(t_h.id());
        let ext = unique_principal_extension(&t_h, &tn, &th, p)?;
        eta_values.push(t_h.irreducible(ext).value(t_h.group().class_of(x)?).clone());
    }
    let eta = tm.class_function(eta_values)?;
    if inner_product(&tm, &eta, &eta)? != Cyclotomic::one() {
        return Err(Error::violation(THEOREM_F, "[eta, eta] != 1"));
    }
    let eta_index = tm
        .index_of(&eta)
        .ok_or_else(|| Error::violation(THEOREM_F, "eta is not an irreducible character of M"))?;
    if extensions_of(&tm, &tn, &th)?.binary_search(&eta_index).is_err() {
        return Err(Error::violation(THEOREM_F, "eta does not extend theta"));
    }
    // the unique p-rational constituent of eta^G
    let induced = induce_character(&eta, &tm, &tg)?;
    let mut rational = Vec::new();
    for (i, _) in constituents(&tg, &induced)? {
        if is_p_rational_character(&tg, tg.irreducible(i), p)? {
            rational.push(i);
        }
    }
    let chi = match rational.as_slice() {
        [i] => *i,
        _ => {
            return Err(Error::violation(
                THEOREM_F,
                format!("eta^G has {} p-rational constituents", rational.len()),
            ))
        }
    };
    let blocks_g = block_distribution(&tg, p)?;
    let extensions = extensions_of(&tg, &tn, &th)?;
    if !extensions.contains(&chi) {
        return Err(Error::violation(THEOREM_F, format!("chi_{chi} does not extend theta")));
    }
    if restrict_character(tg.irreducible(chi), &tg, &tm)? != *tm.irreducible(eta_index) {
        return Err(Error::violation(THEOREM_F, format!("chi_{chi} does not extend eta")));
    }
    if !blocks_g.in_principal(chi) {
        return Err(Error::violation(
            THEOREM_F,
            format!("chi_{chi} is not in the principal block"),
        ));
    }
    let mut all = Vec::new();
    for i in extensions {
        if blocks_g.in_principal(i) && is_p_rational_character(&tg, tg.irreducible(i), p)? {
            all.push(i);
        }
    }
    Ok(FExtension {
        table_g: tg,
        chi,
        m,
        eta: eta_index,
        cyclic_overgroups: overgroups.len(),
        p_rational_principal_extensions: all,
    })
}
