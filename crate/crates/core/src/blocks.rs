//! p-blocks of irreducible characters via reduced central characters.

use std::sync::Arc;

use serde::Serialize;

use crate::arith::{require_prime, valuation};
use crate::chartab::{CharacterTable, ClassFunction};
use crate::cyclo::{build_reduction, galois_apply, is_p_rational, sigma_two_special, Cyclotomic, FfElem, Rational};
use crate::error::{Error, Result};

/// The distribution of `Irr(G)` into p-blocks.
#[derive(Clone, Debug, Serialize)]
pub struct BlockPartition {
    pub p: u64,
    /// Reduced central character of each irreducible. Empty when `p` does not divide `|G|`,
    /// where every character is a block of defect zero on its own.
    pub fingerprints: Vec<Vec<FfElem>>,
    /// Irreducible indices per block; the principal block comes first, the rest ordered by
    /// least member.
    pub blocks: Vec<Vec<usize>>,
    /// Block index of every irreducible.
    pub block_of: Vec<usize>,
}

impl BlockPartition {
    pub fn principal(&self) -> &[usize] {
        &self.blocks[0]
    }

    pub fn in_principal(&self, chi: usize) -> bool {
        self.block_of[chi] == 0
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// `omega_chi(K) = |K| chi(x_K) / chi(1)` for every class; each value must be an algebraic integer.
pub fn central_character(t: &CharacterTable, chi: &ClassFunction) -> Result<Vec<Cyclotomic>> {
    let d = chi.degree();
    if d == 0 {
        return Err(Error::Domain(
            "central characters need a character of positive degree".into(),
        ));
    }
    (0..t.num_classes())
        .map(|k| {
            let w = chi.value(k).scale(Rational::new(t.class_size(k) as i128, d as i128));
            if !w.is_algebraic_integer() {
                return Err(Error::Arithmetic(format!(
                    "central character value {w} at class {k} is not an algebraic integer"
                )));
            }
            Ok(w)
        })
        .collect()
}

/// Memoized per table and prime.
pub fn block_distribution(t: &CharacterTable, p: u64) -> Result<Arc<BlockPartition>> {
    require_prime(p)?;
    t.memo_blocks(p, || compute_block_distribution(t, p))
}

fn compute_block_distribution(t: &CharacterTable, p: u64) -> Result<BlockPartition> {
    let r = t.num_classes();
    if !t.order().is_multiple_of(p) {
        return Ok(BlockPartition {
            p,
            fingerprints: Vec::new(),
            blocks: (0..r).map(|i| vec![i]).collect(),
            block_of: (0..r).collect(),
        });
    }
    let red = build_reduction(p, t.exponent())?;
    let fingerprints = t
        .irreducibles()
        .iter()
        .map(|chi| {
            central_character(t, chi)?
                .iter()
                .map(|w| red.reduce(w))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![0; r];
    for i in 0..r {
        match blocks.iter().position(|b| fingerprints[b[0]] == fingerprints[i]) {
            Some(b) => {
                blocks[b].push(i);
                block_of[i] = b;
            }
            None => {
                block_of[i] = blocks.len();
                blocks.push(vec![i]);
            }
        }
    }
    // the trivial character is index 0, so its block is already first
    Ok(BlockPartition {
        p,
        fingerprints,
        blocks,
        block_of,
    })
}

pub fn principal_block_characters(t: &CharacterTable, p: u64) -> Result<Vec<usize>> {
    Ok(block_distribution(t, p)?.blocks[0].clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockData {
    pub defect: u32,
    /// `(irreducible index, height)` for each member.
    pub heights: Vec<(usize, u32)>,
}

/// Defect `d = a - min nu_p(chi(1))` and heights `nu_p(chi(1)) - (a - d)`, where `p^a = |G|_p`.
pub fn defect_and_heights(t: &CharacterTable, partition: &BlockPartition, block: usize) -> BlockData {
    let p = partition.p;
    let a = valuation(t.order(), p);
    let members = &partition.blocks[block];
    let nu: Vec<u32> = members
        .iter()
        .map(|&i| valuation(t.irreducible(i).degree(), p))
        .collect();
    let min = nu.iter().copied().min().unwrap_or(0);
    BlockData {
        defect: a - min,
        heights: members.iter().zip(&nu).map(|(&i, &v)| (i, v - min)).collect(),
    }
}

pub fn p_prime_degree(t: &CharacterTable, p: u64) -> Vec<usize> {
    (0..t.num_classes())
        .filter(|&i| !t.irreducible(i).degree().is_multiple_of(p))
        .collect()
}

pub fn is_p_rational_character(t: &CharacterTable, chi: &ClassFunction, p: u64) -> Result<bool> {
    is_p_rational(chi.values(), p, t.exponent().max(chi.conductor()))
}

pub fn p_rational_chars(t: &CharacterTable, p: u64) -> Result<Vec<usize>> {
    require_prime(p)?;
    let mut out = Vec::new();
    for (i, chi) in t.irreducibles().iter().enumerate() {
        if is_p_rational_character(t, chi, p)? {
            out.push(i);
        }
    }
    Ok(out)
}

pub fn height_zero_chars(t: &CharacterTable, partition: &BlockPartition, block: usize) -> Vec<usize> {
    defect_and_heights(t, partition, block)
        .heights
        .into_iter()
        .filter(|&(_, h)| h == 0)
        .map(|(i, _)| i)
        .collect()
}

/// Odd-degree members of the principal 2-block that are moved by the automorphism fixing
/// 2-power roots of unity and squaring odd-order ones.
pub fn sigma2_check(t: &CharacterTable) -> Result<Vec<usize>> {
    let partition = block_distribution(t, 2)?;
    let sigma = sigma_two_special(t.exponent());
    let mut out = Vec::new();
    for &i in partition.principal() {
        let chi = t.irreducible(i);
        if chi.degree().is_multiple_of(2) {
            continue;
        }
        for v in chi.values() {
            if galois_apply(&sigma, v)? != *v {
                out.push(i);
                break;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockEntry {
    pub members: Vec<usize>,
    pub degrees: Vec<u64>,
    pub defect: u32,
    pub heights: Vec<u32>,
    pub p_rational: Vec<bool>,
    pub fingerprint: Option<Vec<FfElem>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub p: u64,
    pub order: u64,
    pub residue_field: Option<String>,
    pub blocks: Vec<BlockEntry>,
}

pub fn block_report(t: &CharacterTable, partition: &BlockPartition) -> Result<BlockReport> {
    let residue_field = if partition.fingerprints.is_empty() {
        None
    } else {
        let red = build_reduction(partition.p, t.exponent())?;
        Some(format!("F_{}^{}", partition.p, red.field().degree()))
    };
    let blocks = (0..partition.len())
        .map(|b| {
            let members = partition.blocks[b].clone();
            let data = defect_and_heights(t, partition, b);
            let p_rational = members
                .iter()
                .map(|&i| is_p_rational_character(t, t.irreducible(i), partition.p))
                .collect::<Result<Vec<_>>>()?;
            Ok(BlockEntry {
                degrees: members.iter().map(|&i| t.irreducible(i).degree()).collect(),
                defect: data.defect,
                heights: data.heights.iter().map(|&(_, h)| h).collect(),
                p_rational,
                fingerprint: partition.fingerprints.get(members[0]).cloned(),
                members,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockReport {
        p: partition.p,
        order: t.order(),
        residue_field,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::compute_character_table;
    use crate::group::PermGroup;
    use crate::perm::Permutation;

    fn cyc(n: usize, c: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, &c.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn table(n: usize, gens: &[&[&[usize]]]) -> CharacterTable {
        let g = PermGroup::new(n, gens.iter().map(|c| cyc(n, c)).collect()).unwrap();
        compute_character_table(&g).unwrap()
    }

    #[test]
    fn s3_blocks() {
        let t = table(3, &[&[&[0, 1, 2]], &[&[0, 1]]]);
        let b2 = block_distribution(&t, 2).unwrap();
        assert_eq!(b2.blocks, vec![vec![0, 1], vec![2]]);
        assert_eq!(defect_and_heights(&t, &b2, 1).defect, 0);
        assert_eq!(defect_and_heights(&t, &b2, 0).defect, 1);
        let b3 = block_distribution(&t, 3).unwrap();
        assert_eq!(b3.blocks, vec![vec![0, 1, 2]]);
        // the sign character is 3-rational of 3'-degree in the principal block
        assert!(p_rational_chars(&t, 3).unwrap().contains(&1));
        assert!(sigma2_check(&t).unwrap().is_empty());
        let b5 = block_distribution(&t, 5).unwrap();
        assert_eq!(b5.len(), 3);
    }

    #[test]
    fn a4_blocks() {
        let t = table(4, &[&[&[0, 1, 2]], &[&[0, 1], &[2, 3]]]);
        let b = block_distribution(&t, 3).unwrap();
        assert_eq!(b.blocks, vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(t.irreducible(3).degree(), 3);
        assert_eq!(defect_and_heights(&t, &b, 1).defect, 0);
        let rational = p_rational_chars(&t, 3).unwrap();
        assert_eq!(rational, vec![0, 3]);
        assert_eq!(height_zero_chars(&t, &b, 0), vec![0, 1, 2]);
        let report = block_report(&t, &b).unwrap();
        assert_eq!(report.blocks.len(), 2);
        assert!(serde_json::to_string(&report).unwrap().contains("\"defect\":0"));
    }

    #[test]
    fn p_groups_have_one_block() {
        let d8 = table(4, &[&[&[0, 1, 2, 3]], &[&[0, 2]]]);
        assert_eq!(block_distribution(&d8, 2).unwrap().len(), 1);
        let c9 = table(9, &[&[&[0, 1, 2, 3, 4, 5, 6, 7, 8]]]);
        assert_eq!(block_distribution(&c9, 3).unwrap().len(), 1);
        assert!(matches!(block_distribution(&c9, 4), Err(Error::Input(_))));
    }
}
