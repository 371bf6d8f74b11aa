//! Character tables checked against oracles computed from group elements alone.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use blockscope::blocks::{block_distribution, sigma2_check};
use blockscope::chartab::{
    compute_character_table, induce_character, inner_product, restrict_character, CharacterTable,
};
use blockscope::cyclo::{galois_apply, sigma_two_special, Cyclotomic, GaloisAut, Rational};
use blockscope::group::subgroup_generated;
use blockscope::io::read_group_file;
use blockscope::{PermGroup, Permutation};
use num_integer::Integer;
use proptest::prelude::*;

const POOL_MAX_ORDER: u64 = 48;

/// Corpus groups small enough for element-by-element oracles.
fn pool() -> &'static [PermGroup] {
    static POOL: OnceLock<Vec<PermGroup>> = OnceLock::new();
    POOL.get_or_init(|| {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus");
        let mut files: Vec<_> = std::fs::read_dir(&dir)
            .expect("corpus directory")
            .map(|e| e.expect("entry").path())
            .filter(|p| p.file_name().is_some_and(|n| n.to_string_lossy().starts_with("sg_")))
            .collect();
        files.sort();
        files
            .into_iter()
            .map(|p| read_group_file(p).expect("corpus group").group)
            .filter(|g| g.order() <= POOL_MAX_ORDER)
            .collect()
    })
}

fn group_and_table() -> impl Strategy<Value = (usize, u64)> {
    (0..pool().len(), any::<u64>())
}

fn element(g: &PermGroup, seed: u64) -> Permutation {
    let all = g.elements().expect("elements");
    all.get((seed % all.len() as u64) as usize).clone()
}

/// `theta^G` for a linear character of the cyclic group `<x>`, summed over all of `G`.
fn induced_from_cyclic(g: &PermGroup, t: &CharacterTable, x: &Permutation, j: u64) -> Vec<Cyclotomic> {
    let m = x.order();
    let log: HashMap<Permutation, u64> = (0..m).map(|a| (x.pow(a as i64), a)).collect();
    let elements = g.elements().expect("elements");
    (0..t.num_classes())
        .map(|k| {
            let rep = t.classes().representative(k);
            let sum = elements
                .iter()
                .fold(Cyclotomic::zero(), |acc, y| match log.get(&rep.conjugate_by(y)) {
                    Some(&a) => &acc + &Cyclotomic::root_of_unity(m, (a * j % m) as i64),
                    None => acc,
                });
            sum.scale(Rational::new(1, m as i128))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Characters induced from cyclic subgroups are nonnegative integer combinations of the table.
    #[test]
    fn induced_characters_decompose((i, seed) in group_and_table()) {
        let g = &pool()[i];
        let t = compute_character_table(g).unwrap();
        let x = element(g, seed);
        let j = (seed >> 32) % x.order();
        let induced = t.class_function(induced_from_cyclic(g, &t, &x, j)).unwrap();
        let mut rebuilt = t.class_function(vec![Cyclotomic::zero(); t.num_classes()]).unwrap();
        for chi in t.irreducibles() {
            let m = inner_product(&t, &induced, chi).unwrap().to_integer();
            prop_assert!(m.is_some_and(|m| m >= 0), "multiplicity {m:?}");
            rebuilt = rebuilt.add(&chi.scale_int(m.unwrap())).unwrap();
        }
        prop_assert_eq!(rebuilt.values(), induced.values());
    }

    #[test]
    fn frobenius_reciprocity((i, seed) in group_and_table(), a in any::<usize>(), b in any::<usize>()) {
        let g = &pool()[i];
        let h = subgroup_generated(g, &[element(g, seed), element(g, seed.rotate_left(17))]).unwrap();
        let tg = compute_character_table(g).unwrap();
        let th = compute_character_table(&h).unwrap();
        let theta = th.irreducible(a % th.num_classes());
        let chi = tg.irreducible(b % tg.num_classes());
        let up = inner_product(&tg, &induce_character(theta, &th, &tg).unwrap(), chi).unwrap();
        let down = inner_product(&th, theta, &restrict_character(chi, &tg, &th).unwrap()).unwrap();
        prop_assert_eq!(up, down);
    }

    #[test]
    fn second_orthogonality((i, _seed) in group_and_table()) {
        let t = compute_character_table(&pool()[i]).unwrap();
        let r = t.num_classes();
        for a in 0..r {
            for b in 0..r {
                let s = t.irreducibles().iter().fold(Cyclotomic::zero(), |acc, chi| {
                    &acc + &(chi.value(a) * &chi.value(b).complex_conjugate())
                });
                let want = if a == b { t.centralizer_order(a) as i128 } else { 0 };
                prop_assert_eq!(s, Cyclotomic::from_int(want));
            }
        }
    }

    /// Applying a Galois automorphism value by value lands on a row the power maps predict.
    #[test]
    fn galois_closure((i, seed) in group_and_table()) {
        let t = compute_character_table(&pool()[i]).unwrap();
        let n = t.exponent();
        let units: Vec<u64> = (1..=n).filter(|k| k.gcd(&n) == 1).collect();
        let k = units[(seed % units.len() as u64) as usize];
        let sigma = GaloisAut::new(n, k as i64).unwrap();
        let perm = t.galois_permutation(k as i64).unwrap();
        for (idx, chi) in t.irreducibles().iter().enumerate() {
            let moved: Vec<Cyclotomic> = chi.values().iter().map(|v| galois_apply(&sigma, v).unwrap()).collect();
            prop_assert_eq!(t.index_of(&t.class_function(moved).unwrap()), Some(perm[idx]));
        }
    }

    /// The odd-degree principal-block characters moved by sigma, found by raising class
    /// representatives to the sigma multiplier.
    #[test]
    fn sigma_moves_match_element_powers((i, _seed) in group_and_table()) {
        let g = &pool()[i];
        prop_assume!(g.order().is_multiple_of(2));
        let t = compute_character_table(g).unwrap();
        let k = sigma_two_special(t.exponent()).multiplier() as i64;
        let image: Vec<usize> = t
            .classes()
            .representatives()
            .iter()
            .map(|x| g.class_of(&x.pow(k)).unwrap())
            .collect();
        let principal = block_distribution(&t, 2).unwrap();
        let expected: Vec<usize> = principal
            .principal()
            .iter()
            .copied()
            .filter(|&c| t.irreducible(c).degree() % 2 == 1)
            .filter(|&c| {
                let chi = t.irreducible(c);
                (0..t.num_classes()).any(|x| chi.value(image[x]) != chi.value(x))
            })
            .collect();
        prop_assert_eq!(sigma2_check(&t).unwrap(), expected);
    }
}

/// Cyclic groups: the table is the discrete Fourier basis `x^a -> zeta_n^(ja)`.
#[test]
fn cyclic_tables_are_fourier_characters() {
    for n in 1..=30usize {
        let cycle: Vec<usize> = (0..n).collect();
        let x = Permutation::from_cycles(n, &[cycle]).unwrap();
        let g = PermGroup::new(n, vec![x.clone()]).unwrap();
        let t = compute_character_table(&g).unwrap();
        let class_of_power: Vec<usize> = (0..n).map(|a| g.class_of(&x.pow(a as i64)).unwrap()).collect();
        let mut expected: Vec<Vec<Cyclotomic>> = (0..n as u64)
            .map(|j| {
                let mut row = vec![Cyclotomic::zero(); n];
                for (a, &k) in class_of_power.iter().enumerate() {
                    row[k] = Cyclotomic::root_of_unity(n as u64, (j * a as u64 % n as u64) as i64);
                }
                row
            })
            .collect();
        let mut got: Vec<Vec<Cyclotomic>> = t.irreducibles().iter().map(|c| c.values().to_vec()).collect();
        expected.sort();
        got.sort();
        assert_eq!(got, expected, "C{n}");
    }
}
