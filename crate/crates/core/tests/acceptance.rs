//! Acceptance criteria over the bundled corpus and examples.
//!
//! Prints one `PASS` or `FAIL` line per criterion and exits nonzero if any criterion fails.
//! Every group is loaded once and its character tables are shared across criteria.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use blockscope::arith::prime_divisors;
use blockscope::blocks::block_distribution;
use blockscope::chartab::{CharacterTable, TableCache};
use blockscope::correspond::ActionScene;
use blockscope::cyclo::Cyclotomic;
use blockscope::group::is_solvable;
use blockscope::io::read_group_file;
use blockscope::verify::{
    generate_scenes, load_corpus, reproduce_cyclic_quotient_counterexample, revalidate_character_witness,
    sweep_extensions, verify_sigma_invariance, verify_theorem_d, verify_theorem_e_scene, verify_theorem_f_instance,
    CorpusItem, Tally, Verdict, Witness, SCENES_PER_GROUP,
};
use blockscope::PermGroup;
use num_integer::Integer;
use num_traits::ToPrimitive;

const TABLE_BUDGET: Duration = Duration::from_secs(600);
const SWEEP_MAX_ORDER: u64 = 500;
const SIGMA_MAX_ORDER: u64 = 200;
const NAMED_TABLES: [&str; 6] = ["A5", "A6", "S5", "S6", "PSL(2,7)", "SmallGroup(216,158)"];
const SIGMA_EXTRA: [&str; 3] = ["SmallGroup(24,12)", "S5", "S6"];

fn data_dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(sub)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// A prime `l = 1 mod n` above `2^29` and an element of multiplicative order exactly `n`.
fn splitting_prime(n: u64) -> (u64, u64) {
    let mut l = (1u64 << 29) / n * n + 1;
    while !is_prime(l) {
        l += n;
    }
    let factors: Vec<u64> = (2..=n).filter(|&q| n.is_multiple_of(q) && is_prime(q)).collect();
    let omega = (2..l)
        .map(|a| pow_mod(a, (l - 1) / n, l))
        .find(|&w| factors.iter().all(|&q| pow_mod(w, n / q, l) != 1))
        .expect("the multiplicative group of F_l is cyclic");
    (l, omega)
}

/// Image of `z` under `zeta_n -> w` in `F_l`; `None` if a denominator is divisible by `l`.
fn embed(z: &Cyclotomic, n: u64, w_powers: &[u64], l: u64) -> Option<u64> {
    let step = n / z.conductor();
    let mut acc = 0u64;
    for (k, c) in z.terms() {
        let num = c.numer().rem_euclid(l as i128) as u64;
        let den = c.denom().rem_euclid(l as i128) as u64;
        if den == 0 {
            return None;
        }
        let term = num * pow_mod(den, l - 2, l) % l;
        acc = (acc + term * w_powers[((k * step) % n) as usize]) % l;
    }
    Some(acc)
}

/// Exact row and column orthogonality, `sum chi(1)^2 = |G|` and integrality of every value.
///
/// Each orthogonality defect is an algebraic integer of absolute value below `l` under every
/// complex embedding. Vanishing modulo `l` under all `phi(n)` embeddings into `F_l` forces its
/// norm to be a multiple of `l^phi(n)` of smaller absolute value, hence zero.
fn orthogonality_oracle(t: &CharacterTable) -> Result<(), String> {
    let r = t.num_classes();
    let order = t.order();
    let chars = t.irreducibles();
    let n = chars
        .iter()
        .flat_map(|c| c.values().iter().map(Cyclotomic::conductor))
        .fold(1u64, |a, b| a.lcm(&b));
    if chars.len() != r {
        return Err(format!("{} characters for {r} classes", chars.len()));
    }
    if chars
        .iter()
        .any(|c| c.values().iter().any(|v| !v.is_algebraic_integer()))
    {
        return Err("a value is not an algebraic integer".into());
    }
    let degree_sum: u64 = chars.iter().map(|c| c.degree() * c.degree()).sum();
    if degree_sum != order {
        return Err(format!("sum of squared degrees {degree_sum} != {order}"));
    }
    let (l, omega) = splitting_prime(n);
    assert!(
        l > order * order + order,
        "embedding prime too small for the norm bound"
    );
    let powers: Vec<u64> = (0..n)
        .scan(1u64, |acc, _| {
            let cur = *acc;
            *acc = *acc * omega % l;
            Some(cur)
        })
        .collect();
    let conj_powers: Vec<u64> = (0..n as usize).map(|j| powers[(n as usize - j) % n as usize]).collect();
    let sizes: Vec<u64> = (0..r).map(|k| t.class_size(k) % l).collect();
    for k in (1..=n).filter(|k| k.gcd(&n) == 1) {
        let wk: Vec<u64> = (0..n).map(|j| powers[((j * k) % n) as usize]).collect();
        let wk_bar: Vec<u64> = (0..n).map(|j| conj_powers[((j * k) % n) as usize]).collect();
        let image = |w: &[u64]| -> Result<Vec<Vec<u64>>, String> {
            chars
                .iter()
                .map(|c| {
                    c.values()
                        .iter()
                        .map(|v| embed(v, n, w, l).ok_or_else(|| "denominator divisible by l".to_string()))
                        .collect()
                })
                .collect()
        };
        let x = image(&wk)?;
        let xb = image(&wk_bar)?;
        for i in 0..r {
            for j in 0..r {
                let s = (0..r).fold(0u64, |acc, c| (acc + sizes[c] * (x[i][c] * xb[j][c] % l)) % l);
                let want = if i == j { order % l } else { 0 };
                if s != want {
                    return Err(format!("rows {i} and {j} are not orthogonal (embedding {k})"));
                }
            }
        }
        for a in 0..r {
            for b in 0..r {
                let s = (0..r).fold(0u64, |acc, i| (acc + x[i][a] * xb[i][b]) % l);
                let want = if a == b { t.centralizer_order(a) % l } else { 0 };
                if s != want {
                    return Err(format!("columns {a} and {b} are not orthogonal (embedding {k})"));
                }
            }
        }
    }
    Ok(())
}

struct Criterion {
    label: &'static str,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(label: &'static str) -> Self {
        Criterion {
            label,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.fail(msg());
        }
    }

    fn print(&self) -> bool {
        let ok = self.failures.is_empty();
        println!(
            "{} {}: {}",
            if ok { "PASS" } else { "FAIL" },
            self.label,
            self.notes.join("; ")
        );
        for f in self.failures.iter().take(20) {
            println!("    {f}");
        }
        if self.failures.len() > 20 {
            println!("    ... {} more", self.failures.len() - 20);
        }
        ok
    }
}

fn find<'a>(items: &'a [(CorpusItem, PermGroup)], name: &str) -> &'a PermGroup {
    &items
        .iter()
        .find(|(i, _)| i.name == name)
        .unwrap_or_else(|| panic!("{name} is missing from the corpus"))
        .1
}

fn tables(items: &[(CorpusItem, PermGroup)], caches: &mut [TableCache]) -> Criterion {
    let mut c = Criterion::new("1 character tables");
    let mut elapsed = Duration::ZERO;
    let mut checked = 0;
    for ((item, g), cache) in items.iter().zip(caches.iter_mut()) {
        if g.order() > 100 && !NAMED_TABLES.contains(&item.name.as_str()) {
            continue;
        }
        let start = Instant::now();
        let t = match cache.table(g) {
            Ok(t) => t,
            Err(e) => {
                c.fail(format!("{}: {e}", item.name));
                continue;
            }
        };
        elapsed += start.elapsed();
        checked += 1;
        if let Err(e) = orthogonality_oracle(&t) {
            c.fail(format!("{}: {e}", item.name));
        }
        if let Some(d) = &item.degrees {
            c.check(*d == t.degrees(), || {
                format!("{}: degrees {:?}, expected {d:?}", item.name, t.degrees())
            });
        }
        if let Some(k) = item.classes {
            c.check(k == t.num_classes(), || {
                format!("{}: {} classes, expected {k}", item.name, t.num_classes())
            });
        }
    }
    let a6 = caches[items.iter().position(|(i, _)| i.name == "A6").expect("A6 in corpus")]
        .table(find(items, "A6"))
        .map(|t| t.degrees());
    c.check(matches!(&a6, Ok(d) if *d == [1, 5, 5, 8, 8, 9, 10]), || {
        format!("A6 degrees {a6:?}")
    });
    c.check(elapsed < TABLE_BUDGET, || {
        format!("table construction took {elapsed:?}")
    });
    c.notes
        .push(format!("{checked} tables orthogonal in {:.1}s", elapsed.as_secs_f64()));
    c
}

fn blocks(items: &[(CorpusItem, PermGroup)], caches: &mut [TableCache]) -> Criterion {
    let mut c = Criterion::new("2 block partitions");
    let idx = |name: &str| items.iter().position(|(i, _)| i.name == name).expect("corpus group");
    let shape = |cache: &mut TableCache, g: &PermGroup, p: u64| -> Vec<Vec<u64>> {
        let t = cache.table(g).expect("table");
        let b = block_distribution(&t, p).expect("blocks");
        let mut s: Vec<Vec<u64>> = b
            .blocks
            .iter()
            .map(|blk| {
                let mut d: Vec<u64> = blk.iter().map(|&i| t.irreducible(i).degree()).collect();
                d.sort();
                d
            })
            .collect();
        s.sort();
        s
    };
    let a4 = idx("SmallGroup(12,3)");
    let got = shape(&mut caches[a4], &items[a4].1, 3);
    c.check(got == vec![vec![1, 1, 1], vec![3]], || format!("A4 at p=3: {got:?}"));
    let s3 = idx("SmallGroup(6,1)");
    let got = shape(&mut caches[s3], &items[s3].1, 2);
    c.check(got == vec![vec![1, 1], vec![2]], || format!("S3 at p=2: {got:?}"));
    let mut p_groups = 0;
    for ((item, g), cache) in items.iter().zip(caches.iter_mut()) {
        let primes = prime_divisors(g.order());
        if g.order() > 100 || primes.len() != 1 {
            continue;
        }
        p_groups += 1;
        let got = shape(cache, g, primes[0]);
        c.check(got.len() == 1, || format!("{} has {} blocks", item.name, got.len()));
    }
    c.notes.push(format!("A4, S3 and {p_groups} p-groups"));
    c
}

fn theorem_d(items: &[(CorpusItem, PermGroup)], caches: &mut [TableCache]) -> Criterion {
    let mut c = Criterion::new("3 normal p-complement equivalence");
    let start = Instant::now();
    let mut pairs = 0;
    for ((item, g), cache) in items.iter().zip(caches.iter_mut()) {
        if g.order() > SWEEP_MAX_ORDER {
            continue;
        }
        for p in prime_divisors(g.order()).into_iter().filter(|&p| p != 2) {
            pairs += 1;
            match verify_theorem_d(g, p, cache) {
                Ok(r) => c.check(r.verdict == Verdict::Pass, || {
                    format!("{} p={p}: {:?} {:?}", item.name, r.verdict, r.reason)
                }),
                Err(e) => c.fail(format!("{} p={p}: {e}", item.name)),
            }
        }
    }
    c.notes.push(format!(
        "{pairs} (group, odd prime) pairs in {:.1}s",
        start.elapsed().as_secs_f64()
    ));
    c
}

fn a6_witness(items: &[(CorpusItem, PermGroup)], caches: &mut [TableCache]) -> Criterion {
    let mut c = Criterion::new("4 A6 at p=3");
    let i = items.iter().position(|(i, _)| i.name == "A6").expect("A6 in corpus");
    let cache = &mut caches[i];
    let g = &items[i].1;
    let r = verify_theorem_d(g, 3, cache).expect("A6 report");
    let t = cache.table(g).expect("A6 table");
    c.check(r.verdict == Verdict::Pass, || format!("verdict {:?}", r.verdict));
    c.check(r.details["normalizer_order"] == 36, || {
        format!("normalizer {}", r.details["normalizer_order"])
    });
    c.check(r.details["normalizer_has_normal_p_complement"] == false, || {
        "normalizer has a complement".into()
    });
    let witnesses: Vec<usize> = r
        .witnesses
        .iter()
        .filter_map(|w| match w {
            Witness::Character { index, .. } => Some(*index),
            _ => None,
        })
        .collect();
    c.check(!witnesses.is_empty(), || "no character witness".into());
    for &w in &witnesses {
        c.check(revalidate_character_witness(&t, w, 3).unwrap_or(false), || {
            format!("witness {w} fails revalidation")
        });
    }
    let degrees: BTreeSet<u64> = witnesses.iter().map(|&w| t.irreducible(w).degree()).collect();
    c.notes.push(format!(
        "|N(P)| = 36, {} witnesses of degrees {degrees:?}",
        witnesses.len()
    ));
    c
}

fn scenes(items: &[(CorpusItem, PermGroup)], caches: &mut [TableCache]) -> Criterion {
    let mut c = Criterion::new("5 relative correspondence scenes");
    let start = Instant::now();
    let mut tally = Tally::default();
    let mut run =
        |name: &str, scene: &ActionScene, cache: &mut TableCache, c: &mut Criterion| match verify_theorem_e_scene(
            scene, cache,
        ) {
            Ok(r) => {
                tally.add(r.verdict);
                c.check(r.verdict == Verdict::Pass, || {
                    format!("{name}: {:?} {:?}", r.verdict, r.reason)
                });
            }
            Err(e) => c.fail(format!("{name}: {e}")),
        };
    for ((item, g), cache) in items.iter().zip(caches.iter_mut()) {
        match generate_scenes(g, SCENES_PER_GROUP, cache) {
            Ok(list) => list.iter().for_each(|s| run(&item.name, s, cache, &mut c)),
            Err(e) => c.fail(format!("{}: {e}", item.name)),
        }
    }
    for entry in std::fs::read_dir(data_dir("examples")).expect("examples directory") {
        let path = entry.expect("entry").path();
        let loaded = read_group_file(&path).expect("example file");
        let mut cache = TableCache::new();
        for spec in &loaded.scenes {
            let scene = loaded.resolve_scene(spec).expect("declared scene");
            run(&format!("{} {}", loaded.name, spec.name), &scene, &mut cache, &mut c);
        }
    }
    c.check(tally.pass >= 200, || format!("only {} scenes", tally.pass));
    c.notes.push(format!(
        "{} scenes pass in {:.1}s",
        tally.pass,
        start.elapsed().as_secs_f64()
    ));
    c
}

fn extensions(items: &[(CorpusItem, PermGroup)], caches: &mut [TableCache]) -> Criterion {
    let mut c = Criterion::new("6 canonical p-rational extension");
    let start = Instant::now();
    let mut f = Tally::default();
    for ((item, g), cache) in items.iter().zip(caches.iter_mut()) {
        if g.order() > SWEEP_MAX_ORDER {
            continue;
        }
        match sweep_extensions(g, cache) {
            Ok((tf, _, failures)) => {
                f.merge(&tf);
                for r in failures.iter().filter(|r| r.target == blockscope::verify::THEOREM_F) {
                    c.fail(format!("{}: {:?}", item.name, r.reason));
                }
            }
            Err(e) => c.fail(format!("{}: {e}", item.name)),
        }
    }
    let loaded = read_group_file(data_dir("examples/c3xs3.json")).expect("C3 x S3 example");
    let n = loaded.subgroup("N").expect("subgroup N").clone();
    let mut cache = TableCache::new();
    let r = verify_theorem_f_instance(&loaded.group, &n, 0, 3, &mut cache).expect("C3 x S3 instance");
    let t = cache.table(&loaded.group).expect("table");
    let chi = r.details["chi"].as_u64().and_then(|i| i.to_usize());
    c.check(r.verdict == Verdict::Pass, || format!("C3 x S3: {:?}", r.verdict));
    c.check(chi.is_some_and(|i| t.irreducible(i).is_trivial()), || {
        format!("C3 x S3 output {chi:?} is not trivial")
    });
    c.check(r.details["extension_count"] == 2, || {
        format!("C3 x S3 count {}", r.details["extension_count"])
    });
    c.check(f.pass > 0, || "no tuple satisfied the hypotheses".into());
    c.notes.push(format!(
        "{} constructions, {} tuples outside the hypotheses, C3 x S3 trivial with 2 extensions, {:.1}s",
        f.pass,
        f.inapplicable,
        start.elapsed().as_secs_f64()
    ));
    c
}

fn cyclic_quotient(items: &[(CorpusItem, PermGroup)], caches: &mut [TableCache]) -> Criterion {
    let mut c = Criterion::new("7 SmallGroup(216,158) configuration");
    let i = items
        .iter()
        .position(|(i, _)| i.name == "SmallGroup(216,158)")
        .expect("order 216 group");
    match reproduce_cyclic_quotient_counterexample(&items[i].1, &mut caches[i]) {
        Ok(r) => {
            c.check(r.verdict == Verdict::Pass, || format!("{:?} {:?}", r.verdict, r.reason));
            c.notes.push(format!(
                "|N| = {}, theta of degree {}",
                r.details["n_order"], r.details["theta_degree"]
            ));
        }
        Err(e) => c.fail(e.to_string()),
    }
    c
}

fn sigma(items: &[(CorpusItem, PermGroup)], caches: &mut [TableCache]) -> Criterion {
    let mut c = Criterion::new("8 sigma-invariance against normal 2-complements");
    let mut tally = Tally::default();
    for ((item, g), cache) in items.iter().zip(caches.iter_mut()) {
        let extra = SIGMA_EXTRA.contains(&item.name.as_str());
        let solvable_small = g.order() <= SIGMA_MAX_ORDER && is_solvable(g).unwrap_or(false);
        if !(extra || solvable_small) {
            continue;
        }
        match verify_sigma_invariance(g, cache) {
            Ok(r) => {
                tally.add(r.verdict);
                c.check(matches!(r.verdict, Verdict::Pass | Verdict::Inapplicable), || {
                    format!("{}: {:?} {:?}", item.name, r.verdict, r.reason)
                });
            }
            Err(e) => c.fail(format!("{}: {e}", item.name)),
        }
    }
    c.notes.push(format!(
        "{} agree, {} of odd order, {} disagreements",
        tally.pass,
        tally.inapplicable,
        tally.fail + tally.finding
    ));
    c
}

fn main() -> ExitCode {
    let items: Vec<(CorpusItem, PermGroup)> = load_corpus(&data_dir("corpus"))
        .expect("corpus manifest")
        .into_iter()
        .map(|item| {
            let g = read_group_file(data_dir("corpus").join(&item.file))
                .expect("corpus group")
                .group;
            (item, g)
        })
        .collect();
    let mut caches: Vec<TableCache> = items.iter().map(|_| TableCache::new()).collect();
    let criteria = [
        tables(&items, &mut caches),
        blocks(&items, &mut caches),
        theorem_d(&items, &mut caches),
        a6_witness(&items, &mut caches),
        scenes(&items, &mut caches),
        extensions(&items, &mut caches),
        cyclic_quotient(&items, &mut caches),
        sigma(&items, &mut caches),
    ];
    let failed = criteria.iter().map(Criterion::print).filter(|ok| !ok).count();
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
