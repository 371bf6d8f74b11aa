//! Ordinary character tables and the standard operations on class functions.

mod dixon;
mod modp;

use modp::Fp;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::Zero;

pub use dixon::working_prime;

use crate::arith::is_prime;
use crate::blocks::BlockPartition;
use crate::cyclo::{galois_apply, Cyclotomic, GaloisAut, Rational};
use crate::error::{Error, Result};
use crate::group::{is_normal, ConjugacyClasses, PermGroup, QuotientMap};
use crate::perm::Permutation;

static NEXT_TABLE_ID: AtomicU64 = AtomicU64::new(1);

/// A class function on the classes of one particular table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassFunction {
    table: u64,
    values: Vec<Cyclotomic>,
}

/// Characters are class functions; irreducibility is a property of the table entry.
pub type Character = ClassFunction;

impl ClassFunction {
    pub fn table_id(&self) -> u64 {
        self.table
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    /// Value at the identity as an integer; 0 if it is not a nonnegative integer.
    pub fn degree(&self) -> u64 {
        self.values[0]
            .to_integer()
            .and_then(|d| u64::try_from(d).ok())
            .unwrap_or(0)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| *v == Cyclotomic::one())
    }

    fn same_table(&self, other: &ClassFunction) -> Result<()> {
        if self.table != other.table {
            return Err(Error::Domain("class functions belong to different tables".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.same_table(other)?;
        Ok(self.map2(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.same_table(other)?;
        Ok(self.map2(other, |a, b| a - b))
    }

    pub fn mul(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.same_table(other)?;
        Ok(self.map2(other, |a, b| a * b))
    }

    pub fn scale_int(&self, c: i128) -> ClassFunction {
        ClassFunction {
            table: self.table,
            values: self.values.iter().map(|v| v.scale_int(c)).collect(),
        }
    }

    fn map2(&self, other: &ClassFunction, f: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic) -> ClassFunction {
        ClassFunction {
            table: self.table,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Value-wise Galois conjugate `zeta ↦ zeta^k`; `k` must be a unit modulo every conductor.
    pub fn galois(&self, k: i64) -> Result<ClassFunction> {
        let values = self
            .values
            .iter()
            .map(|v| {
                let sigma = GaloisAut::new(v.conductor(), k)?;
                galois_apply(&sigma, v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassFunction {
            table: self.table,
            values,
        })
    }

    pub fn complex_conjugate(&self) -> ClassFunction {
        ClassFunction {
            table: self.table,
            values: self.values.iter().map(Cyclotomic::complex_conjugate).collect(),
        }
    }

    /// Least common multiple of the conductors of all values.
    pub fn conductor(&self) -> u64 {
        self.values.iter().fold(1, |acc, v| acc.lcm(&v.conductor()))
    }
}

/// The character table of a permutation group.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    id: u64,
    group: PermGroup,
    classes: Arc<ConjugacyClasses>,
    /// `power_maps[k][t]` is the class of `z_k^t`, `t` in `0..order(z_k)`.
    power_maps: Vec<Vec<u32>>,
    exponent: u64,
    irreducibles: Vec<ClassFunction>,
    modular: OnceLock<ModularImage>,
    /// Block partitions computed so far, by prime.
    blocks: Arc<Mutex<BTreeMap<u64, Arc<BlockPartition>>>>,
}

/// The table reduced modulo a prime `l = 1 mod exponent` below `2^31`, with `zeta_exponent`
/// sent to a fixed primitive root of unity.
#[derive(Clone, Debug)]
struct ModularImage {
    f: Fp,
    /// `powers[j] = zeta^j` for `j` in `0..exponent`.
    powers: Vec<u64>,
    /// `values[i][k] = chi_i(x_k)` reduced.
    values: Vec<Vec<u64>>,
    /// `conj[i][k] = chi_i(x_k^-1)` reduced.
    conj: Vec<Vec<u64>>,
    /// Reduced rows are distinct since `l` does not divide `|G|`.
    index: HashMap<Vec<u64>, usize>,
}

impl ModularImage {
    fn new(t: &CharacterTable) -> Self {
        let n = t.exponent;
        let mut l = (1u64 << 29) / n * n + 1;
        while !is_prime(l) {
            l += n;
        }
        let f = Fp { l };
        let zeta = f.pow(f.primitive_root(), (l - 1) / n);
        let mut powers = Vec::with_capacity(n as usize);
        let mut x = 1;
        for _ in 0..n {
            powers.push(x);
            x = f.mul(x, zeta);
        }
        let mut img = ModularImage {
            f,
            powers,
            values: Vec::new(),
            conj: Vec::new(),
            index: HashMap::new(),
        };
        img.values = t
            .irreducibles
            .iter()
            .map(|chi| {
                chi.values
                    .iter()
                    .map(|v| img.reduce(v, n).expect("character values lie in Q(zeta_exponent)"))
                    .collect()
            })
            .collect();
        img.conj = img
            .values
            .iter()
            .map(|row| (0..t.num_classes()).map(|k| row[t.inverse_class(k)]).collect())
            .collect();
        img.index = img
            .values
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, row)| (row, i))
            .collect();
        img
    }

    /// `None` when the value leaves `Q(zeta_n)` or a denominator vanishes modulo `l`.
    fn reduce(&self, v: &Cyclotomic, n: u64) -> Option<u64> {
        if !n.is_multiple_of(v.conductor()) {
            return None;
        }
        let step = n / v.conductor();
        let f = self.f;
        let mut acc = 0;
        for (j, c) in v.terms() {
            let num = c.numer().rem_euclid(f.l as i128) as u64;
            let den = c.denom().rem_euclid(f.l as i128) as u64;
            if den == 0 {
                return None;
            }
            let term = f.mul(f.mul(num, f.inv(den)), self.powers[(j * step) as usize]);
            acc = f.add(acc, term);
        }
        Some(acc)
    }
}

impl CharacterTable {
    /// Validates a complete list of irreducible value vectors and fixes their order.
    ///
    /// Columns follow the class order of `group.conjugacy_classes()`.
    pub fn from_values(group: PermGroup, values: Vec<Vec<Cyclotomic>>) -> Result<Self> {
        let classes = group.conjugacy_classes()?;
        let r = classes.len();
        let power_maps = power_maps_of(&group)?;
        let exponent = group.exponent()?;
        let id = NEXT_TABLE_ID.fetch_add(1, AtomicOrdering::Relaxed);
        let mut rows = values;
        if rows.len() != r || rows.iter().any(|v| v.len() != r) {
            return Err(Error::Input(format!(
                "expected {r} characters with {r} values each, got {}",
                rows.len()
            )));
        }
        rows.sort_by(|a, b| compare_rows(a, b));
        let table = CharacterTable {
            id,
            group,
            classes,
            power_maps,
            exponent,
            irreducibles: rows
                .into_iter()
                .map(|values| ClassFunction { table: id, values })
                .collect(),
            modular: OnceLock::new(),
            blocks: Arc::default(),
        };
        table.validate()?;
        Ok(table)
    }

    /// Exact checks of every table invariant.
    fn validate(&self) -> Result<()> {
        let order = self.order();
        let r = self.num_classes();
        for chi in &self.irreducibles {
            let d = chi.degree();
            if d == 0 || !order.is_multiple_of(d) {
                return Err(Error::Arithmetic(format!("invalid degree {}", chi.values[0])));
            }
            if let Some(v) = chi.values.iter().find(|v| !v.is_algebraic_integer()) {
                return Err(Error::Arithmetic(format!("value {v} is not an algebraic integer")));
            }
            if let Some(v) = chi.values.iter().find(|v| !self.exponent.is_multiple_of(v.conductor())) {
                return Err(Error::Arithmetic(format!(
                    "value {v} does not lie in Q(zeta_{})",
                    self.exponent
                )));
            }
        }
        if !self.irreducibles[0].is_trivial() {
            return Err(Error::Arithmetic("first character is not trivial".into()));
        }
        let sum_sq: u64 = self.irreducibles.iter().map(|c| c.degree() * c.degree()).sum();
        if sum_sq != order {
            return Err(Error::Arithmetic(format!("sum of squared degrees {sum_sq} != {order}")));
        }
        let n = self.exponent;
        let lifted: Vec<Vec<Sparse>> = self
            .irreducibles
            .iter()
            .map(|c| c.values.iter().map(|v| Sparse::new(v, n)).collect())
            .collect();
        for i in 0..r {
            for j in i..r {
                let terms = (0..r).map(|k| (self.classes.size(k) as i128, &lifted[i][k], &lifted[j][k]));
                let s = sum_of_products(n, terms);
                let expect = if i == j { order as i128 } else { 0 };
                if s != Cyclotomic::from_int(expect) {
                    return Err(Error::Arithmetic(format!(
                        "row orthogonality fails for characters {i} and {j}"
                    )));
                }
            }
        }
        for k in 0..r {
            for l in k..r {
                let terms = (0..r).map(|i| (1i128, &lifted[i][k], &lifted[i][l]));
                let s = sum_of_products(n, terms);
                let expect = if k == l { self.centralizer_order(k) as i128 } else { 0 };
                if s != Cyclotomic::from_int(expect) {
                    return Err(Error::Arithmetic(format!(
                        "column orthogonality fails for classes {k} and {l}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn classes(&self) -> &ConjugacyClasses {
        &self.classes
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_size(&self, k: usize) -> u64 {
        self.classes.size(k) as u64
    }

    pub fn centralizer_order(&self, k: usize) -> u64 {
        self.order() / self.class_size(k)
    }

    /// Class of `z_k^t`.
    pub fn power_class(&self, k: usize, t: i64) -> usize {
        let row = &self.power_maps[k];
        row[t.rem_euclid(row.len() as i64) as usize] as usize
    }

    pub fn power_maps(&self) -> &[Vec<u32>] {
        &self.power_maps
    }

    pub fn inverse_class(&self, k: usize) -> usize {
        self.power_class(k, -1)
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn irreducibles(&self) -> &[Character] {
        &self.irreducibles
    }

    pub fn irreducible(&self, i: usize) -> &Character {
        &self.irreducibles[i]
    }

    pub fn trivial(&self) -> &Character {
        &self.irreducibles[0]
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.irreducibles.iter().map(ClassFunction::degree).collect()
    }

    /// Wraps a value vector as a class function of this table.
    pub fn class_function(&self, values: Vec<Cyclotomic>) -> Result<ClassFunction> {
        if values.len() != self.num_classes() {
            return Err(Error::Input(format!(
                "class function needs {} values, got {}",
                self.num_classes(),
                values.len()
            )));
        }
        Ok(ClassFunction { table: self.id, values })
    }

    pub fn regular_character(&self) -> ClassFunction {
        let mut values = vec![Cyclotomic::zero(); self.num_classes()];
        values[0] = Cyclotomic::from_int(self.order() as i128);
        ClassFunction { table: self.id, values }
    }

    /// Position of an irreducible character with the given values.
    pub fn index_of(&self, chi: &ClassFunction) -> Option<usize> {
        if chi.table != self.id {
            return None;
        }
        self.irreducibles.iter().position(|c| c.values == chi.values)
    }

    fn owns(&self, chi: &ClassFunction) -> Result<()> {
        if chi.table != self.id {
            return Err(Error::Domain("class function belongs to a different table".into()));
        }
        Ok(())
    }

    /// The permutation `i ↦ j` of irreducibles with `chi_i^sigma = chi_j`, `sigma: zeta ↦ zeta^k`,
    /// read off the power maps: `chi^sigma(g) = chi(g^k)`.
    pub fn galois_permutation(&self, k: i64) -> Result<Vec<usize>> {
        GaloisAut::new(self.exponent, k)?;
        let img = self.modular();
        let action: Vec<usize> = (0..self.num_classes()).map(|c| self.power_class(c, k)).collect();
        img.values
            .iter()
            .map(|row| {
                let moved: Vec<u64> = action.iter().map(|&a| row[a]).collect();
                img.index
                    .get(&moved)
                    .copied()
                    .ok_or_else(|| Error::Arithmetic("Galois conjugate is not irreducible".into()))
            })
            .collect()
    }

    fn modular(&self) -> &ModularImage {
        self.modular.get_or_init(|| ModularImage::new(self))
    }

    pub(crate) fn memo_blocks(
        &self,
        p: u64,
        compute: impl FnOnce() -> Result<BlockPartition>,
    ) -> Result<Arc<BlockPartition>> {
        let mut memo = self.blocks.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(b) = memo.get(&p) {
            return Ok(Arc::clone(b));
        }
        let b = Arc::new(compute()?);
        memo.insert(p, Arc::clone(&b));
        Ok(b)
    }
}

/// Per-class sort key: conductor ascending, then coefficients descending.
fn compare_values(a: &Cyclotomic, b: &Cyclotomic) -> Ordering {
    a.conductor()
        .cmp(&b.conductor())
        .then_with(|| b.coeffs().cmp(a.coeffs()))
}

/// Degree ascending, then value vectors class by class.
fn compare_rows(a: &[Cyclotomic], b: &[Cyclotomic]) -> Ordering {
    let da = a[0].to_rational().unwrap_or_else(Rational::zero);
    let db = b[0].to_rational().unwrap_or_else(Rational::zero);
    da.cmp(&db).then_with(|| {
        a.iter()
            .zip(b)
            .map(|(x, y)| compare_values(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// A value lifted to `Q(zeta_n)` as `(1/den) sum num_e zeta_n^e`.
struct Sparse {
    den: i128,
    terms: Vec<(u32, i128)>,
}

impl Sparse {
    fn new(x: &Cyclotomic, n: u64) -> Sparse {
        let step = n / x.conductor();
        let den = x.terms().fold(1i128, |acc, (_, c)| acc.lcm(c.denom()));
        let terms = x
            .terms()
            .map(|(k, c)| ((k * step) as u32, c.numer() * (den / c.denom())))
            .collect();
        Sparse { den, terms }
    }
}

/// `sum_t w_t a_t conj(b_t)` exactly, for values lifted to `Q(zeta_n)`.
fn sum_of_products<'a>(n: u64, terms: impl Iterator<Item = (i128, &'a Sparse, &'a Sparse)>) -> Cyclotomic {
    let mut acc: HashMap<i128, Vec<i128>> = HashMap::new();
    for (w, a, b) in terms {
        if w == 0 || a.terms.is_empty() || b.terms.is_empty() {
            continue;
        }
        let slot = acc.entry(a.den * b.den).or_insert_with(|| vec![0; n as usize]);
        for &(ea, ca) in &a.terms {
            for &(eb, cb) in &b.terms {
                let e = (ea as u64 + n - eb as u64) % n;
                slot[e as usize] += w * ca * cb;
            }
        }
    }
    let mut total = Cyclotomic::zero();
    let mut dens: Vec<_> = acc.into_iter().collect();
    dens.sort_by_key(|(d, _)| *d);
    for (den, v) in dens {
        let coeffs = v.into_iter().map(|c| Rational::new(c, den)).collect();
        total = &total + &Cyclotomic::from_dense(n, coeffs);
    }
    total
}

fn lift_all(cf: &ClassFunction, n: u64) -> Vec<Sparse> {
    cf.values.iter().map(|v| Sparse::new(v, n)).collect()
}

/// `maps[k][t]` is the class of `z_k^t` for `t` in `0..order(z_k)`.
fn power_maps_of(g: &PermGroup) -> Result<Vec<Vec<u32>>> {
    let elements = g.elements()?;
    let classes = g.conjugacy_classes()?;
    Ok((0..classes.len())
        .map(|k| {
            let z = classes.representative(k);
            let mut cur = g.identity();
            (0..classes.element_order(k))
                .map(|_| {
                    let c = classes.class_of_index(elements.index_of(&cur).unwrap()) as u32;
                    cur = cur.mul(z);
                    c
                })
                .collect()
        })
        .collect())
}

/// The character table of `g`, computed by the Dixon–Schneider method.
pub fn compute_character_table(g: &PermGroup) -> Result<CharacterTable> {
    let elements = g.elements()?;
    let classes = g.conjugacy_classes()?;
    let exponent = g.exponent()?;
    let power_maps = power_maps_of(g)?;
    let values = dixon::irreducible_values(&elements, &classes, &power_maps, exponent)?;
    CharacterTable::from_values(g.clone(), values)
}

/// Memoizes character tables by element set, so equal subgroups share one table.
#[derive(Default)]
pub struct TableCache {
    tables: HashMap<Vec<Permutation>, Arc<CharacterTable>>,
}

impl TableCache {
    pub fn new() -> Self {
        TableCache::default()
    }

    pub fn table(&mut self, g: &PermGroup) -> Result<Arc<CharacterTable>> {
        let key = g.elements()?.as_slice().to_vec();
        if let Some(t) = self.tables.get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(compute_character_table(g)?);
        self.tables.insert(key, t.clone());
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }
}

/// `(1/|G|) sum_K |K| chi(x_K) conj(psi(x_K))`.
pub fn inner_product(t: &CharacterTable, chi: &ClassFunction, psi: &ClassFunction) -> Result<Cyclotomic> {
    t.owns(chi)?;
    t.owns(psi)?;
    let n = t.exponent.lcm(&chi.conductor()).lcm(&psi.conductor());
    let a = lift_all(chi, n);
    let b = lift_all(psi, n);
    let s = sum_of_products(n, (0..t.num_classes()).map(|k| (t.class_size(k) as i128, &a[k], &b[k])));
    s.div_rational(Rational::from_integer(t.order() as i128))
}

/// Class fusion `H-class ↦ G-class` for `H = h_table.group() <= G`.
pub fn class_fusion(g_table: &CharacterTable, h_table: &CharacterTable) -> Result<Vec<usize>> {
    if !h_table.group.is_subgroup_of(&g_table.group) {
        return Err(Error::Domain("not a subgroup of the ambient group".into()));
    }
    h_table
        .classes
        .representatives()
        .iter()
        .map(|h| g_table.group.class_of(h))
        .collect()
}

pub fn restrict_character(
    chi: &ClassFunction,
    g_table: &CharacterTable,
    h_table: &CharacterTable,
) -> Result<ClassFunction> {
    g_table.owns(chi)?;
    let fusion = class_fusion(g_table, h_table)?;
    Ok(ClassFunction {
        table: h_table.id,
        values: fusion.iter().map(|&k| chi.values[k].clone()).collect(),
    })
}

/// `theta^G(x_K) = |C_G(x_K)| / |H| * sum over H-classes L inside K of |L| theta(x_L)`.
pub fn induce_character(
    theta: &ClassFunction,
    h_table: &CharacterTable,
    g_table: &CharacterTable,
) -> Result<ClassFunction> {
    h_table.owns(theta)?;
    let fusion = class_fusion(g_table, h_table)?;
    let mut sums = vec![Cyclotomic::zero(); g_table.num_classes()];
    for (l, &k) in fusion.iter().enumerate() {
        sums[k] = &sums[k] + &theta.values[l].scale_int(h_table.class_size(l) as i128);
    }
    let values = sums
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            s.scale(Rational::new(
                g_table.centralizer_order(k) as i128,
                h_table.order() as i128,
            ))
        })
        .collect();
    Ok(ClassFunction {
        table: g_table.id,
        values,
    })
}

/// `chi(g) = chibar(gN)` for a class function of the quotient image.
pub fn inflate_character(
    chibar: &ClassFunction,
    quotient_table: &CharacterTable,
    q: &QuotientMap,
    g_table: &CharacterTable,
) -> Result<ClassFunction> {
    quotient_table.owns(chibar)?;
    if !quotient_table.group.same_group(q.image()) || !g_table.group.same_group(q.source()) {
        return Err(Error::Domain("tables do not match the quotient map".into()));
    }
    let values = g_table
        .classes
        .representatives()
        .iter()
        .map(|z| Ok(chibar.values[quotient_table.group.class_of(&q.forward(z)?)?].clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassFunction {
        table: g_table.id,
        values,
    })
}

/// Multiplicities computed modulo the table prime, accepted only when `cf` equals the
/// recombined sum exactly.
fn constituents_modular(t: &CharacterTable, cf: &ClassFunction) -> Option<Vec<(usize, u64)>> {
    let img = t.modular();
    let f = img.f;
    let weighted: Vec<u64> = cf
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| Some(f.mul(img.reduce(v, t.exponent)?, t.class_size(k) % f.l)))
        .collect::<Option<_>>()?;
    let inv_order = f.inv(t.order() % f.l);
    let mut out = Vec::new();
    for (i, conj) in img.conj.iter().enumerate() {
        let m = weighted
            .iter()
            .zip(conj)
            .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
        let m = f.mul(m, inv_order);
        if m > f.l / 2 {
            return None;
        }
        if m > 0 {
            out.push((i, m));
        }
    }
    let mut sum = vec![Cyclotomic::zero(); t.num_classes()];
    for &(i, m) in &out {
        for (s, v) in sum.iter_mut().zip(&t.irreducibles[i].values) {
            *s = &*s + &v.scale_int(m as i128);
        }
    }
    (sum == cf.values).then_some(out)
}

/// Irreducible constituents with their (positive) multiplicities.
pub fn constituents(t: &CharacterTable, cf: &ClassFunction) -> Result<Vec<(usize, u64)>> {
    t.owns(cf)?;
    if let Some(i) = t.index_of(cf) {
        return Ok(vec![(i, 1)]);
    }
    match constituents_modular(t, cf) {
        Some(out) => Ok(out),
        None => constituents_exact(t, cf),
    }
}

fn constituents_exact(t: &CharacterTable, cf: &ClassFunction) -> Result<Vec<(usize, u64)>> {
    let n = t.exponent.lcm(&cf.conductor());
    let a = lift_all(cf, n);
    let mut out = Vec::new();
    for (i, chi) in t.irreducibles.iter().enumerate() {
        let b = lift_all(chi, n);
        let s = sum_of_products(n, (0..t.num_classes()).map(|k| (t.class_size(k) as i128, &a[k], &b[k])));
        let m = s.div_rational(Rational::from_integer(t.order() as i128))?;
        match m.to_integer() {
            Some(0) => {}
            Some(v) if v > 0 => out.push((i, v as u64)),
            _ => {
                return Err(Error::Domain(format!(
                    "not a character: multiplicity {m} of irreducible {i}"
                )))
            }
        }
    }
    Ok(out)
}

/// `Irr(G | theta)` for `N = n_table.group()` normal in `G`, as indices into `g_table`.
pub fn irr_over(g_table: &CharacterTable, n_table: &CharacterTable, theta: &ClassFunction) -> Result<Vec<usize>> {
    if !is_normal(&g_table.group, &n_table.group)? {
        return Err(Error::Domain("subgroup is not normal".into()));
    }
    let induced = induce_character(theta, n_table, g_table)?;
    let via_induction: Vec<usize> = constituents(g_table, &induced)?.into_iter().map(|(i, _)| i).collect();
    let fusion = class_fusion(g_table, n_table)?;
    let theta_index = n_table.index_of(theta);
    let mut via_restriction = Vec::new();
    for (i, chi) in g_table.irreducibles.iter().enumerate() {
        let res = ClassFunction {
            table: n_table.id,
            values: fusion.iter().map(|&k| chi.values[k].clone()).collect(),
        };
        let over = match theta_index {
            Some(t) => constituents(n_table, &res)?.iter().any(|&(j, _)| j == t),
            None => !inner_product(n_table, &res, theta)?.is_zero(),
        };
        if over {
            via_restriction.push(i);
        }
    }
    if via_induction != via_restriction {
        return Err(Error::Arithmetic("Frobenius reciprocity fails".into()));
    }
    Ok(via_induction)
}

/// Irreducibles of `G` whose restriction to `N` equals `theta`.
pub fn extensions_of(g_table: &CharacterTable, n_table: &CharacterTable, theta: &ClassFunction) -> Result<Vec<usize>> {
    n_table.owns(theta)?;
    let fusion = class_fusion(g_table, n_table)?;
    Ok(g_table
        .irreducibles
        .iter()
        .enumerate()
        .filter(|(_, chi)| fusion.iter().zip(&theta.values).all(|(&k, v)| chi.values[k] == *v))
        .map(|(i, _)| i)
        .collect())
}

/// Classes on which `chi` takes the value `chi(1)`.
pub fn kernel_classes(t: &CharacterTable, chi: &ClassFunction) -> Result<Vec<bool>> {
    t.owns(chi)?;
    Ok(chi.values.iter().map(|v| *v == chi.values[0]).collect())
}

/// The union of the marked classes, which must form a subgroup.
pub fn subgroup_from_classes(t: &CharacterTable, marked: &[bool]) -> Result<PermGroup> {
    let elements = t.group.elements()?;
    let elems = elements
        .iter()
        .enumerate()
        .filter(|(i, _)| marked[t.classes.class_of_index(*i)])
        .map(|(_, g)| g.clone())
        .collect();
    Ok(PermGroup::from_elements(t.group.degree(), elems))
}

pub fn character_kernel(t: &CharacterTable, chi: &ClassFunction) -> Result<PermGroup> {
    subgroup_from_classes(t, &kernel_classes(t, chi)?)
}

/// Every normal subgroup as a set of classes: the intersections of kernels of irreducibles.
/// Ordered by order, then by class set. Fails with a capacity error beyond `cap` subgroups.
pub fn normal_subgroup_classes(t: &CharacterTable, cap: usize) -> Result<Vec<Vec<bool>>> {
    let kernels: BTreeSet<Vec<bool>> = t
        .irreducibles
        .iter()
        .map(|chi| kernel_classes(t, chi))
        .collect::<Result<_>>()?;
    let kernels: Vec<Vec<bool>> = kernels.into_iter().collect();
    let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
    let whole = vec![true; t.num_classes()];
    seen.insert(whole.clone());
    let mut queue = vec![whole];
    while let Some(x) = queue.pop() {
        for k in &kernels {
            let y: Vec<bool> = x.iter().zip(k).map(|(a, b)| *a && *b).collect();
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(Error::Capacity(format!("more than {cap} normal subgroups")));
                }
                queue.push(y);
            }
        }
    }
    let size = |s: &Vec<bool>| -> u64 { (0..s.len()).filter(|&k| s[k]).map(|k| t.class_size(k)).sum() };
    let mut out: Vec<Vec<bool>> = seen.into_iter().collect();
    out.sort_by(|a, b| size(a).cmp(&size(b)).then_with(|| b.cmp(a)));
    Ok(out)
}

pub fn normal_subgroups(t: &CharacterTable, cap: usize) -> Result<Vec<PermGroup>> {
    normal_subgroup_classes(t, cap)?
        .iter()
        .map(|s| subgroup_from_classes(t, s))
        .collect()
}

/// Class permutation `k ↦ class of x z_k x^-1` for an `x` normalizing the table's group.
pub fn class_action(t: &CharacterTable, x: &Permutation) -> Result<Vec<usize>> {
    let xi = x.inverse();
    t.classes
        .representatives()
        .iter()
        .map(|z| {
            let y = z.conjugate_by(&xi);
            if !t.group.contains(&y) {
                return Err(Error::Domain(format!("{x} does not normalize the group")));
            }
            t.group.class_of(&y)
        })
        .collect()
}

/// `chi^x(g) = chi(x g x^-1)`, given the class action of `x`.
pub fn conjugate_by_action(chi: &ClassFunction, action: &[usize]) -> ClassFunction {
    ClassFunction {
        table: chi.table,
        values: action.iter().map(|&k| chi.values[k].clone()).collect(),
    }
}
