//! Finite groups given by Cayley tables.

mod closure;
pub mod format;
mod laws;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::Limits;

pub use closure::{subgroup_closure, subgroup_closure_with_cap, Closure};
pub use laws::{satisfies_laws, LawBudget, LawCheck, LawViolation};

/// Dense element identifier `0..order`.
pub type ElemId = u32;

/// Minimal group interface used by evaluation and closure.
pub trait GroupOps {
    type Elem: Clone + Eq + Hash;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, exp: &BigInt) -> Self::Elem {
        let base = if exp.is_negative() { self.inv(a) } else { a.clone() };
        let e = exp.abs();
        let mut result = self.identity();
        for i in (0..e.bits()).rev() {
            result = self.mul(&result, &result);
            if e.bit(i) {
                result = self.mul(&result, &base);
            }
        }
        result
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }
}

/// A validated finite group.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<ElemId>,
    identity: ElemId,
    inverse: Vec<ElemId>,
    names: Option<Vec<String>>,
    fingerprint: u64,
    exponent: OnceLock<u64>,
}

const FULL_ASSOCIATIVITY_CHECK: usize = 128;
const SAMPLED_TRIPLES: usize = 20_000;

impl FiniteGroup {
    /// Validates a Cayley table given as rows.
    pub fn from_table(name: impl Into<String>, rows: Vec<Vec<ElemId>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != m) {
            return Err(Error::InvalidGroup(format!("row {r} does not have {m} entries")));
        }
        let table: Vec<ElemId> = rows.into_iter().flatten().collect();
        Self::from_flat(name.into(), m, table)
    }

    fn from_flat(name: String, m: usize, table: Vec<ElemId>) -> Result<Self> {
        if let Some(&bad) = table.iter().find(|&&e| e as usize >= m) {
            return Err(Error::InvalidGroup(format!("entry {bad} out of range 0..{m}")));
        }
        let at = |a: usize, b: usize| table[a * m + b] as usize;
        let identity = (0..m)
            .find(|&e| (0..m).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut seen = vec![false; m];
        for a in 0..m {
            for (label, line) in [("row", true), ("column", false)] {
                seen.iter_mut().for_each(|s| *s = false);
                for b in 0..m {
                    let v = if line { at(a, b) } else { at(b, a) };
                    if std::mem::replace(&mut seen[v], true) {
                        return Err(Error::InvalidGroup(format!("{label} {a} repeats element {v}")));
                    }
                }
            }
        }
        let inverse: Vec<ElemId> = (0..m)
            .map(|a| (0..m).find(|&b| at(a, b) == identity).expect("latin square") as ElemId)
            .collect();
        for (a, &inv) in inverse.iter().enumerate() {
            if at(inv as usize, a) != identity {
                return Err(Error::InvalidGroup(format!("element {a} has no two-sided inverse")));
            }
        }
        let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
        if m <= FULL_ASSOCIATIVITY_CHECK {
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidGroup(format!("not associative at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidGroup(format!("not associative at ({a}, {b}, {c})")));
                }
            }
        }
        let mut hasher = DefaultHasher::new();
        m.hash(&mut hasher);
        table.hash(&mut hasher);
        Ok(FiniteGroup {
            name,
            order: m,
            table,
            identity: identity as ElemId,
            inverse,
            names: None,
            fingerprint: hasher.finish(),
            exponent: OnceLock::new(),
        })
    }

    pub fn trivial() -> Self {
        Self::from_flat("trivial".into(), 1, vec![0]).expect("trivial group")
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.order {
            return Err(Error::InvalidGroup(format!("{} names for {} elements", names.len(), self.order)));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> ElemId {
        self.identity
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> {
        0..self.order as ElemId
    }

    pub fn element_name(&self, a: ElemId) -> String {
        match &self.names {
            Some(names) => names[a as usize].clone(),
            None => a.to_string(),
        }
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Structural identity: same order and same Cayley table.
    pub fn same_as(&self, other: &FiniteGroup) -> bool {
        self.order == other.order && self.fingerprint == other.fingerprint && self.table == other.table
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    #[inline]
    pub fn product(&self, a: ElemId, b: ElemId) -> ElemId {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inverse_of(&self, a: ElemId) -> ElemId {
        self.inverse[a as usize]
    }

    pub fn pow_u64(&self, a: ElemId, mut e: u64) -> ElemId {
        let mut base = a;
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.product(acc, base);
            }
            base = self.product(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: ElemId) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.product(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        *self.exponent.get_or_init(|| self.elements().map(|a| self.element_order(a)).fold(1, |acc, o| acc.lcm(&o)))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.product(a, b) == self.product(b, a)))
    }

    pub fn center(&self) -> Vec<ElemId> {
        self.elements().filter(|&a| self.elements().all(|b| self.product(a, b) == self.product(b, a))).collect()
    }

    pub fn conjugacy_class_count(&self) -> usize {
        let mut seen = vec![false; self.order];
        let mut classes = 0;
        for a in self.elements() {
            if seen[a as usize] {
                continue;
            }
            classes += 1;
            for g in self.elements() {
                let c = self.product(self.product(self.inverse_of(g), a), g);
                seen[c as usize] = true;
            }
        }
        classes
    }

    /// Order, abelian flag and sorted element-order multiset, for reports.
    pub fn fingerprint_summary(&self) -> String {
        let mut orders: Vec<u64> = self.elements().map(|a| self.element_order(a)).collect();
        orders.sort_unstable();
        let mut hist: Vec<(u64, usize)> = Vec::new();
        for o in orders {
            match hist.last_mut() {
                Some((last, count)) if *last == o => *count += 1,
                _ => hist.push((o, 1)),
            }
        }
        let hist: Vec<String> = hist.iter().map(|(o, c)| format!("{o}:{c}")).collect();
        format!(
            "order {} {} element-orders {}",
            self.order,
            if self.is_abelian() { "abelian" } else { "nonabelian" },
            hist.join(",")
        )
    }
}

impl GroupOps for FiniteGroup {
    type Elem = ElemId;

    fn identity(&self) -> ElemId {
        self.identity
    }

    fn mul(&self, a: &ElemId, b: &ElemId) -> ElemId {
        self.product(*a, *b)
    }

    fn inv(&self, a: &ElemId) -> ElemId {
        self.inverse_of(*a)
    }

    fn pow(&self, a: &ElemId, exp: &BigInt) -> ElemId {
        let n = BigInt::from(self.exponent());
        let e = exp.mod_floor(&n);
        self.pow_u64(*a, e.to_u64().expect("reduced exponent"))
    }
}

impl<T: GroupOps + ?Sized> GroupOps for &T {
    type Elem = T::Elem;
    fn identity(&self) -> T::Elem {
        (**self).identity()
    }
    fn mul(&self, a: &T::Elem, b: &T::Elem) -> T::Elem {
        (**self).mul(a, b)
    }
    fn inv(&self, a: &T::Elem) -> T::Elem {
        (**self).inv(a)
    }
    fn pow(&self, a: &T::Elem, exp: &BigInt) -> T::Elem {
        (**self).pow(a, exp)
    }
}

fn check_cap(order: u128, cap: usize) -> Result<()> {
    if order > cap as u128 {
        return Err(Error::TooLarge { order, cap });
    }
    Ok(())
}

fn from_fn(name: String, m: usize, f: impl Fn(usize, usize) -> usize) -> Result<FiniteGroup> {
    let mut table = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            table.push(f(a, b) as ElemId);
        }
    }
    FiniteGroup::from_flat(name, m, table)
}

pub fn build_cyclic(n: usize) -> Result<FiniteGroup> {
    build_cyclic_with(n, &Limits::default())
}

pub fn build_cyclic_with(n: usize, limits: &Limits) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidParameter("cyclic group order must be at least 1".into()));
    }
    check_cap(n as u128, limits.order_cap)?;
    from_fn(format!("C{n}"), n, |a, b| (a + b) % n)
}

/// Dihedral group of order `2n`; element `k + n*e` is `r^k s^e`.
pub fn build_dihedral(n: usize) -> Result<FiniteGroup> {
    build_dihedral_with(n, &Limits::default())
}

pub fn build_dihedral_with(n: usize, limits: &Limits) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidParameter("dihedral parameter must be at least 1".into()));
    }
    check_cap(2 * n as u128, limits.order_cap)?;
    let g = from_fn(format!("D{n}"), 2 * n, |a, b| {
        let (ka, ea) = (a % n, a / n);
        let (kb, eb) = (b % n, b / n);
        let k = if ea == 0 { (ka + kb) % n } else { (ka + n - kb) % n };
        k + n * ((ea + eb) % 2)
    })?;
    let names = (0..2 * n)
        .map(|a| match (a % n, a / n) {
            (0, 0) => "1".to_string(),
            (k, 0) => format!("r^{k}"),
            (0, _) => "s".to_string(),
            (k, _) => format!("r^{k}s"),
        })
        .collect();
    g.with_names(names)
}

/// All permutations of `0..n` in lexicographic order; element `k` of
/// [`build_symmetric`]`(n)` is the `k`-th entry.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut i = p[start];
        while i != start {
            seen[i] = true;
            cycle.push(i + 1);
            i = p[i];
        }
        let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// Symmetric group on `n <= 5` points. Elements are the permutations in
/// lexicographic order; the product `a*b` applies `a` first, then `b`.
pub fn build_symmetric(n: usize) -> Result<FiniteGroup> {
    if !(1..=5).contains(&n) {
        return Err(Error::InvalidParameter(format!("symmetric degree {n} outside 1..=5")));
    }
    let perms = permutations(n);
    let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).expect("permutation");
    let g = from_fn(format!("S{n}"), perms.len(), |a, b| {
        let prod: Vec<usize> = (0..n).map(|i| perms[b][perms[a][i]]).collect();
        index(&prod)
    })?;
    let names = perms.iter().map(|p| cycle_notation(p)).collect();
    g.with_names(names)
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Upper unitriangular 3x3 matrices over `Z/p`. Element `a + p*b + p^2*c`
/// is the matrix with superdiagonal `(a, b)` and corner `c`.
pub fn build_heisenberg_mod(p: usize) -> Result<FiniteGroup> {
    build_heisenberg_mod_with(p, &Limits::default())
}

pub fn build_heisenberg_mod_with(p: usize, limits: &Limits) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    check_cap((p as u128).pow(3), limits.order_cap)?;
    let split = |x: usize| (x % p, (x / p) % p, x / (p * p));
    from_fn(format!("Heis{p}"), p * p * p, |x, y| {
        let (a, b, c) = split(x);
        let (a2, b2, c2) = split(y);
        let (a3, b3, c3) = ((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p);
        a3 + p * b3 + p * p * c3
    })
}

/// Heisenberg element identifier from matrix coordinates.
pub fn heisenberg_element(p: usize, a: u64, b: u64, c: u64) -> ElemId {
    let p64 = p as u64;
    ((a % p64) + p64 * (b % p64) + p64 * p64 * (c % p64)) as ElemId
}

/// Matrix coordinates `(a, b, c)` of a Heisenberg element.
pub fn heisenberg_coordinates(p: usize, x: ElemId) -> (u64, u64, u64) {
    let (x, p) = (x as u64, p as u64);
    (x % p, (x / p) % p, x / (p * p))
}

/// Element `a*|B| + b` is the pair `(a, b)`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    direct_product_with(a, b, &Limits::default())
}

pub fn direct_product_with(a: &FiniteGroup, b: &FiniteGroup, limits: &Limits) -> Result<FiniteGroup> {
    check_cap(a.order as u128 * b.order as u128, limits.order_cap)?;
    let nb = b.order;
    let g = from_fn(format!("{}x{}", a.name, b.name), a.order * nb, |x, y| {
        let ab = a.product((x / nb) as ElemId, (y / nb) as ElemId) as usize;
        let bb = b.product((x % nb) as ElemId, (y % nb) as ElemId) as usize;
        ab * nb + bb
    })?;
    if a.names.is_some() || b.names.is_some() {
        let names = (0..a.order * nb)
            .map(|x| format!("({},{})", a.element_name((x / nb) as ElemId), b.element_name((x % nb) as ElemId)))
            .collect();
        return g.with_names(names);
    }
    Ok(g)
}

/// The `k`-th direct power of a group, with coordinatewise operations.
/// Elements are never tabulated.
#[derive(Clone, Copy, Debug)]
pub struct TupleGroup<'a> {
    base: &'a FiniteGroup,
    power: usize,
}

impl<'a> TupleGroup<'a> {
    pub fn new(base: &'a FiniteGroup, power: usize) -> Result<Self> {
        if power == 0 {
            return Err(Error::InvalidParameter("tuple power must be at least 1".into()));
        }
        Ok(TupleGroup { base, power })
    }

    pub fn base(&self) -> &FiniteGroup {
        self.base
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn diagonal(&self, a: ElemId) -> Vec<ElemId> {
        vec![a; self.power]
    }
}

impl GroupOps for TupleGroup<'_> {
    type Elem = Vec<ElemId>;

    fn identity(&self) -> Vec<ElemId> {
        vec![self.base.identity; self.power]
    }

    fn mul(&self, a: &Vec<ElemId>, b: &Vec<ElemId>) -> Vec<ElemId> {
        a.iter().zip(b).map(|(&x, &y)| self.base.product(x, y)).collect()
    }

    fn inv(&self, a: &Vec<ElemId>) -> Vec<ElemId> {
        a.iter().map(|&x| self.base.inverse_of(x)).collect()
    }

    fn pow(&self, a: &Vec<ElemId>, exp: &BigInt) -> Vec<ElemId> {
        a.iter().map(|x| self.base.pow(x, exp)).collect()
    }
}

/// An injective homomorphism `source -> target`.
#[derive(Clone, Debug)]
pub struct GEmbedding {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<ElemId>,
}

/// Outcome of [`verify_embedding`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingCheck {
    Valid,
    NotInjective(ElemId, ElemId),
    NotHomomorphic(ElemId, ElemId),
    Malformed(String),
}

impl EmbeddingCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, EmbeddingCheck::Valid)
    }
}

impl GEmbedding {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<ElemId>) -> Result<Self> {
        let lambda = GEmbedding { source, target, map };
        match verify_embedding(&lambda) {
            EmbeddingCheck::Valid => Ok(lambda),
            other => Err(Error::InvalidEmbedding(format!("{other:?}"))),
        }
    }

    /// Builds the map without checking it; use [`verify_embedding`].
    pub fn new_unchecked(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<ElemId>) -> Self {
        GEmbedding { source, target, map }
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        GEmbedding { source: group.clone(), target: group.clone(), map: group.elements().collect() }
    }

    /// The embedding of the trivial group.
    pub fn trivial(target: &Arc<FiniteGroup>) -> Self {
        GEmbedding { source: Arc::new(FiniteGroup::trivial()), target: target.clone(), map: vec![target.identity] }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn map(&self) -> &[ElemId] {
        &self.map
    }

    pub fn apply(&self, g: ElemId) -> ElemId {
        self.map[g as usize]
    }

    pub fn is_trivial_source(&self) -> bool {
        self.source.order() == 1
    }
}

/// Checks that `lambda` is an injective homomorphism.
pub fn verify_embedding(lambda: &GEmbedding) -> EmbeddingCheck {
    let (g, h) = (&lambda.source, &lambda.target);
    if lambda.map.len() != g.order() {
        return EmbeddingCheck::Malformed(format!("{} images for {} elements", lambda.map.len(), g.order()));
    }
    if let Some(&bad) = lambda.map.iter().find(|&&x| x as usize >= h.order()) {
        return EmbeddingCheck::Malformed(format!("image {bad} outside target"));
    }
    let mut first = vec![None; h.order()];
    for a in g.elements() {
        let img = lambda.map[a as usize] as usize;
        if let Some(b) = first[img] {
            return EmbeddingCheck::NotInjective(b, a);
        }
        first[img] = Some(a);
    }
    for a in g.elements() {
        for b in g.elements() {
            if lambda.apply(g.product(a, b)) != h.product(lambda.apply(a), lambda.apply(b)) {
                return EmbeddingCheck::NotHomomorphic(a, b);
            }
        }
    }
    EmbeddingCheck::Valid
}

/// Greedy generating set in identifier order.
pub fn greedy_generators(g: &FiniteGroup) -> Vec<ElemId> {
    let mut gens = Vec::new();
    let mut inside: HashSet<ElemId> = HashSet::from([g.identity]);
    for a in g.elements() {
        if inside.contains(&a) {
            continue;
        }
        gens.push(a);
        let closure = subgroup_closure(g, &gens).expect("subgroup of a tabulated group");
        inside = closure.elements().iter().copied().collect();
        if inside.len() == g.order() {
            break;
        }
    }
    gens
}
