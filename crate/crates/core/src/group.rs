//! Finite groups given by Cayley tables, with subgroup closure, conjugacy
//! classes of subgroups and the subgroup lattice.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of a group, as a dense index `0..order`.
pub type Elem = usize;

/// Largest supported group order (element sets are 64-bit masks).
pub const MAX_ORDER: usize = 64;

/// Default order bound for the exhaustive associativity check.
pub const DEFAULT_ASSOC_BOUND: usize = 64;

/// A set of group elements stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElemSet(pub u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn singleton(g: Elem) -> Self {
        ElemSet(1u64 << g)
    }

    pub fn from_elems<I: IntoIterator<Item = Elem>>(it: I) -> Self {
        let mut s = 0u64;
        for g in it {
            s |= 1u64 << g;
        }
        ElemSet(s)
    }

    pub fn contains(self, g: Elem) -> bool {
        g < 64 && self.0 >> g & 1 == 1
    }

    pub fn insert(&mut self, g: Elem) {
        self.0 |= 1u64 << g;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: ElemSet) -> ElemSet {
        ElemSet(self.0 | o.0)
    }

    pub fn intersection(self, o: ElemSet) -> ElemSet {
        ElemSet(self.0 & o.0)
    }

    pub fn is_subset(self, o: ElemSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Elem> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    /// Sorted member list.
    pub fn to_vec(self) -> Vec<Elem> {
        self.iter().collect()
    }

    /// Lexicographic comparison of the sorted member lists.
    pub fn lex_cmp(self, o: ElemSet) -> std::cmp::Ordering {
        self.iter().cmp(o.iter())
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Constructor descriptor for a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    Trivial,
    Cyclic(usize),
    Dihedral(usize),
    Product(Vec<GroupSpec>),
    Table(Vec<Vec<usize>>),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Trivial => write!(f, "trivial"),
            GroupSpec::Cyclic(n) => write!(f, "cyclic {n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral {n}"),
            GroupSpec::Product(fs) => {
                write!(f, "product ")?;
                for (i, s) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ; ")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
            GroupSpec::Table(rows) => {
                write!(f, "table {}", rows.len())?;
                for row in rows {
                    for x in row {
                        write!(f, " {x}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `trivial`, `cyclic N`, `dihedral N`, `product A ; B ; ...`
    /// and `table N` followed by N*N entries on the same line.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |m: &str| Error::InvalidGroup(format!("{m}: `{s}`"));
        let mut words = s.split_whitespace();
        let head = words.next().ok_or_else(|| bad("empty group spec"))?;
        match head {
            "trivial" => {
                if words.next().is_some() {
                    return Err(bad("unexpected tokens"));
                }
                Ok(GroupSpec::Trivial)
            }
            "cyclic" | "dihedral" => {
                let n: usize = words
                    .next()
                    .ok_or_else(|| bad("missing size"))?
                    .parse()
                    .map_err(|_| bad("size is not an integer"))?;
                if words.next().is_some() {
                    return Err(bad("unexpected tokens"));
                }
                Ok(if head == "cyclic" {
                    GroupSpec::Cyclic(n)
                } else {
                    GroupSpec::Dihedral(n)
                })
            }
            "product" => {
                let rest = s["product".len()..].trim();
                let factors = rest
                    .split(';')
                    .map(|p| p.parse::<GroupSpec>())
                    .collect::<Result<Vec<_>>>()?;
                Ok(GroupSpec::Product(factors))
            }
            "table" => {
                let nums = words
                    .map(|w| w.parse::<usize>().map_err(|_| bad("non-integer table entry")))
                    .collect::<Result<Vec<_>>>()?;
                let (&n, entries) = nums.split_first().ok_or_else(|| bad("missing size"))?;
                if entries.len() != n * n {
                    return Err(bad("table needs N*N entries"));
                }
                Ok(GroupSpec::Table(
                    entries.chunks(n.max(1)).map(|c| c.to_vec()).collect(),
                ))
            }
            _ => Err(bad("unknown group constructor")),
        }
    }
}

/// Classification of a subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub is_trivial: bool,
    pub is_cyclic: bool,
    pub cyclic_order: Option<usize>,
    pub iso_to_z2: bool,
}

/// A subgroup, identified by its member set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    pub members: ElemSet,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }
}

/// Conjugacy class of subgroups, represented by its lexicographically
/// least member list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConjClass {
    pub representative: ElemSet,
}

/// All subgroups of a group with their conjugacy classes.
#[derive(Debug)]
pub struct Lattice {
    subgroups: Vec<ElemSet>,
    index: FxHashMap<u64, usize>,
    class_of: Vec<usize>,
    classes: Vec<ElemSet>,
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[ElemSet] {
        &self.subgroups
    }

    pub fn subgroup(&self, id: usize) -> ElemSet {
        self.subgroups[id]
    }

    /// Id of a subgroup given by its member set.
    pub fn id_of(&self, h: ElemSet) -> Option<usize> {
        self.index.get(&h.0).copied()
    }

    pub fn class_id(&self, subgroup_id: usize) -> usize {
        self.class_of[subgroup_id]
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_representative(&self, class_id: usize) -> ElemSet {
        self.classes[class_id]
    }
}

/// A finite group given by its Cayley table.
pub struct Group {
    order: usize,
    table: Vec<u8>,
    inv: Vec<u8>,
    identity: Elem,
    names: Vec<String>,
    spec: GroupSpec,
    lattice: OnceLock<Lattice>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("spec", &self.spec.to_string())
            .field("order", &self.order)
            .finish()
    }
}

impl Group {
    /// Builds and validates a group from its descriptor.
    pub fn new(spec: &GroupSpec) -> Result<Group> {
        let (table, names) = build_table(spec)?;
        Group::from_parts(table, names, spec.clone(), DEFAULT_ASSOC_BOUND)
    }

    pub fn trivial() -> Group {
        Group::new(&GroupSpec::Trivial).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Result<Group> {
        Group::new(&GroupSpec::Cyclic(n))
    }

    pub fn dihedral(n: usize) -> Result<Group> {
        Group::new(&GroupSpec::Dihedral(n))
    }

    pub fn product(factors: Vec<GroupSpec>) -> Result<Group> {
        Group::new(&GroupSpec::Product(factors))
    }

    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Group> {
        Group::new(&GroupSpec::Table(rows))
    }

    fn from_parts(
        table: Vec<usize>,
        names: Vec<String>,
        spec: GroupSpec,
        assoc_bound: usize,
    ) -> Result<Group> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidGroup("group must be nonempty".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::GroupTooLarge {
                order: n,
                bound: MAX_ORDER,
            });
        }
        if table.len() != n * n || table.iter().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("table entries out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e * n + g] == g && table[g * n + e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inv = vec![0u8; n];
        for g in 0..n {
            let h = (0..n)
                .find(|&h| table[h * n + g] == identity && table[g * n + h] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
            inv[g] = h as u8;
        }
        if n <= assoc_bound {
            for a in 0..n {
                for b in 0..n {
                    let ab = table[a * n + b];
                    for c in 0..n {
                        if table[ab * n + c] != table[a * n + table[b * n + c]] {
                            return Err(Error::InvalidGroup(format!(
                                "not associative at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        if !names.iter().all(|s| seen.insert(s.as_str())) {
            return Err(Error::InvalidGroup("element names are not unique".into()));
        }
        Ok(Group {
            order: n,
            table: table.into_iter().map(|x| x as u8).collect(),
            inv,
            identity,
            names,
            spec,
            lattice: OnceLock::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a] as usize
    }

    /// `g h g^{-1}`.
    #[inline]
    pub fn conjugate(&self, g: Elem, h: Elem) -> Elem {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn all(&self) -> ElemSet {
        if self.order == 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << self.order) - 1)
        }
    }

    pub fn name(&self, g: Elem) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elem_by_name(&self, name: &str) -> Result<Elem> {
        self.names
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownElementName(name.to_string()))
    }

    pub fn check_elem(&self, g: Elem) -> Result<Elem> {
        if g < self.order {
            Ok(g)
        } else {
            Err(Error::UnknownElement(g))
        }
    }

    /// Order of the element `g`.
    pub fn elem_order(&self, g: Elem) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// The least subgroup containing `s`.
    pub fn generated(&self, s: ElemSet) -> ElemSet {
        let mut set = s.union(ElemSet::singleton(self.identity));
        let gens: Vec<Elem> = s.iter().collect();
        if gens.is_empty() {
            return set;
        }
        let mut frontier: Vec<Elem> = set.iter().collect();
        while let Some(a) = frontier.pop() {
            for &g in &gens {
                let b = self.mul(a, g);
                if !set.contains(b) {
                    set.insert(b);
                    frontier.push(b);
                }
            }
        }
        set
    }

    pub fn generated_subgroup(&self, s: ElemSet) -> Subgroup {
        Subgroup {
            members: self.generated(s),
        }
    }

    /// `g H g^{-1}` for an arbitrary subset `H`.
    pub fn conjugate_set(&self, g: Elem, h: ElemSet) -> ElemSet {
        ElemSet::from_elems(h.iter().map(|x| self.conjugate(g, x)))
    }

    /// Canonical representative of the conjugacy class of the subgroup `h`.
    pub fn canonical_conjugate(&self, h: ElemSet) -> ElemSet {
        let mut best = h;
        for g in self.elements() {
            let c = self.conjugate_set(g, h);
            if c.lex_cmp(best) == std::cmp::Ordering::Less {
                best = c;
            }
        }
        best
    }

    pub fn conj_class(&self, h: &Subgroup) -> ConjClass {
        ConjClass {
            representative: self.canonical_conjugate(h.members),
        }
    }

    pub fn is_subgroup(&self, h: ElemSet) -> bool {
        h.contains(self.identity)
            && h.iter()
                .all(|a| h.contains(self.inv(a)) && h.iter().all(|b| h.contains(self.mul(a, b))))
    }

    pub fn classify_subgroup(&self, h: &Subgroup) -> Classification {
        let m = h.members;
        let generator = m
            .iter()
            .find(|&g| self.generated(ElemSet::singleton(g)) == m);
        Classification {
            is_trivial: m.len() == 1,
            is_cyclic: generator.is_some(),
            cyclic_order: generator.map(|_| m.len()),
            iso_to_z2: m.len() == 2,
        }
    }

    /// All cyclic subgroups, deduplicated, in order of first generator.
    pub fn cyclic_subgroups(&self) -> Vec<ElemSet> {
        let mut out: Vec<ElemSet> = Vec::new();
        for g in self.elements() {
            let c = self.generated(ElemSet::singleton(g));
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    /// Inclusion-maximal cyclic subgroups containing the non-identity `g`.
    pub fn maximal_cyclic_subgroups_containing(&self, g: Elem) -> Result<Vec<Subgroup>> {
        self.check_elem(g)?;
        if g == self.identity {
            return Err(Error::IdentityElement);
        }
        let cyc = self.cyclic_subgroups();
        let mut out: Vec<Subgroup> = cyc
            .iter()
            .filter(|c| c.contains(g))
            .filter(|c| !cyc.iter().any(|d| d != *c && c.is_subset(*d)))
            .map(|&members| Subgroup { members })
            .collect();
        out.sort();
        Ok(out)
    }

    /// The subgroup lattice, computed on first use.
    pub fn lattice(&self) -> &Lattice {
        self.lattice.get_or_init(|| self.build_lattice())
    }

    fn build_lattice(&self) -> Lattice {
        let mut subgroups: Vec<ElemSet> = Vec::new();
        let mut index: FxHashMap<u64, usize> = FxHashMap::default();
        let triv = ElemSet::singleton(self.identity);
        subgroups.push(triv);
        index.insert(triv.0, 0);
        let mut i = 0;
        while i < subgroups.len() {
            let h = subgroups[i];
            for g in self.elements() {
                if h.contains(g) {
                    continue;
                }
                let j = self.generated(h.union(ElemSet::singleton(g)));
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(j.0) {
                    e.insert(subgroups.len());
                    subgroups.push(j);
                }
            }
            i += 1;
        }
        let mut canon_index: FxHashMap<u64, usize> = FxHashMap::default();
        let mut classes = Vec::new();
        let mut class_of = Vec::with_capacity(subgroups.len());
        for &h in &subgroups {
            let c = self.canonical_conjugate(h);
            let id = *canon_index.entry(c.0).or_insert_with(|| {
                classes.push(c);
                classes.len() - 1
            });
            class_of.push(id);
        }
        Lattice {
            subgroups,
            index,
            class_of,
            classes,
        }
    }

    /// Lattice id of the subgroup generated by `s`.
    pub fn subgroup_id(&self, s: ElemSet) -> usize {
        let h = self.generated(s);
        self.lattice()
            .id_of(h)
            .expect("every generated subgroup is in the lattice")
    }
}

fn build_table(spec: &GroupSpec) -> Result<(Vec<usize>, Vec<String>)> {
    match spec {
        GroupSpec::Trivial => Ok((vec![0], vec!["e".to_string()])),
        GroupSpec::Cyclic(n) => {
            let n = *n;
            if n == 0 {
                return Err(Error::InvalidGroup("cyclic(n) needs n >= 1".into()));
            }
            if n > MAX_ORDER {
                return Err(Error::GroupTooLarge {
                    order: n,
                    bound: MAX_ORDER,
                });
            }
            let t = (0..n * n).map(|x| (x / n + x % n) % n).collect();
            Ok((t, (0..n).map(|i| i.to_string()).collect()))
        }
        GroupSpec::Dihedral(n) => {
            let n = *n;
            if n == 0 {
                return Err(Error::InvalidGroup("dihedral(n) needs n >= 1".into()));
            }
            if 2 * n > MAX_ORDER {
                return Err(Error::GroupTooLarge {
                    order: 2 * n,
                    bound: MAX_ORDER,
                });
            }
            // Index a*n + i stands for s^a r^i.
            let m = 2 * n;
            let mut t = vec![0; m * m];
            for x in 0..m {
                let (a, i) = (x / n, x % n);
                for y in 0..m {
                    let (b, j) = (y / n, y % n);
                    let rot = if b == 0 { (i + j) % n } else { (n - i + j) % n };
                    t[x * m + y] = ((a + b) % 2) * n + rot;
                }
            }
            let names = (0..n)
                .map(|i| format!("r{i}"))
                .chain((0..n).map(|i| format!("s{i}")))
                .collect();
            Ok((t, names))
        }
        GroupSpec::Product(factors) => {
            if factors.len() < 2 {
                return Err(Error::InvalidGroup(
                    "product needs at least two factors".into(),
                ));
            }
            let parts = factors
                .iter()
                .map(build_table)
                .collect::<Result<Vec<_>>>()?;
            let orders: Vec<usize> = parts.iter().map(|(_, nm)| nm.len()).collect();
            let total = orders.iter().try_fold(1usize, |acc, &o| {
                acc.checked_mul(o).filter(|&v| v <= MAX_ORDER)
            });
            let total = total.ok_or(Error::GroupTooLarge {
                order: usize::MAX,
                bound: MAX_ORDER,
            })?;
            let digits = |mut x: usize| -> Vec<usize> {
                let mut d = vec![0; orders.len()];
                for i in (0..orders.len()).rev() {
                    d[i] = x % orders[i];
                    x /= orders[i];
                }
                d
            };
            let undigits = |d: &[usize]| -> usize {
                d.iter().zip(&orders).fold(0, |acc, (&x, &o)| acc * o + x)
            };
            let mut t = vec![0; total * total];
            for x in 0..total {
                let dx = digits(x);
                for y in 0..total {
                    let dy = digits(y);
                    let dz: Vec<usize> = (0..orders.len())
                        .map(|i| parts[i].0[dx[i] * orders[i] + dy[i]])
                        .collect();
                    t[x * total + y] = undigits(&dz);
                }
            }
            let names = (0..total)
                .map(|x| {
                    let d = digits(x);
                    let inner: Vec<&str> = d
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| parts[i].1[v].as_str())
                        .collect();
                    format!("({})", inner.join(","))
                })
                .collect();
            Ok((t, names))
        }
        GroupSpec::Table(rows) => {
            let n = rows.len();
            if n == 0 {
                return Err(Error::InvalidGroup("empty table".into()));
            }
            if n > MAX_ORDER {
                return Err(Error::GroupTooLarge {
                    order: n,
                    bound: MAX_ORDER,
                });
            }
            if rows.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidGroup("table is not square".into()));
            }
            Ok((
                rows.iter().flatten().copied().collect(),
                (0..n).map(|i| i.to_string()).collect(),
            ))
        }
    }
}
