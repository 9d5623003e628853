//! Finite groups as validated Cayley tables.
//!
//! Elements are dense indices with the identity at index 0. The multiplication
//! table is the only source of truth; labels are for display and lookup.
//! Permutations compose right to left, `(σ·τ)(x) = σ(τ(x))`, and are labelled
//! in 1-based cycle notation.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default bound on the order of generated groups.
pub const DEFAULT_ORDER_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub usize);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(0);

    pub fn index(self) -> usize {
        self.0
    }
}

/// Partition of a group into conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClassification {
    /// Class id of each element; ids follow the first appearance in index order.
    pub class_of: Vec<usize>,
    /// Elements of each class, ascending.
    pub classes: Vec<Vec<GroupElement>>,
    /// Smallest element of each class.
    pub representatives: Vec<GroupElement>,
}

impl ConjugacyClassification {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, a: GroupElement) -> usize {
        self.class_of[a.0]
    }
}

#[derive(Debug, Clone)]
pub struct GroupTable {
    order: usize,
    product: Vec<usize>,
    inverse: Vec<usize>,
    labels: Vec<String>,
    classes: OnceLock<ConjugacyClassification>,
}

impl PartialEq for GroupTable {
    fn eq(&self, other: &Self) -> bool {
        self.product == other.product && self.labels == other.labels
    }
}

impl Eq for GroupTable {}

impl GroupTable {
    /// Validates a Cayley table. The identity is moved to index 0 (swapping it
    /// with whatever element sat there); default labels are `g0, g1, …` by
    /// input index.
    pub fn from_cayley_table(table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {r} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!(
                    "row {r} contains {bad}, outside [0, {n})"
                )));
            }
        }
        let mut labels = match labels {
            Some(l) if l.len() != n => {
                return Err(Error::InvalidGroup(format!(
                    "{} labels for a table of order {n}",
                    l.len()
                )))
            }
            Some(l) => l,
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        {
            let mut seen = HashMap::new();
            for (i, l) in labels.iter().enumerate() {
                if let Some(j) = seen.insert(l.as_str(), i) {
                    return Err(Error::InvalidGroup(format!(
                        "label `{l}` used by elements {j} and {i}"
                    )));
                }
            }
        }
        let mut seen = vec![false; n];
        for (r, row) in table.iter().enumerate() {
            seen.iter_mut().for_each(|s| *s = false);
            for &x in row {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidGroup(format!("row {r} is not a permutation")));
                }
            }
        }
        for c in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for row in table {
                if std::mem::replace(&mut seen[row[c]], true) {
                    return Err(Error::InvalidGroup(format!(
                        "column {c} is not a permutation"
                    )));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        // Latin square plus identity guarantees two-sided inverses.
        let swap = |x: usize| {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut product = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                product[swap(a) * n + swap(b)] = swap(table[a][b]);
            }
        }
        labels.swap(0, identity);
        Ok(Self::from_product(n, product, labels))
    }

    /// Closure of permutation generators on `[0, degree)`, capped at [`DEFAULT_ORDER_CAP`].
    pub fn from_permutation_generators(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        Self::from_permutation_generators_capped(degree, generators, DEFAULT_ORDER_CAP)
    }

    /// Breadth-first closure: element 0 is the identity, then elements in the
    /// order they are first reached as `x·s`, generators tried in input order.
    pub fn from_permutation_generators_capped(
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(Error::InvalidGroup(format!(
                    "generator {i} has length {}, expected degree {degree}",
                    g.len()
                )));
            }
            let mut hit = vec![false; degree];
            for &x in g {
                if x >= degree || std::mem::replace(&mut hit[x], true) {
                    return Err(Error::InvalidGroup(format!(
                        "generator {i} is not a permutation of [0, {degree})"
                    )));
                }
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut perms = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        // times_gen[x][s] = x·s; parent[y] = (x, s) with y = x·s first reached.
        let mut times_gen: Vec<Vec<usize>> = Vec::new();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None];
        let mut head = 0;
        while head < perms.len() {
            let mut row = Vec::with_capacity(generators.len());
            for (s, g) in generators.iter().enumerate() {
                let composed: Vec<usize> = (0..degree).map(|x| perms[head][g[x]]).collect();
                let next = perms.len();
                let id = *index.entry(composed.clone()).or_insert(next);
                if id == next {
                    if next >= cap {
                        return Err(Error::SizeLimit {
                            what: "group order",
                            requested: next as u128 + 1,
                            limit: cap as u128,
                        });
                    }
                    perms.push(composed);
                    parent.push(Some((head, s)));
                }
                row.push(id);
            }
            times_gen.push(row);
            head += 1;
        }
        let n = perms.len();
        let mut product = vec![0; n * n];
        for x in 0..n {
            product[x * n] = x;
            for y in 1..n {
                let (p, s) = parent[y].unwrap();
                // x·y = (x·p)·s, and p precedes y in BFS order.
                product[x * n + y] = times_gen[product[x * n + p]][s];
            }
        }
        let labels = perms.iter().map(|p| cycle_label(p)).collect();
        Ok(Self::from_product(n, product, labels))
    }

    /// `C_n`, `D_n` (order 2n, n ≥ 3), `S_n`, `A_n`, `Q8`.
    pub fn named(name: &str) -> Result<Self> {
        Self::named_capped(name, DEFAULT_ORDER_CAP)
    }

    pub fn named_capped(name: &str, cap: usize) -> Result<Self> {
        let unknown = || Error::UnknownGroup(name.to_string());
        let trimmed = name.trim();
        if trimmed.eq_ignore_ascii_case("q8") {
            return Ok(quaternion_group());
        }
        let mut chars = trimmed.chars();
        let family = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
        let param: usize = chars
            .as_str()
            .trim_start_matches('_')
            .parse()
            .map_err(|_| unknown())?;
        if param == 0 {
            return Err(unknown());
        }
        let cycle = |k: usize| -> Vec<usize> {
            (0..param)
                .map(|x| if x < k { (x + 1) % k } else { x })
                .collect()
        };
        let transposition = |a: usize, b: usize| -> Vec<usize> {
            (0..param)
                .map(|x| {
                    if x == a {
                        b
                    } else if x == b {
                        a
                    } else {
                        x
                    }
                })
                .collect()
        };
        let order_bound = |order: Option<u128>| -> Result<()> {
            match order {
                Some(o) if o <= cap as u128 => Ok(()),
                o => Err(Error::SizeLimit {
                    what: "group order",
                    requested: o.unwrap_or(u128::MAX),
                    limit: cap as u128,
                }),
            }
        };
        let factorial = |k: usize| (1..=k as u128).try_fold(1u128, |acc, i| acc.checked_mul(i));
        match family {
            'C' => {
                order_bound(Some(param as u128))?;
                let gens = if param > 1 {
                    vec![cycle(param)]
                } else {
                    vec![]
                };
                Self::from_permutation_generators_capped(param, &gens, cap)
            }
            'D' => {
                if param < 3 {
                    return Err(unknown());
                }
                order_bound(Some(2 * param as u128))?;
                let reflection: Vec<usize> = (0..param).map(|x| (param - x) % param).collect();
                Self::from_permutation_generators_capped(param, &[cycle(param), reflection], cap)
            }
            'S' => {
                order_bound(factorial(param))?;
                let mut gens = Vec::new();
                if param >= 2 {
                    gens.push(transposition(0, 1));
                }
                if param >= 3 {
                    gens.push(cycle(param));
                }
                Self::from_permutation_generators_capped(param, &gens, cap)
            }
            'A' => {
                order_bound(factorial(param).map(|f| if param >= 2 { f / 2 } else { f }))?;
                let gens: Vec<Vec<usize>> = (2..param)
                    .map(|k| {
                        (0..param)
                            .map(|x| match x {
                                0 => 1,
                                1 => k,
                                x if x == k => 0,
                                x => x,
                            })
                            .collect()
                    })
                    .collect();
                Self::from_permutation_generators_capped(param, &gens, cap)
            }
            _ => Err(unknown()),
        }
    }

    fn from_product(order: usize, product: Vec<usize>, labels: Vec<String>) -> Self {
        let inverse = (0..order)
            .map(|a| (0..order).find(|&b| product[a * order + b] == 0).unwrap())
            .collect();
        Self {
            order,
            product,
            inverse,
            labels,
            classes: OnceLock::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + Clone {
        (0..self.order).map(GroupElement)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement(self.product[a.0 * self.order + b.0])
    }

    pub fn inv(&self, a: GroupElement) -> GroupElement {
        GroupElement(self.inverse[a.0])
    }

    /// `x·a·x⁻¹`.
    pub fn conjugate(&self, a: GroupElement, x: GroupElement) -> GroupElement {
        self.mul(self.mul(x, a), self.inv(x))
    }

    pub fn label(&self, a: GroupElement) -> &str {
        &self.labels[a.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element(&self, label: &str) -> Option<GroupElement> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(GroupElement)
    }

    /// Row-major copy of the multiplication table.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        self.product
            .chunks(self.order)
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClassification {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut class_of = vec![usize::MAX; n];
            let mut classes: Vec<Vec<GroupElement>> = Vec::new();
            for a in self.elements() {
                if class_of[a.0] != usize::MAX {
                    continue;
                }
                let id = classes.len();
                let mut members: Vec<GroupElement> = Vec::new();
                for x in self.elements() {
                    let c = self.conjugate(a, x);
                    if class_of[c.0] == usize::MAX {
                        class_of[c.0] = id;
                        members.push(c);
                    }
                }
                members.sort();
                classes.push(members);
            }
            let representatives = classes.iter().map(|c| c[0]).collect();
            ConjugacyClassification {
                class_of,
                classes,
                representatives,
            }
        })
    }

    pub fn are_conjugate(&self, a: GroupElement, b: GroupElement) -> bool {
        let classes = self.conjugacy_classes();
        classes.class_of(a) == classes.class_of(b)
    }

    /// `Z_G(a)`, ascending.
    pub fn centralizer(&self, a: GroupElement) -> Vec<GroupElement> {
        self.elements()
            .filter(|&z| self.mul(z, a) == self.mul(a, z))
            .collect()
    }

    pub fn center(&self) -> Vec<GroupElement> {
        self.elements()
            .filter(|&z| self.elements().all(|x| self.mul(z, x) == self.mul(x, z)))
            .collect()
    }
}

impl fmt::Display for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {}", self.order)
    }
}

/// 1-based cycle notation; compact `(123)` when every point is a single digit.
pub fn cycle_label(perm: &[usize]) -> String {
    let compact = perm.len() <= 9;
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = perm[x];
        }
        out.push('(');
        out.push_str(&cycle.join(if compact { "" } else { "," }));
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

fn quaternion_group() -> GroupTable {
    // Index 2u + s encodes (-1)^s·unit[u] with units 1, i, j, k.
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    let names = ["1", "i", "j", "k"];
    let mut labels = Vec::with_capacity(8);
    for name in names {
        labels.push(name.to_string());
        labels.push(if name == "1" {
            "-1".to_string()
        } else {
            format!("-{name}")
        });
    }
    let mut product = vec![0; 64];
    for a in 0..8 {
        for b in 0..8 {
            let (unit, sign) = UNIT[a / 2][b / 2];
            product[a * 8 + b] = 2 * unit + ((a % 2 + b % 2 + sign) % 2);
        }
    }
    GroupTable::from_product(8, product, labels)
}
