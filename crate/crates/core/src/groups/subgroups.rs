//! Subgroups, quotients and series of an enumerated group.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::classes::ClassData;
use super::group::{GroupData, Perm};
use super::GroupError;
use crate::exactmath::arith::{factor, prime_divisors};

/// Membership bitset over the element list of a fixed group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(Vec<u64>);

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        ElementSet(vec![0; n.div_ceil(64)])
    }

    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for i in idx {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

impl std::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A subgroup of a fixed group, with cached properties.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupHandle {
    pub members: ElementSet,
    pub order: usize,
    pub normal: bool,
    /// `Some(p)` when the order is a nontrivial power of the prime `p`.
    pub pgroup: Option<u64>,
}

impl SubgroupHandle {
    pub fn new(g: &GroupData, members: ElementSet) -> Self {
        let order = members.len();
        let normal = is_normal_set(g, &members);
        let f = factor(order as u64);
        let pgroup = if f.len() == 1 { Some(f[0].0) } else { None };
        SubgroupHandle { members, order, normal, pgroup }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.iter().collect()
    }

    /// Contains every element of the class?
    pub fn contains_class(&self, cd: &ClassData, c: usize) -> bool {
        self.contains(cd.reps[c])
    }

    pub fn is_cyclic(&self, g: &GroupData) -> bool {
        self.members.iter().any(|x| g.element_order(x) as usize == self.order)
    }
}

fn is_normal_set(g: &GroupData, s: &ElementSet) -> bool {
    s.iter().all(|x| g.generator_indices().iter().all(|&t| s.contains(g.conj(x, t))))
}

/// The subgroup generated by `gens`.
pub fn generated(g: &GroupData, gens: &[usize]) -> ElementSet {
    let n = g.order();
    let mut set = ElementSet::empty(n);
    set.insert(0);
    let mut list = vec![0usize];
    let mut head = 0;
    let gens: Vec<usize> = gens.iter().copied().filter(|&x| x != 0).collect();
    while head < list.len() {
        let x = list[head];
        for &s in &gens {
            let y = g.mul(x, s);
            if !set.contains(y) {
                set.insert(y);
                list.push(y);
            }
        }
        head += 1;
    }
    set
}

pub fn whole_group(g: &GroupData) -> SubgroupHandle {
    SubgroupHandle::new(g, ElementSet::from_indices(g.order(), 0..g.order()))
}

pub fn trivial_subgroup(g: &GroupData) -> SubgroupHandle {
    SubgroupHandle::new(g, ElementSet::from_indices(g.order(), [0]))
}

/// Product set `AB` of two subgroups, one of which normalises the other.
fn product(g: &GroupData, a: &ElementSet, b: &ElementSet) -> ElementSet {
    let mut out = ElementSet::empty(g.order());
    let bs: Vec<usize> = b.iter().collect();
    for x in a.iter() {
        for &y in &bs {
            out.insert(g.mul(x, y));
        }
    }
    out
}

/// Every normal subgroup, sorted by order then membership.
pub fn normal_subgroups(g: &GroupData, cd: &ClassData) -> Vec<SubgroupHandle> {
    let seeds: Vec<ElementSet> = {
        let mut v: Vec<ElementSet> = cd.members.iter().map(|m| generated(g, m)).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut found: HashSet<ElementSet> = seeds.iter().cloned().collect();
    let mut queue: Vec<ElementSet> = seeds.clone();
    while let Some(n) = queue.pop() {
        for s in &seeds {
            if s.is_subset(&n) {
                continue;
            }
            let p = product(g, &n, s);
            if found.insert(p.clone()) {
                queue.push(p);
            }
        }
    }
    let mut out: Vec<SubgroupHandle> = found.into_iter().map(|m| SubgroupHandle::new(g, m)).collect();
    debug_assert!(out.iter().all(|h| h.normal));
    out.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.members.cmp(&b.members)));
    out
}

/// `[A, B]` for subgroups A, B.
pub fn commutator_subgroup(g: &GroupData, a: &ElementSet, b: &ElementSet) -> ElementSet {
    let bs: Vec<usize> = b.iter().collect();
    let mut comms = ElementSet::empty(g.order());
    for x in a.iter() {
        for &y in &bs {
            comms.insert(g.comm(x, y));
        }
    }
    let gens: Vec<usize> = comms.iter().collect();
    generated(g, &gens)
}

pub fn derived_subgroup(g: &GroupData) -> SubgroupHandle {
    let all = whole_group(g).members;
    SubgroupHandle::new(g, commutator_subgroup(g, &all, &all))
}

/// Lower central series `G = γ1 > γ2 > ...` up to its stable term.
#[derive(Clone, Debug)]
pub struct CentralSeries {
    pub terms: Vec<SubgroupHandle>,
    pub nilpotent: bool,
}

impl CentralSeries {
    /// The stable term, i.e. the smallest normal subgroup with nilpotent quotient.
    pub fn stable_term(&self) -> &SubgroupHandle {
        self.terms.last().unwrap()
    }
}

pub fn lower_central_series(g: &GroupData) -> CentralSeries {
    let all = whole_group(g);
    let mut terms = vec![all.clone()];
    loop {
        let last = &terms.last().unwrap().members;
        let next = commutator_subgroup(g, last, &all.members);
        if &next == last {
            break;
        }
        terms.push(SubgroupHandle::new(g, next));
    }
    let nilpotent = terms.last().unwrap().is_trivial();
    CentralSeries { terms, nilpotent }
}

pub fn derived_series(g: &GroupData) -> Vec<SubgroupHandle> {
    let mut terms = vec![whole_group(g)];
    loop {
        let last = &terms.last().unwrap().members;
        let next = commutator_subgroup(g, last, last);
        if &next == last {
            break;
        }
        terms.push(SubgroupHandle::new(g, next));
    }
    terms
}

pub fn center(g: &GroupData) -> SubgroupHandle {
    let gens = g.generator_indices();
    let members = ElementSet::from_indices(
        g.order(),
        (0..g.order()).filter(|&x| gens.iter().all(|&s| g.mul(x, s) == g.mul(s, x))),
    );
    SubgroupHandle::new(g, members)
}

/// A quotient `G/N` realised as the permutation action on cosets.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: GroupData,
    /// Quotient element index of the image of each element of G.
    pub image: Vec<usize>,
    /// Class of G ↦ class of G/N.
    pub fusion: Vec<usize>,
}

pub fn quotient_with_fusion(
    g: &GroupData,
    cd: &ClassData,
    n: &SubgroupHandle,
    qcd_out: &mut Option<ClassData>,
) -> Result<Quotient, GroupError> {
    if !n.normal {
        return Err(GroupError::NotNormal);
    }
    if n.order <= 1 || n.order >= g.order() {
        return Err(GroupError::ImproperNormalSubgroup { order: n.order });
    }
    let size = g.order();
    let nelts = n.elements();
    let mut coset = vec![usize::MAX; size];
    let mut reps = Vec::new();
    for x in 0..size {
        if coset[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &m in &nelts {
            coset[g.mul(m, x)] = id;
        }
    }
    let index = reps.len();
    let action = |x: usize| -> Perm {
        let imgs: Vec<u16> = reps.iter().map(|&r| coset[g.mul(r, x)] as u16).collect();
        Perm::from_images(imgs).expect("coset action is a permutation")
    };
    let gens: Vec<Perm> = g.generator_indices().iter().map(|&s| action(s)).collect();
    let name = format!("{}/N{}", g.name(), n.order);
    let q = GroupData::from_generators(&name, index, gens)?;
    let lookup: HashMap<Perm, usize> = q.elements().iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let coset_image: Vec<usize> = reps.iter().map(|&r| lookup[&action(r)]).collect();
    let image: Vec<usize> = (0..size).map(|x| coset_image[coset[x]]).collect();
    let qcd = ClassData::compute(&q);
    let fusion = cd.reps.iter().map(|&r| qcd.class_of[image[r]]).collect();
    *qcd_out = Some(qcd);
    Ok(Quotient { group: q, image, fusion })
}

/// Boolean structure flags used by the theoretical sieve.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StructureFlags {
    pub nilpotent: bool,
    pub solvable: bool,
    pub cyclic_by_abelian: bool,
    /// Derived subgroup is a p-group, hence inside a Sylow p-subgroup.
    pub derived_in_sylow: bool,
    /// Order of a complement H when G ≅ C2 × H.
    pub c2_direct_factor: Option<usize>,
    pub exponent: u64,
}

pub fn structure_predicates(g: &GroupData, cd: &ClassData) -> StructureFlags {
    let lcs = lower_central_series(g);
    let derived = derived_subgroup(g);
    let solvable = derived_series(g).last().unwrap().is_trivial();
    let normals = normal_subgroups(g, cd);
    let cyclic_by_abelian = normals
        .iter()
        .any(|n| derived.members.is_subset(&n.members) && n.is_cyclic(g));
    let derived_in_sylow = derived.order == 1 || derived.pgroup.is_some();
    let c2_direct_factor = c2_complement(g, &normals).map(|h| h.order);
    StructureFlags {
        nilpotent: lcs.nilpotent,
        solvable,
        cyclic_by_abelian,
        derived_in_sylow,
        c2_direct_factor,
        exponent: g.exponent(),
    }
}

/// A normal subgroup H of index 2 avoiding some central involution, so that G = C2 × H.
pub fn c2_complement(g: &GroupData, normals: &[SubgroupHandle]) -> Option<SubgroupHandle> {
    let z = center(g);
    let involutions: Vec<usize> = z.members.iter().filter(|&x| g.element_order(x) == 2).collect();
    normals
        .iter()
        .filter(|h| h.order * 2 == g.order())
        .find(|h| involutions.iter().any(|&t| !h.contains(t)))
        .cloned()
}

/// Sylow subgroups are all normal iff the p-elements number exactly |G|_p for every p.
pub fn all_sylows_normal(g: &GroupData) -> bool {
    prime_divisors(g.order() as u64).into_iter().all(|p| {
        let pp = crate::exactmath::arith::p_part(g.order() as u64, p);
        let count = (0..g.order()).filter(|&x| pp % g.element_order(x) as u64 == 0).count() as u64;
        count == pp
    })
}

/// Restricts G to the elements of `h`, as a new permutation group.
pub fn subgroup_as_group(g: &GroupData, h: &SubgroupHandle, name: &str) -> Result<GroupData, GroupError> {
    let gens = small_generating_set(g, &h.elements());
    let perms = gens.iter().map(|&x| g.element(x).clone()).collect();
    GroupData::from_generators(name, g.degree(), perms)
}

/// Greedy generating set of the subgroup with the given elements.
pub fn small_generating_set(g: &GroupData, elements: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut cur = generated(g, &[]);
    let mut sorted: Vec<usize> = elements.to_vec();
    // larger orders first tends to give fewer generators
    sorted.sort_by_key(|&x| std::cmp::Reverse(g.element_order(x)));
    for x in sorted {
        if !cur.contains(x) {
            gens.push(x);
            cur = generated(g, &gens);
            if cur.len() == elements.len() {
                break;
            }
        }
    }
    gens
}

/// Isomorphism test by backtracking over generator images.
pub fn is_isomorphic(a: &GroupData, b: &GroupData) -> bool {
    if a.order() != b.order() {
        return false;
    }
    let (ca, cb) = (ClassData::compute(a), ClassData::compute(b));
    let stats = |cd: &ClassData| {
        let mut v: Vec<(u64, u64)> = cd.classes.iter().map(|c| (c.order, c.size)).collect();
        v.sort();
        v
    };
    if stats(&ca) != stats(&cb) {
        return false;
    }
    let all: Vec<usize> = (0..a.order()).collect();
    let gens = small_generating_set(a, &all);
    let class_sig = |cd: &ClassData, x: usize| (cd.classes[cd.class_of[x]].order, cd.classes[cd.class_of[x]].size);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let sig = class_sig(&ca, s);
            let pool: Vec<usize> = if i == 0 { cb.reps.clone() } else { (0..b.order()).collect() };
            pool.into_iter().filter(|&y| class_sig(&cb, y) == sig).collect()
        })
        .collect();
    let mut choice = vec![0usize; gens.len()];
    fn extend(a: &GroupData, b: &GroupData, gens: &[usize], imgs: &[usize]) -> bool {
        let n = a.order();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[0] = 0;
        used[0] = true;
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (k, &s) in gens.iter().enumerate() {
                let y = a.mul(x, s);
                let fy = b.mul(map[x], imgs[k]);
                if map[y] == usize::MAX {
                    if used[fy] {
                        return false;
                    }
                    map[y] = fy;
                    used[fy] = true;
                    queue.push(y);
                } else if map[y] != fy {
                    return false;
                }
            }
        }
        queue.len() == n
    }
    fn search(
        a: &GroupData,
        b: &GroupData,
        gens: &[usize],
        candidates: &[Vec<usize>],
        depth: usize,
        choice: &mut Vec<usize>,
    ) -> bool {
        if depth == gens.len() {
            return extend(a, b, gens, choice);
        }
        for &y in &candidates[depth] {
            choice[depth] = y;
            if search(a, b, gens, candidates, depth + 1, choice) {
                return true;
            }
        }
        false
    }
    search(a, b, &gens, &candidates, 0, &mut choice)
}
