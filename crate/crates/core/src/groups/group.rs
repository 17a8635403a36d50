use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GroupError;

/// Largest group order the engine will enumerate.
pub const MAX_ORDER: usize = 300;

/// A permutation of `0..degree`, acting on the right: `i^(gh) = (i^g)^h`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u16>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u16).collect())
    }

    /// From 0-based images; fails unless the images form a bijection.
    pub fn from_images(images: Vec<u16>) -> Result<Self, GroupError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return Err(GroupError::NotAPermutation(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// From 1-based images as used in the JSON files.
    pub fn from_one_based(images: &[usize]) -> Result<Self, GroupError> {
        if images.iter().any(|&i| i == 0 || i > images.len()) {
            return Err(GroupError::NotAPermutation(format!("{images:?}")));
        }
        Self::from_images(images.iter().map(|&i| (i - 1) as u16).collect())
    }

    /// Builds a permutation of the given degree from disjoint 1-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, GroupError> {
        let mut img: Vec<u16> = (0..degree as u16).collect();
        for c in cycles {
            for (k, &p) in c.iter().enumerate() {
                let q = c[(k + 1) % c.len()];
                if p == 0 || p > degree || q == 0 || q > degree {
                    return Err(GroupError::NotAPermutation(format!("cycle {c:?} outside degree {degree}")));
                }
                img[p - 1] = (q - 1) as u16;
            }
        }
        Self::from_images(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize + 1).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u16;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for s in 0..self.0.len() {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = s;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, ",")?;
                }
                first = false;
                write!(f, "{}", i + 1)?;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A finite permutation group with every element enumerated.
///
/// Elements are numbered in breadth-first order from the identity (index 0)
/// along right multiplication by the generators, so the numbering is a
/// deterministic function of the generator list.
#[derive(Clone)]
pub struct GroupData {
    name: String,
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    /// `mult[i * n + j]` is the index of `elements[i] * elements[j]`.
    mult: Vec<u16>,
    inv: Vec<u16>,
    orders: Vec<u32>,
    /// Generators as element indices.
    gen_idx: Vec<usize>,
}

impl GroupData {
    pub fn from_generators(name: &str, degree: usize, generators: Vec<Perm>) -> Result<Self, GroupError> {
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(GroupError::NotAPermutation(format!("generator degree differs from {degree}")));
        }
        let id = Perm::identity(degree);
        let mut index: HashMap<Perm, usize> = HashMap::new();
        let mut elements = vec![id.clone()];
        index.insert(id, 0);
        let mut head = 0;
        while head < elements.len() {
            for g in &generators {
                let p = elements[head].then(g);
                if !index.contains_key(&p) {
                    if elements.len() >= MAX_ORDER {
                        return Err(GroupError::OrderCapExceeded { cap: MAX_ORDER });
                    }
                    index.insert(p.clone(), elements.len());
                    elements.push(p);
                }
            }
            head += 1;
        }
        let n = elements.len();
        let mut mult = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                mult[i * n + j] = index[&elements[i].then(&elements[j])] as u16;
            }
        }
        let inv: Vec<u16> = elements.iter().map(|e| index[&e.inverse()] as u16).collect();
        let mut orders = vec![0u32; n];
        for i in 0..n {
            let mut k = 1;
            let mut x = i;
            while x != 0 {
                x = mult[x * n + i] as usize;
                k += 1;
            }
            orders[i] = if i == 0 { 1 } else { k };
        }
        let gen_idx = generators.iter().map(|g| index[g]).collect();
        Ok(GroupData { name: name.to_string(), degree, generators, elements, mult, inv, orders, gen_idx })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.gen_idx
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.elements.len() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let o = self.orders[a] as u64;
        let mut x = 0;
        for _ in 0..(k % o) {
            x = self.mul(x, a);
        }
        x
    }

    /// `b^-1 a b`
    #[inline]
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(b), a), b)
    }

    /// `a^-1 b^-1 a b`
    #[inline]
    pub fn comm(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn element_order(&self, a: usize) -> u32 {
        self.orders[a]
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |e, &o| crate::exactmath::arith::lcm(e, o as u64))
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.elements.iter().position(|e| e == p)
    }

    pub fn is_abelian(&self) -> bool {
        self.gen_idx.iter().all(|&a| self.gen_idx.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }
}

impl fmt::Debug for GroupData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupData({}, order {}, generators {:?})", self.name, self.order(), self.generators)
    }
}

/// Group input file: `{"name": str, "degree": int, "generators": [[images, 1-based]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn build(&self) -> Result<GroupData, GroupError> {
        let gens = self
            .generators
            .iter()
            .map(|g| {
                if g.len() != self.degree {
                    return Err(GroupError::NotAPermutation(format!(
                        "generator of length {} in a group of degree {}",
                        g.len(),
                        self.degree
                    )));
                }
                Perm::from_one_based(g)
            })
            .collect::<Result<Vec<_>, _>>()?;
        GroupData::from_generators(&self.name, self.degree, gens)
    }

    pub fn from_group(g: &GroupData) -> Self {
        GroupFile {
            name: g.name().to_string(),
            degree: g.degree(),
            generators: g.generators().iter().map(|p| p.one_based()).collect(),
        }
    }
}
