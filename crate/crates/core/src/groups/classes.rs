use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::group::GroupData;
use crate::exactmath::arith::{divisors, prime_divisors};

/// Metadata of one conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub label: String,
    pub size: u64,
    pub order: u64,
}

/// Conjugacy classes of a group, with power maps.
#[derive(Clone, Debug)]
pub struct ClassData {
    pub group_order: u64,
    pub classes: Vec<ClassInfo>,
    /// Representative element index of each class (the smallest index in the class).
    pub reps: Vec<usize>,
    /// Class index of every element.
    pub class_of: Vec<usize>,
    /// Element indices of every class.
    pub members: Vec<Vec<usize>>,
    /// `powermaps[p][c]` is the class of the p-th powers of class `c`, for each prime p dividing |G|.
    pub powermaps: BTreeMap<u64, Vec<usize>>,
    pub inverse_map: Vec<usize>,
}

/// Letters used after the element order in class and character labels.
pub fn letter_suffix(i: usize) -> String {
    const LOWER: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    const UPPER: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    if i < 26 {
        (LOWER[i] as char).to_string()
    } else if i < 52 {
        (UPPER[i - 26] as char).to_string()
    } else {
        format!("{}{}", letter_suffix(i % 52), i / 52)
    }
}

impl ClassData {
    pub fn compute(g: &GroupData) -> Self {
        let n = g.order();
        let mut class_of = vec![usize::MAX; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = raw.len();
            let mut orbit = vec![x];
            class_of[x] = id;
            let mut head = 0;
            while head < orbit.len() {
                let y = orbit[head];
                for &s in g.generator_indices() {
                    let z = g.conj(y, s);
                    if class_of[z] == usize::MAX {
                        class_of[z] = id;
                        orbit.push(z);
                    }
                }
                head += 1;
            }
            orbit.sort_unstable();
            raw.push(orbit);
        }
        // Sort by (element order, class size, smallest element index).
        raw.sort_by_key(|c| (g.element_order(c[0]), c.len(), c[0]));
        for (id, c) in raw.iter().enumerate() {
            for &x in c {
                class_of[x] = id;
            }
        }
        let mut classes = Vec::with_capacity(raw.len());
        let mut per_order: BTreeMap<u32, usize> = BTreeMap::new();
        for c in &raw {
            let o = g.element_order(c[0]);
            let k = per_order.entry(o).or_insert(0);
            classes.push(ClassInfo { label: format!("{o}{}", letter_suffix(*k)), size: c.len() as u64, order: o as u64 });
            *k += 1;
        }
        let reps: Vec<usize> = raw.iter().map(|c| c[0]).collect();
        let mut powermaps = BTreeMap::new();
        for p in prime_divisors(n as u64) {
            powermaps.insert(p, reps.iter().map(|&r| class_of[g.pow(r, p)]).collect());
        }
        let inverse_map = reps.iter().map(|&r| class_of[g.inv(r)]).collect();
        ClassData { group_order: n as u64, classes, reps, class_of, members: raw, powermaps, inverse_map }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn label(&self, c: usize) -> &str {
        &self.classes[c].label
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    pub fn centralizer_order(&self, c: usize) -> u64 {
        self.group_order / self.classes[c].size
    }

    /// Classes whose element order divides `n`.
    pub fn classes_dividing(&self, n: u64) -> Vec<usize> {
        (0..self.len()).filter(|&c| n % self.classes[c].order == 0).collect()
    }

    /// Divisors of `n` for which some class has that element order.
    pub fn realised_orders(&self, n: u64) -> Vec<u64> {
        divisors(n).into_iter().filter(|d| self.classes.iter().any(|c| c.order == *d)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::group::Perm;

    fn s3() -> GroupData {
        let a = Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let b = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        GroupData::from_generators("S3", 3, vec![a, b]).unwrap()
    }

    /// Orbit computation oracle: conjugate by every element instead of generators.
    fn brute_classes(g: &GroupData) -> Vec<(u32, usize)> {
        let n = g.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..n).map(|y| g.conj(x, y)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push((g.element_order(x), orbit.len()));
        }
        out.sort();
        out
    }

    #[test]
    fn s3_classes() {
        let g = s3();
        let cd = ClassData::compute(&g);
        let got: Vec<(u64, u64)> = cd.classes.iter().map(|c| (c.order, c.size)).collect();
        assert_eq!(got, vec![(1, 1), (2, 3), (3, 2)]);
        let mut brute = brute_classes(&g);
        brute.sort();
        assert_eq!(brute, vec![(1, 1), (2, 3), (3, 2)]);
        assert_eq!(cd.classes.iter().map(|c| c.label.as_str()).collect::<Vec<_>>(), vec!["1a", "2a", "3a"]);
        assert_eq!(cd.powermaps[&2], vec![0, 0, 2]);
        assert_eq!(cd.powermaps[&3], vec![0, 1, 0]);
    }

    #[test]
    fn abelian_groups_have_singleton_classes() {
        let a = Perm::from_cycles(7, &[&[1, 2, 3, 4], &[5, 6, 7]]).unwrap();
        let g = GroupData::from_generators("C12", 7, vec![a]).unwrap();
        let cd = ClassData::compute(&g);
        assert_eq!(cd.len(), 12);
        assert!(cd.classes.iter().all(|c| c.size == 1));
    }
}
