//! Table automorphisms: class permutations preserving orders, sizes, power maps and the set of rows.

use super::chartable::CharacterTable;
use super::GroupError;

/// Upper bound on the number of automorphisms enumerated.
pub const AUTOMORPHISM_CAP: usize = 200_000;

/// A table automorphism: `classes[c]` is the image of class `c`, `characters[i]` the image of row `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TableAutomorphism {
    pub classes: Vec<usize>,
    pub characters: Vec<usize>,
}

impl TableAutomorphism {
    pub fn identity(t: &CharacterTable) -> Self {
        TableAutomorphism {
            classes: (0..t.num_classes()).collect(),
            characters: (0..t.num_characters()).collect(),
        }
    }
}

/// All table automorphisms, identity first.
pub fn table_automorphisms(t: &CharacterTable) -> Result<Vec<TableAutomorphism>, GroupError> {
    let r = t.num_classes();
    // classes are tried in an order where power images come first, so power-map checks fire early
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by_key(|&c| (t.class_order(c), c));
    let mut search = AutSearch { t, order, image: vec![usize::MAX; r], used: vec![false; r], out: Vec::new() };
    search.run(0)?;
    let mut out = search.out;
    out.sort_by(|a, b| a.classes.cmp(&b.classes));
    Ok(out)
}

struct AutSearch<'a> {
    t: &'a CharacterTable,
    order: Vec<usize>,
    image: Vec<usize>,
    used: Vec<bool>,
    out: Vec<TableAutomorphism>,
}

impl AutSearch<'_> {
    fn run(&mut self, depth: usize) -> Result<(), GroupError> {
        let t = self.t;
        if depth == self.order.len() {
            let chars = row_permutation(t, &self.image).expect("checked during search");
            self.out.push(TableAutomorphism { classes: self.image.clone(), characters: chars });
            if self.out.len() > AUTOMORPHISM_CAP {
                return Err(GroupError::InvalidTable(format!("more than {AUTOMORPHISM_CAP} table automorphisms")));
            }
            return Ok(());
        }
        let c = self.order[depth];
        for d in 0..t.num_classes() {
            if self.used[d] || t.class_order(d) != t.class_order(c) || t.class_size(d) != t.class_size(c) {
                continue;
            }
            self.image[c] = d;
            if self.consistent(c) {
                self.used[d] = true;
                self.run(depth + 1)?;
                self.used[d] = false;
            }
            self.image[c] = usize::MAX;
        }
        Ok(())
    }

    /// Power maps commute on assigned classes and every row still has a partner on the assigned columns.
    fn consistent(&self, c: usize) -> bool {
        let t = self.t;
        for map in t.powermaps.values() {
            let pc = map[c];
            if self.image[pc] != usize::MAX && map[self.image[c]] != self.image[pc] {
                return false;
            }
        }
        let assigned: Vec<usize> = (0..t.num_classes()).filter(|&k| self.image[k] != usize::MAX).collect();
        (0..t.num_characters()).all(|i| {
            (0..t.num_characters()).any(|j| assigned.iter().all(|&k| t.irreducibles[j][self.image[k]] == t.irreducibles[i][k]))
        })
    }
}

/// The row permutation induced by a class permutation, if it maps the set of rows onto itself.
pub fn row_permutation(t: &CharacterTable, classes: &[usize]) -> Option<Vec<usize>> {
    let n = t.num_characters();
    let mut used = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let j = (0..n).find(|&j| !used[j] && (0..t.num_classes()).all(|k| t.irreducibles[j][classes[k]] == t.irreducibles[i][k]))?;
        used[j] = true;
        out.push(j);
    }
    Some(out)
}
