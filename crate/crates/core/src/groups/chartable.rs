//! Ordinary character tables: Dixon–Schneider computation, validation and file format.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::classes::{letter_suffix, ClassData, ClassInfo};
use super::group::GroupData;
use super::GroupError;
use crate::exactmath::arith::{factor, gcd, inv_mod, is_prime, lcm, mul_mod, pow_mod, prime_divisors};
use crate::exactmath::cyclotomic::cyclotomic_polynomial;
use crate::exactmath::Cyclotomic;

/// An ordinary character table with its class metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterTable {
    pub name: String,
    pub group_order: u64,
    pub classes: Vec<ClassInfo>,
    /// `powermaps[p][c]`: class of p-th powers, for every prime p dividing the group order.
    pub powermaps: BTreeMap<u64, Vec<usize>>,
    pub inverse_map: Vec<usize>,
    /// Character labels, `"{degree}{letter}"`.
    pub labels: Vec<String>,
    /// One row per irreducible character, one column per class.
    pub irreducibles: Vec<Vec<Cyclotomic>>,
}

impl CharacterTable {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn num_characters(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn degree(&self, chi: usize) -> u64 {
        self.irreducibles[chi][0].as_integer().and_then(|d| u64::try_from(d).ok()).expect("degree is a positive integer")
    }

    pub fn degrees(&self) -> Vec<u64> {
        (0..self.num_characters()).map(|i| self.degree(i)).collect()
    }

    pub fn value(&self, chi: usize, class: usize) -> &Cyclotomic {
        &self.irreducibles[chi][class]
    }

    pub fn class_label(&self, c: usize) -> &str {
        &self.classes[c].label
    }

    pub fn find_class(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    pub fn find_character(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn class_order(&self, c: usize) -> u64 {
        self.classes[c].order
    }

    pub fn class_size(&self, c: usize) -> u64 {
        self.classes[c].size
    }

    pub fn exponent(&self) -> u64 {
        self.classes.iter().fold(1, |e, c| lcm(e, c.order))
    }

    /// Classes whose element order divides `n`.
    pub fn classes_dividing(&self, n: u64) -> Vec<usize> {
        (0..self.num_classes()).filter(|&c| n % self.classes[c].order == 0).collect()
    }

    /// Class of `x^k` for `x` in class `c`.
    pub fn power_class(&self, c: usize, k: i64) -> usize {
        let o = self.classes[c].order;
        let k = k.rem_euclid(o as i64) as u64;
        if k == 0 {
            return 0;
        }
        let mut cur = c;
        for (p, e) in factor(k) {
            for _ in 0..e {
                cur = self.prime_power_class(cur, p);
            }
        }
        cur
    }

    fn prime_power_class(&self, c: usize, p: u64) -> usize {
        if let Some(map) = self.powermaps.get(&p) {
            return map[c];
        }
        // p is coprime to |G|: x^p is the Galois conjugate column.
        let col: Vec<Cyclotomic> = self
            .irreducibles
            .iter()
            .map(|row| row[c].galois(p as i64).expect("prime coprime to the group order"))
            .collect();
        (0..self.num_classes())
            .find(|&d| self.classes[d].order == self.classes[c].order && self.irreducibles.iter().zip(&col).all(|(r, v)| &r[d] == v))
            .expect("Galois conjugate column exists")
    }

    /// Classes with the given element order.
    pub fn classes_of_order(&self, o: u64) -> Vec<usize> {
        (0..self.num_classes()).filter(|&c| self.classes[c].order == o).collect()
    }

    /// Exact orthogonality check; returns the first failing pair.
    pub fn validate(&self) -> Result<(), GroupError> {
        let r = self.num_classes();
        if self.irreducibles.len() != r {
            return Err(GroupError::TableValidation(format!("{} characters for {r} classes", self.irreducibles.len())));
        }
        if self.irreducibles.iter().any(|row| row.len() != r) || self.labels.len() != r || self.inverse_map.len() != r {
            return Err(GroupError::TableValidation("row length mismatch".into()));
        }
        let total: u64 = self.classes.iter().map(|c| c.size).sum();
        if total != self.group_order || self.classes.iter().any(|c| self.group_order % c.size != 0) {
            return Err(GroupError::TableValidation("class sizes do not sum to the group order".into()));
        }
        let e = self.exponent();
        let rows: Vec<Vec<RootCounts>> = self
            .irreducibles
            .iter()
            .map(|row| row.iter().map(|v| RootCounts::from_value(v, e)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| GroupError::TableValidation("a value is not a sum of roots of unity".into()))?;
        let checker = OrthoChecker::new(e);
        for i in 0..r {
            for j in i..r {
                let mut acc = vec![0i128; e as usize];
                for k in 0..r {
                    rows[i][k].accumulate_product(&rows[j][k], self.classes[k].size as i128, &mut acc);
                }
                let expected = if i == j { self.group_order as i128 } else { 0 };
                if !checker.equals_integer(&acc, expected) {
                    return Err(GroupError::TableValidation(format!(
                        "rows {} and {} are not orthogonal",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        for k in 0..r {
            for l in k..r {
                let mut acc = vec![0i128; e as usize];
                for row in &rows {
                    row[k].accumulate_product(&row[l], 1, &mut acc);
                }
                let expected = if k == l { (self.group_order / self.classes[k].size) as i128 } else { 0 };
                if !checker.equals_integer(&acc, expected) {
                    return Err(GroupError::TableValidation(format!(
                        "columns {} and {} are not orthogonal",
                        self.classes[k].label, self.classes[l].label
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that power maps commute with the table: χ(x^p) = χ applied to the p-th power class.
    pub fn validate_powermaps(&self) -> Result<(), GroupError> {
        for p in prime_divisors(self.group_order) {
            let Some(map) = self.powermaps.get(&p) else {
                return Err(GroupError::InvalidTable(format!("missing power map for prime {p}")));
            };
            if map.len() != self.num_classes() {
                return Err(GroupError::InvalidTable(format!("power map {p} has wrong length")));
            }
            for (c, &d) in map.iter().enumerate() {
                let o = self.classes[c].order;
                let expected = o / gcd(o, p);
                if d >= self.num_classes() || self.classes[d].order != expected {
                    return Err(GroupError::InvalidTable(format!("power map {p} sends {} to a wrong order", self.classes[c].label)));
                }
            }
        }
        Ok(())
    }

    pub fn to_file(&self) -> TableFile {
        TableFile {
            name: self.name.clone(),
            order: self.group_order,
            classes: self.classes.clone(),
            powermaps: self.powermaps.iter().map(|(p, m)| (p.to_string(), m.clone())).collect(),
            characters: Some(self.labels.clone()),
            irreducibles: self.irreducibles.clone(),
        }
    }

    pub fn from_file(f: TableFile) -> Result<Self, GroupError> {
        let mut powermaps = BTreeMap::new();
        for (k, v) in f.powermaps {
            let p: u64 = k.parse().map_err(|_| GroupError::InvalidTable(format!("bad power map key {k}")))?;
            if !is_prime(p) {
                return Err(GroupError::InvalidTable(format!("power map key {p} is not prime")));
            }
            powermaps.insert(p, v);
        }
        let r = f.classes.len();
        if f.irreducibles.iter().any(|row| row.len() != r) {
            return Err(GroupError::InvalidTable("row length differs from the class count".into()));
        }
        let labels = match f.characters {
            Some(l) => l,
            None => default_character_labels(&f.irreducibles),
        };
        let inverse_map = (0..r)
            .map(|c| {
                let conj: Vec<Cyclotomic> = f.irreducibles.iter().map(|row| row[c].conj()).collect();
                (0..r)
                    .find(|&d| f.irreducibles.iter().zip(&conj).all(|(row, v)| &row[d] == v))
                    .ok_or_else(|| GroupError::InvalidTable("no column matches a complex conjugate".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let t = CharacterTable {
            name: f.name,
            group_order: f.order,
            classes: f.classes,
            powermaps,
            inverse_map,
            labels,
            irreducibles: f.irreducibles,
        };
        t.validate()?;
        t.validate_powermaps()?;
        Ok(t)
    }
}

/// Character-table file format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableFile {
    pub name: String,
    pub order: u64,
    pub classes: Vec<ClassInfo>,
    pub powermaps: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characters: Option<Vec<String>>,
    pub irreducibles: Vec<Vec<Cyclotomic>>,
}

fn default_character_labels(rows: &[Vec<Cyclotomic>]) -> Vec<String> {
    let mut per_degree: BTreeMap<String, usize> = BTreeMap::new();
    rows.iter()
        .map(|row| {
            let d = row[0].to_string();
            let k = per_degree.entry(d.clone()).or_insert(0);
            let l = format!("{d}{}", letter_suffix(*k));
            *k += 1;
            l
        })
        .collect()
}

/// A value written as counts of e-th roots of unity, sparse.
#[derive(Clone, Debug)]
struct RootCounts(Vec<(u32, i64)>);

impl RootCounts {
    /// Character values are sums of roots of unity; recover the counts from the power-basis coefficients.
    fn from_value(v: &Cyclotomic, e: u64) -> Option<Self> {
        let e32 = e as u32;
        if e32 % v.conductor() != 0 {
            return None;
        }
        let dense = v.dense_in(e32);
        let mut out = Vec::new();
        for (i, c) in dense.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.is_integer() {
                return None;
            }
            let n: i64 = c.to_integer().try_into().ok()?;
            out.push((i as u32, n));
        }
        Some(RootCounts(out))
    }

    /// `acc += weight * self * conj(other)` as root counts modulo e.
    fn accumulate_product(&self, other: &RootCounts, weight: i128, acc: &mut [i128]) {
        let e = acc.len() as i64;
        for &(a, x) in &self.0 {
            for &(b, y) in &other.0 {
                let t = (a as i64 - b as i64).rem_euclid(e) as usize;
                acc[t] += weight * x as i128 * y as i128;
            }
        }
    }
}

use num_traits::Zero;

/// Decides `Σ c_t ζ_e^t == N` by reduction modulo the e-th cyclotomic polynomial.
struct OrthoChecker {
    e: usize,
    phi: Vec<i64>,
}

impl OrthoChecker {
    fn new(e: u64) -> Self {
        OrthoChecker { e: e as usize, phi: cyclotomic_polynomial(e as u32).to_vec() }
    }

    fn equals_integer(&self, acc: &[i128], n: i128) -> bool {
        let mut c = acc.to_vec();
        c[0] -= n;
        let deg = self.phi.len() - 1;
        for top in (deg..self.e).rev() {
            let lead = c[top];
            if lead == 0 {
                continue;
            }
            let shift = top - deg;
            for (i, &pc) in self.phi.iter().enumerate() {
                match (pc as i128).checked_mul(lead).and_then(|m| c[shift + i].checked_sub(m)) {
                    Some(v) => c[shift + i] = v,
                    None => return self.slow_equals(acc, n),
                }
            }
        }
        c.iter().all(|&x| x == 0)
    }

    fn slow_equals(&self, acc: &[i128], n: i128) -> bool {
        let terms: Vec<(u32, crate::exactmath::Rational)> = acc
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(t, &x)| (t as u32, crate::exactmath::Rational::from_integer(x.into())))
            .collect();
        let v = Cyclotomic::from_exponent_terms(self.e as u32, &terms);
        v.as_integer() == Some(n.into())
    }
}

/// Smallest prime q ≡ 1 mod e with q > 2·√order·e.
pub fn dixon_prime(order: u64, e: u64) -> u64 {
    let bound = 2.0 * (order as f64).sqrt() * e as f64;
    let mut q = (bound.floor() as u64 / e) * e + 1;
    while (q as f64) <= bound || !is_prime(q) {
        q += e;
    }
    q
}

/// An element of multiplicative order exactly `e` modulo the prime `q`.
fn primitive_root_of_order(e: u64, q: u64) -> u64 {
    let ps = prime_divisors(e);
    (2..q)
        .map(|g| pow_mod(g, (q - 1) / e, q))
        .find(|&z| ps.iter().all(|&p| pow_mod(z, e / p, q) != 1))
        .expect("q ≡ 1 mod e")
}

/// Dense matrices over F_q used during eigenspace splitting.
mod modq {
    use super::{inv_mod, mul_mod};

    pub fn sub(a: u64, b: u64, q: u64) -> u64 {
        (a + q - b) % q
    }

    /// Row echelon basis of the span of `vecs` (reduced, pivots normalised to 1).
    pub fn echelon(mut vecs: Vec<Vec<u64>>, q: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
        let n = vecs.first().map_or(0, |v| v.len());
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..vecs.len()).find(|&i| vecs[i][col] != 0) else { continue };
            vecs.swap(row, p);
            let inv = inv_mod(vecs[row][col], q).unwrap();
            for x in vecs[row].iter_mut() {
                *x = mul_mod(*x, inv, q);
            }
            for i in 0..vecs.len() {
                if i != row && vecs[i][col] != 0 {
                    let f = vecs[i][col];
                    for k in 0..n {
                        let t = mul_mod(f, vecs[row][k], q);
                        vecs[i][k] = sub(vecs[i][k], t, q);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        vecs.truncate(row);
        (vecs, pivots)
    }

    /// Kernel basis of a d×d matrix.
    pub fn kernel(a: &[Vec<u64>], q: u64) -> Vec<Vec<u64>> {
        let d = a.len();
        let (rref, pivots) = echelon(a.to_vec(), q);
        let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; d];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (q - rref[r][f]) % q;
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial (low degree first) via Hessenberg reduction.
    pub fn charpoly(mut h: Vec<Vec<u64>>, q: u64) -> Vec<u64> {
        let n = h.len();
        for j in 0..n.saturating_sub(2) {
            let Some(i) = (j + 1..n).find(|&i| h[i][j] != 0) else { continue };
            if i != j + 1 {
                h.swap(i, j + 1);
                for row in h.iter_mut() {
                    row.swap(i, j + 1);
                }
            }
            let inv = inv_mod(h[j + 1][j], q).unwrap();
            for i in j + 2..n {
                if h[i][j] == 0 {
                    continue;
                }
                let u = mul_mod(h[i][j], inv, q);
                for k in 0..n {
                    let t = mul_mod(u, h[j + 1][k], q);
                    h[i][k] = sub(h[i][k], t, q);
                }
                for row in h.iter_mut() {
                    let t = mul_mod(u, row[i], q);
                    row[j + 1] = (row[j + 1] + t) % q;
                }
            }
        }
        // p[m] is the charpoly of the leading m×m block
        let mut p: Vec<Vec<u64>> = vec![vec![1]];
        for m in 1..=n {
            let hm = h[m - 1][m - 1];
            let prev = &p[m - 1];
            let mut next = vec![0u64; m + 1];
            for (k, &c) in prev.iter().enumerate() {
                next[k + 1] = (next[k + 1] + c) % q;
                next[k] = sub(next[k], mul_mod(hm, c, q), q);
            }
            let mut t = 1u64;
            for i in 1..m {
                t = mul_mod(t, h[m - i][m - i - 1], q);
                let coef = mul_mod(t, h[m - i - 1][m - 1], q);
                for (k, &c) in p[m - i - 1].iter().enumerate() {
                    next[k] = sub(next[k], mul_mod(coef, c, q), q);
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    pub fn eval(poly: &[u64], x: u64, q: u64) -> u64 {
        poly.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, q) + c) % q)
    }
}

/// Ordinary character table by the class-algebra eigenvector method.
pub fn dixon_character_table(g: &GroupData, cd: &ClassData) -> Result<CharacterTable, GroupError> {
    let r = cd.len();
    let order = g.order() as u64;
    let e = g.exponent();
    let q = dixon_prime(order, e);
    let z = primitive_root_of_order(e, q);
    let sizes: Vec<u64> = cd.classes.iter().map(|c| c.size).collect();

    // m[j][i][k] = #{x ∈ C_j : x⁻¹ g_k ∈ C_i}
    let m: Vec<Vec<Vec<u64>>> = (0..r)
        .map(|j| {
            let mut a = vec![vec![0u64; r]; r];
            for (k, &gk) in cd.reps.iter().enumerate() {
                for &x in &cd.members[j] {
                    a[cd.class_of[g.mul(g.inv(x), gk)]][k] += 1;
                }
            }
            a
        })
        .collect();

    // Split F_q^r into common eigenspaces of the matrices m[j], acting on column vectors.
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r).map(|i| (0..r).map(|k| u64::from(i == k)).collect()).collect()];
    let mut done: Vec<Vec<u64>> = Vec::new();
    let mut rng_state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next_rand = || {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        rng_state
    };
    let mut attempts = 0usize;
    while let Some(basis) = spaces.pop() {
        if basis.len() == 1 {
            done.push(basis.into_iter().next().unwrap());
            continue;
        }
        attempts += 1;
        if attempts > 50 * r + 100 {
            return Err(GroupError::TableValidation("eigenspace splitting did not terminate".into()));
        }
        // random combination of the class matrices, restricted to the invariant subspace
        let coef: Vec<u64> = (0..r).map(|_| next_rand() % q).collect();
        let (basis, pivots) = modq::echelon(basis, q);
        let d = basis.len();
        let apply = |v: &[u64]| -> Vec<u64> {
            let mut out = vec![0u64; r];
            for j in 0..r {
                if coef[j] == 0 {
                    continue;
                }
                for i in 0..r {
                    let mut s = 0u64;
                    for k in 0..r {
                        s = (s + mul_mod(m[j][i][k], v[k], q)) % q;
                    }
                    out[i] = (out[i] + mul_mod(coef[j], s, q)) % q;
                }
            }
            out
        };
        // a[s][t] = coordinate s of (M b_t)
        let images: Vec<Vec<u64>> = basis.iter().map(|b| apply(b)).collect();
        let a: Vec<Vec<u64>> = (0..d).map(|s| (0..d).map(|t| images[t][pivots[s]]).collect()).collect();
        let poly = modq::charpoly(a.clone(), q);
        let roots: Vec<u64> = (0..q).filter(|&x| modq::eval(&poly, x, q) == 0).collect();
        if roots.len() <= 1 {
            spaces.push(basis);
            continue;
        }
        for lam in roots {
            let shifted: Vec<Vec<u64>> = (0..d)
                .map(|s| (0..d).map(|t| if s == t { modq::sub(a[s][t], lam, q) } else { a[s][t] }).collect())
                .collect();
            let ker = modq::kernel(&shifted, q);
            let sub: Vec<Vec<u64>> = ker
                .iter()
                .map(|c| {
                    let mut v = vec![0u64; r];
                    for (t, &ct) in c.iter().enumerate() {
                        for k in 0..r {
                            v[k] = (v[k] + mul_mod(ct, basis[t][k], q)) % q;
                        }
                    }
                    v
                })
                .collect();
            spaces.push(sub);
        }
    }
    if done.len() != r {
        return Err(GroupError::TableValidation(format!("found {} eigenvectors for {r} classes", done.len())));
    }

    let isqrt = |n: u64| (n as f64).sqrt() as u64 + 1;
    let mut rows: Vec<Vec<Cyclotomic>> = Vec::with_capacity(r);
    for mut w in done {
        let inv0 = inv_mod(w[0], q).ok_or_else(|| GroupError::TableValidation("eigenvector vanishes at 1".into()))?;
        for x in w.iter_mut() {
            *x = mul_mod(*x, inv0, q);
        }
        let mut s = 0u64;
        for k in 0..r {
            let t = mul_mod(w[k], w[cd.inverse_map[k]], q);
            s = (s + mul_mod(t, inv_mod(sizes[k] % q, q).unwrap(), q)) % q;
        }
        let d2 = mul_mod(order % q, inv_mod(s, q).ok_or_else(|| GroupError::TableValidation("zero norm".into()))?, q);
        let deg = (1..=isqrt(order))
            .find(|&d| d * d == d2)
            .ok_or_else(|| GroupError::TableValidation("degree is not an integer".into()))?;
        let chi_mod: Vec<u64> =
            (0..r).map(|k| mul_mod(mul_mod(w[k], deg, q), inv_mod(sizes[k] % q, q).unwrap(), q)).collect();
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            let o = cd.classes[k].order;
            let zo = pow_mod(z, e / o, q);
            let x = cd.reps[k];
            let vals: Vec<u64> = (0..o).map(|t| chi_mod[cd.class_of[g.pow(x, t)]]).collect();
            let inv_o = inv_mod(o % q, q).unwrap();
            let mut mults = vec![0i64; o as usize];
            for (j, mj) in mults.iter_mut().enumerate() {
                let zinv = pow_mod(zo, (o - j as u64 % o) % o, q);
                let mut acc = 0u64;
                let mut zt = 1u64;
                for &v in &vals {
                    acc = (acc + mul_mod(v, zt, q)) % q;
                    zt = mul_mod(zt, zinv, q);
                }
                let val = mul_mod(acc, inv_o, q);
                if val > deg {
                    return Err(GroupError::TableValidation("eigenvalue multiplicity out of range".into()));
                }
                *mj = val as i64;
            }
            if mults.iter().sum::<i64>() != deg as i64 {
                return Err(GroupError::TableValidation("eigenvalue multiplicities do not sum to the degree".into()));
            }
            row.push(Cyclotomic::from_root_multiplicities(o as u32, &mults));
        }
        rows.push(row);
    }
    // trivial character first, then by degree and values
    rows.sort_by(|a, b| {
        let ta = a.iter().all(|v| *v == Cyclotomic::one());
        let tb = b.iter().all(|v| *v == Cyclotomic::one());
        tb.cmp(&ta)
            .then_with(|| a[0].as_integer().cmp(&b[0].as_integer()))
            .then_with(|| a.cmp(b))
    });
    let labels = default_character_labels(&rows);
    let t = CharacterTable {
        name: g.name().to_string(),
        group_order: order,
        classes: cd.classes.clone(),
        powermaps: cd.powermaps.clone(),
        inverse_map: cd.inverse_map.clone(),
        labels,
        irreducibles: rows,
    };
    t.validate()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::group::Perm;

    fn group(name: &str, deg: usize, gens: &[&[&[usize]]]) -> GroupData {
        GroupData::from_generators(name, deg, gens.iter().map(|c| Perm::from_cycles(deg, c).unwrap()).collect()).unwrap()
    }

    fn table(g: &GroupData) -> CharacterTable {
        dixon_character_table(g, &ClassData::compute(g)).unwrap()
    }

    #[test]
    fn dixon_prime_choice() {
        // S3: e = 6, bound 2·√6·6 ≈ 29.4; 31 ≡ 1 mod 6
        assert_eq!(dixon_prime(6, 6), 31);
    }

    #[test]
    fn s3_against_direct_construction() {
        let g = group("S3", 3, &[&[&[1, 2, 3]], &[&[1, 2]]]);
        let t = table(&g);
        assert_eq!(t.degrees(), vec![1, 1, 2]);
        // trivial, sign, and the permutation character minus trivial: fixed points - 1
        let cd = ClassData::compute(&g);
        let sign: Vec<i64> = cd.reps.iter().map(|&x| if g.element_order(x) == 2 { -1 } else { 1 }).collect();
        let standard: Vec<i64> = cd
            .reps
            .iter()
            .map(|&x| g.element(x).images().iter().enumerate().filter(|(i, &j)| *i == j as usize).count() as i64 - 1)
            .collect();
        let as_cyc = |v: &[i64]| v.iter().map(|&x| Cyclotomic::from_int(x)).collect::<Vec<_>>();
        assert_eq!(t.irreducibles[0], as_cyc(&[1, 1, 1]));
        assert_eq!(t.irreducibles[1], as_cyc(&sign));
        assert_eq!(t.irreducibles[2], as_cyc(&standard));
    }

    #[test]
    fn c4_linear_characters() {
        let g = group("C4", 4, &[&[&[1, 2, 3, 4]]]);
        let t = table(&g);
        assert_eq!(t.degrees(), vec![1, 1, 1, 1]);
        assert!(t.irreducibles.iter().flatten().all(|v| v.conductor() <= 4));
        assert!(t.irreducibles.iter().flatten().any(|v| v.conductor() == 4));
    }

    #[test]
    fn nonabelian_tables_validate() {
        let s4 = group("S4", 4, &[&[&[1, 2, 3, 4]], &[&[1, 2]]]);
        assert_eq!(table(&s4).degrees(), vec![1, 1, 2, 3, 3]);
        let a5 = group("A5", 5, &[&[&[1, 2, 3, 4, 5]], &[&[1, 2, 3]]]);
        let t = table(&a5);
        assert_eq!(t.degrees(), vec![1, 3, 3, 4, 5]);
        assert!(t.irreducibles.iter().flatten().any(|v| v.conductor() == 5));
        let q8 = group("Q8", 8, &[&[&[1, 2, 3, 4], &[5, 8, 7, 6]], &[&[1, 5, 3, 7], &[2, 6, 4, 8]]]);
        assert_eq!(table(&q8).degrees(), vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn rejects_broken_table() {
        let g = group("S3", 3, &[&[&[1, 2, 3]], &[&[1, 2]]]);
        let t = table(&g);
        let mut f = t.to_file();
        let json = serde_json::to_string(&f).unwrap();
        let back: TableFile = serde_json::from_str(&json).unwrap();
        assert_eq!(CharacterTable::from_file(back).unwrap(), t);
        f.irreducibles[2][1] = Cyclotomic::from_int(1);
        let err = CharacterTable::from_file(f).unwrap_err().to_string();
        assert!(err.contains("not orthogonal"), "{err}");
    }

    #[test]
    fn power_classes() {
        let g = group("C12", 7, &[&[&[1, 2, 3, 4], &[5, 6, 7]]]);
        let t = table(&g);
        for c in 0..t.num_classes() {
            let o = t.class_order(c);
            assert_eq!(t.class_order(t.power_class(c, 5)), o);
            assert_eq!(t.power_class(c, o as i64), 0);
            assert_eq!(t.power_class(c, -1), t.inverse_map[c]);
        }
    }
}
