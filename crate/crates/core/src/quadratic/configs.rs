//! Disc configurations: labelings of `m` disc boundaries by `n` edge
//! variables, each used exactly twice, and the closed surfaces obtained by
//! gluing equal labels.
//!
//! Configurations are listed up to reordering the discs, rotating or
//! reversing a boundary, and renaming (or inverting) variables. A boundary
//! word is required to be cyclically reduced: a corner `p p^-1` could never
//! be read without cancellation.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{chi_bar, n_bound};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Occurrence {
    pub var: usize,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Surface {
    pub discs: Vec<usize>,
    pub euler: i64,
    pub orientable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConfigShape {
    pub orientable: bool,
    pub genus: usize,
    pub m_coef: usize,
}

impl ConfigShape {
    pub fn chi_bar(&self) -> i64 {
        chi_bar(self.orientable, self.genus)
    }

    pub fn n_bound(&self) -> i64 {
        n_bound(self.orientable, self.genus, self.m_coef)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscConfiguration {
    pub n: usize,
    pub boundaries: Vec<Vec<Occurrence>>,
    pub surfaces: Vec<Surface>,
}

impl DiscConfiguration {
    /// Glues the discs and records the resulting surfaces.
    pub fn from_boundaries(boundaries: Vec<Vec<Occurrence>>) -> Self {
        let n = boundaries
            .iter()
            .flatten()
            .map(|o| o.var + 1)
            .max()
            .unwrap_or(0);
        let surfaces = glue(&boundaries, n);
        DiscConfiguration {
            n,
            boundaries,
            surfaces,
        }
    }

    pub fn each_variable_twice(&self) -> bool {
        let mut count = vec![0usize; self.n];
        for o in self.boundaries.iter().flatten() {
            count[o.var] += 1;
        }
        count.iter().all(|&c| c == 2)
    }

    /// `sum chi(S_i) - 2l` for surfaces `S_0 .. S_l`.
    pub fn euler_excess(&self) -> i64 {
        let sum: i64 = self.surfaces.iter().map(|s| s.euler).sum();
        sum - 2 * (self.surfaces.len() as i64 - 1)
    }

    /// The gluing constraints for an equation of the given shape.
    pub fn admissible(&self, shape: &ConfigShape) -> bool {
        let chi = shape.chi_bar();
        let all_orientable = self.surfaces.iter().all(|s| s.orientable);
        if shape.orientable {
            all_orientable && self.euler_excess() >= chi
        } else if all_orientable {
            self.euler_excess() >= chi + 2
        } else {
            self.euler_excess() >= chi
        }
    }

    /// Least form under the configuration symmetries.
    #[must_use]
    pub fn canonical(&self) -> Self {
        DiscConfiguration::from_boundaries(canonical_boundaries(&self.boundaries))
    }

    pub fn render(&self) -> String {
        self.boundaries
            .iter()
            .map(|b| {
                b.iter()
                    .map(|o| {
                        if o.inverse {
                            format!("p{}^-1", o.var + 1)
                        } else {
                            format!("p{}", o.var + 1)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

/// Disc configurations for a classified equation.
pub fn enumerate_configs(eq: &super::QuadraticEquation) -> Result<Vec<DiscConfiguration>> {
    enumerate_shape(&eq.shape())
}

/// Every admissible configuration with `1 <= n <= N` variables, in
/// canonical form, sorted by `n` and then by boundary words.
pub fn enumerate_shape(shape: &ConfigShape) -> Result<Vec<DiscConfiguration>> {
    if shape.genus != 0 || shape.m_coef == 0 || shape.m_coef > 3 {
        return Err(Error::ScopeExceeded(format!(
            "configurations are enumerated for genus 0 and at most 3 coefficients, got genus {} with {}",
            shape.genus, shape.m_coef
        )));
    }
    let m = shape.m_coef;
    let mut found: BTreeSet<(usize, Vec<Vec<Occurrence>>)> = BTreeSet::new();
    let max_n = shape.n_bound().max(0) as usize;
    for n in 1..=max_n {
        if 2 * n < m {
            continue;
        }
        for seq in labelings(n) {
            for parts in compositions(2 * n, m) {
                let mut boundaries = Vec::with_capacity(m);
                let mut at = 0;
                for len in parts {
                    boundaries.push(seq[at..at + len].to_vec());
                    at += len;
                }
                if !boundaries.iter().all(|b| cyclically_reduced(b)) {
                    continue;
                }
                let c = DiscConfiguration::from_boundaries(boundaries);
                if c.admissible(shape) {
                    found.insert((n, canonical_boundaries(&c.boundaries)));
                }
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|(_, b)| DiscConfiguration::from_boundaries(b))
        .collect())
}

fn cyclically_reduced(b: &[Occurrence]) -> bool {
    let k = b.len();
    (0..k).all(|i| {
        let (x, y) = (b[i], b[(i + 1) % k]);
        k == 1 || !(x.var == y.var && x.inverse != y.inverse)
    })
}

/// Sequences of length `2n` in which labels `0..n` each occur twice, first
/// occurrences in increasing order and positive.
fn labelings(n: usize) -> Vec<Vec<Occurrence>> {
    fn go(n: usize, seq: &mut Vec<Occurrence>, used: &mut Vec<u8>, out: &mut Vec<Vec<Occurrence>>) {
        if seq.len() == 2 * n {
            out.push(seq.clone());
            return;
        }
        let next_new = used.iter().filter(|&&u| u > 0).count();
        for v in 0..n {
            match used[v] {
                0 if v == next_new => {
                    used[v] = 1;
                    seq.push(Occurrence {
                        var: v,
                        inverse: false,
                    });
                    go(n, seq, used, out);
                    seq.pop();
                    used[v] = 0;
                }
                1 => {
                    used[v] = 2;
                    for inverse in [false, true] {
                        seq.push(Occurrence { var: v, inverse });
                        go(n, seq, used, out);
                        seq.pop();
                    }
                    used[v] = 1;
                }
                _ => {}
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![0; n], &mut out);
    out
}

/// Ordered splittings of `total` into `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return if total >= 1 {
            vec![vec![total]]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    for first in 1..total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

fn glue(boundaries: &[Vec<Occurrence>], n: usize) -> Vec<Surface> {
    let m = boundaries.len();
    let offset: Vec<usize> = boundaries
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.len();
            Some(o)
        })
        .collect();
    let corners: usize = boundaries.iter().map(Vec::len).sum();
    // For each variable: (disc, tail corner, head corner, sign).
    let mut ends: Vec<Vec<(usize, usize, usize, i8)>> = vec![Vec::new(); n];
    for (d, b) in boundaries.iter().enumerate() {
        let k = b.len();
        for (i, o) in b.iter().enumerate() {
            let here = offset[d] + i;
            let next = offset[d] + (i + 1) % k;
            let (tail, head) = if o.inverse {
                (next, here)
            } else {
                (here, next)
            };
            ends[o.var].push((d, tail, head, if o.inverse { -1 } else { 1 }));
        }
    }
    let mut vertices = Dsu::new(corners);
    let mut discs = Dsu::new(m);
    for e in &ends {
        if let [(d1, t1, h1, _), (d2, t2, h2, _)] = e[..] {
            vertices.union(t1, t2);
            vertices.union(h1, h2);
            discs.union(d1, d2);
        }
    }
    // Orientation signs s_D with s_D1 e1 = -s_D2 e2 for every label.
    let mut sign: Vec<Option<i8>> = vec![None; m];
    let mut orientable_comp = vec![true; m];
    for root in 0..m {
        if discs.find(root) != root {
            continue;
        }
        sign[root] = Some(1);
        let mut changed = true;
        while changed {
            changed = false;
            for e in &ends {
                if let [(d1, _, _, e1), (d2, _, _, e2)] = e[..] {
                    if discs.find(d1) != root {
                        continue;
                    }
                    match (sign[d1], sign[d2]) {
                        (Some(s1), None) => {
                            sign[d2] = Some(-s1 * e1 * e2);
                            changed = true;
                        }
                        (None, Some(s2)) => {
                            sign[d1] = Some(-s2 * e1 * e2);
                            changed = true;
                        }
                        (Some(s1), Some(s2)) => {
                            if s1 * e1 != -(s2 * e2) {
                                orientable_comp[root] = false;
                            }
                        }
                        (None, None) => {}
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for root in 0..m {
        if discs.find(root) != root {
            continue;
        }
        let members: Vec<usize> = (0..m).filter(|&d| discs.find(d) == root).collect();
        let mut verts = BTreeSet::new();
        let mut edges = 0i64;
        for &d in &members {
            for i in 0..boundaries[d].len() {
                verts.insert(vertices.find(offset[d] + i));
            }
            edges += boundaries[d].len() as i64;
        }
        let euler = verts.len() as i64 - edges / 2 + members.len() as i64;
        out.push(Surface {
            discs: members,
            euler,
            orientable: orientable_comp[root],
        });
    }
    out
}

fn canonical_boundaries(b: &[Vec<Occurrence>]) -> Vec<Vec<Occurrence>> {
    let m = b.len();
    // Every rotation and reversal of each disc.
    let variants: Vec<Vec<Vec<Occurrence>>> = b
        .iter()
        .map(|disc| {
            let k = disc.len();
            let mut v = Vec::with_capacity(2 * k);
            for r in 0..k {
                let rot: Vec<Occurrence> = (0..k).map(|i| disc[(r + i) % k]).collect();
                let rev: Vec<Occurrence> = rot
                    .iter()
                    .rev()
                    .map(|o| Occurrence {
                        var: o.var,
                        inverse: !o.inverse,
                    })
                    .collect();
                v.push(rot);
                v.push(rev);
            }
            v
        })
        .collect();
    let mut best: Option<Vec<Vec<Occurrence>>> = None;
    for perm in permutations(m) {
        let mut choice = vec![0usize; m];
        loop {
            let raw: Vec<&Vec<Occurrence>> =
                (0..m).map(|i| &variants[perm[i]][choice[i]]).collect();
            let cand = relabel(&raw);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
            let mut i = 0;
            while i < m {
                choice[i] += 1;
                if choice[i] < variants[perm[i]].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
    }
    best.unwrap_or_default()
}

/// Renames variables by first appearance, flipping each so that its first
/// occurrence is positive.
fn relabel(raw: &[&Vec<Occurrence>]) -> Vec<Vec<Occurrence>> {
    let mut map: Vec<Option<(usize, bool)>> = Vec::new();
    let mut next = 0;
    raw.iter()
        .map(|disc| {
            disc.iter()
                .map(|o| {
                    if map.len() <= o.var {
                        map.resize(o.var + 1, None);
                    }
                    let (v, flip) = *map[o.var].get_or_insert_with(|| {
                        next += 1;
                        (next - 1, o.inverse)
                    });
                    Occurrence {
                        var: v,
                        inverse: o.inverse != flip,
                    }
                })
                .collect()
        })
        .collect()
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(s: &str) -> Vec<Vec<Occurrence>> {
        s.split('|')
            .map(|d| {
                d.split_whitespace()
                    .map(|t| {
                        let (name, inverse) = match t.strip_suffix("^-1") {
                            Some(n) => (n, true),
                            None => (t, false),
                        };
                        Occurrence {
                            var: name[1..].parse::<usize>().unwrap() - 1,
                            inverse,
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn genus0(m: usize) -> ConfigShape {
        ConfigShape {
            orientable: true,
            genus: 0,
            m_coef: m,
        }
    }

    #[test]
    fn two_discs_one_configuration() {
        let cs = enumerate_shape(&genus0(2)).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].render(), "p1 | p1");
        assert_eq!(cs[0].surfaces.len(), 1);
        assert_eq!(cs[0].surfaces[0].euler, 2);
    }

    #[test]
    fn three_discs_two_variables() {
        let cs = enumerate_shape(&genus0(3)).unwrap();
        let two: Vec<_> = cs.iter().filter(|c| c.n == 2).collect();
        assert_eq!(two.len(), 1);
        let expected = DiscConfiguration::from_boundaries(occ("p1 | p2 | p1 p2")).canonical();
        assert_eq!(two[0].boundaries, expected.boundaries);
        // A disc bounded by p p is a projective plane.
        let bad = DiscConfiguration::from_boundaries(occ("p1 | p1 | p2 p2"));
        assert!(!bad.surfaces.iter().all(|s| s.orientable));
        assert!(!bad.admissible(&genus0(3)));
    }

    #[test]
    fn three_discs_three_variables() {
        let cs = enumerate_shape(&genus0(3)).unwrap();
        assert!(cs.iter().all(|c| c.n <= 3));
        assert!(cs.iter().all(|c| c.each_variable_twice()));
        assert!(cs.iter().all(|c| c.euler_excess() >= 2));
        // p2 p3 | p1 p3 | p1 p2, with the orientations that make it a sphere.
        let theta = DiscConfiguration::from_boundaries(occ("p2 p3 | p1 p3^-1 | p1^-1 p2^-1"));
        assert!(theta.admissible(&genus0(3)));
        assert!(cs
            .iter()
            .any(|c| c.boundaries == theta.canonical().boundaries));
        // The all-positive orientation does not close up orientably.
        let twisted = DiscConfiguration::from_boundaries(occ("p2 p3 | p1 p3 | p1 p2"));
        assert!(!twisted.surfaces[0].orientable);
    }

    #[test]
    fn euler_characteristics() {
        let torus = DiscConfiguration::from_boundaries(occ("p1 p2 p1^-1 p2^-1"));
        assert_eq!(torus.surfaces[0].euler, 0);
        assert!(torus.surfaces[0].orientable);
        let rp2 = DiscConfiguration::from_boundaries(occ("p1 p1"));
        assert_eq!(rp2.surfaces[0].euler, 1);
        assert!(!rp2.surfaces[0].orientable);
        let klein = DiscConfiguration::from_boundaries(occ("p1 p1 p2 p2"));
        assert_eq!(klein.surfaces[0].euler, 0);
        let split = DiscConfiguration::from_boundaries(occ("p1 | p1 | p2 | p2"));
        assert_eq!(split.surfaces.len(), 2);
        assert_eq!(split.euler_excess(), 2);
    }

    #[test]
    fn canonical_is_symmetry_invariant() {
        let a = DiscConfiguration::from_boundaries(occ("p1 | p2 | p1 p2"));
        let b = DiscConfiguration::from_boundaries(occ("p2^-1 p1 | p1 | p2"));
        assert_eq!(a.canonical(), b.canonical());
    }

    #[test]
    fn scope() {
        let s = ConfigShape {
            orientable: true,
            genus: 1,
            m_coef: 1,
        };
        assert!(matches!(enumerate_shape(&s), Err(Error::ScopeExceeded(_))));
        assert!(enumerate_shape(&genus0(1)).unwrap().is_empty());
    }
}
