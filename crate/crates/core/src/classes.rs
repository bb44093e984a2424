//! Conjugacy classes, power maps and class fusion.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::matgrp::{FiniteGroup, Subgroup};

pub const CLASS_SCHEMA_VERSION: u32 = 1;

/// Conjugacy classes of an enumerated group.
///
/// Class 0 is the identity class; the rest are sorted by element order,
/// then class size, then representative key. Each representative is the
/// element of least [`FiniteGroup::sort_key`] in its class.
pub struct ClassData {
    group: Arc<FiniteGroup>,
    space: Arc<ClassSpace>,
    reps: Vec<u32>,
    sizes: Vec<usize>,
    class_of: Vec<u32>,
    orders: Vec<u64>,
    exponent: u64,
    inverse: Vec<u32>,
    power_maps: BTreeMap<u64, Vec<u32>>,
}

impl std::fmt::Debug for ClassData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ClassData({}, {} classes)", self.group.label(), self.reps.len())
    }
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a / crate::gf::gcd(a, b) * b
}

/// Splits `G` into conjugation orbits by sweeping each unvisited element's
/// orbit under conjugation by the generators.
pub fn conjugacy_classes(group: &Arc<FiniteGroup>) -> ClassData {
    let g = group.as_ref();
    let n = g.order();
    let gens: Vec<(u32, u32)> = g.generators().iter().map(|&s| (s, g.inv(s))).collect();
    let mut raw_class = vec![u32::MAX; n];
    let mut orbits: Vec<Vec<u32>> = Vec::new();
    for start in 0..n as u32 {
        if raw_class[start as usize] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        raw_class[start as usize] = id;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            for &(s, si) in &gens {
                let y = g.mul(g.mul(s, x), si);
                if raw_class[y as usize] == u32::MAX {
                    raw_class[y as usize] = id;
                    orbit.push(y);
                }
            }
            head += 1;
        }
        orbits.push(orbit);
    }

    struct Raw {
        rep: u32,
        key: u128,
        size: usize,
        order: u64,
        old: u32,
    }
    let mut raws: Vec<Raw> = orbits
        .iter()
        .enumerate()
        .map(|(i, orbit)| {
            let rep = *orbit.iter().min_by_key(|&&x| g.sort_key(x)).expect("orbit is nonempty");
            Raw {
                rep,
                key: g.sort_key(rep),
                size: orbit.len(),
                order: g.element_order(rep),
                old: i as u32,
            }
        })
        .collect();
    raws.sort_by(|a, b| {
        (a.rep != g.identity())
            .cmp(&(b.rep != g.identity()))
            .then(a.order.cmp(&b.order))
            .then(a.size.cmp(&b.size))
            .then(a.key.cmp(&b.key))
    });
    let mut renumber = vec![0u32; raws.len()];
    for (new, r) in raws.iter().enumerate() {
        renumber[r.old as usize] = new as u32;
    }
    let class_of: Vec<u32> = raw_class.iter().map(|&c| renumber[c as usize]).collect();
    let reps: Vec<u32> = raws.iter().map(|r| r.rep).collect();
    let sizes = raws.iter().map(|r| r.size).collect();
    let orders: Vec<u64> = raws.iter().map(|r| r.order).collect();
    let exponent = orders.iter().fold(1, |acc, &o| lcm_u64(acc, o));
    let inverse = reps.iter().map(|&r| class_of[g.inv(r) as usize]).collect();
    let space = Arc::new(ClassSpace {
        label: g.label().to_string(),
        order: n as u64,
        sizes: raws.iter().map(|r| r.size as u64).collect(),
        orders: orders.clone(),
        inverse: reps.iter().map(|&r| class_of[g.inv(r) as usize]).collect(),
    });
    let mut cd = ClassData {
        group: group.clone(),
        space,
        reps,
        sizes,
        class_of,
        orders,
        exponent,
        inverse,
        power_maps: BTreeMap::new(),
    };
    for p in crate::gf::prime_divisors(exponent) {
        let map = cd.power_map(p as i64);
        cd.power_maps.insert(p, map);
    }
    cd
}

impl ClassData {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    /// The shared class layout that class functions on this group refer to.
    pub fn space(&self) -> &Arc<ClassSpace> {
        &self.space
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[u32] {
        &self.reps
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    #[inline]
    pub fn class_of(&self, x: u32) -> u32 {
        self.class_of[x as usize]
    }

    pub fn class_members(&self, class: usize) -> impl Iterator<Item = u32> + '_ {
        self.class_of
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c as usize == class)
            .map(|(x, _)| x as u32)
    }

    pub fn centralizer_order(&self, class: usize) -> usize {
        self.group.order() / self.sizes[class]
    }

    /// Class of the inverses of each class.
    pub fn inverse_classes(&self) -> &[u32] {
        &self.inverse
    }

    /// Stored power maps, keyed by the primes dividing the exponent.
    pub fn prime_power_maps(&self) -> &BTreeMap<u64, Vec<u32>> {
        &self.power_maps
    }

    /// Class of `g^m` for each class of `g`; `m` may be negative.
    pub fn power_map(&self, m: i64) -> Vec<u32> {
        let e = m.rem_euclid(self.exponent as i64) as u64;
        self.reps.iter().map(|&r| self.class_of(self.group.pow(r, e))).collect()
    }

    /// Class of `rep^t` for `t = 0..order(rep)`.
    pub fn power_classes(&self, class: usize) -> Vec<u32> {
        let g = &self.group;
        let rep = self.reps[class];
        let mut out = Vec::with_capacity(self.orders[class] as usize);
        let mut x = g.identity();
        for _ in 0..self.orders[class] {
            out.push(self.class_of(x));
            x = g.mul(x, rep);
        }
        out
    }

    pub fn summary(&self) -> ClassSummary {
        ClassSummary {
            schema: CLASS_SCHEMA_VERSION,
            group: self.group.label().to_string(),
            order: self.group.order() as u64,
            orders: self.orders.clone(),
            sizes: self.sizes.iter().map(|&s| s as u64).collect(),
            centralizer_orders: (0..self.len()).map(|i| self.centralizer_order(i) as u64).collect(),
            power_maps: self
                .power_maps
                .iter()
                .map(|(p, m)| (p.to_string(), m.clone()))
                .collect(),
            inverse: self.inverse.clone(),
        }
    }
}

/// The class layout of a group: enough to integrate class functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSpace {
    pub label: String,
    pub order: u64,
    pub sizes: Vec<u64>,
    pub orders: Vec<u64>,
    pub inverse: Vec<u32>,
}

impl ClassSpace {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn centralizer_order(&self, class: usize) -> u64 {
        self.order / self.sizes[class]
    }
}

/// JSON export of class data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub schema: u32,
    pub group: String,
    pub order: u64,
    pub orders: Vec<u64>,
    pub sizes: Vec<u64>,
    pub centralizer_orders: Vec<u64>,
    pub power_maps: BTreeMap<String, Vec<u32>>,
    pub inverse: Vec<u32>,
}

/// How the classes of a subgroup sit inside the classes of its parent.
pub struct Fusion {
    sub: Subgroup,
    sub_group: Arc<FiniteGroup>,
    sub_classes: ClassData,
    map: Vec<u32>,
}

impl std::fmt::Debug for Fusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fusion")
            .field("sub", &self.sub)
            .field("map", &self.map)
            .finish()
    }
}

impl Fusion {
    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    /// The subgroup as a standalone group, element `i` being
    /// `subgroup().members()[i]`.
    pub fn sub_group(&self) -> &Arc<FiniteGroup> {
        &self.sub_group
    }

    pub fn sub_classes(&self) -> &ClassData {
        &self.sub_classes
    }

    /// Parent class of each subgroup class.
    pub fn map(&self) -> &[u32] {
        &self.map
    }
}

/// Computes the classes of `sub` as a group in its own right and maps each
/// of them to the parent class containing it.
pub fn fuse(parent: &ClassData, sub: &Subgroup, label: &str) -> Fusion {
    assert!(
        Arc::ptr_eq(parent.group(), sub.parent()),
        "subgroup must live in the classified group"
    );
    let sub_group = Arc::new(sub.as_group(label));
    let sub_classes = conjugacy_classes(&sub_group);
    let map = sub_classes
        .reps()
        .iter()
        .map(|&h| parent.class_of(sub.members()[h as usize]))
        .collect();
    Fusion {
        sub: sub.clone(),
        sub_group,
        sub_classes,
        map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgrp::{build_group, center, Family, DEFAULT_ORDER_CAP};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn group(f: Family, n: usize, q: u64) -> Arc<FiniteGroup> {
        Arc::new(build_group(f, n, q, DEFAULT_ORDER_CAP).unwrap())
    }

    /// Classes by brute force: x ~ y iff y = g x g⁻¹ for some g.
    fn brute_force_class_count(g: &FiniteGroup) -> usize {
        let mut seen = vec![false; g.order()];
        let mut count = 0;
        for x in 0..g.order() as u32 {
            if seen[x as usize] {
                continue;
            }
            count += 1;
            for y in 0..g.order() as u32 {
                seen[g.conjugate(x, y) as usize] = true;
            }
        }
        count
    }

    #[test]
    fn class_counts_match_brute_force() {
        let sl27 = group(Family::SL, 2, 7);
        assert_eq!(brute_force_class_count(&sl27), 11);
        assert_eq!(conjugacy_classes(&sl27).len(), 11);
        let su33 = group(Family::SU, 3, 3);
        let cd = conjugacy_classes(&su33);
        assert_eq!(cd.len(), 14);
        assert_eq!(brute_force_class_count(&su33), 14);
        assert_eq!(cd.sizes().iter().sum::<usize>(), 6048);
        let trivial = group(Family::SL, 1, 5);
        assert_eq!(trivial.order(), 1);
        assert_eq!(conjugacy_classes(&trivial).len(), 1);
    }

    #[test]
    fn class_invariants() {
        for g in [
            group(Family::SL, 2, 5),
            group(Family::SU, 3, 3),
            group(Family::GL, 2, 3),
        ] {
            let cd = conjugacy_classes(&g);
            assert_eq!(cd.sizes().iter().sum::<usize>(), g.order());
            assert_eq!(cd.reps()[0], g.identity());
            for (i, &r) in cd.reps().iter().enumerate() {
                assert_eq!(cd.class_of(r) as usize, i);
                let c = crate::matgrp::centralizer(&g, r);
                assert_eq!(cd.sizes()[i] * c.order(), g.order());
                assert_eq!(g.element_order(r), cd.orders()[i]);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..1000 {
                let x = rng.gen_range(0..g.order() as u32);
                let y = rng.gen_range(0..g.order() as u32);
                assert_eq!(cd.class_of(x), cd.class_of(g.conjugate(x, y)));
            }
            // ordering: identity first, then (order, size, key)
            for w in 1..cd.len() - 1 {
                let a = (cd.orders()[w], cd.sizes()[w], g.sort_key(cd.reps()[w]));
                let b = (cd.orders()[w + 1], cd.sizes()[w + 1], g.sort_key(cd.reps()[w + 1]));
                assert!(a < b);
            }
        }
    }

    #[test]
    fn power_map_examples() {
        let g = group(Family::SU, 3, 3);
        let cd = conjugacy_classes(&g);
        let ident: Vec<u32> = (0..cd.len() as u32).collect();
        assert_eq!(cd.power_map(1), ident);
        assert_eq!(cd.power_map(cd.exponent() as i64), vec![0; cd.len()]);
        let inv = cd.power_map(-1);
        let oracle: Vec<u32> = cd.reps().iter().map(|&r| cd.class_of(g.inv(r))).collect();
        assert_eq!(inv, oracle);
        assert_eq!(inv.as_slice(), cd.inverse_classes());
        for (i, &j) in inv.iter().enumerate() {
            assert_eq!(inv[j as usize] as usize, i);
        }
    }

    #[test]
    fn power_maps_compose() {
        let g = group(Family::SL, 2, 7);
        let cd = conjugacy_classes(&g);
        let e = cd.exponent() as i64;
        for a in [2i64, 3, 5, -1, 7] {
            for b in [2i64, 3, -1, 4] {
                let pa = cd.power_map(a);
                let pb = cd.power_map(b);
                let composed: Vec<u32> = pb.iter().map(|&c| pa[c as usize]).collect();
                assert_eq!(composed, cd.power_map((a * b).rem_euclid(e)));
            }
        }
        for (p, map) in cd.prime_power_maps() {
            assert_eq!(*map, cd.power_map(*p as i64));
        }
    }

    #[test]
    fn fusion_examples() {
        let g = group(Family::SL, 2, 7);
        let cd = conjugacy_classes(&g);
        let z = center(&g);
        let fz = fuse(&cd, &z, "Z");
        assert_eq!(fz.sub_classes().len(), 2);
        let mut images: Vec<u32> = fz.map().to_vec();
        images.sort_unstable();
        assert_eq!(images[0], 0);
        assert_eq!(cd.sizes()[images[1] as usize], 1);

        let whole = Subgroup::whole(&g);
        let fw = fuse(&cd, &whole, "G");
        assert_eq!(fw.map(), (0..cd.len() as u32).collect::<Vec<_>>().as_slice());
    }
}
