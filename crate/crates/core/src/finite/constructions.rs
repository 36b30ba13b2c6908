//! Standard finite groupoids used throughout the tests and scenarios.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::groupoid::FiniteGroupoid;
use super::FiniteError;

/// A finite group given by its multiplication table, `table[a][b] = a·b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, FiniteError> {
        let n = table.len();
        let bad = |msg: &str| Err(FiniteError::InvalidGroup(msg.to_string()));
        if n == 0 {
            return bad("empty table");
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return bad("table is not a square table over its index set");
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
        else {
            return bad("no identity element");
        };
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverses.push(b),
                None => return bad("element without inverse"),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("table is not associative");
                    }
                }
            }
        }
        Ok(Self { table, identity, inverses })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table).expect("cyclic table is a group")
    }

    /// Symmetric group on three letters, elements as permutations in lexicographic order.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| index([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        Self::from_table(table).expect("S3 table is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

impl TryFrom<Vec<Vec<usize>>> for FiniteGroup {
    type Error = FiniteError;

    fn try_from(table: Vec<Vec<usize>>) -> Result<Self, Self::Error> {
        Self::from_table(table)
    }
}

impl From<FiniteGroup> for Vec<Vec<usize>> {
    fn from(g: FiniteGroup) -> Self {
        g.table
    }
}

/// Only identity arrows.
pub fn unit_groupoid(n: usize) -> FiniteGroupoid {
    let compose = (0..n).map(|x| ((x, x), x)).collect();
    FiniteGroupoid::new(n, (0..n).map(|x| (x, x)).collect(), compose, (0..n).collect(), (0..n).collect())
        .expect("unit groupoid is valid")
}

/// Pair groupoid `M × M`; arrow `tgt * n + src` goes from `src` to `tgt`.
pub fn pair_groupoid(n: usize) -> FiniteGroupoid {
    let id = |tgt: usize, src: usize| tgt * n + src;
    let mut ends = Vec::with_capacity(n * n);
    let mut inverses = Vec::with_capacity(n * n);
    for t in 0..n {
        for s in 0..n {
            ends.push((s, t));
            inverses.push(id(s, t));
        }
    }
    let mut compose = HashMap::new();
    for z in 0..n {
        for y in 0..n {
            for x in 0..n {
                compose.insert((id(z, y), id(y, x)), id(z, x));
            }
        }
    }
    FiniteGroupoid::new(n, ends, compose, (0..n).map(|x| id(x, x)).collect(), inverses)
        .expect("pair groupoid is valid")
}

/// A group viewed as a one-object groupoid.
pub fn group_groupoid(group: &FiniteGroup) -> FiniteGroupoid {
    let n = group.order();
    let mut compose = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            compose.insert((a, b), group.mul(a, b));
        }
    }
    FiniteGroupoid::new(
        1,
        vec![(0, 0); n],
        compose,
        vec![group.identity()],
        (0..n).map(|a| group.inverse(a)).collect(),
    )
    .expect("group groupoid is valid")
}

/// Action groupoid `Γ ⋉ X` of a permutation action; `action[g][x] = g·x`.
///
/// Arrow `g * |X| + x` is `(g, x): x → g·x`.
pub fn action_groupoid(group: &FiniteGroup, action: &[Vec<usize>]) -> Result<FiniteGroupoid, FiniteError> {
    let order = group.order();
    if action.len() != order {
        return Err(FiniteError::InvalidGroup("one permutation per group element required".into()));
    }
    let points = action[0].len();
    let id = |g: usize, x: usize| g * points + x;
    let mut ends = Vec::with_capacity(order * points);
    let mut inverses = Vec::with_capacity(order * points);
    for g in 0..order {
        if action[g].len() != points || action[g].iter().any(|&y| y >= points) {
            return Err(FiniteError::InvalidGroup("action is not a map of the point set".into()));
        }
        for x in 0..points {
            let y = action[g][x];
            ends.push((x, y));
            inverses.push(id(group.inverse(g), y));
        }
    }
    let mut compose = HashMap::new();
    for g in 0..order {
        for h in 0..order {
            for x in 0..points {
                compose.insert((id(g, action[h][x]), id(h, x)), id(group.mul(g, h), x));
            }
        }
    }
    let units = (0..points).map(|x| id(group.identity(), x)).collect();
    FiniteGroupoid::new(points, ends, compose, units, inverses)
}

/// Disjoint union; objects and arrows of `b` are shifted after those of `a`.
pub fn disjoint_union(a: &FiniteGroupoid, b: &FiniteGroupoid) -> FiniteGroupoid {
    let (oa, na) = (a.object_count(), a.arrow_count());
    let mut ends: Vec<_> = a.arrows().map(|g| (a.src(g), a.tgt(g))).collect();
    ends.extend(b.arrows().map(|g| (b.src(g) + oa, b.tgt(g) + oa)));
    let mut compose = HashMap::new();
    for g in a.arrows() {
        for h in a.arrows() {
            if let Some(p) = a.compose(g, h) {
                compose.insert((g, h), p);
            }
        }
    }
    for g in b.arrows() {
        for h in b.arrows() {
            if let Some(p) = b.compose(g, h) {
                compose.insert((g + na, h + na), p + na);
            }
        }
    }
    let mut units: Vec<_> = a.objects().map(|x| a.unit(x)).collect();
    units.extend(b.objects().map(|x| b.unit(x) + na));
    let mut inverses: Vec<_> = a.arrows().map(|g| a.inverse(g)).collect();
    inverses.extend(b.arrows().map(|g| b.inverse(g) + na));
    FiniteGroupoid::new(oa + b.object_count(), ends, compose, units, inverses)
        .expect("disjoint union of groupoids is a groupoid")
}

/// Cartesian product; arrow `(g, h)` has index `g * |B| + h`.
pub fn product(a: &FiniteGroupoid, b: &FiniteGroupoid) -> FiniteGroupoid {
    let (ob, nb) = (b.object_count(), b.arrow_count());
    let obj = |x: usize, y: usize| x * ob + y;
    let arr = |g: usize, h: usize| g * nb + h;
    let mut ends = Vec::new();
    let mut inverses = Vec::new();
    for g in a.arrows() {
        for h in b.arrows() {
            ends.push((obj(a.src(g), b.src(h)), obj(a.tgt(g), b.tgt(h))));
            inverses.push(arr(a.inverse(g), b.inverse(h)));
        }
    }
    let mut compose = HashMap::new();
    for g1 in a.arrows() {
        for g2 in a.arrows() {
            let Some(g) = a.compose(g1, g2) else { continue };
            for h1 in b.arrows() {
                for h2 in b.arrows() {
                    if let Some(h) = b.compose(h1, h2) {
                        compose.insert((arr(g1, h1), arr(g2, h2)), arr(g, h));
                    }
                }
            }
        }
    }
    let mut units = Vec::new();
    for x in a.objects() {
        for y in b.objects() {
            units.push(arr(a.unit(x), b.unit(y)));
        }
    }
    FiniteGroupoid::new(a.object_count() * ob, ends, compose, units, inverses)
        .expect("product of groupoids is a groupoid")
}

/// The same groupoid with object `x` renamed `objects[x]` and arrow `g` renamed
/// `arrows[g]`; both maps must be permutations.
pub fn relabel(g: &FiniteGroupoid, objects: &[usize], arrows: &[usize]) -> FiniteGroupoid {
    let mut ends = vec![(0, 0); g.arrow_count()];
    let mut inverses = vec![0; g.arrow_count()];
    for a in g.arrows() {
        ends[arrows[a]] = (objects[g.src(a)], objects[g.tgt(a)]);
        inverses[arrows[a]] = arrows[g.inverse(a)];
    }
    let mut units = vec![0; g.object_count()];
    for x in g.objects() {
        units[objects[x]] = arrows[g.unit(x)];
    }
    let mut compose = HashMap::new();
    for a in g.arrows() {
        for b in g.arrows() {
            if let Some(c) = g.compose(a, b) {
                compose.insert((arrows[a], arrows[b]), arrows[c]);
            }
        }
    }
    FiniteGroupoid::from_parts(g.object_count(), ends, compose, units, inverses)
}

/// A random finite groupoid with at most `max_arrows` arrows (at least one
/// object): a disjoint union of transitive pieces `pair(n) × G` and of cyclic
/// permutation actions, with objects and arrows shuffled.
pub fn random_groupoid<R: Rng>(rng: &mut R, max_arrows: usize) -> FiniteGroupoid {
    let groups = [FiniteGroup::cyclic(1), FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(4), FiniteGroup::symmetric3()];
    let mut acc: Option<FiniteGroupoid> = None;
    let mut budget = max_arrows.max(1);
    let pieces = rng.gen_range(1..=3);
    for _ in 0..pieces {
        let piece = if rng.gen_bool(0.5) {
            let g = &groups[rng.gen_range(0..groups.len())];
            let n = rng.gen_range(1..=3);
            product(&pair_groupoid(n), &group_groupoid(g))
        } else {
            let k = rng.gen_range(2..=4);
            let m = rng.gen_range(1..=4);
            random_cyclic_action(rng, k, m)
        };
        if piece.arrow_count() > budget {
            continue;
        }
        budget -= piece.arrow_count();
        acc = Some(match acc {
            None => piece,
            Some(prev) => disjoint_union(&prev, &piece),
        });
    }
    let g = acc.unwrap_or_else(|| unit_groupoid(1));
    let mut objects: Vec<usize> = g.objects().collect();
    let mut arrows: Vec<usize> = g.arrows().collect();
    objects.shuffle(rng);
    arrows.shuffle(rng);
    relabel(&g, &objects, &arrows)
}

/// `Z/k` acting on `m` points through a random permutation whose cycle lengths divide `k`.
fn random_cyclic_action<R: Rng>(rng: &mut R, k: usize, m: usize) -> FiniteGroupoid {
    let divisors: Vec<usize> = (1..=k).filter(|d| k.is_multiple_of(*d)).collect();
    let mut points: Vec<usize> = (0..m).collect();
    points.shuffle(rng);
    let mut generator: Vec<usize> = (0..m).collect();
    let mut rest = &points[..];
    while !rest.is_empty() {
        let fits: Vec<usize> = divisors.iter().copied().filter(|&d| d <= rest.len()).collect();
        let len = fits[rng.gen_range(0..fits.len())];
        let (cycle, tail) = rest.split_at(len);
        for i in 0..len {
            generator[cycle[i]] = cycle[(i + 1) % len];
        }
        rest = tail;
    }
    let mut action = vec![(0..m).collect::<Vec<_>>()];
    for g in 1..k {
        let prev: &Vec<usize> = &action[g - 1];
        action.push(prev.iter().map(|&x| generator[x]).collect());
    }
    action_groupoid(&FiniteGroup::cyclic(k), &action).expect("cyclic permutation action")
}

/// `Z/2` swapping objects `a = 0` and `b = 1`.
pub fn swap_groupoid() -> FiniteGroupoid {
    action_groupoid(&FiniteGroup::cyclic(2), &[vec![0, 1], vec![1, 0]]).expect("swap action")
}

/// `Z/2` swapping `a = 0`, `b = 1` and fixing `c = 2`.
pub fn swap_with_fixed_point() -> FiniteGroupoid {
    action_groupoid(&FiniteGroup::cyclic(2), &[vec![0, 1, 2], vec![1, 0, 2]]).expect("swap action")
}
