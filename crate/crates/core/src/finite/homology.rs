//! Nerve complex, boundary matrices and differentiable homology over the rationals.

use std::collections::HashMap;

use super::calculus::orbit_labels;
use super::groupoid::{ArrowId, FiniteGroupoid, ObjectId};
use super::linalg::{sparse_rank, Rational, RationalMatrix, SparseVec};
use super::FiniteError;

/// The composable `k`-strings `x_0 ← x_1 ← … ← x_k` of a groupoid.
///
/// Degree 0 strings are single objects `[x]`; degree `k ≥ 1` strings are arrow
/// tuples `[g_1, …, g_k]` with `src(g_i) = tgt(g_{i+1})`, enumerated
/// lexicographically in arrow indices.
#[derive(Debug, Clone)]
pub struct NerveLevel {
    pub degree: usize,
    pub strings: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl NerveLevel {
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn position(&self, string: &[usize]) -> Option<usize> {
        self.index.get(string).copied()
    }

    fn from_strings(degree: usize, strings: Vec<Vec<usize>>) -> Self {
        let index = strings.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { degree, strings, index }
    }
}

pub fn nerve(g: &FiniteGroupoid, k: usize) -> NerveLevel {
    if k == 0 {
        return NerveLevel::from_strings(0, g.objects().map(|x| vec![x]).collect());
    }
    let mut strings: Vec<Vec<usize>> = g.arrows().map(|a| vec![a]).collect();
    for _ in 1..k {
        let mut next = Vec::with_capacity(strings.len() * 2);
        for s in &strings {
            let last = *s.last().expect("nonempty string");
            for h in g.arrows().filter(|&h| g.composable(last, h)) {
                let mut t = s.clone();
                t.push(h);
                next.push(t);
            }
        }
        strings = next;
    }
    NerveLevel::from_strings(k, strings)
}

/// The `i`-th face of a degree-`k` string (`k ≥ 1`, `0 ≤ i ≤ k`).
pub fn face(g: &FiniteGroupoid, string: &[ArrowId], i: usize) -> Vec<usize> {
    let k = string.len();
    assert!(k >= 1 && i <= k, "face index out of range");
    if k == 1 {
        let a = string[0];
        return vec![if i == 0 { g.src(a) } else { g.tgt(a) }];
    }
    if i == 0 {
        return string[1..].to_vec();
    }
    if i == k {
        return string[..k - 1].to_vec();
    }
    let mut out = Vec::with_capacity(k - 1);
    out.extend_from_slice(&string[..i - 1]);
    out.push(g.compose(string[i - 1], string[i]).expect("nerve strings are composable"));
    out.extend_from_slice(&string[i + 1..]);
    out
}

/// Sparse columns of `δ = Σ_i (−1)^i (δ_i)_!` from degree `k` to `k − 1`.
fn boundary_columns(g: &FiniteGroupoid, lower: &NerveLevel, upper: &NerveLevel) -> Vec<SparseVec> {
    upper
        .strings
        .iter()
        .map(|s| {
            let mut coeffs: HashMap<usize, i64> = HashMap::new();
            for i in 0..=upper.degree {
                let row = lower.position(&face(g, s, i)).expect("faces lie in the nerve");
                *coeffs.entry(row).or_default() += if i % 2 == 0 { 1 } else { -1 };
            }
            let mut col: SparseVec = coeffs
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(r, c)| (r, Rational::from_integer(c.into())))
                .collect();
            col.sort_by_key(|(r, _)| *r);
            col
        })
        .collect()
}

/// Dense matrix of `δ: C_k → C_{k−1}`, rows indexed by `G_{k−1}`, columns by `G_k`.
pub fn boundary_matrix(g: &FiniteGroupoid, k: usize) -> Result<RationalMatrix, FiniteError> {
    if k == 0 {
        return Err(FiniteError::Degree(k));
    }
    let lower = nerve(g, k - 1);
    let upper = nerve(g, k);
    let mut m = RationalMatrix::zeros(lower.len(), upper.len());
    for (c, col) in boundary_columns(g, &lower, &upper).into_iter().enumerate() {
        for (r, v) in col {
            m[(r, c)] = v;
        }
    }
    Ok(m)
}

/// Checks `δ_k ∘ δ_{k+1} = 0` for `1 ≤ k < kmax`; returns the first failing `k`.
pub fn boundary_squares_vanish(g: &FiniteGroupoid, kmax: usize) -> Result<(), usize> {
    for k in 1..kmax {
        let lower = boundary_matrix(g, k).expect("k >= 1");
        let upper = boundary_matrix(g, k + 1).expect("k >= 1");
        if !lower.mul(&upper).is_zero() {
            return Err(k);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeSummary {
    pub degree: usize,
    pub nerve_size: usize,
    /// Rank of `δ_k: C_k → C_{k−1}` (zero in degree 0).
    pub boundary_rank: usize,
    pub betti: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyReport {
    pub degrees: Vec<DegreeSummary>,
}

impl HomologyReport {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }
}

/// Rational Betti numbers in degrees `0..=kmax`.
pub fn homology(g: &FiniteGroupoid, kmax: usize) -> HomologyReport {
    let levels: Vec<NerveLevel> = (0..=kmax + 1).map(|k| nerve(g, k)).collect();
    let mut ranks = vec![0usize; kmax + 2];
    for k in 1..=kmax + 1 {
        ranks[k] = sparse_rank(boundary_columns(g, &levels[k - 1], &levels[k]));
    }
    let degrees = (0..=kmax)
        .map(|k| DegreeSummary {
            degree: k,
            nerve_size: levels[k].len(),
            boundary_rank: ranks[k],
            betti: levels[k].len() - ranks[k] - ranks[k + 1],
        })
        .collect();
    HomologyReport { degrees }
}

/// Full subgroupoid over `subset` (arrows with both ends in it), objects renumbered
/// in the order given.
pub fn restrict_full_subgroupoid(
    g: &FiniteGroupoid,
    subset: &[ObjectId],
) -> Result<FiniteGroupoid, FiniteError> {
    let mut new_object = vec![None; g.object_count()];
    for (i, &x) in subset.iter().enumerate() {
        if x >= g.object_count() || new_object[x].is_some() {
            return Err(FiniteError::BadSubset(x));
        }
        new_object[x] = Some(i);
    }
    let labels = orbit_labels(g);
    let orbit_count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut met = vec![false; orbit_count];
    for &x in subset {
        met[labels[x]] = true;
    }
    if let Some(orbit) = met.iter().position(|m| !m) {
        let missing = labels.iter().position(|&l| l == orbit).expect("orbit is nonempty");
        return Err(FiniteError::OrbitMissed(missing));
    }

    let kept: Vec<ArrowId> = g
        .arrows()
        .filter(|&a| new_object[g.src(a)].is_some() && new_object[g.tgt(a)].is_some())
        .collect();
    let mut new_arrow = vec![usize::MAX; g.arrow_count()];
    for (i, &a) in kept.iter().enumerate() {
        new_arrow[a] = i;
    }
    let ends = kept
        .iter()
        .map(|&a| (new_object[g.src(a)].unwrap(), new_object[g.tgt(a)].unwrap()))
        .collect();
    let mut compose = HashMap::new();
    for &a in &kept {
        for &b in &kept {
            if let Some(c) = g.compose(a, b) {
                compose.insert((new_arrow[a], new_arrow[b]), new_arrow[c]);
            }
        }
    }
    let units = subset.iter().map(|&x| new_arrow[g.unit(x)]).collect();
    let inverses = kept.iter().map(|&a| new_arrow[g.inverse(a)]).collect();
    FiniteGroupoid::new(subset.len(), ends, compose, units, inverses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::calculus::{shriek_difference_matrix, orbits};
    use crate::finite::constructions::*;
    use num_traits::{One, Zero};

    fn is_identity(m: &RationalMatrix) -> bool {
        m.rows() == m.cols()
            && (0..m.rows()).all(|r| {
                (0..m.cols()).all(|c| if r == c { m[(r, c)].is_one() } else { m[(r, c)].is_zero() })
            })
    }

    #[test]
    fn nerve_sizes() {
        assert_eq!(nerve(&pair_groupoid(2), 2).len(), 8);
        assert_eq!(nerve(&pair_groupoid(3), 0).strings, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(nerve(&unit_groupoid(4), 3).len(), 4);
    }

    #[test]
    fn nerve_is_lexicographic() {
        let level = nerve(&pair_groupoid(2), 2);
        let mut sorted = level.strings.clone();
        sorted.sort();
        assert_eq!(sorted, level.strings);
    }

    #[test]
    fn first_boundary_is_s_minus_t() {
        for g in [pair_groupoid(3), swap_with_fixed_point(), group_groupoid(&FiniteGroup::cyclic(3))] {
            assert_eq!(boundary_matrix(&g, 1).unwrap(), shriek_difference_matrix(&g));
        }
    }

    #[test]
    fn boundary_squares_vanish_on_pair3() {
        assert_eq!(boundary_squares_vanish(&pair_groupoid(3), 3), Ok(()));
    }

    #[test]
    fn unit_groupoid_boundaries_alternate() {
        let g = unit_groupoid(3);
        for k in 1..=4 {
            let m = boundary_matrix(&g, k).unwrap();
            if k % 2 == 1 {
                assert!(m.is_zero(), "degree {k}");
            } else {
                assert!(is_identity(&m), "degree {k}");
            }
        }
    }

    #[test]
    fn homology_examples() {
        assert_eq!(homology(&pair_groupoid(3), 3).betti(), vec![1, 0, 0, 0]);
        assert_eq!(homology(&unit_groupoid(4), 3).betti(), vec![4, 0, 0, 0]);
        assert_eq!(homology(&group_groupoid(&FiniteGroup::cyclic(2)), 4).betti(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn restriction_examples() {
        let g = pair_groupoid(3);
        let r = restrict_full_subgroupoid(&g, &[1]).unwrap();
        assert_eq!((r.object_count(), r.arrow_count()), (1, 1));
        assert_eq!(homology(&r, 3).betti(), homology(&g, 3).betti());

        let two = swap_with_fixed_point();
        assert!(matches!(restrict_full_subgroupoid(&two, &[0, 1]), Err(FiniteError::OrbitMissed(2))));

        // Z/2 acts freely on {a, b}: the isotropy at a is trivial.
        let swap = swap_groupoid();
        let iso = restrict_full_subgroupoid(&swap, &[0]).unwrap();
        assert_eq!((iso.object_count(), iso.arrow_count()), (1, 1));
        assert_eq!(homology(&iso, 3).betti(), homology(&swap, 3).betti());

        // Z/2 x Z/2 acting on {a, b} through the first factor has isotropy Z/2.
        let klein = product(&group_groupoid(&FiniteGroup::cyclic(2)), &group_groupoid(&FiniteGroup::cyclic(2)));
        let group = FiniteGroup::from_table(
            (0..4).map(|a| (0..4).map(|b| klein.compose(a, b).unwrap()).collect()).collect(),
        )
        .unwrap();
        // element index g * 2 + h: first factor g swaps
        let action: Vec<Vec<usize>> =
            (0..4).map(|e| if e / 2 == 1 { vec![1, 0] } else { vec![0, 1] }).collect();
        let g = action_groupoid(&group, &action).unwrap();
        let iso = restrict_full_subgroupoid(&g, &[0]).unwrap();
        assert_eq!((iso.object_count(), iso.arrow_count()), (1, 2));
        let s = (0..2).find(|&a| a != iso.unit(0)).unwrap();
        assert_eq!(iso.compose(s, s), Some(iso.unit(0)));
        assert_eq!(orbits(&iso).len(), 1);
    }
}
