//! The `s_!`/`t_!` calculus on a finite groupoid with trivialized densities.

use num_traits::{One, Signed, Zero};

use super::groupoid::{ArrowId, FiniteGroupoid, ObjectId};
use super::linalg::{Rational, RationalMatrix, SpanBuilder};
use super::FiniteError;

/// A function on arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowWeights(pub Vec<Rational>);

/// A function on objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectWeights(pub Vec<Rational>);

impl ArrowWeights {
    pub fn zeros(g: &FiniteGroupoid) -> Self {
        Self(vec![Rational::zero(); g.arrow_count()])
    }

    pub fn indicator(g: &FiniteGroupoid, arrow: ArrowId) -> Self {
        let mut w = Self::zeros(g);
        w.0[arrow] = Rational::one();
        w
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self(values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn as_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl ObjectWeights {
    pub fn zeros(g: &FiniteGroupoid) -> Self {
        Self(vec![Rational::zero(); g.object_count()])
    }

    pub fn indicator(g: &FiniteGroupoid, objects: &[ObjectId]) -> Self {
        let mut w = Self::zeros(g);
        for &x in objects {
            w.0[x] = Rational::one();
        }
        w
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self(values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn as_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// Haar weight on objects: the fiber measure at `x` gives arrow `h` mass `rho(tgt h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaarWeight(Vec<Rational>);

impl HaarWeight {
    /// Rejects negative entries. Saturation of the support is checked by
    /// [`check_saturation`](Self::check_saturation) and by every operation that needs it.
    pub fn new(rho: Vec<Rational>) -> Result<Self, FiniteError> {
        if let Some(x) = rho.iter().position(Signed::is_negative) {
            return Err(FiniteError::NegativeHaarWeight(x));
        }
        Ok(Self(rho))
    }

    /// Errors unless every s-fiber has positive mass, i.e. the support meets every orbit.
    pub fn check_saturation(&self, g: &FiniteGroupoid) -> Result<(), FiniteError> {
        if self.0.len() != g.object_count() {
            return Err(FiniteError::Length { expected: g.object_count(), found: self.0.len() });
        }
        match g.objects().find(|&x| self.fiber_mass(g, x).is_zero()) {
            Some(x) => Err(FiniteError::EmptyFiber(x)),
            None => Ok(()),
        }
    }

    /// Weight normalized so every s-fiber has mass one; requires `rho` constant on orbits.
    pub fn normalized_counting(g: &FiniteGroupoid) -> Self {
        let rho = g
            .objects()
            .map(|x| Rational::new(1.into(), (g.s_fiber(x).count() as i64).into()))
            .collect();
        Self(rho)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn fiber_mass(&self, g: &FiniteGroupoid, x: ObjectId) -> Rational {
        g.s_fiber(x).fold(Rational::zero(), |acc, h| acc + &self.0[g.tgt(h)])
    }
}

/// `s_!(u)(x) = Σ_{src h = x} u(h)`.
pub fn s_shriek(g: &FiniteGroupoid, u: &ArrowWeights) -> ObjectWeights {
    let mut out = ObjectWeights::zeros(g);
    for h in g.arrows() {
        out.0[g.src(h)] += &u.0[h];
    }
    out
}

/// `t_!(u)(y) = Σ_{tgt h = y} u(h)`.
pub fn t_shriek(g: &FiniteGroupoid, u: &ArrowWeights) -> ObjectWeights {
    let mut out = ObjectWeights::zeros(g);
    for h in g.arrows() {
        out.0[g.tgt(h)] += &u.0[h];
    }
    out
}

/// Matrix of `s_! − t_!`, objects by arrows.
pub fn shriek_difference_matrix(g: &FiniteGroupoid) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(g.object_count(), g.arrow_count());
    for h in g.arrows() {
        m[(g.src(h), h)] += Rational::one();
        m[(g.tgt(h), h)] -= Rational::one();
    }
    m
}

/// Connected components of the graph with an edge `src(h) — tgt(h)` per arrow,
/// each sorted, listed by smallest element.
pub fn orbits(g: &FiniteGroupoid) -> Vec<Vec<ObjectId>> {
    let labels = orbit_labels(g);
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); count];
    for (x, &l) in labels.iter().enumerate() {
        out[l].push(x);
    }
    out
}

/// Orbit index of each object, numbered in order of first appearance.
pub fn orbit_labels(g: &FiniteGroupoid) -> Vec<usize> {
    let n = g.object_count();
    let mut adjacency = vec![Vec::new(); n];
    for h in g.arrows() {
        adjacency[g.src(h)].push(g.tgt(h));
        adjacency[g.tgt(h)].push(g.src(h));
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &adjacency[x] {
                if label[y] == usize::MAX {
                    label[y] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    label
}

/// The cokernel of `s_! − t_!`.
#[derive(Debug, Clone)]
pub struct Coinvariants {
    pub dimension: usize,
    /// Objects whose point masses project to a basis of the cokernel.
    pub representatives: Vec<ObjectId>,
}

impl Coinvariants {
    pub fn basis(&self, g: &FiniteGroupoid) -> Vec<ObjectWeights> {
        self.representatives.iter().map(|&x| ObjectWeights::indicator(g, &[x])).collect()
    }
}

pub fn coinvariants(g: &FiniteGroupoid) -> Coinvariants {
    let d = shriek_difference_matrix(g);
    let dimension = g.object_count() - d.rank();

    let mut span = SpanBuilder::new();
    for h in g.arrows() {
        span.insert((0..g.object_count()).map(|x| d[(x, h)].clone()).collect());
    }
    let representatives = g
        .objects()
        .filter(|&x| span.insert(ObjectWeights::indicator(g, &[x]).0))
        .collect();
    Coinvariants { dimension, representatives }
}

/// Solutions of `v ∘ s_! = v ∘ t_!`, i.e. `v(src h) = v(tgt h)` for every arrow.
#[derive(Debug, Clone)]
pub struct TransverseMeasureCone {
    pub basis: Vec<ObjectWeights>,
    /// Whether each basis vector is entrywise nonnegative.
    pub nonnegative: Vec<bool>,
}

impl TransverseMeasureCone {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn transverse_measure_cone(g: &FiniteGroupoid) -> TransverseMeasureCone {
    let basis: Vec<_> = shriek_difference_matrix(g)
        .transpose()
        .nullspace()
        .into_iter()
        .map(ObjectWeights)
        .collect();
    let nonnegative = basis.iter().map(|v| v.0.iter().all(|x| !x.is_negative())).collect();
    TransverseMeasureCone { basis, nonnegative }
}

/// Direct membership test for the invariance condition.
pub fn is_invariant(g: &FiniteGroupoid, v: &ObjectWeights) -> bool {
    g.arrows().all(|h| v.0[g.src(h)] == v.0[g.tgt(h)])
}

/// Whether `v` lies in the positive cone of transverse measures.
pub fn is_transverse_measure(g: &FiniteGroupoid, v: &ObjectWeights) -> bool {
    is_invariant(g, v) && v.0.iter().all(|x| !x.is_negative())
}

/// `(u ⋆ v)(h) = Σ_{h1 ∘ h2 = h} u(h1) v(h2)`.
pub fn convolve(g: &FiniteGroupoid, u: &ArrowWeights, v: &ArrowWeights) -> ArrowWeights {
    let mut out = ArrowWeights::zeros(g);
    for a in g.arrows() {
        if u.0[a].is_zero() {
            continue;
        }
        for b in g.arrows() {
            if v.0[b].is_zero() {
                continue;
            }
            if let Some(c) = g.compose(a, b) {
                out.0[c] += &u.0[a] * &v.0[b];
            }
        }
    }
    out
}

/// `τ_w(u) = Σ_x w(x) u(unit x)`.
pub fn unit_trace(g: &FiniteGroupoid, w: &ObjectWeights, u: &ArrowWeights) -> Rational {
    g.objects().fold(Rational::zero(), |acc, x| acc + &w.0[x] * &u.0[g.unit(x)])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceCheck {
    pub is_trace: bool,
    /// First pair of arrow indicators `(a, b)` with `τ(δ_a ⋆ δ_b) ≠ τ(δ_b ⋆ δ_a)`.
    pub witness: Option<(ArrowId, ArrowId)>,
    pub pairs_checked: usize,
}

/// Brute-force trace test over all pairs of arrow indicators.
pub fn is_trace(g: &FiniteGroupoid, w: &ObjectWeights) -> TraceCheck {
    let mut pairs_checked = 0;
    for a in g.arrows() {
        let da = ArrowWeights::indicator(g, a);
        for b in g.arrows() {
            let db = ArrowWeights::indicator(g, b);
            pairs_checked += 1;
            let ab = unit_trace(g, w, &convolve(g, &da, &db));
            let ba = unit_trace(g, w, &convolve(g, &db, &da));
            if ab != ba {
                return TraceCheck { is_trace: false, witness: Some((a, b)), pairs_checked };
            }
        }
    }
    TraceCheck { is_trace: true, witness: None, pairs_checked }
}

/// Whether `w` is constant on every orbit.
pub fn is_orbit_constant(g: &FiniteGroupoid, w: &ObjectWeights) -> bool {
    orbits(g).iter().all(|orbit| orbit.iter().all(|&x| w.0[x] == w.0[orbit[0]]))
}

/// `Av(f)(x) = Σ_{src h = x} f(tgt h) · rho(tgt h)`.
pub fn average_function(
    g: &FiniteGroupoid,
    rho: &HaarWeight,
    f: &ObjectWeights,
) -> Result<ObjectWeights, FiniteError> {
    rho.check_saturation(g)?;
    if f.0.len() != g.object_count() {
        return Err(FiniteError::Length { expected: g.object_count(), found: f.0.len() });
    }
    let mut out = ObjectWeights::zeros(g);
    for x in g.objects() {
        out.0[x] = g
            .s_fiber(x)
            .fold(Rational::zero(), |acc, h| acc + &f.0[g.tgt(h)] * &rho.values()[g.tgt(h)]);
    }
    Ok(out)
}
