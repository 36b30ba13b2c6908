use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::FiniteError;

pub type ObjectId = usize;
pub type ArrowId = usize;

/// A finite groupoid given by its full structure tables.
///
/// Composition follows the convention `compose(g, h) = g ∘ h`, defined exactly
/// when `src(g) == tgt(h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: usize,
    src: Vec<ObjectId>,
    tgt: Vec<ObjectId>,
    compose: HashMap<(ArrowId, ArrowId), ArrowId>,
    units: Vec<ArrowId>,
    inverses: Vec<ArrowId>,
}

/// One violated groupoid axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    IndexOutOfRange { what: &'static str, index: usize },
    UnitEndpoints { object: ObjectId, unit: ArrowId },
    MissingComposite { left: ArrowId, right: ArrowId },
    SpuriousComposite { left: ArrowId, right: ArrowId },
    CompositeEndpoints { left: ArrowId, right: ArrowId, product: ArrowId },
    NonAssociative { a: ArrowId, b: ArrowId, c: ArrowId },
    UnitLaw { arrow: ArrowId },
    InverseLaw { arrow: ArrowId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IndexOutOfRange { what, index } => {
                write!(f, "index out of range: {what} {index}")
            }
            Violation::UnitEndpoints { object, unit } => {
                write!(f, "unit {unit} of object {object} does not start and end at {object}")
            }
            Violation::MissingComposite { left, right } => {
                write!(f, "composition mismatch: composable pair ({left}, {right}) has no product")
            }
            Violation::SpuriousComposite { left, right } => write!(
                f,
                "composition mismatch: product defined for non-composable pair ({left}, {right})"
            ),
            Violation::CompositeEndpoints { left, right, product } => write!(
                f,
                "composition mismatch: {left}∘{right} = {product} has wrong source or target"
            ),
            Violation::NonAssociative { a, b, c } => {
                write!(f, "associativity fails on ({a}, {b}, {c})")
            }
            Violation::UnitLaw { arrow } => write!(f, "unit law fails at arrow {arrow}"),
            Violation::InverseLaw { arrow } => write!(f, "inverse law fails at arrow {arrow}"),
        }
    }
}

/// JSON wire format: `objects` is a count, `compose` holds triples `[i, j, k]`
/// meaning `arrow_i ∘ arrow_j = arrow_k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupoidDescriptor {
    pub objects: usize,
    pub arrows: Vec<ArrowEnds>,
    pub compose: Vec<[usize; 3]>,
    pub units: Vec<usize>,
    pub inverses: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ArrowEnds {
    pub src: usize,
    pub tgt: usize,
}

impl FiniteGroupoid {
    /// Assembles a groupoid from raw tables without checking the axioms.
    pub fn from_parts(
        objects: usize,
        ends: Vec<(ObjectId, ObjectId)>,
        compose: HashMap<(ArrowId, ArrowId), ArrowId>,
        units: Vec<ArrowId>,
        inverses: Vec<ArrowId>,
    ) -> Self {
        let (src, tgt) = ends.into_iter().unzip();
        Self { objects, src, tgt, compose, units, inverses }
    }

    /// Like [`from_parts`](Self::from_parts) but rejects tables that violate an axiom.
    pub fn new(
        objects: usize,
        ends: Vec<(ObjectId, ObjectId)>,
        compose: HashMap<(ArrowId, ArrowId), ArrowId>,
        units: Vec<ArrowId>,
        inverses: Vec<ArrowId>,
    ) -> Result<Self, FiniteError> {
        let g = Self::from_parts(objects, ends, compose, units, inverses);
        g.ensure_valid()?;
        Ok(g)
    }

    pub fn ensure_valid(&self) -> Result<(), FiniteError> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(FiniteError::Invalid(violations))
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn arrow_count(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, g: ArrowId) -> ObjectId {
        self.src[g]
    }

    pub fn tgt(&self, g: ArrowId) -> ObjectId {
        self.tgt[g]
    }

    pub fn unit(&self, x: ObjectId) -> ArrowId {
        self.units[x]
    }

    pub fn inverse(&self, g: ArrowId) -> ArrowId {
        self.inverses[g]
    }

    pub fn compose(&self, g: ArrowId, h: ArrowId) -> Option<ArrowId> {
        self.compose.get(&(g, h)).copied()
    }

    pub fn composable(&self, g: ArrowId, h: ArrowId) -> bool {
        self.src[g] == self.tgt[h]
    }

    pub fn arrows(&self) -> std::ops::Range<ArrowId> {
        0..self.arrow_count()
    }

    pub fn objects(&self) -> std::ops::Range<ObjectId> {
        0..self.objects
    }

    /// Arrows whose source is `x`, in increasing index order.
    pub fn s_fiber(&self, x: ObjectId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrows().filter(move |&g| self.src[g] == x)
    }

    /// Lists every violated axiom; an empty list means the tables form a groupoid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n_arrows = self.arrow_count();
        if self.tgt.len() != n_arrows {
            out.push(Violation::IndexOutOfRange { what: "target table length", index: self.tgt.len() });
            return out;
        }
        for (g, (&s, &t)) in self.src.iter().zip(&self.tgt).enumerate() {
            if s >= self.objects || t >= self.objects {
                out.push(Violation::IndexOutOfRange { what: "endpoint of arrow", index: g });
            }
        }
        if self.units.len() != self.objects {
            out.push(Violation::IndexOutOfRange { what: "unit table length", index: self.units.len() });
        }
        if self.inverses.len() != n_arrows {
            out.push(Violation::IndexOutOfRange {
                what: "inverse table length",
                index: self.inverses.len(),
            });
        }
        for &u in &self.units {
            if u >= n_arrows {
                out.push(Violation::IndexOutOfRange { what: "unit", index: u });
            }
        }
        for &i in &self.inverses {
            if i >= n_arrows {
                out.push(Violation::IndexOutOfRange { what: "inverse", index: i });
            }
        }
        for (&(a, b), &c) in &self.compose {
            if a >= n_arrows || b >= n_arrows || c >= n_arrows {
                out.push(Violation::IndexOutOfRange { what: "composition entry", index: a.max(b).max(c) });
            }
        }
        if !out.is_empty() {
            return out;
        }

        for x in self.objects() {
            let u = self.units[x];
            if self.src[u] != x || self.tgt[u] != x {
                out.push(Violation::UnitEndpoints { object: x, unit: u });
            }
        }

        let mut spurious: Vec<_> = self
            .compose
            .keys()
            .filter(|&&(g, h)| !self.composable(g, h))
            .copied()
            .collect();
        spurious.sort_unstable();
        out.extend(spurious.into_iter().map(|(left, right)| Violation::SpuriousComposite { left, right }));

        for g in self.arrows() {
            for h in self.arrows() {
                if !self.composable(g, h) {
                    continue;
                }
                match self.compose(g, h) {
                    None => out.push(Violation::MissingComposite { left: g, right: h }),
                    Some(p) => {
                        if self.src[p] != self.src[h] || self.tgt[p] != self.tgt[g] {
                            out.push(Violation::CompositeEndpoints { left: g, right: h, product: p });
                        }
                    }
                }
            }
        }

        for a in self.arrows() {
            for b in self.arrows() {
                let Some(ab) = self.compose(a, b) else { continue };
                for c in self.arrows() {
                    let Some(bc) = self.compose(b, c) else { continue };
                    let left = self.compose(ab, c);
                    let right = self.compose(a, bc);
                    if left.is_none() || left != right {
                        out.push(Violation::NonAssociative { a, b, c });
                    }
                }
            }
        }

        for g in self.arrows() {
            let left = self.compose(self.units[self.tgt[g]], g);
            let right = self.compose(g, self.units[self.src[g]]);
            if left != Some(g) || right != Some(g) {
                out.push(Violation::UnitLaw { arrow: g });
            }
            let inv = self.inverses[g];
            let ok = self.compose(g, inv) == Some(self.units[self.tgt[g]])
                && self.compose(inv, g) == Some(self.units[self.src[g]]);
            if !ok {
                out.push(Violation::InverseLaw { arrow: g });
            }
        }
        out
    }

    pub fn to_descriptor(&self) -> GroupoidDescriptor {
        let mut compose: Vec<[usize; 3]> =
            self.compose.iter().map(|(&(a, b), &c)| [a, b, c]).collect();
        compose.sort_unstable();
        GroupoidDescriptor {
            objects: self.objects,
            arrows: self
                .src
                .iter()
                .zip(&self.tgt)
                .map(|(&src, &tgt)| ArrowEnds { src, tgt })
                .collect(),
            compose,
            units: self.units.clone(),
            inverses: self.inverses.clone(),
        }
    }

    /// Builds from a descriptor and re-validates.
    pub fn from_descriptor(d: &GroupoidDescriptor) -> Result<Self, FiniteError> {
        let mut compose = HashMap::with_capacity(d.compose.len());
        for &[a, b, c] in &d.compose {
            if compose.insert((a, b), c).is_some_and(|prev| prev != c) {
                return Err(FiniteError::Invalid(vec![Violation::SpuriousComposite { left: a, right: b }]));
            }
        }
        Self::new(
            d.objects,
            d.arrows.iter().map(|e| (e.src, e.tgt)).collect(),
            compose,
            d.units.clone(),
            d.inverses.clone(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_descriptor()).expect("descriptor serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, FiniteError> {
        let d: GroupoidDescriptor = serde_json::from_str(text)?;
        Self::from_descriptor(&d)
    }
}
