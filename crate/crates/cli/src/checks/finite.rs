use anyhow::{bail, ensure, Result};
use groupoid_measures::finite::calculus::is_transverse_measure;
use groupoid_measures::finite::linalg::rat;
use groupoid_measures::finite::{
    average_function, boundary_matrix, boundary_squares_vanish, coinvariants, convolve, homology, is_orbit_constant,
    is_trace, nerve, orbits, restrict_full_subgroupoid, s_shriek, t_shriek,
    transverse_measure_cone, ArrowWeights, FiniteGroupoid, HaarWeight, ObjectWeights, Rational,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::Value;

use super::{params, Measurement, NoParams};

/// A rational number in a scenario: an integer or a string `"p/q"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Q {
    Int(i64),
    Text(String),
}

impl Q {
    fn value(&self) -> Result<Rational> {
        Ok(match self {
            Self::Int(n) => rat(*n),
            Self::Text(s) => match s.trim().parse::<Rational>() {
                Ok(q) => q,
                Err(_) => bail!("`{s}` is not a rational number"),
            },
        })
    }
}

fn rationals(values: &[Q], expected_len: usize, what: &str) -> Result<Vec<Rational>> {
    ensure!(values.len() == expected_len, "{what}: expected {expected_len} entries, found {}", values.len());
    values.iter().map(Q::value).collect()
}

fn to_f64(q: &Rational) -> f64 {
    ObjectWeights(vec![q.clone()]).as_f64()[0]
}

fn vector_rows(name: &str, got: &[f64], expected: &[Rational]) -> Vec<Measurement> {
    got.iter().zip(expected).enumerate().map(|(i, (g, e))| Measurement::labeled(format!("{name}{i}"), *g, to_f64(e))).collect()
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Expected<T> {
    expected: T,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct MaybeExpected<T> {
    expected: Option<T>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Shriek {
    u: Option<Vec<Q>>,
    expected: Vec<Q>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Convolution {
    u: Vec<Q>,
    v: Vec<Q>,
    expected: Vec<Q>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Trace {
    w: Vec<Q>,
    expected: bool,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Samples {
    samples: Option<usize>,
    kmax: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Degree {
    k: usize,
    expected: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Restriction {
    subset: Vec<usize>,
    kmax: Option<usize>,
    isotropy: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Average {
    rho: Option<Vec<Q>>,
    f: Vec<Q>,
    expected: Vec<Q>,
}

fn random_weights(g: &FiniteGroupoid, rng: &mut ChaCha8Rng, constant: bool) -> ObjectWeights {
    let mut w = vec![rat(0); g.object_count()];
    for orbit in orbits(g) {
        let base = rng.gen_range(-4..=4);
        for x in orbit {
            w[x] = rat(if constant { base } else { rng.gen_range(-4..=4) });
        }
    }
    ObjectWeights(w)
}

pub fn evaluate(name: &str, g: &FiniteGroupoid, raw: &Value, seed: u64) -> Result<Vec<Measurement>> {
    let (n_obj, n_arr) = (g.object_count(), g.arrow_count());
    Ok(match name {
        "validate" => {
            params::<NoParams>(raw)?;
            vec![Measurement::new(g.validate().len() as f64, 0.0)]
        }
        "orbits" => {
            let p: Expected<Vec<Vec<usize>>> = params(raw)?;
            let normalize = |mut o: Vec<Vec<usize>>| {
                o.iter_mut().for_each(|v| v.sort_unstable());
                o.sort();
                o
            };
            let got = normalize(orbits(g));
            let want = normalize(p.expected);
            vec![
                Measurement::labeled("count", got.len() as f64, want.len() as f64),
                Measurement::labeled("partition", flag(got == want), 1.0),
            ]
        }
        "s_shriek" | "t_shriek" => {
            let p: Shriek = params(raw)?;
            let u = match &p.u {
                Some(u) => ArrowWeights(rationals(u, n_arr, "u")?),
                None => ArrowWeights(vec![rat(1); n_arr]),
            };
            let expected = rationals(&p.expected, n_obj, "expected")?;
            let got = if name == "s_shriek" { s_shriek(g, &u) } else { t_shriek(g, &u) };
            vector_rows("x", &got.as_f64(), &expected)
        }
        "coinvariants" => {
            let p: MaybeExpected<usize> = params(raw)?;
            let dim = coinvariants(g).dimension as f64;
            let mut rows = vec![
                Measurement::labeled("orbits", dim, orbits(g).len() as f64),
                Measurement::labeled("betti0", dim, homology(g, 0).betti()[0] as f64),
            ];
            if let Some(e) = p.expected {
                rows.push(Measurement::labeled("expected", dim, e as f64));
            }
            rows
        }
        "transverse_cone" => {
            let p: MaybeExpected<Vec<Vec<Q>>> = params(raw)?;
            let cone = transverse_measure_cone(g);
            let outside = cone.basis.iter().filter(|v| !is_transverse_measure(g, v)).count();
            let mut rows = vec![
                Measurement::labeled("dimension", cone.dimension() as f64, orbits(g).len() as f64),
                Measurement::labeled("basis_outside", outside as f64, 0.0),
            ];
            if let Some(expected) = p.expected {
                let mut inside = 0;
                for v in &expected {
                    inside += is_transverse_measure(g, &ObjectWeights(rationals(v, n_obj, "basis vector")?)) as usize;
                }
                rows.push(Measurement::labeled("expected_dimension", cone.dimension() as f64, expected.len() as f64));
                rows.push(Measurement::labeled("expected_inside", inside as f64, expected.len() as f64));
            }
            rows
        }
        "convolution" => {
            let p: Convolution = params(raw)?;
            let u = ArrowWeights(rationals(&p.u, n_arr, "u")?);
            let v = ArrowWeights(rationals(&p.v, n_arr, "v")?);
            let expected = rationals(&p.expected, n_arr, "expected")?;
            vector_rows("arrow", &convolve(g, &u, &v).as_f64(), &expected)
        }
        "trace" => {
            let p: Trace = params(raw)?;
            let w = ObjectWeights(rationals(&p.w, n_obj, "w")?);
            let check = is_trace(g, &w);
            vec![
                Measurement::labeled("expected", flag(check.is_trace), flag(p.expected)),
                Measurement::labeled("orbit_constant", flag(check.is_trace), flag(is_orbit_constant(g, &w))),
                Measurement::labeled("witness", flag(check.witness.is_some()), flag(!check.is_trace)),
            ]
        }
        "trace_equivalence" => {
            let p: Samples = params(raw)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mismatches = (0..p.samples.unwrap_or(20))
                .filter(|i| {
                    let w = random_weights(g, &mut rng, i % 2 == 0);
                    is_trace(g, &w).is_trace != is_orbit_constant(g, &w)
                })
                .count();
            vec![Measurement::labeled("disagreements", mismatches as f64, 0.0)]
        }
        "nerve_size" => {
            let p: Degree = params(raw)?;
            vec![Measurement::new(nerve(g, p.k).len() as f64, p.expected as f64)]
        }
        "boundary_squares" => {
            let p: Samples = params(raw)?;
            let kmax = p.kmax.unwrap_or(3);
            let failing = boundary_squares_vanish(g, kmax).err().map_or(0.0, |k| k as f64);
            vec![Measurement::labeled("first_failing_degree", failing, 0.0)]
        }
        "boundary_rank" => {
            let p: Degree = params(raw)?;
            vec![Measurement::new(boundary_matrix(g, p.k)?.rank() as f64, p.expected as f64)]
        }
        "betti" => {
            let p: Expected<Vec<usize>> = params(raw)?;
            ensure!(!p.expected.is_empty(), "expected: at least betti_0");
            let betti = homology(g, p.expected.len() - 1).betti();
            betti.iter().zip(&p.expected).enumerate().map(|(k, (b, e))| Measurement::labeled(format!("b{k}"), *b as f64, *e as f64)).collect()
        }
        "betti_orbits" => {
            params::<NoParams>(raw)?;
            vec![Measurement::new(homology(g, 0).betti()[0] as f64, orbits(g).len() as f64)]
        }
        "restriction" => {
            let p: Restriction = params(raw)?;
            let kmax = p.kmax.unwrap_or(2);
            let h = restrict_full_subgroupoid(g, &p.subset)?;
            let (full, restricted) = (homology(g, kmax).betti(), homology(&h, kmax).betti());
            let mut rows: Vec<Measurement> = restricted
                .iter()
                .zip(&full)
                .enumerate()
                .map(|(k, (r, f))| Measurement::labeled(format!("b{k}"), *r as f64, *f as f64))
                .collect();
            if let Some(order) = p.isotropy {
                let loops = h.arrows().filter(|&a| h.src(a) == 0 && h.tgt(a) == 0).count();
                rows.push(Measurement::labeled("isotropy", loops as f64, order as f64));
            }
            rows
        }
        "morita_subsets" => {
            let p: Samples = params(raw)?;
            let kmax = p.kmax.unwrap_or(2);
            let full = homology(g, kmax).betti();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut mismatches = 0;
            for _ in 0..p.samples.unwrap_or(5) {
                let mut subset: Vec<usize> =
                    orbits(g).iter().map(|o| *o.choose(&mut rng).expect("orbits are nonempty")).collect();
                for x in g.objects() {
                    if !subset.contains(&x) && rng.gen_bool(0.5) {
                        subset.push(x);
                    }
                }
                subset.shuffle(&mut rng);
                let h = restrict_full_subgroupoid(g, &subset)?;
                mismatches += (homology(&h, kmax).betti() != full) as usize;
            }
            vec![Measurement::labeled("mismatches", mismatches as f64, 0.0)]
        }
        "average" => {
            let p: Average = params(raw)?;
            let rho = match &p.rho {
                Some(r) => HaarWeight::new(rationals(r, n_obj, "rho")?)?,
                None => HaarWeight::normalized_counting(g),
            };
            let f = ObjectWeights(rationals(&p.f, n_obj, "f")?);
            let expected = rationals(&p.expected, n_obj, "expected")?;
            vector_rows("x", &average_function(g, &rho, &f)?.as_f64(), &expected)
        }
        _ => unreachable!("check names are validated against the catalog"),
    })
}
