//! Attested members of `H(E²)` (and `H(E)`), built from basis families with
//! removable singularities.
//!
//! `H(E²)` families: `A B/(z − t)` at nodes, `A B/(z − s)` at companion
//! nodes, `P_s = A²/(z − s)²`, `Q_s = A²/(z − s)` and kernel sections
//! `K₂(w, ·)`. `H(E)` families: `B/(z − t)`, `A/(z − s)` and `K(w, ·)`.
//! Here `A, B` are the companions at the angle of the space, `t` ranges over
//! zeros of `B` and `s` over zeros of `A`.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::interp::{Sample, SampleSet};
use crate::kernel::{length_scale, product_jet, taylor_quotient, NEAR};
use crate::nodes::{find_nodes, NodeSet};
use crate::space::{Jet, SpaceDescriptor};
use crate::{Complex, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisFamily {
    ABoverT,
    ABoverS,
    P,
    Q,
    KernelSection,
    BoverT,
    AoverS,
    KernelSectionE,
}

/// Which space a family lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level {
    /// `H(E)`
    E,
    /// `H(E²)`
    E2,
}

impl BasisFamily {
    pub fn level(self) -> Level {
        match self {
            BasisFamily::BoverT | BasisFamily::AoverS | BasisFamily::KernelSectionE => Level::E,
            _ => Level::E2,
        }
    }

    /// Families whose anchor is a zero of `A` rather than of `B`.
    fn on_companion_nodes(self) -> bool {
        matches!(
            self,
            BasisFamily::ABoverS | BasisFamily::P | BasisFamily::Q | BasisFamily::AoverS
        )
    }

    fn is_kernel(self) -> bool {
        matches!(self, BasisFamily::KernelSection | BasisFamily::KernelSectionE)
    }
}

/// Where a term sits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    /// k-th node counted from the one nearest the origin (ties go right).
    Index(i64),
    /// A node given by location (matched to 1e-9), or the kernel point.
    Point(f64),
    /// Complex kernel point `[re, im]`.
    Complex([f64; 2]),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecipeTerm {
    pub family: BasisFamily,
    pub anchor: Anchor,
    pub coeff: Complex,
}

/// A recipe plus the space it lives in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratedFunction {
    pub space: SpaceDescriptor,
    pub recipe: Vec<RecipeTerm>,
    /// Node window `[−window, window]` used to resolve index anchors.
    #[serde(default = "default_window")]
    pub window: f64,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_window() -> f64 {
    40.0
}

#[derive(Clone, Copy, Debug)]
enum Numerator {
    AB,
    AA,
    A,
    B,
    // B(z)A(c) − A(z)B(c) over π, times J for the E² kernel
    Kernel { a_c: Complex, b_c: Complex, with_j: bool },
}

#[derive(Clone, Copy, Debug)]
struct Resolved {
    center: Complex,
    order: usize,
    numerator: Numerator,
    // 4-jet of the numerator at the center
    njet: [Complex; 5],
    coeff: Complex,
}

/// Evaluates a generated function and its derivative anywhere in ℂ.
#[derive(Clone, Debug)]
pub struct FunctionHandle {
    space: SpaceDescriptor,
    level: Level,
    terms: Vec<Resolved>,
    source: GeneratedFunction,
}

fn numerator_jet(num: Numerator, j: &Jet) -> [Complex; 5] {
    match num {
        Numerator::AB => product_jet(&j.a, &j.b),
        Numerator::AA => product_jet(&j.a, &j.a),
        Numerator::A => j.a,
        Numerator::B => j.b,
        Numerator::Kernel { a_c, b_c, .. } => {
            let mut out = [Complex::new(0.0, 0.0); 5];
            for k in 0..5 {
                out[k] = (j.b[k] * a_c - j.a[k] * b_c) / PI;
            }
            out
        }
    }
}

fn resolve_node(set: &NodeSet, anchor: Anchor, family: BasisFamily) -> Result<f64> {
    let unknown = || Error::UnknownNode(format!("{family:?} at {anchor:?}"));
    match anchor {
        Anchor::Index(k) => {
            let c = set.central_index().ok_or_else(unknown)? as i64;
            let i = c + k;
            if i < 0 || i >= set.len() as i64 {
                return Err(unknown());
            }
            Ok(set.nodes[i as usize].t)
        }
        Anchor::Point(x) => set
            .locate(x, 1e-9)
            .map(|i| set.nodes[i].t)
            .ok_or_else(unknown),
        Anchor::Complex(_) => Err(unknown()),
    }
}

/// Resolves a recipe into an evaluable handle.
pub fn make_function(gf: &GeneratedFunction) -> Result<FunctionHandle> {
    let first = gf.recipe.first().ok_or(Error::EmptyRecipe)?;
    let level = first.family.level();
    if gf.recipe.iter().any(|t| t.family.level() != level) {
        return Err(Error::MixedLevels);
    }
    let space = gf.space;
    let w = gf.window;
    let mut t_nodes = None;
    let mut s_nodes = None;
    let mut terms = Vec::with_capacity(gf.recipe.len());
    for term in &gf.recipe {
        let (center, numerator, order) = if term.family.is_kernel() {
            let wpt = match term.anchor {
                Anchor::Point(x) => Complex::new(x, 0.0),
                Anchor::Complex([re, im]) => Complex::new(re, im),
                Anchor::Index(_) => {
                    return Err(Error::UnknownNode(format!(
                        "kernel sections need a point anchor, got {:?}",
                        term.anchor
                    )))
                }
            };
            let c = wpt.conj();
            let jc = space.jet(c)?;
            let with_j = term.family == BasisFamily::KernelSection;
            (
                c,
                Numerator::Kernel {
                    a_c: jc.a[0],
                    b_c: jc.b[0],
                    with_j,
                },
                1,
            )
        } else {
            let set = if term.family.on_companion_nodes() {
                if s_nodes.is_none() {
                    s_nodes = Some(find_nodes(&space.companion(), -w, w)?);
                }
                s_nodes.as_ref().unwrap()
            } else {
                if t_nodes.is_none() {
                    t_nodes = Some(find_nodes(&space, -w, w)?);
                }
                t_nodes.as_ref().unwrap()
            };
            let x = resolve_node(set, term.anchor, term.family)?;
            let (num, order) = match term.family {
                BasisFamily::ABoverT | BasisFamily::ABoverS => (Numerator::AB, 1),
                BasisFamily::P => (Numerator::AA, 2),
                BasisFamily::Q => (Numerator::AA, 1),
                BasisFamily::BoverT => (Numerator::B, 1),
                BasisFamily::AoverS => (Numerator::A, 1),
                _ => unreachable!("kernel families handled above"),
            };
            (Complex::new(x, 0.0), num, order)
        };
        let mut njet = numerator_jet(numerator, &space.jet(center)?);
        // the numerator vanishes at the center; drop rounding residue
        for v in njet.iter_mut().take(order) {
            *v = Complex::new(0.0, 0.0);
        }
        terms.push(Resolved {
            center,
            order,
            numerator,
            njet,
            coeff: term.coeff,
        });
    }
    Ok(FunctionHandle {
        space,
        level,
        terms,
        source: gf.clone(),
    })
}

impl FunctionHandle {
    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn recipe(&self) -> &GeneratedFunction {
        &self.source
    }

    /// `(F(z), F′(z))`.
    pub fn eval(&self, z: Complex) -> Result<(Complex, Complex)> {
        let j = self.space.jet(z)?;
        let near = NEAR / length_scale(&self.space);
        let mut v = Complex::new(0.0, 0.0);
        let mut d = Complex::new(0.0, 0.0);
        for t in &self.terms {
            let h = z - t.center;
            let (q, dq) = if h.norm() < near {
                taylor_quotient(&t.njet, t.order, h)
            } else {
                let (n, n1) = match t.numerator {
                    Numerator::AB => (j.a[0] * j.b[0], j.a[1] * j.b[0] + j.a[0] * j.b[1]),
                    Numerator::AA => (j.a[0] * j.a[0], j.a[0] * j.a[1] * 2.0),
                    Numerator::A => (j.a[0], j.a[1]),
                    Numerator::B => (j.b[0], j.b[1]),
                    Numerator::Kernel { a_c, b_c, .. } => (
                        (j.b[0] * a_c - j.a[0] * b_c) / PI,
                        (j.b[1] * a_c - j.a[1] * b_c) / PI,
                    ),
                };
                let inv = h.inv();
                if t.order == 2 {
                    let q = n * inv * inv;
                    (q, (n1 - q * h * 2.0) * inv * inv)
                } else {
                    let q = n * inv;
                    (q, (n1 - q) * inv)
                }
            };
            let (q, dq) = match t.numerator {
                Numerator::Kernel { a_c, b_c, with_j: true } => {
                    // J(w, z) = 2(A(w̄)A(z) + B(w̄)B(z))
                    let jj = (a_c * j.a[0] + b_c * j.b[0]) * 2.0;
                    let jj1 = (a_c * j.a[1] + b_c * j.b[1]) * 2.0;
                    (q * jj, dq * jj + q * jj1)
                }
                _ => (q, dq),
            };
            v += t.coeff * q;
            d += t.coeff * dq;
        }
        Ok((v, d))
    }

    pub fn value(&self, z: Complex) -> Result<Complex> {
        self.eval(z).map(|p| p.0)
    }
}

/// Value and first derivative of an entire function.
pub trait EntireFunction: Sync {
    fn eval(&self, z: Complex) -> Result<(Complex, Complex)>;
}

impl EntireFunction for FunctionHandle {
    fn eval(&self, z: Complex) -> Result<(Complex, Complex)> {
        FunctionHandle::eval(self, z)
    }
}

/// Wraps a closed form `z ↦ (F(z), F′(z))`.
pub struct ClosedForm<F>(pub F);

impl<F: Fn(Complex) -> (Complex, Complex) + Sync> EntireFunction for ClosedForm<F> {
    fn eval(&self, z: Complex) -> Result<(Complex, Complex)> {
        Ok((self.0)(z))
    }
}

/// Values and derivatives at every node of `nodes`.
pub fn sample_on(f: &dyn EntireFunction, nodes: &Arc<NodeSet>) -> Result<SampleSet> {
    let samples = nodes
        .nodes
        .iter()
        .map(|n| {
            f.eval(Complex::new(n.t, 0.0))
                .map(|(v, d)| Sample { t: n.t, f: v, f1: d })
        })
        .collect::<Result<Vec<_>>>()?;
    SampleSet::new(Arc::clone(nodes), samples)
}

/// A reproducible random recipe of `n_terms` terms drawn from `families`,
/// with index anchors in `[−max_index, max_index]` and coefficients in the
/// unit square.
pub fn random_recipe(
    space: SpaceDescriptor,
    families: &[BasisFamily],
    n_terms: usize,
    max_index: i64,
    seed: u64,
) -> GeneratedFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let recipe = (0..n_terms)
        .map(|_| {
            let family = families[rng.gen_range(0..families.len())];
            let anchor = if family.is_kernel() {
                Anchor::Point(rng.gen_range(-(max_index as f64)..=max_index as f64))
            } else {
                Anchor::Index(rng.gen_range(-max_index..=max_index))
            };
            RecipeTerm {
                family,
                anchor,
                coeff: Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            }
        })
        .collect();
    GeneratedFunction {
        space,
        recipe,
        window: default_window().max(4.0 * max_index as f64 + 8.0),
        seed: Some(seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{eval_k2, eval_p};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn single(space: SpaceDescriptor, family: BasisFamily, anchor: Anchor) -> FunctionHandle {
        make_function(&GeneratedFunction {
            space,
            recipe: vec![RecipeTerm { family, anchor, coeff: c(1.0, 0.0) }],
            window: 10.0,
            seed: None,
        })
        .unwrap()
    }

    #[test]
    fn ab_over_s_at_half() {
        let s = SpaceDescriptor::paley_wiener(PI).unwrap();
        let f = single(s, BasisFamily::ABoverS, Anchor::Point(0.5));
        // sin πz cos πz/(z − 1/2) → A′(1/2)B(1/2) = −π at the node
        let (v, _) = f.eval(c(0.5, 0.0)).unwrap();
        assert!((v + PI).norm() < 1e-12, "{v}");
        let z = c(0.3, 0.2);
        let want = (PI * z).sin() * (PI * z).cos() / (z - 0.5);
        assert!((f.value(z).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn p_matches_kernel_module() {
        let s = SpaceDescriptor::bessel(0.5).unwrap();
        let f = single(s, BasisFamily::P, Anchor::Index(1));
        let cs = s.companion();
        let ns = find_nodes(&cs, -10.0, 10.0).unwrap();
        let node = ns.nodes[ns.central_index().unwrap() + 1];
        for &z in &[c(0.3, 0.1), c(node.t + 1e-6, 0.0), c(-2.0, 1.0)] {
            let (a, da) = f.eval(z).unwrap();
            let (b, db) = eval_p(&cs, &node, z).unwrap();
            assert!((a - b).norm() <= 1e-13 * b.norm().max(1.0), "{z}");
            assert!((da - db).norm() <= 1e-12 * db.norm().max(1.0), "{z}");
        }
    }

    #[test]
    fn kernel_section_matches_kernel_module() {
        let s = SpaceDescriptor::bessel(1.0).unwrap();
        let w = c(0.7, 0.4);
        let f = single(s, BasisFamily::KernelSection, Anchor::Complex([w.re, w.im]));
        for &z in &[c(2.0, 0.0), w.conj(), c(-1.0, 0.3)] {
            let want = eval_k2(&s, w, z).unwrap().value;
            assert!((f.value(z).unwrap() - want).norm() < 1e-13, "{z}");
        }
    }

    #[test]
    fn derivative_matches_differences() {
        let s = SpaceDescriptor::bessel(0.0).unwrap();
        let gf = random_recipe(s, &[BasisFamily::ABoverT, BasisFamily::ABoverS, BasisFamily::P, BasisFamily::Q], 8, 5, 11);
        let f = make_function(&gf).unwrap();
        for &z in &[c(0.3, 0.0), c(1.1, -0.5), c(4.0, 0.2)] {
            let (_, d) = f.eval(z).unwrap();
            let fd = crate::numerics::central_difference_complex(|w| f.value(w).unwrap(), z, 1e-5);
            assert!((d - fd).norm() <= 1e-6 * d.norm().max(1.0), "{z}");
        }
    }

    #[test]
    fn seeds_are_deterministic() {
        let s = SpaceDescriptor::paley_wiener(PI).unwrap();
        let fam = [BasisFamily::ABoverT, BasisFamily::Q, BasisFamily::KernelSection];
        let a = make_function(&random_recipe(s, &fam, 8, 6, 3)).unwrap();
        let b = make_function(&random_recipe(s, &fam, 8, 6, 3)).unwrap();
        let z = c(0.123, 0.456);
        assert_eq!(a.value(z).unwrap().re.to_bits(), b.value(z).unwrap().re.to_bits());
        assert_ne!(random_recipe(s, &fam, 8, 6, 4).recipe, a.recipe().recipe);
    }

    #[test]
    fn recipe_errors() {
        let s = SpaceDescriptor::paley_wiener(PI).unwrap();
        let mk = |recipe: Vec<RecipeTerm>| make_function(&GeneratedFunction { space: s, recipe, window: 5.0, seed: None });
        assert!(matches!(mk(vec![]), Err(Error::EmptyRecipe)));
        let t = |family, anchor| RecipeTerm { family, anchor, coeff: c(1.0, 0.0) };
        assert!(matches!(mk(vec![t(BasisFamily::ABoverT, Anchor::Index(99))]), Err(Error::UnknownNode(_))));
        assert!(matches!(mk(vec![t(BasisFamily::ABoverT, Anchor::Point(0.25))]), Err(Error::UnknownNode(_))));
        assert!(matches!(
            mk(vec![t(BasisFamily::ABoverT, Anchor::Index(0)), t(BasisFamily::BoverT, Anchor::Index(1))]),
            Err(Error::MixedLevels)
        ));
    }

    #[test]
    fn recipe_json_round_trip() {
        let s = SpaceDescriptor::bessel(2.0).unwrap();
        let gf = random_recipe(s, &[BasisFamily::P, BasisFamily::KernelSection], 5, 3, 9);
        let back: GeneratedFunction = serde_json::from_str(&serde_json::to_string(&gf).unwrap()).unwrap();
        assert_eq!(gf, back);
    }
}
