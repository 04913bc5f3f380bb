//! Anti-involutions `𝓒(n,F) = {T ∈ Sp(n,F) : T² = −I}`, the eigenspace
//! model `T ↦ V_i(T)`, and involutions `T² = aI`.

use std::collections::{HashMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::EScalar;
use crate::lagrangian::{Form, Lagrangian};
use crate::linalg::Mat;
use crate::orbit::act;
use crate::symplectic::{generators, is_member, EnumeratedGroup, Group, SpaceParams};

fn square(t: &Mat) -> Mat {
    t * t
}

/// Filters `𝓒(n,F)` out of the enumerated `Sp(n,F)`.
pub fn anti_involutions(spf: &EnumeratedGroup, space: &SpaceParams) -> Vec<Mat> {
    let minus = -&space.identity();
    spf.elements()
        .par_iter()
        .filter(|t| square(t) == minus)
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareRootCriterionReport {
    pub group_order: usize,
    pub anti_involutions: usize,
    pub symmetric_jt: usize,
    pub forward_failures: usize,
    pub backward_failures: usize,
}

impl SquareRootCriterionReport {
    pub fn passed(&self) -> bool {
        self.forward_failures == 0 && self.backward_failures == 0
    }
}

/// `T² = −I ⟺ JT symmetric`, over every element of `Sp(n,F)`.
pub fn square_root_criterion(spf: &EnumeratedGroup, space: &SpaceParams) -> SquareRootCriterionReport {
    let j = space.j();
    let minus = -&space.identity();
    let flags: Vec<(bool, bool)> = spf
        .elements()
        .par_iter()
        .map(|t| (square(t) == minus, (&j * t).is_symmetric()))
        .collect();
    SquareRootCriterionReport {
        group_order: flags.len(),
        anti_involutions: flags.iter().filter(|f| f.0).count(),
        symmetric_jt: flags.iter().filter(|f| f.1).count(),
        forward_failures: flags.iter().filter(|f| f.0 && !f.1).count(),
        backward_failures: flags.iter().filter(|f| f.1 && !f.0).count(),
    }
}

fn require_anti_involution(t: &Mat, space: &SpaceParams) -> Result<()> {
    if !is_member(t, Group::SpF)? || square(t) != -&space.identity() {
        return Err(Error::Parameter(format!("not an anti-involution: {t}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BtReport {
    pub symmetric: bool,
    pub det: String,
    pub det_is_one: bool,
    pub discriminant_square: bool,
    pub equivariant: bool,
}

impl BtReport {
    pub fn passed(&self) -> bool {
        self.symmetric && self.det_is_one && self.discriminant_square && self.equivariant
    }
}

/// The Gram matrix `JT` of `b_T`.
pub fn b_t(t: &Mat, space: &SpaceParams) -> Result<Mat> {
    require_anti_involution(t, space)?;
    Ok(&space.j() * t)
}

/// Symmetry, `det(JT) = 1`, the square-discriminant criterion for
/// equivalence with the Euclidean form, and `J(gTg⁻¹) = ᵗg⁻¹ (JT) g⁻¹` on
/// generators.
pub fn b_t_report(t: &Mat, space: &SpaceParams) -> Result<BtReport> {
    let jt = b_t(t, space)?;
    let det = jt.det()?;
    let f = space.field;
    let j = space.j();
    let equivariant = generators(Group::SpF, space).iter().all(|g| {
        let gi = g.mat().inverse().ok().flatten().expect("group elements are invertible");
        let conj = &(g.mat() * t) * &gi;
        &j * &conj == &(&gi.transpose() * &jt) * &gi
    });
    Ok(BtReport {
        symmetric: jt.is_symmetric(),
        det: det.to_string(),
        det_is_one: det == f.one(),
        discriminant_square: det.is_rational() && f.is_square_in_f(det),
        equivariant,
    })
}

/// The square root of `-1` used throughout, first in scan order. Lies in `F`
/// exactly when `-1` is a square there.
pub fn imaginary_unit(space: &SpaceParams) -> EScalar {
    let f = space.field;
    f.sqrt_in_e(-f.one()).expect("every element of F is a square in E")
}

/// `V_i(T) = ker(T − iI)`.
pub fn eigenspace(t: &Mat, space: &SpaceParams, i: EScalar) -> Result<Lagrangian> {
    let shifted = t.checked_sub(&space.identity().scale(i))?;
    Lagrangian::from_basis(&shifted.kernel())
}

pub fn eigenspace_model(t: &Mat, space: &SpaceParams) -> Result<Lagrangian> {
    require_anti_involution(t, space)?;
    eigenspace(t, space, imaginary_unit(space))
}

/// Stacks real and imaginary parts so that `F`-ranks can be computed.
fn realify(m: &Mat) -> Mat {
    let f = m.field();
    Mat::from_fn(f, 2 * m.rows(), m.cols(), |r, c| {
        let x = m[(r % m.rows(), c)];
        if r < m.rows() {
            f.from_f(x.re() as i64)
        } else {
            f.from_f(x.im() as i64)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenspaceReport {
    pub nonzero: bool,
    pub conjugate_is_minus_i: bool,
    pub no_rational_vectors: bool,
    pub real_parametrization: bool,
    pub lagrangian: bool,
    pub identity_vi_pairs: u64,
    pub identity_vi_failures: u64,
    pub h_e_orthogonal: bool,
    pub h_e_nondegenerate: bool,
}

impl EigenspaceReport {
    pub fn passed(&self) -> bool {
        self.nonzero
            && self.conjugate_is_minus_i
            && self.no_rational_vectors
            && self.real_parametrization
            && self.lagrangian
            && self.identity_vi_failures == 0
            && self.h_e_orthogonal
            && self.h_e_nondegenerate
    }
}

fn rational_vectors(space: &SpaceParams) -> Vec<Vec<EScalar>> {
    let f = space.field;
    let q = f.q() as usize;
    let dim = space.dim();
    (0..q.pow(dim as u32))
        .map(|mut k| {
            (0..dim)
                .map(|_| {
                    let x = f.from_f((k % q) as i64);
                    k /= q;
                    x
                })
                .collect()
        })
        .collect()
}

/// Items (i)–(viii) for one anti-involution, assuming `-1` is not a square.
///
/// Identity (vi) is checked on all pairs of `F^{2n}` when there are at most
/// `exhaustive_limit` vectors, else on `random_pairs` seeded pairs.
pub fn eigenspace_properties(t: &Mat, space: &SpaceParams, exhaustive_limit: usize, random_pairs: u64, seed: u64) -> Result<EigenspaceReport> {
    require_anti_involution(t, space)?;
    let i = imaginary_unit(space);
    if i.is_rational() {
        return Err(Error::Parameter("the eigenspace suite assumes -1 is not a square in F".into()));
    }
    let n = space.n;
    let vi = eigenspace(t, space, i)?;
    let vmi = eigenspace(t, space, -i)?;
    let lagrangian = vi.n() == n && vmi.n() == n;
    let (_, inter) = vi.conj_dims();

    let param = space.identity().checked_sub(&t.scale(i))?;
    let in_vi = (t * &param) == param.scale(i);
    let real_parametrization = in_vi && realify(&param).rank() == 2 * n;

    let jt = &space.j() * t;
    let check = |v: &[EScalar], w: &[EScalar]| -> bool {
        let x = param.apply(v).expect("length 2n");
        let y = param.apply(w).expect("length 2n");
        let lhs = space.h_e(&x, &y).expect("length 2n");
        let two = space.field.from_f(2);
        let rhs = two * space.omega(v, w).expect("length 2n") + two * i * jt.bilinear(v, w).expect("length 2n");
        lhs == rhs
    };
    let q_pow = (space.q() as u128).pow(space.dim() as u32);
    let (pairs, failures) = if q_pow <= exhaustive_limit as u128 {
        let vs = rational_vectors(space);
        let failures: u64 = vs
            .par_iter()
            .map(|v| vs.iter().filter(|w| !check(v, w)).count() as u64)
            .sum();
        ((vs.len() as u64).pow(2), failures)
    } else {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = space.field;
        let mut failures = 0;
        for _ in 0..random_pairs {
            let v: Vec<EScalar> = (0..space.dim()).map(|_| f.from_f(rng.gen_range(0..f.q()) as i64)).collect();
            let w: Vec<EScalar> = (0..space.dim()).map(|_| f.from_f(rng.gen_range(0..f.q()) as i64)).collect();
            failures += !check(&v, &w) as u64;
        }
        (random_pairs, failures)
    };

    let cross = Mat::from_fn(space.field, n, n, |a, b| {
        space
            .h_e(&vi.basis().col(a), &vmi.basis().col(b))
            .expect("length 2n")
    });
    Ok(EigenspaceReport {
        nonzero: vi.n() > 0 && vmi.n() > 0,
        conjugate_is_minus_i: vi.conj() == vmi,
        no_rational_vectors: inter == 0,
        real_parametrization,
        lagrangian,
        identity_vi_pairs: pairs,
        identity_vi_failures: failures,
        h_e_orthogonal: cross.is_zero(),
        h_e_nondegenerate: vi.gram(Form::HE).rank() == n,
    })
}

/// Conjugation orbit of `x` under `gens` (`x ↦ g x g⁻¹`).
pub fn conjugation_orbit(x: &Mat, gens: &[(Mat, Mat)]) -> HashSet<Mat> {
    let mut seen = HashSet::from([x.clone()]);
    let mut stack = vec![x.clone()];
    while let Some(y) = stack.pop() {
        for (g, gi) in gens {
            let z = &(g * &y) * gi;
            if seen.insert(z.clone()) {
                stack.push(z);
            }
        }
    }
    seen
}

fn gens_with_inverses(space: &SpaceParams) -> Vec<(Mat, Mat)> {
    generators(Group::SpF, space)
        .into_iter()
        .map(|g| {
            let gi = g.mat().inverse().ok().flatten().expect("invertible");
            (g.into_mat(), gi)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenspaceMapReport {
    pub branch: &'static str,
    pub anti_involutions: usize,
    pub target_size: usize,
    pub images_in_target: bool,
    pub injective: bool,
    pub surjective: bool,
    pub equivariant: bool,
    pub max_fiber: usize,
    pub single_conjugation_orbit: Option<bool>,
    pub isotropy_order: Option<usize>,
    pub isotropy_is_k_part: Option<bool>,
    pub homogeneous_count: Option<bool>,
    /// Number of `a ∈ F^×` with `diag(aI, −aI)` in the isotropy of `H`.
    pub isotropy_diag_a_minus_a: Option<usize>,
    /// Number of `a ∈ F^×` with `diag(aI, a⁻¹I)` in the isotropy of `H`.
    pub isotropy_diag_a_inverse: Option<usize>,
    pub cayley_conjugates_h_to_j: Option<bool>,
}

impl EigenspaceMapReport {
    pub fn passed(&self) -> bool {
        let common = self.images_in_target && self.surjective && self.equivariant;
        if self.branch == "minus-one-nonsquare" {
            common && self.injective && self.anti_involutions == self.target_size
        } else {
            common
                && self.single_conjugation_orbit == Some(true)
                && self.isotropy_is_k_part == Some(true)
                && self.homogeneous_count == Some(true)
                && self.cayley_conjugates_h_to_j == Some(true)
                && (self.anti_involutions <= self.target_size || self.max_fiber > 1)
        }
    }
}

/// `H = diag(iI, −iI)`, an anti-involution when `i ∈ F`.
pub fn h_matrix(space: &SpaceParams) -> Mat {
    let i = imaginary_unit(space);
    let n = space.n;
    let d: Vec<EScalar> = (0..2 * n).map(|j| if j < n { i } else { -i }).collect();
    Mat::diag(space.field, &d)
}

/// `C(e_j) = (e_j + i e_{n+j}) / (−2i)`, `C(e_{n+j}) = e_j − i e_{n+j}`.
pub fn involution_cayley(space: &SpaceParams) -> Mat {
    let f = space.field;
    let n = space.n;
    let i = imaginary_unit(space);
    let a = (f.from_f(-2) * i).inv().expect("nonzero");
    Mat::block(
        &Mat::scalar(f, n, a),
        &Mat::identity(f, n),
        &Mat::scalar(f, n, a * i),
        &Mat::scalar(f, n, -i),
    )
    .expect("n x n blocks")
}

/// The eigenspace map `𝓒(n,F) → 𝓛`, checked against its target stratum.
///
/// `target` is `H_n` when `-1` is not a square and `H_0` when it is.
pub fn eigenspace_map(
    space: &SpaceParams,
    spf: &EnumeratedGroup,
    anti: &[Mat],
    target: &[Lagrangian],
) -> Result<EigenspaceMapReport> {
    let i = imaginary_unit(space);
    let nonsquare = !i.is_rational();
    let images: Vec<Lagrangian> = anti
        .par_iter()
        .map(|t| eigenspace(t, space, i))
        .collect::<Result<_>>()?;
    let target_set: HashSet<&Lagrangian> = target.iter().collect();
    let mut fibers: HashMap<&Lagrangian, usize> = HashMap::new();
    for w in &images {
        *fibers.entry(w).or_default() += 1;
    }
    let images_in_target = images.iter().all(|w| target_set.contains(w));
    let injective = fibers.len() == images.len();
    let surjective = target.iter().all(|w| fibers.contains_key(w));
    let gens = gens_with_inverses(space);
    let equivariant = anti.par_iter().zip(images.par_iter()).all(|(t, v)| {
        gens.iter().all(|(g, gi)| {
            let moved = act(g, v).expect("shapes agree");
            eigenspace(&(&(g * t) * gi), space, i).is_ok_and(|w| w == moved)
        })
    });
    let mut report = EigenspaceMapReport {
        branch: if nonsquare { "minus-one-nonsquare" } else { "minus-one-square" },
        anti_involutions: anti.len(),
        target_size: target.len(),
        images_in_target,
        injective,
        surjective,
        equivariant,
        max_fiber: fibers.values().copied().max().unwrap_or(0),
        single_conjugation_orbit: None,
        isotropy_order: None,
        isotropy_is_k_part: None,
        homogeneous_count: None,
        isotropy_diag_a_minus_a: None,
        isotropy_diag_a_inverse: None,
        cayley_conjugates_h_to_j: None,
    };
    if !nonsquare {
        let n = space.n;
        let f = space.field;
        let h = h_matrix(space);
        let anti_set: HashSet<Mat> = anti.iter().cloned().collect();
        report.single_conjugation_orbit = Some(conjugation_orbit(&h, &gens) == anti_set);
        let isotropy: Vec<&Mat> = spf
            .elements()
            .par_iter()
            .filter(|g| *g * &h == &h * *g)
            .collect();
        let k_part = spf
            .elements()
            .par_iter()
            .filter(|g| g.sub_block(0, n, n, n).is_zero() && g.sub_block(n, 0, n, n).is_zero())
            .count();
        report.isotropy_is_k_part = Some(
            isotropy.len() == k_part
                && isotropy
                    .iter()
                    .all(|g| g.sub_block(0, n, n, n).is_zero() && g.sub_block(n, 0, n, n).is_zero()),
        );
        report.isotropy_order = Some(isotropy.len());
        report.homogeneous_count = Some(spf.len() == anti.len() * isotropy.len());
        let iso_set: HashSet<&Mat> = isotropy.iter().copied().collect();
        let diag_count = |other: &dyn Fn(EScalar) -> EScalar| {
            f.base_elements()
                .skip(1)
                .filter(|&a| {
                    let d: Vec<EScalar> = (0..2 * n).map(|j| if j < n { a } else { other(a) }).collect();
                    iso_set.contains(&Mat::diag(f, &d))
                })
                .count()
        };
        report.isotropy_diag_a_minus_a = Some(diag_count(&|a| -a));
        report.isotropy_diag_a_inverse = Some(diag_count(&|a| a.inv().expect("nonzero")));
        let c = involution_cayley(space);
        let ok = is_member(&c, Group::SpF)?
            && c.inverse()?.is_some_and(|ci| &(&c * &h) * &ci == space.j());
        report.cayley_conjugates_h_to_j = Some(ok);
    }
    Ok(report)
}

/// `S_a = {T ∈ Sp(n,F) : T² = aI}`.
pub fn s_a_set(spf: &EnumeratedGroup, space: &SpaceParams, a: EScalar) -> Vec<Mat> {
    let target = space.identity().scale(a);
    spf.elements()
        .par_iter()
        .filter(|t| square(t) == target)
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaEntry {
    pub a: u32,
    pub size: usize,
}

/// `|S_a|` for every square `a ∈ F^×` other than `±1`. An empty table means
/// there is no such `a`.
pub fn square_classes(spf: &EnumeratedGroup, space: &SpaceParams) -> Vec<SaEntry> {
    let f = space.field;
    let mut squares: Vec<u32> = f
        .base_elements()
        .skip(1)
        .map(|b| (b * b).re())
        .filter(|&a| a != 1 && a != f.q() - 1)
        .collect();
    squares.sort_unstable();
    squares.dedup();
    squares
        .into_iter()
        .map(|a| SaEntry {
            a,
            size: s_a_set(spf, space, f.from_f(a as i64)).len(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionClass {
    pub k: usize,
    pub size: usize,
    pub orbits: usize,
    pub eigenspaces_nondegenerate: bool,
    pub reconstructs_as_t_w: bool,
}

/// Splits `S_1` by the dimension `k` of the `+1` eigenspace, checking that
/// `ω` is nondegenerate on both eigenspaces, that `T = T_{W_1}`, and
/// counting conjugation orbits inside each class.
pub fn classify_involutions(spf: &EnumeratedGroup, space: &SpaceParams) -> Result<Vec<InvolutionClass>> {
    let f = space.field;
    let id = space.identity();
    let j = space.j();
    let s1 = s_a_set(spf, space, f.one());
    let mut by_k: HashMap<usize, Vec<Mat>> = HashMap::new();
    let mut nondegenerate = HashMap::<usize, bool>::new();
    let mut reconstructs = HashMap::<usize, bool>::new();
    for t in &s1 {
        let w1 = t.checked_sub(&id)?.kernel();
        let wm = t.checked_add(&id)?.kernel();
        let k = w1.cols();
        let gram_ok = |w: &Mat| w.cols() == 0 || (&(&w.transpose() * &j) * w).rank() == w.cols();
        let nd = gram_ok(&w1) && gram_ok(&wm);
        let p = w1.hcat(&wm)?;
        let signs: Vec<EScalar> = (0..p.cols()).map(|c| if c < k { f.one() } else { -f.one() }).collect();
        let rec = p
            .inverse()?
            .is_some_and(|pi| &(&p * &Mat::diag(f, &signs)) * &pi == *t);
        *nondegenerate.entry(k).or_insert(true) &= nd;
        *reconstructs.entry(k).or_insert(true) &= rec;
        by_k.entry(k).or_default().push(t.clone());
    }
    let gens = gens_with_inverses(space);
    let mut ks: Vec<usize> = by_k.keys().copied().collect();
    ks.sort_unstable();
    Ok(ks
        .into_iter()
        .map(|k| {
            let class = &by_k[&k];
            let mut remaining: HashSet<Mat> = class.iter().cloned().collect();
            let mut orbits = 0;
            while let Some(x) = remaining.iter().next().cloned() {
                let orb = conjugation_orbit(&x, &gens);
                remaining.retain(|y| !orb.contains(y));
                orbits += 1;
            }
            InvolutionClass {
                k,
                size: class.len(),
                orbits,
                eigenspaces_nondegenerate: nondegenerate[&k],
                reconstructs_as_t_w: reconstructs[&k],
            }
        })
        .collect())
}
