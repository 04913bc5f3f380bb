//! The generalized Cayley transform conjugating `Sp(n,F)` onto `Sp_0(n,F)`,
//! and the partial transforms `t_k` with their Lagrangians `V_k`.
//!
//! When `-1` is not a square in `F`, `M = (iI, I; I, iI)` and the normalized
//! `C = M / √(−2)` lies in `Sp(n,E)`.
//!
//! When `-1` is a square, take `N(v) = −1` and `b ≠ 0` with `b̄ = −b`. The
//! matrix `(vI, bI; I, vbI)` is a similitude of `ω` but carries `h_E` to a
//! multiple of the identity-Gram hermitian form, not of `h_0`. Its left
//! multiple `M = diag(vI, I)·(vI, bI; I, vbI)` satisfies
//! `h_0(Mx, My) = −(v + v̄)b·h_E(x, y)` and is used instead. Its multiplier is
//! never a square in `E`, so no normalized element exists in this branch;
//! conjugation is insensitive to scalars, so `M` itself is used.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::EScalar;
use crate::lagrangian::Lagrangian;
use crate::linalg::Mat;
use crate::symplectic::{
    enumerate, generators, group_order, is_member, permutation_embed, Group, GroupElement,
    SpaceParams,
};

/// The parameters chosen for the transform, first hits in scan order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `-1` is not a square in `F`; `i² = −1`.
    MinusOneNonSquare { i: EScalar },
    /// `-1` is a square in `F`; `N(v) = −1`, `b̄ = −b ≠ 0`.
    MinusOneSquare { v: EScalar, b: EScalar },
}

#[derive(Debug, Clone)]
pub struct CayleyData {
    pub space: SpaceParams,
    pub branch: Branch,
    /// The similitude used for conjugation.
    pub m: Mat,
    pub m_inv: Mat,
    /// `μ` with `ᵗM J M = μ J`.
    pub multiplier: EScalar,
    /// `κ` with `h_0(Mv, Mw) = κ·h_E(v, w)`, read off `ᵗM D M̄ = κ J`.
    pub conformal: EScalar,
    /// `λ` with `λ²μ = 1`, when one exists in `E`.
    pub lambda: Option<EScalar>,
    /// `C = λM ∈ Sp(n,E)`, when normalizable.
    pub c: Option<GroupElement>,
    /// The unmodified matrix `(vI, bI; I, vbI)` of the square branch.
    pub literal: Option<Mat>,
}

fn scalar_blocks(space: &SpaceParams, a: EScalar, b: EScalar, c: EScalar, d: EScalar) -> Mat {
    let f = space.field;
    let n = space.n;
    Mat::block(
        &Mat::scalar(f, n, a),
        &Mat::scalar(f, n, b),
        &Mat::scalar(f, n, c),
        &Mat::scalar(f, n, d),
    )
    .expect("n x n blocks")
}

/// If `ᵗX Y X̄ = κ J` for some scalar `κ`, returns `κ`.
fn j_multiple(g: &Mat, space: &SpaceParams) -> Option<EScalar> {
    let n = space.n;
    let gram = &(&g.transpose() * &space.h0_gram()) * &g.conj_entrywise();
    let kappa = gram[(0, n)];
    (gram == space.j().scale(kappa)).then_some(kappa)
}

/// Builds the Cayley data for `space`.
pub fn cayley(space: &SpaceParams) -> CayleyData {
    let f = space.field;
    let one = f.one();
    let zero = f.zero();
    let minus_one = -one;
    let (branch, m, literal) = if f.epsilon_f() < 0 {
        let i = f.sqrt_in_e(minus_one).expect("every element of F is a square in E");
        (
            Branch::MinusOneNonSquare { i },
            scalar_blocks(space, i, one, one, i),
            None,
        )
    } else {
        let v = f.solve_norm(minus_one).expect("norm is onto F^x");
        let b = f
            .elements()
            .find(|b| !b.is_zero() && b.trace().is_zero())
            .expect("s has trace zero");
        let lit = scalar_blocks(space, v, b, one, v * b);
        let left = scalar_blocks(space, v, zero, zero, one);
        (Branch::MinusOneSquare { v, b }, &left * &lit, Some(lit))
    };
    let m_inv = m
        .inverse()
        .expect("square")
        .expect("the Cayley matrix is invertible");
    let multiplier = {
        let g = &(&m.transpose() * &space.j()) * &m;
        g[(0, space.n)]
    };
    let conformal = j_multiple(&m, space).expect("the Cayley matrix is h_0/h_E conformal");
    let lambda = f
        .sqrt_in_e(multiplier)
        .map(|r| r.inv().expect("multiplier is nonzero"));
    let c = lambda.map(|l| GroupElement::new_unchecked(m.scale(l), Group::SpE));
    CayleyData {
        space: *space,
        branch,
        m,
        m_inv,
        multiplier,
        conformal,
        lambda,
        c,
        literal,
    }
}

impl CayleyData {
    /// `Ad(M)(g) = M g M⁻¹`: `Sp(n,F) → Sp_0(n,F)`.
    pub fn conjugate(&self, g: &Mat) -> Mat {
        &(&self.m * g) * &self.m_inv
    }

    /// `M⁻¹ g M`: `Sp_0(n,F) → Sp(n,F)`.
    pub fn conjugate_back(&self, g: &Mat) -> Mat {
        &(&self.m_inv * g) * &self.m
    }

    pub fn normalized(&self) -> bool {
        self.c.is_some()
    }

    /// The matrix whose action on Lagrangians realizes `H_j → O_j`.
    pub fn act_matrix(&self) -> &Mat {
        &self.m
    }

    /// `ᵗM J M = μ J`.
    pub fn multiplier_holds(&self) -> bool {
        &(&self.m.transpose() * &self.space.j()) * &self.m == self.space.j().scale(self.multiplier)
    }

    /// The conformal factor the construction predicts: `τ_F·i` for the
    /// normalized `C` in the non-square branch, `−(v + v̄)b` for `M` in the
    /// square branch.
    pub fn predicted_conformal(&self) -> EScalar {
        let f = self.space.field;
        match self.branch {
            Branch::MinusOneNonSquare { i } => f.from_f(f.tau_f() as i64) * i,
            Branch::MinusOneSquare { v, b } => -(v.trace() * b),
        }
    }

    /// The conformal factor of the matrix the prediction refers to.
    pub fn effective_conformal(&self) -> EScalar {
        match (self.branch, self.lambda) {
            (Branch::MinusOneNonSquare { .. }, Some(l)) => self.conformal * l.norm(),
            _ => self.conformal,
        }
    }

    /// Whether the literal square-branch matrix is conformal for `(h_E, h_0)`.
    pub fn literal_conformal(&self) -> Option<bool> {
        self.literal
            .as_ref()
            .map(|l| j_multiple(l, &self.space).is_some())
    }

    /// `C⁻¹ = −τ_F·C̄` for the normalized `C` of the non-square branch.
    pub fn inverse_conjugate_identity(&self) -> Option<bool> {
        let Branch::MinusOneNonSquare { .. } = self.branch else {
            return None;
        };
        let c = self.c.as_ref()?.mat();
        let f = self.space.field;
        let rhs = c.conj_entrywise().scale(-f.from_f(f.tau_f() as i64));
        Some(&rhs * c == self.space.identity())
    }

    /// `h_0(Mv, Mw) = κ·h_E(v, w)` for one pair.
    pub fn conformal_pair(&self, v: &[EScalar], w: &[EScalar]) -> bool {
        let s = &self.space;
        let mv = self.m.apply(v).expect("length 2n");
        let mw = self.m.apply(w).expect("length 2n");
        s.h0(&mv, &mw).expect("length 2n") == self.conformal * s.h_e(v, w).expect("length 2n")
    }
}

/// All vectors of `E^{2n}`, in scan order.
pub(crate) fn all_vectors(space: &SpaceParams) -> Vec<Vec<EScalar>> {
    let f = space.field;
    let dim = space.dim();
    let qq = f.order_e();
    let total = qq.pow(dim as u32);
    (0..total)
        .map(|mut k| {
            (0..dim)
                .map(|_| {
                    let x = f.from_index(k % qq);
                    k /= qq;
                    x
                })
                .collect()
        })
        .collect()
}

pub(crate) fn random_vector<R: Rng + ?Sized>(space: &SpaceParams, rng: &mut R) -> Vec<EScalar> {
    let f = space.field;
    (0..space.dim())
        .map(|_| f.from_index(rng.gen_range(0..f.order_e())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureCheck {
    pub group_order: u128,
    pub conjugated_closure: usize,
    pub elementwise_equal: bool,
    pub back_equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConformalCheck {
    pub mode: &'static str,
    pub pairs: u64,
    pub failures: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugationReport {
    pub generators_checked: usize,
    pub offending_generators: Vec<String>,
    pub sp0_samples_checked: usize,
    pub offending_sp0_samples: Vec<String>,
    pub identity_fixed: bool,
    pub multiplier_holds: bool,
    pub predicted_conformal_holds: bool,
    pub scalar_invariance: bool,
    pub inverse_is_conjugate: Option<bool>,
    pub literal_conformal: Option<bool>,
    pub conformal: ConformalCheck,
    pub closure: Option<ClosureCheck>,
}

impl ConjugationReport {
    pub fn passed(&self) -> bool {
        self.offending_generators.is_empty()
            && self.offending_sp0_samples.is_empty()
            && self.identity_fixed
            && self.multiplier_holds
            && self.predicted_conformal_holds
            && self.scalar_invariance
            && self.inverse_is_conjugate.unwrap_or(true)
            && self.conformal.failures == 0
            && self
                .closure
                .as_ref()
                .is_none_or(|c| c.elementwise_equal && c.back_equal && c.conjugated_closure as u128 == c.group_order)
    }
}

/// Elements of `Sp_0(n,F)` built without the Cayley transform: permutation
/// embeddings, `diag(uI, ūI)` with `N(u) = 1`, and `(αI, βI; β̄I, ᾱI)` with
/// `N(α) − N(β) = 1`.
pub fn independent_sp0_elements(space: &SpaceParams) -> Result<Vec<Mat>> {
    let f = space.field;
    let n = space.n;
    let mut out = Vec::new();
    for j in 0..n.saturating_sub(1) {
        let t = Mat::from_fn(f, n, n, |r, c| {
            let image = if c == j {
                j + 1
            } else if c == j + 1 {
                j
            } else {
                c
            };
            if r == image {
                f.one()
            } else {
                f.zero()
            }
        });
        out.push(permutation_embed(&t)?.into_mat());
    }
    for u in f.norm_one() {
        out.push(scalar_blocks(space, u, f.zero(), f.zero(), u.conj()));
    }
    let (alpha, beta) = crate::witness::scalar_transporter_params(f)?;
    out.push(scalar_blocks(space, alpha, beta, beta.conj(), alpha.conj()));
    for g in &out {
        if !is_member(g, Group::Sp0)? {
            return Err(Error::Internal(format!("{g} expected in Sp_0")));
        }
    }
    Ok(out)
}

/// Checks that `Ad(M)` exchanges `Sp(n,F)` and `Sp_0(n,F)`.
///
/// The conformal identity is checked on all pairs of vectors when
/// `|E^{2n}| ≤ exhaustive_limit`, otherwise on `random_pairs` seeded pairs.
/// Closure equality is checked when the group order is at most `cap`.
pub fn verify_conjugation(
    data: &CayleyData,
    cap: usize,
    exhaustive_limit: usize,
    random_pairs: u64,
    seed: u64,
) -> Result<ConjugationReport> {
    let space = &data.space;
    let gens = generators(Group::SpF, space);
    let mut offending_generators = Vec::new();
    for g in &gens {
        let h = data.conjugate(g.mat());
        if !is_member(&h, Group::Sp0)? || data.conjugate_back(&h) != *g.mat() {
            offending_generators.push(g.mat().to_text());
        }
    }
    let samples = independent_sp0_elements(space)?;
    let mut offending_sp0_samples = Vec::new();
    for g in &samples {
        let h = data.conjugate_back(g);
        if !is_member(&h, Group::SpF)? {
            offending_sp0_samples.push(g.to_text());
        }
    }
    let identity_fixed = data.conjugate(&space.identity()).is_identity();

    let f = space.field;
    let scalars: Vec<EScalar> = [f.s(), f.elem(1, 1), f.from_f(2)]
        .into_iter()
        .chain(data.lambda)
        .collect();
    let scalar_invariance = scalars.iter().all(|&l| {
        let lm = data.m.scale(l);
        let lm_inv = data.m_inv.scale(l.inv().expect("nonzero"));
        gens.iter()
            .all(|g| &(&lm * g.mat()) * &lm_inv == data.conjugate(g.mat()))
    });

    let total = (f.order_e() as u128).pow(space.dim() as u32);
    let conformal = if total <= exhaustive_limit as u128 {
        let vectors = all_vectors(space);
        let images: Vec<Vec<EScalar>> = vectors
            .iter()
            .map(|v| data.m.apply(v).expect("length 2n"))
            .collect();
        let failures: u64 = (0..vectors.len())
            .into_par_iter()
            .map(|a| {
                let mut bad = 0u64;
                for b in 0..vectors.len() {
                    let lhs = space.h0(&images[a], &images[b]).expect("length 2n");
                    let rhs = data.conformal * space.h_e(&vectors[a], &vectors[b]).expect("length 2n");
                    bad += (lhs != rhs) as u64;
                }
                bad
            })
            .sum();
        ConformalCheck {
            mode: "exhaustive",
            pairs: (vectors.len() as u64).pow(2),
            failures,
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = 0;
        for _ in 0..random_pairs {
            let v = random_vector(space, &mut rng);
            let w = random_vector(space, &mut rng);
            failures += !data.conformal_pair(&v, &w) as u64;
        }
        ConformalCheck {
            mode: "random",
            pairs: random_pairs,
            failures,
        }
    };

    let order = group_order(Group::SpF, space.q(), space.n);
    let closure = if order <= cap as u128 {
        let spf = enumerate(Group::SpF, space, cap)?;
        let sp0 = enumerate(Group::Sp0, space, cap)?;
        let elementwise_equal = spf.len() == sp0.len()
            && spf
                .elements()
                .par_iter()
                .all(|g| sp0.contains(&data.conjugate(g)));
        let back_equal = sp0
            .elements()
            .par_iter()
            .all(|g| spf.contains(&data.conjugate_back(g)));
        Some(ClosureCheck {
            group_order: order,
            conjugated_closure: sp0.len(),
            elementwise_equal,
            back_equal,
        })
    } else {
        None
    };

    Ok(ConjugationReport {
        generators_checked: gens.len(),
        offending_generators,
        sp0_samples_checked: samples.len(),
        offending_sp0_samples,
        identity_fixed,
        multiplier_holds: data.multiplier_holds(),
        predicted_conformal_holds: data.effective_conformal() == data.predicted_conformal(),
        scalar_invariance,
        inverse_is_conjugate: data.inverse_conjugate_identity(),
        literal_conformal: data.literal_conformal(),
        conformal,
        closure,
    })
}

/// `√2 / 2`, using the first square root of `2` in scan order.
pub fn half_sqrt2(space: &SpaceParams) -> EScalar {
    let f = space.field;
    let r = f.sqrt_in_e(f.from_f(2)).expect("every element of F is a square in E");
    r * f.from_f(2).inv().expect("q is odd")
}

fn check_k(space: &SpaceParams, k: usize) -> Result<()> {
    if k > space.n {
        return Err(Error::Parameter(format!("k = {k} outside 0..={}", space.n)));
    }
    Ok(())
}

fn partial_blocks(space: &SpaceParams, k: usize, sign_b: i64) -> Mat {
    let f = space.field;
    let n = space.n;
    let c = half_sqrt2(space);
    let d1: Vec<EScalar> = (0..n).map(|j| if j < k { c } else { f.one() }).collect();
    let d2: Vec<EScalar> = (0..n)
        .map(|j| if j < k { c * f.from_f(sign_b) } else { f.zero() })
        .collect();
    let d3: Vec<EScalar> = d2.iter().map(|&x| -x).collect();
    Mat::block(
        &Mat::diag(f, &d1),
        &Mat::diag(f, &d2),
        &Mat::diag(f, &d3),
        &Mat::diag(f, &d1),
    )
    .expect("n x n blocks")
}

/// The partial Cayley transform `t_k = (D_1, D_2; D_3, D_4)` with
/// `D_1 = D_4 = diag(c I_k, I_{n−k})`, `D_2 = diag(−c I_k, 0)`, `D_3 = −D_2`,
/// `c = √2/2`.
pub fn partial_cayley(space: &SpaceParams, k: usize) -> Result<GroupElement> {
    check_k(space, k)?;
    GroupElement::new(partial_blocks(space, k, -1), Group::SpE)
}

/// The closed form `t_k⁻¹ = (L_1, L_2; L_3, L_4)` with `L_1 = L_4 = D_1`,
/// `L_2 = diag(c I_k, 0)`, `L_3 = −L_2`.
pub fn partial_cayley_inverse_formula(space: &SpaceParams, k: usize) -> Result<Mat> {
    check_k(space, k)?;
    Ok(partial_blocks(space, k, 1))
}

/// `V_k = span(e_1 + e_{n+1}, …, e_k + e_{n+k}, e_{k+1}, …, e_n)`.
pub fn v_k(space: &SpaceParams, k: usize) -> Result<Lagrangian> {
    check_k(space, k)?;
    let f = space.field;
    let n = space.n;
    let basis = Mat::from_fn(f, 2 * n, n, |i, j| {
        if i == j || (j < k && i == n + j) {
            f.one()
        } else {
            f.zero()
        }
    });
    Lagrangian::from_basis(&basis)
}
