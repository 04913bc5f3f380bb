//! Stabilizers of `V_k` in `Sp_0(n,F)`, the parabolic intersection
//! `Sp_0 ∩ KP^+`, and the correspondence `M·H_j = O_j`.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::cayley::{partial_cayley, v_k, CayleyData};
use crate::error::{Error, Result};
use crate::field::{EScalar, FieldParams};
use crate::lagrangian::Lagrangian;
use crate::linalg::Mat;
use crate::orbit::{act, stabilizer_elements};
use crate::symplectic::{enumerate, group_order, is_member, EnumeratedGroup, Group, SpaceParams};

/// All `k × k` matrices with entries drawn from `alphabet`, filtered by `keep`.
fn brute_force<P>(f: FieldParams, k: usize, alphabet: &[EScalar], cap: usize, keep: P) -> Result<Vec<Mat>>
where
    P: Fn(&Mat) -> bool + Sync,
{
    let cells = k * k;
    let total = (alphabet.len() as u128).pow(cells as u32);
    if total > cap as u128 {
        return Err(Error::Resource {
            what: format!("{total} candidate {k}x{k} matrices"),
            cap,
        });
    }
    Ok((0..total as u64)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut data = Vec::with_capacity(cells);
            for _ in 0..cells {
                data.push(alphabet[(code % alphabet.len() as u64) as usize]);
                code /= alphabet.len() as u64;
            }
            let m = Mat::from_vec(f, k, k, data).expect("k*k entries");
            keep(&m).then_some(m)
        })
        .collect())
}

/// `O(k,F) = {S over F : ᵗS S = I}` by exhaustive search.
pub fn orthogonal_group(f: FieldParams, k: usize, cap: usize) -> Result<Vec<Mat>> {
    let alphabet: Vec<EScalar> = f.base_elements().collect();
    brute_force(f, k, &alphabet, cap, |s| (&s.transpose() * s).is_identity())
}

/// `U(m,E) = {T over E : T* T = I}` by exhaustive search.
pub fn unitary_group(f: FieldParams, m: usize, cap: usize) -> Result<Vec<Mat>> {
    let alphabet: Vec<EScalar> = f.elements().collect();
    brute_force(f, m, &alphabet, cap, |t| (&t.star() * t).is_identity())
}

/// `|GL(k, q)|`.
pub fn gl_order(k: usize, q: u32) -> u128 {
    let q = q as u128;
    (0..k as u32).map(|i| q.pow(k as u32) - q.pow(i)).product()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerReport {
    pub k: usize,
    pub stabilizer_order: usize,
    pub orthogonal_order: usize,
    pub unitary_order: usize,
    pub unipotent_order: u128,
    /// `|O(k)|·|U(n−k)|·q^{k(k+1)/2}`.
    pub predicted_order: u128,
    pub matches_prediction: bool,
    pub group_order: u128,
    pub orbit_size: u128,
    pub stratum_size: usize,
    pub matches_stratum: bool,
    pub factor_subgroup_contained: bool,
    pub unipotents_contained: bool,
    /// `|GL(k,F)|·|U(n−k)|·q^{k(k+1)/2 + 2k(n−k)}`, the order actually observed.
    pub gl_diagnostic_order: u128,
    pub matches_gl_diagnostic: bool,
}

impl StabilizerReport {
    pub fn passed(&self) -> bool {
        self.matches_prediction
            && self.matches_stratum
            && self.factor_subgroup_contained
            && self.unipotents_contained
    }
}

fn stabilizes(g: &Mat, w: &Lagrangian) -> bool {
    act(g, w).is_ok_and(|x| &x == w)
}

/// Compares the filtered stabilizer of `V_k` in `Sp_0(n,F)` with the
/// semidirect-product prediction.
///
/// `sp0` must be the enumerated group and `stratum_size` the size of
/// `O_{n−k}` from an independent census.
pub fn stabilizer_structure(
    space: &SpaceParams,
    k: usize,
    sp0: &EnumeratedGroup,
    stratum_size: usize,
    factor_cap: usize,
) -> Result<StabilizerReport> {
    let f = space.field;
    let n = space.n;
    let q = space.q();
    let vk = v_k(space, k)?;
    let stab = stabilizer_elements(&vk, sp0);
    let o = orthogonal_group(f, k, factor_cap)?;
    let u = unitary_group(f, n - k, factor_cap)?;
    let unipotent_order = (q as u128).pow((k * (k + 1) / 2) as u32);
    let predicted_order = o.len() as u128 * u.len() as u128 * unipotent_order;
    let order = group_order(Group::Sp0, q, n);
    let orbit_size = order / stab.len() as u128;

    let factor_subgroup_contained = o.par_iter().all(|s| {
        u.iter().all(|t| {
            let r = block_diag(f, s, t);
            let g = Mat::block(&r, &Mat::zeros(f, n, n), &Mat::zeros(f, n, n), &r.conj_entrywise())
                .expect("n x n blocks");
            is_member(&g, Group::Sp0).unwrap_or(false) && stabilizes(&g, &vk)
        })
    });

    let t = partial_cayley(space, k)?;
    let t_inv = t.mat().inverse()?.expect("t_k is invertible");
    let real_symmetric = symmetric_over(f, k);
    let unipotents_contained = real_symmetric.iter().all(|b1| {
        let mut b = Mat::zeros(f, n, n);
        for i in 0..k {
            for j in 0..k {
                b[(i, j)] = b1[(i, j)] * f.s();
            }
        }
        let id = Mat::identity(f, n);
        let p = Mat::block(&id, &b, &Mat::zeros(f, n, n), &id).expect("n x n blocks");
        let g = &(t.mat() * &p) * &t_inv;
        is_member(&g, Group::Sp0).unwrap_or(false) && stabilizes(&g, &vk)
    });

    let gl_diagnostic_order = gl_order(k, q)
        * u.len() as u128
        * (q as u128).pow((k * (k + 1) / 2 + 2 * k * (n - k)) as u32);

    Ok(StabilizerReport {
        k,
        stabilizer_order: stab.len(),
        orthogonal_order: o.len(),
        unitary_order: u.len(),
        unipotent_order,
        predicted_order,
        matches_prediction: predicted_order == stab.len() as u128,
        group_order: order,
        orbit_size,
        stratum_size,
        matches_stratum: orbit_size * stab.len() as u128 == order && orbit_size == stratum_size as u128,
        factor_subgroup_contained,
        unipotents_contained,
        gl_diagnostic_order,
        matches_gl_diagnostic: gl_diagnostic_order == stab.len() as u128,
    })
}

fn block_diag(f: FieldParams, a: &Mat, b: &Mat) -> Mat {
    let (p, r) = (a.rows(), b.rows());
    Mat::from_fn(f, p + r, p + r, |i, j| {
        if i < p && j < p {
            a[(i, j)]
        } else if i >= p && j >= p {
            b[(i - p, j - p)]
        } else {
            f.zero()
        }
    })
}

/// All symmetric `k × k` matrices over `F`.
fn symmetric_over(f: FieldParams, k: usize) -> Vec<Mat> {
    let slots: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let q = f.q() as u64;
    (0..q.pow(slots.len() as u32))
        .map(|mut code| {
            let mut m = Mat::zeros(f, k, k);
            for &(i, j) in &slots {
                let x = f.from_f((code % q) as i64);
                code /= q;
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
            m
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParabolicReport {
    pub filtered: usize,
    pub unitary_order: usize,
    pub all_block_diagonal: bool,
    pub equal: bool,
}

/// `Sp_0(n,F) ∩ KP^+ = {diag(A, Ā) : A ∈ U(n,E)}`.
pub fn parabolic_intersection(space: &SpaceParams, sp0: &EnumeratedGroup, factor_cap: usize) -> Result<ParabolicReport> {
    let n = space.n;
    let filtered: Vec<&Mat> = sp0
        .elements()
        .par_iter()
        .filter(|g| g.sub_block(n, 0, n, n).is_zero())
        .collect();
    let u = unitary_group(space.field, n, factor_cap)?;
    let all_block_diagonal = filtered.iter().all(|g| {
        let [a, b, _, d] = g.blocks().expect("even size");
        b.is_zero() && d == a.conj_entrywise()
    });
    let found: HashSet<Mat> = filtered.iter().map(|g| g.sub_block(0, 0, n, n)).collect();
    let expected: HashSet<Mat> = u.iter().cloned().collect();
    Ok(ParabolicReport {
        filtered: filtered.len(),
        unitary_order: u.len(),
        all_block_diagonal,
        equal: all_block_diagonal && found == expected && filtered.len() == u.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumMap {
    pub j: usize,
    pub h_size: usize,
    pub o_size: usize,
    pub image_equals_o: bool,
    /// The literal reading `H_j = O_j`.
    pub h_equals_o: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapStrataReport {
    pub strata: Vec<StratumMap>,
    pub bijective: bool,
}

impl MapStrataReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.strata.iter().all(|s| s.image_equals_o && s.h_size == s.o_size)
    }
}

/// Compares `{M·W : W ∈ H_j}` with `O_j` for every `j`.
pub fn map_strata(data: &CayleyData, points: &[Lagrangian]) -> Result<MapStrataReport> {
    let n = data.space.n;
    let images: Vec<Lagrangian> = points
        .par_iter()
        .map(|w| act(data.act_matrix(), w))
        .collect::<Result<_>>()?;
    let labels: Vec<_> = points.par_iter().map(|w| w.label()).collect();
    let image_labels: Vec<_> = images.par_iter().map(|w| w.o_type()).collect();
    let distinct: HashSet<&Lagrangian> = images.iter().collect();
    let all: HashSet<&Lagrangian> = points.iter().collect();
    let bijective = distinct.len() == points.len() && distinct.iter().all(|w| all.contains(w));
    let strata = (0..=n)
        .map(|j| {
            let h: HashSet<&Lagrangian> = (0..points.len())
                .filter(|&i| labels[i].h_rank == j)
                .map(|i| &points[i])
                .collect();
            let o: HashSet<&Lagrangian> = (0..points.len())
                .filter(|&i| labels[i].o_type == j)
                .map(|i| &points[i])
                .collect();
            let image_of_h: HashSet<&Lagrangian> = (0..points.len())
                .filter(|&i| labels[i].h_rank == j)
                .map(|i| &images[i])
                .collect();
            let image_in_o = (0..points.len())
                .filter(|&i| labels[i].h_rank == j)
                .all(|i| image_labels[i] == j);
            StratumMap {
                j,
                h_size: h.len(),
                o_size: o.len(),
                image_equals_o: image_in_o && image_of_h == o,
                h_equals_o: h == o,
            }
        })
        .collect();
    Ok(MapStrataReport { strata, bijective })
}

/// Enumerates `Sp_0(n,F)` for the stabilizer checks.
pub fn enumerate_sp0(space: &SpaceParams, cap: usize) -> Result<EnumeratedGroup> {
    enumerate(Group::Sp0, space, cap)
}
