//! Lagrangian subspaces of `E^{2n}`, the Siegel map and the two families of
//! strata: `H_r` (rank of `h_E` on `W`) and `O_r` (type of `h_0` on `W`).
//!
//! A Lagrangian is stored as the reduced column-echelon basis of its span, so
//! equality and hashing are equality of subspaces.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::symplectic::{generators, Group, SpaceParams};

/// An `n`-dimensional `ω`-isotropic subspace of `E^{2n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lagrangian {
    basis: Mat,
}

/// The pair of invariants `(r_W, type of h_0 on W)`.
///
/// Over a finite field every nondegenerate hermitian space has an orthonormal
/// basis, so the type of `h_0|W` is the rank of its Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StratumLabel {
    pub h_rank: usize,
    pub o_type: usize,
}

/// The two sesquilinear forms whose restrictions define the strata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    HE,
    H0,
}

impl Lagrangian {
    /// Validates and canonicalizes the column span of a `2n × n` matrix.
    pub fn from_basis(m: &Mat) -> Result<Self> {
        if !m.rows().is_multiple_of(2) || m.cols() * 2 != m.rows() {
            return Err(Error::shape(
                "2n x n basis",
                format!("{}x{}", m.rows(), m.cols()),
            ));
        }
        let n = m.cols();
        let basis = m.column_echelon_canonical();
        if basis.cols() != n {
            return Err(Error::NotASubspace {
                rank: basis.cols(),
                expected: n,
            });
        }
        let space = SpaceParams {
            field: m.field(),
            n,
        };
        if !(&(&basis.transpose() * &space.j()) * &basis).is_zero() {
            return Err(Error::NotIsotropic);
        }
        Ok(Lagrangian { basis })
    }

    /// Wraps a basis already in canonical form without re-validating.
    pub(crate) fn from_canonical(basis: Mat) -> Self {
        Lagrangian { basis }
    }

    /// Canonical form of the span of `m`, assumed Lagrangian.
    pub(crate) fn span_of(m: &Mat) -> Self {
        Lagrangian {
            basis: m.column_echelon_canonical(),
        }
    }

    /// `L_+ = span(e_1, …, e_n)`.
    pub fn l_plus(space: &SpaceParams) -> Self {
        let f = space.field;
        let n = space.n;
        Lagrangian::from_canonical(Mat::from_fn(f, 2 * n, n, |i, j| {
            if i == j {
                f.one()
            } else {
                f.zero()
            }
        }))
    }

    /// `L_− = span(e_{n+1}, …, e_{2n})`.
    pub fn l_minus(space: &SpaceParams) -> Self {
        let f = space.field;
        let n = space.n;
        Lagrangian::from_canonical(Mat::from_fn(f, 2 * n, n, |i, j| {
            if i == j + n {
                f.one()
            } else {
                f.zero()
            }
        }))
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.cols()
    }

    pub fn space(&self) -> SpaceParams {
        SpaceParams {
            field: self.basis.field(),
            n: self.n(),
        }
    }

    /// Whether `W` is `𝓛(Z)` for some symmetric `Z`: the projection onto the
    /// last `n` coordinates is onto.
    pub fn in_siegel_image(&self) -> bool {
        let n = self.n();
        self.basis.sub_block(n, 0, n, n).rank() == n
    }

    /// Recovers `Z` from a Lagrangian in the Siegel image.
    pub fn siegel_coordinate(&self) -> Option<Mat> {
        let n = self.n();
        let bottom = self.basis.sub_block(n, 0, n, n);
        let inv = bottom.inverse().ok()??;
        Some(&self.basis.sub_block(0, 0, n, n) * &inv)
    }

    /// Gram matrix `(form(b_i, b_j))` over the canonical basis.
    pub fn gram(&self, form: Form) -> Mat {
        let space = self.space();
        let n = self.n();
        let cols: Vec<_> = (0..n).map(|j| self.basis.col(j)).collect();
        Mat::from_fn(space.field, n, n, |i, j| {
            match form {
                Form::HE => space.h_e(&cols[i], &cols[j]),
                Form::H0 => space.h0(&cols[i], &cols[j]),
            }
            .expect("basis vectors have length 2n")
        })
    }

    pub fn label(&self) -> StratumLabel {
        StratumLabel {
            h_rank: self.gram(Form::HE).rank(),
            o_type: self.gram(Form::H0).rank(),
        }
    }

    pub fn h_rank(&self) -> usize {
        self.gram(Form::HE).rank()
    }

    pub fn o_type(&self) -> usize {
        self.gram(Form::H0).rank()
    }

    /// `W̄`, the entrywise conjugate subspace.
    pub fn conj(&self) -> Lagrangian {
        Lagrangian::span_of(&self.basis.conj_entrywise())
    }

    /// `W ∩ W̄` as a canonical column basis.
    pub fn intersect_conj(&self) -> Mat {
        let n = self.n();
        let wb = self.conj();
        let stacked = self.basis.hcat(&-wb.basis()).expect("same row count");
        let kernel = stacked.kernel();
        let coeffs = kernel.sub_block(0, 0, n, kernel.cols());
        (&self.basis * &coeffs).column_echelon_canonical()
    }

    /// The radical `{w ∈ W : h_E(x, w) = 0 ∀x ∈ W}` as a canonical column basis.
    pub fn h_e_radical(&self) -> Mat {
        // h_E(b_i, Σ c_j b_j) = Σ G_ij c̄_j, so the radical is W·conj(ker G).
        let kernel = self.gram(Form::HE).kernel().conj_entrywise();
        (&self.basis * &kernel).column_echelon_canonical()
    }

    /// `(dim(W + W̄), dim(W ∩ W̄))`.
    pub fn conj_dims(&self) -> (usize, usize) {
        let sum = self.basis.hcat(self.conj().basis()).expect("same row count").rank();
        (sum, 2 * self.n() - sum)
    }
}

/// `𝓛(Z) = {(Zx, x)}` for symmetric `Z`.
pub fn siegel(z: &Mat) -> Result<Lagrangian> {
    if !z.is_square() {
        return Err(Error::shape("n x n", format!("{}x{}", z.rows(), z.cols())));
    }
    if !z.is_symmetric() {
        return Err(Error::Parameter(format!("Z is not symmetric: {z}")));
    }
    let i = Mat::identity(z.field(), z.rows());
    Ok(Lagrangian::span_of(&z.vcat(&i)?))
}

/// `(dim(W + W̄), dim(W ∩ W̄))` together with the values `(n + r_W, n − r_W)`
/// they should equal.
pub fn conjugate_dims(w: &Lagrangian) -> ((usize, usize), (usize, usize)) {
    let r = w.h_rank();
    let n = w.n();
    (w.conj_dims(), (n + r, n - r))
}

/// `∏_{k=1..n} (q^{2k} + 1)`, the number of Lagrangians in `E^{2n}`.
pub fn lagrangian_count(q: u32, n: usize) -> u128 {
    let q2 = (q as u128) * (q as u128);
    (1..=n as u32).map(|k| q2.pow(k) + 1).product()
}

/// Enumerates all Lagrangians as the `Sp(n,E)`-orbit of `L_+`.
pub fn enumerate_lagrangians(space: &SpaceParams, cap: usize) -> Result<Vec<Lagrangian>> {
    let expected = lagrangian_count(space.q(), space.n);
    if expected > cap as u128 {
        return Err(Error::Resource {
            what: format!("{expected} Lagrangians for q = {}, n = {}", space.q(), space.n),
            cap,
        });
    }
    let gens: Vec<Mat> = generators(Group::SpE, space)
        .into_iter()
        .map(|g| g.into_mat())
        .collect();
    let start = Lagrangian::l_plus(space);
    let mut seen: HashSet<Lagrangian> = HashSet::from([start.clone()]);
    let mut out = vec![start];
    let mut head = 0;
    while head < out.len() {
        let w = out[head].clone();
        head += 1;
        for g in &gens {
            let x = Lagrangian::span_of(&(g * w.basis()));
            if seen.insert(x.clone()) {
                if out.len() >= cap {
                    return Err(Error::Resource {
                        what: "Lagrangian enumeration".into(),
                        cap,
                    });
                }
                out.push(x);
            }
        }
    }
    if out.len() as u128 != expected {
        return Err(Error::Verification(format!(
            "orbit of L_+ has {} points, expected {expected}",
            out.len()
        )));
    }
    Ok(out)
}

/// Per-stratum counts of a full census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumCount {
    pub r: usize,
    pub h_count: usize,
    pub o_count: usize,
    pub h_in_image: usize,
    pub o_in_image: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub q: u32,
    pub n: usize,
    pub total: usize,
    pub strata: Vec<StratumCount>,
}

/// Tabulates `|H_r|`, `|O_r|` and how many of each lie in the Siegel image.
pub fn census(points: &[Lagrangian], space: &SpaceParams) -> Census {
    let mut strata: Vec<StratumCount> = (0..=space.n)
        .map(|r| StratumCount {
            r,
            h_count: 0,
            o_count: 0,
            h_in_image: 0,
            o_in_image: 0,
        })
        .collect();
    for w in points {
        let label = w.label();
        let image = w.in_siegel_image() as usize;
        strata[label.h_rank].h_count += 1;
        strata[label.h_rank].h_in_image += image;
        strata[label.o_type].o_count += 1;
        strata[label.o_type].o_in_image += image;
    }
    Census {
        q: space.q(),
        n: space.n,
        total: points.len(),
        strata,
    }
}

/// Labels of all points, computed once.
pub fn label_map(points: &[Lagrangian]) -> HashMap<Lagrangian, StratumLabel> {
    points.iter().map(|w| (w.clone(), w.label())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldParams;

    fn sp(q: u32, n: usize) -> SpaceParams {
        SpaceParams::new(q, n).unwrap()
    }

    /// `(R; S)` with `R = (0, −s; 0, 1)`, `S = (1, 0; s, 0)`: `h_E` is
    /// nondegenerate on it, yet `S` is singular.
    #[test]
    fn h_n_point_outside_image() {
        let space = sp(3, 2);
        let f = space.field;
        let (o, z, s) = (f.one(), f.zero(), f.s());
        let basis = Mat::from_vec(f, 4, 2, vec![z, -s, z, o, o, z, s, z]).unwrap();
        let w = Lagrangian::from_basis(&basis).unwrap();
        assert_eq!(w.h_rank(), 2);
        assert!(!w.in_siegel_image());
    }

    fn coords(space: &SpaceParams, idx: &[usize]) -> Mat {
        let f = space.field;
        Mat::from_fn(f, space.dim(), idx.len(), |i, j| {
            if idx[j] == i {
                f.one()
            } else {
                f.zero()
            }
        })
    }

    #[test]
    fn l_plus_and_l_minus_from_basis() {
        let s = sp(3, 2);
        assert_eq!(Lagrangian::from_basis(&coords(&s, &[0, 1])).unwrap(), Lagrangian::l_plus(&s));
        assert_eq!(Lagrangian::from_basis(&coords(&s, &[2, 3])).unwrap(), Lagrangian::l_minus(&s));
        let f = s.field;
        let z = Mat::zeros(f, 2, 2);
        assert_eq!(siegel(&z).unwrap(), Lagrangian::l_minus(&s));
    }

    #[test]
    fn from_basis_errors() {
        let s = sp(3, 2);
        assert!(matches!(
            Lagrangian::from_basis(&coords(&s, &[0, 2])),
            Err(Error::NotIsotropic)
        ));
        let f = s.field;
        let mut m = coords(&s, &[0, 1]);
        m[(1, 1)] = f.zero();
        m[(0, 1)] = f.one();
        assert!(matches!(
            Lagrangian::from_basis(&m),
            Err(Error::NotASubspace { rank: 1, expected: 2 })
        ));
    }

    #[test]
    fn any_line_is_lagrangian() {
        let f = FieldParams::new(3).unwrap();
        let w = Lagrangian::from_basis(&Mat::column(f, &[f.one(), f.one()])).unwrap();
        assert!(w.in_siegel_image());
    }

    #[test]
    fn siegel_examples() {
        let s = sp(3, 2);
        let f = s.field;
        let w = siegel(&Mat::identity(f, 2)).unwrap();
        assert_eq!(w.o_type(), 0);
        assert_eq!(w.conj_dims(), (2, 2));
        let s1 = sp(3, 1);
        let z = Mat::column(s1.field, &[s1.field.s()]);
        assert_eq!(siegel(&z).unwrap().h_rank(), 1);
        assert!(siegel(&Mat::from_ints(f, &[&[0, 1], &[0, 0]])).is_err());
    }

    #[test]
    fn image_membership() {
        let s = sp(5, 2);
        assert!(Lagrangian::l_minus(&s).in_siegel_image());
        assert!(!Lagrangian::l_plus(&s).in_siegel_image());
    }

    #[test]
    fn diagonal_siegel_h0_gram() {
        let s = sp(5, 2);
        let f = s.field;
        let d = [f.elem(1, 2), f.elem(3, 0)];
        let w = siegel(&Mat::diag(f, &d)).unwrap();
        // The canonical basis of 𝓛(Z) with Z invertible is (Z; I) column-reduced,
        // so compare Gram matrices over the explicit (Z; I) basis instead.
        let basis = Mat::diag(f, &d).vcat(&Mat::identity(f, 2)).unwrap();
        let cols: Vec<_> = (0..2).map(|j| basis.col(j)).collect();
        for i in 0..2 {
            for j in 0..2 {
                let g = s.h0(&cols[i], &cols[j]).unwrap();
                let expected = if i == j { f.one() - d[i].norm() } else { f.zero() };
                assert_eq!(g, expected);
            }
        }
        assert_eq!(w.o_type(), 2);
    }

    #[test]
    fn conj_of_nonreal_line() {
        let s = sp(3, 1);
        let f = s.field;
        let w = Lagrangian::from_basis(&Mat::column(f, &[f.s(), f.one()])).unwrap();
        let wb = w.conj();
        assert_eq!(wb, Lagrangian::from_basis(&Mat::column(f, &[-f.s(), f.one()])).unwrap());
        assert_ne!(w, wb);
        assert_eq!(w.conj_dims(), (2, 0));
        assert_eq!(w.h_rank(), 1);
        assert_eq!(conjugate_dims(&w), ((2, 0), (2, 0)));
    }

    #[test]
    fn real_lagrangian_is_self_conjugate() {
        let s = sp(5, 2);
        let w = Lagrangian::l_plus(&s);
        assert_eq!(w.conj(), w);
        assert_eq!(w.conj_dims(), (2, 2));
        assert_eq!(w.h_rank(), 0);
        assert_eq!(w.intersect_conj(), w.basis().clone());
        assert_eq!(w.h_e_radical(), w.basis().clone());
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_lagrangians(&sp(3, 1), 1000).unwrap().len(), 10);
        assert_eq!(enumerate_lagrangians(&sp(5, 1), 1000).unwrap().len(), 26);
        assert_eq!(lagrangian_count(3, 2), 820);
        assert_eq!(lagrangian_count(5, 2), 16_276);
        assert!(matches!(
            enumerate_lagrangians(&sp(3, 2), 100),
            Err(Error::Resource { .. })
        ));
    }
}
