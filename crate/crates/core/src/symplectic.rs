//! The symplectic form `ω`, the twisted forms `h_E` and `h_0`, and the three
//! groups acting on `E^{2n}`:
//!
//! * `Sp(n,E)`: matrices with `ᵗg J g = J`;
//! * `Sp(n,F)`: the entrywise-rational elements of `Sp(n,E)`;
//! * `Sp_0(n,F)`: the elements of `Sp(n,E)` that also preserve `h_0`.
//!
//! Membership is always decided by two independent formulations, and the
//! two must agree.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{EScalar, FieldParams};
use crate::linalg::Mat;

/// `E^{2n}` with its canonical basis and the matrix `J = (0, I; −I, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceParams {
    pub field: FieldParams,
    pub n: usize,
}

impl SpaceParams {
    pub fn new(q: u32, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be positive".into()));
        }
        Ok(SpaceParams {
            field: FieldParams::new(q)?,
            n,
        })
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn j(&self) -> Mat {
        let f = self.field;
        let n = self.n;
        Mat::from_fn(f, 2 * n, 2 * n, |i, k| {
            if i < n && k == i + n {
                f.one()
            } else if i >= n && k + n == i {
                -f.one()
            } else {
                f.zero()
            }
        })
    }

    /// Gram matrix of `h_0`: `diag(−I_n, I_n)`.
    pub fn h0_gram(&self) -> Mat {
        let f = self.field;
        let d: Vec<EScalar> = (0..2 * self.n)
            .map(|i| if i < self.n { -f.one() } else { f.one() })
            .collect();
        Mat::diag(f, &d)
    }

    pub fn identity(&self) -> Mat {
        Mat::identity(self.field, 2 * self.n)
    }

    pub fn basis_vector(&self, j: usize) -> Vec<EScalar> {
        let f = self.field;
        (0..2 * self.n)
            .map(|i| if i == j { f.one() } else { f.zero() })
            .collect()
    }

    fn check_len(&self, v: &[EScalar]) -> Result<()> {
        if v.len() != 2 * self.n {
            return Err(Error::shape(
                format!("vector of length {}", 2 * self.n),
                format!("length {}", v.len()),
            ));
        }
        Ok(())
    }

    /// `ω(v, w) = ᵗv J w`.
    pub fn omega(&self, v: &[EScalar], w: &[EScalar]) -> Result<EScalar> {
        self.check_len(v)?;
        self.check_len(w)?;
        let n = self.n;
        let mut acc = self.field.zero();
        for j in 0..n {
            acc += v[j] * w[n + j] - v[n + j] * w[j];
        }
        Ok(acc)
    }

    /// `h_E(v, w) = ω(v, w̄)`, anti-hermitian.
    pub fn h_e(&self, v: &[EScalar], w: &[EScalar]) -> Result<EScalar> {
        let wb: Vec<EScalar> = w.iter().map(|x| x.conj()).collect();
        self.omega(v, &wb)
    }

    /// `h_0(v, w) = Σ d_j v_j w̄_j` with `d = (−1,…,−1, 1,…,1)`.
    pub fn h0(&self, v: &[EScalar], w: &[EScalar]) -> Result<EScalar> {
        self.check_len(v)?;
        self.check_len(w)?;
        let n = self.n;
        let mut acc = self.field.zero();
        for j in 0..2 * n {
            let t = v[j] * w[j].conj();
            if j < n {
                acc -= t;
            } else {
                acc += t;
            }
        }
        Ok(acc)
    }
}

/// The three groups of the theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    /// `Sp(n,E)`.
    #[serde(rename = "sp")]
    SpE,
    /// `Sp(n,F)`.
    #[serde(rename = "spf")]
    SpF,
    /// `Sp_0(n,F) = U(E^{2n}, h_0) ∩ Sp(n,E)`.
    #[serde(rename = "sp0")]
    Sp0,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Group::SpE => "sp",
            Group::SpF => "spf",
            Group::Sp0 => "sp0",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sp" | "spe" => Ok(Group::SpE),
            "spf" => Ok(Group::SpF),
            "sp0" => Ok(Group::Sp0),
            other => Err(Error::Parse(format!("unknown group {other:?}"))),
        }
    }
}

/// A `2n × 2n` matrix validated against a group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    mat: Mat,
    tag: Group,
}

impl GroupElement {
    pub fn new(mat: Mat, tag: Group) -> Result<Self> {
        if !is_member(&mat, tag)? {
            return Err(Error::Parameter(format!("matrix is not in {tag}: {mat}")));
        }
        Ok(GroupElement { mat, tag })
    }

    pub(crate) fn new_unchecked(mat: Mat, tag: Group) -> Self {
        GroupElement { mat, tag }
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_mat(self) -> Mat {
        self.mat
    }

    pub fn tag(&self) -> Group {
        self.tag
    }
}

fn space_of(g: &Mat) -> Result<SpaceParams> {
    if !g.is_square() || !g.rows().is_multiple_of(2) || g.rows() == 0 {
        return Err(Error::shape(
            "2n x 2n matrix",
            format!("{}x{}", g.rows(), g.cols()),
        ));
    }
    Ok(SpaceParams {
        field: g.field(),
        n: g.rows() / 2,
    })
}

/// Block conditions `ᵗAC = ᵗCA`, `ᵗDB = ᵗBD`, `ᵗAD − ᵗCB = I`.
fn sp_blocks(g: &Mat) -> Result<bool> {
    let [a, b, c, d] = g.blocks()?;
    let at = a.transpose();
    let ct = c.transpose();
    Ok(&at * &c == &ct * &a
        && &d.transpose() * &b == &b.transpose() * &d
        && (&(&at * &d) - &(&ct * &b)).is_identity())
}

fn sp_identity(g: &Mat, space: &SpaceParams) -> bool {
    let j = space.j();
    &(&g.transpose() * &j) * g == j
}

/// Conditions (S): `g = (R, S; S̄, R̄)` with `R ᵗS = S ᵗR`, `R ᵗR̄ − S ᵗS̄ = I`.
fn sp0_blocks(g: &Mat) -> Result<bool> {
    let [r, s, t, v] = g.blocks()?;
    if t != s.conj_entrywise() || v != r.conj_entrywise() {
        return Ok(false);
    }
    let rs = &r * &s.transpose();
    Ok(rs == &s * &r.transpose() && (&(&r * &r.star()) - &(&s * &s.star())).is_identity())
}

fn h0_preserved(g: &Mat, space: &SpaceParams) -> bool {
    let d = space.h0_gram();
    &(&g.transpose() * &d) * &g.conj_entrywise() == d
}

/// Decides membership of `g` in the group `tag`, computing each predicate
/// two independent ways. A disagreement is an [`Error::Internal`].
pub fn is_member(g: &Mat, tag: Group) -> Result<bool> {
    let space = space_of(g)?;
    let by_blocks = sp_blocks(g)?;
    let by_identity = sp_identity(g, &space);
    if by_blocks != by_identity {
        return Err(Error::Internal(format!(
            "Sp(n,E) block conditions ({by_blocks}) disagree with ᵗgJg = J ({by_identity}) for {g}"
        )));
    }
    match tag {
        Group::SpE => Ok(by_identity),
        Group::SpF => Ok(by_identity && g.is_rational()),
        Group::Sp0 => {
            let s = sp0_blocks(g)?;
            let h = by_identity && h0_preserved(g, &space);
            if s != h {
                return Err(Error::Internal(format!(
                    "conditions (S) ({s}) disagree with h_0-preservation ({h}) for {g}"
                )));
            }
            Ok(s)
        }
    }
}

/// Basis of the symmetric `n × n` matrices over `F`: `E_ii` and `E_ij + E_ji`.
pub fn symmetric_basis(field: FieldParams, n: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut b = Mat::zeros(field, n, n);
            b[(i, j)] = field.one();
            b[(j, i)] = field.one();
            out.push(b);
        }
    }
    out
}

fn unipotents(space: &SpaceParams, bs: &[Mat]) -> Vec<Mat> {
    let f = space.field;
    let n = space.n;
    let i = Mat::identity(f, n);
    let z = Mat::zeros(f, n, n);
    let upper = bs.iter().map(|b| Mat::block(&i, b, &z, &i).expect("n x n blocks"));
    let lower = bs.iter().map(|b| Mat::block(&i, &z, b, &i).expect("n x n blocks"));
    upper.chain(lower).collect()
}

/// Generators: the unipotents `(I, B; 0, I)` and `(I, 0; B, I)` for `B` in a
/// basis of symmetric matrices (over `F` for `Sp(n,F)`, an `F`-basis of
/// `Sym(E^n)` for `Sp(n,E)`); for `Sp_0(n,F)` their Cayley conjugates.
pub fn generators(tag: Group, space: &SpaceParams) -> Vec<GroupElement> {
    let f = space.field;
    let base = symmetric_basis(f, space.n);
    match tag {
        Group::SpF => unipotents(space, &base)
            .into_iter()
            .map(|m| GroupElement::new_unchecked(m, Group::SpF))
            .collect(),
        Group::SpE => {
            let mut bs = base.clone();
            bs.extend(base.iter().map(|b| b.scale(f.s())));
            unipotents(space, &bs)
                .into_iter()
                .map(|m| GroupElement::new_unchecked(m, Group::SpE))
                .collect()
        }
        Group::Sp0 => {
            let cayley = crate::cayley::cayley(space);
            generators(Group::SpF, space)
                .iter()
                .map(|g| GroupElement::new_unchecked(cayley.conjugate(g.mat()), Group::Sp0))
                .collect()
        }
    }
}

/// `|Sp(2n, q)| = q^{n²} ∏ (q^{2i} − 1)`; `Sp(n,E)` uses `q²` and
/// `Sp_0(n,F)` is isomorphic to `Sp(n,F)`.
pub fn group_order(tag: Group, q: u32, n: usize) -> u128 {
    let q = match tag {
        Group::SpE => (q as u128) * (q as u128),
        Group::SpF | Group::Sp0 => q as u128,
    };
    let mut order = q.pow((n * n) as u32);
    for i in 1..=n {
        order *= q.pow(2 * i as u32) - 1;
    }
    order
}

/// A group enumerated as an explicit set of matrices, in BFS order from `I`.
#[derive(Debug, Clone)]
pub struct EnumeratedGroup {
    tag: Group,
    elements: Vec<Mat>,
    index: HashMap<Mat, usize>,
}

impl EnumeratedGroup {
    pub fn tag(&self) -> Group {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn contains(&self, g: &Mat) -> bool {
        self.index.contains_key(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Mat> {
        self.elements.iter()
    }
}

/// Closure of `gens` under multiplication. Fails with [`Error::Resource`] once
/// more than `cap` elements have been found.
pub fn enumerate_group(gens: &[GroupElement], cap: usize) -> Result<EnumeratedGroup> {
    if cap == 0 {
        return Err(Error::Parameter("cap must be positive".into()));
    }
    let Some(first) = gens.first() else {
        return Err(Error::Parameter("empty generator list".into()));
    };
    let tag = first.tag();
    let space = space_of(first.mat())?;
    let id = space.identity();
    let mut elements = vec![id.clone()];
    let mut index = HashMap::from([(id, 0usize)]);
    let mut head = 0;
    while head < elements.len() {
        let g = elements[head].clone();
        head += 1;
        for s in gens {
            let h = &g * s.mat();
            if !index.contains_key(&h) {
                if elements.len() >= cap {
                    return Err(Error::Resource {
                        what: format!("closure of {} generators of {tag}", gens.len()),
                        cap,
                    });
                }
                index.insert(h.clone(), elements.len());
                elements.push(h);
            }
        }
    }
    Ok(EnumeratedGroup {
        tag,
        elements,
        index,
    })
}

/// Enumerates the group `tag` from its standard generators.
pub fn enumerate(tag: Group, space: &SpaceParams, cap: usize) -> Result<EnumeratedGroup> {
    let order = group_order(tag, space.q(), space.n);
    if order > cap as u128 {
        return Err(Error::Resource {
            what: format!("{tag}({}, {}) of order {order}", space.n, space.q()),
            cap,
        });
    }
    enumerate_group(&generators(tag, space), cap)
}

/// `(ᵗT⁻¹, 0; 0, T)` for a permutation matrix `T`; lies in both `Sp(n,F)` and
/// `Sp_0(n,F)`.
pub fn permutation_embed(t: &Mat) -> Result<GroupElement> {
    let f = t.field();
    let n = t.rows();
    let is_perm = t.is_square()
        && t.entries().iter().all(|x| x.is_zero() || x.is_one())
        && (0..n).all(|i| (0..n).filter(|&j| t[(i, j)].is_one()).count() == 1)
        && (0..n).all(|j| (0..n).filter(|&i| t[(i, j)].is_one()).count() == 1);
    if !is_perm {
        return Err(Error::Parameter(format!("not a permutation matrix: {t}")));
    }
    let tinv_t = t
        .inverse()?
        .expect("permutation matrices are invertible")
        .transpose();
    let z = Mat::zeros(f, n, n);
    let g = Mat::block(&tinv_t, &z, &z, t)?;
    if !is_member(&g, Group::Sp0)? {
        return Err(Error::Verification(format!("{g} is not in Sp_0")));
    }
    GroupElement::new(g, Group::SpF)
}

/// Product of `len` generators drawn uniformly (a random walk on the group).
pub fn random_word<R: Rng + ?Sized>(gens: &[GroupElement], len: usize, rng: &mut R) -> Mat {
    let space = space_of(gens[0].mat()).expect("generators are square");
    let mut g = space.identity();
    for _ in 0..len {
        let s = &gens[rng.gen_range(0..gens.len())];
        g = &g * s.mat();
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(q: u32, n: usize) -> SpaceParams {
        SpaceParams::new(q, n).unwrap()
    }

    #[test]
    fn form_examples() {
        let s = sp(5, 2);
        let e = |j| s.basis_vector(j);
        assert!(s.omega(&e(0), &e(2)).unwrap().is_one());
        assert!(s.omega(&e(0), &e(1)).unwrap().is_zero());
        assert_eq!(s.h0(&e(0), &e(0)).unwrap(), -s.field.one());
        assert!(s.h0(&e(2), &e(2)).unwrap().is_one());
        assert!(s.omega(&e(0), &e(1)[..3]).is_err());
    }

    #[test]
    fn identity_and_j_membership() {
        for n in 1..=2 {
            let s = sp(3, n);
            for tag in [Group::SpE, Group::SpF, Group::Sp0] {
                assert!(is_member(&s.identity(), tag).unwrap());
            }
            assert!(is_member(&s.j(), Group::SpF).unwrap());
            assert!(!is_member(&s.j(), Group::Sp0).unwrap());
        }
    }

    #[test]
    fn scalar_unitary_in_sp0() {
        let s = sp(3, 1);
        let f = s.field;
        let g = Mat::from_vec(f, 2, 2, vec![f.s(), f.zero(), f.zero(), -f.s()]).unwrap();
        assert!(is_member(&g, Group::Sp0).unwrap());
        assert!(!is_member(&g, Group::SpF).unwrap());
    }

    #[test]
    fn wrong_size_is_shape_error() {
        let f = FieldParams::new(3).unwrap();
        assert!(matches!(
            is_member(&Mat::identity(f, 3), Group::SpE),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn orders() {
        assert_eq!(group_order(Group::SpF, 3, 1), 24);
        assert_eq!(group_order(Group::SpF, 3, 2), 51840);
        assert_eq!(group_order(Group::SpF, 5, 1), 120);
        assert_eq!(group_order(Group::Sp0, 5, 2), 9_360_000);
        assert_eq!(group_order(Group::SpE, 3, 1), 720);
    }

    #[test]
    fn sl2_closure() {
        let s = sp(3, 1);
        let gens = generators(Group::SpF, &s);
        assert_eq!(gens.len(), 2);
        assert!(gens.iter().all(|g| is_member(g.mat(), Group::SpF).unwrap()));
        assert_eq!(enumerate_group(&gens, 1000).unwrap().len(), 24);
        assert_eq!(enumerate(Group::SpF, &sp(5, 1), 1000).unwrap().len(), 120);
    }

    #[test]
    fn trivial_closure() {
        let s = sp(3, 2);
        let id = GroupElement::new(s.identity(), Group::SpF).unwrap();
        assert_eq!(enumerate_group(&[id], 1).unwrap().len(), 1);
    }

    #[test]
    fn cap_is_a_resource_error() {
        let s = sp(5, 2);
        assert!(matches!(
            enumerate(Group::SpF, &s, 1_000_000),
            Err(Error::Resource { .. })
        ));
        let gens = generators(Group::SpF, &sp(3, 1));
        assert!(matches!(enumerate_group(&gens, 10), Err(Error::Resource { .. })));
    }

    #[test]
    fn permutation_embeddings() {
        let f = FieldParams::new(3).unwrap();
        let id = permutation_embed(&Mat::identity(f, 2)).unwrap();
        assert!(id.mat().is_identity());
        let swap = Mat::from_ints(f, &[&[0, 1], &[1, 0]]);
        let g = permutation_embed(&swap).unwrap();
        assert!(is_member(g.mat(), Group::Sp0).unwrap());
        assert!(is_member(g.mat(), Group::SpF).unwrap());
        let cycle = Mat::from_ints(f, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let g = permutation_embed(&cycle).unwrap();
        assert!(is_member(g.mat(), Group::Sp0).unwrap());
        assert!(permutation_embed(&Mat::from_ints(f, &[&[1, 1], &[0, 1]])).is_err());
    }
}
