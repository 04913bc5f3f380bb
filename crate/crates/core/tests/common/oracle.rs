//! Independent reference computations used only by tests.
//!
//! Nothing here goes through the orbit engine or the library's group
//! enumeration: subspaces come from a direct walk over echelon forms, forms
//! are evaluated entry by entry, and types come from Gram-Schmidt.

use std::collections::HashSet;

use finite_siegel::{EScalar, FieldParams, Lagrangian, Mat, SpaceParams};

/// `ᵗx J y` on `E^{2n}`, written out.
pub fn omega(x: &[EScalar], y: &[EScalar]) -> EScalar {
    let n = x.len() / 2;
    let mut acc = x[0].field().zero();
    for i in 0..n {
        acc += x[i] * y[n + i] - x[n + i] * y[i];
    }
    acc
}

/// `ᵗx diag(−I, I) ȳ`, written out.
pub fn h0(x: &[EScalar], y: &[EScalar]) -> EScalar {
    let n = x.len() / 2;
    let mut acc = x[0].field().zero();
    for i in 0..n {
        acc += x[n + i] * y[n + i].conj() - x[i] * y[i].conj();
    }
    acc
}

/// Every `k`-element subset of `start..m`, in lexicographic order.
fn combinations(start: usize, m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (start..m)
        .flat_map(|first| {
            combinations(first + 1, m, k - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// All `k`-dimensional subspaces of `E^m`, as row-reduced echelon row lists.
pub fn subspaces(f: FieldParams, m: usize, k: usize) -> Vec<Vec<Vec<EScalar>>> {
    let elems: Vec<EScalar> = f.elements().collect();
    let mut out = Vec::new();
    for pivots in combinations(0, m, k) {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let pivots = pivots.clone();
                ((pivots[i] + 1)..m)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let total = elems.len().pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![f.zero(); m]; k];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = f.one();
            }
            for &(i, c) in &free {
                rows[i][c] = elems[code % elems.len()];
                code /= elems.len();
            }
            out.push(rows);
        }
    }
    out
}

/// Lagrangians of `E^{2n}` by filtering every `n`-dimensional subspace for isotropy.
pub fn brute_force_lagrangians(space: &SpaceParams) -> HashSet<Lagrangian> {
    let f = space.field;
    let n = space.n;
    subspaces(f, 2 * n, n)
        .into_iter()
        .filter(|rows| {
            rows.iter()
                .enumerate()
                .all(|(i, x)| rows[i..].iter().all(|y| omega(x, y).is_zero()))
        })
        .map(|rows| {
            let basis = Mat::from_fn(f, 2 * n, n, |r, c| rows[c][r]);
            Lagrangian::from_basis(&basis).expect("isotropic rank-n rows")
        })
        .collect()
}

/// The Gaussian binomial `[m choose k]_Q`.
pub fn gaussian_binomial(m: u32, k: u32, big_q: u128) -> u128 {
    let num: u128 = (0..k).map(|i| big_q.pow(m - i) - 1).product();
    let den: u128 = (0..k).map(|i| big_q.pow(i + 1) - 1).product();
    num / den
}

/// `Sp_0(1,F)` by testing every `2 × 2` matrix over `E` against both defining forms.
pub fn sp0_n1_brute_force(f: FieldParams) -> HashSet<Mat> {
    let elems: Vec<EScalar> = f.elements().collect();
    let e = |k: usize| elems[k];
    let qq = elems.len();
    let mut out = HashSet::new();
    for a in 0..qq {
        for b in 0..qq {
            for c in 0..qq {
                for d in 0..qq {
                    let (a, b, c, d) = (e(a), e(b), e(c), e(d));
                    let col0 = [a, c];
                    let col1 = [b, d];
                    let symplectic = omega(&col0, &col1).is_one();
                    let h00 = h0(&col0, &col0);
                    let h11 = h0(&col1, &col1);
                    let h01 = h0(&col0, &col1);
                    let unitary = (h00 + f.one()).is_zero() && h11.is_one() && h01.is_zero();
                    if symplectic && unitary {
                        out.insert(Mat::from_vec(f, 2, 2, vec![a, b, c, d]).unwrap());
                    }
                }
            }
        }
    }
    out
}

/// Gram matrix `(h(b_i, b_j))` of `form` over the columns of `basis`.
pub fn gram(basis: &Mat, form: fn(&[EScalar], &[EScalar]) -> EScalar) -> Vec<Vec<EScalar>> {
    let cols: Vec<_> = (0..basis.cols()).map(|j| basis.col(j)).collect();
    cols.iter()
        .map(|x| cols.iter().map(|y| form(x, y)).collect())
        .collect()
}

fn herm(g: &[Vec<EScalar>], x: &[EScalar], y: &[EScalar]) -> EScalar {
    let mut acc = x[0].field().zero();
    for i in 0..x.len() {
        for j in 0..y.len() {
            acc += x[i] * g[i][j] * y[j].conj();
        }
    }
    acc
}

fn axpy(x: &[EScalar], c: EScalar, y: &[EScalar]) -> Vec<EScalar> {
    x.iter().zip(y).map(|(&a, &b)| a + c * b).collect()
}

/// The number of vectors in a partial orthonormal basis of the hermitian
/// form with Gram matrix `g`, built by Gram-Schmidt with norm rescaling.
pub fn hermitian_type(f: FieldParams, g: &[Vec<EScalar>]) -> usize {
    let m = g.len();
    let mut space: Vec<Vec<EScalar>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect();
    let mut r = 0;
    loop {
        let anisotropic = space.iter().find(|v| !herm(g, v, v).is_zero()).cloned().or_else(|| {
            space.iter().enumerate().find_map(|(i, v)| {
                space[i + 1..].iter().find_map(|w| {
                    let p = herm(g, v, w);
                    (!p.is_zero()).then(|| {
                        f.elements()
                            .map(|t| axpy(v, t, w))
                            .find(|u| !herm(g, u, u).is_zero())
                            .expect("a nonzero pairing has an anisotropic combination")
                    })
                })
            })
        });
        let Some(v) = anisotropic else { return r };
        let norm = herm(g, &v, &v);
        let c = f
            .elements()
            .find(|c| (c.norm() * norm).is_one())
            .expect("the norm map is onto F");
        let u: Vec<EScalar> = v.iter().map(|&x| x * c).collect();
        assert!(herm(g, &u, &u).is_one());
        r += 1;
        space = space
            .iter()
            .map(|w| axpy(w, -herm(g, w, &u), &u))
            .collect();
    }
}
