//! Explicit Lagrangians realizing each stratum, inside and outside the
//! Siegel image. Every asserted label is recomputed on construction.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{EScalar, FieldParams};
use crate::lagrangian::{siegel, Lagrangian, StratumLabel};
use crate::linalg::Mat;
use crate::symplectic::{is_member, Group, SpaceParams};

/// A constructed Lagrangian with the label the construction promises.
#[derive(Debug, Clone)]
pub struct Witness {
    pub name: String,
    pub lagrangian: Lagrangian,
    pub claimed_o_type: usize,
    pub claimed_in_image: bool,
    pub observed: StratumLabel,
    pub observed_in_image: bool,
    pub params: Vec<(String, String)>,
    /// An element of `Sp_0(n,F)` meant to move the witness into the image.
    pub transporter: Option<Transport>,
}

#[derive(Debug, Clone)]
pub struct Transport {
    pub g: Mat,
    pub in_sp0: bool,
    pub image: Lagrangian,
    pub image_in_siegel: bool,
    pub image_o_type: usize,
}

impl Witness {
    fn new(
        name: impl Into<String>,
        lagrangian: Lagrangian,
        claimed_o_type: usize,
        claimed_in_image: bool,
        params: Vec<(String, String)>,
    ) -> Self {
        let observed = lagrangian.label();
        let observed_in_image = lagrangian.in_siegel_image();
        Witness {
            name: name.into(),
            lagrangian,
            claimed_o_type,
            claimed_in_image,
            observed,
            observed_in_image,
            params,
            transporter: None,
        }
    }

    pub fn verified(&self) -> bool {
        self.observed.o_type == self.claimed_o_type
            && self.observed_in_image == self.claimed_in_image
            && self.transporter.as_ref().is_none_or(|t| {
                t.in_sp0 && t.image_in_siegel && t.image_o_type == self.claimed_o_type
            })
    }
}

/// Either a verified construction or the reason it is unavailable.
#[derive(Debug, Clone)]
pub struct WitnessRecord {
    pub name: String,
    pub outcome: std::result::Result<Witness, Error>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessSummary {
    pub name: String,
    pub status: &'static str,
    pub basis: Option<String>,
    pub claimed_o_type: Option<usize>,
    pub observed_o_type: Option<usize>,
    pub observed_h_rank: Option<usize>,
    pub claimed_in_image: Option<bool>,
    pub observed_in_image: Option<bool>,
    pub params: Vec<(String, String)>,
    pub transporter: Option<String>,
    pub transported_in_image: Option<bool>,
    pub reason: Option<String>,
}

impl WitnessRecord {
    pub fn summary(&self) -> WitnessSummary {
        match &self.outcome {
            Ok(w) => WitnessSummary {
                name: self.name.clone(),
                status: if w.verified() { "verified" } else { "failed" },
                basis: Some(w.lagrangian.basis().to_text()),
                claimed_o_type: Some(w.claimed_o_type),
                observed_o_type: Some(w.observed.o_type),
                observed_h_rank: Some(w.observed.h_rank),
                claimed_in_image: Some(w.claimed_in_image),
                observed_in_image: Some(w.observed_in_image),
                params: w.params.clone(),
                transporter: w.transporter.as_ref().map(|t| t.g.to_text()),
                transported_in_image: w.transporter.as_ref().map(|t| t.image_in_siegel),
                reason: None,
            },
            Err(e) => WitnessSummary {
                name: self.name.clone(),
                status: "unavailable",
                basis: None,
                claimed_o_type: None,
                observed_o_type: None,
                observed_h_rank: None,
                claimed_in_image: None,
                observed_in_image: None,
                params: Vec::new(),
                transporter: None,
                transported_in_image: None,
                reason: Some(e.to_string()),
            },
        }
    }

    /// Unavailable witnesses do not count as failures.
    pub fn failed(&self) -> bool {
        matches!(&self.outcome, Ok(w) if !w.verified())
    }
}

fn first_norm_one(f: FieldParams) -> EScalar {
    f.norm_one()[0]
}

/// `𝓛(diag(0,…,0, d,…,d))` with `r` zeros and `N(d) = 1`: type `r`, in the image.
pub fn diag_siegel(space: &SpaceParams, r: usize) -> Result<Witness> {
    if r > space.n {
        return Err(Error::Parameter(format!("r = {r} outside 0..={}", space.n)));
    }
    let f = space.field;
    let d = first_norm_one(f);
    let entries: Vec<EScalar> = (0..space.n).map(|j| if j < r { f.zero() } else { d }).collect();
    let w = siegel(&Mat::diag(f, &entries))?;
    Ok(Witness::new(
        format!("diag-siegel r={r}"),
        w,
        r,
        true,
        vec![("d".into(), d.to_string())],
    ))
}

/// `W_r = span(e_1, …, e_r, d e_{r+1} + e_{n+r+1}, …, d e_n + e_{2n})`,
/// `N(d) = 1`, `0 < r ≤ n`: type `r`, outside the image.
pub fn w_r(space: &SpaceParams, r: usize) -> Result<Witness> {
    if r == 0 || r > space.n {
        return Err(Error::Parameter(format!("r = {r} outside 1..={}", space.n)));
    }
    let f = space.field;
    let n = space.n;
    let d = first_norm_one(f);
    let basis = Mat::from_fn(f, 2 * n, n, |i, j| {
        if j < r {
            if i == j {
                f.one()
            } else {
                f.zero()
            }
        } else if i == j {
            d
        } else if i == n + j {
            f.one()
        } else {
            f.zero()
        }
    });
    Ok(Witness::new(
        format!("W_{r}"),
        Lagrangian::from_basis(&basis)?,
        r,
        false,
        vec![("d".into(), d.to_string())],
    ))
}

/// First `(c, d)` in scan order with `cd ≠ 0`, `1 + N(c) + N(d) = 0` and `c·d̄ ∈ F`.
pub fn odd_witness_params(f: FieldParams) -> Option<(EScalar, EScalar)> {
    let one = f.one();
    f.elements().skip(1).find_map(|c| {
        f.elements()
            .skip(1)
            .find(|&d| (one + c.norm() + d.norm()).is_zero() && (c * d.conj()).is_rational())
            .map(|d| (c, d))
    })
}

/// The odd-`n` type-0 Lagrangian outside the image: `{(Ax, Bx)}` with
/// `A = (1, 0, −c; 0, 1, −d; c̄, d̄, 1)`, `B = (1, 0, 0; 0, 1, 0; c, d, 0)`,
/// plus `E(e_j + e_{n+j})` for `j > 3`.
///
/// The construction assumes `-1` is not a square in `F`; when it is, the
/// parameter search is still run and its outcome recorded.
pub fn odd_o0(space: &SpaceParams) -> Result<Witness> {
    let n = space.n;
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::WitnessUnavailable(format!(
            "construction needs odd n >= 3, got n = {n}"
        )));
    }
    let f = space.field;
    let hypothesis = f.epsilon_f() < 0;
    let (c, d) = odd_witness_params(f).ok_or_else(|| {
        Error::WitnessUnavailable(format!(
            "no (c, d) with 1 + N(c) + N(d) = 0 and c d̄ in F for q = {} (-1 {} a square)",
            f.q(),
            if hypothesis { "is not" } else { "is" }
        ))
    })?;
    let (one, zero) = (f.one(), f.zero());
    let a = [[one, zero, -c], [zero, one, -d], [c.conj(), d.conj(), one]];
    let b = [[one, zero, zero], [zero, one, zero], [c, d, zero]];
    let basis = Mat::from_fn(f, 2 * n, n, |i, j| {
        if j < 3 {
            if i < 3 {
                a[i][j]
            } else if (n..n + 3).contains(&i) {
                b[i - n][j]
            } else {
                zero
            }
        } else if i == j || i == n + j {
            one
        } else {
            zero
        }
    });
    Ok(Witness::new(
        "odd-n O_0",
        Lagrangian::from_basis(&basis)?,
        0,
        false,
        vec![
            ("c".into(), c.to_string()),
            ("d".into(), d.to_string()),
            ("minus_one_nonsquare".into(), hypothesis.to_string()),
        ],
    ))
}

/// `𝓛(I_n)`: type 0, in the image.
pub fn siegel_identity(space: &SpaceParams) -> Result<Witness> {
    Ok(Witness::new(
        "siegel(I)",
        siegel(&Mat::identity(space.field, space.n))?,
        0,
        true,
        Vec::new(),
    ))
}

/// The even-`n` type-0 Lagrangian outside the image: `n/2` copies of
/// `{(Ax, Bx)}` with `A = (−bc, −b; c, 1)`, `B = (1, 0; b, 0)`, `N(b) = −1`, `c = 1`.
pub fn even_o0(space: &SpaceParams) -> Result<Witness> {
    let n = space.n;
    if !n.is_multiple_of(2) {
        return Err(Error::WitnessUnavailable(format!(
            "construction needs even n, got n = {n}"
        )));
    }
    let f = space.field;
    let b = f.solve_norm(-f.one())?;
    let c = f.one();
    let (one, zero) = (f.one(), f.zero());
    let a = [[-(b * c), -b], [c, one]];
    let bb = [[one, zero], [b, zero]];
    let basis = Mat::from_fn(f, 2 * n, n, |i, j| {
        let blk = j / 2;
        let (r0, c0) = (2 * blk, 2 * blk);
        if (r0..r0 + 2).contains(&i) {
            a[i - r0][j - c0]
        } else if (n + r0..n + r0 + 2).contains(&i) {
            bb[i - n - r0][j - c0]
        } else {
            zero
        }
    });
    Ok(Witness::new(
        "even-n O_0",
        Lagrangian::from_basis(&basis)?,
        0,
        false,
        vec![("b".into(), b.to_string()), ("c".into(), c.to_string())],
    ))
}

/// First `(α, β)` in scan order with `αβ ≠ 0` and `N(α) − N(β) = 1`.
pub fn scalar_transporter_params(f: FieldParams) -> Result<(EScalar, EScalar)> {
    let one = f.one();
    let beta = f
        .elements()
        .find(|b| !b.is_zero() && !(one + b.norm()).is_zero())
        .ok_or_else(|| Error::Internal("no admissible beta".into()))?;
    let alpha = f.solve_norm(one + beta.norm())?;
    Ok((alpha, beta))
}

/// `(αI, βI; β̄I, ᾱI)`, an element of `Sp_0(n,F)`.
pub fn scalar_transporter(space: &SpaceParams) -> Result<Mat> {
    let f = space.field;
    let n = space.n;
    let (alpha, beta) = scalar_transporter_params(f)?;
    Mat::block(
        &Mat::scalar(f, n, alpha),
        &Mat::scalar(f, n, beta),
        &Mat::scalar(f, n, beta.conj()),
        &Mat::scalar(f, n, alpha.conj()),
    )
}

/// `Z_k = span(e_1, …, e_k, e_{n+k+1}, …, e_{2n})`, `1 ≤ k ≤ n`: type `n`,
/// outside the image, moved into it by [`scalar_transporter`].
pub fn z_k(space: &SpaceParams, k: usize) -> Result<Witness> {
    let n = space.n;
    if k == 0 || k > n {
        return Err(Error::Parameter(format!("k = {k} outside 1..={n}")));
    }
    let f = space.field;
    let basis = Mat::from_fn(f, 2 * n, n, |i, j| {
        let target = if j < k { j } else { n + j };
        if i == target {
            f.one()
        } else {
            f.zero()
        }
    });
    let lagrangian = Lagrangian::from_basis(&basis)?;
    let g = scalar_transporter(space)?;
    let image = Lagrangian::span_of(&(&g * lagrangian.basis()));
    let (alpha, beta) = scalar_transporter_params(f)?;
    let mut w = Witness::new(
        format!("Z_{k}"),
        lagrangian,
        n,
        false,
        vec![
            ("alpha".into(), alpha.to_string()),
            ("beta".into(), beta.to_string()),
        ],
    );
    w.transporter = Some(Transport {
        in_sp0: is_member(&g, Group::Sp0)?,
        image_in_siegel: image.in_siegel_image(),
        image_o_type: image.o_type(),
        image,
        g,
    });
    Ok(w)
}

/// All constructions applicable to `space`, in a fixed order.
pub fn witnesses(space: &SpaceParams) -> Vec<WitnessRecord> {
    let n = space.n;
    let mut out = Vec::new();
    let mut push = |name: String, outcome: Result<Witness>| out.push(WitnessRecord { name, outcome });
    for r in 0..=n {
        push(format!("diag-siegel r={r}"), diag_siegel(space, r));
    }
    for r in 1..=n {
        push(format!("W_{r}"), w_r(space, r));
    }
    push("odd-n O_0".into(), odd_o0(space));
    push("siegel(I)".into(), siegel_identity(space));
    push("even-n O_0".into(), even_o0(space));
    for k in 1..=n {
        push(format!("Z_{k}"), z_k(space, k));
    }
    out
}
