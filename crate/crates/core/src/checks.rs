//! The named verification checks and the per-cell runner behind `fsiegel`.
//!
//! Each check runs on one `(q, n)` cell and yields a [`CheckRecord`]. A cap
//! overrun turns into `skipped-resource`; any other error is a failure.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::{cayley, v_k, verify_conjugation, Branch, CayleyData};
use crate::error::{Error, Result};
use crate::involution::{
    anti_involutions, b_t_report, classify_involutions, square_root_criterion, square_classes, eigenspace_properties, eigenspace_map,
};
use crate::lagrangian::{census, enumerate_lagrangians, lagrangian_count, conjugate_dims, siegel, Census, Lagrangian};
use crate::linalg::Mat;
use crate::orbit::{act, orbit, partition, search_orbit, stabilizer_order};
use crate::report::{CheckRecord, Status};
use crate::stabilizers::{
    enumerate_sp0, map_strata, orthogonal_group, parabolic_intersection, stabilizer_structure, unitary_group,
};
use crate::symplectic::{enumerate, generators, group_order, random_word, EnumeratedGroup, Group, GroupElement, SpaceParams};
use crate::witness::witnesses;

/// Caps and sampling parameters shared by every cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckConfig {
    /// Largest group that is enumerated element by element.
    pub cap_group: usize,
    /// Largest point set (Lagrangians, orbits) that is enumerated.
    pub cap_points: usize,
    pub seed: u64,
    /// Sample count for randomized checks.
    pub random_samples: u64,
    /// Vector-space size up to which pairwise identities are checked exhaustively.
    pub exhaustive_vectors: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            cap_group: 100_000,
            cap_points: 200_000,
            seed: 0x5eed,
            random_samples: 1_000,
            exhaustive_vectors: 6_561,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    Theorem1,
    Cayley,
    Stabilizers,
    StrataMap,
    Involutions,
    Lemma4,
    SiegelCriterion,
}

impl CheckId {
    pub const ALL: [CheckId; 7] = [
        CheckId::Theorem1,
        CheckId::Cayley,
        CheckId::Stabilizers,
        CheckId::StrataMap,
        CheckId::Involutions,
        CheckId::Lemma4,
        CheckId::SiegelCriterion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Theorem1 => "theorem1",
            CheckId::Cayley => "cayley",
            CheckId::Stabilizers => "stabilizers",
            CheckId::StrataMap => "strata-map",
            CheckId::Involutions => "involutions",
            CheckId::Lemma4 => "lemma4",
            CheckId::SiegelCriterion => "siegel-criterion",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown check {s:?}")))
    }
}

/// Lazily computed data shared by the checks of one cell.
pub struct Cell<'a> {
    pub space: SpaceParams,
    pub cfg: &'a CheckConfig,
    points: OnceLock<Result<Vec<Lagrangian>>>,
    census: OnceLock<Result<Census>>,
    spf: OnceLock<Result<EnumeratedGroup>>,
    sp0: OnceLock<Result<EnumeratedGroup>>,
    cayley: OnceLock<CayleyData>,
}

impl<'a> Cell<'a> {
    pub fn new(q: u32, n: usize, cfg: &'a CheckConfig) -> Result<Self> {
        Ok(Cell {
            space: SpaceParams::new(q, n)?,
            cfg,
            points: OnceLock::new(),
            census: OnceLock::new(),
            spf: OnceLock::new(),
            sp0: OnceLock::new(),
            cayley: OnceLock::new(),
        })
    }

    pub fn points(&self) -> Result<&[Lagrangian]> {
        self.points
            .get_or_init(|| enumerate_lagrangians(&self.space, self.cfg.cap_points))
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn census(&self) -> Result<&Census> {
        self.census
            .get_or_init(|| Ok(census(self.points()?, &self.space)))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn spf(&self) -> Result<&EnumeratedGroup> {
        self.spf
            .get_or_init(|| enumerate(Group::SpF, &self.space, self.cfg.cap_group))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn sp0(&self) -> Result<&EnumeratedGroup> {
        self.sp0
            .get_or_init(|| enumerate_sp0(&self.space, self.cfg.cap_group))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn cayley(&self) -> &CayleyData {
        self.cayley.get_or_init(|| cayley(&self.space))
    }

    /// `eps` and the transform parameters (`i`, or `v` and `b`).
    pub fn params(&self) -> Value {
        let eps = self.space.field.eps();
        match self.cayley().branch {
            Branch::MinusOneNonSquare { i } => json!({"eps": eps, "i": i.to_string()}),
            Branch::MinusOneSquare { v, b } => {
                json!({"eps": eps, "v": v.to_string(), "b": b.to_string()})
            }
        }
    }
}

/// Result of a check that ran to completion.
struct Outcome {
    pass: bool,
    data: Value,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report payloads serialize")
}

fn record(cell: &Cell, check: &str, start: Instant, outcome: Result<Outcome>) -> CheckRecord {
    let (status, data) = match outcome {
        Ok(o) => (if o.pass { Status::Pass } else { Status::Fail }, o.data),
        Err(e @ Error::Resource { .. }) => (Status::SkippedResource, json!({"reason": e.to_string()})),
        Err(e) => (Status::Fail, json!({"error": e.to_string()})),
    };
    CheckRecord {
        check: check.to_string(),
        q: cell.space.q(),
        n: cell.space.n,
        status,
        params: cell.params(),
        data,
        wall_ms: start.elapsed().as_millis() as u64,
    }
}

fn mats(tag: Group, space: &SpaceParams) -> Vec<Mat> {
    generators(tag, space).into_iter().map(GroupElement::into_mat).collect()
}

/// Runs `checks` on one cell, in the given order.
pub fn run_cell(q: u32, n: usize, checks: &[CheckId], cfg: &CheckConfig) -> Result<Vec<CheckRecord>> {
    let cell = Cell::new(q, n, cfg)?;
    Ok(checks
        .iter()
        .map(|&c| {
            let start = Instant::now();
            let outcome = match c {
                CheckId::Theorem1 => theorem1(&cell),
                CheckId::Cayley => cayley_check(&cell),
                CheckId::Stabilizers => stabilizers(&cell),
                CheckId::StrataMap => strata_map(&cell),
                CheckId::Involutions => involutions(&cell),
                CheckId::Lemma4 => lemma4(&cell),
                CheckId::SiegelCriterion => siegel_criterion(&cell),
            };
            record(&cell, c.name(), start, outcome)
        })
        .collect())
}

/// Evaluates `f` on every `(q, n)` of the grid in parallel, keeping grid order.
pub fn run_grid<F>(qs: &[u32], ns: &[usize], f: F) -> Result<Vec<CheckRecord>>
where
    F: Fn(u32, usize) -> Result<Vec<CheckRecord>> + Sync,
{
    let cells: Vec<(u32, usize)> = qs.iter().flat_map(|&q| ns.iter().map(move |&n| (q, n))).collect();
    let per_cell: Vec<Vec<CheckRecord>> = cells.par_iter().map(|&(q, n)| f(q, n)).collect::<Result<_>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}

/// Stratum counts with a cross-check of the total against the product formula.
pub fn census_record(q: u32, n: usize, cfg: &CheckConfig) -> Result<CheckRecord> {
    let cell = Cell::new(q, n, cfg)?;
    let start = Instant::now();
    let outcome = cell.census().map(|c| {
        let expected = lagrangian_count(q, n);
        let strata_ok = c.strata.iter().map(|s| s.h_count).sum::<usize>() == c.total
            && c.strata.iter().map(|s| s.o_count).sum::<usize>() == c.total;
        let mut data = to_value(c);
        data["expected_total"] = json!(expected);
        data["image_size"] = json!(c.strata.iter().map(|s| s.h_in_image).sum::<usize>());
        Outcome {
            pass: c.total as u128 == expected && strata_ok,
            data,
        }
    });
    Ok(record(&cell, "census", start, outcome))
}

/// Every witness construction, re-verified.
pub fn witness_record(q: u32, n: usize, cfg: &CheckConfig) -> Result<CheckRecord> {
    let cell = Cell::new(q, n, cfg)?;
    let start = Instant::now();
    let records = witnesses(&cell.space);
    let summaries: Vec<_> = records.iter().map(|r| r.summary()).collect();
    let outcome = Ok(Outcome {
        pass: !records.iter().any(|r| r.failed()),
        data: json!({ "witnesses": summaries }),
    });
    Ok(record(&cell, "witness", start, outcome))
}

/// Orbit partition of all Lagrangians under `Sp(n,F)` or `Sp_0(n,F)`.
pub fn orbits_record(q: u32, n: usize, group: Group, cfg: &CheckConfig) -> Result<CheckRecord> {
    let cell = Cell::new(q, n, cfg)?;
    let start = Instant::now();
    let outcome = (|| {
        let points = cell.points()?;
        let gens = mats(group, &cell.space);
        let (consistent, summaries) = match group {
            Group::SpF => {
                let p = partition(points, &gens, cfg.cap_points, Lagrangian::h_rank)?;
                (p.consistent(points.len()), to_value(&p.summaries))
            }
            Group::Sp0 => {
                let p = partition(points, &gens, cfg.cap_points, Lagrangian::o_type)?;
                (p.consistent(points.len()), to_value(&p.summaries))
            }
            Group::SpE => {
                let p = partition(points, &gens, cfg.cap_points, |_| ())?;
                (p.consistent(points.len()), to_value(&p.summaries))
            }
        };
        Ok(Outcome {
            pass: consistent,
            data: json!({"group": group.name(), "points": points.len(), "orbits": summaries}),
        })
    })();
    Ok(record(&cell, "orbits", start, outcome))
}

/// Order, generators and optionally the enumerated closure of a group.
pub fn group_record(q: u32, n: usize, group: Group, enumerate_closure: bool, cap: usize, cfg: &CheckConfig) -> Result<CheckRecord> {
    let cell = Cell::new(q, n, cfg)?;
    let start = Instant::now();
    let outcome = (|| {
        let gens = generators(group, &cell.space);
        let order = group_order(group, q, n);
        let mut data = json!({
            "group": group.name(),
            "order": order,
            "generators": gens.len(),
            "generator_matrices": gens.iter().map(|g| g.mat().to_text()).collect::<Vec<_>>(),
        });
        let mut pass = true;
        if enumerate_closure {
            let closure = match group {
                Group::Sp0 => enumerate_sp0(&cell.space, cap)?,
                _ => enumerate(group, &cell.space, cap)?,
            };
            data["closure_size"] = json!(closure.len());
            pass = closure.len() as u128 == order;
        }
        Ok(Outcome { pass, data })
    })();
    Ok(record(&cell, "group", start, outcome))
}

fn theorem1(cell: &Cell) -> Result<Outcome> {
    let space = &cell.space;
    let n = space.n;
    let points = cell.points()?;
    let c = cell.census()?;
    let h = partition(points, &mats(Group::SpF, space), cell.cfg.cap_points, Lagrangian::h_rank)?;
    let o = partition(points, &mats(Group::Sp0, space), cell.cfg.cap_points, Lagrangian::o_type)?;

    let labels_present = |f: fn(&Lagrangian) -> usize| points.iter().map(f).collect::<BTreeSet<_>>();
    let exact = |labels: Vec<usize>, present: BTreeSet<usize>| {
        let distinct: BTreeSet<usize> = labels.iter().copied().collect();
        distinct.len() == labels.len() && distinct == present
    };
    let bullet1 = o.consistent(points.len())
        && exact(o.summaries.iter().map(|s| s.label).collect(), labels_present(Lagrangian::o_type));
    let bullet2 = h.consistent(points.len())
        && exact(h.summaries.iter().map(|s| s.label).collect(), labels_present(Lagrangian::h_rank));
    let bullet3 = h.summaries.iter().chain(&o.summaries).all(|s| s.image_points > 0);
    let bullet4 = (n >= 2).then(|| o.summaries.iter().all(|s| s.non_image_points > 0));
    let bullet5 = h
        .summaries
        .iter()
        .all(|s| (s.non_image_points == 0) == (s.label == n));
    let sizes_match = c.strata.iter().all(|s| s.h_count == s.o_count);
    let total_ok = c.total as u128 == lagrangian_count(space.q(), n);
    let image_size = c.strata.iter().map(|s| s.h_in_image).sum::<usize>();
    let image_ok = image_size as u128 == (space.q() as u128).pow((n * (n + 1)) as u32);

    Ok(Outcome {
        pass: bullet1 && bullet2 && bullet3 && bullet4.unwrap_or(true) && bullet5 && sizes_match && total_ok && image_ok,
        data: json!({
            "census": to_value(c),
            "h_orbits": to_value(&h.summaries),
            "o_orbits": to_value(&o.summaries),
            "sp0_orbits_are_o_strata": bullet1,
            "spf_orbits_are_h_strata": bullet2,
            "every_orbit_meets_image": bullet3,
            "no_sp0_orbit_inside_image": bullet4,
            "h_n_unique_orbit_inside_image": bullet5,
            "h_sizes_equal_o_sizes": sizes_match,
            "total_matches_formula": total_ok,
            "image_size": image_size,
            "image_size_matches": image_ok,
        }),
    })
}

fn cayley_check(cell: &Cell) -> Result<Outcome> {
    let cfg = cell.cfg;
    let data = cell.cayley();
    let report = verify_conjugation(data, cfg.cap_group, cfg.exhaustive_vectors, cfg.random_samples, cfg.seed)?;
    Ok(Outcome {
        pass: report.passed(),
        data: json!({
            "m": data.m.to_text(),
            "multiplier": data.multiplier.to_string(),
            "conformal": data.conformal.to_string(),
            "predicted_conformal": data.predicted_conformal().to_string(),
            "effective_conformal": data.effective_conformal().to_string(),
            "normalized": data.normalized(),
            "lambda": data.lambda.map(|l| l.to_string()),
            "literal": data.literal.as_ref().map(Mat::to_text),
            "report": to_value(&report),
        }),
    })
}

fn stabilizers(cell: &Cell) -> Result<Outcome> {
    let space = &cell.space;
    let cfg = cell.cfg;
    let n = space.n;
    let c = cell.census()?;
    let stratum = |j: usize| c.strata.iter().find(|s| s.r == j).map_or(0, |s| s.o_count);
    match cell.sp0() {
        Ok(sp0) => {
            let reports = (0..=n)
                .map(|k| stabilizer_structure(space, k, sp0, stratum(n - k), cfg.cap_group))
                .collect::<Result<Vec<_>>>()?;
            let parabolic = parabolic_intersection(space, sp0, cfg.cap_group)?;
            Ok(Outcome {
                pass: reports.iter().all(|r| r.passed()) && parabolic.equal && parabolic.all_block_diagonal,
                data: json!({"mode": "filtered", "k": to_value(&reports), "parabolic": to_value(&parabolic)}),
            })
        }
        Err(Error::Resource { .. }) => {
            let order = group_order(Group::Sp0, space.q(), n);
            let gens = mats(Group::Sp0, space);
            let mut rows = Vec::new();
            let mut pass = true;
            for k in 0..=n {
                let orbit_size = orbit(&v_k(space, k)?, &gens, cfg.cap_points)?.size();
                let stab = stabilizer_order(order, orbit_size)?;
                let o = orthogonal_group(space.field, k, cfg.cap_group)?.len() as u128;
                let u = unitary_group(space.field, n - k, cfg.cap_group)?.len() as u128;
                let predicted = o * u * (space.q() as u128).pow((k * (k + 1) / 2) as u32);
                let ok = stab == predicted && orbit_size == stratum(n - k);
                pass &= ok;
                rows.push(json!({
                    "k": k,
                    "orbit_size": orbit_size,
                    "stratum_size": stratum(n - k),
                    "stabilizer_order": stab,
                    "orthogonal_order": o,
                    "unitary_order": u,
                    "predicted_order": predicted,
                    "matches_prediction": stab == predicted,
                }));
            }
            Ok(Outcome {
                pass,
                data: json!({"mode": "orbit-stabilizer", "group_order": order, "k": rows}),
            })
        }
        Err(e) => Err(e),
    }
}

fn strata_map(cell: &Cell) -> Result<Outcome> {
    let report = map_strata(cell.cayley(), cell.points()?)?;
    Ok(Outcome {
        pass: report.passed(),
        data: to_value(&report),
    })
}

fn involutions(cell: &Cell) -> Result<Outcome> {
    let space = &cell.space;
    let cfg = cell.cfg;
    let f = space.field;
    let n = space.n;
    let spf = cell.spf()?;
    let points = cell.points()?;
    let anti = anti_involutions(spf, space);

    let l6 = square_root_criterion(spf, space);
    let bt = anti
        .par_iter()
        .map(|t| b_t_report(t, space))
        .collect::<Result<Vec<_>>>()?;
    let bt_failures = bt.iter().filter(|r| !r.passed()).count();

    let minus_one_nonsquare = f.epsilon_f() == -1;
    let (p6_checked, p6_failures) = if minus_one_nonsquare {
        let reports = anti
            .iter()
            .map(|t| eigenspace_properties(t, space, cfg.exhaustive_vectors, cfg.random_samples, cfg.seed))
            .collect::<Result<Vec<_>>>()?;
        (reports.len(), reports.iter().filter(|r| !r.passed()).count())
    } else {
        (0, 0)
    };

    let target_rank = if minus_one_nonsquare { n } else { 0 };
    let target: Vec<Lagrangian> = points.iter().filter(|w| w.h_rank() == target_rank).cloned().collect();
    let p3 = eigenspace_map(space, spf, &anti, &target)?;

    let p4 = square_classes(spf, space);
    let p4_ok = p4.iter().all(|e| e.size == 0);

    let classes = classify_involutions(spf, space)?;
    let classes_ok = classes
        .iter()
        .all(|c| c.orbits == 1 && c.eigenspaces_nondegenerate && c.reconstructs_as_t_w);
    let observed_k: Vec<usize> = classes.iter().map(|c| c.k).collect();
    let literal_range = observed_k.iter().all(|&k| (1..=2 * n).contains(&k));

    let q = f.q() as usize;
    let count_matches = (n == 1 && !minus_one_nonsquare).then(|| anti.len() == q * (q + 1));

    Ok(Outcome {
        pass: l6.passed()
            && bt_failures == 0
            && p6_failures == 0
            && p3.passed()
            && p4_ok
            && classes_ok
            && count_matches.unwrap_or(true),
        data: json!({
            "anti_involutions": anti.len(),
            "square_root_criterion": to_value(&l6),
            "b_t_checked": bt.len(),
            "b_t_failures": bt_failures,
            "b_t_criterion": "det(JT) is a nonzero square",
            "eigenspace_checked": p6_checked,
            "eigenspace_failures": p6_failures,
            "eigenspace_map": to_value(&p3),
            "square_classes": to_value(&p4),
            "square_classes_vacuous": p4.is_empty(),
            "classes": to_value(&classes),
            "observed_k": observed_k,
            "k_within_one_to_2n": literal_range,
            "anti_involution_count_matches": count_matches,
        }),
    })
}

fn lemma4(cell: &Cell) -> Result<Outcome> {
    let points = cell.points()?;
    let n = cell.space.n;
    let failures = points
        .par_iter()
        .filter(|w| {
            let r = w.h_rank();
            let ((sum, int), (es, ei)) = conjugate_dims(w);
            let (a, b) = (w.intersect_conj(), w.h_e_radical());
            let radical_ok = a.rank() == b.rank() && a.hcat(&b).is_ok_and(|ab| ab.rank() == a.rank());
            !(sum == es && int == ei && es == n + r && ei == n - r && radical_ok)
        })
        .count();
    Ok(Outcome {
        pass: failures == 0,
        data: json!({"points": points.len(), "failures": failures}),
    })
}

fn random_symmetric<R: Rng>(space: &SpaceParams, rational: bool, rng: &mut R) -> Mat {
    let f = space.field;
    let n = space.n;
    let mut z = Mat::zeros(f, n, n);
    for i in 0..n {
        for j in i..n {
            let x = if rational {
                f.from_f(rng.gen_range(0..f.q()) as i64)
            } else {
                f.from_index(rng.gen_range(0..f.order_e()))
            };
            z[(i, j)] = x;
            z[(j, i)] = x;
        }
    }
    z
}

fn nondegenerate(z: &Mat) -> bool {
    (z - &z.conj_entrywise()).rank() == z.rows()
}

/// `(C Z + D, invertible)` for `g = (A, B; C, D)`.
fn lower_factor(g: &Mat, z: &Mat) -> Result<bool> {
    let [_, _, c, d] = g.blocks()?;
    Ok(c.checked_mul(z)?.checked_add(&d)?.rank() == z.rows())
}

/// The finite counterpart of the upper half space.
fn siegel_criterion(cell: &Cell) -> Result<Outcome> {
    let space = &cell.space;
    let cfg = cell.cfg;
    let f = space.field;
    let n = space.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let exhaustive = n == 1 && space.q() <= 5;

    let (cases, mode, degenerate): (Vec<(Mat, Mat)>, &str, Vec<Mat>) = if exhaustive {
        let group = cell.spf()?;
        let zs: Vec<Mat> = f.elements().map(|x| Mat::scalar(f, 1, x)).collect();
        let (good, bad): (Vec<Mat>, Vec<Mat>) = zs.into_iter().partition(nondegenerate);
        let cases = good
            .iter()
            .flat_map(|z| group.iter().map(move |g| (z.clone(), g.clone())))
            .collect();
        (cases, "exhaustive", bad)
    } else {
        let gens = generators(Group::SpF, space);
        let mut cases = Vec::new();
        while (cases.len() as u64) < cfg.random_samples {
            let z = random_symmetric(space, false, &mut rng);
            if nondegenerate(&z) {
                let g = random_word(&gens, 4 * n + 8, &mut rng);
                cases.push((z, g));
            }
        }
        let mut bad = vec![Mat::zeros(f, n, n)];
        for _ in 0..2_000 {
            if bad.len() == 20 {
                break;
            }
            let x = random_symmetric(space, true, &mut rng);
            let y = random_symmetric(space, true, &mut rng);
            if y.rank() < n {
                let z = &x + &y.scale(f.s());
                if !bad.contains(&z) {
                    bad.push(z);
                }
            }
        }
        (cases, "random", bad)
    };

    let results = cases
        .par_iter()
        .map(|(z, g)| -> Result<(bool, bool)> {
            let invertible = lower_factor(g, z)?;
            let in_image = act(g, &siegel(z)?)?.in_siegel_image();
            Ok((invertible, in_image == invertible))
        })
        .collect::<Result<Vec<_>>>()?;
    let cz_plus_d_failures = results.iter().filter(|r| !r.0).count();
    let image_criterion_failures = results.iter().filter(|r| !r.1).count();

    let witness_search = |tag: Group, zs: &[Mat]| -> Result<Vec<Value>> {
        let gens = mats(tag, space);
        zs.iter()
            .map(|z| {
                let found = search_orbit(&siegel(z)?, &gens, cfg.cap_points, |w| !w.in_siegel_image())?;
                let valid = match &found {
                    Some((_, g)) => !lower_factor(g, z)? && crate::symplectic::is_member(g, tag)?,
                    None => false,
                };
                Ok(json!({
                    "z": z.to_text(),
                    "found": found.is_some(),
                    "valid": valid,
                    "g": found.as_ref().map(|(_, g)| g.to_text()),
                }))
            })
            .collect()
    };
    let spf_witnesses = witness_search(Group::SpF, &degenerate)?;
    let spf_witnesses_ok = spf_witnesses.iter().all(|v| v["valid"] == json!(true));

    let sp0_witnesses = if n > 1 {
        let mut zs: Vec<Mat> = cases.iter().map(|(z, _)| z.clone()).take(10).collect();
        zs.extend(degenerate.iter().take(10).cloned());
        zs.dedup();
        Some(witness_search(Group::Sp0, &zs)?)
    } else {
        None
    };
    let sp0_witnesses_ok = sp0_witnesses
        .as_ref()
        .is_none_or(|r| r.iter().all(|v| v["valid"] == json!(true)));

    Ok(Outcome {
        pass: cz_plus_d_failures == 0 && image_criterion_failures == 0 && spf_witnesses_ok && sp0_witnesses_ok,
        data: json!({
            "mode": mode,
            "cases": cases.len(),
            "nondegenerate_z": if exhaustive { cases.len() / cell.spf()?.len() } else { cases.len() },
            "group_elements": if exhaustive { cell.spf()?.len() } else { 0 },
            "cz_plus_d_failures": cz_plus_d_failures,
            "image_criterion_failures": image_criterion_failures,
            "degenerate_z": degenerate.len(),
            "spf_witnesses": spf_witnesses,
            "sp0_witnesses": sp0_witnesses,
        }),
    })
}

/// Rejects a grid cell before any work is dispatched.
pub fn validate_cell(q: u32, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("n must be at least 1".into()));
    }
    SpaceParams::new(q, n).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(q: u32, n: usize, c: CheckId) -> CheckRecord {
        run_cell(q, n, &[c], &CheckConfig::default()).unwrap().remove(0)
    }

    #[test]
    fn check_names_round_trip() {
        for c in CheckId::ALL {
            assert_eq!(c.name().parse::<CheckId>().unwrap(), c);
        }
        assert!("bogus".parse::<CheckId>().is_err());
    }

    #[test]
    fn q3_n1_checks_pass() {
        for c in CheckId::ALL {
            let r = run(3, 1, c);
            assert_eq!(r.status, Status::Pass, "{c}: {}", r.data);
        }
    }

    #[test]
    fn siegel_criterion_exhaustive_count() {
        let r = run(3, 1, CheckId::SiegelCriterion);
        assert_eq!(r.data["mode"], "exhaustive");
        assert_eq!(r.data["cases"], 6 * 24);
    }

    #[test]
    fn resource_cap_skips() {
        let cfg = CheckConfig {
            cap_group: 10,
            ..CheckConfig::default()
        };
        let r = run_cell(3, 1, &[CheckId::Involutions], &cfg).unwrap();
        assert_eq!(r[0].status, Status::SkippedResource);
    }

    #[test]
    fn params_echo() {
        let r = run(5, 1, CheckId::Lemma4);
        assert!(r.params.get("v").is_some() && r.params.get("b").is_some());
        let r = run(3, 1, CheckId::Lemma4);
        assert!(r.params.get("i").is_some());
    }
}
