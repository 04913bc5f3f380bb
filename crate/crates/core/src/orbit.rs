//! Orbits of generator sets on Lagrangians.
//!
//! Orbits are grown level by level: the images of a whole frontier are
//! computed in parallel, then merged serially in frontier order. The visited
//! set, the discovery order and the parent pointers are therefore identical
//! for any thread count.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lagrangian::Lagrangian;
use crate::linalg::Mat;
use crate::symplectic::EnumeratedGroup;

/// `g·W`, canonicalized.
pub fn act(g: &Mat, w: &Lagrangian) -> Result<Lagrangian> {
    let prod = g.checked_mul(w.basis())?;
    if prod.rows() != prod.cols() * 2 {
        return Err(Error::shape(
            format!("{0}x{0} matrix", w.basis().rows()),
            format!("{}x{}", g.rows(), g.cols()),
        ));
    }
    Ok(Lagrangian::span_of(&prod))
}

/// One orbit with a BFS tree rooted at its representative.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    points: Vec<Lagrangian>,
    /// `(parent index, generator index)`; the root points to itself.
    parents: Vec<(usize, usize)>,
    index: HashMap<Lagrangian, usize>,
}

impl OrbitRecord {
    pub fn representative(&self) -> &Lagrangian {
        &self.points[0]
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Lagrangian] {
        &self.points
    }

    pub fn contains(&self, w: &Lagrangian) -> bool {
        self.index.contains_key(w)
    }

    pub fn position(&self, w: &Lagrangian) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Generator indices `[i_1, …, i_m]` with
    /// `g_{i_m} ⋯ g_{i_1} · representative = point`.
    pub fn word(&self, point: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut at = point;
        while at != 0 {
            let (parent, g) = self.parents[at];
            word.push(g);
            at = parent;
        }
        word.reverse();
        word
    }

    /// The matrix `g_{i_m} ⋯ g_{i_1}` of [`OrbitRecord::word`].
    pub fn transporter(&self, point: usize, gens: &[Mat]) -> Mat {
        let n2 = self.points[0].basis().rows();
        let mut g = Mat::identity(self.points[0].basis().field(), n2);
        for i in self.word(point) {
            g = &gens[i] * &g;
        }
        g
    }

    /// Replays the transporter word of every `stride`-th point.
    pub fn check_words(&self, gens: &[Mat], stride: usize) -> bool {
        (0..self.size())
            .step_by(stride.max(1))
            .collect::<Vec<_>>()
            .par_iter()
            .all(|&p| {
                act(&self.transporter(p, gens), self.representative())
                    .is_ok_and(|w| w == self.points[p])
            })
    }
}

/// BFS orbit of `seed` under `gens`; fails once more than `cap` points are found.
pub fn orbit(seed: &Lagrangian, gens: &[Mat], cap: usize) -> Result<OrbitRecord> {
    let mut points = vec![seed.clone()];
    let mut parents = vec![(0, 0)];
    let mut index = HashMap::from([(seed.clone(), 0usize)]);
    let mut frontier = 0..1;
    while !frontier.is_empty() {
        let images: Vec<Vec<Lagrangian>> = points[frontier.clone()]
            .par_iter()
            .map(|w| gens.iter().map(|g| act(g, w)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let start = points.len();
        for (offset, imgs) in images.into_iter().enumerate() {
            let parent = frontier.start + offset;
            for (gi, x) in imgs.into_iter().enumerate() {
                if index.contains_key(&x) {
                    continue;
                }
                if points.len() >= cap {
                    return Err(Error::Resource {
                        what: "orbit enumeration".into(),
                        cap,
                    });
                }
                index.insert(x.clone(), points.len());
                points.push(x);
                parents.push((parent, gi));
            }
        }
        frontier = start..points.len();
    }
    Ok(OrbitRecord {
        points,
        parents,
        index,
    })
}

/// Breadth-first search of the orbit of `seed` for a point satisfying
/// `pred`, returning it with a transporter `g` such that `g·seed` is that
/// point. Returns `None` when the whole orbit fails `pred`.
pub fn search_orbit<P>(seed: &Lagrangian, gens: &[Mat], cap: usize, pred: P) -> Result<Option<(Lagrangian, Mat)>>
where
    P: Fn(&Lagrangian) -> bool,
{
    let n2 = seed.basis().rows();
    let f = seed.basis().field();
    let mut seen = HashSet::from([seed.clone()]);
    let mut queue = VecDeque::from([(seed.clone(), Mat::identity(f, n2))]);
    while let Some((w, g)) = queue.pop_front() {
        if pred(&w) {
            return Ok(Some((w, g)));
        }
        for s in gens {
            let x = act(s, &w)?;
            if seen.contains(&x) {
                continue;
            }
            if seen.len() >= cap {
                return Err(Error::Resource {
                    what: "orbit search".into(),
                    cap,
                });
            }
            seen.insert(x.clone());
            queue.push_back((x, s * &g));
        }
    }
    Ok(None)
}

/// Orbit summary for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitSummary<L> {
    pub size: usize,
    pub label: L,
    pub representative: String,
    pub image_points: usize,
    pub non_image_points: usize,
    pub label_consistent: bool,
    pub words_checked: bool,
}

#[derive(Debug, Clone)]
pub struct Partition<L> {
    pub orbits: Vec<OrbitRecord>,
    pub summaries: Vec<OrbitSummary<L>>,
    /// Orbit points that were not in the input set.
    pub escaped: usize,
    pub covered: usize,
}

impl<L> Partition<L> {
    /// Disjoint cover of the input, constant labels and valid words.
    pub fn consistent(&self, input_len: usize) -> bool {
        self.escaped == 0
            && self.covered == input_len
            && self
                .summaries
                .iter()
                .all(|s| s.label_consistent && s.words_checked)
    }
}

/// Splits `points` into orbits of `gens`, labelling each orbit by `label` of
/// its representative and flagging orbits whose members disagree.
pub fn partition<L, F>(points: &[Lagrangian], gens: &[Mat], cap: usize, label: F) -> Result<Partition<L>>
where
    L: Clone + Eq + Hash + Send + Sync,
    F: Fn(&Lagrangian) -> L + Sync,
{
    let input: HashMap<&Lagrangian, usize> = points.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut owner: Vec<Option<usize>> = vec![None; points.len()];
    let mut orbits = Vec::new();
    let mut summaries = Vec::new();
    let mut escaped = 0;
    let mut covered = 0;
    for i in 0..points.len() {
        if owner[i].is_some() {
            continue;
        }
        let rec = orbit(&points[i], gens, cap)?;
        for w in rec.points() {
            match input.get(w) {
                Some(&j) if owner[j].is_none() => {
                    owner[j] = Some(orbits.len());
                    covered += 1;
                }
                Some(_) => {}
                None => escaped += 1,
            }
        }
        let rep_label = label(rec.representative());
        let label_consistent = rec.points().par_iter().all(|w| label(w) == rep_label);
        let image_points = rec.points().iter().filter(|w| w.in_siegel_image()).count();
        summaries.push(OrbitSummary {
            size: rec.size(),
            label: rep_label,
            representative: rec.representative().basis().to_text(),
            image_points,
            non_image_points: rec.size() - image_points,
            label_consistent,
            words_checked: rec.check_words(gens, 100),
        });
        orbits.push(rec);
    }
    Ok(Partition {
        orbits,
        summaries,
        escaped,
        covered,
    })
}

/// `|G| / |orbit|`, failing when the orbit size does not divide the order.
pub fn stabilizer_order(group_order: u128, orbit_size: usize) -> Result<u128> {
    let size = orbit_size as u128;
    if size == 0 || !group_order.is_multiple_of(size) {
        return Err(Error::Verification(format!(
            "orbit size {orbit_size} does not divide group order {group_order}"
        )));
    }
    Ok(group_order / size)
}

/// `{g ∈ G : g·W = W}` by filtering a fully enumerated group, in group order.
pub fn stabilizer_elements(point: &Lagrangian, group: &EnumeratedGroup) -> Vec<Mat> {
    group
        .elements()
        .par_iter()
        .filter(|g| act(g, point).is_ok_and(|w| &w == point))
        .cloned()
        .collect()
}
