//! Acceptance criteria 1 to 15, one line each.
//!
//! Criteria listed in `KNOWN_FAILURES` fail because the statement being
//! checked is false for the cells in question; they are still evaluated and
//! printed as `FAIL`. The run exits non-zero on any other failure, and also
//! when a known failure starts passing.

#[allow(dead_code)]
#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use std::collections::{BTreeSet, HashSet};
use std::process::Command;
use std::time::Instant;

use finite_siegel::lagrangian::{enumerate_lagrangians, lagrangian_count};
use finite_siegel::{Lagrangian, SpaceParams};
use serde_json::Value;

/// Criterion 4: `H_2` is not inside the Siegel image for n = 2.
/// Criterion 8: the stabilizer orders of `V_1`, `V_2` at q = 3, n = 2 are 216 and 1296.
const KNOWN_FAILURES: [u32; 2] = [4, 8];

struct Run {
    report: Value,
    exit: i32,
    seconds: f64,
}

fn fsiegel(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fsiegel"))
        .args(args)
        .env_remove("FSIEGEL_CAP_GROUP")
        .env_remove("FSIEGEL_CAP_POINTS")
        .output()
        .expect("fsiegel runs");
    let seconds = start.elapsed().as_secs_f64();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    Run {
        report,
        exit: out.status.code().unwrap_or(-1),
        seconds,
    }
}

fn records(run: &Run) -> &[Value] {
    run.report["records"].as_array().map(Vec::as_slice).unwrap_or(&[])
}

fn find<'a>(run: &'a Run, check: &str, q: u64, n: u64) -> &'a Value {
    records(run)
        .iter()
        .find(|r| r["check"] == check && r["q"] == q && r["n"] == n)
        .unwrap_or(&Value::Null)
}

fn passed(r: &Value) -> bool {
    r["status"] == "pass"
}

fn strata(census: &Value) -> Vec<(u64, u64, u64, u64, u64)> {
    census["strata"]
        .as_array()
        .map(|a| {
            a.iter()
                .map(|s| {
                    let g = |k: &str| s[k].as_u64().unwrap_or(u64::MAX);
                    (g("r"), g("h_count"), g("o_count"), g("h_in_image"), g("o_in_image"))
                })
                .collect()
        })
        .unwrap_or_default()
}

fn strip_timing(mut report: Value) -> Value {
    if let Some(rs) = report["records"].as_array_mut() {
        for r in rs {
            r["wall_ms"] = Value::from(0);
        }
    }
    report
}

const GRID: [(u64, u64); 6] = [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (7, 2)];

fn main() {
    let census = fsiegel(&["census", "--q", "3,5,7", "--n", "1,2", "--jobs", "1"]);
    let verify = fsiegel(&["verify", "--jobs", "1"]);
    let mut results: Vec<(u32, bool, String)> = Vec::new();

    // 1. Census counts.
    {
        let expected = [((3, 1), 10), ((5, 1), 26), ((7, 1), 50), ((3, 2), 820), ((5, 2), 16_276)];
        let mut ok = census.exit == 0;
        let mut notes = Vec::new();
        for ((q, n), total) in expected {
            let r = find(&census, "census", q, n);
            ok &= r["data"]["total"] == total
                && lagrangian_count(q as u32, n as usize) == total as u128
                && r["wall_ms"].as_u64().is_some_and(|ms| ms < 60_000);
        }
        for (q, n) in [(3, 1), (3, 2), (5, 1)] {
            let space = SpaceParams::new(q, n).unwrap();
            let engine: HashSet<Lagrangian> = enumerate_lagrangians(&space, 100_000).unwrap().into_iter().collect();
            let brute = oracle::brute_force_lagrangians(&space);
            ok &= engine == brute;
            notes.push(format!("({q},{n}) brute {}", brute.len()));
        }
        results.push((1, ok, notes.join(", ")));
    }

    // 2. Orbit partitions equal the label partitions.
    {
        let mut ok = true;
        for (q, n) in GRID {
            let r = find(&verify, "theorem1", q, n);
            ok &= r["data"]["sp0_orbits_are_o_strata"] == true
                && r["data"]["spf_orbits_are_h_strata"] == true
                && r["wall_ms"].as_u64().is_some_and(|ms| ms < 120_000);
        }
        results.push((2, ok, "all default-grid cells".into()));
    }

    // 3. Every orbit meets the image.
    {
        let ok = GRID
            .iter()
            .all(|&(q, n)| find(&verify, "theorem1", q, n)["data"]["every_orbit_meets_image"] == true);
        results.push((3, ok, "all default-grid cells".into()));
    }

    // 4. H_n inside the image; H_0, H_1 and every O_j escape it.
    {
        let mut ok = true;
        let mut notes = Vec::new();
        for (q, n) in GRID {
            let c = &find(&census, "census", q, n)["data"];
            let st = strata(c);
            let inside = |r: u64| st.iter().any(|s| s.0 == r && s.1 == s.3);
            let outside = |r: u64| st.iter().any(|s| s.0 == r && s.1 > s.3);
            if n == 2 {
                let o_escape = st.iter().all(|s| s.2 > s.4);
                ok &= o_escape && inside(2) && outside(0) && outside(1);
                if !inside(2) {
                    let h2 = st.iter().find(|s| s.0 == 2).unwrap();
                    notes.push(format!("({q},2) H_2 image {}/{}", h2.3, h2.1));
                }
            } else {
                ok &= inside(1) && outside(0);
            }
        }
        results.push((4, ok, notes.join(", ")));
    }

    // 5. act(M, H_j) = O_j, |H_j| = |O_j|.
    {
        let mut ok = [(3, 1), (5, 1), (7, 1), (3, 2)]
            .iter()
            .all(|&(q, n)| passed(find(&verify, "strata-map", q, n)));
        for (q, n) in GRID {
            ok &= strata(&find(&census, "census", q, n)["data"]).iter().all(|s| s.1 == s.2);
        }
        results.push((5, ok, String::new()));
    }

    // 6. Example sizes at (3,1).
    {
        let st = strata(&find(&census, "census", 3, 1)["data"]);
        let ok = st.contains(&(0, 4, 4, 3, 4)) && st.iter().any(|s| s.0 == 1 && s.1 == 6 && s.2 == 6);
        results.push((6, ok, format!("{st:?}")));
    }

    // 7. Cayley conjugation.
    {
        let mut ok = true;
        for (q, n) in GRID {
            let r = find(&verify, "cayley", q, n);
            let rep = &r["data"]["report"];
            ok &= passed(r) && rep["offending_generators"].as_array().is_some_and(Vec::is_empty);
            if matches!((q, n), (3, 1) | (3, 2)) {
                ok &= rep["closure"]["elementwise_equal"] == true
                    && rep["closure"]["back_equal"] == true
                    && rep["conformal"]["mode"] == "exhaustive";
            } else {
                ok &= rep["conformal"]["failures"] == 0;
            }
            if r["params"].get("i").is_some() {
                ok &= rep["inverse_is_conjugate"] == true;
            }
        }
        results.push((7, ok, String::new()));
    }

    // 8. Stabilizers at q = 3.
    {
        let mut ok = true;
        let mut notes = Vec::new();
        for n in [1, 2] {
            let r = find(&verify, "stabilizers", 3, n);
            for k in r["data"]["k"].as_array().into_iter().flatten() {
                let good = k["matches_prediction"] == true && k["matches_stratum"] == true;
                ok &= good;
                if !good {
                    notes.push(format!(
                        "n={n} k={}: {} vs {}",
                        k["k"], k["stabilizer_order"], k["predicted_order"]
                    ));
                }
            }
        }
        let n1 = &find(&verify, "stabilizers", 3, 1)["data"]["k"];
        ok &= n1[0]["stabilizer_order"] == 4 && n1[1]["stabilizer_order"] == 6;
        results.push((8, ok, notes.join(", ")));
    }

    // 9. Anti-involutions.
    {
        let d = |q, n| &find(&verify, "involutions", q, n)["data"];
        let mut ok = d(5, 1)["anti_involutions"] == 30 && d(3, 1)["anti_involutions"] == 6;
        ok &= strata(&find(&census, "census", 3, 1)["data"]).iter().any(|s| s.0 == 1 && s.1 == 6);
        for q in [3, 5, 7] {
            let l6 = &d(q, 1)["square_root_criterion"];
            ok &= l6["forward_failures"] == 0 && l6["backward_failures"] == 0;
        }
        for (q, n) in [(3, 1), (7, 1), (3, 2)] {
            ok &= d(q, n)["eigenspace_failures"] == 0 && d(q, n)["eigenspace_checked"].as_u64().is_some_and(|c| c > 0);
        }
        ok &= find(&verify, "involutions", 3, 2)["wall_ms"].as_u64().is_some_and(|ms| ms < 120_000);
        for (q, n) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            ok &= passed(find(&verify, "involutions", q, n));
        }
        results.push((9, ok, String::new()));
    }

    // 10. S_a = ∅.
    {
        let p7 = &find(&verify, "involutions", 7, 1)["data"]["square_classes"];
        let a7: Vec<(u64, u64)> = p7
            .as_array()
            .into_iter()
            .flatten()
            .map(|e| (e["a"].as_u64().unwrap(), e["size"].as_u64().unwrap()))
            .collect();
        let d3 = &find(&verify, "involutions", 3, 2)["data"];
        let ok = a7 == vec![(2, 0), (4, 0)] && d3["square_classes_vacuous"] == true;
        results.push((10, ok, "Sp(4,3) vacuous".into()));
    }

    // 11. Involution classes.
    {
        let classes = |q, n| -> Vec<(u64, u64, u64)> {
            find(&verify, "involutions", q, n)["data"]["classes"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|c| (c["k"].as_u64().unwrap(), c["size"].as_u64().unwrap(), c["orbits"].as_u64().unwrap()))
                .collect()
        };
        let sl2 = classes(3, 1);
        let sp4 = classes(3, 2);
        let ks: BTreeSet<u64> = sp4.iter().map(|c| c.0).collect();
        let ok = sl2 == vec![(0, 1, 1), (2, 1, 1)]
            && ks.is_subset(&BTreeSet::from([0, 2, 4]))
            && sp4.iter().all(|c| c.2 == 1);
        results.push((11, ok, format!("Sp(4,3) k = {ks:?}")));
    }

    // 12. CZ + D invertibility and degenerate witnesses at (3,1).
    {
        let r = find(&verify, "siegel-criterion", 3, 1);
        let d = &r["data"];
        let ok = passed(r)
            && d["mode"] == "exhaustive"
            && d["cases"] == 144
            && d["cz_plus_d_failures"] == 0
            && d["spf_witnesses"].as_array().is_some_and(|w| !w.is_empty() && w.iter().all(|x| x["valid"] == true));
        results.push((12, ok, format!("{} cases", d["cases"])));
    }

    // 13. Conjugate intersection dimensions.
    {
        let ok = [(3, 1), (5, 1), (3, 2)]
            .iter()
            .all(|&(q, n)| passed(find(&verify, "lemma4", q, n)));
        results.push((13, ok, String::new()));
    }

    // 14. Image size.
    {
        let img = |q, n| {
            let d = &find(&census, "census", q, n)["data"];
            (d["image_size"].as_u64(), d["total"].as_u64())
        };
        let ok = img(3, 1) == (Some(9), Some(10)) && img(3, 2) == (Some(729), Some(820));
        results.push((14, ok, String::new()));
    }

    // 15. Determinism and total time.
    {
        let again = fsiegel(&["verify", "--jobs", "1"]);
        let same = verify.report != Value::Null
            && serde_json::to_string(&strip_timing(verify.report.clone())).unwrap()
                == serde_json::to_string(&strip_timing(again.report.clone())).unwrap();
        let ok = same && verify.seconds < 300.0 && again.exit == verify.exit;
        results.push((15, ok, format!("{:.1} s, {:.1} s", verify.seconds, again.seconds)));
    }

    let mut unexpected = 0;
    for (id, ok, note) in &results {
        let known = KNOWN_FAILURES.contains(id);
        let tag = match (ok, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (expected FAIL)",
        };
        if ok == &known {
            unexpected += 1;
        }
        println!("criterion {id:>2}: {tag} {note}");
    }
    println!(
        "acceptance: {} pass, {} fail ({} known)",
        results.iter().filter(|r| r.1).count(),
        results.iter().filter(|r| !r.1).count(),
        results.iter().filter(|r| !r.1 && KNOWN_FAILURES.contains(&r.0)).count()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
