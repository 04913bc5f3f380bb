use std::process::{Command, Output};

use serde_json::Value;

fn fsiegel(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fsiegel"));
    cmd.args(args).env_remove("FSIEGEL_CAP_GROUP").env_remove("FSIEGEL_CAP_POINTS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("fsiegel runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn census_q3_n1() {
    let out = fsiegel(&["census", "--q", "3", "--n", "1"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema_version"], "fsiegel-report/1");
    let d = &r["records"][0]["data"];
    assert_eq!(d["total"], 10);
    let counts: Vec<(u64, u64)> = d["strata"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["h_count"].as_u64().unwrap(), s["o_count"].as_u64().unwrap()))
        .collect();
    assert_eq!(counts, vec![(4, 4), (6, 6)]);
    assert_eq!(r["records"][0]["params"]["eps"], 2);
}

#[test]
fn invalid_q_is_usage_error() {
    assert_eq!(fsiegel(&["census", "--q", "4", "--n", "1"], &[]).status.code(), Some(2));
    assert_eq!(fsiegel(&["census", "--q", "3", "--n", "0"], &[]).status.code(), Some(2));
    assert_eq!(fsiegel(&["verify", "nonsense", "--q", "3", "--n", "1"], &[]).status.code(), Some(2));
    assert_eq!(fsiegel(&["census", "--format", "xml"], &[]).status.code(), Some(2));
}

#[test]
fn cap_override_skips_every_cell() {
    let out = fsiegel(&["verify", "involutions", "--q", "3", "--n", "1"], &[("FSIEGEL_CAP_GROUP", "5")]);
    assert_eq!(out.status.code(), Some(3));
    let r = json(&out);
    assert_eq!(r["records"][0]["status"], "skipped-resource");
    assert_eq!(r["config"]["cap_group"], 5);
}

#[test]
fn siegel_criterion_exhaustive() {
    let out = fsiegel(&["verify", "--checks", "siegel-criterion", "--q", "3", "--n", "1"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["records"][0]["data"]["cases"], 144);
}

#[test]
fn cayley_square_branch_is_not_normalized() {
    let out = fsiegel(&["verify", "cayley", "--q", "5", "--n", "1"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["records"][0]["data"]["normalized"], false);
    assert!(r["records"][0]["params"].get("v").is_some());
}

#[test]
fn theorem1_q3_n1_passes() {
    let out = fsiegel(&["verify", "--checks", "theorem1", "--q", "3,5", "--n", "1"], &[]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn witnesses() {
    let r = json(&fsiegel(&["witness", "--q", "3", "--n", "3"], &[]));
    let ws = r["records"][0]["data"]["witnesses"].as_array().unwrap();
    let odd = ws.iter().find(|w| w["name"] == "odd-n O_0").unwrap();
    assert_eq!(odd["status"], "verified");

    let out = fsiegel(&["witness", "--q", "5", "--n", "2"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let ws = r["records"][0]["data"]["witnesses"].as_array().unwrap();
    let odd = ws.iter().find(|w| w["name"] == "odd-n O_0").unwrap();
    assert_eq!(odd["status"], "unavailable");
    assert!(ws.iter().filter(|w| w["name"] != "odd-n O_0").all(|w| w["status"] == "verified"));
}

#[test]
fn group_closure() {
    let r = json(&fsiegel(&["group", "--group", "sp0", "--enumerate", "--q", "3", "--n", "1"], &[]));
    assert_eq!(r["records"][0]["data"]["order"], 24);
    assert_eq!(r["records"][0]["data"]["closure_size"], 24);
    let out = fsiegel(&["group", "--group", "spf", "--enumerate", "--cap", "10", "--q", "3", "--n", "2"], &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn orbits_report() {
    let r = json(&fsiegel(&["orbits", "--group", "sp0", "--q", "3", "--n", "1"], &[]));
    let mut sizes: Vec<u64> = r["records"][0]["data"]["orbits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["size"].as_u64().unwrap())
        .collect();
    sizes.sort();
    assert_eq!(sizes, vec![4, 6]);
}

#[test]
fn csv_and_markdown() {
    let csv = fsiegel(&["census", "--q", "3", "--n", "1", "--format", "csv"], &[]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("check,q,n,status,wall_ms,data\n"));
    let md = fsiegel(&["census", "--q", "3", "--n", "1", "--format", "md"], &[]);
    let text = String::from_utf8(md.stdout).unwrap();
    assert!(text.contains("| 1 | 6 | 6 | 6 | 5 |"));
}

#[test]
fn out_file() {
    let path = std::env::temp_dir().join(format!("fsiegel-{}.json", std::process::id()));
    let out = fsiegel(&["census", "--q", "3", "--n", "1", "--out", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["command"], "census");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn parallel_width_does_not_change_results() {
    let strip = |out: Output| {
        let mut r = json(&out);
        r["config"]["jobs"] = Value::Null;
        for rec in r["records"].as_array_mut().unwrap() {
            rec["wall_ms"] = Value::from(0);
        }
        r
    };
    let args = |jobs: &'static str| vec!["verify", "theorem1", "lemma4", "--q", "3,5", "--n", "1,2", "--jobs", jobs];
    assert_eq!(strip(fsiegel(&args("1"), &[])), strip(fsiegel(&args("4"), &[])));
}
