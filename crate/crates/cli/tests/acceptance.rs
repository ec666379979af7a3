//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

#![allow(clippy::needless_range_loop)]

use std::process::Command;
use std::time::{Duration, Instant};

use lattk_core::catalog::{
    exp_b, k3_lattice, parity_triple, realize_bfield, BFieldParams, ConcreteBField, MukaiVector,
    K3_RANK, MUKAI_RANK,
};
use lattk_core::forms::{form_isomorphism, verify_isomorphism_exhaustively};
use lattk_core::lattice::{orthogonal_complement, overlattices_of_index, Embedding, Lattice};
use lattk_core::linalg::{determinant, int, rank, rat, snf, IntMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const TIME_LIMIT: Duration = Duration::from_secs(120);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    Outcome {
        ok: failures.is_empty(),
        detail: if failures.is_empty() {
            summary
        } else {
            failures.join("; ")
        },
    }
}

fn run_verify() -> (i32, Duration, Vec<u8>) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_lattk"))
        .args(["verify", "--all", "--seed", "0", "--samples", "100", "--format", "json"])
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), start.elapsed(), out.stdout)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .and_then(|cs| cs.iter().find(|c| c["name"] == name))
        .unwrap_or(&Value::Null)
}

/// Some reading holds on every evaluated B-field.
fn reading_holds_everywhere(c: &Value) -> bool {
    let sweep = &c["witness"]["sweep"];
    match sweep["reading_counts"].as_object() {
        Some(counts) => counts.values().any(|v| *v == sweep["evaluations"]),
        None => c["witness"]["readings"]
            .as_object()
            .is_some_and(|r| r.values().any(|v| *v == Value::Bool(true))),
    }
}

fn criterion_1(code: i32, elapsed: Duration, report: &Value) -> Outcome {
    let mut failures = Vec::new();
    if code != 0 {
        failures.push(format!("exit code {code}"));
    }
    if elapsed >= TIME_LIMIT {
        failures.push(format!("took {elapsed:?}"));
    }
    for name in [
        "pic-disc",
        "twisted-alg-16",
        "disc-group-z4z4",
        "disc-form-matrix",
        "overlattice-unique-4",
        "overlattice-three-2",
        "beta-product",
        "diagram-intersection",
        "restriction-classes",
        "fano-kernel-chain",
        "alpha-nontrivial",
        "complement-duality",
    ] {
        let status = &check(report, name)["status"];
        if status != "pass" {
            failures.push(format!("{name} is {status}"));
        }
    }
    for name in ["twisted-alg-16", "complement-duality", "disc-group-z4z4"] {
        let passed = &check(report, name)["witness"]["sweep"]["counts"]["pass"];
        if passed != 100 {
            failures.push(format!("{name} passed {passed} of 100 samples"));
        }
    }
    for name in ["appB-solve-w", "appB-fano-pic", "appB-corollary-isometry"] {
        let c = check(report, name);
        let status = c["status"].as_str().unwrap_or("missing");
        if !matches!(status, "pass" | "ambiguous") || !reading_holds_everywhere(c) {
            failures.push(format!("{name} is {status} without an always-holding reading"));
        }
    }
    let iso = &check(report, "appB-corollary-isometry")["witness"]["default"]["per_reading"];
    if iso.as_object().map_or(0, |m| m.len()) < 2 {
        failures.push("appB-corollary-isometry records fewer than two readings".into());
    }
    outcome(
        failures,
        format!("verify --all exits {code} in {:.1}s", elapsed.as_secs_f64()),
    )
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMat {
    let data = (0..rows * cols).map(|_| int(rng.gen_range(-bound..=bound))).collect();
    IntMat::from_vec(rows, cols, data).unwrap()
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, bound: i64, even: bool) -> IntMat {
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let v = rng.gen_range(-bound..=bound);
            rows[i][j] = v;
            rows[j][i] = v;
        }
        if even {
            rows[i][i] *= 2;
        }
    }
    IntMat::from_rows(&rows).unwrap()
}

fn snf_contract_holds(a: &IntMat) -> bool {
    let s = snf(a);
    let unimodular = |m: &IntMat| determinant(m).is_ok_and(|d| d.abs() == int(1));
    if !unimodular(&s.u) || !unimodular(&s.v) || &(&s.u * a) * &s.v != s.d {
        return false;
    }
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j && !s.d.get(i, j).is_zero() {
                return false;
            }
        }
    }
    let diag = s.diagonal();
    diag.iter().all(|x| !x.is_negative())
        && diag.windows(2).all(|w| {
            w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0]))
        })
}

fn complement_duality_holds(e: &Embedding) -> bool {
    let l = e.sublattice();
    let Ok(perp) = orthogonal_complement(e) else {
        return false;
    };
    let q_l = l.discriminant_group().unwrap().form().negate();
    let q_perp = perp.sublattice().discriminant_group().unwrap().form().clone();
    match form_isomorphism(&q_perp, &q_l) {
        Ok(Some(iso)) => verify_isomorphism_exhaustively(&q_perp, &q_l, &iso, 10_000).unwrap(),
        _ => false,
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut failures = Vec::new();

    let mut bad = 0;
    for _ in 0..1000 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        if !snf_contract_holds(&random_matrix(&mut rng, r, c, 6)) {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("SNF contract fails on {bad}/1000"));
    }

    let (mut done, mut bad) = (0, 0);
    while done < 200 {
        let n = rng.gen_range(1..=6);
        let l = Lattice::new(random_symmetric(&mut rng, n, 4, false)).unwrap();
        if !l.is_nondegenerate() {
            continue;
        }
        done += 1;
        if l.discriminant_group().unwrap().form().group_order() != l.determinant().abs() {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("|A_L| != |det| on {bad}/200"));
    }

    let (mut done, mut bad) = (0, 0);
    while done < 100 {
        let count = rng.gen_range(1..=3);
        let rows: Vec<Vec<BigInt>> = (0..count)
            .map(|_| {
                (0..K3_RANK)
                    .map(|_| int(if rng.gen_range(0..5) == 0 { rng.gen_range(-2..=2) } else { 0 }))
                    .collect()
            })
            .collect();
        let basis = IntMat::from_rows(&rows).unwrap();
        if rank(&basis) != count {
            continue;
        }
        let e = Embedding::new(k3_lattice(), basis).unwrap().saturation();
        let l = e.sublattice();
        if !l.is_nondegenerate() || l.determinant().abs() > int(400) {
            continue;
        }
        done += 1;
        if !complement_duality_holds(&e) {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("q_perp != -q_L on {bad}/100 embeddings"));
    }

    let mut cases = 0;
    let fixed = [
        vec![vec![0, 2, 0, 0], vec![2, 0, 0, 0], vec![0, 0, 0, 2], vec![0, 0, 2, 0]],
        vec![vec![4, 0, 0], vec![0, 4, 0], vec![0, 0, 4]],
        vec![vec![-4, 2], vec![2, 8]],
    ];
    let field = realize_bfield(&BFieldParams::default_params()).unwrap();
    let models = lattk_core::catalog::transcendental_models(&field).unwrap();
    let mut lattices: Vec<Lattice> =
        fixed.iter().map(|g| Lattice::from_rows(g).unwrap()).collect();
    lattices.push(models.t_x.sublattice());
    lattices.push(models.t_s.sublattice());
    for l in &lattices {
        for n in [2u64, 4] {
            for ov in overlattices_of_index(l, n).unwrap() {
                cases += 1;
                if ov.lattice.determinant() != l.determinant() / int((n * n) as i64) {
                    failures.push(format!("overlattice of index {n} breaks disc/n^2"));
                }
            }
        }
    }

    let mut bad = 0;
    for _ in 0..100 {
        let b: Vec<_> = (0..K3_RANK).map(|_| rat(rng.gen_range(-5..=5), 2)).collect();
        let b = ConcreteBField::new(b).unwrap();
        let mut vector = || {
            let v: Vec<BigInt> = (0..MUKAI_RANK).map(|_| int(rng.gen_range(-6..=6))).collect();
            MukaiVector::from_int_coords(&v)
        };
        let (x, y) = (vector(), vector());
        if exp_b(&b, &x).pairing(&exp_b(&b, &y)) != x.pairing(&y) {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("exp_b changes the pairing on {bad}/100"));
    }

    let mut bad = 0;
    let odd = |rng: &mut ChaCha8Rng| 2 * rng.gen_range(-5i64..=4) + 1;
    for _ in 0..100 {
        let params = BFieldParams::from_numerators(odd(&mut rng), odd(&mut rng), odd(&mut rng)).unwrap();
        let b = realize_bfield(&params).unwrap();
        let u: Vec<BigInt> = (0..K3_RANK).map(|_| int(rng.gen_range(-3..=3))).collect();
        let moved = b.relift(&u, rng.gen_range(-4..=4), rng.gen_range(-4..=4));
        if parity_triple(&moved) != parity_triple(&b) {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("parity changes on {bad}/100 relifts"));
    }

    outcome(
        failures,
        format!("SNF 1000, |A_L| 200, complements 100, overlattices {cases}, exp_b 100, parity 100"),
    )
}

fn criterion_3(report: &Value) -> Outcome {
    let c = check(report, "complement-duality");
    let passed = c["witness"]["sweep"]["counts"]["pass"].as_u64().unwrap_or(0);
    let failed = c["witness"]["sweep"]["failed_samples"]
        .as_array()
        .map_or(usize::MAX, Vec::len);
    let ok = passed == 100 && failed == 0 && c["status"] == "pass";
    Outcome {
        ok,
        detail: format!("kernel model vs Mukai complement: {passed}/100"),
    }
}

fn criterion_4(first: &[u8], second: &[u8]) -> Outcome {
    Outcome {
        ok: first == second && !first.is_empty(),
        detail: format!("two runs, {} bytes each, identical: {}", first.len(), first == second),
    }
}

fn main() {
    let (code, elapsed, first) = run_verify();
    let report: Value = serde_json::from_slice(&first).unwrap_or(Value::Null);
    let (_, _, second) = run_verify();

    let results = [
        ("1 verify suite", criterion_1(code, elapsed, &report)),
        ("2 property suites", criterion_2()),
        ("3 cross-validation", criterion_3(&report)),
        ("4 determinism", criterion_4(&first, &second)),
    ];
    let mut all = true;
    for (label, o) in &results {
        all &= o.ok;
        println!("criterion {label}: {} ({})", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
