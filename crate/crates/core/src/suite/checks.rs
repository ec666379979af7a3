use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::{json, Value};

use super::fano_map::{
    self as ab, alg_pairing, composed_outcome, fano_images, is_integral, k4_normalized,
    moduli_vector, solve_reading, Constraints, HPrimeReading, KsReading,
};
use super::json as js;
use super::{CheckResult, Status, SweepConfig, STREAM_RELIFTS};
use crate::catalog::{
    f_vector, fiber_embedding, h_vector, k3_lattice, parity_triple, picard_embedding,
    realize_bfield, s_vector, transcendental_models, twisted_algebraic_lattice, twisted_gram,
    BFieldParams, ConcreteBField, MukaiVector, TranscendentalModels, K3_RANK,
};
use crate::forms::{self, element_sum, form_isomorphism, FiniteQuadraticForm, TorsionElement};
use crate::lattice::{
    orthogonal_complement, overlattices_of_index, sublattice_intersection,
    kernel_sublattice, DiscriminantGroup, Embedding, Lattice, Overlattice, RationalFunctional,
};
use crate::linalg::{determinant, int, rat, IntMat};

pub(super) struct Entry {
    pub name: &'static str,
    pub anchor: &'static str,
    run: fn(&SweepConfig) -> Outcome,
}

pub(super) const REGISTRY: &[Entry] = &[
    Entry { name: "pic-disc", anchor: "is of discriminant −4", run: pic_disc },
    Entry { name: "fiber-isotropic", anchor: "The class of a fiber is f = h − s", run: fiber_isotropic },
    Entry { name: "residue-invariance", anchor: "do not change when we replace", run: residue_invariance },
    Entry { name: "twisted-alg-16", anchor: "both have discriminant 16", run: twisted_alg_16 },
    Entry { name: "disc-group-z4z4", anchor: "Z/4Z ⊕ Z/4Z", run: disc_group_z4z4 },
    Entry { name: "disc-form-matrix", anchor: "(1/2, 3/4; 3/4, 1/2)", run: disc_form_matrix },
    Entry {
        name: "complement-duality",
        anchor: "(A_{T(X)}, q) ≅ (A_{T(S_{P_1}, B)}, −q)",
        run: complement_duality,
    },
    Entry { name: "fano-kernel-chain", anchor: "4 disc T(S_{P_1}) = 16", run: fano_kernel_chain },
    Entry { name: "alpha-nontrivial", anchor: "is nontrivial", run: alpha_nontrivial },
    Entry {
        name: "overlattice-unique-4",
        anchor: "unique overlattice T(X) ⊂ T′ of index four",
        run: overlattice_unique_4,
    },
    Entry {
        name: "overlattice-three-2",
        anchor: "Hodge isometric embedding of index two",
        run: overlattice_three_2,
    },
    Entry { name: "beta-product", anchor: "β_1 · β_2 = β_3", run: beta_product },
    Entry {
        name: "diagram-intersection",
        anchor: "f_1^* T(S_{P_1}) ∩ f_2^* T(S_{P_2})",
        run: diagram_intersection,
    },
    Entry { name: "restriction-classes", anchor: "r_1(β_2) = α_{P_1}", run: restriction_classes },
    Entry { name: "appB-solve-w", anchor: "k_4 := (6−(h′)²)/8", run: solve_w_check },
    Entry {
        name: "appB-fano-pic",
        anchor: "[F_{P_2}] ↦ −s + (1−k_s)/2 e_4",
        run: fano_pic,
    },
    Entry {
        name: "appB-corollary-isometry",
        anchor: "the Hodge isometry induced by composing Kuznetsov's equivalences",
        run: composed_isometry,
    },
    Entry {
        name: "appB-moduli-vector",
        anchor: "moduli space of α_{P_2}-twisted sheaves",
        run: moduli_vector_check,
    },
    Entry { name: "half-pairing-rescale", anchor: "1/2(.)", run: half_pairing_rescale },
];

pub(super) const SWEEP_CHECKS: &[&str] = &[
    "twisted-alg-16",
    "disc-group-z4z4",
    "complement-duality",
    "appB-solve-w",
    "appB-corollary-isometry",
];

pub(super) fn run_entry(entry: &Entry, config: &SweepConfig) -> CheckResult {
    let out = (entry.run)(config);
    CheckResult {
        name: entry.name.to_string(),
        status: out.status,
        anchor: entry.anchor.to_string(),
        witness: out.witness,
        notes: out.notes,
    }
}

struct Outcome {
    status: Status,
    witness: Value,
    notes: Vec<String>,
}

/// Named boolean assertions.
#[derive(Default)]
struct Asserts {
    items: BTreeMap<String, bool>,
}

impl Asserts {
    fn check(&mut self, label: &str, ok: bool) -> bool {
        self.items.insert(label.to_string(), ok);
        ok
    }

    fn all(&self) -> bool {
        self.items.values().all(|&v| v)
    }

    fn status(&self) -> Status {
        if self.all() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn to_json(&self) -> Value {
        json!(self.items)
    }
}

/// Outcome per reading: pass if every reading holds, ambiguous if some do.
fn readings_status(readings: &BTreeMap<String, bool>) -> Status {
    let holding = readings.values().filter(|&&v| v).count();
    if readings.is_empty() || holding == readings.len() {
        Status::Pass
    } else if holding > 0 {
        Status::Ambiguous
    } else {
        Status::Fail
    }
}

fn outcome(a: &Asserts, mut witness: Value, notes: Vec<String>) -> Outcome {
    witness["assertions"] = a.to_json();
    Outcome {
        status: a.status(),
        witness,
        notes,
    }
}

fn error_outcome(msg: String) -> Outcome {
    Outcome {
        status: Status::Fail,
        witness: json!({ "error": msg }),
        notes: vec![],
    }
}

fn params_json(p: &BFieldParams) -> Value {
    json!({"bsq": js::rat(&p.bsq), "bh": js::rat(&p.bh), "bs": js::rat(&p.bs)})
}

fn params_label(p: &BFieldParams) -> String {
    format!("({}, {}, {})", p.bsq, p.bh, p.bs)
}

struct SampleVerdict {
    status: Status,
    readings: BTreeMap<String, bool>,
    witness: Value,
}

impl SampleVerdict {
    fn from_asserts(a: &Asserts, mut witness: Value) -> Self {
        witness["assertions"] = a.to_json();
        SampleVerdict {
            status: a.status(),
            readings: BTreeMap::new(),
            witness,
        }
    }

    fn from_readings(a: &Asserts, readings: BTreeMap<String, bool>, mut witness: Value) -> Self {
        witness["assertions"] = a.to_json();
        witness["readings"] = json!(readings);
        let status = if a.all() {
            readings_status(&readings)
        } else {
            Status::Fail
        };
        SampleVerdict {
            status,
            readings,
            witness,
        }
    }

    fn error(msg: String) -> Self {
        SampleVerdict {
            status: Status::Fail,
            readings: BTreeMap::new(),
            witness: json!({ "error": msg }),
        }
    }
}

/// Evaluates `f` on the default triple and on every sampled pair.
fn sweep<F>(config: &SweepConfig, notes: Vec<String>, f: F) -> Outcome
where
    F: Fn(&BFieldParams, &BFieldParams) -> SampleVerdict + Sync,
{
    if config.samples == 0 {
        return Outcome {
            status: Status::Skipped,
            witness: json!({"reason": "zero samples"}),
            notes,
        };
    }
    let default = BFieldParams::default_params();
    let pairs = config.sample_pairs();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let chunk = pairs.len().div_ceil(threads).max(1);
    let verdicts: Vec<SampleVerdict> = std::thread::scope(|scope| {
        let handles: Vec<_> = pairs
            .chunks(chunk)
            .map(|c| {
                let f = &f;
                scope.spawn(move || c.iter().map(|(p, q)| f(p, q)).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sample thread panicked"))
            .collect()
    });
    let base = f(&default, &default);

    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut failed = Vec::new();
    for ((p, _), v) in pairs.iter().zip(&verdicts) {
        *counts.entry(v.status.as_str().to_string()).or_default() += 1;
        if v.status == Status::Fail {
            failed.push(params_label(p));
        }
    }
    let total = verdicts.len() + 1;
    let mut reading_counts: BTreeMap<String, usize> = BTreeMap::new();
    for v in std::iter::once(&base).chain(&verdicts) {
        for (r, &ok) in &v.readings {
            *reading_counts.entry(r.clone()).or_default() += usize::from(ok);
        }
    }
    let any_fail = base.status == Status::Fail || !failed.is_empty();
    let status = if any_fail {
        Status::Fail
    } else if reading_counts.is_empty() {
        Status::Pass
    } else {
        let everywhere = reading_counts.values().filter(|&&c| c == total).count();
        if everywhere == 0 {
            Status::Fail
        } else if everywhere == reading_counts.len() {
            Status::Pass
        } else {
            Status::Ambiguous
        }
    };
    let first_failure = verdicts
        .iter()
        .zip(&pairs)
        .find(|(v, _)| v.status == Status::Fail)
        .map(|(v, (p, q))| json!({"params": params_json(p), "other": params_json(q), "witness": v.witness}));
    Outcome {
        status,
        witness: json!({
            "default": base.witness,
            "sweep": {
                "counts": counts,
                "failed_samples": failed,
                "reading_counts": reading_counts,
                "evaluations": total,
                "first_failure": first_failure,
            },
        }),
        notes,
    }
}

fn mat(rows: &[&[i64]]) -> IntMat {
    IntMat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("rectangular")
}

// ---------------------------------------------------------------- models

struct AlgModel {
    b: ConcreteBField,
    alg: Embedding,
    lattice: Lattice,
    disc: DiscriminantGroup,
}

fn alg_model(p: &BFieldParams) -> Result<AlgModel, String> {
    let b = realize_bfield(p).map_err(|e| e.to_string())?;
    let alg = twisted_algebraic_lattice(&b).map_err(|e| e.to_string())?;
    let lattice = alg.sublattice();
    let disc = lattice.discriminant_group().map_err(|e| e.to_string())?;
    Ok(AlgModel {
        b,
        alg,
        lattice,
        disc,
    })
}

fn t_x_form(tm: &TranscendentalModels) -> Result<FiniteQuadraticForm, String> {
    Ok(tm
        .t_x
        .sublattice()
        .discriminant_group()
        .map_err(|e| e.to_string())?
        .form()
        .clone())
}

/// Overlattices of the default `ker α` model.
struct OverlatticeModel {
    tm: TranscendentalModels,
    tx: Lattice,
    ov4: Vec<Overlattice>,
    ov2: Vec<Overlattice>,
}

impl OverlatticeModel {
    fn build() -> Result<Self, String> {
        let b = realize_bfield(&BFieldParams::default_params()).map_err(|e| e.to_string())?;
        let tm = transcendental_models(&b).map_err(|e| e.to_string())?;
        let tx = tm.t_x.sublattice();
        let ov4 = overlattices_of_index(&tx, 4).map_err(|e| e.to_string())?;
        let ov2 = overlattices_of_index(&tx, 2).map_err(|e| e.to_string())?;
        Ok(OverlatticeModel { tm, tx, ov4, ov2 })
    }

    /// Rows of the `i`-th index-2 overlattice in `T(S)` coordinates, when it
    /// is exactly `T(S)`.
    fn as_t_s(&self, i: usize) -> Option<IntMat> {
        let kx = self.tm.t_x.basis().to_rat();
        let m = (&self.ov2[i].basis * &kx).to_int()?;
        determinant(&m).ok()?.abs().is_one().then_some(m)
    }

    fn ov2_in_ov4(&self) -> Result<Vec<Embedding>, String> {
        let top = self.ov4.first().ok_or("no index-4 overlattice")?;
        self.ov2
            .iter()
            .map(|o| o.inside(top).map_err(|e| e.to_string()))
            .collect()
    }

    /// `β_i` on the index-4 overlattice: kernel exactly the `i`-th index-2
    /// overlattice.
    fn betas(&self) -> Result<Vec<RationalFunctional>, String> {
        self.ov2_in_ov4()?
            .iter()
            .map(|e| RationalFunctional::vanishing_exactly_on(e).map_err(|e| e.to_string()))
            .collect()
    }
}

fn with_model(f: impl FnOnce(&OverlatticeModel) -> Outcome) -> Outcome {
    match OverlatticeModel::build() {
        Ok(m) => f(&m),
        Err(e) => error_outcome(e),
    }
}

// ---------------------------------------------------------------- checks

fn pic_disc(_: &SweepConfig) -> Outcome {
    let pic = picard_embedding();
    let l = pic.sublattice();
    let mut a = Asserts::default();
    a.check("gram = diag(2, -2)", l.gram() == &mat(&[&[2, 0], &[0, -2]]));
    a.check("det = -4", l.determinant() == int(-4));
    a.check("primitive in K3", pic.is_primitive());
    let disc = l.discriminant_group();
    let form_json = match &disc {
        Ok(d) => {
            a.check("group Z/2 + Z/2", d.form().orders() == [2, 2]);
            js::form(d.form())
        }
        Err(e) => {
            a.check("group Z/2 + Z/2", false);
            json!(e.to_string())
        }
    };
    outcome(
        &a,
        json!({"gram": js::int_mat(l.gram()), "det": js::int(&l.determinant()), "disc_form": form_json}),
        vec!["h = U1.e + U1.f, s = E8a.r3".into()],
    )
}

fn fiber_isotropic(_: &SweepConfig) -> Outcome {
    let k3 = k3_lattice();
    let (h, s, f) = (h_vector(), s_vector(), f_vector());
    let diff: Vec<BigInt> = h.iter().zip(&s).map(|(x, y)| x - y).collect();
    let fib = fiber_embedding();
    let mut a = Asserts::default();
    a.check("f = h - s", f == diff);
    a.check("f^2 = 0", k3.pairing(&f, &f).is_zero());
    a.check("f.h = 2", k3.pairing(&f, &h) == int(2));
    a.check("f primitive", fib.is_primitive());
    a.check("<f> degenerate", !fib.sublattice().is_nondegenerate());
    outcome(
        &a,
        json!({"f": js::ints(&f), "f_squared": js::int(&k3.pairing(&f, &f))}),
        vec![],
    )
}

fn residue_invariance(config: &SweepConfig) -> Outcome {
    if config.samples == 0 {
        return Outcome {
            status: Status::Skipped,
            witness: json!({"reason": "zero samples"}),
            notes: vec![],
        };
    }
    let mut rng = config.rng(STREAM_RELIFTS);
    let triples = config.sample_triples();
    let mut preserved = 0usize;
    let mut violations = Vec::new();
    for p in &triples {
        let b = match realize_bfield(p) {
            Ok(b) => b,
            Err(e) => return error_outcome(e.to_string()),
        };
        let u: Vec<BigInt> = (0..K3_RANK).map(|_| int(rng.gen_range(-3..=3))).collect();
        let k = rng.gen_range(-5..=5);
        let l = rng.gen_range(-5..=5);
        let before = parity_triple(&b);
        let after = parity_triple(&b.relift(&u, k, l));
        if before == Some([1, 1, 1]) && after == before {
            preserved += 1;
        } else {
            violations.push(json!({"params": params_json(p), "k": k, "l": l, "u": js::ints(&u)}));
        }
    }
    let mut a = Asserts::default();
    a.check("parities of 2B^2, 2B.h, 2B.s unchanged", violations.is_empty());
    outcome(
        &a,
        json!({"relifts": triples.len(), "preserved": preserved, "violations": violations}),
        vec!["B' = B + u + (k h + l s)/2 with u integral".into()],
    )
}

fn twisted_alg_16(config: &SweepConfig) -> Outcome {
    sweep(config, vec![], |p, _| {
        let m = match alg_model(p) {
            Ok(m) => m,
            Err(e) => return SampleVerdict::error(e),
        };
        let mut a = Asserts::default();
        let det = m.lattice.determinant();
        a.check("rank 4", m.lattice.rank() == 4);
        a.check("|disc| = 16", det.abs() == int(16));
        a.check(
            "gram matches (2e0+2B, h, s, e4) formula",
            twisted_gram(p).as_ref() == Some(m.lattice.gram()),
        );
        for (label, v) in [
            ("contains (0,h,0)", MukaiVector::from_k3(&h_vector())),
            ("contains (0,s,0)", MukaiVector::from_k3(&s_vector())),
            ("contains e4", MukaiVector::e4()),
        ] {
            let coords = v.int_coords().expect("integral");
            a.check(label, matches!(m.alg.coordinates_of(&coords), Ok(Some(_))));
        }
        SampleVerdict::from_asserts(
            &a,
            json!({"params": params_json(p), "gram": js::int_mat(m.lattice.gram()), "det": js::int(&det)}),
        )
    })
}

fn disc_group_z4z4(config: &SweepConfig) -> Outcome {
    sweep(config, vec![], |p, _| {
        let m = match alg_model(p) {
            Ok(m) => m,
            Err(e) => return SampleVerdict::error(e),
        };
        let tx = match transcendental_models(&m.b).map_err(|e| e.to_string()).and_then(|tm| t_x_form(&tm)) {
            Ok(f) => f,
            Err(e) => return SampleVerdict::error(e),
        };
        let mut a = Asserts::default();
        a.check("algebraic lattice: Z/4 + Z/4", m.disc.form().orders() == [4, 4]);
        a.check("ker alpha model: Z/4 + Z/4", tx.orders() == [4, 4]);
        SampleVerdict::from_asserts(
            &a,
            json!({"params": params_json(p), "algebraic": js::form(m.disc.form()), "ker_alpha": js::form(&tx)}),
        )
    })
}

#[derive(Clone, Copy)]
enum Diagonal {
    Quadratic,
    Bilinear,
}

/// Generators `x, y` of a `(Z/4)²` form with `b(x, y) = 3/4` and diagonal
/// value `1/2` under the chosen reading.
fn find_matrix_generators(
    f: &FiniteQuadraticForm,
    d: Diagonal,
) -> Option<(TorsionElement, TorsionElement)> {
    let els = f.elements(forms::DEFAULT_ENUMERATION_BOUND).ok()?;
    let half = rat(1, 2);
    let diag = |x: &TorsionElement| match d {
        Diagonal::Quadratic => f.q(x).ok(),
        Diagonal::Bilinear => f.b(x, x).ok(),
    };
    let order4: Vec<&TorsionElement> = els
        .iter()
        .filter(|x| x.order() == 4 && diag(x).as_ref() == Some(&half))
        .collect();
    for x in &order4 {
        for y in &order4 {
            if f.b(x, y).ok() != Some(rat(3, 4)) {
                continue;
            }
            let mut span = BTreeSet::new();
            for i in 0..4 {
                for j in 0..4 {
                    let v = element_sum(&x.scale(i), &y.scale(j)).ok()?;
                    span.insert(v);
                }
            }
            if span.len() == els.len() {
                return Some(((*x).clone(), (*y).clone()));
            }
        }
    }
    None
}

fn disc_form_matrix(_: &SweepConfig) -> Outcome {
    let p = BFieldParams::default_params();
    let m = match alg_model(&p) {
        Ok(m) => m,
        Err(e) => return error_outcome(e),
    };
    let tm = match transcendental_models(&m.b) {
        Ok(t) => t,
        Err(e) => return error_outcome(e.to_string()),
    };
    // T(X) with its own pairing is ker α with the sign reversed
    let own = match tm
        .t_x
        .sublattice()
        .rescale(&rat(-1, 1))
        .and_then(|l| l.discriminant_group())
    {
        Ok(d) => d.form().clone(),
        Err(e) => return error_outcome(e.to_string()),
    };
    let mut readings = BTreeMap::new();
    let mut found = serde_json::Map::new();
    let mut a = Asserts::default();
    for (label, d) in [
        ("q(x)=q(y)=1/2", Diagonal::Quadratic),
        ("b(x,x)=b(y,y)=1/2", Diagonal::Bilinear),
    ] {
        let pair = find_matrix_generators(&own, d);
        readings.insert(label.to_string(), pair.is_some());
        found.insert(
            label.to_string(),
            pair.map_or(Value::Null, |(x, y)| json!([js::element(&x), js::element(&y)])),
        );
        a.check(
            &format!("algebraic lattice form realizes {label}"),
            find_matrix_generators(m.disc.form(), d).is_some(),
        );
    }
    let status = if a.all() {
        readings_status(&readings)
    } else {
        Status::Fail
    };
    Outcome {
        status,
        witness: json!({
            "form": js::form(&own),
            "generators": found,
            "readings": readings,
            "assertions": a.to_json(),
        }),
        notes: vec!["form of T(X) with its own pairing, i.e. ker alpha rescaled by -1".into()],
    }
}

fn iso_json(f: &FiniteQuadraticForm, g: &FiniteQuadraticForm) -> (bool, Value) {
    match form_isomorphism(f, g) {
        Ok(Some(iso)) => {
            let ok = forms::verify_isomorphism_exhaustively(f, g, &iso, forms::DEFAULT_ENUMERATION_BOUND)
                .unwrap_or(false);
            (ok, json!(iso.images.iter().map(js::element).collect::<Vec<_>>()))
        }
        Ok(None) => (false, Value::Null),
        Err(e) => (false, json!(e.to_string())),
    }
}

fn complement_duality(config: &SweepConfig) -> Outcome {
    let notes = vec![
        "Mukai complement and ker alpha are compared with the negated algebraic form".into(),
    ];
    sweep(config, notes, |p, _| {
        let m = match alg_model(p) {
            Ok(m) => m,
            Err(e) => return SampleVerdict::error(e),
        };
        let comp = match orthogonal_complement(&m.alg) {
            Ok(c) => c,
            Err(e) => return SampleVerdict::error(e.to_string()),
        };
        let comp_lattice = comp.sublattice();
        let comp_form = match comp_lattice.discriminant_group() {
            Ok(d) => d.form().clone(),
            Err(e) => return SampleVerdict::error(e.to_string()),
        };
        let tx = match transcendental_models(&m.b).map_err(|e| e.to_string()).and_then(|tm| t_x_form(&tm)) {
            Ok(f) => f,
            Err(e) => return SampleVerdict::error(e),
        };
        let neg = m.disc.form().negate();
        let mut a = Asserts::default();
        a.check("complement rank 20", comp_lattice.rank() == 20);
        a.check("complement |disc| = 16", comp_lattice.determinant().abs() == int(16));
        let (c_ok, c_iso) = iso_json(&comp_form, &neg);
        a.check("complement form = -(algebraic form)", c_ok);
        let (t_ok, t_iso) = iso_json(&tx, &neg);
        a.check("ker alpha form = -(algebraic form)", t_ok);
        let (x_ok, _) = iso_json(&tx, &comp_form);
        a.check("ker alpha form = complement form", x_ok);
        SampleVerdict::from_asserts(
            &a,
            json!({
                "params": params_json(p),
                "complement_form": js::form(&comp_form),
                "negated_algebraic_form": js::form(&neg),
                "complement_isomorphism": c_iso,
                "ker_alpha_isomorphism": t_iso,
            }),
        )
    })
}

fn fano_kernel_chain(_: &SweepConfig) -> Outcome {
    let b = match realize_bfield(&BFieldParams::default_params()) {
        Ok(b) => b,
        Err(e) => return error_outcome(e.to_string()),
    };
    let tm = match transcendental_models(&b) {
        Ok(t) => t,
        Err(e) => return error_outcome(e.to_string()),
    };
    let ts = tm.t_s.sublattice();
    let tx = tm.t_x.sublattice();
    let mut a = Asserts::default();
    a.check("T(S) rank 20", ts.rank() == 20);
    a.check("|disc T(S)| = 4", ts.determinant().abs() == int(4));
    a.check("alpha order 2", tm.alpha.order() == &int(2));
    a.check("kernel index 2", tm.index == int(2));
    a.check("|disc ker alpha| = 16", tx.determinant().abs() == int(16));
    a.check(
        "|disc ker alpha| = index^2 |disc T(S)|",
        tx.determinant().abs() == &tm.index * &tm.index * ts.determinant().abs(),
    );
    a.check("kernel even", tx.is_even());
    outcome(
        &a,
        json!({
            "disc_t_s": js::int(&ts.determinant()),
            "disc_ker_alpha": js::int(&tx.determinant()),
            "index": js::int(&tm.index),
        }),
        vec![],
    )
}

fn alpha_nontrivial(_: &SweepConfig) -> Outcome {
    let b = match realize_bfield(&BFieldParams::default_params()) {
        Ok(b) => b,
        Err(e) => return error_outcome(e.to_string()),
    };
    let tm = match transcendental_models(&b) {
        Ok(t) => t,
        Err(e) => return error_outcome(e.to_string()),
    };
    let half = rat(1, 2);
    let odd: Vec<usize> = (0..tm.alpha.rank()).filter(|&i| tm.alpha.values()[i] == half).collect();
    let mut a = Asserts::default();
    a.check("alpha nonzero", !tm.alpha.is_zero());
    a.check("alpha order 2", tm.alpha.order() == &int(2));
    a.check(
        "alpha vanishes on its kernel",
        tm.alpha.pullback(tm.t_x.basis()).map(|r| r.is_zero()).unwrap_or(false),
    );
    outcome(
        &a,
        json!({"values": js::rats(tm.alpha.values()), "basis_vectors_with_value_1/2": odd}),
        vec!["alpha(t) = B.t mod 1 on T(S)".into()],
    )
}

fn overlattice_unique_4(_: &SweepConfig) -> Outcome {
    with_model(|m| {
        let mut a = Asserts::default();
        a.check("exactly one index-4 overlattice", m.ov4.len() == 1);
        let mut w = json!({"count": m.ov4.len()});
        if let Some(o) = m.ov4.first() {
            a.check("quotient Z/2 + Z/2", o.quotient == vec![int(2), int(2)]);
            a.check("even", o.lattice.is_even());
            a.check(
                "|disc| = |disc ker alpha| / 16",
                o.lattice.determinant().abs() * int(16) == m.tx.determinant().abs(),
            );
            w["quotient"] = js::ints(&o.quotient);
            w["det"] = js::int(&o.lattice.determinant());
            w["subgroup"] = json!(o.subgroup.elements.iter().map(js::element).collect::<Vec<_>>());
        }
        outcome(&a, w, vec![])
    })
}

fn overlattice_three_2(_: &SweepConfig) -> Outcome {
    with_model(|m| {
        let mut a = Asserts::default();
        a.check("exactly three index-2 overlattices", m.ov2.len() == 3);
        let inside = m.ov2_in_ov4();
        a.check("each inside the index-4 overlattice", inside.is_ok());
        for (i, o) in m.ov2.iter().enumerate() {
            a.check(&format!("overlattice {i}: quotient Z/2"), o.quotient == vec![int(2)]);
            a.check(&format!("overlattice {i}: |disc| = 4"), o.lattice.determinant().abs() == int(4));
            a.check(&format!("overlattice {i}: even"), o.lattice.is_even());
        }
        let t_s_positions: Vec<usize> = (0..m.ov2.len()).filter(|&i| m.as_t_s(i).is_some()).collect();
        a.check("T(S) is one of them", t_s_positions.len() == 1);
        outcome(
            &a,
            json!({
                "count": m.ov2.len(),
                "dets": m.ov2.iter().map(|o| js::int(&o.lattice.determinant())).collect::<Vec<_>>(),
                "t_s_position": t_s_positions,
            }),
            vec![],
        )
    })
}

fn functional_sum(x: &RationalFunctional, y: &RationalFunctional) -> RationalFunctional {
    RationalFunctional::new(x.values().iter().zip(y.values()).map(|(a, b)| a + b).collect())
}

fn beta_product(_: &SweepConfig) -> Outcome {
    with_model(|m| {
        let mut a = Asserts::default();
        if !a.check("three index-2 overlattices", m.ov2.len() == 3) || m.ov4.len() != 1 {
            return outcome(&a, json!({}), vec![]);
        }
        let xs: Vec<TorsionElement> = m.ov2.iter().map(|o| o.subgroup.generators[0].clone()).collect();
        let distinct: BTreeSet<&TorsionElement> = xs.iter().collect();
        a.check("classes distinct and nonzero", distinct.len() == 3 && xs.iter().all(|x| !x.is_zero()));
        a.check("classes have order 2", xs.iter().all(|x| x.order() == 2));
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            a.check(
                &format!("x{i} + x{j} = x{k}"),
                element_sum(&xs[i], &xs[j]).ok().as_ref() == Some(&xs[k]),
            );
        }
        let mut quartet: Vec<TorsionElement> = xs.clone();
        quartet.push(TorsionElement::zero(xs[0].orders()));
        quartet.sort();
        a.check("{0, x1, x2, x3} is the index-4 subgroup", quartet == m.ov4[0].subgroup.elements);
        match m.betas() {
            Ok(betas) => {
                a.check("each beta has order 2", betas.iter().all(|b| b.order() == &int(2)));
                for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                    a.check(
                        &format!("beta{i} + beta{j} = beta{k}"),
                        functional_sum(&betas[i], &betas[j]) == betas[k],
                    );
                }
            }
            Err(e) => {
                a.check(&format!("functionals: {e}"), false);
            }
        }
        outcome(
            &a,
            json!({"classes": xs.iter().map(js::element).collect::<Vec<_>>()}),
            vec!["classes are elements of the discriminant group of ker alpha".into()],
        )
    })
}

fn diagram_intersection(_: &SweepConfig) -> Outcome {
    with_model(|m| {
        let mut a = Asserts::default();
        let emb = match m.ov2_in_ov4() {
            Ok(e) if e.len() == 3 && m.ov4.len() == 1 => e,
            Ok(_) => return error_outcome("unexpected overlattice counts".into()),
            Err(e) => return error_outcome(e),
        };
        let base = &m.ov4[0].inclusion;
        for (i, e) in emb.iter().enumerate() {
            let meet = sublattice_intersection(e, base);
            a.check(
                &format!("ker alpha inside overlattice {i}"),
                meet.map(|x| x.same_span(base)).unwrap_or(false),
            );
        }
        let mut ranks = Vec::new();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let meet = sublattice_intersection(&emb[i], &emb[j]);
            if let Ok(x) = &meet {
                ranks.push(x.rank());
            }
            a.check(
                &format!("overlattice {i} meets overlattice {j} in ker alpha"),
                meet.map(|x| x.same_span(base)).unwrap_or(false),
            );
        }
        outcome(&a, json!({"intersection_ranks": ranks}), vec![])
    })
}

fn restriction_classes(_: &SweepConfig) -> Outcome {
    with_model(|m| {
        let mut a = Asserts::default();
        let (emb, betas) = match (m.ov2_in_ov4(), m.betas()) {
            (Ok(e), Ok(b)) if e.len() == 3 => (e, b),
            _ => return error_outcome("overlattice model incomplete".into()),
        };
        let mut orders = BTreeMap::new();
        for i in 0..3 {
            for j in 0..3 {
                let r = match crate::catalog::brauer_restrict(&betas[j], &emb[i]) {
                    Ok(r) => r,
                    Err(e) => return error_outcome(e.to_string()),
                };
                orders.insert(format!("r{i}(beta{j})"), js::int(r.order()));
                if i == j {
                    a.check(&format!("r{i}(beta{i}) = 0"), r.is_zero());
                    continue;
                }
                let tx_in = &m.ov2[i].inclusion;
                let kernel_ok = kernel_sublattice(&m.ov2[i].lattice, &r)
                    .map(|(k, idx)| idx == int(2) && k.same_span(tx_in))
                    .unwrap_or(false);
                a.check(&format!("r{i}(beta{j}) has order 2 and kernel ker alpha"), r.order() == &int(2) && kernel_ok);
            }
        }
        let i0 = (0..3).find(|&i| m.as_t_s(i).is_some());
        if a.check("one overlattice is T(S)", i0.is_some()) {
            let i0 = i0.expect("checked");
            let coords = m.as_t_s(i0).expect("checked");
            let alpha_there = m.tm.alpha.pullback(&coords);
            for j in (0..3).filter(|&j| j != i0) {
                let r = crate::catalog::brauer_restrict(&betas[j], &emb[i0]);
                a.check(
                    &format!("restriction of beta{j} to T(S) equals alpha"),
                    matches!((&r, &alpha_there), (Ok(x), Ok(y)) if x == y),
                );
            }
        }
        outcome(&a, json!({"restriction_orders": orders, "t_s_position": i0}), vec![])
    })
}

fn half_pairing_rescale(_: &SweepConfig) -> Outcome {
    with_model(|m| {
        let mut a = Asserts::default();
        let emb = match m.ov2_in_ov4() {
            Ok(e) if e.len() == 3 => e,
            _ => return error_outcome("overlattice model incomplete".into()),
        };
        // pullbacks carry twice the pairing
        let doubled = match m.ov4[0].lattice.rescale(&rat(2, 1)) {
            Ok(l) => l,
            Err(e) => return error_outcome(e.to_string()),
        };
        let lift = |e: &Embedding| Embedding::new(doubled.clone(), e.basis().clone());
        let meet = match (lift(&emb[0]), lift(&emb[1])) {
            (Ok(x), Ok(y)) => sublattice_intersection(&x, &y),
            (Err(e), _) | (_, Err(e)) => return error_outcome(e.to_string()),
        };
        let meet = match meet {
            Ok(x) => x,
            Err(e) => return error_outcome(e.to_string()),
        };
        let halved = match meet.sublattice().rescale(&rat(1, 2)) {
            Ok(l) => l,
            Err(e) => return error_outcome(e.to_string()),
        };
        a.check("rescaled intersection is even", halved.is_even());
        a.check("|disc| = 16", halved.determinant().abs() == int(16));
        let forms = (
            halved.discriminant_group().map(|d| d.form().clone()),
            m.tx.discriminant_group().map(|d| d.form().clone()),
        );
        let iso = match &forms {
            (Ok(f), Ok(g)) => iso_json(f, g).0,
            _ => false,
        };
        a.check("form matches ker alpha", iso);
        outcome(
            &a,
            json!({"det": js::int(&halved.determinant()), "rank": halved.rank()}),
            vec!["ambient: index-4 overlattice with doubled pairing".into()],
        )
    })
}

fn solve_w_check(config: &SweepConfig) -> Outcome {
    sweep(config, vec![], |p, _| {
        let b = match realize_bfield(p) {
            Ok(b) => b,
            Err(e) => return SampleVerdict::error(e.to_string()),
        };
        let mut a = Asserts::default();
        let mut readings = BTreeMap::new();
        let mut per = serde_json::Map::new();
        for hr in HPrimeReading::ALL {
            match solve_reading(&b, hr) {
                Ok(r) => {
                    readings.insert(hr.as_str().to_string(), r.holds());
                    per.insert(
                        hr.as_str().to_string(),
                        json!({
                            "h_prime_integral": r.h_prime_integral,
                            "h_prime_orthogonal_to_h": r.h_prime_orthogonal,
                            "k4": js::rat(&r.k4),
                            "k4_integral": r.k4_integral,
                            "unique_solution_is_h'+k4e4": r.unique_solution_matches,
                            "two_plane_family_matches": r.family_matches,
                        }),
                    );
                }
                Err(e) => return SampleVerdict::error(e.to_string()),
            }
        }
        let none = ab::solve_w_two_planes(&b, Constraints { square: 6, e4_pairing: 0 }, ab::DEFAULT_WINDOW);
        a.check("(6, 0) infeasible", matches!(&none, Ok(s) if s.solutions.is_empty() && s.exhaustive));
        let line = ab::solve_w_two_planes(&b, Constraints { square: 0, e4_pairing: 0 }, ab::DEFAULT_WINDOW);
        a.check(
            "(0, 0) gives the e4 line",
            matches!(&line, Ok(s) if s.free_e4_shift && s.solutions == vec![MukaiVector::e4()]),
        );
        SampleVerdict::from_readings(&a, readings, json!({"params": params_json(p), "per_reading": per}))
    })
}

fn reading_label(hr: HPrimeReading, kr: KsReading) -> String {
    format!("{}; {}", hr.as_str(), kr.as_str())
}

fn fano_pic(_: &SweepConfig) -> Outcome {
    let p = BFieldParams::default_params();
    let a = Asserts::default();
    let mut readings = BTreeMap::new();
    let mut per = serde_json::Map::new();
    let one = BigRational::one();
    for hr in HPrimeReading::ALL {
        for kr in KsReading::ALL {
            let f = fano_images(&p, hr, kr);
            let diff: Vec<BigRational> = f.g.iter().zip(&f.f1).map(|(x, y)| x - y).collect();
            let sum: Vec<BigRational> = f.f2.iter().zip(&f.f3).map(|(x, y)| x + y).collect();
            let e4 = ab::e4_vec();
            let h = ab::h_vec();
            let mut r = Asserts::default();
            r.check("images integral", [&f.g, &f.f1, &f.f2, &f.f3].iter().all(|v| is_integral(v)));
            r.check("images orthogonal to h", [&f.g, &f.f1, &f.f2, &f.f3].iter().all(|v| alg_pairing(&p, v, &h).is_zero()));
            r.check("g - F1 = e4", diff == e4);
            r.check("F2 + F3 = e4", sum == e4);
            r.check("g^2 = 6", alg_pairing(&p, &f.g, &f.g) == rat(6, 1));
            r.check("g.(g - F1) = 4", alg_pairing(&p, &f.g, &diff) == rat(4, 1));
            r.check("g.F2 = 2", alg_pairing(&p, &f.g, &f.f2) == rat(2, 1));
            r.check("F2^2 = -2", alg_pairing(&p, &f.f2, &f.f2) == -(&one + &one));
            let label = reading_label(hr, kr);
            readings.insert(label.clone(), r.all());
            per.insert(
                label,
                json!({
                    "assertions": r.to_json(),
                    "g": js::rats(&f.g),
                    "F1": js::rats(&f.f1),
                    "F2": js::rats(&f.f2),
                    "F3": js::rats(&f.f3),
                }),
            );
        }
    }
    Outcome {
        status: readings_status(&readings),
        witness: json!({
            "params": params_json(&p),
            "readings": readings,
            "per_reading": per,
            "assertions": a.to_json(),
        }),
        notes: vec!["coordinates in the basis (2e0+2B, h, s, e4)".into()],
    }
}

#[derive(Clone, Copy)]
enum LiftMode {
    Independent,
    Shared,
    SharedNormalized,
}

impl LiftMode {
    const ALL: [LiftMode; 3] = [LiftMode::Independent, LiftMode::Shared, LiftMode::SharedNormalized];

    fn as_str(self) -> &'static str {
        match self {
            LiftMode::Independent => "independent B1, B2",
            LiftMode::Shared => "B1 = B2",
            LiftMode::SharedNormalized => "B1 = B2 with k4 = 0",
        }
    }
}

fn composed_isometry(config: &SweepConfig) -> Outcome {
    let notes = vec![
        "h' and k4 from the target side, k_s from the source side".into(),
        "k4 = 0 normalization sets B^2 = ((2B.h)^2 + 3)/8".into(),
    ];
    sweep(config, notes, |p, q| {
        let normalized = match k4_normalized(p) {
            Ok(n) => n,
            Err(e) => return SampleVerdict::error(e.to_string()),
        };
        let mut a = Asserts::default();
        a.check("normalized triple is realizable", realize_bfield(&normalized).is_ok());
        let mut readings = BTreeMap::new();
        let mut per = serde_json::Map::new();
        for mode in LiftMode::ALL {
            let (src, dst) = match mode {
                LiftMode::Independent => (p, q),
                LiftMode::Shared => (p, p),
                LiftMode::SharedNormalized => (&normalized, &normalized),
            };
            for hr in HPrimeReading::ALL {
                for kr in KsReading::ALL {
                    let (iso, integral) = composed_outcome(src, dst, hr, kr);
                    let label = format!("{}; {}", mode.as_str(), reading_label(hr, kr));
                    readings.insert(label.clone(), iso && integral);
                    per.insert(label, json!({"isometry": iso, "integral": integral}));
                }
            }
        }
        let map = ab::composed_map(&normalized, &normalized, HPrimeReading::Rescaled, KsReading::Doubled);
        SampleVerdict::from_readings(
            &a,
            readings,
            json!({
                "params": params_json(p),
                "other": params_json(q),
                "normalized": params_json(&normalized),
                "per_reading": per,
                "normalized_rescaled_doubled_map": js::rat_mat(&map),
            }),
        )
    })
}

fn moduli_vector_check(_: &SweepConfig) -> Outcome {
    let p = BFieldParams::default_params();
    let mut readings = BTreeMap::new();
    let mut per = serde_json::Map::new();
    for hr in HPrimeReading::ALL {
        for kr in KsReading::ALL {
            let v = moduli_vector(&p, hr, kr);
            let sq = alg_pairing(&p, &v, &v);
            let integral = is_integral(&v);
            let even = sq.is_integer() && sq.to_integer().is_even();
            let bounded = sq >= rat(-2, 1);
            let label = reading_label(hr, kr);
            readings.insert(label.clone(), integral && even && bounded);
            per.insert(
                label,
                json!({"vector": js::rats(&v), "square": js::rat(&sq), "integral": integral, "square_even": even, "square_at_least_-2": bounded}),
            );
        }
    }
    Outcome {
        status: readings_status(&readings),
        witness: json!({"params": params_json(&p), "readings": readings, "per_reading": per}),
        notes: vec!["only integrality and the square are checked".into()],
    }
}
