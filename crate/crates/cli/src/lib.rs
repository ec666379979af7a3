//! Library side of the `lattk` binary: Gram files, built-in exports and the
//! three commands. Each command returns its output and an exit code so that
//! `main` stays a thin shell.

#![allow(clippy::needless_range_loop)]

use std::fmt::Write as _;
use std::path::Path;

use lattk_core::catalog::{
    self, realize_bfield, standard_lattice, transcendental_models, twisted_algebraic_lattice,
    BFieldParams, StandardName,
};
use lattk_core::lattice::Lattice;
use lattk_core::linalg::IntMat;
use lattk_core::suite::{self, json as js, Report, Status, SweepConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid Gram file: {0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Suite(#[from] suite::SuiteError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}

/// A lattice file: `{"rank": n, "gram": [[…]], "labels": […]}`. Entries are
/// integers or strings holding canonical rationals (`"-3"`, `"1/2"`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramFile {
    pub gram: Vec<Vec<BigRational>>,
    pub labels: Option<Vec<String>>,
}

fn parse_canonical_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    if s.starts_with('-') && digits == "0" {
        return None;
    }
    s.parse().ok()
}

/// Parses `"p"` or `"p/q"`; rejects anything but the reduced form with
/// `q > 1`.
pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Parse(format!("{s:?} is not a canonical rational"));
    match s.split_once('/') {
        None => parse_canonical_int(s).map(BigRational::from_integer).ok_or_else(bad),
        Some((p, q)) => {
            let p = parse_canonical_int(p).ok_or_else(bad)?;
            let q = parse_canonical_int(q).ok_or_else(bad)?;
            if !q.is_positive() || q.is_one() {
                return Err(bad());
            }
            let r = BigRational::new(p.clone(), q.clone());
            if r.numer() != &p || r.denom() != &q {
                return Err(bad());
            }
            Ok(r)
        }
    }
}

fn parse_entry(v: &Value) -> Result<BigRational, CliError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(BigRational::from_integer(u.into()))
            } else {
                Err(CliError::Parse(format!(
                    "{n} is not an integer; write rationals as \"p/q\" strings"
                )))
            }
        }
        Value::String(s) => parse_rational(s),
        other => Err(CliError::Parse(format!("unexpected entry {other}"))),
    }
}

impl GramFile {
    pub fn from_lattice(l: &Lattice, labels: Option<Vec<String>>) -> Self {
        let g = l.gram();
        GramFile {
            gram: (0..g.rows())
                .map(|i| g.row(i).iter().cloned().map(BigRational::from_integer).collect())
                .collect(),
            labels,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| CliError::Parse("top level must be an object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "rank" | "gram" | "labels") {
                return Err(CliError::Parse(format!("unknown field {key:?}")));
            }
        }
        let rank = obj
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| CliError::Parse("missing or invalid \"rank\"".into()))?
            as usize;
        let rows = obj
            .get("gram")
            .and_then(Value::as_array)
            .ok_or_else(|| CliError::Parse("missing or invalid \"gram\"".into()))?;
        if rows.len() != rank {
            return Err(CliError::Parse(format!(
                "\"gram\" has {} rows, rank is {rank}",
                rows.len()
            )));
        }
        let mut gram = Vec::with_capacity(rank);
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| CliError::Parse(format!("row {i} is not an array")))?;
            if row.len() != rank {
                return Err(CliError::Parse(format!(
                    "row {i} has {} entries, rank is {rank}",
                    row.len()
                )));
            }
            gram.push(row.iter().map(parse_entry).collect::<Result<Vec<_>, _>>()?);
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(CliError::Parse(format!(
                        "Gram matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let labels = match obj.get("labels") {
            None | Some(Value::Null) => None,
            Some(Value::Array(a)) => {
                let labels: Vec<String> = a
                    .iter()
                    .map(|x| {
                        x.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| CliError::Parse("labels must be strings".into()))
                    })
                    .collect::<Result<_, _>>()?;
                if labels.len() != rank {
                    return Err(CliError::Parse(format!(
                        "{} labels for rank {rank}",
                        labels.len()
                    )));
                }
                Some(labels)
            }
            Some(_) => return Err(CliError::Parse("\"labels\" must be an array".into())),
        };
        Ok(GramFile { gram, labels })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn to_json(&self) -> Value {
        let entry = |r: &BigRational| {
            if r.is_integer() {
                js::int(&r.to_integer())
            } else {
                js::rat(r)
            }
        };
        let gram: Vec<Value> = self
            .gram
            .iter()
            .map(|row| Value::Array(row.iter().map(entry).collect()))
            .collect();
        let mut v = json!({"rank": self.rank(), "gram": gram});
        if let Some(l) = &self.labels {
            v["labels"] = json!(l);
        }
        v
    }

    pub fn serialize(&self) -> String {
        js::canonical(&self.to_json())
    }

    pub fn lattice(&self) -> Result<Lattice, CliError> {
        let rows: Vec<Vec<BigInt>> = self
            .gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|r| {
                        r.is_integer().then(|| r.to_integer()).ok_or_else(|| {
                            CliError::Parse(format!("entry {r} is not an integer"))
                        })
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        let m = IntMat::from_rows_with_cols(&rows, self.rank())
            .map_err(|e| CliError::Parse(e.to_string()))?;
        Lattice::new(m).map_err(|e| CliError::Parse(e.to_string()))
    }
}

pub fn read_gram_file(path: &Path) -> Result<GramFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    GramFile::parse(&text)
}

pub fn write_gram_file(path: &Path, file: &GramFile) -> Result<(), CliError> {
    std::fs::write(path, file.serialize()).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub const EXPORT_NAMES: [&str; 7] = ["U", "E8minus", "K3", "Mukai", "PicSP", "TwistedAlg", "TX"];

/// A built-in lattice by export name. `TwistedAlg` and `TX` use the default
/// B-field `(1/2, 1/2, 1/2)`.
pub fn builtin(name: &str) -> Result<GramFile, CliError> {
    let unknown = || {
        CliError::Usage(format!(
            "unknown lattice {name:?}; choose one of {}",
            EXPORT_NAMES.join(", ")
        ))
    };
    let internal = |e: catalog::CatalogError| CliError::Usage(e.to_string());
    if let Ok(std) = name.parse::<StandardName>() {
        let l = standard_lattice(std);
        return Ok(GramFile::from_lattice(&l.lattice, Some(l.labels)));
    }
    match name {
        "PicSP" => Ok(GramFile::from_lattice(
            &catalog::picard_embedding().sublattice(),
            Some(vec!["h".into(), "s".into()]),
        )),
        "TwistedAlg" | "TX" => {
            let b = realize_bfield(&BFieldParams::default_params()).map_err(internal)?;
            if name == "TwistedAlg" {
                let alg = twisted_algebraic_lattice(&b).map_err(internal)?;
                let labels = ["2e0+2B", "h", "s", "e4"].map(str::to_string).to_vec();
                Ok(GramFile::from_lattice(&alg.sublattice(), Some(labels)))
            } else {
                let t = transcendental_models(&b).map_err(internal)?;
                Ok(GramFile::from_lattice(&t.t_x.sublattice(), None))
            }
        }
        _ => Err(unknown()),
    }
}

fn group_name(orders: &[u64]) -> String {
    if orders.is_empty() {
        "trivial".into()
    } else {
        orders
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }
}

/// The text printed by `lattk lattice info`.
pub fn lattice_info(file: &GramFile) -> Result<String, CliError> {
    let l = file.lattice()?;
    let mut out = String::new();
    let sig = l.signature();
    let det = l.determinant();
    writeln!(out, "rank: {}", l.rank()).unwrap();
    writeln!(
        out,
        "signature: ({}, {}) with {} zero",
        sig.positive, sig.negative, sig.zero
    )
    .unwrap();
    writeln!(out, "determinant: {det}").unwrap();
    writeln!(out, "even: {}", if l.is_even() { "yes" } else { "no" }).unwrap();
    if let Some(labels) = &file.labels {
        writeln!(out, "labels: {}", labels.join(" ")).unwrap();
    }
    if det.is_zero() {
        writeln!(out, "degenerate lattice: no discriminant group").unwrap();
        return Ok(out);
    }
    let disc = l
        .discriminant_group()
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let form = disc.form();
    if form.is_trivial() {
        writeln!(out, "unimodular, trivial discriminant group").unwrap();
        return Ok(out);
    }
    writeln!(out, "disc {det}, group {}", group_name(form.orders())).unwrap();
    writeln!(out, "generators (q mod 2Z, b mod Z):").unwrap();
    let n = form.generator_count();
    for i in 0..n {
        let q = if form.quadratic_defined() {
            form.q_gen(i).to_string()
        } else {
            "-".into()
        };
        let b: Vec<String> = (0..n).map(|j| form.b_gen(i, j).to_string()).collect();
        writeln!(
            out,
            "  x{i}: order {}, q {q}, b [{}]",
            form.orders()[i],
            b.join(", ")
        )
        .unwrap();
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Runs the selected checks; `None` means all of them.
pub fn verify(
    check: Option<&str>,
    format: Format,
    config: &SweepConfig,
) -> Result<(String, i32), CliError> {
    let report = match check {
        Some(name) => suite::run_selected(&[name], config)?,
        None => suite::run_all(config)?,
    };
    let text = match format {
        Format::Json => report.to_canonical_json(),
        Format::Text => report.to_text(),
    };
    Ok((text, report_exit_code(&report)))
}

/// `1` when any check failed, `0` otherwise; ambiguous and skipped checks
/// do not fail a run.
pub fn report_exit_code(report: &Report) -> i32 {
    if report.overall == Status::Fail {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}

pub fn export(name: &str, path: &Path) -> Result<GramFile, CliError> {
    let file = builtin(name)?;
    write_gram_file(path, &file)?;
    Ok(file)
}
