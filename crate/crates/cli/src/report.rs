use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use orbit_ltl::bounded_mc::{BoundMode, CheckConfig, Verdict};
use orbit_ltl::ltl::{Formula, PredicateTable, Relation};
use orbit_ltl::numeric::algebraic::AlgebraicNumber;
use orbit_ltl::numeric::rational::Rational;
use orbit_ltl::spectral::{char_poly, spectrum, EigenClassification, RationalMatrix3};

use crate::instance::Instance;

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Body {
    Check(CheckReport),
    Classify(ClassifyReport),
    Orbit(OrbitReport),
}

#[derive(Serialize)]
pub struct RunConfig {
    pub mode: BoundMode,
    pub horizon: u64,
    pub baker_c: u32,
    pub baker_d: u32,
    pub max_position: u64,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub formula: String,
    pub predicates: BTreeMap<String, String>,
    pub config: RunConfig,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Serialize)]
pub struct Eigenvalue {
    pub min_poly: String,
    /// Isolating box as exact rational endpoints.
    pub re: [String; 2],
    pub im: [String; 2],
    pub approx: [f64; 2],
}

#[derive(Serialize)]
pub struct ClassifyReport {
    pub regime: String,
    pub char_poly: String,
    pub eigenvalues: Vec<Eigenvalue>,
    pub jordan_case: Option<u8>,
    pub gamma: Option<Eigenvalue>,
    /// Multiplicative order of `γ`.
    pub gamma_order: Option<u32>,
    /// Smallest `d` with `λ^d` real and positive.
    pub lambda_order: Option<u32>,
}

#[derive(Serialize)]
pub struct OrbitRow {
    pub n: u64,
    pub point: Vec<String>,
    pub atoms: BTreeMap<String, bool>,
}

#[derive(Serialize)]
pub struct OrbitReport {
    pub predicates: BTreeMap<String, String>,
    pub rows: Vec<OrbitRow>,
}

/// `name -> "p > 0"` for every predicate.
fn describe_predicates(preds: &PredicateTable) -> BTreeMap<String, String> {
    preds
        .iter()
        .map(|(k, p)| {
            let rel = match p.relation {
                Relation::Gt => ">",
                Relation::Ge => ">=",
            };
            (k.clone(), format!("{} {} 0", p.poly, rel))
        })
        .collect()
}

pub fn check_report(f: &Formula, preds: &PredicateTable, cfg: &CheckConfig, verdict: Verdict) -> Report {
    Report {
        schema_version: SCHEMA_VERSION,
        body: Body::Check(CheckReport {
            formula: f.to_string(),
            predicates: describe_predicates(preds),
            config: RunConfig {
                mode: cfg.mode,
                horizon: cfg.horizon,
                baker_c: cfg.baker_c,
                baker_d: cfg.baker_d,
                max_position: cfg.max_position,
            },
            verdict,
        }),
    }
}

fn eigenvalue(a: &AlgebraicNumber, prec: u32) -> Eigenvalue {
    let eps = Rational::new(BigInt::one(), BigInt::one() << prec);
    let b = a.refined(&eps);
    let (re, im) = b.center();
    let r = b.radius();
    let (x, y) = b.approx();
    Eigenvalue {
        min_poly: b.min_poly().to_string(),
        re: [(re - r).to_string(), (re + r).to_string()],
        im: [(im - r).to_string(), (im + r).to_string()],
        approx: [x, y],
    }
}

pub fn classify_report(m: &RationalMatrix3, prec: u32) -> Report {
    let spec = spectrum(m);
    let lambda_order = spec.rou_order_exact();
    let body = match spec.classification() {
        EigenClassification::ThreeReal { eigs, jordan_case } => ClassifyReport {
            regime: "three-real".into(),
            char_poly: char_poly(m).to_string(),
            eigenvalues: eigs.iter().map(|e| eigenvalue(e, prec)).collect(),
            jordan_case: Some(jordan_case),
            gamma: None,
            gamma_order: None,
            lambda_order: None,
        },
        c @ EigenClassification::ComplexPair { .. } => {
            let regime = c.regime_name().to_string();
            let EigenClassification::ComplexPair {
                lambda,
                rho,
                gamma,
                rou_order,
            } = c
            else {
                unreachable!()
            };
            let conj = orbit_ltl::numeric::algebraic::alg_conj(&lambda);
            ClassifyReport {
                regime,
                char_poly: char_poly(m).to_string(),
                eigenvalues: [&lambda, &conj, &rho].iter().map(|e| eigenvalue(e, prec)).collect(),
                jordan_case: None,
                gamma: Some(eigenvalue(&gamma, prec)),
                gamma_order: rou_order,
                lambda_order,
            }
        }
    };
    Report {
        schema_version: SCHEMA_VERSION,
        body: Body::Classify(body),
    }
}

pub fn orbit_report(inst: &Instance, steps: u64) -> Report {
    let mut x = inst.start.clone();
    let mut rows = Vec::new();
    for n in 0..=steps {
        rows.push(OrbitRow {
            n,
            point: x.iter().map(|v| v.to_string()).collect(),
            atoms: inst
                .predicates
                .iter()
                .map(|(k, p)| (k.clone(), p.holds_at(&x)))
                .collect(),
        });
        if n < steps {
            x = inst.matrix.apply(&x);
        }
    }
    Report {
        schema_version: SCHEMA_VERSION,
        body: Body::Orbit(OrbitReport {
            predicates: describe_predicates(&inst.predicates),
            rows,
        }),
    }
}

fn mode_name(m: BoundMode) -> &'static str {
    match m {
        BoundMode::Rigorous => "rigorous",
        BoundMode::IntervalDerived => "interval",
        BoundMode::Empirical => "empirical",
    }
}

fn eig_line(out: &mut String, label: &str, e: &Eigenvalue) {
    let _ = writeln!(
        out,
        "{}: {:.6} {:+.6}i  (root of {})",
        label, e.approx[0], e.approx[1], e.min_poly
    );
}

impl Report {
    pub fn text(&self) -> String {
        let mut out = String::new();
        match &self.body {
            Body::Check(c) => {
                let v = &c.verdict;
                let answer = serde_json::to_value(v.verdict).unwrap();
                let _ = writeln!(out, "verdict: {}", answer.as_str().unwrap());
                let _ = writeln!(out, "formula: {}", c.formula);
                for (k, p) in &c.predicates {
                    let _ = writeln!(out, "  {}: {}", k, p);
                }
                let _ = writeln!(out, "regime: {}", v.regime);
                if let Some(m) = v.mode {
                    let _ = writeln!(out, "mode: {}", mode_name(m));
                }
                let _ = writeln!(out, "rigorous: {}", v.rigor);
                if let Some(l) = &v.lasso {
                    let _ = writeln!(out, "lasso: N = {}, P = {}", l.threshold, l.period);
                    for a in &l.atoms {
                        let _ = writeln!(
                            out,
                            "  {}: N = {}, P = {}, residues {:?}",
                            a.atom, a.threshold, a.period, a.residues
                        );
                    }
                }
                for a in &v.atom_sets {
                    let arcs: Vec<String> = a
                        .arcs
                        .iter()
                        .map(|r| format!("({:.4}, {:.4})", r.start.0, r.end.1))
                        .collect();
                    let desc = match a.constant {
                        Some(b) => format!("constant {}", b),
                        None if arcs.is_empty() => "full circle or empty".into(),
                        None => arcs.join(" "),
                    };
                    let _ = writeln!(out, "  J[{}]: {}", a.atom, desc);
                }
                for b in &v.bounds {
                    let _ = writeln!(out, "  B = {} for {}", b.bound, b.subformula);
                }
                for d in &v.diagnostics {
                    let _ = writeln!(out, "note: {}", d);
                }
            }
            Body::Classify(c) => {
                let _ = writeln!(out, "regime: {}", c.regime);
                let _ = writeln!(out, "characteristic polynomial: {}", c.char_poly);
                for (i, e) in c.eigenvalues.iter().enumerate() {
                    eig_line(&mut out, &format!("eigenvalue {}", i + 1), e);
                }
                if let Some(j) = c.jordan_case {
                    let _ = writeln!(out, "jordan case: {}", j);
                }
                if let Some(g) = &c.gamma {
                    eig_line(&mut out, "gamma", g);
                }
                if let Some(d) = c.gamma_order {
                    let _ = writeln!(out, "gamma order: {}", d);
                }
                if let Some(d) = c.lambda_order {
                    let _ = writeln!(out, "lambda^{} is real and positive", d);
                }
            }
            Body::Orbit(o) => {
                for r in &o.rows {
                    let atoms: Vec<String> = r
                        .atoms
                        .iter()
                        .map(|(k, v)| format!("{}={}", k, if *v { 1 } else { 0 }))
                        .collect();
                    let _ = writeln!(out, "{}: ({})  {}", r.n, r.point.join(", "), atoms.join(" "));
                }
            }
        }
        out
    }
}
