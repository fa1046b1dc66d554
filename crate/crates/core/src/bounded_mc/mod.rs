//! The irrational-rotation engine: return-time bounds, boundification and
//! recursive evaluation of bounded formulas. [`check`] also dispatches the
//! eventually-periodic regimes to [`crate::semilinear`].

mod bounds;
mod checker;

use num_bigint::BigInt;
use serde::Serialize;

use crate::ltl::{temporal_depth, to_negation_free, Formula, PredicateTable};
use crate::numeric::rational::Rational;
use crate::oracle::OrbitOracle;
use crate::semilinear::decide_periodic;
use crate::spectral::{closed_form, spectrum, RationalMatrix3};
use crate::torus::{ArcRecord, Torus};
use crate::{Error, Result};

pub use bounds::{
    analyze_atom, boundify, choose_threshold, uniform_certificates, AtomAnalysis, BoundCertificate, BoundMode,
    IntervalBounds, RigorousBounds, RigorousParams,
};
pub use checker::{model_check_bounded, BoundedChecker, Trace};

/// Exact truth of `pred` at `M^n s`.
pub fn membership_oracle(m: &RationalMatrix3, s: &[Rational], n: u64, pred: &crate::ltl::AtomicPredicate) -> bool {
    pred.holds_at(&OrbitOracle::point(m, s, n))
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub mode: BoundMode,
    /// Exponent constant of the linear-forms-in-logarithms gap.
    pub baker_c: u32,
    /// Exponent `D` in `‖γ‖^D` of the return-time bound.
    pub baker_d: u32,
    /// Horizon of the empirical threshold and of the empirical mode.
    pub horizon: u64,
    /// Largest orbit position the bounded checker may visit.
    pub max_position: u64,
    /// Step cap for until/release arc constructions.
    pub construction_cap: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            mode: BoundMode::IntervalDerived,
            baker_c: 3,
            baker_d: 3,
            horizon: 10_000,
            max_position: 50_000,
            construction_cap: 4096,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    True,
    False,
    Inconclusive,
}

impl From<bool> for Answer {
    fn from(b: bool) -> Self {
        if b {
            Answer::True
        } else {
            Answer::False
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AtomSpecSummary {
    pub atom: String,
    pub threshold: String,
    pub period: u32,
    pub residues: Vec<u32>,
    /// Truth at positions `0..=N` as a `0`/`1` string.
    pub prefix: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LassoSummary {
    pub threshold: u64,
    pub period: u64,
    pub atoms: Vec<AtomSpecSummary>,
}

/// Arc set of one atom in the irrational-rotation regime.
#[derive(Clone, Debug, Serialize)]
pub struct AtomSetSummary {
    pub atom: String,
    pub constant: Option<bool>,
    pub arcs: Vec<ArcRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub verdict: Answer,
    pub regime: String,
    /// Bound mode used for the irrational-rotation regime.
    pub mode: Option<BoundMode>,
    /// True when every bound used was rigorous relative to the configured
    /// constants.
    pub rigor: bool,
    pub bounds: Vec<BoundCertificate>,
    pub lasso: Option<LassoSummary>,
    pub atom_sets: Vec<AtomSetSummary>,
    pub diagnostics: Vec<String>,
}

/// Decides whether the orbit of `s` under `m` satisfies `f` at time 0.
pub fn check(
    m: &RationalMatrix3,
    s: &[Rational],
    f: &Formula,
    preds: &PredicateTable,
    cfg: &CheckConfig,
) -> Result<Verdict> {
    f.check_atoms(preds)?;
    let (g, table) = to_negation_free(f, preds)?;
    let oracle = OrbitOracle::new(m, s, table.values().cloned().collect());
    let spec = spectrum(m);
    let regime = spec.classification().regime_name().to_string();
    let mut v = Verdict {
        verdict: Answer::Inconclusive,
        regime,
        mode: None,
        rigor: false,
        bounds: vec![],
        lasso: None,
        atom_sets: vec![],
        diagnostics: vec![],
    };
    let periodic = !spec.complex || spec.rou_order_exact().is_some();
    if periodic {
        let (ans, w, specs) = decide_periodic(m, s, &g, &oracle)?;
        v.verdict = ans.into();
        v.rigor = true;
        v.lasso = Some(LassoSummary {
            threshold: w.threshold,
            period: w.period,
            atoms: specs
                .iter()
                .zip(&w.atoms)
                .enumerate()
                .map(|(i, (sp, a))| AtomSpecSummary {
                    atom: a.clone(),
                    threshold: sp.threshold.to_string(),
                    period: sp.period,
                    residues: sp.residues.iter().copied().collect(),
                    prefix: w.prefix.iter().map(|r| if r[i] { '1' } else { '0' }).collect(),
                })
                .collect(),
        });
        return Ok(v);
    }
    v.mode = Some(cfg.mode);
    let outcome = match cfg.mode {
        BoundMode::Empirical => empirical(&g, &oracle, cfg, &mut v),
        BoundMode::IntervalDerived | BoundMode::Rigorous => {
            let torus = Torus::new(spec.gamma().expect("complex regime"))?;
            let orbit = closed_form(m, s, &spec);
            let atoms = oracle
                .predicates()
                .iter()
                .map(|p| analyze_atom(p, &orbit, &spec, &torus, cfg.baker_c))
                .collect::<Result<Vec<_>>>()?;
            v.atom_sets = atoms
                .iter()
                .map(|a| AtomSetSummary {
                    atom: a.name.clone(),
                    constant: a.constant,
                    arcs: torus.describe(&a.set),
                })
                .collect();
            if cfg.mode == BoundMode::Rigorous {
                rigorous(&g, &oracle, &torus, &atoms, cfg, &mut v)
            } else {
                interval(&g, &oracle, &torus, &atoms, cfg, &mut v)
            }
        }
    };
    match outcome {
        Ok(ans) => v.verdict = ans,
        Err(Error::Inconclusive(msg)) => {
            v.verdict = Answer::Inconclusive;
            v.rigor = false;
            v.diagnostics.push(msg);
        }
        Err(e) => return Err(e),
    }
    Ok(v)
}

fn run_bounded(g: &Formula, oracle: &OrbitOracle, cfg: &CheckConfig, v: &mut Verdict) -> Result<Answer> {
    let b = boundify(g, &v.bounds)?;
    let mut c = BoundedChecker::new(&b, oracle, cfg.max_position)?;
    let ans = c.check(0)?;
    v.diagnostics.push(format!("bounded check visited positions up to {}", c.reached));
    Ok(ans.into())
}

fn interval(
    g: &Formula,
    oracle: &OrbitOracle,
    torus: &Torus,
    atoms: &[AtomAnalysis],
    cfg: &CheckConfig,
    v: &mut Verdict,
) -> Result<Answer> {
    let (n, rig) = choose_threshold(atoms, torus, oracle, cfg.horizon, cfg.max_position, &mut v.diagnostics)?;
    let mut ib = IntervalBounds {
        torus,
        atoms,
        threshold: n,
        baker_d: cfg.baker_d,
        cap: cfg.construction_cap,
        certificates: vec![],
    };
    ib.set(g)?;
    v.bounds = ib.certificates;
    v.rigor = rig;
    run_bounded(g, oracle, cfg, v)
}

fn rigorous(
    g: &Formula,
    oracle: &OrbitOracle,
    torus: &Torus,
    atoms: &[AtomAnalysis],
    cfg: &CheckConfig,
    v: &mut Verdict,
) -> Result<Answer> {
    let mut n = BigInt::from(0);
    for a in atoms {
        match &a.rigorous_n {
            Ok(x) => n = n.max(x.clone()),
            Err(e) => return Err(Error::Unsupported(format!("atom {}: {}", a.name, e))),
        }
    }
    let zero_bits = atoms.iter().map(|a| a.zero_bits).max().unwrap_or(0);
    let params = RigorousParams::new(torus.gamma().size_bits(), zero_bits, &n, cfg.baker_c, cfg.baker_d);
    let mut rb = RigorousBounds {
        params: &params,
        certificates: vec![],
    };
    rb.run(g)?;
    v.bounds = rb.certificates;
    v.diagnostics.push(format!("dominance threshold {}", n));
    let ans = run_bounded(g, oracle, cfg, v)?;
    v.rigor = true;
    Ok(ans)
}

fn empirical(g: &Formula, oracle: &OrbitOracle, cfg: &CheckConfig, v: &mut Verdict) -> Result<Answer> {
    let h = cfg.horizon;
    let budget = h
        .saturating_mul(temporal_depth(g) as u64 + 1)
        .saturating_add(g.size() as u64)
        .min(cfg.max_position.max(h));
    let run = |b: u64| -> Result<bool> {
        let certs = uniform_certificates(g, b, BoundMode::Empirical);
        let f = boundify(g, &certs)?;
        BoundedChecker::new(&f, oracle, budget)?.check(0)
    };
    let full = run(h)?;
    let half = run(h / 2)?;
    v.bounds = uniform_certificates(g, h, BoundMode::Empirical);
    if full != half {
        return Err(Error::Inconclusive(format!(
            "verdict changes between horizons {} and {}",
            h / 2,
            h
        )));
    }
    Ok(full.into())
}
