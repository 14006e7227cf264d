//! JSON report shapes. Field order is fixed and maps are ordered, so output
//! is byte-for-byte reproducible.

use std::collections::BTreeMap;

use serde::Serialize;
use skewtower::{
    CentralPower, Centrality, ErasureResult, ErasureWitness, GradedPresentation, OreTower, PIReport, SkewPoly, Swapped,
    ValidationReport, Verdict,
};

fn poly(t: &OreTower, p: &SkewPoly) -> String {
    t.render(p)
}

#[derive(Serialize)]
pub struct FailureJson {
    pub check: String,
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Serialize)]
pub struct LevelJson {
    pub level: usize,
    pub name: String,
    pub passed: Vec<String>,
    pub q_skew: Option<bool>,
    pub failures: Vec<FailureJson>,
}

#[derive(Serialize)]
pub struct ValidateJson {
    pub command: &'static str,
    pub valid: bool,
    pub levels: Vec<LevelJson>,
}

impl ValidateJson {
    pub fn new(r: &ValidationReport) -> ValidateJson {
        let levels = r
            .levels
            .iter()
            .map(|l| LevelJson {
                level: l.level,
                name: l.name.clone(),
                passed: l.passed.iter().map(|c| c.label().to_string()).collect(),
                q_skew: l.q_skew,
                failures: l
                    .failures
                    .iter()
                    .map(|f| FailureJson {
                        check: f.check.label().to_string(),
                        identity: f.identity.clone(),
                        lhs: f.lhs.clone(),
                        rhs: f.rhs.clone(),
                    })
                    .collect(),
            })
            .collect();
        ValidateJson { command: "validate", valid: r.is_valid(), levels }
    }
}

#[derive(Serialize)]
pub struct MulJson {
    pub command: &'static str,
    pub left: String,
    pub right: String,
    pub product: String,
}

#[derive(Serialize)]
pub struct CentralJson {
    pub command: &'static str,
    pub element: String,
    pub central: bool,
    pub fails_with: Option<String>,
}

impl CentralJson {
    pub fn new(t: &OreTower, p: &SkewPoly, c: &Centrality) -> CentralJson {
        CentralJson {
            command: "central",
            element: poly(t, p),
            central: c.is_central(),
            fails_with: match c {
                Centrality::Central => None,
                Centrality::NotCentral(g) => Some(g.render(t)),
            },
        }
    }
}

#[derive(Serialize)]
pub struct OrderJson {
    pub command: &'static str,
    /// Order of `sigma_i` on the base, keyed by level.
    pub sigma_orders: BTreeMap<usize, Option<u64>>,
    /// Multiplicative order of `lambda_ij`, keyed by `"i,j"`; absent when `sigma_i(x_j)` is not diagonal by a scalar.
    pub lambda_orders: BTreeMap<String, Option<u64>>,
    pub scalar: Option<String>,
    pub scalar_order: Option<u64>,
}

#[derive(Serialize)]
pub struct WitnessJson {
    pub level: usize,
    pub branch: String,
    pub c: Option<String>,
    pub u: Option<String>,
    pub a: Option<String>,
    pub v: Option<String>,
    pub b: Option<String>,
}

impl WitnessJson {
    pub fn new(t: &OreTower, w: &ErasureWitness) -> WitnessJson {
        let constant = |m: &skewtower::Matrix| t.render(&SkewPoly::constant(m.clone()));
        WitnessJson {
            level: w.level,
            branch: w.branch.to_string(),
            c: w.c.as_ref().map(|p| poly(t, p)),
            u: w.u.as_ref().map(|p| poly(t, p)),
            a: w.a.as_ref().map(constant),
            v: w.v.as_ref().map(constant),
            b: w.b.as_ref().map(|p| poly(t, p)),
        }
    }
}

#[derive(Serialize)]
pub struct EraseJson {
    pub command: &'static str,
    pub y: String,
    pub witness: WitnessJson,
    pub tower: String,
}

#[derive(Serialize)]
pub struct YJson {
    pub index: usize,
    pub name: String,
    pub value: String,
}

#[derive(Serialize)]
pub struct VerificationJson {
    pub passed: bool,
    pub relations_checked: usize,
    pub leading_checked: usize,
    pub tower_valid: bool,
    pub failures: Vec<String>,
}

#[derive(Serialize)]
pub struct EraseAllJson {
    pub command: &'static str,
    pub y: Vec<YJson>,
    pub witnesses: Vec<WitnessJson>,
    pub warnings: Vec<String>,
    pub verification: VerificationJson,
    pub tower: String,
}

impl EraseAllJson {
    /// Polynomials are rendered with the names of `t`, the input tower.
    pub fn new(t: &OreTower, r: &ErasureResult) -> EraseAllJson {
        let names = r.new_tower.names();
        EraseAllJson {
            command: "erase-all",
            y: r.y_elements
                .iter()
                .enumerate()
                .map(|(i, y)| YJson { index: i + 1, name: names[i].clone(), value: poly(t, y) })
                .collect(),
            witnesses: r.witnesses.iter().map(|w| WitnessJson::new(t, w)).collect(),
            warnings: r.warnings.clone(),
            verification: VerificationJson {
                passed: r.verification.passed(),
                relations_checked: r.verification.relations_checked,
                leading_checked: r.verification.leading_checked,
                tower_valid: r.verification.tower_valid,
                failures: r.verification.failures.clone(),
            },
            tower: skewtower::render_tower_file(&r.new_tower),
        }
    }
}

#[derive(Serialize)]
pub struct SwapJson {
    pub command: &'static str,
    pub q_preserved: bool,
    pub warnings: Vec<String>,
    pub tower: String,
}

impl SwapJson {
    pub fn new(s: &Swapped) -> SwapJson {
        SwapJson {
            command: "swap",
            q_preserved: s.q_preserved,
            warnings: s.warnings.clone(),
            tower: skewtower::render_tower_file(&s.tower),
        }
    }
}

#[derive(Serialize)]
pub struct GradedJson {
    pub command: &'static str,
    pub steps: Vec<String>,
    pub tower: String,
}

impl GradedJson {
    pub fn new(g: &GradedPresentation) -> GradedJson {
        GradedJson {
            command: "gr",
            steps: g.step_log.iter().map(ToString::to_string).collect(),
            tower: skewtower::render_tower_file(&g.result),
        }
    }
}

#[derive(Serialize)]
pub struct CentralPowerJson {
    pub var: String,
    pub exponent: u32,
    pub element: String,
}

impl CentralPowerJson {
    pub fn new(t: &OreTower, w: &CentralPower) -> CentralPowerJson {
        CentralPowerJson { var: t.names()[w.var].clone(), exponent: w.exponent, element: poly(t, &w.element) }
    }
}

#[derive(Serialize)]
pub struct PiJson {
    pub command: &'static str,
    pub verdict: &'static str,
    pub reason: Option<String>,
    pub lambda_orders: BTreeMap<String, Option<u64>>,
    pub base_orders: BTreeMap<usize, Option<u64>>,
    pub witnesses: Vec<CentralPowerJson>,
    pub notes: Vec<String>,
}

impl PiJson {
    pub fn new(t: &OreTower, r: &PIReport) -> PiJson {
        let (verdict, reason) = match &r.verdict {
            Verdict::PI => ("PI", None),
            Verdict::NotPI => ("NotPI", None),
            Verdict::Undecided(why) => ("Undecided", Some(why.clone())),
        };
        let mut notes = Vec::new();
        if r.verdict == Verdict::PI {
            notes.push("no certificate for isomorphic quotient rings or equal PI degrees is computed".into());
        }
        PiJson {
            command: "pi-check",
            verdict,
            reason,
            lambda_orders: r.lambda_orders.iter().map(|((i, j), o)| (format!("{i},{j}"), *o)).collect(),
            base_orders: r.base_orders.clone(),
            witnesses: r.witnesses.iter().map(|w| CentralPowerJson::new(t, w)).collect(),
            notes,
        }
    }
}
