//! Erasing q-skew derivations.
//!
//! `erase_top` replaces the top variable `x` by an element `y` with
//! `y r = sigma(r) y` for `r` below, `swap_adjacent` moves a derivation-free
//! level below its neighbour, and `erase_all` runs the induction that turns
//! `R_n` into the automorphism-only tower `T_n = R_0[y_1; tau_1]...[y_n; tau_n]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{solve_linear_system, BaseElement, Matrix};
use crate::pi::{haynal_verdict, Verdict};
use crate::ringmap::RingMap;
use crate::scalar::{Field, Scalar};
use crate::skewpoly::{Degree, Monomial, SkewPoly};
use crate::tower::{check_swap_compatibility, validate_tower, BaseMap, OreTower, TowerLevel, VarImage};

/// Order bound used when `erase_all` asks for a PI verdict.
const ORDER_BOUND: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErasureBranch {
    TrivialDelta,
    CenterMoving,
    InnerSkolemNoether,
}

impl fmt::Display for ErasureBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ErasureBranch::TrivialDelta => "TrivialDelta",
            ErasureBranch::CenterMoving => "CenterMoving",
            ErasureBranch::InnerSkolemNoether => "InnerSkolemNoether",
        };
        f.write_str(s)
    }
}

/// Data certifying one erasure step.
///
/// `CenterMoving` carries `c` and `u = sigma(c) - c`, plus `b` when `u` is a
/// constant unit (then `y = x - b`; otherwise `y = u x + delta(c)`).
/// `InnerSkolemNoether` carries `a`, `v` and `b = a v`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErasureWitness {
    /// 1-based level of the erased variable.
    pub level: usize,
    pub branch: ErasureBranch,
    pub c: Option<SkewPoly>,
    pub u: Option<SkewPoly>,
    pub a: Option<BaseElement>,
    pub v: Option<BaseElement>,
    pub b: Option<SkewPoly>,
}

impl ErasureWitness {
    fn trivial(level: usize) -> ErasureWitness {
        ErasureWitness { level, branch: ErasureBranch::TrivialDelta, c: None, u: None, a: None, v: None, b: None }
    }

    /// Left factor `u` of `y = u x + ...` (`1` when `y = x - b`).
    pub fn clearing_element(&self, t: &OreTower) -> SkewPoly {
        match (&self.branch, &self.u, &self.b) {
            (ErasureBranch::CenterMoving, Some(u), None) => u.clone(),
            _ => t.one(),
        }
    }

    /// Re-derives `y` from the witness in the tower it was erased from and
    /// re-checks the defining identities.
    pub fn recheck(&self, t: &OreTower, y: &SkewPoly) -> bool {
        let top = t.height() - 1;
        let level = t.level(top);
        let x = t.var(top);
        match self.branch {
            ErasureBranch::TrivialDelta => level.delta_is_trivial() && *y == x,
            ErasureBranch::CenterMoving => {
                let (Some(c), Some(u)) = (&self.c, &self.u) else {
                    return false;
                };
                let lower = t.prefix(top);
                if t.sigma_nf(top, c).sub(c) != *u {
                    return false;
                }
                let central = |p: &SkewPoly| lower.is_central(p).map(|r| r.is_central()).unwrap_or(false);
                if !central(c) || !central(u) {
                    return false;
                }
                let dc = t.delta_nf(top, c);
                match &self.b {
                    None => *y == t.mul_nf(u, &x).add(&dc),
                    Some(b) => {
                        let Some(inv) = u.as_constant().and_then(Matrix::inverse) else {
                            return false;
                        };
                        *b == dc.left_scale(&inv).neg() && *y == x.sub(b)
                    }
                }
            }
            ErasureBranch::InnerSkolemNoether => {
                let (Some(a), Some(v), Some(b)) = (&self.a, &self.v, &self.b) else {
                    return false;
                };
                let Some(a_inv) = a.inverse() else {
                    return false;
                };
                let identities = t.base().basis().iter().all(|r| {
                    let s = t.level_sigma_base(top, r);
                    let d = t.level_delta_base(top, r);
                    s == a.mul(r).mul(&a_inv) && a_inv.mul(&d) == v.mul(r).sub(&r.mul(v))
                });
                identities && *b == SkewPoly::constant(a.mul(v)) && *y == x.sub(b)
            }
        }
    }
}

/// Result of `erase_top`: `y` in the input tower and the tower `R_{n-1}[y; sigma]`.
#[derive(Clone, Debug)]
pub struct Erasure {
    pub y: SkewPoly,
    pub tower: OreTower,
    pub witness: ErasureWitness,
}

/// Erases the derivation of the top level.
pub fn erase_top(t: &OreTower, search_degree_bound: u32) -> Result<Erasure> {
    if t.height() == 0 {
        return Err(Error::HypothesisViolation("the tower has no levels".into()));
    }
    let report = validate_tower(t, 0);
    if let Some((level, fail)) = report.first_failure() {
        return Err(Error::HypothesisViolation(format!("tower fails validation at level {level}: {fail}")));
    }
    erase_top_at(t, search_degree_bound, t.height())
}

fn sigma_only(level: &TowerLevel) -> TowerLevel {
    TowerLevel {
        name: level.name.clone(),
        sigma_base: level.sigma_base.clone(),
        delta_base: BaseMap::Zero,
        sigma_vars: level.sigma_vars.clone(),
        delta_vars: vec![SkewPoly::zero(); level.delta_vars.len()],
        q: None,
    }
}

/// `erase_top` without the validation pass; `label` is the level reported in errors.
fn erase_top_at(t: &OreTower, bound: u32, label: usize) -> Result<Erasure> {
    let top = t.height() - 1;
    let level = t.level(top);
    if level.delta_is_trivial() {
        return Ok(Erasure { y: t.var(top), tower: t.clone(), witness: ErasureWitness::trivial(label) });
    }
    match &level.q {
        None => {
            return Err(Error::HypothesisViolation(format!("level {label}: the derivation is not declared q-skew")))
        }
        Some(q) if q.is_one() => return Err(Error::QEqualsOne { level: label }),
        Some(_) => {}
    }
    let mut levels = t.levels().to_vec();
    levels[top] = sigma_only(level);
    let reduced = t.with_levels(levels)?;
    if let Some((c, u)) = center_moving_candidate(t, bound) {
        let x = t.var(top);
        let dc = t.delta_nf(top, &c);
        let unit = u.as_constant().and_then(Matrix::inverse);
        let (y, b) = match unit {
            Some(inv) => {
                let b = dc.left_scale(&inv).neg();
                (x.sub(&b), Some(b))
            }
            None => (t.mul_nf(&u, &x).add(&dc), None),
        };
        let witness = ErasureWitness {
            level: label,
            branch: ErasureBranch::CenterMoving,
            c: Some(c),
            u: Some(u),
            a: None,
            v: None,
            b,
        };
        return Ok(Erasure { y, tower: reduced, witness });
    }
    let center_failure = format!("no central c of degree <= {bound} with sigma(c) - c central and regular");
    if t.height() != 1 || t.base().is_field() {
        return Err(Error::UnsupportedErasure { level: label, reason: center_failure });
    }
    let (a, v) = skolem_noether(t).map_err(|why| Error::UnsupportedErasure {
        level: label,
        reason: format!("{center_failure}; inner branch: {why}"),
    })?;
    let b = SkewPoly::constant(a.mul(&v));
    let y = t.var(top).sub(&b);
    let witness = ErasureWitness {
        level: label,
        branch: ErasureBranch::InnerSkolemNoether,
        c: None,
        u: None,
        a: Some(a),
        v: Some(v),
        b: Some(b),
    };
    Ok(Erasure { y, tower: reduced, witness })
}

/// Exponent vectors on `k` variables with total degree `d`.
fn compositions(k: usize, d: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in compositions(k - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Smallest `c = z * x^m` (degree first, then monomial order, then center basis
/// order) that is central below the top with `u = sigma(c) - c` central and regular.
fn center_moving_candidate(t: &OreTower, bound: u32) -> Option<(SkewPoly, SkewPoly)> {
    let top = t.height() - 1;
    let lower = t.prefix(top);
    let centers = t.base().center_basis();
    let central = |p: &SkewPoly| lower.is_central(p).map(|r| r.is_central()).unwrap_or(false);
    for d in 0..=bound {
        let mut monos: Vec<Monomial> = compositions(top, d).into_iter().map(Monomial::new).collect();
        monos.sort();
        for m in monos {
            for z in &centers {
                let c = SkewPoly::term(z.clone(), m.clone());
                let u = t.sigma_nf(top, &c).sub(&c);
                let regular = u.as_term().is_some_and(|(_, beta)| beta.inverse().is_some());
                if regular && central(&c) && central(&u) {
                    return Some((c, u));
                }
            }
        }
    }
    None
}

type LinearMap<'a> = Box<dyn Fn(&Matrix) -> Matrix + 'a>;

/// Linear map `X -> f(X)` on `m x m` matrices as an `m^2 x m^2` matrix acting on row-major vectors.
fn stacked_system(field: &Field, m: usize, maps: &[LinearMap<'_>]) -> Matrix {
    let n = m * m;
    let cols: Vec<Vec<Vec<Scalar>>> = (0..n)
        .map(|k| {
            let e = Matrix::unit(field, m, k / m, k % m);
            maps.iter().map(|f| f(&e).vec()).collect()
        })
        .collect();
    Matrix::from_fn(n * maps.len(), n, |row, col| cols[col][row / n][row % n].clone())
}

/// Solves `sigma(r) a = a r` and `a^-1 delta(r) = v r - r v` on the matrix units.
fn skolem_noether(t: &OreTower) -> std::result::Result<(Matrix, Matrix), String> {
    let field = t.field().clone();
    let m = t.base().size();
    let basis = t.base().basis();
    let sigma = |r: &Matrix| t.level_sigma_base(0, r);
    let delta = |r: &Matrix| t.level_delta_base(0, r);

    let conj: Vec<LinearMap<'static>> = basis
        .iter()
        .map(|r| {
            let s = sigma(r);
            let r = r.clone();
            Box::new(move |a: &Matrix| s.mul(a).sub(&a.mul(&r))) as LinearMap<'static>
        })
        .collect();
    let sys = stacked_system(&field, m, &conj);
    let zeros = vec![field.zero(); sys.rows()];
    let a = solve_linear_system(&sys, &zeros)
        .map(|s| Matrix::unvec(&s, m))
        .filter(|a| !a.is_zero())
        .ok_or("sigma(r) a = a r has no nonzero solution")?;
    let a_inv = a.inverse().ok_or("the conjugating solution is singular")?;
    if !a_inv.mul(&delta(&t.base().one())).is_zero() {
        return Err("a^-1 delta does not vanish on the center".into());
    }
    let comm: Vec<LinearMap<'static>> = basis
        .iter()
        .map(|r| {
            let r = r.clone();
            Box::new(move |v: &Matrix| v.mul(&r).sub(&r.mul(v))) as LinearMap<'static>
        })
        .collect();
    let sys = stacked_system(&field, m, &comm);
    let rhs: Vec<_> = basis.iter().flat_map(|r| a_inv.mul(&delta(r)).vec()).collect();
    let v = solve_linear_system(&sys, &rhs).ok_or("a^-1 delta is not an inner derivation")?;
    Ok((a, Matrix::unvec(&v, m)))
}

/// Tower with a level moved down, and what happened to the q-skew declaration.
#[derive(Clone, Debug)]
pub struct Swapped {
    pub tower: OreTower,
    pub q_preserved: bool,
    pub warnings: Vec<String>,
}

/// Moves the derivation-free level `i` (0-based, `i >= 1`) below level `i - 1`.
pub fn swap_adjacent(t: &OreTower, i: usize) -> Result<Swapped> {
    if i == 0 || i >= t.height() {
        return Err(Error::HypothesisViolation(format!("no adjacent pair ending at level {}", i + 1)));
    }
    let upper = t.level(i);
    let lower = t.level(i - 1);
    if !upper.delta_is_trivial() {
        return Err(Error::HypothesisViolation(format!(
            "level {} has a nonzero derivation and cannot move down",
            i + 1
        )));
    }
    let img = &upper.sigma_vars[i - 1];
    if !img.c.is_zero() {
        return Err(Error::NotDiagonal { level: i + 1, var: i });
    }
    let lambda = img.a.clone();
    let check = check_swap_compatibility(t, i, &lambda)?;
    if let Some(w) = &check.witness {
        return Err(Error::CompatibilityFailed {
            level: i + 1,
            witness: w.render(t),
            identity: check.identity.clone().unwrap_or_default(),
        });
    }
    let lambda_inv = lambda.inverse().expect("checked invertible");
    let mut warnings = Vec::new();

    let moved_down = TowerLevel {
        name: upper.name.clone(),
        sigma_base: upper.sigma_base.clone(),
        delta_base: BaseMap::Zero,
        sigma_vars: upper.sigma_vars[..i - 1].to_vec(),
        delta_vars: vec![SkewPoly::zero(); i - 1],
        q: upper.q.clone(),
    };
    let mut sigma_vars = lower.sigma_vars.clone();
    sigma_vars.push(VarImage { a: lambda_inv, c: SkewPoly::zero() });
    let mut delta_vars = lower.delta_vars.clone();
    delta_vars.push(SkewPoly::zero());
    let q = if check.q_preserved {
        lower.q.clone()
    } else {
        if lower.q.is_some() {
            warnings.push(format!(
                "level {} ({}): delta does not kill lambda, q-skew declaration dropped",
                i + 1,
                lower.name
            ));
        }
        None
    };
    let moved_up = TowerLevel {
        name: lower.name.clone(),
        sigma_base: lower.sigma_base.clone(),
        delta_base: lower.delta_base.clone(),
        sigma_vars,
        delta_vars,
        q,
    };

    let mut nt = t.prefix(i - 1);
    nt.push_level(moved_down)?;
    nt.push_level(moved_up)?;
    for k in i + 1..t.height() {
        let old = t.level(k);
        if old.sigma_vars[i].c.terms().any(|(m, _)| m.exponent(i - 1) > 0) {
            return Err(Error::HypothesisViolation(format!(
                "level {}: sigma({}) involves {}, which moves above it",
                k + 1,
                upper.name,
                lower.name
            )));
        }
        let tr = |p: &SkewPoly| transport(&nt, i, p);
        let mut sv = old.sigma_vars.clone();
        sv.swap(i - 1, i);
        let sigma_vars = sv.iter().map(|v| VarImage { a: v.a.clone(), c: tr(&v.c) }).collect();
        let mut dv = old.delta_vars.clone();
        dv.swap(i - 1, i);
        let delta_vars = dv.iter().map(tr).collect();
        nt.push_level(TowerLevel { sigma_vars, delta_vars, ..old.clone() })?;
    }
    Ok(Swapped { tower: nt, q_preserved: check.q_preserved, warnings })
}

/// Rewrites `p`, written with `x_{i-1}` below `x_i`, in the tower `nt` where
/// the two variables trade places.
fn transport(nt: &OreTower, i: usize, p: &SkewPoly) -> SkewPoly {
    let mut out = SkewPoly::zero();
    for (m, beta) in p.terms() {
        let (ex, ey) = (m.exponent(i - 1), m.exponent(i));
        if ex == 0 || ey == 0 {
            let mut e = m.exponents().to_vec();
            e.resize(e.len().max(i + 1), 0);
            e.swap(i - 1, i);
            out.add_term(Monomial::new(e), beta.clone());
            continue;
        }
        let prefix = SkewPoly::term(beta.clone(), m.below(i - 1));
        let xs = SkewPoly::term(nt.base().one(), Monomial::one().with_exponent(i, ex));
        let ys = SkewPoly::term(nt.base().one(), Monomial::one().with_exponent(i - 1, ey));
        let mut high = m.exponents().to_vec();
        high.iter_mut().take(i + 1).for_each(|e| *e = 0);
        let suffix = SkewPoly::term(nt.base().one(), Monomial::new(high));
        let term = nt.mul_nf(&nt.mul_nf(&nt.mul_nf(&prefix, &xs), &ys), &suffix);
        out = out.add(&term);
    }
    out
}

/// Outcome of the checks run by `erase_all`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Verification {
    pub relations_checked: usize,
    pub leading_checked: usize,
    pub tower_valid: bool,
    pub failures: Vec<String>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.tower_valid && self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct ErasureResult {
    /// `y_i` as elements of the input tower.
    pub y_elements: Vec<SkewPoly>,
    pub new_tower: OreTower,
    /// One witness per erased level, top level first.
    pub witnesses: Vec<ErasureWitness>,
    pub warnings: Vec<String>,
    pub verification: Verification,
}

/// Checks the hypotheses of the erasure theorem.
fn check_erasure_hypotheses(t: &OreTower) -> Result<()> {
    let report = validate_tower(t, 0);
    if let Some((level, fail)) = report.first_failure() {
        return Err(Error::HypothesisViolation(format!("tower fails validation at level {level}: {fail}")));
    }
    for (i, level) in t.levels().iter().enumerate() {
        for (j, img) in level.sigma_vars.iter().enumerate() {
            if !img.c.is_zero() {
                return Err(Error::NotDiagonal { level: i + 1, var: j + 1 });
            }
            let lam = &img.a;
            let name = format!("lambda_{}{}", i + 1, j + 1);
            if lam.as_scalar().is_none() || lam.inverse().is_none() {
                return Err(Error::HypothesisViolation(format!("{name} is not a central unit")));
            }
            for k in i..t.height() {
                if t.level_sigma_base(k, lam) != *lam {
                    return Err(Error::HypothesisViolation(format!("sigma_{} does not fix {name}", k + 1)));
                }
                if !t.level_delta_base(k, lam).is_zero() {
                    return Err(Error::HypothesisViolation(format!("delta_{} does not kill {name}", k + 1)));
                }
            }
        }
        if !level.delta_is_trivial() {
            match &level.q {
                None => {
                    return Err(Error::HypothesisViolation(format!(
                        "level {}: the derivation is not declared q-skew",
                        i + 1
                    )))
                }
                Some(q) if q.is_one() => return Err(Error::QEqualsOne { level: i + 1 }),
                Some(_) => {}
            }
        }
    }
    Ok(())
}

fn fresh_name(t: &OreTower, wanted: String, except: usize) -> String {
    let mut name = wanted;
    while t.levels().iter().enumerate().any(|(k, l)| k != except && l.name == name) {
        name.push('\'');
    }
    name
}

fn renamed(t: &OreTower, pos: usize, name: String) -> Result<OreTower> {
    let mut levels = t.levels().to_vec();
    levels[pos].name = name;
    t.with_levels(levels)
}

/// `lf_top(y^k) = u sigma(u) ... sigma^{k-1}(u) x_top^k` for `k <= degree`.
fn leading_form_failures(t: &OreTower, y: &SkewPoly, u: &SkewPoly, degree: u32, label: usize) -> (usize, Vec<String>) {
    let top = t.height() - 1;
    let mut failures = Vec::new();
    let mut power = t.one();
    let mut prod = t.one();
    let mut twisted = u.clone();
    for k in 1..=degree {
        power = t.mul_nf(&power, y);
        prod = t.mul_nf(&prod, &twisted);
        twisted = t.sigma_nf(top, &twisted);
        let (d, lead) = power.degree_leading(top);
        let want = prod.join_upper(top, &Monomial::one().with_exponent(top, k));
        if d != Degree::Finite(k) || lead != want || prod.is_zero() {
            failures.push(format!("level {label}: leading form of y^{k} is {}", t.render(&lead)));
        }
    }
    (degree as usize, failures)
}

/// Erases every derivation and returns `T_n` with the `y_i` written in `R_n`.
pub fn erase_all(t: &OreTower, search_degree_bound: u32, verify_degree: u32) -> Result<ErasureResult> {
    check_erasure_hypotheses(t)?;
    let n = t.height();
    let mut w = t.clone();
    // images[p]: the variable at position p of `w` as an element of `t`
    let mut images: Vec<SkewPoly> = (0..n).map(|j| t.var(j)).collect();
    // origin[p]: 0-based index in `t` of the variable at position p of `w`
    let mut origin: Vec<usize> = (0..n).collect();
    let mut witnesses = Vec::new();
    let mut warnings = Vec::new();
    let mut verification = Verification::default();

    for s in 0..n {
        let top = n - 1;
        let label = origin[top] + 1;
        let erasure = erase_top_at(&w, search_degree_bound, label)?;
        let u = erasure.witness.clearing_element(&w);
        let (count, fails) = leading_form_failures(&w, &erasure.y, &u, verify_degree, label);
        verification.leading_checked += count;
        verification.failures.extend(fails);
        let y = t.apply_ring_map_nf(&RingMap::substitution(images.clone()), &erasure.y);
        w = erasure.tower;
        if erasure.witness.branch != ErasureBranch::TrivialDelta {
            let name = fresh_name(&w, format!("y{label}"), top);
            w = renamed(&w, top, name)?;
        }
        images[top] = y;
        witnesses.push(erasure.witness);
        for pos in (s + 1..=top).rev() {
            let swapped = swap_adjacent(&w, pos).map_err(|e| relabel(e, origin[pos] + 1))?;
            warnings.extend(swapped.warnings);
            w = swapped.tower;
            images.swap(pos - 1, pos);
            origin.swap(pos - 1, pos);
        }
    }
    // the block now reads y_n, ..., y_1; bubble it into y_1, ..., y_n
    for pass in 0..n {
        for pos in 1..n - pass {
            if origin[pos - 1] > origin[pos] {
                let swapped = swap_adjacent(&w, pos).map_err(|e| relabel(e, origin[pos] + 1))?;
                warnings.extend(swapped.warnings);
                w = swapped.tower;
                images.swap(pos - 1, pos);
                origin.swap(pos - 1, pos);
            }
        }
    }

    verify_relations(t, &w, &images, &mut verification);
    verification.tower_valid = validate_tower(&w, 0).is_valid();
    if haynal_verdict(t, ORDER_BOUND).verdict != Verdict::PI {
        warnings.push("Haynal criteria fail: Q(T_n)≅Q(R_n) claim outside theorem scope".into());
    }
    Ok(ErasureResult { y_elements: images, new_tower: w, witnesses, warnings, verification })
}

fn relabel(e: Error, level: usize) -> Error {
    match e {
        Error::CompatibilityFailed { witness, identity, .. } => Error::CompatibilityFailed { level, witness, identity },
        Error::NotDiagonal { var, .. } => Error::NotDiagonal { level, var },
        other => other,
    }
}

/// `y_i r = tau_i(r) y_i` on the base basis and `y_i y_j = lambda_ij y_j y_i`, multiplied out in `t`.
fn verify_relations(t: &OreTower, tn: &OreTower, ys: &[SkewPoly], out: &mut Verification) {
    let names = t.names();
    for (i, yi) in ys.iter().enumerate() {
        for r in t.base().basis() {
            let lhs = t.mul_nf(yi, &SkewPoly::constant(r.clone()));
            let rhs = t.mul_nf(&SkewPoly::constant(tn.level_sigma_base(i, &r)), yi);
            out.relations_checked += 1;
            if lhs != rhs {
                out.failures.push(format!(
                    "y{} r = tau(r) y{} fails for r = {}",
                    i + 1,
                    i + 1,
                    t.render(&SkewPoly::constant(r))
                ));
            }
        }
        for (j, yj) in ys.iter().enumerate().take(i) {
            let lambda = &t.level(i).sigma_vars[j].a;
            let img = &tn.level(i).sigma_vars[j];
            out.relations_checked += 1;
            if img.a != *lambda || !img.c.is_zero() {
                out.failures.push(format!(
                    "tau_{}({}) is not lambda_{}{} times it",
                    i + 1,
                    tn.var_name(j),
                    i + 1,
                    j + 1
                ));
            }
            let lhs = t.mul_nf(yi, yj);
            let rhs = t.mul_nf(&t.mul_nf(&SkewPoly::constant(lambda.clone()), yj), yi);
            if lhs != rhs {
                out.failures.push(format!(
                    "y{} y{} = lambda y{} y{} fails: {} != {}",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1,
                    lhs.render(&names),
                    rhs.render(&names)
                ));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn quantum_weyl_center_moving() {
        let t = presets::quantum_weyl_generic().unwrap();
        let q = t.field().generator().unwrap();
        let e = erase_top(&t, 4).unwrap();
        assert_eq!(e.witness.branch, ErasureBranch::CenterMoving);
        assert_eq!(e.witness.c, Some(t.var(0)));
        let qm1 = t.base().scalar(&(&q - &Scalar::integer(1)));
        assert_eq!(e.witness.u, Some(t.var(0).left_scale(&qm1)));
        let want = t.monomial(qm1, &[1, 1]).add(&t.one());
        assert_eq!(e.y, want);
        let lhs = t.mul(&e.y, &t.var(0)).unwrap();
        let rhs = t.mul(&t.var(0).left_scale(&t.base().scalar(&q)), &e.y).unwrap();
        assert_eq!(lhs, rhs);
        assert!(e.witness.recheck(&t, &e.y));
    }

    #[test]
    fn inner_matrix_skolem_noether() {
        let t = presets::inner_matrix().unwrap();
        let e = erase_top(&t, 4).unwrap();
        assert_eq!(e.witness.branch, ErasureBranch::InnerSkolemNoether);
        let e12 = Matrix::unit(t.field(), 2, 0, 1);
        assert_eq!(e.y, t.var(0).sub(&SkewPoly::constant(e12)));
        for r in t.base().basis() {
            let rp = SkewPoly::constant(r.clone());
            let s = SkewPoly::constant(t.level_sigma_base(0, &r));
            assert_eq!(t.mul(&e.y, &rp).unwrap(), t.mul(&s, &e.y).unwrap());
        }
        assert!(e.witness.recheck(&t, &e.y));
    }

    #[test]
    fn cyclotomic_five_uncleared() {
        let t = presets::cyclotomic_five().unwrap();
        let e = erase_top(&t, 4).unwrap();
        let z = t.field().generator().unwrap();
        assert_eq!(e.witness.c, Some(t.scalar(&z)));
        let shift = presets::cyclotomic_five_shift();
        assert_eq!(e.y, t.var(0).add(&t.scalar(&shift)));
        let lhs = t.mul(&e.y, &t.scalar(&z)).unwrap();
        let rhs = t.mul(&t.scalar(&(&z * &z)), &e.y).unwrap();
        assert_eq!(lhs, rhs);
        assert!(e.witness.recheck(&t, &e.y));
    }

    #[test]
    fn trivial_delta_is_a_fixed_point() {
        let t = presets::quantum_plane(Field::Rational, Scalar::integer(2)).unwrap();
        let e = erase_top(&t, 4).unwrap();
        assert_eq!(e.witness.branch, ErasureBranch::TrivialDelta);
        assert_eq!(e.y, t.var(1));
        assert_eq!(e.tower, t);
        let again = erase_top(&e.tower, 4).unwrap();
        assert_eq!(again.tower, e.tower);
    }

    #[test]
    fn q_equal_to_one_is_rejected() {
        let t = presets::quantum_weyl(Field::Rational, Scalar::integer(1)).unwrap();
        assert_eq!(erase_top(&t, 4).unwrap_err(), Error::QEqualsOne { level: 2 });
    }

    #[test]
    fn swap_quantum_plane() {
        let t = presets::quantum_plane(Field::Rational, Scalar::integer(2)).unwrap();
        let s = swap_adjacent(&t, 1).unwrap();
        let half = s.tower.base().scalar(&Scalar::ratio(1, 2).unwrap());
        assert_eq!(s.tower.level(1).sigma_vars[0].a, half);
        assert_eq!(s.tower.names(), vec!["x2".to_string(), "x1".to_string()]);
        // x2 x1 = 2 x1 x2 with x2 now first
        let x2 = s.tower.var(0);
        let x1 = s.tower.var(1);
        let lhs = s.tower.mul(&x2, &x1).unwrap();
        let rhs = s.tower.mul(&x1, &x2).unwrap().left_scale(&s.tower.base().scalar(&Scalar::integer(2)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn swap_rejects_non_diagonal() {
        let mut t = presets::quantum_plane(Field::Rational, Scalar::integer(2)).unwrap();
        let mut levels = t.levels().to_vec();
        levels[1].sigma_vars[0].c = t.one();
        t = t.with_levels(levels).unwrap();
        assert_eq!(swap_adjacent(&t, 1).unwrap_err(), Error::NotDiagonal { level: 2, var: 1 });
    }

    #[test]
    fn full_erasure_at_cube_root() {
        let f = Field::Cyclotomic(3);
        let z = f.generator().unwrap();
        let t = presets::quantum_weyl(f, z.clone()).unwrap();
        let r = erase_all(&t, 4, 4).unwrap();
        assert!(r.verification.passed(), "{:?}", r.verification);
        assert_eq!(r.y_elements[0], t.var(0));
        let zm1 = t.base().scalar(&(&z - &Scalar::integer(1)));
        assert_eq!(r.y_elements[1], t.monomial(zm1, &[1, 1]).add(&t.one()));
        assert_eq!(r.new_tower.level(1).sigma_vars[0].a, t.base().scalar(&z));
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn full_erasure_generic_q_warns() {
        let t = presets::quantum_weyl_generic().unwrap();
        let r = erase_all(&t, 4, 3).unwrap();
        assert!(r.verification.passed());
        assert!(r.warnings.iter().any(|w| w.starts_with("Haynal criteria fail")));
    }

    #[test]
    fn full_erasure_without_derivations() {
        let t = presets::quantum_plane(Field::Rational, Scalar::integer(2)).unwrap();
        let r = erase_all(&t, 4, 2).unwrap();
        assert_eq!(r.y_elements, vec![t.var(0), t.var(1)]);
        assert_eq!(r.new_tower, t);
    }
    fn generic_q() -> (Field, Scalar) {
        let f = Field::function(Field::Rational, "q").unwrap();
        let q = f.generator().unwrap();
        (f, q)
    }

    /// Quantum Weyl over `Q(q)` with a third level `sigma(x1) = q^-1 x1`, `sigma(x2) = q x2`.
    fn weyl_with_sigma_level() -> OreTower {
        let (f, q) = generic_q();
        let t = presets::quantum_weyl(f, q.clone()).unwrap();
        let base = t.base().clone();
        let mut top = TowerLevel::plain("x3", &base, 2);
        top.sigma_vars[0].a = base.scalar(&q.inv().unwrap());
        top.sigma_vars[1].a = base.scalar(&q);
        let mut levels = t.levels().to_vec();
        levels.push(top);
        OreTower::from_levels(base, levels).unwrap()
    }

    #[test]
    fn swap_sigma_level_below_weyl_level() {
        let t = weyl_with_sigma_level();
        let (_, q) = generic_q();
        let s = swap_adjacent(&t, 2).unwrap();
        assert!(s.q_preserved);
        let nt = &s.tower;
        assert!(validate_tower(nt, 8).is_valid());
        assert_eq!(nt.names(), vec!["x1".to_string(), "x3".to_string(), "x2".to_string()]);
        assert_eq!(nt.level(2).q, Some(q.clone()));
        let (x1, x3, x2) = (nt.var(0), nt.var(1), nt.var(2));
        let qs = |p: &SkewPoly, s: &Scalar| p.left_scale(&nt.base().scalar(s));
        let weyl = qs(&nt.mul(&x1, &x2).unwrap(), &q).add(&nt.one());
        assert_eq!(nt.mul(&x2, &x1).unwrap(), weyl);
        assert_eq!(nt.mul(&x3, &x2).unwrap(), qs(&nt.mul(&x2, &x3).unwrap(), &q));
        assert_eq!(nt.mul(&x3, &x1).unwrap(), qs(&nt.mul(&x1, &x3).unwrap(), &q.inv().unwrap()));
    }

    #[test]
    fn transport_reorders_mixed_monomials() {
        let t = presets::quantum_plane(Field::Rational, Scalar::integer(2)).unwrap();
        let nt = swap_adjacent(&t, 1).unwrap().tower;
        // x1 x2 in the old order is x1 * x2 = (1/2) x2 x1 once x2 sits below
        let half = nt.base().scalar(&Scalar::ratio(1, 2).unwrap());
        assert_eq!(transport(&nt, 1, &t.monomial(t.base().one(), &[1, 1])), nt.monomial(half, &[1, 1]));
    }

    #[test]
    fn weyl_tensor_polynomial_erasure() {
        let (f, q) = generic_q();
        let base = crate::tower::BaseRing::Field(f);
        let mut top = TowerLevel::plain("x3", &base, 2);
        top.sigma_vars[0].a = base.scalar(&q);
        top.delta_vars[0] = SkewPoly::constant(base.one());
        top.q = Some(q.clone());
        let levels = vec![TowerLevel::plain("x1", &base, 0), TowerLevel::plain("x2", &base, 1), top];
        let t = OreTower::from_levels(base.clone(), levels).unwrap();
        let r = erase_all(&t, 4, 3).unwrap();
        assert!(r.verification.passed(), "{:?}", r.verification);
        let qm1 = base.scalar(&(&q - &Scalar::integer(1)));
        assert_eq!(r.y_elements[2], t.monomial(qm1, &[1, 0, 1]).add(&t.one()));
        assert_eq!(r.new_tower.names(), vec!["x1".to_string(), "x2".to_string(), "y3".to_string()]);
    }

    #[test]
    fn quantum_matrices_fall_outside_the_center_search() {
        let t = presets::quantum_matrices().unwrap();
        assert!(validate_tower(&t, 4).is_valid());
        let err = erase_all(&t, 2, 2).unwrap_err();
        assert!(matches!(err, Error::UnsupportedErasure { level: 4, .. }), "{err}");
        let s = swap_adjacent(&t, 2).unwrap();
        assert!(validate_tower(&s.tower, 4).is_valid());
    }
}
