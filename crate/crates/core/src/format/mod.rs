//! Tower files: a TOML document with a `[base]` table and one `[[level]]`
//! table per variable, lowest first. Values are strings in the expression
//! syntax of [`expr`], evaluated in the tower built so far.
//!
//! ```toml
//! [base]
//! field = "cyclotomic(3)"
//!
//! [[level]]
//! var = "x1"
//!
//! [[level]]
//! var = "x2"
//! sigma_vars = [{ var = "x1", a = "z" }]
//! delta_vars = [{ var = "x1", value = "1" }]
//! q = "z"
//! ```

mod expr;

use std::fmt::Write as _;
use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::matrix::{coefficient_string, Matrix};
use crate::scalar::{Field, Scalar};
use crate::skewpoly::SkewPoly;
use crate::tower::{BaseMap, BaseRing, OreTower, TowerLevel};
use expr::{Expr, Kind, CALLS};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRepr {
    base: Spanned<BaseRepr>,
    #[serde(default, rename = "level")]
    levels: Vec<Spanned<LevelRepr>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseRepr {
    field: Spanned<String>,
    kind: Option<Spanned<String>>,
    size: Option<Spanned<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelRepr {
    var: Spanned<String>,
    sigma_base: Option<Spanned<String>>,
    delta_base: Option<Spanned<String>>,
    q: Option<Spanned<String>>,
    #[serde(default)]
    sigma_vars: Vec<SigmaVarRepr>,
    #[serde(default)]
    delta_vars: Vec<DeltaVarRepr>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SigmaVarRepr {
    var: Spanned<String>,
    a: Option<Spanned<String>>,
    c: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaVarRepr {
    var: Spanned<String>,
    value: Spanned<String>,
}

fn line_col(src: &str, byte: usize) -> (usize, usize) {
    let byte = byte.min(src.len());
    let before = &src[..byte];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn parse_error(src: &str, byte: usize, message: impl Into<String>) -> Error {
    let (line, column) = line_col(src, byte);
    Error::Parse { line, column, message: message.into() }
}

/// Parses a field header: `Q`, `gf(p)`, `cyclotomic(n)`, optionally followed by `(t)`.
pub fn parse_field(s: &str) -> std::result::Result<Field, String> {
    let s = s.trim();
    if let Some(open) = s.rfind('(') {
        let inner = &s[open + 1..s.len().saturating_sub(1)];
        let is_var = s.ends_with(')')
            && inner.chars().next().is_some_and(char::is_alphabetic)
            && inner.chars().all(|c| c.is_alphanumeric() || c == '_');
        if is_var {
            let k = parse_field(&s[..open])?;
            return Field::function(k, inner).map_err(|e| e.to_string());
        }
    }
    let arg = |prefix: &str| -> Option<std::result::Result<u64, String>> {
        let rest = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
        Some(rest.trim().parse::<u64>().map_err(|_| format!("`{rest}` is not a positive integer")))
    };
    if s == "Q" {
        return Ok(Field::Rational);
    }
    if let Some(p) = arg("gf") {
        return Field::prime(p?).map_err(|e| e.to_string());
    }
    if let Some(n) = arg("cyclotomic") {
        let n = u32::try_from(n?).map_err(|_| "cyclotomic order out of range".to_string())?;
        return Field::cyclotomic(n).map_err(|e| e.to_string());
    }
    Err(format!("unknown field `{s}` (expected Q, gf(p), cyclotomic(n), optionally followed by (t))"))
}

/// Named generators of a field: `z` for cyclotomic fields, the indeterminate of a function field.
fn generator_names(field: &Field) -> Vec<(String, Scalar)> {
    let mut out = Vec::new();
    match field {
        Field::Cyclotomic(_) => out.push(("z".to_string(), field.generator().expect("cyclotomic generator"))),
        Field::Function(ff) => {
            if let Field::Cyclotomic(_) = ff.inner {
                let z = ff.inner.generator().expect("cyclotomic generator");
                out.push(("z".to_string(), field.embed(&z).expect("subfield")));
            }
            out.push((ff.var.clone(), field.generator().expect("function field generator")));
        }
        _ => {}
    }
    out
}

/// Evaluation context for one string value of the file.
struct Scope<'a> {
    src: &'a str,
    /// Byte offset of the first character inside the quotes.
    offset: usize,
    tower: &'a OreTower,
    generators: &'a [(String, Scalar)],
}

impl Scope<'_> {
    fn at(&self, pos: usize, message: impl Into<String>) -> Error {
        parse_error(self.src, self.offset + pos, message)
    }

    fn parse(&self, text: &str) -> Result<Expr> {
        expr::parse(text).map_err(|e| self.at(e.pos, e.message))
    }

    fn poly(&self, e: &Expr) -> Result<SkewPoly> {
        let t = self.tower;
        let field = t.field();
        Ok(match &e.kind {
            Kind::Int(n) => t.scalar(&field.from_i64(*n)),
            Kind::Name(name) => {
                if let Some((_, g)) = self.generators.iter().find(|(n, _)| n == name) {
                    t.scalar(g)
                } else if let Some(j) = t.names().iter().position(|n| n == name) {
                    t.var(j)
                } else {
                    let (line, column) = line_col(self.src, self.offset + e.pos);
                    return Err(Error::UnknownVariableReference { name: name.clone(), line, column });
                }
            }
            Kind::Neg(a) => self.poly(a)?.neg(),
            Kind::Add(a, b) => self.poly(a)?.add(&self.poly(b)?),
            Kind::Sub(a, b) => self.poly(a)?.sub(&self.poly(b)?),
            Kind::Mul(a, b) => t.mul(&self.poly(a)?, &self.poly(b)?)?,
            Kind::Div(a, b) => {
                let inv = self.unit(b)?;
                t.mul(&self.poly(a)?, &SkewPoly::constant(inv))?
            }
            Kind::Pow(a, k) if *k < 0 => {
                let inv = self.unit(a)?;
                t.pow(&SkewPoly::constant(inv), k.unsigned_abs() as u32)?
            }
            Kind::Pow(a, k) => {
                let k = u32::try_from(*k).map_err(|_| self.at(e.pos, "exponent out of range"))?;
                t.pow(&self.poly(a)?, k)?
            }
            Kind::Matrix(_) => {
                let m = self.matrix(e)?;
                let b = t.base().coerce(&m).map_err(|err| self.at(e.pos, err.to_string()))?;
                SkewPoly::constant(b)
            }
            Kind::Call(f, _) => return Err(self.at(e.pos, format!("`{f}(...)` is only allowed as a base map"))),
        })
    }

    fn constant(&self, e: &Expr) -> Result<Matrix> {
        let p = self.poly(e)?;
        if p.is_zero() {
            return Ok(self.tower.base().zero());
        }
        p.as_constant().cloned().ok_or_else(|| self.at(e.pos, "expected a constant"))
    }

    fn unit(&self, e: &Expr) -> Result<Matrix> {
        self.constant(e)?.inverse().ok_or_else(|| self.at(e.pos, "division by a non-invertible constant"))
    }

    fn scalar(&self, e: &Expr) -> Result<Scalar> {
        self.constant(e)?.as_scalar().ok_or_else(|| self.at(e.pos, "expected a scalar"))
    }

    /// A matrix literal, or a scalar read as a `1 x 1` matrix.
    fn matrix(&self, e: &Expr) -> Result<Matrix> {
        let Kind::Matrix(rows) = &e.kind else {
            let s = self.scalar(e)?;
            return Ok(Matrix::scalar(self.tower.field(), 1, s));
        };
        let entries = rows
            .iter()
            .map(|row| row.iter().map(|x| self.scalar(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(entries).map_err(|err| self.at(e.pos, err.to_string()))
    }

    fn base_map(&self, e: &Expr, sigma: Option<&BaseMap>) -> Result<BaseMap> {
        match &e.kind {
            Kind::Name(n) if n == "id" => Ok(BaseMap::Identity),
            Kind::Int(0) => Ok(BaseMap::Zero),
            Kind::Call(f, arg) => {
                let wrap = |err: Error| self.at(e.pos, err.to_string());
                match (f.as_str(), sigma) {
                    ("gen", _) => Ok(BaseMap::Generator(self.scalar(arg)?)),
                    ("linear", _) => Ok(BaseMap::Linear(self.matrix(arg)?)),
                    ("conj", None) => BaseMap::conjugation(&self.matrix(arg)?).map_err(wrap),
                    ("inner", Some(s)) => BaseMap::inner_derivation(s, &self.matrix(arg)?).map_err(wrap),
                    _ => Err(self.at(e.pos, format!("`{f}(...)` is not allowed here"))),
                }
            }
            _ => {
                let allowed =
                    if sigma.is_none() { "id, gen(w), conj(M), linear(L)" } else { "0, gen(d), inner(b), linear(L)" };
                Err(self.at(e.pos, format!("expected a base map: {allowed}")))
            }
        }
    }
}

fn check_name(src: &str, name: &Spanned<String>, generators: &[(String, Scalar)], taken: &[String]) -> Result<()> {
    let n = name.get_ref();
    let at = |msg: String| parse_error(src, name.span().start + 1, msg);
    let valid = n.chars().next().is_some_and(char::is_alphabetic)
        && n.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
    if !valid {
        return Err(at(format!("`{n}` is not a valid variable name")));
    }
    if n == "id" || CALLS.contains(&n.as_str()) || generators.iter().any(|(g, _)| g == n) {
        return Err(at(format!("`{n}` is reserved")));
    }
    if taken.contains(n) {
        return Err(at(format!("variable `{n}` is declared twice")));
    }
    Ok(())
}

/// Parses a tower file. The result is unvalidated.
pub fn parse_tower_file(src: &str) -> Result<OreTower> {
    let file: FileRepr = toml::from_str(src).map_err(|e| {
        let byte = e.span().map_or(0, |r: Range<usize>| r.start);
        parse_error(src, byte, e.message().trim().to_string())
    })?;
    let base_repr = file.base.get_ref();
    let field = parse_field(base_repr.field.get_ref())
        .map_err(|msg| parse_error(src, base_repr.field.span().start + 1, msg))?;
    let kind = base_repr.kind.as_ref().map_or("field", |k| k.get_ref().as_str());
    let base = match (kind, &base_repr.size) {
        ("field", None) => BaseRing::Field(field.clone()),
        ("matrix", Some(size)) if *size.get_ref() > 0 => {
            BaseRing::Matrix { field: field.clone(), size: *size.get_ref() }
        }
        ("matrix", _) => return Err(parse_error(src, file.base.span().start, "a matrix base needs a positive `size`")),
        ("field", Some(size)) => {
            return Err(parse_error(src, size.span().start, "`size` is only allowed for kind = \"matrix\""))
        }
        (other, _) => {
            let span = base_repr.kind.as_ref().map_or(0, |k| k.span().start + 1);
            return Err(parse_error(src, span, format!("unknown base kind `{other}` (expected field or matrix)")));
        }
    };
    let generators = generator_names(&field);
    let all_vars: Vec<String> = file.levels.iter().map(|l| l.get_ref().var.get_ref().clone()).collect();
    let mut tower = OreTower::new(base.clone());
    for (index, spanned) in file.levels.iter().enumerate() {
        let level = spanned.get_ref();
        check_name(src, &level.var, &generators, &all_vars[..index])?;
        let scope_for = |value: &Spanned<String>| Scope {
            src,
            offset: value.span().start + 1,
            tower: &tower,
            generators: &generators,
        };
        let eval = |value: &Spanned<String>| -> Result<(Scope<'_>, Expr)> {
            let scope = scope_for(value);
            let e = scope.parse(value.get_ref())?;
            Ok((scope, e))
        };
        let mut out = TowerLevel::plain(level.var.get_ref().clone(), &base, index);
        if let Some(v) = &level.sigma_base {
            let (scope, e) = eval(v)?;
            out.sigma_base = scope.base_map(&e, None)?;
        }
        if let Some(v) = &level.delta_base {
            let (scope, e) = eval(v)?;
            out.delta_base = scope.base_map(&e, Some(&out.sigma_base))?;
        }
        if let Some(v) = &level.q {
            let (scope, e) = eval(v)?;
            out.q = Some(scope.scalar(&e)?);
        }
        let lower_var = |name: &Spanned<String>, seen: &mut Vec<usize>| -> Result<usize> {
            let (line, column) = line_col(src, name.span().start + 1);
            let j = all_vars[..index]
                .iter()
                .position(|n| n == name.get_ref())
                .ok_or_else(|| Error::UnknownVariableReference { name: name.get_ref().clone(), line, column })?;
            if seen.contains(&j) {
                return Err(Error::Parse { line, column, message: format!("`{}` is listed twice", name.get_ref()) });
            }
            seen.push(j);
            Ok(j)
        };
        let mut seen = Vec::new();
        for entry in &level.sigma_vars {
            let j = lower_var(&entry.var, &mut seen)?;
            if let Some(a) = &entry.a {
                let (scope, e) = eval(a)?;
                out.sigma_vars[j].a = scope.constant(&e)?;
            }
            if let Some(c) = &entry.c {
                let (scope, e) = eval(c)?;
                out.sigma_vars[j].c = scope.poly(&e)?;
            }
        }
        let mut seen = Vec::new();
        for entry in &level.delta_vars {
            let j = lower_var(&entry.var, &mut seen)?;
            let (scope, e) = eval(&entry.value)?;
            out.delta_vars[j] = scope.poly(&e)?;
        }
        let at = spanned.span().start;
        tower.push_level(out).map_err(|err| match err {
            Error::HypothesisViolation(msg) => parse_error(src, at, msg),
            other => other,
        })?;
    }
    Ok(tower)
}

/// Parses an element of `t` written in the expression syntax, e.g. `2 * x1 x2 - z`.
pub fn parse_element(t: &OreTower, text: &str) -> Result<SkewPoly> {
    let generators = generator_names(t.field());
    let scope = Scope { src: text, offset: 0, tower: t, generators: &generators };
    let e = scope.parse(text)?;
    scope.poly(&e)
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn render_base_map(map: &BaseMap) -> String {
    match map {
        BaseMap::Identity => "id".into(),
        BaseMap::Zero => "0".into(),
        BaseMap::Generator(w) => format!("gen({w})"),
        BaseMap::Linear(l) => format!("linear({l})"),
    }
}

/// Writes `t` in the tower-file format; `parse_tower_file` reads it back to an equal tower.
pub fn render_tower_file(t: &OreTower) -> String {
    let mut out = String::new();
    let names = t.names();
    out.push_str("[base]\n");
    let _ = writeln!(out, "field = {}", quote(&t.field().to_string()));
    if let BaseRing::Matrix { size, .. } = t.base() {
        let _ = writeln!(out, "kind = \"matrix\"\nsize = {size}");
    }
    for level in t.levels() {
        let _ = writeln!(out, "\n[[level]]\nvar = {}", quote(&level.name));
        if level.sigma_base != BaseMap::Identity {
            let _ = writeln!(out, "sigma_base = {}", quote(&render_base_map(&level.sigma_base)));
        }
        if !level.delta_is_zero() {
            let _ = writeln!(out, "delta_base = {}", quote(&render_base_map(&level.delta_base)));
        }
        if let Some(q) = &level.q {
            let _ = writeln!(out, "q = {}", quote(&q.to_string()));
        }
        let one = t.base().one();
        let sigma: Vec<String> = level
            .sigma_vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.a != one || !v.c.is_zero())
            .map(|(j, v)| {
                let mut s = format!("{{ var = {}", quote(&names[j]));
                if v.a != one {
                    let _ = write!(s, ", a = {}", quote(&coefficient_string(&v.a)));
                }
                if !v.c.is_zero() {
                    let _ = write!(s, ", c = {}", quote(&v.c.render(&names)));
                }
                s + " }"
            })
            .collect();
        if !sigma.is_empty() {
            let _ = writeln!(out, "sigma_vars = [\n  {},\n]", sigma.join(",\n  "));
        }
        let delta: Vec<String> = level
            .delta_vars
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(j, d)| format!("{{ var = {}, value = {} }}", quote(&names[j]), quote(&d.render(&names))))
            .collect();
        if !delta.is_empty() {
            let _ = writeln!(out, "delta_vars = [\n  {},\n]", delta.join(",\n  "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    const QPLANE: &str = r#"
[base]
field = "cyclotomic(3)"

[[level]]
var = "x1"

[[level]]
var = "x2"
sigma_vars = [{ var = "x1", a = "z" }]
"#;

    #[test]
    fn quantum_plane_file() {
        let t = parse_tower_file(QPLANE).unwrap();
        let z = Field::Cyclotomic(3).generator().unwrap();
        assert_eq!(t, presets::quantum_plane(Field::Cyclotomic(3), z).unwrap());
    }

    #[test]
    fn matrix_base_file() {
        let src = "[base]\nfield = \"Q\"\nkind = \"matrix\"\nsize = 2\n\n[[level]]\nvar = \"x\"\n\
                   sigma_base = \"conj([[1, 0], [0, 2]])\"\ndelta_base = \"inner([[0, 1], [0, 0]])\"\n";
        let t = parse_tower_file(src).unwrap();
        assert_eq!(t.base().to_string(), "Mat_2(Q)");
        assert!(matches!(t.level(0).delta_base, BaseMap::Linear(_)));
    }

    #[test]
    fn unknown_variable_is_located() {
        let src = QPLANE.replace("var = \"x1\", a", "var = \"x3\", a");
        let err = parse_tower_file(&src).unwrap_err();
        assert_eq!(err, Error::UnknownVariableReference { name: "x3".into(), line: 10, column: 24 });
        let src = QPLANE.replace("a = \"z\"", "a = \"z\", c = \"x2\"");
        assert!(matches!(parse_tower_file(&src), Err(Error::UnknownVariableReference { .. })));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let src = QPLANE.replace("var = \"x2\"", "var = \"x2\"\ncolour = \"red\"");
        let err = parse_tower_file(&src).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 10, .. }), "{err:?}");
    }

    #[test]
    fn expression_errors_point_inside_strings() {
        let src = QPLANE.replace("a = \"z\"", "a = \"z +\"");
        let err = parse_tower_file(&src).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 10, column: 37, .. }), "{err:?}");
    }

    #[test]
    fn elements_parse_in_context() {
        let t = parse_tower_file(QPLANE).unwrap();
        let p = parse_element(&t, "x2 x1").unwrap();
        assert_eq!(p, t.monomial(t.base().scalar(&Field::Cyclotomic(3).generator().unwrap()), &[1, 1]));
        assert_eq!(parse_element(&t, "(z-1) * x1 x2 + 1").unwrap().render(&t.names()), "(z-1) * x1 x2 + 1");
        assert!(matches!(parse_element(&t, "x3"), Err(Error::UnknownVariableReference { column: 1, .. })));
    }

    #[test]
    fn field_headers() {
        assert_eq!(parse_field("Q").unwrap(), Field::Rational);
        assert_eq!(parse_field("gf(7)").unwrap(), Field::Prime(7));
        assert_eq!(parse_field("cyclotomic(5)(t)").unwrap().to_string(), "cyclotomic(5)(t)");
        assert!(parse_field("gf(8)").is_err());
        assert!(parse_field("R").is_err());
    }

    #[test]
    fn presets_round_trip() {
        let towers = [
            presets::quantum_weyl_generic().unwrap(),
            presets::inner_matrix().unwrap(),
            presets::cyclotomic_five().unwrap(),
            presets::graded_three().unwrap(),
            presets::quantum_matrices().unwrap(),
            presets::weyl(Field::prime(5).unwrap()).unwrap(),
        ];
        for t in towers {
            let text = render_tower_file(&t);
            let back = parse_tower_file(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(back, t, "{text}");
        }
    }
}
