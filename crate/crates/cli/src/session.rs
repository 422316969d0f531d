//! Sessions: a coefficient field, named operators and a designated basis.

use std::sync::Arc;

use num_rational::BigRational;
use spectral_core::ratfunc::RatFunc;
use spectral_core::{
    DiffField, DiffOperator, FieldElement, FieldKind, GoodearlBasis, OdoError, SpectralPolynomial,
};
use thiserror::Error;

use crate::parse::{tokenize, Algebra, Expr, ParseError, Parser, Pos};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{line}:{col}: {msg}")]
    Math { line: usize, col: usize, msg: String },
    #[error("invalid basis: {0}")]
    Basis(#[from] OdoError),
}

impl SessionError {
    fn math(pos: Pos, msg: impl Into<String>) -> Self {
        SessionError::Math {
            line: pos.line,
            col: pos.col,
            msg: msg.into(),
        }
    }

    /// 2 for malformed input, 3 for mathematically invalid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            SessionError::Parse(_) => 2,
            SessionError::Math { .. } | SessionError::Basis(_) => 3,
        }
    }
}

const SUGAR: [&str; 3] = ["cosh", "sinh", "sech"];

fn is_mu_name(name: &str) -> bool {
    name.strip_prefix("mu")
        .is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}

fn is_reserved(name: &str) -> bool {
    matches!(
        name,
        "D" | "l" | "x" | "E" | "wp" | "wpd" | "field" | "basis" | "invariants"
    ) || SUGAR.contains(&name)
        || is_mu_name(name)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldDecl {
    pub kind: FieldKind,
    pub params: Vec<String>,
    /// Explicit `invariants(g2, g3)`, as rational functions of the
    /// parameters.
    pub invariants: Option<(RatFunc, RatFunc)>,
}

impl FieldDecl {
    pub fn render(&self) -> String {
        let kind = match self.kind {
            FieldKind::Constants => "constants",
            FieldKind::Exponential => "exponential",
            FieldKind::Elliptic => "elliptic",
        };
        let mut out = format!("field {kind}");
        if !self.params.is_empty() {
            out.push_str(&format!("({})", self.params.join(", ")));
        }
        if let Some((g2, g3)) = &self.invariants {
            out.push_str(&format!(
                " invariants({}, {})",
                g2.render(&self.params),
                g3.render(&self.params)
            ));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Binding {
    pub name: String,
    pub expr: Expr,
    pub value: DiffOperator,
}

#[derive(Clone, Debug)]
pub struct Session {
    pub decl: FieldDecl,
    pub field: Arc<DiffField>,
    pub bindings: Vec<Binding>,
    pub l_name: String,
    pub basis_names: Vec<String>,
}

/// The field symbols every expression may use: parameters, `E`, `wp`,
/// `wpd`.
fn scalar_symbol(field: &Arc<DiffField>, name: &str) -> Option<FieldElement> {
    if let Some(i) = field.params().iter().position(|p| p == name) {
        return Some(field.param(i));
    }
    match (field.kind(), name) {
        (FieldKind::Exponential, "E") | (FieldKind::Elliptic, "wp") => field.generator(),
        (FieldKind::Elliptic, "wpd") => field.wpd(),
        _ => None,
    }
}

/// `cosh(x)`, `sinh(x)`, `sech(x)` written in `E = eˣ`.
fn sugar(field: &Arc<DiffField>, name: &str, arg: &Expr, pos: Pos) -> Result<FieldElement, SessionError> {
    if !SUGAR.contains(&name) {
        return Err(ParseError::unknown(pos, name).into());
    }
    if field.kind() != FieldKind::Exponential {
        return Err(ParseError::SugarOutsideField {
            line: pos.line,
            col: pos.col,
            name: name.to_string(),
        }
        .into());
    }
    if !matches!(arg, Expr::Var(v, _) if v == "x") {
        return Err(ParseError::syntax(pos, format!("`{name}` takes the argument `x`")).into());
    }
    let (ch, sh) = spectral_core::catalog::hyperbolic(field);
    Ok(match name {
        "cosh" => ch,
        "sinh" => sh,
        _ => ch.invert().expect("cosh is nonzero"),
    })
}

/// Evaluates expressions to operators; `D` is `∂` and products are taken
/// left to right in `K[∂]`.
pub struct OperatorAlgebra<'a> {
    pub field: &'a Arc<DiffField>,
    pub bindings: &'a [Binding],
}

impl Algebra for OperatorAlgebra<'_> {
    type Value = DiffOperator;
    type Error = SessionError;

    fn number(&self, q: &BigRational) -> DiffOperator {
        DiffOperator::scalar(self.field.from_rational(q.clone()))
    }

    fn symbol(&self, name: &str, pos: Pos) -> Result<DiffOperator, SessionError> {
        if name == "D" {
            return Ok(DiffOperator::d(self.field));
        }
        if let Some(c) = scalar_symbol(self.field, name) {
            return Ok(DiffOperator::scalar(c));
        }
        self.bindings
            .iter()
            .find(|b| b.name == name)
            .map(|b| b.value.clone())
            .ok_or_else(|| ParseError::unknown(pos, name).into())
    }

    fn call(&self, name: &str, arg: &Expr, pos: Pos) -> Result<DiffOperator, SessionError> {
        sugar(self.field, name, arg, pos).map(DiffOperator::scalar)
    }

    fn add(&self, a: &DiffOperator, b: &DiffOperator) -> DiffOperator {
        a.add(b).expect("same field")
    }

    fn neg(&self, a: &DiffOperator) -> DiffOperator {
        a.neg()
    }

    fn mul(&self, a: &DiffOperator, b: &DiffOperator) -> DiffOperator {
        a.mul(b).expect("same field")
    }

    /// Right division by a nonzero function.
    fn div(&self, a: &DiffOperator, b: &DiffOperator, pos: Pos) -> Result<DiffOperator, SessionError> {
        if b.order().finite().is_some_and(|k| k > 0) {
            return Err(ParseError::syntax(pos, "cannot divide by an operator involving D").into());
        }
        let inv = b
            .lc()
            .and_then(|c| c.invert().ok())
            .ok_or_else(|| SessionError::math(pos, "division by zero"))?;
        Ok(a.mul(&DiffOperator::scalar(inv)).expect("same field"))
    }

    fn one(&self) -> DiffOperator {
        DiffOperator::one(self.field)
    }
}

/// Evaluates expressions in `K[λ, μ1, …]`; `l` is `λ`, `muᵢ` are the
/// basis variables.
pub struct PolyAlgebra<'a> {
    pub field: &'a Arc<DiffField>,
    pub nmu: usize,
}

impl Algebra for PolyAlgebra<'_> {
    type Value = SpectralPolynomial;
    type Error = SessionError;

    fn number(&self, q: &BigRational) -> SpectralPolynomial {
        SpectralPolynomial::constant(self.field.from_rational(q.clone()), self.nmu)
    }

    fn symbol(&self, name: &str, pos: Pos) -> Result<SpectralPolynomial, SessionError> {
        if name == "l" {
            return Ok(SpectralPolynomial::lambda(self.field, self.nmu));
        }
        if is_mu_name(name) {
            let i: usize = name[2..].parse().unwrap_or(0);
            if (1..=self.nmu).contains(&i) {
                return Ok(SpectralPolynomial::mu(self.field, self.nmu, i));
            }
        }
        scalar_symbol(self.field, name)
            .map(|c| SpectralPolynomial::constant(c, self.nmu))
            .ok_or_else(|| ParseError::unknown(pos, name).into())
    }

    fn call(&self, name: &str, arg: &Expr, pos: Pos) -> Result<SpectralPolynomial, SessionError> {
        sugar(self.field, name, arg, pos).map(|c| SpectralPolynomial::constant(c, self.nmu))
    }

    fn add(&self, a: &SpectralPolynomial, b: &SpectralPolynomial) -> SpectralPolynomial {
        a.add(b)
    }

    fn neg(&self, a: &SpectralPolynomial) -> SpectralPolynomial {
        a.neg()
    }

    fn mul(&self, a: &SpectralPolynomial, b: &SpectralPolynomial) -> SpectralPolynomial {
        a.mul(b)
    }

    fn div(
        &self,
        a: &SpectralPolynomial,
        b: &SpectralPolynomial,
        pos: Pos,
    ) -> Result<SpectralPolynomial, SessionError> {
        let one = spectral_core::Monomial::one(self.nmu);
        if b.terms().any(|(m, _)| *m != one) {
            return Err(ParseError::syntax(pos, "cannot divide by a polynomial in l or mu").into());
        }
        let inv = b
            .coeff(&one)
            .invert()
            .map_err(|_| SessionError::math(pos, "division by zero"))?;
        Ok(a.scale(&inv))
    }

    fn one(&self) -> SpectralPolynomial {
        SpectralPolynomial::constant(self.field.one(), self.nmu)
    }
}

/// Scalars over `Q(params)`, for elliptic invariants.
fn eval_invariant(params: &[String], e: &Expr) -> Result<RatFunc, SessionError> {
    let field = DiffField::constants(params.to_vec());
    let value = OperatorAlgebra {
        field: &field,
        bindings: &[],
    }
    .eval(e)?;
    Ok(value
        .coeff(0)
        .as_param_ratfunc()
        .expect("constants field"))
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_field(p: &mut Parser, start: Pos) -> Result<(FieldDecl, Arc<DiffField>), SessionError> {
    let (kind_name, kpos) = p.ident()?;
    let kind = match kind_name.as_str() {
        "constants" => FieldKind::Constants,
        "exponential" => FieldKind::Exponential,
        "elliptic" => FieldKind::Elliptic,
        other => {
            return Err(ParseError::syntax(kpos, format!("unknown field kind `{other}`")).into());
        }
    };
    let mut params: Vec<String> = Vec::new();
    if p.eat_sym('(') {
        if !p.eat_sym(')') {
            loop {
                let (name, pos) = p.ident()?;
                if is_reserved(&name) || params.contains(&name) {
                    return Err(ParseError::syntax(pos, format!("`{name}` cannot name a parameter")).into());
                }
                params.push(name);
                if p.eat_sym(')') {
                    break;
                }
                p.expect_sym(',')?;
            }
        }
    }
    let mut invariants = None;
    if !p.at_end() {
        let (word, wpos) = p.ident()?;
        if word != "invariants" || kind != FieldKind::Elliptic {
            return Err(ParseError::syntax(wpos, format!("unexpected `{word}`")).into());
        }
        p.expect_sym('(')?;
        let g2 = p.expr()?;
        p.expect_sym(',')?;
        let g3 = p.expr()?;
        p.expect_sym(')')?;
        invariants = Some((eval_invariant(&params, &g2)?, eval_invariant(&params, &g3)?));
    }
    p.finish()?;

    let field = match kind {
        FieldKind::Constants => DiffField::constants(params.clone()),
        FieldKind::Exponential => DiffField::exponential(params.clone()),
        FieldKind::Elliptic => {
            let (g2, g3) = match &invariants {
                Some(pair) => pair.clone(),
                None if params.len() >= 2 => {
                    let e = |name: &str| eval_invariant(&params, &Expr::Var(name.to_string(), start));
                    (e(&params[0])?, e(&params[1])?)
                }
                None => {
                    return Err(ParseError::syntax(
                        kpos,
                        "elliptic field needs two parameters or `invariants(g2, g3)`",
                    )
                    .into())
                }
            };
            DiffField::elliptic_with_invariants(params.clone(), g2, g3)
                .map_err(|e| SessionError::math(start, e.to_string()))?
        }
    };
    Ok((
        FieldDecl {
            kind,
            params,
            invariants,
        },
        field,
    ))
}

/// Parses a session text.
pub fn parse_session(text: &str) -> Result<Session, SessionError> {
    let mut decl: Option<(FieldDecl, Arc<DiffField>)> = None;
    let mut bindings: Vec<Binding> = Vec::new();
    let mut basis: Option<(String, Vec<String>)> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = strip_comment(raw);
        let toks = tokenize(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut p = Parser::new(&toks, line_no, line.chars().count());
        let (head, hpos) = p.ident()?;
        match head.as_str() {
            "field" => {
                if decl.is_some() {
                    return Err(ParseError::syntax(hpos, "the field is already declared").into());
                }
                decl = Some(parse_field(&mut p, hpos)?);
            }
            "basis" => {
                if basis.is_some() {
                    return Err(ParseError::syntax(hpos, "the basis is already declared").into());
                }
                let (l, lpos) = p.ident()?;
                if !bindings.iter().any(|b| b.name == l) {
                    return Err(ParseError::unknown(lpos, &l).into());
                }
                p.expect_sym(':')?;
                let mut names: Vec<String> = Vec::new();
                if !p.at_end() {
                    loop {
                        let (g, gpos) = p.ident()?;
                        if !bindings.iter().any(|b| b.name == g) {
                            return Err(ParseError::unknown(gpos, &g).into());
                        }
                        if names.contains(&g) || g == l {
                            return Err(ParseError::syntax(gpos, format!("`{g}` is listed twice")).into());
                        }
                        names.push(g);
                        if p.at_end() {
                            break;
                        }
                        p.expect_sym(',')?;
                    }
                }
                basis = Some((l, names));
            }
            _ => {
                let Some((_, field)) = &decl else {
                    return Err(ParseError::syntax(hpos, "declare the field before any binding").into());
                };
                if is_reserved(&head) || field.params().contains(&head) {
                    return Err(ParseError::syntax(hpos, format!("`{head}` is a reserved name")).into());
                }
                if bindings.iter().any(|b| b.name == head) {
                    return Err(ParseError::syntax(hpos, format!("`{head}` is already bound")).into());
                }
                p.expect_sym('=')?;
                let expr = p.expr()?;
                p.finish()?;
                let value = OperatorAlgebra {
                    field,
                    bindings: &bindings,
                }
                .eval(&expr)?;
                bindings.push(Binding {
                    name: head,
                    expr,
                    value,
                });
            }
        }
    }

    let end = Pos {
        line: last_line + 1,
        col: 1,
    };
    let (decl, field) = decl.ok_or_else(|| ParseError::syntax(end, "missing `field` line"))?;
    let (l_name, basis_names) = basis.ok_or_else(|| ParseError::syntax(end, "missing `basis` line"))?;
    Ok(Session {
        decl,
        field,
        bindings,
        l_name,
        basis_names,
    })
}

impl Session {
    pub fn get(&self, name: &str) -> Option<&DiffOperator> {
        self.bindings.iter().find(|b| b.name == name).map(|b| &b.value)
    }

    pub fn l(&self) -> &DiffOperator {
        self.get(&self.l_name).expect("validated at parse time")
    }

    /// Basis names in the order the kernel numbers them (by increasing
    /// order); `muᵢ` stands for the `i`-th.
    pub fn mu_names(&self) -> Vec<String> {
        let mut names = self.basis_names.clone();
        names.sort_by_key(|n| self.get(n).unwrap().order());
        names
    }

    /// Validates `{1, G1, …}` and builds the Goodearl basis.
    pub fn basis(&self) -> Result<GoodearlBasis, SessionError> {
        let mut gens = vec![DiffOperator::one(&self.field)];
        gens.extend(self.basis_names.iter().map(|n| self.get(n).unwrap().clone()));
        Ok(GoodearlBasis::new(self.l().clone(), gens)?)
    }

    /// An operator expression over the session's bindings.
    pub fn eval_operator(&self, text: &str) -> Result<DiffOperator, SessionError> {
        let e = crate::parse::parse_expr(text)?;
        OperatorAlgebra {
            field: &self.field,
            bindings: &self.bindings,
        }
        .eval(&e)
    }

    /// A polynomial in `l, mu1, …, mu{nmu}`.
    pub fn eval_poly(&self, text: &str, nmu: usize) -> Result<SpectralPolynomial, SessionError> {
        let e = crate::parse::parse_expr(text)?;
        PolyAlgebra {
            field: &self.field,
            nmu,
        }
        .eval(&e)
    }

    /// Canonical text; parsing it gives back an equal session.
    pub fn render(&self) -> String {
        let mut out = self.decl.render();
        out.push('\n');
        for b in &self.bindings {
            out.push_str(&format!("{} = {}\n", b.name, b.value.render()));
        }
        out.push_str(&format!("basis {}:", self.l_name));
        if !self.basis_names.is_empty() {
            out.push(' ');
            out.push_str(&self.basis_names.join(", "));
        }
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commands::CATALOG;
    use spectral_core::catalog;

    fn parsed(name: &str) -> Session {
        let text = CATALOG.iter().find(|(n, _)| *n == name).unwrap().1;
        parse_session(text).unwrap()
    }

    #[test]
    fn catalog_texts_match_the_kernel_catalog() {
        let exp = parsed("exponential");
        let (l, gens) = catalog::exponential_operators(&exp.field);
        assert_eq!(exp.l(), &l);
        assert_eq!(exp.get("G1"), Some(&gens[1]));
        assert_eq!(exp.get("G2"), Some(&gens[2]));
        assert!(exp.l().is_normal_form());

        let ell = parsed("elliptic");
        assert_eq!(ell.field, catalog::elliptic_field());
        let (l, gens) = catalog::elliptic_operators(&ell.field);
        assert_eq!(ell.l(), &l);
        for (i, g) in ["G1", "G2", "G3"].iter().enumerate() {
            assert_eq!(ell.get(g), Some(&gens[i + 1]));
        }
        let b = ell.basis().unwrap();
        assert_eq!((b.n(), b.t()), (4, 4));

        let sub = parsed("elliptic-sub").basis().unwrap();
        assert_eq!((sub.t(), sub.rank()), (2, 2));
    }

    #[test]
    fn rendering_is_a_fixed_point() {
        for (name, _) in CATALOG {
            let once = parsed(name).render();
            let again = parse_session(&once).unwrap().render();
            assert_eq!(once, again, "{name}");
        }
        let text = parsed("exponential").render();
        assert!(text.starts_with("field exponential\nL = D^3 + (24*E^2/(E^4+2*E^2+1))*D\n"));
    }

    #[test]
    fn desugared_operator_is_in_normal_form() {
        let s = parse_session("field exponential\nL = D^3 + (24*E^2/(E^2+1)^2)*D\nbasis L:\n").unwrap();
        assert!(s.l().is_normal_form());
        assert_eq!(s.l(), parsed("exponential").l());
    }

    #[test]
    fn non_normal_form_fails_validation() {
        let s = parse_session("field constants\nL = 2*D^2\nbasis L:\n").unwrap();
        assert_eq!(s.basis().unwrap_err(), SessionError::Basis(OdoError::NotNormalForm));
        assert_eq!(s.basis().unwrap_err().exit_code(), 3);
    }

    #[test]
    fn products_with_d_do_not_commute() {
        let s = parse_session("field exponential\nA = D*E\nB = E*D + E\nbasis A:\n").unwrap();
        assert_eq!(s.get("A"), s.get("B"));
    }

    fn err(text: &str) -> SessionError {
        parse_session(text).unwrap_err()
    }

    #[test]
    fn errors_name_kind_and_position() {
        assert_eq!(
            err("field elliptic(g2, g3)\nL = D^2 + cosh(x)\nbasis L:"),
            ParseError::SugarOutsideField { line: 2, col: 11, name: "cosh".into() }.into()
        );
        assert_eq!(
            err("field exponential\nL = D^2 + q\nbasis L:"),
            ParseError::UnknownSymbol { line: 2, col: 11, name: "q".into() }.into()
        );
        assert_eq!(
            err("field exponential\nL = D^(1/2)\nbasis L:"),
            ParseError::NonIntegerExponent { line: 2, col: 9 }.into()
        );
        assert_eq!(
            err("field exponential\nL = D^2\nbasis L: G9"),
            ParseError::UnknownSymbol { line: 3, col: 10, name: "G9".into() }.into()
        );
        assert!(matches!(
            err("L = D\nfield exponential"),
            SessionError::Parse(ParseError::SyntaxError { line: 1, col: 1, .. })
        ));
        assert!(matches!(
            err("field exponential\nfield constants"),
            SessionError::Parse(ParseError::SyntaxError { line: 2, col: 1, .. })
        ));
        assert!(matches!(
            err("field exponential\nL = D^2"),
            SessionError::Parse(ParseError::SyntaxError { line: 3, .. })
        ));
        assert!(matches!(
            err("field exponential\nL = D^2\nL = D^3\nbasis L:"),
            SessionError::Parse(ParseError::SyntaxError { line: 3, col: 1, .. })
        ));
        assert!(matches!(
            err("field exponential\nL = D/D\nbasis L:"),
            SessionError::Parse(ParseError::SyntaxError { line: 2, col: 6, .. })
        ));
        assert!(matches!(
            err("field exponential\nL = D/(E-E)\nbasis L:"),
            SessionError::Math { line: 2, col: 6, .. }
        ));
        assert!(matches!(
            err("field elliptic invariants(0, 0)\nL = D^2\nbasis L:"),
            SessionError::Math { line: 1, .. }
        ));
        assert!(matches!(
            err("field elliptic\nL = D^2\nbasis L:"),
            SessionError::Parse(ParseError::SyntaxError { line: 1, col: 7, .. })
        ));
        assert!(matches!(
            err("field exponential(D)\nL = D^2\nbasis L:"),
            SessionError::Parse(ParseError::SyntaxError { line: 1, col: 19, .. })
        ));
    }

    #[test]
    fn rational_invariants_and_comments() {
        let s = parse_session(
            "# a curve over Q\nfield elliptic invariants(4, 1/2)  # g2, g3\nL = D^2 - 2*wp\nbasis L:\n",
        )
        .unwrap();
        let (g2, g3) = s.field.invariants().unwrap();
        assert_eq!(g2.as_rational(), Some(BigRational::from_integer(4.into())));
        assert_eq!(g3.as_rational(), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_session(&s.render()).unwrap().render(), s.render());
    }

    #[test]
    fn polynomial_expressions() {
        let s = parsed("elliptic");
        let p = s.eval_poly("mu3^2 - l*mu1/2 + g2*wp", 3).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert!(!p.has_constant_coeffs());
        assert!(matches!(
            s.eval_poly("mu4", 3).unwrap_err(),
            SessionError::Parse(ParseError::UnknownSymbol { col: 1, .. })
        ));
        assert!(matches!(
            s.eval_poly("1/l", 3).unwrap_err(),
            SessionError::Parse(ParseError::SyntaxError { col: 2, .. })
        ));
    }
}
