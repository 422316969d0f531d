//! One function per subcommand; each returns the text to print.

use serde_json::{json, Value};
use spectral_core::dres::{diff_resultant, squarefree_part, SpectralOperator};
use spectral_core::{bc_ideal, bc_membership, phi_l, reduce_as_module, BcBasis, BcError, SpectralPolynomial};
use thiserror::Error;

use crate::render::{field_json, latex_align, latex_poly, terms_json, to_text};
use crate::session::{Session, SessionError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Debug, Error)]
pub enum CmdError {
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("{0}")]
    Kernel(#[from] BcError),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Session(e) => e.exit_code(),
            CmdError::Kernel(_) => 3,
        }
    }
}

pub const CATALOG: [(&str, &str); 3] = [
    ("exponential", include_str!("../catalog/exponential.session")),
    ("elliptic", include_str!("../catalog/elliptic.session")),
    ("elliptic-sub", include_str!("../catalog/elliptic-sub.session")),
];

pub fn cmd_example(name: &str) -> Option<&'static str> {
    CATALOG.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

fn ideal(session: &Session) -> Result<BcBasis, CmdError> {
    Ok(bc_ideal(&session.basis()?)?)
}

/// Text for the relations, one `R(i,j) = …` line each after two comment
/// lines describing the basis.
pub fn cmd_bc_ideal(session: &Session, format: Format) -> Result<String, CmdError> {
    let bc = ideal(session)?;
    let b = bc.source();
    let ord = bc.order();
    Ok(match format {
        Format::Text => {
            let groups: Vec<String> = b.order_group().iter().map(|g| g.to_string()).collect();
            let mut out = format!(
                "# n = {}, t = {}, rank = {}, order group {{{}}}\n",
                b.n(),
                b.t(),
                b.rank(),
                groups.join(", ")
            );
            let vars: Vec<String> = session
                .mu_names()
                .iter()
                .enumerate()
                .map(|(i, name)| format!("mu{} = {} (order {})", i + 1, name, b.orders()[i + 1]))
                .collect();
            out.push_str(&format!("# {}\n", vars.join(", ")));
            for r in bc.relations() {
                out.push_str(&format!("R({},{}) = {}\n", r.i, r.j, r.poly.render(ord)));
            }
            out
        }
        Format::Json => to_text(&json!({
            "field": field_json(b.field()),
            "n": b.n(),
            "t": b.t(),
            "rank": b.rank(),
            "orderGroup": b.order_group(),
            "relations": bc.relations().iter().map(|r| json!({
                "i": r.i,
                "j": r.j,
                "terms": terms_json(&r.poly, ord),
            })).collect::<Vec<Value>>(),
        })),
        Format::Latex => latex_align(
            &bc.relations()
                .iter()
                .map(|r| (format!("R_{{{},{}}}", r.i, r.j), latex_poly(&r.poly, ord)))
                .collect::<Vec<_>>(),
        ),
    })
}

/// Module coordinates `p0, …, p{t−1}` of an operator expression.
pub fn cmd_reduce(session: &Session, target: &str, format: Format) -> Result<String, CmdError> {
    let basis = session.basis()?;
    let op = session.eval_operator(target)?;
    let coords = reduce_as_module(&op, &basis)?;
    let ord = spectral_core::WeightedOrder::from_basis(&basis);
    let polys: Vec<SpectralPolynomial> = (0..basis.t()).map(|i| coords.coordinate(&basis, i)).collect();
    Ok(match format {
        Format::Text => {
            let parts: Vec<String> = polys
                .iter()
                .enumerate()
                .map(|(i, p)| format!("p{i} = {}", p.render(&ord)))
                .collect();
            format!("{}\n", parts.join(", "))
        }
        Format::Json => to_text(&json!({
            "target": target,
            "coordinates": polys.iter().enumerate().map(|(i, p)| json!({
                "index": i,
                "terms": terms_json(p, &ord),
            })).collect::<Vec<Value>>(),
        })),
        Format::Latex => latex_align(
            &polys
                .iter()
                .enumerate()
                .map(|(i, p)| (format!("p_{{{i}}}"), latex_poly(p, &ord)))
                .collect::<Vec<_>>(),
        ),
    })
}

/// Membership verdict and the normal-form certificate.
pub fn cmd_member(session: &Session, poly: &str, format: Format) -> Result<String, CmdError> {
    let bc = ideal(session)?;
    let p = session.eval_poly(poly, bc.source().t() - 1)?;
    let (member, nf) = bc_membership(&p, &bc);
    let ord = bc.order();
    Ok(match format {
        Format::Text => {
            let verdict = if member { "member" } else { "NOT a member" };
            format!("{verdict}; normal form: {}\n", nf.render(ord))
        }
        Format::Json => to_text(&json!({
            "member": member,
            "normalForm": terms_json(&nf, ord),
        })),
        Format::Latex => {
            let verdict = if member { "member" } else { "not a member" };
            latex_align(&[(format!("\\text{{{verdict}}}: \\operatorname{{nf}}"), latex_poly(&nf, ord))])
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

/// Largest Sylvester matrix the resultant cross-check attempts.
const RESULTANT_LIMIT: usize = 12;

/// Runs the structural checks on a session basis.
pub fn verify(session: &Session) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool, detail: String| {
        checks.push(Check {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        })
    };
    let basis = match session.basis() {
        Ok(b) => b,
        Err(e) => {
            push("goodearl basis", false, e.to_string());
            return checks;
        }
    };
    push(
        "goodearl basis",
        true,
        format!("n = {}, t = {}, rank = {}", basis.n(), basis.t(), basis.rank()),
    );
    let bc = match bc_ideal(&basis) {
        Ok(bc) => bc,
        Err(e) => {
            push("relations", false, e.to_string());
            return checks;
        }
    };
    let ord = bc.order();
    let heads_ok = bc.relations().iter().all(|r| {
        let mut head = spectral_core::Monomial::one(basis.t() - 1);
        head.mu[r.i - 1] += 1;
        head.mu[r.j - 1] += 1;
        r.poly.leading_monomial(ord) == Some(&head)
    });
    push(
        "leading monomials",
        heads_ok,
        "each R(i,j) leads with mui*muj".to_string(),
    );
    push(
        "groebner",
        bc.is_groebner(),
        format!("S-polynomials of {} relations reduce to 0", bc.relations().len()),
    );
    let vanish = bc
        .relations()
        .iter()
        .all(|r| phi_l(&r.poly, &basis).is_ok_and(|op| op.is_zero()));
    push(
        "vanishing",
        vanish,
        format!("phi_L(R) = 0 for {} relations", bc.relations().len()),
    );

    let nmu = basis.t() - 1;
    let field = basis.field().clone();
    let n = basis.n();
    let pencil_l = SpectralOperator::pencil(basis.l(), &SpectralPolynomial::lambda(&field, nmu));
    let names = session.mu_names();
    for i in 1..basis.t() {
        let name = format!("resultant mu{i}");
        let size = n + basis.orders()[i];
        if size > RESULTANT_LIMIT {
            checks.push(Check {
                name,
                status: Status::Skip,
                detail: format!("matrix of size {size} exceeds {RESULTANT_LIMIT}"),
            });
            continue;
        }
        let g = SpectralOperator::pencil(&basis.gens()[i], &SpectralPolynomial::mu(&field, nmu, i));
        let outcome = diff_resultant(&pencil_l, &g)
            .map_err(|e| e.to_string())
            .and_then(|r| squarefree_part(&r).map_err(|e| e.to_string()))
            .map(|sf| bc_membership(&sf, &bc).0);
        let (ok, detail) = match outcome {
            Ok(true) => (true, format!("square-free part of dRes(L - l, {} - mu{i}) lies in the ideal", names[i - 1])),
            Ok(false) => (false, format!("square-free part of dRes(L - l, {} - mu{i}) is not in the ideal", names[i - 1])),
            Err(e) => (false, e),
        };
        checks.push(Check {
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        });
    }
    checks
}

/// The report and whether every check passed or was skipped.
pub fn cmd_verify(session: &Session, format: Format) -> (String, bool) {
    let checks = verify(session);
    let ok = checks.iter().all(|c| c.status != Status::Fail);
    let label = |s: &Status| match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skip => "SKIP",
    };
    let out = match format {
        Format::Text => checks
            .iter()
            .map(|c| format!("{} {}: {}\n", label(&c.status), c.name, c.detail))
            .collect(),
        Format::Json => to_text(&json!({
            "ok": ok,
            "checks": checks.iter().map(|c| json!({
                "name": c.name,
                "status": label(&c.status).to_lowercase(),
                "detail": c.detail,
            })).collect::<Vec<Value>>(),
        })),
        Format::Latex => {
            let mut s = String::from("\\begin{itemize}\n");
            for c in &checks {
                s.push_str(&format!("\\item \\textsc{{{}}} {}: {}\n", label(&c.status).to_lowercase(), c.name, c.detail));
            }
            s.push_str("\\end{itemize}\n");
            s
        }
    };
    (out, ok)
}
