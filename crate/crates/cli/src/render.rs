//! JSON and LaTeX encodings of kernel values. Plain text uses the kernel's
//! own canonical rendering.

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value};
use spectral_core::poly::MPoly;
use spectral_core::ratfunc::RatFunc;
use spectral_core::{DiffField, FieldElement, FieldKind, Monomial, SpectralPolynomial, WeightedOrder};

pub fn field_json(field: &DiffField) -> Value {
    let kind = match field.kind() {
        FieldKind::Constants => "constants",
        FieldKind::Exponential => "exponential",
        FieldKind::Elliptic => "elliptic",
    };
    let mut obj = serde_json::Map::new();
    obj.insert("kind".into(), json!(kind));
    obj.insert("params".into(), json!(field.params()));
    match field.kind() {
        FieldKind::Exponential => {
            obj.insert("generator".into(), json!("E"));
        }
        FieldKind::Elliptic => {
            obj.insert("generator".into(), json!("wp"));
            let (g2, g3) = field.invariants().expect("elliptic field");
            let names = field.var_names();
            obj.insert("invariants".into(), json!([g2.render(names), g3.render(names)]));
        }
        FieldKind::Constants => {}
    }
    Value::Object(obj)
}

/// Terms in decreasing `≺` order, each `{lambda, mu, coeff}`.
pub fn terms_json(p: &SpectralPolynomial, ord: &WeightedOrder) -> Value {
    Value::Array(
        p.sorted_terms(ord)
            .into_iter()
            .map(|(m, c)| json!({"lambda": m.lambda, "mu": m.mu, "coeff": c.render()}))
            .collect(),
    )
}

/// Serializes with two-space indentation and a final newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn latex_name(name: &str, power: u32) -> String {
    if name == "E" {
        return match power {
            1 => "e^{x}".to_string(),
            k => format!("e^{{{k}x}}"),
        };
    }
    let base = match name {
        "wp" => "\\wp".to_string(),
        "l" => "\\lambda".to_string(),
        _ => {
            let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
            let (stem, digits) = name.split_at(split);
            let stem = if stem.chars().count() > 1 {
                format!("\\mathrm{{{stem}}}")
            } else {
                stem.to_string()
            };
            if digits.is_empty() {
                stem
            } else {
                format!("{stem}_{{{digits}}}")
            }
        }
    };
    match power {
        1 => base,
        k => format!("{base}^{{{k}}}"),
    }
}

fn latex_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
    }
}

fn latex_mpoly(p: &MPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (e, c)) in p.terms().rev().enumerate() {
        let a = c.abs();
        if c.is_negative() {
            out.push_str(if idx == 0 { "-" } else { " - " });
        } else if idx > 0 {
            out.push_str(" + ");
        }
        let mono: Vec<String> = e
            .0
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| latex_name(&names[i], k))
            .collect();
        if mono.is_empty() {
            out.push_str(&latex_rational(&a));
        } else if a.is_one() {
            out.push_str(&mono.join(" "));
        } else {
            out.push_str(&format!("{} {}", latex_rational(&a), mono.join(" ")));
        }
    }
    out
}

/// `(latex, is_sum)`; `is_sum` asks the caller to parenthesize.
fn latex_ratfunc(r: &RatFunc, names: &[String]) -> (String, bool) {
    let num = latex_mpoly(r.num(), names);
    if r.den().is_one() {
        return (num, r.num().num_terms() > 1);
    }
    // pull a lone rational denominator into a plain fraction
    if let Some(d) = r.den().as_constant() {
        if r.num().num_terms() == 1 {
            let (e, c) = r.num().terms().next().unwrap();
            let mono = MPoly::from_terms(r.nvars(), [(e.clone(), BigRational::one())]);
            let q = c / &d;
            let frac = latex_rational(&q.abs());
            let sign = if q.is_negative() { "-" } else { "" };
            return if mono.is_one() {
                (format!("{sign}{frac}"), false)
            } else {
                (format!("{sign}{frac} {}", latex_mpoly(&mono, names)), false)
            };
        }
    }
    (format!("\\frac{{{num}}}{{{}}}", latex_mpoly(r.den(), names)), false)
}

pub fn latex_element(c: &FieldElement) -> (String, bool) {
    let names = c.field().var_names();
    let a = c.rational_part();
    let b = c.wpd_part();
    if b.is_zero() {
        return latex_ratfunc(a, names);
    }
    let (bl, bsum) = latex_ratfunc(b, names);
    let bpart = if b.is_one() {
        "\\wp'".to_string()
    } else if bsum {
        format!("\\left({bl}\\right) \\wp'")
    } else {
        format!("{bl} \\wp'")
    };
    if a.is_zero() {
        return (bpart, false);
    }
    let (al, _) = latex_ratfunc(a, names);
    let joined = if bpart.starts_with('-') {
        format!("{al} - {}", &bpart[1..])
    } else {
        format!("{al} + {bpart}")
    };
    (joined, true)
}

fn latex_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    if m.lambda > 0 {
        parts.push(latex_name("l", m.lambda));
    }
    for (i, &a) in m.mu.iter().enumerate() {
        if a > 0 {
            let base = format!("\\mu_{{{}}}", i + 1);
            parts.push(if a == 1 { base } else { format!("{base}^{{{a}}}") });
        }
    }
    parts.join(" ")
}

pub fn latex_poly(p: &SpectralPolynomial, ord: &WeightedOrder) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.sorted_terms(ord).into_iter().enumerate() {
        let neg = c.looks_negative();
        let mag = if neg { -c } else { c.clone() };
        out.push_str(match (idx, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let mono = latex_monomial(m);
        let (coef, sum) = latex_element(&mag);
        if mono.is_empty() {
            out.push_str(&if sum { format!("\\left({coef}\\right)") } else { coef });
        } else if mag.is_one() {
            out.push_str(&mono);
        } else if sum {
            out.push_str(&format!("\\left({coef}\\right) {mono}"));
        } else {
            out.push_str(&format!("{coef} {mono}"));
        }
    }
    out
}

/// `\begin{align*} … \end{align*}` with one `lhs &= rhs` row per entry.
pub fn latex_align(rows: &[(String, String)]) -> String {
    let mut out = String::from("\\begin{align*}\n");
    for (k, (lhs, rhs)) in rows.iter().enumerate() {
        out.push_str(&format!("{lhs} &= {rhs}"));
        out.push_str(if k + 1 < rows.len() { " \\\\\n" } else { "\n" });
    }
    out.push_str("\\end{align*}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectral_core::{bc_ideal, catalog};

    #[test]
    fn latex_of_catalog_relations() {
        let bc = bc_ideal(&catalog::exponential_basis()).unwrap();
        let r11 = bc.relation(1, 1).unwrap();
        assert_eq!(
            latex_poly(r11, bc.order()),
            "\\mu_{1}^{2} - \\lambda \\mu_{2} + \\frac{8}{3} \\lambda^{2}"
        );
        let bc = bc_ideal(&catalog::elliptic_basis()).unwrap();
        assert_eq!(
            latex_poly(bc.relation(1, 1).unwrap(), bc.order()),
            "\\mu_{1}^{2} - \\lambda \\mu_{2} + \\frac{3 g_{2} + 4}{4} \\mu_{2} \
             + \\frac{27}{4} g_{3} \\lambda - \\frac{27}{4} g_{3}"
        );
        assert_eq!(
            latex_poly(bc.relation(2, 2).unwrap(), bc.order()),
            "\\mu_{2}^{2} - \\lambda^{3} + \\left(3 g_{2} + 3\\right) \\lambda^{2} \
             - \\left(6 g_{2} + 3\\right) \\lambda + \\left(3 g_{2} + 1\\right)"
        );
    }

    #[test]
    fn latex_of_field_elements() {
        let f = catalog::elliptic_field();
        let wp = f.generator().unwrap();
        let c = &(&wp * &f.from_int(-12)) + &f.wpd().unwrap().scale(&BigRational::new(3.into(), 2.into()));
        assert_eq!(latex_element(&c), ("-12 \\wp + \\frac{3}{2} \\wp'".to_string(), true));
        let e = catalog::exponential_field().generator().unwrap();
        let r = e.pow(2).invert().unwrap();
        assert_eq!(latex_element(&r).0, "\\frac{1}{e^{2x}}");
    }

    #[test]
    fn json_terms_follow_the_order() {
        let bc = bc_ideal(&catalog::exponential_basis()).unwrap();
        let v = terms_json(bc.relation(1, 1).unwrap(), bc.order());
        assert_eq!(
            v,
            json!([
                {"lambda": 0, "mu": [2, 0], "coeff": "1"},
                {"lambda": 1, "mu": [0, 1], "coeff": "-1"},
                {"lambda": 2, "mu": [0, 0], "coeff": "8/3"},
            ])
        );
        assert_eq!(
            field_json(&catalog::elliptic_field()),
            json!({"kind": "elliptic", "params": ["g2", "g3"], "generator": "wp", "invariants": ["-g2", "-g3"]})
        );
    }
}
