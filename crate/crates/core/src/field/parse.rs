//! Element grammar for Hahn series: a `+`-separated sum of terms
//! `coef*t^(exponent)`, where `coef` is a finite-field literal (parenthesized
//! if it contains `+` or `-`) and `exponent` is `a/b` or `a/b+c/d rP`.
//! A trailing `O(t^(exponent))` sets the precision; otherwise the configured
//! precision applies. The literal `0` is the exact zero.

use super::exponent::Exponent;
use super::hahn::{HahnField, HahnSeries};
use super::FieldError;
use crate::scalar::parse_quad;

fn syntax(pos: usize, msg: &str) -> FieldError {
    FieldError::Syntax {
        pos,
        msg: msg.into(),
    }
}

/// Splits at top-level `+` signs, keeping byte offsets.
fn split_terms(text: &str) -> Result<Vec<(usize, &str)>, FieldError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(syntax(i, "unbalanced ')'"));
                }
            }
            '+' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(syntax(text.len(), "unbalanced '('"));
    }
    out.push((start, &text[start..]));
    Ok(out)
}

fn trim_at(pos: usize, s: &str) -> (usize, &str) {
    let lead = s.len() - s.trim_start().len();
    (pos + lead, s.trim())
}

fn parse_exponent(h: &HahnField, pos: usize, text: &str) -> Result<Exponent, FieldError> {
    let q = parse_quad(text, h.p() as u32).map_err(|e| syntax(pos, &e.to_string()))?;
    if q.radicand() != h.p() as u32 {
        return Err(syntax(pos, "radicand differs from the characteristic"));
    }
    Exponent::from_quad(&q, h.denom())
        .ok_or_else(|| FieldError::ExponentNotInGroup(text.to_string()))
}

/// `t^(...)` at `pos`; returns the exponent.
fn parse_power(h: &HahnField, pos: usize, text: &str) -> Result<Exponent, FieldError> {
    let inner = text
        .strip_prefix("t^(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| syntax(pos, "expected t^(exponent)"))?;
    parse_exponent(h, pos + 3, inner)
}

pub(crate) fn parse_series(h: &HahnField, text: &str) -> Result<HahnSeries, FieldError> {
    if text.trim() == "0" {
        return Ok(h.exact(Vec::new()));
    }
    let mut terms = Vec::new();
    let mut prec = None;
    for (pos, raw) in split_terms(text)? {
        let (pos, term) = trim_at(pos, raw);
        if term.is_empty() {
            return Err(syntax(pos, "empty term"));
        }
        if prec.is_some() {
            return Err(syntax(pos, "terms after the precision bound"));
        }
        if let Some(inner) = term.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            prec = Some(parse_power(h, pos + 2, inner)?);
            continue;
        }
        let star = term
            .find("*t^")
            .ok_or_else(|| syntax(pos, "expected coef*t^(exponent)"))?;
        let coef = term[..star].trim();
        let coef = coef
            .strip_prefix('(')
            .and_then(|c| c.strip_suffix(')'))
            .unwrap_or(coef);
        let c = h.coefficients().parse(coef, pos)?;
        let e = parse_power(h, pos + star + 1, &term[star + 1..])?;
        terms.push((e, c));
    }
    let prec = prec.unwrap_or(h.max_precision());
    Ok(h.with_precision(terms, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::AnyField;
    use crate::field::{FieldCfg, TitsField};

    fn hahn(p: u32) -> HahnField {
        match FieldCfg::hahn_default(p, 1).build().unwrap() {
            AnyField::Hahn(h) => h,
            _ => unreachable!(),
        }
    }

    #[test]
    fn unit_literal() {
        let h = hahn(2);
        assert!(h.congruent(&h.parse_elem("1*t^(0)").unwrap(), &h.one()));
    }

    #[test]
    fn irrational_exponent() {
        let h = hahn(2);
        let a = h.parse_elem("1*t^(1/2+1/2r2)").unwrap();
        assert_eq!(a.terms(), &[(h.exponent(1, 1), crate::field::Gf::ONE)]);
        assert_eq!(a.precision(), Some(h.exponent(80, 0)));
    }

    #[test]
    fn exponent_outside_group() {
        let h = hahn(2);
        assert!(matches!(
            h.parse_elem("1*t^(1/3)"),
            Err(FieldError::ExponentNotInGroup(_))
        ));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let h = hahn(3);
        assert!(matches!(
            h.parse_elem("1*t^(1) + 2*s^(1)"),
            Err(FieldError::Syntax { pos: 10, .. })
        ));
        assert!(matches!(
            h.parse_elem("1*t^(1"),
            Err(FieldError::Syntax { .. })
        ));
        assert!(matches!(
            h.parse_elem("1*t^(1+1r2)"),
            Err(FieldError::Syntax { pos: 5, .. })
        ));
    }

    #[test]
    fn format_round_trip() {
        let h = match FieldCfg::hahn_default(3, 3).build().unwrap() {
            AnyField::Hahn(h) => h,
            _ => unreachable!(),
        };
        let text = "(g+1)*t^(-1/2) + 2*g^2*t^(1+1/2r3) + O(t^(40))";
        let a = h.parse_elem(text).unwrap();
        assert_eq!(h.format_elem(&a), text);
        assert_eq!(h.parse_elem("0").unwrap(), h.zero());
    }
}
