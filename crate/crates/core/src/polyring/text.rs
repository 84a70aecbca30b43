//! Text form of polynomials: `t^3+2*t+1` over prime fields, the element-index
//! list `[c0,c1,...]` over extensions. The parser accepts both.

use super::Poly;
use crate::error::{Error, Result};
use crate::fqfield::Field;

pub(super) fn format(f: &Poly) -> String {
    if !f.field().is_prime_field() {
        let items: Vec<String> = f.coeffs().iter().map(|c| c.to_string()).collect();
        return format!("[{}]", items.join(","));
    }
    if f.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, &c) in f.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "t".into(),
            (1, c) => format!("{c}*t"),
            (i, 1) => format!("t^{i}"),
            (i, c) => format!("{c}*t^{i}"),
        };
        terms.push(term);
    }
    terms.join("+")
}

impl Poly {
    /// Parse either text form.
    pub fn parse(field: &Field, s: &str) -> Result<Poly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if let Some(body) = s.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unterminated list in {s:?}")))?;
            if body.is_empty() {
                return Ok(Poly::zero(field));
            }
            let coeffs = body
                .split(',')
                .map(|c| {
                    c.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            return Poly::new(field, coeffs);
        }
        parse_terms(field, &s)
    }
}

fn parse_terms(field: &Field, s: &str) -> Result<Poly> {
    let bad = |why: &str| Error::Parse(format!("{why} in {s:?}"));
    let mut coeffs: Vec<u32> = Vec::new();
    let mut rest = s;
    let mut first = true;
    while !rest.is_empty() {
        let mut negative = false;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            rest = r;
            negative = true;
        } else if !first {
            return Err(bad("expected + or -"));
        }
        first = false;
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let (term, tail) = rest.split_at(end);
        rest = tail;
        if term.is_empty() {
            return Err(bad("empty term"));
        }
        let (coef_txt, power) = match term.find('t') {
            None => (term, 0usize),
            Some(pos) => {
                let coef = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
                let after = &term[pos + 1..];
                let power = if after.is_empty() {
                    1
                } else {
                    after
                        .strip_prefix('^')
                        .and_then(|e| e.parse::<usize>().ok())
                        .ok_or_else(|| bad("bad exponent"))?
                };
                (if coef.is_empty() { "1" } else { coef }, power)
            }
        };
        let value: u64 = coef_txt.parse().map_err(|_| bad("bad coefficient"))?;
        let mut c = if field.is_prime_field() {
            (value % field.p() as u64) as u32
        } else if value < field.q() as u64 {
            value as u32
        } else {
            return Err(bad("coefficient is not an element index"));
        };
        if negative {
            c = field.neg(c);
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] = field.add(coeffs[power], c);
    }
    Ok(Poly::from_raw(field, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_prime_field() {
        let f = Field::new(3, 1).unwrap();
        for s in ["t^3+2*t+1", "0", "1", "t", "2*t^2", "t^5+t^4+2"] {
            assert_eq!(Poly::parse(&f, s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn signs_and_spacing() {
        let f = Field::new(3, 1).unwrap();
        let p = Poly::parse(&f, "t^2 - t - 1").unwrap();
        assert_eq!(p.to_string(), "t^2+2*t+2");
        let p = Poly::parse(&f, "-t+4").unwrap();
        assert_eq!(p.to_string(), "2*t+1");
        assert_eq!(Poly::parse(&f, "t+t").unwrap().to_string(), "2*t");
    }

    #[test]
    fn list_form() {
        let f4 = Field::new(2, 2).unwrap();
        let p = Poly::parse(&f4, "[3, 0, 1]").unwrap();
        assert_eq!(p.coeffs(), &[3, 0, 1]);
        assert_eq!(p.to_string(), "[3,0,1]");
        assert!(Poly::parse(&f4, "[4]").is_err());
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(Poly::parse(&f2, "[1,1]").unwrap().to_string(), "t+1");
    }

    #[test]
    fn rejects_garbage() {
        let f = Field::new(5, 1).unwrap();
        for s in ["", "t^", "x+1", "t^2++1", "[1,2", "2**t"] {
            assert!(Poly::parse(&f, s).is_err(), "{s}");
        }
    }
}
