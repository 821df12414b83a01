//! Text syntax for ambient factors and bundles.
//!
//! Factors: `Gr(2,4) x P(3)`, also `P3` and `×`. Bundles are sums of terms,
//! `term ^ m` repeats a term, and a term is either a global line
//! `O(t1,...,tf)`, the keyword `cotangent`, or a box product of exactly one
//! atom per factor separated by `x`. Atoms: `U`, `Udual`, `Q`, `Qdual`,
//! `wedge2Udual`, `O`, each optionally twisted as in `Udual(1)`.

use super::{ambient_cotangent, BundleExpr, FactorWeight, GrassFactor, IrredSummand};
use crate::error::{HkrError, Result};

fn err(pos: usize, reason: impl Into<String>) -> HkrError {
    HkrError::Grammar { pos, reason: reason.into() }
}

pub fn parse_factors(s: &str) -> Result<Vec<GrassFactor>> {
    let mut parts = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (c == 'x' || c == '×') {
            parts.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    parts.push(cur);
    let mut out = Vec::new();
    let mut pos = 0;
    for p in parts {
        let t: String = p.chars().filter(|c| !c.is_whitespace()).collect();
        let nums = |inner: &str| -> Result<Vec<usize>> {
            inner.split(',').map(|x| x.parse::<usize>().map_err(|_| err(pos, format!("bad number in {t}")))).collect()
        };
        let f = if let Some(inner) = t.strip_prefix("Gr(").and_then(|r| r.strip_suffix(')')) {
            match nums(inner)?.as_slice() {
                [k, n] => GrassFactor::new(*k, *n).map_err(|_| err(pos, format!("invalid {t}")))?,
                _ => return Err(err(pos, format!("expected Gr(k,n), got {t}"))),
            }
        } else if let Some(rest) = t.strip_prefix('P') {
            let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
            match nums(inner)?.as_slice() {
                [d] if *d >= 1 => GrassFactor::projective(*d),
                _ => return Err(err(pos, format!("expected P(n), got {t}"))),
            }
        } else {
            return Err(err(pos, format!("unknown factor {t:?}")));
        };
        out.push(f);
        pos += p.len() + 1;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Plus,
    Caret,
    Box,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => out.push((i, Tok::LParen)),
            ')' => out.push((i, Tok::RParen)),
            ',' => out.push((i, Tok::Comma)),
            '+' => out.push((i, Tok::Plus)),
            '^' => out.push((i, Tok::Caret)),
            '⊠' | '×' | '*' => out.push((i, Tok::Box)),
            '-' | '−' | '0'..='9' => {
                let neg = c == '-' || c == '−';
                if neg {
                    i += 1;
                }
                let d0 = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if d0 == i {
                    return Err(err(start, "expected digits"));
                }
                let v: i64 = chars[d0..i].iter().collect::<String>().parse().map_err(|_| err(start, "bad integer"))?;
                out.push((start, Tok::Int(if neg { -v } else { v })));
                continue;
            }
            _ if c.is_ascii_alphabetic() => {
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push((start, if word == "x" { Tok::Box } else { Tok::Ident(word) }));
                continue;
            }
            _ => return Err(err(i, format!("unexpected character {c:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    factors: &'a [GrassFactor],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.i += 1;
            Ok(())
        } else {
            Err(err(self.pos(), format!("expected {t:?}")))
        }
    }

    fn int_list(&mut self) -> Result<Vec<i64>> {
        self.expect(Tok::LParen)?;
        let mut v = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Int(x)) => {
                    v.push(*x);
                    self.i += 1;
                }
                _ => return Err(err(self.pos(), "expected integer")),
            }
            match self.peek() {
                Some(Tok::Comma) => self.i += 1,
                Some(Tok::RParen) => {
                    self.i += 1;
                    return Ok(v);
                }
                _ => return Err(err(self.pos(), "expected ',' or ')'")),
            }
        }
    }

    fn sum(&mut self) -> Result<BundleExpr> {
        let mut e = self.term()?;
        while self.peek() == Some(&Tok::Plus) {
            self.i += 1;
            e = e.sum(&self.term()?);
        }
        if self.i != self.toks.len() {
            return Err(err(self.pos(), "trailing input"));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<BundleExpr> {
        let e = self.product()?;
        if self.peek() == Some(&Tok::Caret) {
            self.i += 1;
            match self.peek() {
                Some(Tok::Int(m)) if *m >= 1 => {
                    let m = *m as u64;
                    self.i += 1;
                    return Ok(e.scaled(m));
                }
                _ => return Err(err(self.pos(), "expected positive multiplicity")),
            }
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<BundleExpr> {
        let start = self.pos();
        let mut atoms = vec![self.atom()?];
        while self.peek() == Some(&Tok::Box) {
            self.i += 1;
            atoms.push(self.atom()?);
        }
        let f = self.factors.len();
        if atoms.len() == 1 {
            match atoms.pop().unwrap() {
                Atom::Global(e) => return Ok(e),
                Atom::Local(w) if f == 1 => {
                    return Ok(BundleExpr::from_summand(IrredSummand { parts: vec![w.resolve(self.factors[0], start)?] }, 1))
                }
                Atom::Local(_) => return Err(err(start, format!("a bare atom is ambiguous on {f} factors"))),
            }
        }
        if atoms.len() != f {
            return Err(err(start, format!("box product has {} atoms for {f} factors", atoms.len())));
        }
        let mut parts = Vec::new();
        for (a, &fac) in atoms.into_iter().zip(self.factors) {
            match a {
                Atom::Local(w) => parts.push(w.resolve(fac, start)?),
                Atom::Global(_) => return Err(err(start, "global bundle inside a box product")),
            }
        }
        Ok(BundleExpr::from_summand(IrredSummand { parts }, 1))
    }

    fn atom(&mut self) -> Result<Atom> {
        let pos = self.pos();
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(err(pos, "expected a bundle name")),
        };
        self.i += 1;
        let args = if self.peek() == Some(&Tok::LParen) { Some(self.int_list()?) } else { None };
        let twist = |args: &Option<Vec<i64>>| -> Result<i64> {
            match args.as_deref() {
                None => Ok(0),
                Some([t]) => Ok(*t),
                Some(_) => Err(err(pos, format!("{name} takes one twist"))),
            }
        };
        let kind = match name.as_str() {
            "cotangent" => {
                if args.is_some() {
                    return Err(err(pos, "cotangent takes no arguments"));
                }
                return Ok(Atom::Global(ambient_cotangent(self.factors)));
            }
            "O" => {
                if let Some(v) = &args {
                    if v.len() == self.factors.len() && v.len() > 1 {
                        return Ok(Atom::Global(BundleExpr::line(self.factors, v)));
                    }
                }
                Kind::O
            }
            "U" => Kind::U,
            "Udual" => Kind::Udual,
            "Q" => Kind::Q,
            "Qdual" => Kind::Qdual,
            "wedge2Udual" => Kind::Wedge2Udual,
            _ => return Err(err(pos, format!("unknown bundle {name:?}"))),
        };
        Ok(Atom::Local(LocalAtom { kind, twist: twist(&args)? }))
    }
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    O,
    U,
    Udual,
    Q,
    Qdual,
    Wedge2Udual,
}

#[derive(Debug, Clone, Copy)]
struct LocalAtom {
    kind: Kind,
    twist: i64,
}

impl LocalAtom {
    fn resolve(&self, f: GrassFactor, pos: usize) -> Result<FactorWeight> {
        let (k, q) = (f.k, f.n - f.k);
        let mut a = vec![0i64; k];
        let mut b = vec![0i64; q];
        match self.kind {
            Kind::O => {}
            Kind::U => a[k - 1] = -1,
            Kind::Udual => a[0] = 1,
            Kind::Q => b[q - 1] = -1,
            Kind::Qdual => b[0] = 1,
            Kind::Wedge2Udual => {
                if k < 2 {
                    return Err(err(pos, format!("wedge2Udual needs rank at least 2 on {f}")));
                }
                a[0] = 1;
                a[1] = 1;
            }
        }
        a.iter_mut().for_each(|x| *x += self.twist);
        FactorWeight::new(f, a, b)
    }
}

enum Atom {
    Local(LocalAtom),
    Global(BundleExpr),
}

pub fn parse_bundle(factors: &[GrassFactor], s: &str) -> Result<BundleExpr> {
    if s.trim() == "0" {
        return Ok(BundleExpr::zero());
    }
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(err(0, "empty bundle"));
    }
    Parser { toks, i: 0, factors, end: s.chars().count() }.sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bwb::cohomology;

    #[test]
    fn factors() {
        let f = parse_factors("Gr(2,4)xP(3)").unwrap();
        assert_eq!(f, vec![GrassFactor { k: 2, n: 4 }, GrassFactor { k: 1, n: 4 }]);
        assert_eq!(parse_factors("Gr(2,5) × P3").unwrap().len(), 2);
        assert!(parse_factors("Gr(5,5)").is_err());
        assert!(parse_factors("Fl(1,2,3)").is_err());
    }

    #[test]
    fn bundles() {
        let f = parse_factors("Gr(2,4)xP(3)").unwrap();
        let e = parse_bundle(&f, "Udual x O(1) + O(1,1) + O(1,0)").unwrap();
        assert_eq!(e.rank(), 4);
        assert_eq!(e.det_degrees(2), vec![3, 3]);
        let g = parse_factors("Gr(2,5)").unwrap();
        let e = parse_bundle(&g, "O(1)^5").unwrap();
        assert_eq!(e.rank(), 5);
        assert_eq!(cohomology(&g, &parse_bundle(&g, "O(1)").unwrap()).values().unwrap()[0], 10);
        assert!(parse_bundle(&f, "Udual").is_err());
        assert!(parse_bundle(&f, "Udual x").is_err());
        assert!(parse_bundle(&f, "Foo x O").is_err());
    }
}
