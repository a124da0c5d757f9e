//! Literals in configs: series such as `u*t^-2 + t^-1`, Eisenstein
//! polynomials in `X` and substitution maps such as `t -> t, u -> v^2`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::series_arith::{Fq, LaurentSeries, LocalField};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut n: i64 = 0;
            while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(d as i64))
                    .ok_or_else(|| Error::Parse(format!("integer overflow in {s:?}")))?;
                chars.next();
            }
            out.push(Tok::Num(n));
        } else if c.is_alphabetic() || c == '_' {
            let mut id = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    id.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Tok::Ident(id));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            chars.next();
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Num(i64),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} of {:?}", self.pos + 1, self.src))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), self.exponent()?));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let n = match self.peek() {
            Some(Tok::Num(n)) => *n,
            _ => return Err(self.err("expected an integer exponent")),
        };
        self.pos += 1;
        if paren && !self.eat(')') {
            return Err(self.err("expected ')'"));
        }
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                Ok(Expr::Sym(id))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err("expected a number, a symbol or '('")),
        }
    }
}

fn parse_expr(s: &str) -> Result<Expr> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks: &toks, pos: 0, src: s };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Values the evaluator works over: series, or polynomials in X with
/// series coefficients.
trait Ring: Sized + Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Result<Self>;
    fn pow(&self, e: i64) -> Result<Self>;
    fn neg(&self) -> Self;
}

impl Ring for LaurentSeries {
    fn add(&self, o: &Self) -> Self {
        LaurentSeries::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        LaurentSeries::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        LaurentSeries::mul(self, o)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        LaurentSeries::div(self, o)
    }
    fn pow(&self, e: i64) -> Result<Self> {
        self.pow_i64(e)
    }
    fn neg(&self) -> Self {
        LaurentSeries::neg(self)
    }
}

#[derive(Clone, Debug)]
struct XPoly(Vec<LaurentSeries>);

impl XPoly {
    fn trim(mut self) -> Self {
        while self.0.len() > 1 && self.0.last().is_some_and(|c| c.is_exact_zero()) {
            self.0.pop();
        }
        self
    }

    fn zip(&self, o: &Self, f: impl Fn(&LaurentSeries, &LaurentSeries) -> LaurentSeries) -> Self {
        let k = self.0[0].field();
        let n = self.0.len().max(o.0.len());
        let get = |v: &[LaurentSeries], i: usize| v.get(i).cloned().unwrap_or_else(|| LaurentSeries::zero(k));
        XPoly((0..n).map(|i| f(&get(&self.0, i), &get(&o.0, i))).collect()).trim()
    }
}

impl Ring for XPoly {
    fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }
    fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }
    fn mul(&self, o: &Self) -> Self {
        let k = self.0[0].field();
        let mut out = vec![LaurentSeries::zero(k); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        XPoly(out).trim()
    }
    fn div(&self, o: &Self) -> Result<Self> {
        if o.0.len() != 1 {
            return Err(Error::Parse("division by a polynomial in X".into()));
        }
        Ok(XPoly(self.0.iter().map(|c| c.div(&o.0[0])).collect::<Result<_>>()?))
    }
    fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            if self.0.len() == 1 {
                return Ok(XPoly(vec![self.0[0].pow_i64(e)?]));
            }
            return Err(Error::Parse("negative power of a polynomial in X".into()));
        }
        let k = self.0[0].field();
        let mut acc = XPoly(vec![LaurentSeries::one(k)]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        Ok(acc)
    }
    fn neg(&self) -> Self {
        XPoly(self.0.iter().map(|c| c.neg()).collect())
    }
}

fn eval<R: Ring>(e: &Expr, leaf: &dyn Fn(&Expr) -> Result<R>) -> Result<R> {
    Ok(match e {
        Expr::Num(_) | Expr::Sym(_) => leaf(e)?,
        Expr::Neg(a) => eval(a, leaf)?.neg(),
        Expr::Add(a, b) => eval(a, leaf)?.add(&eval(b, leaf)?),
        Expr::Sub(a, b) => eval(a, leaf)?.sub(&eval(b, leaf)?),
        Expr::Mul(a, b) => eval(a, leaf)?.mul(&eval(b, leaf)?),
        Expr::Div(a, b) => eval(a, leaf)?.div(&eval(b, leaf)?)?,
        Expr::Pow(a, n) => eval(a, leaf)?.pow(*n)?,
    })
}

fn series_leaf(k: &Arc<LocalField>, e: &Expr) -> Result<LaurentSeries> {
    let res = k.residue();
    match e {
        Expr::Num(n) => Ok(LaurentSeries::from_int(k, *n)),
        Expr::Sym(s) if s == "t" => Ok(LaurentSeries::t(k)),
        Expr::Sym(s) if s == res.generator_name() && res.fq().degree() > 1 => {
            Ok(LaurentSeries::from_fq(k, res.fq().generator()))
        }
        Expr::Sym(s) => match res.var_names().iter().position(|v| v == s) {
            Some(i) => Ok(LaurentSeries::constant(k, res.var(i))),
            None => Err(Error::Parse(format!("unknown symbol {s:?}"))),
        },
        _ => unreachable!(),
    }
}

/// Parses an element of K = F((t)).
pub fn parse_series(k: &Arc<LocalField>, s: &str) -> Result<LaurentSeries> {
    let e = parse_expr(s)?;
    eval(&e, &|leaf| series_leaf(k, leaf))
}

/// Parses a monic polynomial in `var` over K and returns its coefficients
/// from the constant term up, including the leading 1.
pub fn parse_polynomial(k: &Arc<LocalField>, var: &str, s: &str) -> Result<Vec<LaurentSeries>> {
    let e = parse_expr(s)?;
    let p: XPoly = eval(&e, &|leaf| match leaf {
        Expr::Sym(v) if v == var => Ok(XPoly(vec![LaurentSeries::zero(k), LaurentSeries::one(k)])),
        _ => Ok(XPoly(vec![series_leaf(k, leaf)?])),
    })?;
    Ok(p.0)
}

/// A parsed substitution map of K into K'.
#[derive(Clone, Debug)]
pub struct Substitution {
    pub t_image: LaurentSeries,
    pub u_images: Vec<LaurentSeries>,
    pub gen_image: Option<Fq>,
}

/// Parses `t -> T, u -> U, a -> b^2`; unmentioned transcendentals map to
/// the variable of the same name in K'.
pub fn parse_substitution(source: &Arc<LocalField>, target: &Arc<LocalField>, s: &str) -> Result<Substitution> {
    let sres = source.residue();
    let mut t_image = None;
    let mut u_images: Vec<Option<LaurentSeries>> = vec![None; sres.nvars()];
    let mut gen_image = None;
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (lhs, rhs) = part
            .split_once("->")
            .ok_or_else(|| Error::Parse(format!("expected 'x -> image' in {part:?}")))?;
        let lhs = lhs.trim();
        let image = parse_series(target, rhs.trim())?;
        if lhs == "t" {
            t_image = Some(image);
        } else if let Some(i) = sres.var_names().iter().position(|v| v == lhs) {
            u_images[i] = Some(image);
        } else if lhs == sres.generator_name() {
            let constant = image.is_exact() && image.terms().all(|(e, _)| e == 0);
            let c = Some(image.coeff(0))
                .filter(|_| constant)
                .and_then(|c| c.as_const())
                .ok_or_else(|| Error::Parse(format!("image of {lhs} must be a constant")))?;
            gen_image = Some(c);
        } else {
            return Err(Error::Parse(format!("{lhs:?} is not t, a transcendental or the generator of the source")));
        }
    }
    let tres = target.residue();
    let u_images = u_images
        .into_iter()
        .enumerate()
        .map(|(i, img)| match img {
            Some(x) => Ok(x),
            None => {
                let name = &sres.var_names()[i];
                match tres.var_names().iter().position(|v| v == name) {
                    Some(l) => Ok(LaurentSeries::constant(target, tres.var(l))),
                    None => Err(Error::Parse(format!("no image given for {name}"))),
                }
            }
        })
        .collect::<Result<_>>()?;
    Ok(Substitution { t_image: t_image.unwrap_or_else(|| LaurentSeries::t(target)), u_images, gen_image })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series_arith::{FiniteField, ResidueField};

    fn f2u() -> Arc<LocalField> {
        LocalField::new(ResidueField::new(FiniteField::prime(2).unwrap(), "a", vec!["u".into()]).unwrap(), 32)
    }

    #[test]
    fn series_round_trip() {
        let k = f2u();
        let a = parse_series(&k, "u*t^-2 + t^-1").unwrap();
        assert_eq!(a.render(), "u*t^-2 + t^-1");
        let b = parse_series(&k, " u t^(-2)+t^-1 ").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_series(&k, "t^-1 - t^-1").unwrap(), LaurentSeries::zero(&k));
        let c = parse_series(&k, "(1+u)^2/u").unwrap();
        assert_eq!(c.render(), "(u^2 + 1)/u");
    }

    #[test]
    fn polynomial_in_x() {
        let k = LocalField::new(ResidueField::prime(2).unwrap(), 32);
        let f = parse_polynomial(&k, "X", "X^2 + t*X + t").unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f[1], LaurentSeries::t(&k));
        assert!(parse_polynomial(&k, "X", "1/X").is_err());
    }

    #[test]
    fn substitution_defaults() {
        let k = f2u();
        let fq = FiniteField::new(2, crate::series_arith::finite::default_modulus(2, 2)).unwrap();
        let k2 = LocalField::new(ResidueField::new(fq, "b", vec!["u".into(), "v".into()]).unwrap(), 32);
        let s = parse_substitution(&k, &k2, "t -> t + v*t^2").unwrap();
        assert_eq!(s.u_images[0].render(), "u");
        assert_eq!(s.t_image.render(), "t + v*t^2");
        assert!(parse_substitution(&k, &k2, "w -> t").is_err());
        assert!(parse_series(&k, "u ** 2").is_err());
        assert!(parse_series(&k, "z").is_err());
    }
}
