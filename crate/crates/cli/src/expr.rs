//! Small expression language for custom sources and potentials:
//! `x`, numbers, `+ - * ^`, parentheses and `chi(a, b)`, the indicator of
//! [a, b].

use std::fmt;
use std::sync::Arc;

use fracfem::Field;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    X,
    Const(f64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Chi(f64, f64),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("expression error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, at: 0, len: src.len() };
        let e = p.sum()?;
        match p.peek() {
            None => Ok(e),
            Some((pos, t)) => Err(ParseError { pos, msg: format!("unexpected {t}") }),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::X => x,
            Expr::Const(c) => *c,
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Pow(a, b) => {
                let (base, e) = (a.eval(x), b.eval(x));
                if e.fract() == 0.0 && e.abs() < 64.0 {
                    base.powi(e as i32)
                } else {
                    base.powf(e)
                }
            }
            Expr::Chi(a, b) => {
                if *a <= x && x <= *b {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn constant(&self) -> Option<f64> {
        match self {
            Expr::X | Expr::Chi(..) => None,
            Expr::Const(c) => Some(*c),
            Expr::Neg(a) => a.constant().map(|v| -v),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Pow(a, b) => {
                a.constant().and(b.constant()).map(|_| self.eval(0.0))
            }
        }
    }

    /// Interior jump locations of the `chi` factors.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breaks(&mut out);
        out.retain(|&b| b > 0.0 && b < 1.0);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn collect_breaks(&self, out: &mut Vec<f64>) {
        match self {
            Expr::X | Expr::Const(_) => {}
            Expr::Chi(a, b) => out.extend([*a, *b]),
            Expr::Neg(a) => a.collect_breaks(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Pow(a, b) => {
                a.collect_breaks(out);
                b.collect_breaks(out);
            }
        }
    }

    /// Wraps the expression as a [`Field`] behaving like x^hint at 0.
    pub fn into_field(self, hint: f64) -> fracfem::Result<Field> {
        let breaks = self.breakpoints();
        let e = Arc::new(self);
        Field::from_fn(move |x| e.eval(x), hint, &breaks)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    X,
    Chi,
    Op(char),
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::X => write!(f, "'x'"),
            Tok::Chi => write!(f, "'chi'"),
            Tok::Op(c) => write!(f, "'{c}'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Comma => write!(f, "','"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '+' | '-' | '*' | '^' => {
                out.push((pos, Tok::Op(c)));
                it.next();
            }
            '\u{2212}' => {
                out.push((pos, Tok::Op('-')));
                it.next();
            }
            '\u{00b7}' => {
                out.push((pos, Tok::Op('*')));
                it.next();
            }
            '(' => {
                out.push((pos, Tok::LParen));
                it.next();
            }
            ')' => {
                out.push((pos, Tok::RParen));
                it.next();
            }
            ',' => {
                out.push((pos, Tok::Comma));
                it.next();
            }
            c if c.is_ascii_digit() || c == '.' => {
                let mut end = pos;
                let mut prev = ' ';
                while let Some(&(i, d)) = it.peek() {
                    let exp_sign = (d == '+' || d == '-') && (prev == 'e' || prev == 'E');
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                        end = i + d.len_utf8();
                        prev = d;
                        it.next();
                    } else {
                        break;
                    }
                }
                let text = &src[pos..end];
                let v = text
                    .parse::<f64>()
                    .map_err(|_| ParseError { pos, msg: format!("bad number '{text}'") })?;
                out.push((pos, Tok::Num(v)));
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = pos;
                while let Some(&(i, d)) = it.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = i + 1;
                        it.next();
                    } else {
                        break;
                    }
                }
                match &src[pos..end] {
                    "x" => out.push((pos, Tok::X)),
                    "chi" => out.push((pos, Tok::Chi)),
                    w => return Err(ParseError { pos, msg: format!("unknown identifier '{w}'") }),
                }
            }
            other => return Err(ParseError { pos, msg: format!("unexpected character '{other}'") }),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<(usize, &Tok)> {
        self.tokens.get(self.at).map(|(p, t)| (*p, t))
    }

    fn pos(&self) -> usize {
        self.peek().map_or(self.len, |(p, _)| p)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some((_, t)) if *t == want => {
                self.at += 1;
                Ok(())
            }
            Some((pos, t)) => Err(ParseError { pos, msg: format!("expected {want}, found {t}") }),
            None => Err(ParseError { pos: self.len, msg: format!("expected {want}, found end of input") }),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        while let Some((_, Tok::Op(c @ ('+' | '-')))) = self.peek() {
            let c = *c;
            self.at += 1;
            let rhs = self.product()?;
            lhs = if c == '+' { Expr::Add(lhs.into(), rhs.into()) } else { Expr::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some((_, Tok::Op('*'))) = self.peek() {
            self.at += 1;
            let rhs = self.unary()?;
            lhs = Expr::Mul(lhs.into(), rhs.into());
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some((_, Tok::Op('-'))) => {
                self.at += 1;
                Ok(Expr::Neg(self.unary()?.into()))
            }
            Some((_, Tok::Op('+'))) => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    // right associative; binds tighter than unary minus on its left
    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if let Some((_, Tok::Op('^'))) = self.peek() {
            self.at += 1;
            let exp = self.unary()?;
            return Ok(Expr::Pow(base.into(), exp.into()));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().map(|(_, t)| t.clone()) {
            Some(Tok::Num(v)) => {
                self.at += 1;
                Ok(Expr::Const(v))
            }
            Some(Tok::X) => {
                self.at += 1;
                Ok(Expr::X)
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Chi) => {
                self.at += 1;
                self.expect(Tok::LParen)?;
                let a = self.const_arg()?;
                self.expect(Tok::Comma)?;
                let b = self.const_arg()?;
                self.expect(Tok::RParen)?;
                if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
                    return Err(ParseError { pos, msg: format!("chi needs a < b, got ({a}, {b})") });
                }
                Ok(Expr::Chi(a, b))
            }
            Some(t) => Err(ParseError { pos, msg: format!("unexpected {t}") }),
            None => Err(ParseError { pos, msg: "unexpected end of input".into() }),
        }
    }

    fn const_arg(&mut self) -> Result<f64, ParseError> {
        let pos = self.pos();
        self.sum()?
            .constant()
            .filter(|v| v.is_finite())
            .ok_or(ParseError { pos, msg: "chi bounds must be constants".into() })
    }
}
