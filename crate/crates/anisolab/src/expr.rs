//! Tiny arithmetic expression grammar used by config files.
//!
//! Grammar over variables `x1`, `x2`, `p1`, `p2`, `u`, numeric constants and
//! `+ - * /`, unary minus, parentheses, and the functions `sin`, `cos`, `exp`.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Const(f64),
    Var(usize), // index into the environment
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Sin(Box<Node>),
    Cos(Box<Node>),
    Exp(Box<Node>),
}

/// A compiled expression over the variables `x1, x2, p1, p2, u` (in that order).
#[derive(Clone, Debug)]
pub struct Expr {
    root: Node,
    pub source: String,
}

pub const VARS: [&str; 5] = ["x1", "x2", "p1", "p2", "u"];

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let root = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Expr(format!(
                "trailing input at token {} in {src:?}",
                p.pos
            )));
        }
        Ok(Expr {
            root,
            source: src.to_string(),
        })
    }

    /// Evaluate with the full environment [x1, x2, p1, p2, u].
    pub fn eval(&self, env: &[f64; 5]) -> f64 {
        eval_node(&self.root, env)
    }

    pub fn eval_xy(&self, x1: f64, x2: f64) -> f64 {
        self.eval(&[x1, x2, 0.0, 0.0, 0.0])
    }

    pub fn eval_u(&self, u: f64) -> f64 {
        self.eval(&[0.0, 0.0, 0.0, 0.0, u])
    }
}

fn eval_node(n: &Node, env: &[f64; 5]) -> f64 {
    match n {
        Node::Const(c) => *c,
        Node::Var(i) => env[*i],
        Node::Add(a, b) => eval_node(a, env) + eval_node(b, env),
        Node::Sub(a, b) => eval_node(a, env) - eval_node(b, env),
        Node::Mul(a, b) => eval_node(a, env) * eval_node(b, env),
        Node::Div(a, b) => eval_node(a, env) / eval_node(b, env),
        Node::Neg(a) => -eval_node(a, env),
        Node::Sin(a) => eval_node(a, env).sin(),
        Node::Cos(a) => eval_node(a, env).cos(),
        Node::Exp(a) => eval_node(a, env).exp(),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' | '\u{00d7}' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_digit()
                        || bytes[i] == '.'
                        || bytes[i] == 'e'
                        || bytes[i] == 'E'
                        || ((bytes[i] == '+' || bytes[i] == '-')
                            && i > start
                            && (bytes[i - 1] == 'e' || bytes[i - 1] == 'E')))
                {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                let v: f64 = s
                    .parse()
                    .map_err(|_| Error::Expr(format!("bad number {s:?}")))?;
                out.push(Tok::Num(v));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                out.push(Tok::Ident(s));
            }
            other => return Err(Error::Expr(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.next();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Star => {
                    self.next();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.next();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.next();
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Node> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(Node::Const(v)),
            Some(Tok::Ident(name)) => {
                if let Some(idx) = VARS.iter().position(|v| *v == name) {
                    return Ok(Node::Var(idx));
                }
                match name.as_str() {
                    "pi" => return Ok(Node::Const(std::f64::consts::PI)),
                    "sin" | "cos" | "exp" => {}
                    other => {
                        return Err(Error::Expr(format!("unknown identifier {other:?}")));
                    }
                }
                match self.next() {
                    Some(Tok::LParen) => {}
                    _ => return Err(Error::Expr(format!("expected '(' after {name}"))),
                }
                let arg = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => {}
                    _ => return Err(Error::Expr("expected ')'".into())),
                }
                Ok(match name.as_str() {
                    "sin" => Node::Sin(Box::new(arg)),
                    "cos" => Node::Cos(Box::new(arg)),
                    _ => Node::Exp(Box::new(arg)),
                })
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::Expr("expected ')'".into())),
                }
            }
            other => Err(Error::Expr(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_arithmetic() {
        let e = Expr::parse("1 + 2*x1 - x2/4").unwrap();
        assert_eq!(e.eval(&[3.0, 8.0, 0.0, 0.0, 0.0]), 1.0 + 6.0 - 2.0);
    }

    #[test]
    fn parses_functions_and_precedence() {
        let e = Expr::parse("2 + sin(0) * 10").unwrap();
        assert_eq!(e.eval(&[0.0; 5]), 2.0);
        let e = Expr::parse("exp(0) + cos(0)").unwrap();
        assert_eq!(e.eval(&[0.0; 5]), 2.0);
    }

    #[test]
    fn unary_minus_and_nesting() {
        let e = Expr::parse("-(x1 - 2) * (1 + 1)").unwrap();
        assert_eq!(e.eval(&[5.0, 0.0, 0.0, 0.0, 0.0]), -6.0);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Expr::parse("x3 + 1").is_err());
        assert!(Expr::parse("sin 1").is_err());
        assert!(Expr::parse("(1 + 2").is_err());
    }
}
