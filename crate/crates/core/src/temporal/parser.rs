//! Concrete syntax for goal formulas. Atoms are lowercase identifiers with
//! optional object lists, boolean connectives are `! & | -> <->`, future
//! operators `X WX U R F G`, past operators `Y S O H`.

use std::collections::HashMap;

use super::{GroundedSymbol, TemporalError, TemporalFormula};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Comma,
    Op(&'static str),
    Ident(String),
    True,
    False,
}

fn lex(text: &str) -> Result<Vec<Tok>, TemporalError> {
    const OPS: &[&str] = &["X", "WX", "U", "R", "F", "G", "Y", "S", "O", "H"];
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '!' | '~' => {
                toks.push(Tok::Not);
                i += 1;
            }
            '&' => {
                toks.push(Tok::And);
                i += 1;
            }
            '|' => {
                toks.push(Tok::Or);
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    toks.push(Tok::Implies);
                    i += 2;
                } else {
                    return Err(TemporalError::Syntax("dangling `-`".into()));
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    toks.push(Tok::Iff);
                    i += 3;
                } else {
                    return Err(TemporalError::Syntax("expected `<->`".into()));
                }
            }
            c if c.is_ascii_uppercase() => {
                let mut word = String::new();
                while i < chars.len() && chars[i].is_ascii_uppercase() {
                    word.push(chars[i]);
                    i += 1;
                }
                match OPS.iter().find(|o| **o == word) {
                    Some(op) => toks.push(Tok::Op(op)),
                    None => {
                        return Err(TemporalError::Syntax(format!(
                            "unknown operator `{word}`"
                        )))
                    }
                }
            }
            c if c.is_ascii_lowercase() || c == '_' || c.is_ascii_digit() => {
                let mut word = String::new();
                while i < chars.len() {
                    let c = chars[i];
                    let ident_char = c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_';
                    // a hyphen continues the name only when followed by
                    // another name character, so `->` still lexes as an arrow
                    let joining_hyphen = c == '-'
                        && matches!(chars.get(i + 1), Some(n) if n.is_ascii_lowercase() || n.is_ascii_digit() || *n == '_');
                    if ident_char || joining_hyphen {
                        word.push(c);
                        i += 1;
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "true" => toks.push(Tok::True),
                    "false" => toks.push(Tok::False),
                    _ => toks.push(Tok::Ident(word)),
                }
            }
            other => {
                return Err(TemporalError::Syntax(format!(
                    "unexpected character `{other}`"
                )))
            }
        }
    }
    Ok(toks)
}

struct P {
    toks: Vec<Tok>,
    pos: usize,
}

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, TemporalError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| TemporalError::Syntax("unexpected end of formula".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn formula(&mut self) -> Result<TemporalFormula, TemporalError> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implies()?;
            lhs = TemporalFormula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<TemporalFormula, TemporalError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            Ok(TemporalFormula::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<TemporalFormula, TemporalError> {
        let mut items = vec![self.and()?];
        while self.eat(&Tok::Or) {
            items.push(self.and()?);
        }
        if items.len() == 1 {
            Ok(items.pop().unwrap())
        } else {
            Ok(TemporalFormula::Or(items))
        }
    }

    fn and(&mut self) -> Result<TemporalFormula, TemporalError> {
        let mut items = vec![self.binary_temporal()?];
        while self.eat(&Tok::And) {
            items.push(self.binary_temporal()?);
        }
        if items.len() == 1 {
            Ok(items.pop().unwrap())
        } else {
            Ok(TemporalFormula::And(items))
        }
    }

    fn binary_temporal(&mut self) -> Result<TemporalFormula, TemporalError> {
        let lhs = self.unary()?;
        match self.peek() {
            Some(Tok::Op(op)) if matches!(*op, "U" | "R" | "S") => {
                let op = *op;
                self.pos += 1;
                let rhs = self.binary_temporal()?;
                Ok(match op {
                    "U" => TemporalFormula::Until(Box::new(lhs), Box::new(rhs)),
                    "R" => TemporalFormula::Release(Box::new(lhs), Box::new(rhs)),
                    _ => TemporalFormula::Since(Box::new(lhs), Box::new(rhs)),
                })
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<TemporalFormula, TemporalError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(TemporalFormula::negated(self.unary()?))
            }
            Some(Tok::Op(op)) if !matches!(*op, "U" | "R" | "S") => {
                let op = *op;
                self.pos += 1;
                let body = Box::new(self.unary()?);
                Ok(match op {
                    "X" => TemporalFormula::Next(body),
                    "WX" => TemporalFormula::WeakNext(body),
                    "F" => TemporalFormula::Eventually(body),
                    "G" => TemporalFormula::Always(body),
                    "Y" => TemporalFormula::Yesterday(body),
                    "O" => TemporalFormula::Once(body),
                    _ => TemporalFormula::Historically(body),
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<TemporalFormula, TemporalError> {
        match self.next()? {
            Tok::True => Ok(TemporalFormula::True),
            Tok::False => Ok(TemporalFormula::False),
            Tok::LParen => {
                let f = self.formula()?;
                match self.next()? {
                    Tok::RParen => Ok(f),
                    other => Err(TemporalError::Syntax(format!(
                        "expected `)`, found {other:?}"
                    ))),
                }
            }
            Tok::Ident(name) => {
                let mut objects = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        match self.next()? {
                            Tok::Ident(obj) => objects.push(obj),
                            other => {
                                return Err(TemporalError::Syntax(format!(
                                    "expected object name, found {other:?}"
                                )))
                            }
                        }
                        match self.next()? {
                            Tok::Comma => continue,
                            Tok::RParen => break,
                            other => {
                                return Err(TemporalError::Syntax(format!(
                                    "expected `,` or `)`, found {other:?}"
                                )))
                            }
                        }
                    }
                }
                Ok(TemporalFormula::Atom(GroundedSymbol::new(name, objects)))
            }
            other => Err(TemporalError::Syntax(format!(
                "unexpected token {other:?}"
            ))),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<TemporalFormula, TemporalError> {
    if text.trim().is_empty() {
        return Err(TemporalError::Syntax("empty formula".into()));
    }
    let toks = lex(text)?;
    let mut p = P { toks, pos: 0 };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(TemporalError::Syntax("trailing tokens".into()));
    }
    let mut arity: HashMap<String, usize> = HashMap::new();
    for sym in f.atoms() {
        match arity.get(&sym.name) {
            Some(&n) if n != sym.objects.len() => {
                return Err(TemporalError::ArityConflict { name: sym.name })
            }
            _ => {
                arity.insert(sym.name.clone(), sym.objects.len());
            }
        }
    }
    Ok(f)
}

/// Parses a single grounded symbol such as `vehicleat(l13)` or `rain`.
pub fn parse_symbol(text: &str) -> Result<GroundedSymbol, TemporalError> {
    match parse_formula(text)? {
        TemporalFormula::Atom(sym) => Ok(sym),
        _ => Err(TemporalError::Syntax(format!(
            "`{text}` is not a grounded symbol"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use TemporalFormula::*;

    #[test]
    fn parses_paper_goals() {
        let f = parse_formula("F(vehicleat(l13))").unwrap();
        assert_eq!(
            f,
            Eventually(Box::new(Atom(GroundedSymbol::new(
                "vehicleat",
                vec!["l13".into()]
            ))))
        );

        let g = parse_formula("vehicleat(l13) & O(vehicleat(l23))").unwrap();
        match g {
            And(items) => {
                assert_eq!(items.len(), 2);
                assert!(matches!(items[1], Once(_)));
            }
            other => panic!("expected conjunction, got {other:?}"),
        }
    }

    #[test]
    fn parses_constants() {
        assert_eq!(parse_formula("true").unwrap(), True);
        assert_eq!(parse_formula("false").unwrap(), False);
    }

    #[test]
    fn precedence_and_binary_ops() {
        let f = parse_formula("a U b & c").unwrap();
        assert_eq!(
            f,
            And(vec![
                Until(
                    Box::new(TemporalFormula::atom("a")),
                    Box::new(TemporalFormula::atom("b"))
                ),
                TemporalFormula::atom("c"),
            ])
        );
        let g = parse_formula("a -> b -> c").unwrap();
        assert!(matches!(g, Implies(_, _)));
    }

    #[test]
    fn arity_conflicts_are_rejected() {
        assert!(matches!(
            parse_formula("a & a(b)"),
            Err(TemporalError::ArityConflict { .. })
        ));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_formula("").is_err());
        assert!(parse_formula("F(").is_err());
        assert!(parse_formula("Q a").is_err());
        assert!(parse_formula("a b").is_err());
    }

    #[test]
    fn hyphenated_atoms() {
        let f = parse_formula("F(not-flattire)").unwrap();
        assert_eq!(
            f,
            Eventually(Box::new(TemporalFormula::atom("not-flattire")))
        );
    }
}
