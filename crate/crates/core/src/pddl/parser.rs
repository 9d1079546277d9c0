//! Recursive-descent parser for PDDL domains and problems over the token
//! stream produced by the lexer.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use super::ast::*;
use super::lexer::{lex, Token, TokenKind};
use super::PddlError;

pub fn parse_domain(text: &str) -> Result<PlanningDomain, PddlError> {
    let tokens = lex(text)?;
    let mut p = Parser::new(&tokens);
    let domain = p.domain()?;
    p.expect_end()?;
    validate_domain(&domain)?;
    Ok(domain)
}

pub fn parse_problem(text: &str) -> Result<PlanningProblem, PddlError> {
    let tokens = lex(text)?;
    let mut p = Parser::new(&tokens);
    let problem = p.problem()?;
    p.expect_end()?;
    Ok(problem)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum ListKind {
    Variables,
    Names,
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token]) -> Self {
        Parser { tokens, pos: 0 }
    }

    fn line(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|t| t.line)
            .unwrap_or(0)
    }

    fn err(&self, message: impl Into<String>) -> PddlError {
        PddlError::Syntax {
            line: self.line(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn next(&mut self) -> Result<&'a TokenKind, PddlError> {
        let tok = self
            .tokens
            .get(self.pos)
            .ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        Ok(&tok.kind)
    }

    fn expect_end(&self) -> Result<(), PddlError> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.err("trailing tokens after document"))
        }
    }

    fn expect_lparen(&mut self) -> Result<(), PddlError> {
        match self.next()? {
            TokenKind::LParen => Ok(()),
            other => Err(self.err(format!("expected `(`, found {other:?}"))),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), PddlError> {
        match self.next()? {
            TokenKind::RParen => Ok(()),
            other => Err(self.err(format!("expected `)`, found {other:?}"))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), PddlError> {
        match self.next()? {
            TokenKind::Keyword(k) if k == kw => Ok(()),
            other => Err(self.err(format!("expected `{kw}`, found {other:?}"))),
        }
    }

    fn expect_name(&mut self) -> Result<String, PddlError> {
        match self.next()? {
            TokenKind::Name(n) => Ok(n.clone()),
            other => Err(self.err(format!("expected name, found {other:?}"))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(TokenKind::Keyword(k)) if k == kw)
    }

    // ---- domain ----------------------------------------------------------

    fn domain(&mut self) -> Result<PlanningDomain, PddlError> {
        self.expect_lparen()?;
        self.expect_keyword("define")?;
        self.expect_lparen()?;
        self.expect_keyword("domain")?;
        let name = self.expect_name()?;
        self.expect_rparen()?;

        let mut requirements = Vec::new();
        let mut types = Vec::new();
        let mut constants = Vec::new();
        let mut predicates = Vec::new();
        let mut actions = Vec::new();

        loop {
            match self.peek() {
                Some(TokenKind::RParen) => {
                    self.next()?;
                    break;
                }
                Some(TokenKind::LParen) => {
                    self.next()?;
                    match self.next()? {
                        TokenKind::Keyword(k) if k == ":requirements" => {
                            requirements = self.requirement_list()?;
                        }
                        TokenKind::Keyword(k) if k == ":types" => {
                            types = self.name_list()?;
                        }
                        TokenKind::Keyword(k) if k == ":constants" => {
                            constants = self.typed_list(ListKind::Names)?;
                            self.expect_rparen()?;
                        }
                        TokenKind::Keyword(k) if k == ":predicates" => {
                            while matches!(self.peek(), Some(TokenKind::LParen)) {
                                predicates.push(self.predicate_decl()?);
                            }
                            self.expect_rparen()?;
                        }
                        TokenKind::Keyword(k) if k == ":action" => {
                            actions.push(self.action()?);
                        }
                        other => {
                            return Err(self.err(format!(
                                "unexpected domain section {other:?}"
                            )))
                        }
                    }
                }
                other => return Err(self.err(format!("expected domain section, found {other:?}"))),
            }
        }

        Ok(PlanningDomain {
            name,
            requirements,
            types,
            constants,
            predicates,
            actions,
        })
    }

    fn requirement_list(&mut self) -> Result<Vec<String>, PddlError> {
        let mut out = Vec::new();
        loop {
            match self.next()? {
                TokenKind::RParen => break,
                TokenKind::Keyword(k) if k.starts_with(':') => out.push(k.clone()),
                TokenKind::Name(n) if n.starts_with(':') => out.push(n.clone()),
                other => return Err(self.err(format!("bad requirement flag {other:?}"))),
            }
        }
        Ok(out)
    }

    fn name_list(&mut self) -> Result<Vec<String>, PddlError> {
        let mut out = Vec::new();
        loop {
            match self.next()? {
                TokenKind::RParen => break,
                TokenKind::Name(n) => out.push(n.clone()),
                other => return Err(self.err(format!("expected name, found {other:?}"))),
            }
        }
        Ok(out)
    }

    /// `a b - t c - u d` style typed list; a trailing run without `- type`
    /// stays untyped. Stops before `)` without consuming it.
    fn typed_list(&mut self, kind: ListKind) -> Result<Vec<Term>, PddlError> {
        let mut out = Vec::new();
        let mut pending: Vec<String> = Vec::new();
        loop {
            match self.peek() {
                Some(TokenKind::RParen) | None => break,
                Some(TokenKind::Variable(_)) if kind == ListKind::Variables => {
                    if let TokenKind::Variable(v) = self.next()? {
                        pending.push(v.clone());
                    }
                }
                Some(TokenKind::Name(_)) if kind == ListKind::Names => {
                    if let TokenKind::Name(n) = self.next()? {
                        pending.push(n.clone());
                    }
                }
                Some(TokenKind::Hyphen) => {
                    self.next()?;
                    let ty = self.expect_name()?;
                    if pending.is_empty() {
                        return Err(self.err("type without preceding names"));
                    }
                    for name in pending.drain(..) {
                        out.push(match kind {
                            ListKind::Variables => Term::variable(name, Some(ty.clone())),
                            ListKind::Names => Term::constant(name, Some(ty.clone())),
                        });
                    }
                }
                other => return Err(self.err(format!("unexpected token in typed list {other:?}"))),
            }
        }
        for name in pending {
            out.push(match kind {
                ListKind::Variables => Term::variable(name, None),
                ListKind::Names => Term::constant(name, None),
            });
        }
        Ok(out)
    }

    fn predicate_decl(&mut self) -> Result<Predicate, PddlError> {
        self.expect_lparen()?;
        let name = self.expect_name()?;
        let args = self.typed_list(ListKind::Variables)?;
        self.expect_rparen()?;
        Ok(Predicate::new(name, args))
    }

    fn action(&mut self) -> Result<ActionSchema, PddlError> {
        let name = self.expect_name()?;
        self.expect_keyword(":parameters")?;
        self.expect_lparen()?;
        let parameters = self.typed_list(ListKind::Variables)?;
        self.expect_rparen()?;
        self.expect_keyword(":precondition")?;
        let precondition = self.condition()?;
        self.expect_keyword(":effect")?;
        let effect = self.effect()?;
        self.expect_rparen()?;
        Ok(ActionSchema {
            name,
            parameters,
            precondition,
            effect,
        })
    }

    // ---- formulas --------------------------------------------------------

    fn term(&mut self) -> Result<Term, PddlError> {
        match self.next()? {
            TokenKind::Variable(v) => Ok(Term::variable(v.clone(), None)),
            TokenKind::Name(n) => Ok(Term::constant(n.clone(), None)),
            other => Err(self.err(format!("expected term, found {other:?}"))),
        }
    }

    /// Parses the inside of `( ... )` as a predicate use, `(` already eaten.
    fn predicate_use(&mut self) -> Result<Predicate, PddlError> {
        match self.next()? {
            TokenKind::Equals => {
                let a = self.term()?;
                let b = self.term()?;
                self.expect_rparen()?;
                Ok(Predicate::new("=", vec![a, b]))
            }
            TokenKind::Name(name) => {
                let name = name.clone();
                let mut args = Vec::new();
                while !matches!(self.peek(), Some(TokenKind::RParen)) {
                    args.push(self.term()?);
                }
                self.expect_rparen()?;
                Ok(Predicate::new(name, args))
            }
            other => Err(self.err(format!("expected predicate, found {other:?}"))),
        }
    }

    fn condition(&mut self) -> Result<Formula, PddlError> {
        self.expect_lparen()?;
        match self.peek() {
            Some(TokenKind::Keyword(k)) => match k.as_str() {
                "and" => {
                    self.next()?;
                    let mut items = Vec::new();
                    while !matches!(self.peek(), Some(TokenKind::RParen)) {
                        items.push(self.condition()?);
                    }
                    self.expect_rparen()?;
                    Ok(Formula::And(items))
                }
                "or" => {
                    self.next()?;
                    let mut items = Vec::new();
                    while !matches!(self.peek(), Some(TokenKind::RParen)) {
                        items.push(self.condition()?);
                    }
                    self.expect_rparen()?;
                    Ok(Formula::Or(items))
                }
                "not" => {
                    self.next()?;
                    let inner = self.condition()?;
                    self.expect_rparen()?;
                    Ok(match inner {
                        Formula::Literal(lit) if lit.positive => {
                            Formula::neg_atom(lit.predicate)
                        }
                        other => Formula::Not(Box::new(other)),
                    })
                }
                "imply" => {
                    self.next()?;
                    let a = self.condition()?;
                    let b = self.condition()?;
                    self.expect_rparen()?;
                    Ok(Formula::Imply(Box::new(a), Box::new(b)))
                }
                "forall" | "exists" => {
                    let is_forall = k == "forall";
                    self.next()?;
                    self.expect_lparen()?;
                    let vars = self.typed_list(ListKind::Variables)?;
                    self.expect_rparen()?;
                    let body = self.condition()?;
                    self.expect_rparen()?;
                    Ok(if is_forall {
                        Formula::Forall(vars, Box::new(body))
                    } else {
                        Formula::Exists(vars, Box::new(body))
                    })
                }
                "oneof" | "when" => Err(self.err(format!("`{k}` not allowed in condition"))),
                other => Err(self.err(format!("unexpected `{other}` in condition"))),
            },
            _ => Ok(Formula::atom(self.predicate_use()?)),
        }
    }

    fn effect(&mut self) -> Result<Formula, PddlError> {
        self.expect_lparen()?;
        match self.peek() {
            Some(TokenKind::Keyword(k)) => match k.as_str() {
                "and" => {
                    self.next()?;
                    let mut items = Vec::new();
                    while !matches!(self.peek(), Some(TokenKind::RParen)) {
                        items.push(self.effect()?);
                    }
                    self.expect_rparen()?;
                    Ok(Formula::And(items))
                }
                "oneof" => {
                    self.next()?;
                    let mut items = Vec::new();
                    while !matches!(self.peek(), Some(TokenKind::RParen)) {
                        items.push(self.effect()?);
                    }
                    self.expect_rparen()?;
                    if items.len() < 2 {
                        return Err(self.err("`oneof` needs at least 2 alternatives"));
                    }
                    Ok(Formula::Oneof(items))
                }
                "when" => {
                    self.next()?;
                    let cond = self.condition()?;
                    let eff = self.effect()?;
                    self.expect_rparen()?;
                    Ok(Formula::When(Box::new(cond), Box::new(eff)))
                }
                "forall" => {
                    self.next()?;
                    self.expect_lparen()?;
                    let vars = self.typed_list(ListKind::Variables)?;
                    self.expect_rparen()?;
                    let body = self.effect()?;
                    self.expect_rparen()?;
                    Ok(Formula::Forall(vars, Box::new(body)))
                }
                "not" => {
                    self.next()?;
                    self.expect_lparen()?;
                    let pred = self.predicate_use()?;
                    self.expect_rparen()?;
                    Ok(Formula::neg_atom(pred))
                }
                other => Err(self.err(format!("`{other}` not allowed in effect"))),
            },
            _ => Ok(Formula::atom(self.predicate_use()?)),
        }
    }

    // ---- problem ---------------------------------------------------------

    fn problem(&mut self) -> Result<PlanningProblem, PddlError> {
        self.expect_lparen()?;
        self.expect_keyword("define")?;
        self.expect_lparen()?;
        self.expect_keyword("problem")?;
        let name = self.expect_name()?;
        self.expect_rparen()?;

        self.expect_lparen()?;
        self.expect_keyword(":domain")?;
        let domain_name = self.expect_name()?;
        self.expect_rparen()?;

        self.expect_lparen()?;
        self.expect_keyword(":objects")?;
        let object_terms = self.typed_list(ListKind::Names)?;
        self.expect_rparen()?;
        let mut objects: BTreeMap<Option<String>, Vec<String>> = BTreeMap::new();
        for term in object_terms {
            objects
                .entry(term.type_name().map(String::from))
                .or_default()
                .push(term.name().to_string());
        }

        self.expect_lparen()?;
        self.expect_keyword(":init")?;
        let init = self.init_atoms()?;

        self.expect_lparen()?;
        self.expect_keyword(":goal")?;
        let goal = self.goal_formula()?;
        self.expect_rparen()?;
        self.expect_rparen()?;

        Ok(PlanningProblem {
            name,
            domain_name,
            objects,
            init,
            goal,
        })
    }

    fn ground_atom(&mut self) -> Result<Predicate, PddlError> {
        let line = self.line();
        let pred = self.predicate_use()?;
        if !pred.is_ground() {
            return Err(PddlError::NonGroundAtom {
                line,
                atom: format!("{pred}"),
            });
        }
        Ok(pred)
    }

    /// `(:init a1 a2 ...)` or `(:init (and a1 a2 ...))`.
    fn init_atoms(&mut self) -> Result<BTreeSet<Predicate>, PddlError> {
        let mut atoms = BTreeSet::new();
        // Look ahead for the wrapped-`and` form.
        let wrapped = matches!(
            (self.peek(), self.tokens.get(self.pos + 1).map(|t| &t.kind)),
            (
                Some(TokenKind::LParen),
                Some(TokenKind::Keyword(k))
            ) if k == "and"
        );
        if wrapped {
            self.next()?;
            self.next()?;
            while !matches!(self.peek(), Some(TokenKind::RParen)) {
                self.expect_lparen()?;
                atoms.insert(self.ground_atom()?);
            }
            self.expect_rparen()?;
            self.expect_rparen()?;
        } else {
            while !matches!(self.peek(), Some(TokenKind::RParen)) {
                self.expect_lparen()?;
                atoms.insert(self.ground_atom()?);
            }
            self.expect_rparen()?;
        }
        Ok(atoms)
    }

    /// A single ground atom or a conjunction of ground atoms; anything
    /// richer is rejected (temporal formulas carry the expressivity).
    fn goal_formula(&mut self) -> Result<Formula, PddlError> {
        self.expect_lparen()?;
        if self.at_keyword("and") {
            self.next()?;
            let mut items = Vec::new();
            while !matches!(self.peek(), Some(TokenKind::RParen)) {
                self.expect_lparen()?;
                items.push(Formula::atom(self.ground_atom()?));
            }
            self.expect_rparen()?;
            Ok(Formula::And(items))
        } else if matches!(self.peek(), Some(TokenKind::Keyword(_))) {
            Err(self.err("goal must be a ground atom or a conjunction of ground atoms"))
        } else {
            Ok(Formula::atom(self.ground_atom()?))
        }
    }
}

// ---- domain validation -----------------------------------------------

fn validate_domain(domain: &PlanningDomain) -> Result<(), PddlError> {
    let mut seen = BTreeSet::new();
    for pred in &domain.predicates {
        if !seen.insert(pred.name.clone()) {
            return Err(PddlError::DuplicatePredicate {
                name: pred.name.clone(),
            });
        }
    }
    let mut seen = BTreeSet::new();
    for action in &domain.actions {
        if !seen.insert(action.name.clone()) {
            return Err(PddlError::DuplicateAction {
                name: action.name.clone(),
            });
        }
    }

    for action in &domain.actions {
        for formula in [&action.precondition, &action.effect] {
            let mut problem = None;
            formula.visit_predicates(&mut |pred| {
                if problem.is_some() || pred.is_equality() {
                    return;
                }
                match domain.predicate(&pred.name) {
                    None => {
                        problem = Some(PddlError::UndeclaredPredicate {
                            name: pred.name.clone(),
                            action: action.name.clone(),
                        })
                    }
                    Some(decl) if decl.arity() != pred.arity() => {
                        problem = Some(PddlError::ArityMismatch {
                            name: pred.name.clone(),
                            declared: decl.arity(),
                            used: pred.arity(),
                            action: action.name.clone(),
                        })
                    }
                    Some(_) => {}
                }
            });
            if let Some(e) = problem {
                return Err(e);
            }
        }

        let params: BTreeSet<String> = action
            .parameters
            .iter()
            .map(|t| t.name().to_string())
            .collect();
        for formula in [&action.precondition, &action.effect] {
            for var in formula.free_variables() {
                if !params.contains(&var) {
                    return Err(PddlError::FreeVariable {
                        variable: var,
                        action: action.name.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Non-fatal observations about a parsed domain, e.g. `oneof` used without
/// declaring `:non-deterministic`.
pub fn lint_domain(domain: &PlanningDomain) -> Vec<String> {
    let mut warnings = Vec::new();
    let uses_oneof = domain.actions.iter().any(|a| {
        let mut found = false;
        a.effect.visit_structure(&mut |f| {
            if matches!(f, Formula::Oneof(_)) {
                found = true;
            }
        });
        found
    });
    if uses_oneof
        && !domain
            .requirements
            .iter()
            .any(|r| r == ":non-deterministic")
    {
        warnings.push(format!(
            "domain `{}` uses `oneof` but does not declare :non-deterministic",
            domain.name
        ));
    }
    warnings
}
