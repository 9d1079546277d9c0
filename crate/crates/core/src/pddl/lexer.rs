//! PDDL tokenizer. Identifiers are normalized to lowercase here so the rest
//! of the pipeline sees one canonical form; `;` comments run to end of line.

use super::PddlError;

/// Reserved words recognized by the lexer. Anything else shaped like an
/// identifier (including unknown `:req` flags) becomes a plain name.
pub const KEYWORDS: &[&str] = &[
    "define",
    "domain",
    ":requirements",
    ":strips",
    ":adl",
    ":non-deterministic",
    ":equality",
    ":typing",
    ":types",
    ":predicates",
    ":action",
    ":parameters",
    ":precondition",
    ":effect",
    "and",
    "or",
    "not",
    "imply",
    "oneof",
    "forall",
    "exists",
    "when",
    "problem",
    ":objects",
    ":init",
    ":goal",
    ":domain",
    ":constants",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    LParen,
    RParen,
    Hyphen,
    Equals,
    /// A reserved word from [`KEYWORDS`].
    Keyword(String),
    /// Identifier, lowercased. Also covers unreserved `:flag` names.
    Name(String),
    /// Variable, lowercased, stored without the leading `?`.
    Variable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

pub fn lex(text: &str) -> Result<Vec<Token>, PddlError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut chars = text.chars().peekable();

    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => {
                chars.next();
                tokens.push(Token {
                    kind: TokenKind::LParen,
                    line,
                });
            }
            ')' => {
                chars.next();
                tokens.push(Token {
                    kind: TokenKind::RParen,
                    line,
                });
            }
            '=' => {
                chars.next();
                tokens.push(Token {
                    kind: TokenKind::Equals,
                    line,
                });
            }
            '-' => {
                chars.next();
                tokens.push(Token {
                    kind: TokenKind::Hyphen,
                    line,
                });
            }
            '?' => {
                chars.next();
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if is_name_char(c) {
                        name.push(c.to_ascii_lowercase());
                        chars.next();
                    } else {
                        break;
                    }
                }
                if name.is_empty() {
                    return Err(PddlError::Syntax {
                        line,
                        message: "expected variable name after `?`".into(),
                    });
                }
                tokens.push(Token {
                    kind: TokenKind::Variable(name),
                    line,
                });
            }
            ':' => {
                let mut word = String::from(":");
                chars.next();
                while let Some(&c) = chars.peek() {
                    if is_name_char(c) {
                        word.push(c.to_ascii_lowercase());
                        chars.next();
                    } else {
                        break;
                    }
                }
                if word.len() == 1 {
                    return Err(PddlError::Syntax {
                        line,
                        message: "dangling `:`".into(),
                    });
                }
                let kind = if KEYWORDS.contains(&word.as_str()) {
                    TokenKind::Keyword(word)
                } else {
                    TokenKind::Name(word)
                };
                tokens.push(Token { kind, line });
            }
            c if is_name_start(c) => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if is_name_char(c) {
                        word.push(c.to_ascii_lowercase());
                        chars.next();
                    } else {
                        break;
                    }
                }
                let kind = if KEYWORDS.contains(&word.as_str()) {
                    TokenKind::Keyword(word)
                } else {
                    TokenKind::Name(word)
                };
                tokens.push(Token { kind, line });
            }
            other => {
                return Err(PddlError::Syntax {
                    line,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keywords_match_reserved_table() {
        let expected = [
            "define",
            "domain",
            ":requirements",
            ":strips",
            ":adl",
            ":non-deterministic",
            ":equality",
            ":typing",
            ":types",
            ":predicates",
            ":action",
            ":parameters",
            ":precondition",
            ":effect",
            "and",
            "or",
            "not",
            "imply",
            "oneof",
            "forall",
            "exists",
            "when",
            "problem",
            ":objects",
            ":init",
            ":goal",
            ":domain",
            ":constants",
        ];
        assert_eq!(KEYWORDS.len(), expected.len());
        for k in expected {
            assert!(KEYWORDS.contains(&k), "missing keyword {k}");
        }
    }

    #[test]
    fn lowercases_and_skips_comments() {
        let toks = lex("(Define ; comment\n (DOMAIN Hanoi))").unwrap();
        let kinds: Vec<_> = toks.into_iter().map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            vec![
                TokenKind::LParen,
                TokenKind::Keyword("define".into()),
                TokenKind::LParen,
                TokenKind::Keyword("domain".into()),
                TokenKind::Name("hanoi".into()),
                TokenKind::RParen,
                TokenKind::RParen,
            ]
        );
    }

    #[test]
    fn unknown_requirement_flags_are_names() {
        let toks = lex(":negative-preconditions").unwrap();
        assert_eq!(
            toks[0].kind,
            TokenKind::Name(":negative-preconditions".into())
        );
    }

    #[test]
    fn tracks_line_numbers() {
        let toks = lex("(\n\n q)").unwrap();
        assert_eq!(toks[0].line, 1);
        assert_eq!(toks[1].line, 3);
    }
}
