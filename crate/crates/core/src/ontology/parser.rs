use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{Axiom, Concept, TBox};

/// Parse error with 1-based line/column positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    Arity(String),
    UnknownKeyword(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => {
                write!(f, "syntax error at {}:{}: {}", self.line, self.col, msg)
            }
            ParseErrorKind::Arity(what) => {
                write!(f, "arity error at {}:{}: malformed {}", self.line, self.col, what)
            }
            ParseErrorKind::UnknownKeyword(kw) => {
                write!(f, "unknown keyword at {}:{}: {}", self.line, self.col, kw)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Name(String),
    Open,
    Close,
}

struct Lexer<'a> {
    line: &'a str,
    line_no: usize,
    pos: usize,
    tokens: Vec<(Token, usize)>,
    cursor: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | ':' | '-')
}

impl<'a> Lexer<'a> {
    fn new(line: &'a str, line_no: usize) -> Result<Self, ParseError> {
        let mut tokens = Vec::new();
        let mut chars = line.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            let col = i + 1;
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                chars.next();
            } else if c == '(' {
                tokens.push((Token::Open, col));
                chars.next();
            } else if c == ')' {
                tokens.push((Token::Close, col));
                chars.next();
            } else if is_name_start(c) {
                let start = i;
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if is_name_char(d) {
                        end = j + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push((Token::Name(line[start..end].to_string()), col));
            } else {
                return Err(ParseError {
                    line: line_no,
                    col,
                    kind: ParseErrorKind::Syntax(alloc::format!("unexpected character '{c}'")),
                });
            }
        }
        Ok(Lexer { line, line_no, pos: 0, tokens, cursor: 0 })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor).map(|(t, _)| t)
    }

    fn next(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.cursor).cloned();
        if let Some((t, col)) = tok {
            self.cursor += 1;
            self.pos = col;
            Some(t)
        } else {
            self.pos = self.line.len() + 1;
            None
        }
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line_no, col: self.pos, kind }
    }

    fn expect_open(&mut self, construct: &str) -> Result<(), ParseError> {
        match self.next() {
            Some(Token::Open) => Ok(()),
            _ => Err(self.err(ParseErrorKind::Syntax(alloc::format!(
                "expected '(' after {construct}"
            )))),
        }
    }

    fn expect_name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.next() {
            Some(Token::Name(n)) => Ok(n),
            _ => Err(self.err(ParseErrorKind::Syntax(alloc::format!("expected {what}")))),
        }
    }
}

/// Parses a whole TBox: one axiom per non-empty line, `#` starts a comment.
pub fn parse_tbox(text: &str) -> Result<TBox, ParseError> {
    let mut tbox = TBox::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        tbox.insert(parse_axiom_line(line, line_no)?);
    }
    Ok(tbox)
}

/// Parses a single axiom (used for goal files and proof reload).
pub fn parse_axiom(text: &str) -> Result<Axiom, ParseError> {
    parse_axiom_line(text, 1)
}

fn parse_axiom_line(line: &str, line_no: usize) -> Result<Axiom, ParseError> {
    let mut lex = Lexer::new(line, line_no)?;
    let keyword = lex.expect_name("an axiom keyword")?;
    let axiom = match keyword.as_str() {
        "SubClassOf" => {
            lex.expect_open(&keyword)?;
            let lhs = parse_concept(&mut lex)?;
            if lex.peek() == Some(&Token::Close) {
                lex.next();
                return Err(lex.err(ParseErrorKind::Arity("SubClassOf".to_string())));
            }
            let rhs = parse_concept(&mut lex)?;
            expect_close(&mut lex, "SubClassOf")?;
            Axiom::ConceptInclusion(lhs, rhs)
        }
        "EquivalentClasses" => {
            lex.expect_open(&keyword)?;
            let a = parse_concept(&mut lex)?;
            if lex.peek() == Some(&Token::Close) {
                lex.next();
                return Err(lex.err(ParseErrorKind::Arity("EquivalentClasses".to_string())));
            }
            let b = parse_concept(&mut lex)?;
            expect_close(&mut lex, "EquivalentClasses")?;
            Axiom::Equivalence(a, b)
        }
        "SubObjectPropertyOf" => {
            lex.expect_open(&keyword)?;
            match lex.next() {
                Some(Token::Name(n)) if n == "ObjectPropertyChain" => {
                    lex.expect_open("ObjectPropertyChain")?;
                    let mut chain = Vec::new();
                    while let Some(Token::Name(_)) = lex.peek() {
                        chain.push(lex.expect_name("a role name")?);
                    }
                    expect_close(&mut lex, "ObjectPropertyChain")?;
                    if chain.len() < 2 {
                        return Err(lex.err(ParseErrorKind::Arity("ObjectPropertyChain".to_string())));
                    }
                    let sup = lex.expect_name("a role name")?;
                    expect_close(&mut lex, "SubObjectPropertyOf")?;
                    Axiom::RoleChainInclusion(chain, sup)
                }
                Some(Token::Name(sub)) => {
                    let sup = lex.expect_name("a role name")?;
                    expect_close(&mut lex, "SubObjectPropertyOf")?;
                    Axiom::RoleInclusion(sub, sup)
                }
                _ => {
                    return Err(lex.err(ParseErrorKind::Arity("SubObjectPropertyOf".to_string())))
                }
            }
        }
        "TransitiveObjectProperty" => {
            lex.expect_open(&keyword)?;
            let role = lex.expect_name("a role name")?;
            expect_close(&mut lex, "TransitiveObjectProperty")?;
            Axiom::Transitivity(role)
        }
        "ObjectPropertyDomain" => {
            lex.expect_open(&keyword)?;
            let role = lex.expect_name("a role name")?;
            let concept = parse_concept(&mut lex)?;
            expect_close(&mut lex, "ObjectPropertyDomain")?;
            Axiom::Domain(role, concept)
        }
        other => {
            lex.pos = lex.tokens.first().map(|(_, c)| *c).unwrap_or(1);
            return Err(lex.err(ParseErrorKind::UnknownKeyword(other.to_string())));
        }
    };
    if lex.peek().is_some() {
        return Err(lex.err(ParseErrorKind::Syntax("trailing tokens after axiom".to_string())));
    }
    Ok(axiom)
}

fn expect_close(lex: &mut Lexer<'_>, construct: &str) -> Result<(), ParseError> {
    match lex.next() {
        Some(Token::Close) => Ok(()),
        Some(_) | None => Err(lex.err(ParseErrorKind::Arity(construct.to_string()))),
    }
}

fn parse_concept(lex: &mut Lexer<'_>) -> Result<Concept, ParseError> {
    match lex.next() {
        Some(Token::Name(n)) => match n.as_str() {
            "owl:Thing" => Ok(Concept::Top),
            "owl:Nothing" => Ok(Concept::Bottom),
            "ObjectIntersectionOf" => {
                lex.expect_open("ObjectIntersectionOf")?;
                let mut ops = Vec::new();
                while lex.peek().is_some() && lex.peek() != Some(&Token::Close) {
                    ops.push(parse_concept(lex)?);
                }
                expect_close(lex, "ObjectIntersectionOf")?;
                if ops.len() < 2 {
                    return Err(lex.err(ParseErrorKind::Arity("ObjectIntersectionOf".to_string())));
                }
                Ok(Concept::Conjunction(ops))
            }
            "ObjectSomeValuesFrom" => {
                lex.expect_open("ObjectSomeValuesFrom")?;
                let role = lex.expect_name("a role name")?;
                if lex.peek() == Some(&Token::Close) {
                    lex.next();
                    return Err(lex.err(ParseErrorKind::Arity("ObjectSomeValuesFrom".to_string())));
                }
                let filler = parse_concept(lex)?;
                expect_close(lex, "ObjectSomeValuesFrom")?;
                Ok(Concept::Existential(role, Box::new(filler)))
            }
            "ObjectPropertyChain" => {
                Err(lex.err(ParseErrorKind::Syntax("ObjectPropertyChain is not a concept".to_string())))
            }
            _ => Ok(Concept::Named(n)),
        },
        _ => Err(lex.err(ParseErrorKind::Syntax("expected a concept".to_string()))),
    }
}
