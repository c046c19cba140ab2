//! A minimal s-expression reader shared by the formula and term grammars.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Sexp {
    Token { text: String, offset: usize },
    List { items: Vec<Sexp>, offset: usize },
}

impl Sexp {
    pub(crate) fn offset(&self) -> usize {
        match self {
            Sexp::Token { offset, .. } | Sexp::List { offset, .. } => *offset,
        }
    }
}

pub(crate) fn parse_error<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { offset, message: message.into() })
}

/// Reads exactly one expression; `;` starts a comment running to the end of the line.
pub(crate) fn read(text: &str) -> Result<Sexp> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(at, c)) = chars.peek() {
        match c {
            '(' | ')' => {
                tokens.push((at, c.to_string()));
                chars.next();
            }
            ';' => while chars.next_if(|&(_, c)| c != '\n').is_some() {},
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut word = String::new();
                while let Some((_, c)) = chars.next_if(|&(_, c)| !c.is_whitespace() && c != '(' && c != ')' && c != ';') {
                    word.push(c);
                }
                tokens.push((at, word));
            }
        }
    }
    let mut pos = 0;
    let expr = read_one(&tokens, &mut pos, text.len())?;
    if let Some((at, _)) = tokens.get(pos) {
        return parse_error(*at, "trailing input after the expression");
    }
    Ok(expr)
}

fn read_one(tokens: &[(usize, String)], pos: &mut usize, end: usize) -> Result<Sexp> {
    let Some((at, tok)) = tokens.get(*pos) else {
        return parse_error(end, "unexpected end of input");
    };
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return parse_error(end, "unclosed parenthesis"),
                    Some((_, t)) if t == ")" => {
                        *pos += 1;
                        return Ok(Sexp::List { items, offset: *at });
                    }
                    Some(_) => items.push(read_one(tokens, pos, end)?),
                }
            }
        }
        ")" => parse_error(*at, "unexpected ')'"),
        _ => Ok(Sexp::Token { text: tok.clone(), offset: *at }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_lists_and_comments() {
        let e = read("(a (b c) ; note\n d)").unwrap();
        let Sexp::List { items, .. } = e else { panic!() };
        assert_eq!(items.len(), 3);
        assert!(matches!(&items[1], Sexp::List { items, .. } if items.len() == 2));
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(read("(a b"), Err(Error::Parse { .. })));
        assert!(matches!(read("a b"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(read(")"), Err(Error::Parse { offset: 0, .. })));
    }
}
