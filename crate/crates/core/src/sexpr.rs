//! Minimal S-expression reader for the expression and SMT-LIB formats.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

impl SExpr {
    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(a) => Some(a),
            SExpr::List(_) => None,
        }
    }

    /// The head symbol and arguments of a non-empty list.
    pub fn as_call(&self) -> Option<(&str, &[SExpr])> {
        match self {
            SExpr::List(items) => match items.split_first() {
                Some((SExpr::Atom(head), args)) => Some((head, args)),
                _ => None,
            },
            SExpr::Atom(_) => None,
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(a) => f.write_str(a),
            SExpr::List(items) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Reads every top-level form in `text`. `;` starts a line comment.
pub fn parse_all(text: &str) -> Result<Vec<SExpr>, String> {
    let mut stack: Vec<Vec<SExpr>> = vec![Vec::new()];
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        match c {
            ';' => while chars.next_if(|&(_, c)| c != '\n').is_some() {},
            '(' => stack.push(Vec::new()),
            ')' => {
                let done = stack.pop().ok_or("unbalanced `)`")?;
                stack
                    .last_mut()
                    .ok_or_else(|| format!("unbalanced `)` at offset {i}"))?
                    .push(SExpr::List(done));
            }
            c if c.is_whitespace() => {}
            _ => {
                let mut end = i + c.len_utf8();
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_whitespace() || d == '(' || d == ')' || d == ';' {
                        break;
                    }
                    end = j + d.len_utf8();
                    chars.next();
                }
                stack
                    .last_mut()
                    .expect("stack never empty here")
                    .push(SExpr::Atom(text[i..end].to_owned()));
            }
        }
    }
    match stack.len() {
        1 => Ok(stack.pop().unwrap_or_default()),
        _ => Err("unbalanced `(`".into()),
    }
}

/// Reads exactly one form.
pub fn parse_one(text: &str) -> Result<SExpr, String> {
    let mut forms = parse_all(text)?;
    match forms.len() {
        1 => Ok(forms.pop().expect("one form")),
        0 => Err("empty input".into()),
        n => Err(format!("expected one expression, found {n}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists() {
        let e = parse_one("(min (max a (b 1/2)) ; note\n zero)").unwrap();
        assert_eq!(e.to_string(), "(min (max a (b 1/2)) zero)");
        let (head, args) = e.as_call().unwrap();
        assert_eq!(head, "min");
        assert_eq!(args.len(), 2);
    }

    #[test]
    fn rejects_unbalanced() {
        assert!(parse_one("(a (b)").is_err());
        assert!(parse_one("a)").is_err());
        assert!(parse_one("").is_err());
        assert!(parse_one("a b").is_err());
    }
}
