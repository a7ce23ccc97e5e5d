//! Generic term syntax shared by tree expressions and their printer.
//!
//! ```text
//! term  := INT | IDENT ['(' [arg {',' arg}] ')'] | '[' [term {',' term}] ']'
//!        | '{' [INT ':' term {',' INT ':' term}] '}' | '?'
//! arg   := IDENT '=' term | term
//! ```

use std::fmt;

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Int(i64, Pos),
    Ident(String, Pos),
    Call { name: String, args: Vec<Arg>, pos: Pos },
    List(Vec<Term>, Pos),
    Map(Vec<(i64, Term)>, Pos),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arg {
    pub key: Option<String>,
    pub value: Term,
}

impl Term {
    pub fn pos(&self) -> Pos {
        match self {
            Term::Int(_, p) | Term::Ident(_, p) | Term::List(_, p) | Term::Map(_, p) => *p,
            Term::Call { pos, .. } => *pos,
        }
    }

    pub fn int(v: i64) -> Term {
        Term::Int(v, Pos::default())
    }

    pub fn ident(s: &str) -> Term {
        Term::Ident(s.to_string(), Pos::default())
    }

    pub fn call(name: &str, args: Vec<Arg>) -> Term {
        Term::Call { name: name.to_string(), args, pos: Pos::default() }
    }

    pub fn list(items: Vec<Term>) -> Term {
        Term::List(items, Pos::default())
    }

    pub fn ints(items: impl IntoIterator<Item = i64>) -> Term {
        Term::list(items.into_iter().map(Term::int).collect())
    }
}

impl Arg {
    pub fn pos(value: Term) -> Arg {
        Arg { key: None, value }
    }

    pub fn kw(key: &str, value: Term) -> Arg {
        Arg { key: Some(key.to_string()), value }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(v, _) => write!(f, "{v}"),
            Term::Ident(s, _) => f.write_str(s),
            Term::Call { name, args, .. } => {
                write!(f, "{name}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    if let Some(key) = &a.key {
                        write!(f, "{key}=")?;
                    }
                    write!(f, "{}", a.value)?;
                }
                f.write_str(")")
            }
            Term::List(items, _) => {
                f.write_str("[")?;
                for (k, t) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str("]")
            }
            Term::Map(entries, _) => {
                f.write_str("{")?;
                for (k, (d, t)) in entries.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{d}: {t}")?;
                }
                f.write_str("}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Punct(char),
}

/// Cursor over one line of source.
pub struct Lexer {
    chars: Vec<char>,
    at: usize,
    line: usize,
    /// Column of `chars[0]`.
    col0: usize,
}

impl Lexer {
    pub fn new(text: &str, line: usize, col0: usize) -> Self {
        Lexer { chars: text.chars().collect(), at: 0, line, col0 }
    }

    fn skip_ws(&mut self) {
        while self.at < self.chars.len() && self.chars[self.at].is_whitespace() {
            self.at += 1;
        }
    }

    pub fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col0 + self.at }
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.at >= self.chars.len()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError { pos: self.pos(), message: message.into() })
    }

    fn peek(&mut self) -> Result<Option<(Tok, Pos, usize)>, SyntaxError> {
        self.skip_ws();
        let start = self.at;
        let pos = self.pos();
        let Some(&c) = self.chars.get(start) else { return Ok(None) };
        let mut end = start + 1;
        let tok = if c.is_ascii_digit() || (c == '-' && self.chars.get(start + 1).is_some_and(|d| d.is_ascii_digit())) {
            while self.chars.get(end).is_some_and(|d| d.is_ascii_digit()) {
                end += 1;
            }
            let s: String = self.chars[start..end].iter().collect();
            match s.parse() {
                Ok(v) => Tok::Int(v),
                Err(_) => return self.err(format!("integer `{s}` out of range")),
            }
        } else if c.is_alphabetic() || c == '_' {
            while self.chars.get(end).is_some_and(|d| d.is_alphanumeric() || *d == '_') {
                end += 1;
            }
            Tok::Ident(self.chars[start..end].iter().collect())
        } else if "()[]{},:=?".contains(c) {
            Tok::Punct(c)
        } else {
            return self.err(format!("unexpected character `{c}`"));
        };
        Ok(Some((tok, pos, end)))
    }

    fn next(&mut self) -> Result<Option<(Tok, Pos)>, SyntaxError> {
        let p = self.peek()?;
        Ok(p.map(|(t, pos, end)| {
            self.at = end;
            (t, pos)
        }))
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        match self.next()? {
            Some((Tok::Punct(d), _)) if d == c => Ok(()),
            Some((t, pos)) => Err(SyntaxError { pos, message: format!("expected `{c}`, found {}", describe(&t)) }),
            None => self.err(format!("expected `{c}`, found end of line")),
        }
    }

    fn eat(&mut self, c: char) -> Result<bool, SyntaxError> {
        match self.peek()? {
            Some((Tok::Punct(d), _, end)) if d == c => {
                self.at = end;
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    pub fn ident(&mut self) -> Result<(String, Pos), SyntaxError> {
        match self.next()? {
            Some((Tok::Ident(s), pos)) => Ok((s, pos)),
            Some((t, pos)) => Err(SyntaxError { pos, message: format!("expected a name, found {}", describe(&t)) }),
            None => self.err("expected a name, found end of line"),
        }
    }

    pub fn punct(&mut self, c: char) -> Result<(), SyntaxError> {
        self.expect(c)
    }

    /// Remaining text, unparsed.
    pub fn rest(&mut self) -> (String, Pos) {
        self.skip_ws();
        let pos = self.pos();
        let s: String = self.chars[self.at..].iter().collect();
        self.at = self.chars.len();
        (s, pos)
    }

    pub fn term(&mut self) -> Result<Term, SyntaxError> {
        let Some((tok, pos)) = self.next()? else { return self.err("expected an expression, found end of line") };
        match tok {
            Tok::Int(v) => Ok(Term::Int(v, pos)),
            Tok::Punct('?') => Ok(Term::Ident("?".into(), pos)),
            Tok::Ident(name) => {
                if !self.eat('(')? {
                    return Ok(Term::Ident(name, pos));
                }
                let mut args = Vec::new();
                if !self.eat(')')? {
                    loop {
                        args.push(self.arg()?);
                        if self.eat(')')? {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(Term::Call { name, args, pos })
            }
            Tok::Punct('[') => {
                let mut items = Vec::new();
                if !self.eat(']')? {
                    loop {
                        items.push(self.term()?);
                        if self.eat(']')? {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(Term::List(items, pos))
            }
            Tok::Punct('{') => {
                let mut entries = Vec::new();
                if !self.eat('}')? {
                    loop {
                        let key = match self.next()? {
                            Some((Tok::Int(d), _)) => d,
                            Some((t, p)) => {
                                return Err(SyntaxError {
                                    pos: p,
                                    message: format!("expected a degree, found {}", describe(&t)),
                                })
                            }
                            None => return self.err("expected a degree, found end of line"),
                        };
                        self.expect(':')?;
                        entries.push((key, self.term()?));
                        if self.eat('}')? {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(Term::Map(entries, pos))
            }
            t => Err(SyntaxError { pos, message: format!("expected an expression, found {}", describe(&t)) }),
        }
    }

    fn arg(&mut self) -> Result<Arg, SyntaxError> {
        let save = self.at;
        if let Some((Tok::Ident(key), _, end)) = self.peek()? {
            self.at = end;
            if self.eat('=')? {
                return Ok(Arg { key: Some(key), value: self.term()? });
            }
            self.at = save;
        }
        Ok(Arg { key: None, value: self.term()? })
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("`{v}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Punct(c) => format!("`{c}`"),
    }
}
