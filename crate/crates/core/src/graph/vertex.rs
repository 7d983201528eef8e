use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// An opaque, totally ordered vertex token.
///
/// Product and exponential constructions build [`Vertex::Tuple`] values, so
/// the derived order is lexicographic on components and output is stable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Int(i64),
    Name(String),
    Tuple(Vec<Vertex>),
}

impl Vertex {
    pub fn pair(a: Vertex, b: Vertex) -> Vertex {
        Vertex::Tuple(vec![a, b])
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Vertex::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn components(&self) -> Option<&[Vertex]> {
        match self {
            Vertex::Tuple(items) => Some(items),
            _ => None,
        }
    }
}

impl From<i64> for Vertex {
    fn from(i: i64) -> Self {
        Vertex::Int(i)
    }
}

impl From<i32> for Vertex {
    fn from(i: i32) -> Self {
        Vertex::Int(i as i64)
    }
}

impl From<usize> for Vertex {
    fn from(i: usize) -> Self {
        Vertex::Int(i as i64)
    }
}

impl From<&str> for Vertex {
    fn from(s: &str) -> Self {
        s.parse().unwrap_or_else(|_| Vertex::Name(s.to_string()))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Int(i) => write!(f, "{i}"),
            Vertex::Name(s) => f.write_str(s),
            Vertex::Tuple(items) => {
                f.write_str("(")?;
                for (k, v) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | '{' | '}' | '#')
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn parse(&mut self) -> Result<Vertex, String> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let mut items = Vec::new();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(Vertex::Tuple(items));
                }
                loop {
                    items.push(self.parse()?);
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Vertex::Tuple(items));
                        }
                        other => return Err(format!("unexpected {other:?} in tuple")),
                    }
                }
            }
            Some(c) if is_name_char(c) => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if !is_name_char(c) {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
                let tok = &self.s[start..self.pos];
                Ok(match tok.parse::<i64>() {
                    Ok(i) => Vertex::Int(i),
                    Err(_) => Vertex::Name(tok.to_string()),
                })
            }
            other => Err(format!("unexpected {other:?}")),
        }
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor { s, pos: 0 };
        let v = cur
            .parse()
            .map_err(|msg| Error::invalid(format!("bad vertex `{s}`: {msg}")))?;
        if cur.pos != s.len() {
            return Err(Error::invalid(format!("trailing input in vertex `{s}`")));
        }
        Ok(v)
    }
}
