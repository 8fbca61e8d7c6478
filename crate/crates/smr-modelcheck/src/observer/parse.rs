//! Textual observer definitions.
//!
//! ```text
//! observer base {
//!   vars { v: address; }
//!   locations { init initial; retired; bad accepting; }
//!   transitions {
//!     init --retire(t, a) [a == v]--> retired;
//!     retired --free(a) [a == v]--> init;
//!     init --free(a) [a == v]--> bad;
//!   }
//! }
//! ```
//!
//! Guards are `&&`/`||` combinations of `param == var`, `param != var`,
//! `param == param` and `true`/`false`. A file may contain several observer
//! blocks; the result is their cross product.

use super::{Guard, Kind, Observer, ObserverError, ObserverVariable, Sort, Transition};

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
    Eof,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> ObserverError {
        ObserverError::Parse(format!("line {}: {}", self.line, msg.into()))
    }

    fn skip_ws(&mut self) {
        let bytes = self.src.as_bytes();
        loop {
            while self.pos < bytes.len() && (bytes[self.pos] as char).is_whitespace() {
                if bytes[self.pos] == b'\n' {
                    self.line += 1;
                }
                self.pos += 1;
            }
            if self.src[self.pos..].starts_with("//") {
                while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> Tok {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.is_empty() {
            return Tok::Eof;
        }
        for sym in ["-->", "--", "==", "!=", "&&", "||", "{", "}", "(", ")", "[", "]", ";", ":", ","] {
            if rest.starts_with(sym) {
                self.pos += sym.len();
                return Tok::Sym(sym);
            }
        }
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            if c.is_alphanumeric() || c == '_' || c == '-' && !rest[i..].starts_with("--") {
                end = i + c.len_utf8();
            } else {
                break;
            }
        }
        if end == 0 {
            let c = rest.chars().next().unwrap();
            self.pos += c.len_utf8();
            return Tok::Ident(c.to_string());
        }
        self.pos += end;
        Tok::Ident(rest[..end].to_owned())
    }

    fn peek(&mut self) -> Tok {
        let save = (self.pos, self.line);
        let t = self.next();
        (self.pos, self.line) = save;
        t
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ObserverError> {
        match self.next() {
            Tok::Sym(t) if t == s => Ok(()),
            other => Err(self.err(format!("expected `{s}`, found {other:?}"))),
        }
    }

    fn ident(&mut self) -> Result<String, ObserverError> {
        match self.next() {
            Tok::Ident(s) => Ok(s),
            other => Err(self.err(format!("expected identifier, found {other:?}"))),
        }
    }
}

/// Parses an observer definition file; multiple blocks form a cross product.
pub fn parse_observer_file(src: &str) -> Result<Observer, ObserverError> {
    let mut lx = Lexer::new(src);
    let mut result: Option<Observer> = None;
    loop {
        match lx.peek() {
            Tok::Eof => break,
            Tok::Ident(kw) if kw == "observer" => {
                lx.next();
                let obs = parse_block(&mut lx)?;
                result = Some(match result {
                    None => obs,
                    Some(prev) => prev.cross_product(&obs),
                });
            }
            other => return Err(lx.err(format!("expected `observer`, found {other:?}"))),
        }
    }
    let obs = result.ok_or_else(|| ObserverError::Parse("empty observer file".into()))?;
    obs.validate()?;
    Ok(obs)
}

fn parse_block(lx: &mut Lexer<'_>) -> Result<Observer, ObserverError> {
    let name = lx.ident()?;
    lx.expect_sym("{")?;
    let mut vars: Vec<ObserverVariable> = Vec::new();
    let mut locations: Vec<String> = Vec::new();
    let mut initial: Option<usize> = None;
    let mut accepting: Vec<usize> = Vec::new();
    let mut transitions: Vec<Transition> = Vec::new();
    loop {
        match lx.next() {
            Tok::Sym("}") => break,
            Tok::Ident(section) if section == "vars" => {
                lx.expect_sym("{")?;
                while lx.peek() != Tok::Sym("}") {
                    let vname = lx.ident()?;
                    lx.expect_sym(":")?;
                    let sort = match lx.ident()?.as_str() {
                        "thread" => Sort::Thread,
                        "address" => Sort::Address,
                        "integer" | "int" => Sort::Integer,
                        s => return Err(lx.err(format!("unknown sort `{s}`"))),
                    };
                    if vars.iter().any(|v| v.name == vname) {
                        return Err(lx.err(format!("duplicate variable `{vname}`")));
                    }
                    vars.push(ObserverVariable { name: vname, sort });
                    lx.expect_sym(";")?;
                }
                lx.expect_sym("}")?;
            }
            Tok::Ident(section) if section == "locations" => {
                lx.expect_sym("{")?;
                while lx.peek() != Tok::Sym("}") {
                    let lname = lx.ident()?;
                    if locations.contains(&lname) {
                        return Err(lx.err(format!("duplicate location `{lname}`")));
                    }
                    locations.push(lname);
                    let idx = locations.len() - 1;
                    while let Tok::Ident(flag) = lx.peek() {
                        match flag.as_str() {
                            "initial" => {
                                lx.next();
                                if initial.replace(idx).is_some() {
                                    return Err(lx.err("two initial locations"));
                                }
                            }
                            "accepting" => {
                                lx.next();
                                accepting.push(idx);
                            }
                            _ => break,
                        }
                    }
                    lx.expect_sym(";")?;
                }
                lx.expect_sym("}")?;
            }
            Tok::Ident(section) if section == "transitions" => {
                lx.expect_sym("{")?;
                while lx.peek() != Tok::Sym("}") {
                    transitions.push(parse_transition(lx, &locations, &vars)?);
                    lx.expect_sym(";")?;
                }
                lx.expect_sym("}")?;
            }
            other => return Err(lx.err(format!("unexpected {other:?} in observer block"))),
        }
    }
    let initial = initial.ok_or_else(|| lx.err("observer has no initial location"))?;
    Ok(Observer::single(
        &name,
        vars,
        locations.iter().map(|s| s.as_str()).collect(),
        initial,
        &accepting,
        transitions,
        false,
    ))
}

fn parse_transition(
    lx: &mut Lexer<'_>,
    locations: &[String],
    vars: &[ObserverVariable],
) -> Result<Transition, ObserverError> {
    let loc = |lx: &Lexer<'_>, name: &str| {
        locations
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| lx.err(format!("unknown location `{name}`")))
    };
    let srcname = lx.ident()?;
    let src = loc(lx, &srcname)?;
    lx.expect_sym("--")?;
    let kind = lx.ident()?;
    lx.expect_sym("(")?;
    let mut params: Vec<String> = Vec::new();
    if lx.peek() != Tok::Sym(")") {
        loop {
            params.push(lx.ident()?);
            match lx.next() {
                Tok::Sym(",") => continue,
                Tok::Sym(")") => break,
                other => return Err(lx.err(format!("expected `,` or `)`, found {other:?}"))),
            }
        }
    } else {
        lx.next();
    }
    let guard = if lx.peek() == Tok::Sym("[") {
        lx.next();
        let g = parse_guard(lx, &params, vars)?;
        lx.expect_sym("]")?;
        g
    } else {
        Guard::True
    };
    lx.expect_sym("-->")?;
    let dstname = lx.ident()?;
    let dst = loc(lx, &dstname)?;
    Ok(Transition {
        src,
        kind: Kind::of(&kind),
        arity: params.len(),
        guard,
        dst,
    })
}

fn parse_guard(
    lx: &mut Lexer<'_>,
    params: &[String],
    vars: &[ObserverVariable],
) -> Result<Guard, ObserverError> {
    let mut g = parse_guard_conj(lx, params, vars)?;
    while lx.peek() == Tok::Sym("||") {
        lx.next();
        g = Guard::Or(Box::new(g), Box::new(parse_guard_conj(lx, params, vars)?));
    }
    Ok(g)
}

fn parse_guard_conj(
    lx: &mut Lexer<'_>,
    params: &[String],
    vars: &[ObserverVariable],
) -> Result<Guard, ObserverError> {
    let mut g = parse_guard_atom(lx, params, vars)?;
    while lx.peek() == Tok::Sym("&&") {
        lx.next();
        g = Guard::And(Box::new(g), Box::new(parse_guard_atom(lx, params, vars)?));
    }
    Ok(g)
}

fn parse_guard_atom(
    lx: &mut Lexer<'_>,
    params: &[String],
    vars: &[ObserverVariable],
) -> Result<Guard, ObserverError> {
    if lx.peek() == Tok::Sym("(") {
        lx.next();
        let g = parse_guard(lx, params, vars)?;
        lx.expect_sym(")")?;
        return Ok(g);
    }
    let lhs = lx.ident()?;
    if lhs == "true" {
        return Ok(Guard::True);
    }
    if lhs == "false" {
        return Ok(Guard::False);
    }
    let op = match lx.next() {
        Tok::Sym("==") => true,
        Tok::Sym("!=") => false,
        other => return Err(lx.err(format!("expected `==` or `!=`, found {other:?}"))),
    };
    let rhs = lx.ident()?;
    let param = |n: &str| params.iter().position(|p| p == n);
    let var = |n: &str| vars.iter().position(|v| v.name == n);
    match (param(&lhs), var(&lhs), param(&rhs), var(&rhs)) {
        (Some(i), _, Some(j), _) => {
            if op {
                Ok(Guard::ParamEqParam(i, j))
            } else {
                Err(lx.err("param != param guards are not in the guard grammar"))
            }
        }
        (Some(i), _, _, Some(v)) => Ok(if op {
            Guard::ParamEqVar(i, v)
        } else {
            Guard::ParamNeVar(i, v)
        }),
        (_, Some(v), Some(i), _) => Ok(if op {
            Guard::ParamEqVar(i, v)
        } else {
            Guard::ParamNeVar(i, v)
        }),
        (_, Some(u), _, Some(v)) => {
            if op {
                Ok(Guard::VarEqVar(u, v))
            } else {
                Err(lx.err("var != var guards are not in the guard grammar"))
            }
        }
        _ => Err(lx.err(format!("unknown guard operand `{lhs}`/`{rhs}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observer::{stdlib_observer, Event, History, StdObserver, Universe, Value};

    const BASE: &str = "
observer base {
  vars { v: address; }
  locations { init initial; retired; bad accepting; }
  transitions {
    init --retire(t, a) [a == v]--> retired;
    retired --free(a) [a == v]--> init;
    init --free(a) [a == v]--> bad;
  }
}
";

    #[test]
    fn parsed_base_matches_stdlib_semantics() {
        let parsed = parse_observer_file(BASE).unwrap();
        let builtin = stdlib_observer(StdObserver::Base);
        let histories = [
            History::new([Event::free(Value::Addr(0))]),
            History::new([
                Event::func("retire", [Value::Thread(0), Value::Addr(0)]),
                Event::free(Value::Addr(0)),
            ]),
            History::new([
                Event::func("retire", [Value::Thread(0), Value::Addr(0)]),
                Event::free(Value::Addr(0)),
                Event::free(Value::Addr(0)),
            ]),
        ];
        for h in &histories {
            let uni = Universe::covering(&[h], &[]);
            assert_eq!(
                parsed.is_violation(h, &uni).unwrap(),
                builtin.is_violation(h, &uni).unwrap()
            );
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_observer_file("observer x { locations { a; } }").is_err());
        assert!(parse_observer_file("observer x { locations { a initial; } transitions { a --f(p) [p == q]--> a; } }").is_err());
    }
}
