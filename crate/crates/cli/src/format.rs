//! Line-oriented text formats for algebras and CSP instances.
//!
//! ```text
//! algebra <name>
//! size <n>
//! op <symbol> <arity>
//! <n^arity integers, leftmost argument most significant>
//! end
//!
//! instance <name>
//! var <vname> <algebra-name>
//! constraint <v1> ... <vk>
//! <k integers per line>
//! end
//! end
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::collections::BTreeSet;
use std::fmt;

use taylor_edges::csp::{Constraint, Instance, Variable};
use taylor_edges::{FiniteAlgebra, OperationTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub file: Option<String>,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{file}:")?;
        }
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Line and column of a token, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    fn error(self, message: impl Into<String>) -> ParseError {
        ParseError {
            file: None,
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token<'a> {
    text: &'a str,
    pos: Pos,
}

fn tokenize(src: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (l, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut start = None;
        for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    out.push(Token {
                        text: &line[s..i],
                        pos: Pos {
                            line: l + 1,
                            col: line[..s].chars().count() + 1,
                        },
                    });
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
    }
    out
}

struct Cursor<'a> {
    tokens: Vec<Token<'a>>,
    at: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        let end = Pos {
            line: src.lines().count().max(1),
            col: src.lines().last().map_or(0, |l| l.chars().count()) + 1,
        };
        Cursor {
            tokens: tokenize(src),
            at: 0,
            end,
        }
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.at)
    }

    fn pos(&self) -> Pos {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>, ParseError> {
        let t = self
            .tokens
            .get(self.at)
            .cloned()
            .ok_or_else(|| self.end.error(format!("unexpected end of input, expected {what}")))?;
        self.at += 1;
        Ok(t)
    }

    fn keyword(&mut self, kw: &str) -> Result<Pos, ParseError> {
        let t = self.next(&format!("`{kw}`"))?;
        if t.text != kw {
            return Err(t.pos.error(format!("expected `{kw}`, found `{}`", t.text)));
        }
        Ok(t.pos)
    }

    fn number(&mut self, what: &str) -> Result<(usize, Pos), ParseError> {
        let t = self.next(what)?;
        t.text
            .parse::<usize>()
            .map(|v| (v, t.pos))
            .map_err(|_| t.pos.error(format!("expected {what}, found `{}`", t.text)))
    }

    fn name(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        let t = self.next(what)?;
        Ok((t.text.to_string(), t.pos))
    }

    /// Remaining tokens on the line of the previous token.
    fn rest_of_line(&mut self, line: usize) -> Vec<Token<'a>> {
        let mut out = Vec::new();
        while let Some(t) = self.peek() {
            if t.pos.line != line {
                break;
            }
            out.push(t.clone());
            self.at += 1;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawVariable {
    pub name: String,
    pub algebra: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawConstraint {
    pub scope: Vec<String>,
    pub tuples: Vec<Vec<usize>>,
    pub pos: Pos,
}

/// An instance whose algebra names are not yet resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawInstance {
    pub name: String,
    pub variables: Vec<RawVariable>,
    pub constraints: Vec<RawConstraint>,
    pub pos: Pos,
}

/// Contents of one input file, in file order within each kind.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub algebras: Vec<FiniteAlgebra>,
    pub instances: Vec<RawInstance>,
}

/// Parses a file holding any number of `algebra` and `instance` blocks.
/// Tables are checked for shape here; value ranges and idempotency are left
/// to validation.
pub fn parse_document(src: &str) -> Result<Document, ParseError> {
    let mut cur = Cursor::new(src);
    let mut doc = Document::default();
    while let Some(t) = cur.peek() {
        match t.text {
            "algebra" => doc.algebras.push(parse_algebra_block(&mut cur)?),
            "instance" => doc.instances.push(parse_instance_block(&mut cur)?),
            other => {
                return Err(t
                    .pos
                    .error(format!("expected `algebra` or `instance`, found `{other}`")))
            }
        }
    }
    Ok(doc)
}

/// Parses a file of `algebra` blocks only.
pub fn parse_algebras(src: &str) -> Result<Vec<FiniteAlgebra>, ParseError> {
    let doc = parse_document(src)?;
    if let Some(i) = doc.instances.first() {
        return Err(i.pos.error("expected `algebra`, found an instance block"));
    }
    Ok(doc.algebras)
}

fn parse_algebra_block(cur: &mut Cursor) -> Result<FiniteAlgebra, ParseError> {
    cur.keyword("algebra")?;
    let (name, _) = cur.name("algebra name")?;
    cur.keyword("size")?;
    let (n, npos) = cur.number("carrier size")?;
    if n == 0 {
        return Err(npos.error("size must be positive"));
    }
    let mut ops = Vec::new();
    loop {
        let t = cur.next("`op` or `end`")?;
        match t.text {
            "end" => break,
            "op" => {
                let (symbol, spos) = cur.name("operation symbol")?;
                if ops.iter().any(|o: &OperationTable| o.symbol == symbol) {
                    return Err(spos.error(format!("operation `{symbol}` is defined twice")));
                }
                let (arity, apos) = cur.number("arity")?;
                if arity == 0 {
                    return Err(apos.error("arity must be positive"));
                }
                let len = u32::try_from(arity)
                    .ok()
                    .and_then(|a| n.checked_pow(a))
                    .filter(|&l| l <= 1 << 24)
                    .ok_or_else(|| apos.error(format!("table of size {n}^{arity} is too large")))?;
                let mut table = Vec::with_capacity(len);
                for k in 0..len {
                    if cur.peek().is_some_and(|t| t.text == "end" || t.text == "op") {
                        return Err(cur
                            .pos()
                            .error(format!("operation `{symbol}` has {k} entries, expected {len}")));
                    }
                    let (v, _) = cur.number("table entry")?;
                    table.push(v);
                }
                ops.push(OperationTable::new(symbol, arity, table));
            }
            other => return Err(t.pos.error(format!("expected `op` or `end`, found `{other}`"))),
        }
    }
    Ok(FiniteAlgebra { name, size: n, ops })
}

fn parse_instance_block(cur: &mut Cursor) -> Result<RawInstance, ParseError> {
    let pos = cur.keyword("instance")?;
    let (name, _) = cur.name("instance name")?;
    let mut variables: Vec<RawVariable> = Vec::new();
    let mut constraints = Vec::new();
    loop {
        let t = cur.next("`var`, `constraint` or `end`")?;
        match t.text {
            "end" => break,
            "var" => {
                let (vname, vpos) = cur.name("variable name")?;
                if variables.iter().any(|v| v.name == vname) {
                    return Err(vpos.error(format!("variable `{vname}` is declared twice")));
                }
                let (algebra, _) = cur.name("algebra name")?;
                variables.push(RawVariable {
                    name: vname,
                    algebra,
                    pos: vpos,
                });
            }
            "constraint" => {
                let scope: Vec<String> = cur
                    .rest_of_line(t.pos.line)
                    .into_iter()
                    .map(|x| x.text.to_string())
                    .collect();
                if scope.is_empty() {
                    return Err(t.pos.error("constraint has an empty scope"));
                }
                let k = scope.len();
                let mut tuples = Vec::new();
                loop {
                    let first = cur.next("a tuple or `end`")?;
                    if first.text == "end" {
                        break;
                    }
                    let mut row = vec![first.clone()];
                    row.extend(cur.rest_of_line(first.pos.line));
                    if row.len() != k {
                        return Err(first
                            .pos
                            .error(format!("tuple has {} entries, constraint arity is {k}", row.len())));
                    }
                    let tuple = row
                        .iter()
                        .map(|x| {
                            x.text
                                .parse::<usize>()
                                .map_err(|_| x.pos.error(format!("expected tuple entry, found `{}`", x.text)))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    tuples.push(tuple);
                }
                constraints.push(RawConstraint {
                    scope,
                    tuples,
                    pos: t.pos,
                });
            }
            other => {
                return Err(t
                    .pos
                    .error(format!("expected `var`, `constraint` or `end`, found `{other}`")))
            }
        }
    }
    Ok(RawInstance {
        name,
        variables,
        constraints,
        pos,
    })
}

/// Binds variable domains by name, looking in `algebras` first and then in
/// `fallback`.
pub fn resolve_instance(
    raw: &RawInstance,
    algebras: &[FiniteAlgebra],
    fallback: impl Fn(&str) -> Option<FiniteAlgebra>,
) -> Result<Instance, ParseError> {
    let mut domains: Vec<FiniteAlgebra> = Vec::new();
    let mut variables = Vec::new();
    for v in &raw.variables {
        let d = match domains.iter().position(|a| a.name == v.algebra) {
            Some(d) => d,
            None => {
                let alg = algebras
                    .iter()
                    .find(|a| a.name == v.algebra)
                    .cloned()
                    .or_else(|| fallback(&v.algebra))
                    .ok_or_else(|| v.pos.error(format!("unknown algebra `{}`", v.algebra)))?;
                domains.push(alg);
                domains.len() - 1
            }
        };
        variables.push(Variable::new(v.name.clone(), d));
    }
    let mut constraints = Vec::new();
    for c in &raw.constraints {
        let scope = c
            .scope
            .iter()
            .map(|s| {
                raw.variables
                    .iter()
                    .position(|v| v.name == *s)
                    .ok_or_else(|| c.pos.error(format!("unknown variable `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        constraints.push(Constraint::new(scope, c.tuples.iter().cloned()));
    }
    Instance::new(raw.name.clone(), domains, variables, constraints).map_err(|e| raw.pos.error(e.to_string()))
}

/// Replaces whitespace and `#` so the result reads back as one token.
pub fn token(s: &str) -> String {
    let t: String = s
        .chars()
        .map(|c| if c.is_whitespace() || c == '#' { '_' } else { c })
        .collect();
    if t.is_empty() {
        "_".into()
    } else {
        t
    }
}

fn join(xs: impl IntoIterator<Item = usize>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// One block per algebra, separated by blank lines. Each table row holds the
/// n values obtained by varying the last argument.
pub fn emit_algebras(algs: &[FiniteAlgebra]) -> String {
    let mut out = String::new();
    for (i, alg) in algs.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("algebra {}\nsize {}\n", token(&alg.name), alg.size));
        for op in &alg.ops {
            out.push_str(&format!("op {} {}\n", token(&op.symbol), op.arity));
            for row in op.table.chunks(alg.size.max(1)) {
                out.push_str(&join(row.iter().copied()));
                out.push('\n');
            }
        }
        out.push_str("end\n");
    }
    out
}

/// The instance block. Domains are referred to by algebra name.
pub fn emit_instance(inst: &Instance) -> String {
    let mut out = format!("instance {}\n", token(&inst.name));
    for v in &inst.variables {
        out.push_str(&format!(
            "var {} {}\n",
            token(&v.name),
            token(&inst.algebras[v.domain].name)
        ));
    }
    for c in &inst.constraints {
        let names: Vec<String> = c.scope.iter().map(|&v| token(&inst.variables[v].name)).collect();
        out.push_str(&format!("constraint {}\n", names.join(" ")));
        let tuples: BTreeSet<&Vec<usize>> = c.tuples.iter().collect();
        for t in tuples {
            out.push_str(&join(t.iter().copied()));
            out.push('\n');
        }
        out.push_str("end\n");
    }
    out.push_str("end\n");
    out
}
