//! Parser for session scripts.
//!
//! A script is a ring declaration followed by object definitions and commands.
//! Statements end at a newline, `;` or `/` outside brackets; `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::determinantal::{GradedMatrix, GradingMode};
use crate::error::{Error, Result};
use crate::field::DEFAULT_CHARACTERISTIC;
use crate::poly::Polynomial;
use crate::ring::BlockRing;

pub const COMMANDS: &[&str] = &[
    "gb",
    "gin",
    "hilbert",
    "radical",
    "borel",
    "dual",
    "polarize",
    "minors",
    "cs",
    "csstar",
    "ugb",
    "closure",
    "bounds",
    "main-theorem",
    "colon",
    "member",
    "initial",
    "intersect",
    "regseq",
    "dualthm",
    "incomparable",
];

pub const FUNCTIONS: &[&str] = &["minors", "colon", "intersect", "sum", "initial", "gin"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Poly,
    Ideal,
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Name(String),
    Int(i64),
    Poly(Polynomial),
    Tuple(Vec<i64>),
    Call(String, Vec<Value>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealExpr {
    Generators(Vec<Value>),
    Call(Value),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixBody {
    Entries(Vec<Vec<Polynomial>>),
    Random { seed: u64 },
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Poly {
        name: String,
        value: Polynomial,
    },
    Ideal {
        name: String,
        expr: IdealExpr,
    },
    Matrix {
        name: String,
        mode: GradingMode,
        rows: usize,
        cols: usize,
        body: MatrixBody,
    },
    Command {
        name: String,
        args: Vec<Value>,
        options: Vec<(String, Value)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    pub line: usize,
    pub col: usize,
    /// Source text of the statement, trimmed.
    pub text: String,
    pub statement: Statement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub ring: BlockRing,
    pub statements: Vec<Located>,
}

impl Script {
    /// Canonical source text; parsing it again yields an equal script up to positions.
    pub fn to_source(&self) -> String {
        let r = &self.ring;
        let mut out = format!(
            "ring v={} blocks=[{}] char={}\n",
            r.num_blocks(),
            r.block_sizes().iter().map(usize::to_string).collect::<Vec<_>>().join(","),
            r.characteristic()
        );
        for s in &self.statements {
            out.push_str(&render_statement(r, &s.statement));
            out.push('\n');
        }
        out
    }
}

pub fn render_value(ring: &BlockRing, v: &Value) -> String {
    match v {
        Value::Name(n) => n.clone(),
        Value::Int(i) => i.to_string(),
        Value::Poly(p) => format!("({})", p.format(ring)),
        Value::Tuple(t) => format!("({})", t.iter().map(i64::to_string).collect::<Vec<_>>().join(",")),
        Value::Call(f, args) => format!(
            "{f}({})",
            args.iter().map(|a| render_value(ring, a)).collect::<Vec<_>>().join(", ")
        ),
    }
}

fn render_statement(ring: &BlockRing, s: &Statement) -> String {
    match s {
        Statement::Poly { name, value } => format!("poly {name} = {}", value.format(ring)),
        Statement::Ideal { name, expr } => {
            let rhs = match expr {
                IdealExpr::Call(c) => render_value(ring, c),
                IdealExpr::Generators(gs) => gs
                    .iter()
                    .map(|g| match g {
                        Value::Poly(p) => p.format(ring),
                        other => render_value(ring, other),
                    })
                    .collect::<Vec<_>>()
                    .join(", "),
            };
            format!("ideal {name} = {rhs}")
        }
        Statement::Matrix {
            name,
            mode,
            rows,
            cols,
            body,
        } => {
            let mode = match mode {
                GradingMode::Row => "rowgraded",
                GradingMode::Column => "colgraded",
            };
            let body = match body {
                MatrixBody::Random { seed } => format!("random seed={seed}"),
                MatrixBody::Generic => "generic".into(),
                MatrixBody::Entries(rs) => format!(
                    "{{ {} }}",
                    rs.iter()
                        .map(|r| r.iter().map(|e| e.format(ring)).collect::<Vec<_>>().join(", "))
                        .collect::<Vec<_>>()
                        .join("; ")
                ),
            };
            format!("matrix {name} {mode} {rows}x{cols} {body}")
        }
        Statement::Command { name, args, options } => {
            let mut s = name.clone();
            for a in args {
                let _ = write!(s, " {}", render_value(ring, a));
            }
            for (k, v) in options {
                let _ = write!(s, " {k}={}", render_value(ring, v));
            }
            s
        }
    }
}

/// Parses a script. `characteristic` overrides the one declared in the ring line.
pub fn parse(text: &str, characteristic: Option<u32>) -> Result<Script> {
    let masked = mask_comments(text);
    let lines = LineIndex::new(text);
    let mut ring: Option<BlockRing> = None;
    let mut statements = Vec::new();
    let mut names: HashMap<String, Kind> = HashMap::new();
    for (start, end) in split_statements(&masked) {
        let mut cur = Cursor {
            src: masked.as_bytes(),
            pos: start,
            end,
            lines: &lines,
        };
        cur.skip_ws();
        if cur.at_end() {
            continue;
        }
        let (line, col) = lines.locate(cur.pos);
        let text = masked[cur.pos..end].trim().to_string();
        let Some(ring) = ring.as_ref() else {
            let word = cur.peek_ident();
            if word != "ring" {
                return Err(cur.semantic("the ring must be declared first", &word));
            }
            ring = Some(parse_ring(&mut cur, characteristic)?);
            continue;
        };
        let mut p = StatementParser {
            cur,
            ring,
            names: &mut names,
        };
        let statement = p.statement()?;
        statements.push(Located {
            line,
            col,
            text,
            statement,
        });
    }
    let ring = ring.ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "missing ring declaration".into(),
    })?;
    Ok(Script { ring, statements })
}

/// Parses a single polynomial such as `x[1,1]*x[2,2] - 3*x[1,2]*x[2,1]`.
pub fn parse_polynomial(ring: &BlockRing, text: &str) -> Result<Polynomial> {
    let lines = LineIndex::new(text);
    let mut names = HashMap::new();
    let mut p = StatementParser {
        cur: Cursor {
            src: text.as_bytes(),
            pos: 0,
            end: text.len(),
            lines: &lines,
        },
        ring,
        names: &mut names,
    };
    let f = p.poly(true)?;
    p.cur.finish()?;
    Ok(f)
}

fn mask_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_comment = false;
    for c in text.chars() {
        if c == '#' {
            in_comment = true;
        } else if c == '\n' {
            in_comment = false;
        }
        if in_comment {
            // Keep byte offsets stable.
            for _ in 0..c.len_utf8() {
                out.push(' ');
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn split_statements(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, b) in text.bytes().enumerate() {
        match b {
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => depth -= 1,
            b'\n' | b';' | b'/' if depth <= 0 => {
                out.push((start, i));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, text.len()));
    out
}

struct LineIndex {
    starts: Vec<usize>,
}

impl LineIndex {
    fn new(text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.bytes().enumerate().filter(|(_, b)| *b == b'\n').map(|(i, _)| i + 1));
        LineIndex { starts }
    }

    fn locate(&self, pos: usize) -> (usize, usize) {
        let line = self.starts.partition_point(|&s| s <= pos);
        (line, pos - self.starts[line - 1] + 1)
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    end: usize,
    lines: &'a LineIndex,
}

impl Cursor<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.end
    }

    fn peek(&self) -> Option<u8> {
        (self.pos < self.end).then(|| self.src[self.pos])
    }

    fn peek_at(&self, k: usize) -> Option<u8> {
        (self.pos + k < self.end).then(|| self.src[self.pos + k])
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.pos += 1;
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.lines.locate(self.pos.min(self.src.len()));
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn semantic_at(&self, pos: usize, msg: impl Into<String>, token: &str) -> Error {
        let (line, col) = self.lines.locate(pos);
        Error::Semantic {
            line,
            col,
            msg: msg.into(),
            token: token.to_string(),
        }
    }

    fn semantic(&self, msg: impl Into<String>, token: &str) -> Error {
        self.semantic_at(self.pos, msg, token)
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of statement".to_string(), |c| format!("`{}`", c as char));
            Err(self.error(format!("expected `{}`, found {found}", b as char)))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<()> {
        self.skip_ws();
        let got = self.ident_with(false);
        if got == w {
            Ok(())
        } else {
            Err(self.error(format!("expected `{w}`")))
        }
    }

    fn peek_ident(&self) -> String {
        let mut k = self.pos;
        while k < self.end && (self.src[k].is_ascii_alphanumeric() || self.src[k] == b'_' || self.src[k] == b'-') {
            k += 1;
        }
        String::from_utf8_lossy(&self.src[self.pos..k]).into_owned()
    }

    /// Identifier; with `dashes`, inner `-` followed by a letter is allowed (`main-theorem`).
    fn ident_with(&mut self, dashes: bool) -> String {
        let start = self.pos;
        if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == b'_') {
            return String::new();
        }
        while let Some(c) = self.peek() {
            let dash_ok = dashes && c == b'-' && matches!(self.peek_at(1), Some(d) if d.is_ascii_alphabetic());
            if c.is_ascii_alphanumeric() || c == b'_' || dash_ok {
                self.pos += 1;
            } else {
                break;
            }
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<i64>().map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        let v = self.int()?;
        u64::try_from(v).map_err(|_| {
            self.pos = start;
            self.error("expected a nonnegative integer")
        })
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected `{}`", self.peek().unwrap() as char)))
        }
    }
}

fn parse_ring(cur: &mut Cursor, characteristic: Option<u32>) -> Result<BlockRing> {
    cur.expect_word("ring")?;
    let start = cur.pos;
    let (mut v, mut blocks, mut ch) = (None, None, None);
    loop {
        cur.skip_ws();
        if cur.at_end() {
            break;
        }
        let key = cur.ident_with(false);
        cur.expect(b'=')?;
        match key.as_str() {
            "v" => v = Some(cur.uint()? as usize),
            "char" => ch = Some(cur.uint()?),
            "blocks" => {
                cur.expect(b'[')?;
                let mut bs = vec![cur.uint()? as usize];
                while cur.eat(b',') {
                    bs.push(cur.uint()? as usize);
                }
                cur.expect(b']')?;
                blocks = Some(bs);
            }
            _ => return Err(cur.error(format!("unknown ring field `{key}`"))),
        }
    }
    let blocks = blocks.ok_or_else(|| cur.error("ring declaration needs blocks=[...]"))?;
    if let Some(v) = v {
        if v != blocks.len() {
            return Err(cur.semantic_at(start, format!("v={v} but {} blocks given", blocks.len()), "v"));
        }
    }
    let ch = match (characteristic, ch) {
        (Some(c), _) => c,
        (None, Some(c)) => u32::try_from(c).map_err(|_| cur.semantic_at(start, "characteristic too large", "char"))?,
        (None, None) => DEFAULT_CHARACTERISTIC,
    };
    BlockRing::new(blocks, ch).map_err(|e| cur.semantic_at(start, e.to_string(), "ring"))
}

struct StatementParser<'a, 'b> {
    cur: Cursor<'a>,
    ring: &'b BlockRing,
    names: &'b mut HashMap<String, Kind>,
}

impl StatementParser<'_, '_> {
    fn statement(&mut self) -> Result<Statement> {
        let head_pos = self.cur.pos;
        let head = self.cur.ident_with(true);
        let st = match head.as_str() {
            "poly" => {
                let name = self.define(Kind::Poly)?;
                self.cur.expect(b'=')?;
                let value = self.poly(true)?;
                Statement::Poly { name, value }
            }
            "ideal" => {
                let name = self.define(Kind::Ideal)?;
                self.cur.expect(b'=')?;
                let expr = self.ideal_rhs()?;
                Statement::Ideal { name, expr }
            }
            "matrix" => self.matrix()?,
            "" => return Err(self.cur.error("expected a statement")),
            cmd if COMMANDS.contains(&cmd) => {
                let (args, options) = self.command_args()?;
                Statement::Command {
                    name: head,
                    args,
                    options,
                }
            }
            other => return Err(self.cur.semantic_at(head_pos, "unknown command", other)),
        };
        self.cur.finish()?;
        Ok(st)
    }

    fn define(&mut self, kind: Kind) -> Result<String> {
        self.cur.skip_ws();
        let pos = self.cur.pos;
        let name = self.cur.ident_with(false);
        if name.is_empty() {
            return Err(self.cur.error("expected a name"));
        }
        if name == "x" || FUNCTIONS.contains(&name.as_str()) {
            return Err(self.cur.semantic_at(pos, "reserved name", &name));
        }
        if self.names.contains_key(&name) {
            return Err(self.cur.semantic_at(pos, "name already defined", &name));
        }
        self.names.insert(name.clone(), kind);
        Ok(name)
    }

    fn reference(&mut self, pos: usize, name: &str) -> Result<Kind> {
        self.names
            .get(name)
            .copied()
            .ok_or_else(|| self.cur.semantic_at(pos, "undefined name", name))
    }

    fn starts_poly(&self) -> bool {
        match self.cur.peek() {
            Some(b'x') => self.cur.peek_at(1) == Some(b'['),
            Some(c) => c.is_ascii_digit() || c == b'-' || c == b'+' || c == b'(',
            None => false,
        }
    }

    fn ideal_rhs(&mut self) -> Result<IdealExpr> {
        self.cur.skip_ws();
        if !self.starts_poly() {
            let save = self.cur.pos;
            let word = self.cur.ident_with(false);
            self.cur.skip_ws();
            if self.cur.peek() == Some(b'(') {
                self.cur.pos = save;
                return Ok(IdealExpr::Call(self.value(true)?));
            }
            self.cur.pos = save;
            let _ = word;
        }
        let mut gens = vec![self.generator()?];
        while self.cur.eat(b',') {
            gens.push(self.generator()?);
        }
        Ok(IdealExpr::Generators(gens))
    }

    fn generator(&mut self) -> Result<Value> {
        self.cur.skip_ws();
        if self.starts_poly() {
            return Ok(Value::Poly(self.poly(true)?));
        }
        let pos = self.cur.pos;
        let name = self.cur.ident_with(false);
        if name.is_empty() {
            return Err(self.cur.error("expected a polynomial or a name"));
        }
        match self.reference(pos, &name)? {
            Kind::Poly => Ok(Value::Name(name)),
            _ => Err(self.cur.semantic_at(pos, "expected a polynomial name", &name)),
        }
    }

    fn matrix(&mut self) -> Result<Statement> {
        let name = self.define(Kind::Matrix)?;
        self.cur.skip_ws();
        let mode_pos = self.cur.pos;
        let mode = match self.cur.ident_with(false).as_str() {
            "colgraded" => GradingMode::Column,
            "rowgraded" => GradingMode::Row,
            other => return Err(self.cur.semantic_at(mode_pos, "expected colgraded or rowgraded", other)),
        };
        self.cur.skip_ws();
        let shape_pos = self.cur.pos;
        let rows = self.cur.uint()? as usize;
        self.cur.skip_ws();
        if self.cur.peek() != Some(b'x') {
            return Err(self.cur.error("expected `x` in the matrix shape"));
        }
        self.cur.pos += 1;
        let cols = self.cur.uint()? as usize;
        self.cur.skip_ws();
        let body = if self.cur.peek() == Some(b'{') {
            self.cur.pos += 1;
            let mut entries = vec![Vec::new()];
            loop {
                self.cur.skip_ws();
                match self.cur.peek() {
                    Some(b'}') => {
                        self.cur.pos += 1;
                        break;
                    }
                    Some(b';') => {
                        self.cur.pos += 1;
                        entries.push(Vec::new());
                    }
                    Some(b',') => self.cur.pos += 1,
                    None => return Err(self.cur.error("unterminated matrix body")),
                    _ => {
                        // Newlines separate rows too.
                        let row_break = self.cur.src[..self.cur.pos]
                            .iter()
                            .rev()
                            .take_while(|b| b.is_ascii_whitespace())
                            .any(|&b| b == b'\n');
                        if row_break && !entries.last().unwrap().is_empty() {
                            entries.push(Vec::new());
                        }
                        let e = self.poly_no_newline()?;
                        entries.last_mut().unwrap().push(e);
                    }
                }
            }
            entries.retain(|r| !r.is_empty());
            MatrixBody::Entries(entries)
        } else {
            let word_pos = self.cur.pos;
            match self.cur.ident_with(false).as_str() {
                "generic" => MatrixBody::Generic,
                "random" => {
                    let mut seed = 0;
                    self.cur.skip_ws();
                    if !self.cur.at_end() {
                        self.cur.expect_word("seed")?;
                        self.cur.expect(b'=')?;
                        seed = self.cur.uint()?;
                    }
                    MatrixBody::Random { seed }
                }
                other => return Err(self.cur.semantic_at(word_pos, "expected `{`, random or generic", other)),
            }
        };
        // Validate now so grading errors point at the definition.
        let st = Statement::Matrix {
            name: name.clone(),
            mode,
            rows,
            cols,
            body,
        };
        build_matrix(self.ring, &st).map_err(|e| self.cur.semantic_at(shape_pos, e.to_string(), &name))?;
        Ok(st)
    }

    /// Matrix entry: a polynomial that stops at a newline.
    fn poly_no_newline(&mut self) -> Result<Polynomial> {
        let end = self.cur.end;
        let line_end = self.cur.src[self.cur.pos..end]
            .iter()
            .position(|&b| b == b'\n')
            .map_or(end, |k| self.cur.pos + k);
        // Never split inside parentheses: fall back to the full range if they are open.
        self.cur.end = line_end;
        let r = self.poly(true);
        self.cur.end = end;
        r
    }

    fn command_args(&mut self) -> Result<(Vec<Value>, Vec<(String, Value)>)> {
        let mut args = Vec::new();
        let mut options = Vec::new();
        loop {
            self.cur.skip_ws();
            if self.cur.at_end() {
                break;
            }
            if self.cur.peek() == Some(b',') {
                self.cur.pos += 1;
                continue;
            }
            let save = self.cur.pos;
            let word = self.cur.ident_with(false);
            if !word.is_empty() && word != "x" && self.cur.peek() == Some(b'=') {
                self.cur.pos += 1;
                let v = self.value(false)?;
                options.push((word, v));
                continue;
            }
            self.cur.pos = save;
            args.push(self.value(false)?);
        }
        Ok((args, options))
    }

    /// An argument value. Without `spaces`, bare polynomials stop at whitespace.
    fn value(&mut self, spaces: bool) -> Result<Value> {
        self.cur.skip_ws();
        let pos = self.cur.pos;
        match self.cur.peek() {
            Some(b'(') => {
                if let Some(t) = self.try_tuple() {
                    return Ok(Value::Tuple(t));
                }
                self.cur.pos += 1;
                let p = self.poly(true)?;
                self.cur.expect(b')')?;
                Ok(Value::Poly(p))
            }
            Some(c) if c.is_ascii_digit() || c == b'-' => {
                let save = self.cur.pos;
                let n = self.cur.int();
                self.cur.skip_ws();
                let after = self.cur.peek();
                match n {
                    Ok(n) if matches!(after, None | Some(b',' | b')')) || (!spaces && self.space_before()) => Ok(Value::Int(n)),
                    _ => {
                        self.cur.pos = save;
                        Ok(Value::Poly(self.poly(spaces)?))
                    }
                }
            }
            Some(b'x') if self.cur.peek_at(1) == Some(b'[') => Ok(Value::Poly(self.poly(spaces)?)),
            _ => {
                let word = self.cur.ident_with(false);
                if word.is_empty() {
                    return Err(self.cur.error("expected a value"));
                }
                if self.cur.peek() == Some(b'(') {
                    if !FUNCTIONS.contains(&word.as_str()) {
                        return Err(self.cur.semantic_at(pos, "unknown function", &word));
                    }
                    self.cur.pos += 1;
                    let mut args = vec![self.value(true)?];
                    while self.cur.eat(b',') {
                        args.push(self.value(true)?);
                    }
                    self.cur.expect(b')')?;
                    self.check_call(pos, &word, &args)?;
                    return Ok(Value::Call(word, args));
                }
                if !self.names.contains_key(&word) && !spaces && is_keyword_value(&word) {
                    return Ok(Value::Name(word));
                }
                self.reference(pos, &word)?;
                Ok(Value::Name(word))
            }
        }
    }

    fn space_before(&self) -> bool {
        self.cur.pos > 0 && self.cur.src[self.cur.pos - 1].is_ascii_whitespace()
    }

    fn check_call(&self, pos: usize, f: &str, args: &[Value]) -> Result<()> {
        let kind_of = |v: &Value| match v {
            Value::Name(n) => self.names.get(n).copied(),
            Value::Call(..) => Some(Kind::Ideal),
            Value::Poly(_) => Some(Kind::Poly),
            _ => None,
        };
        let ok = match f {
            "minors" => args.len() == 2 && kind_of(&args[0]) == Some(Kind::Matrix) && matches!(args[1], Value::Int(_)),
            "colon" => args.len() == 2 && kind_of(&args[1]) == Some(Kind::Poly) && kind_of(&args[0]).is_some(),
            "intersect" | "sum" => args.len() == 2 && args.iter().all(|a| matches!(kind_of(a), Some(Kind::Ideal | Kind::Poly))),
            "initial" | "gin" => args.len() == 1 && matches!(kind_of(&args[0]), Some(Kind::Ideal | Kind::Poly)),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.cur.semantic_at(pos, format!("bad arguments for {f}"), f))
        }
    }

    fn try_tuple(&mut self) -> Option<Vec<i64>> {
        let save = self.cur.pos;
        let r = (|| {
            self.cur.expect(b'(').ok()?;
            let mut t = vec![self.cur.int().ok()?];
            while self.cur.eat(b',') {
                t.push(self.cur.int().ok()?);
            }
            self.cur.expect(b')').ok()?;
            (t.len() >= 2).then_some(t)
        })();
        if r.is_none() {
            self.cur.pos = save;
        }
        r
    }

    fn ws(&mut self, spaces: bool) {
        if spaces {
            self.cur.skip_ws();
        }
    }

    fn poly(&mut self, spaces: bool) -> Result<Polynomial> {
        self.ws(spaces);
        let mut neg = false;
        if self.cur.peek() == Some(b'-') {
            neg = true;
            self.cur.pos += 1;
        } else if self.cur.peek() == Some(b'+') {
            self.cur.pos += 1;
        }
        let mut acc = self.term(spaces)?;
        if neg {
            acc = -&acc;
        }
        loop {
            let save = self.cur.pos;
            self.ws(spaces);
            match self.cur.peek() {
                Some(b'+') => {
                    self.cur.pos += 1;
                    acc = &acc + &self.term(spaces)?;
                }
                Some(b'-') => {
                    self.cur.pos += 1;
                    acc = &acc - &self.term(spaces)?;
                }
                _ => {
                    self.cur.pos = save;
                    return Ok(acc);
                }
            }
        }
    }

    fn term(&mut self, spaces: bool) -> Result<Polynomial> {
        let mut acc = self.factor(spaces)?;
        loop {
            let save = self.cur.pos;
            self.ws(spaces);
            if self.cur.peek() == Some(b'*') {
                self.cur.pos += 1;
                acc = &acc * &self.factor(spaces)?;
            } else {
                self.cur.pos = save;
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self, spaces: bool) -> Result<Polynomial> {
        self.ws(spaces);
        let base = match self.cur.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.cur.pos;
                while matches!(self.cur.peek(), Some(c) if c.is_ascii_digit()) {
                    self.cur.pos += 1;
                }
                let s = std::str::from_utf8(&self.cur.src[start..self.cur.pos]).unwrap();
                let c: i64 = s.parse().map_err(|_| self.cur.error("coefficient too large"))?;
                Polynomial::constant(self.ring, c)
            }
            Some(b'x') => self.variable()?,
            Some(b'(') => {
                self.cur.pos += 1;
                let p = self.poly(true)?;
                self.cur.expect(b')')?;
                p
            }
            _ => return Err(self.cur.error("expected a coefficient, variable or `(`")),
        };
        let save = self.cur.pos;
        self.ws(spaces);
        if self.cur.peek() == Some(b'^') {
            self.cur.pos += 1;
            self.ws(spaces);
            let e = self.cur.uint()?;
            let e = u32::try_from(e).map_err(|_| self.cur.error("exponent too large"))?;
            Ok(base.pow(e))
        } else {
            self.cur.pos = save;
            Ok(base)
        }
    }

    fn variable(&mut self) -> Result<Polynomial> {
        let start = self.cur.pos;
        self.cur.pos += 1;
        if self.cur.peek() != Some(b'[') {
            return Err(self.cur.error("expected `[` after x"));
        }
        self.cur.pos += 1;
        let i = self.cur.uint()? as usize;
        self.cur.expect(b',')?;
        let j = self.cur.uint()? as usize;
        self.cur.expect(b']')?;
        let token = String::from_utf8_lossy(&self.cur.src[start..self.cur.pos]).into_owned();
        if i == 0 || i > self.ring.num_blocks() {
            return Err(self.cur.semantic_at(start, "block out of range", &token));
        }
        if j == 0 || j > self.ring.block_size(i) {
            return Err(self.cur.semantic_at(start, "variable out of range for its block", &token));
        }
        Ok(Polynomial::var(self.ring, i, j))
    }
}

/// Words accepted as option values without being defined names.
fn is_keyword_value(w: &str) -> bool {
    matches!(
        w,
        "yes" | "no" | "pass" | "fail" | "ok" | "inconclusive" | "true" | "false" | "exact" | "atmost" | "degrevlex" | "lex"
    )
}

/// Builds the matrix described by a definition.
pub fn build_matrix(ring: &BlockRing, st: &Statement) -> Result<GradedMatrix> {
    let Statement::Matrix {
        mode,
        rows,
        cols,
        body,
        ..
    } = st
    else {
        return Err(Error::structural("not a matrix definition"));
    };
    let (rows, cols) = (*rows, *cols);
    let a = match body {
        MatrixBody::Entries(e) => {
            if e.len() != rows || e.iter().any(|r| r.len() != cols) {
                return Err(Error::structural(format!("matrix body does not have shape {rows}x{cols}")));
            }
            GradedMatrix::from_entries(ring, *mode, e.clone())?
        }
        MatrixBody::Random { seed } => match mode {
            GradingMode::Column => {
                if cols != ring.num_blocks() {
                    return Err(Error::structural("a random column-graded matrix has one column per block"));
                }
                GradedMatrix::random_column_graded(ring, rows, *seed)?
            }
            GradingMode::Row => {
                if rows != ring.num_blocks() {
                    return Err(Error::structural("a random row-graded matrix has one row per block"));
                }
                GradedMatrix::random_row_graded(ring, cols, *seed)?
            }
        },
        MatrixBody::Generic => {
            if *mode != GradingMode::Row || rows != ring.num_blocks() || ring.block_sizes().iter().any(|&s| s != cols) {
                return Err(Error::structural(
                    "a generic matrix is row-graded with one row per block and block size = columns",
                ));
            }
            GradedMatrix::generic_row_graded(ring)?
        }
    };
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slash_separated_session() {
        let s = parse("ring v=2 blocks=[2,2] char=32003 / ideal I = x[1,1]*x[2,2] - x[1,2]*x[2,1]", None).unwrap();
        assert_eq!(s.statements.len(), 1);
        let Statement::Ideal { expr: IdealExpr::Generators(g), .. } = &s.statements[0].statement else {
            panic!()
        };
        let Value::Poly(p) = &g[0] else { panic!() };
        assert!(p.is_multihomogeneous(&s.ring).0);
        assert_eq!(p.format(&s.ring), "x[1,1]*x[2,2] - x[1,2]*x[2,1]");
    }

    #[test]
    fn block_out_of_range() {
        let err = parse("ring v=2 blocks=[2,2] char=32003\nideal I = x[3,1]", None).unwrap_err();
        assert_eq!(
            err,
            Error::Semantic {
                line: 2,
                col: 11,
                msg: "block out of range".into(),
                token: "x[3,1]".into()
            }
        );
    }

    #[test]
    fn syntax_error_location() {
        let err = parse("ring v=1 blocks=[2]\npoly F = x[1,1] * * x[1,2]", None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, col: 19, .. }), "{err:?}");
    }

    #[test]
    fn undefined_and_duplicate_names() {
        let err = parse("ring v=1 blocks=[2]\ncs J", None).unwrap_err();
        assert!(matches!(err, Error::Semantic { ref token, .. } if token == "J"));
        let err = parse("ring v=1 blocks=[2]\npoly F = x[1,1]\nideal F = x[1,2]", None).unwrap_err();
        assert!(matches!(err, Error::Semantic { ref msg, .. } if msg == "name already defined"));
        let err = parse("ring v=1 blocks=[2]\nfrobnicate", None).unwrap_err();
        assert!(matches!(err, Error::Semantic { ref msg, .. } if msg == "unknown command"));
    }

    #[test]
    fn matrices_commands_and_comments() {
        let text = "# a comment\nring v=3 blocks=[3,3,3] char=32003\n\
            matrix X rowgraded 3x3 {\n  x[1,1], x[1,2], x[1,3]\n  x[2,1], x[2,2], 0\n  0, 0, x[3,3]\n}\n\
            poly F = x[1,1]*x[2,1]*x[3,2] + x[1,3]*x[2,3]*x[3,3]\n\
            ideal I = minors(X, 2)\n\
            colon I F   # trailing comment\n\
            ugb minors(X,2) orders=5 seed=7; cs colon(I, F) expect=no\n\
            bounds I bound=(1,1,1) mode=atmost\n\
            closure I x[1,2]";
        let s = parse(text, None).unwrap();
        assert_eq!(s.statements.len(), 8);
        let Statement::Command { name, args, options } = &s.statements[4].statement else { panic!() };
        assert_eq!(name, "ugb");
        assert_eq!(args.len(), 1);
        assert_eq!(options[0], ("orders".to_string(), Value::Int(5)));
        let Statement::Command { options, .. } = &s.statements[6].statement else { panic!() };
        assert_eq!(options[0].1, Value::Tuple(vec![1, 1, 1]));
        assert_eq!(s.statements[3].line, 10);
    }

    #[test]
    fn grading_violation_is_semantic() {
        let err = parse("ring v=2 blocks=[2,2]\nmatrix A colgraded 2x2 { x[1,1], x[1,2]; x[2,1], x[2,2] }", None).unwrap_err();
        assert!(matches!(err, Error::Semantic { ref token, .. } if token == "A"), "{err:?}");
    }

    #[test]
    fn round_trip() {
        let text = "ring v=2 blocks=[2,3] char=101\n\
            poly F = 3*x[1,1]^2 - x[1,2]*x[2,3] + 5\n\
            poly G = (x[1,1] + x[1,2])^2\n\
            ideal I = F, x[2,1]*x[1,2] - 2*x[1,1]*x[2,2]\n\
            ideal J = colon(I, (x[1,1]))\n\
            matrix A colgraded 2x2 random seed=4\n\
            matrix B rowgraded 2x3 { x[1,1], 0, x[1,2]; x[2,1], x[2,2], -x[2,3] }\n\
            ideal K = intersect(J, minors(B, 2))\n\
            gin K trials=4 expect=ok\n\
            bounds K bound=(1,1) mode=exact orders=3\n\
            member I (x[1,1]^3)";
        let s = parse(text, None).unwrap();
        let again = parse(&s.to_source(), None).unwrap();
        assert_eq!(s.ring, again.ring);
        let a: Vec<_> = s.statements.iter().map(|l| &l.statement).collect();
        let b: Vec<_> = again.statements.iter().map(|l| &l.statement).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn standalone_polynomial() {
        let ring = BlockRing::with_blocks(&[2, 2]).unwrap();
        let f = parse_polynomial(&ring, "x[1,1]*x[2,2] - x[1,2]*x[2,1]").unwrap();
        assert_eq!(f.len(), 2);
        assert!(parse_polynomial(&ring, "x[1,1] +").is_err());
        assert!(parse_polynomial(&ring, "x[3,1]").is_err());
    }

    #[test]
    fn characteristic_override() {
        let s = parse("ring v=1 blocks=[1] char=101\npoly F = 200*x[1,1]", Some(7)).unwrap();
        assert_eq!(s.ring.characteristic(), 7);
        let Statement::Poly { value, .. } = &s.statements[0].statement else { panic!() };
        assert_eq!(value.format(&s.ring), "-3*x[1,1]");
    }
}
