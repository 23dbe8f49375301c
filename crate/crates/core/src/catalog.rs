//! Plain-text catalogs of monoids, acts, equation systems, and homs.
//!
//! ```text
//! monoid E
//! elements 1 e
//! identity 1
//! mul
//! 1 e
//! e e
//! end
//!
//! act A over E
//! elements p q
//! action
//! p p
//! q q
//! end
//! ```
//!
//! `#` starts a comment. Whole-line comments between blocks are kept in the
//! document; comments inside blocks and at the end of lines are dropped.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::{generated_subact, Act, ActHom, Monoid, Subact};
use crate::equations::{Equation, EquationSystem, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSystem {
    pub name: String,
    pub system: EquationSystem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedHom {
    pub name: String,
    pub hom: ActHom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    /// Text after the `#`, with trailing whitespace removed.
    Comment(String),
    Monoid(Arc<Monoid>),
    Act(Arc<Act>),
    System(NamedSystem),
    Hom(NamedHom),
}

impl Block {
    pub fn name(&self) -> Option<&str> {
        match self {
            Block::Comment(_) => None,
            Block::Monoid(m) => Some(m.name()),
            Block::Act(a) => Some(a.name()),
            Block::System(s) => Some(&s.name),
            Block::Hom(h) => Some(&h.name),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CatalogDocument {
    pub blocks: Vec<Block>,
}

impl CatalogDocument {
    pub fn new() -> Self {
        CatalogDocument::default()
    }

    pub fn push_comment(&mut self, text: impl Into<String>) {
        self.blocks.push(Block::Comment(text.into().trim_end().to_string()));
    }

    pub fn push_monoid(&mut self, monoid: Arc<Monoid>) {
        self.blocks.push(Block::Monoid(monoid));
    }

    pub fn push_act(&mut self, act: Arc<Act>) {
        self.blocks.push(Block::Act(act));
    }

    /// Adds a system, replacing its constants by the subact its constant
    /// terms generate (the whole act if there are none), as parsing does.
    pub fn push_system(&mut self, name: impl Into<String>, system: &EquationSystem) -> Result<()> {
        let constants = mentioned_constants(system.ambient(), system.equations())?;
        let system = EquationSystem::new(system.var_names().to_vec(), constants, system.equations().to_vec())?;
        self.blocks.push(Block::System(NamedSystem { name: name.into(), system }));
        Ok(())
    }

    pub fn push_hom(&mut self, name: impl Into<String>, hom: ActHom) {
        self.blocks.push(Block::Hom(NamedHom { name: name.into(), hom }));
    }

    pub fn monoids(&self) -> impl Iterator<Item = &Arc<Monoid>> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Monoid(m) => Some(m),
            _ => None,
        })
    }

    pub fn acts(&self) -> impl Iterator<Item = &Arc<Act>> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Act(a) => Some(a),
            _ => None,
        })
    }

    pub fn systems(&self) -> impl Iterator<Item = &NamedSystem> {
        self.blocks.iter().filter_map(|b| match b {
            Block::System(s) => Some(s),
            _ => None,
        })
    }

    pub fn homs(&self) -> impl Iterator<Item = &NamedHom> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Hom(h) => Some(h),
            _ => None,
        })
    }

    pub fn monoid(&self, name: &str) -> Option<&Arc<Monoid>> {
        self.monoids().find(|m| m.name() == name)
    }

    pub fn act(&self, name: &str) -> Option<&Arc<Act>> {
        self.acts().find(|a| a.name() == name)
    }

    pub fn system(&self, name: &str) -> Option<&NamedSystem> {
        self.systems().find(|s| s.name == name)
    }

    pub fn hom(&self, name: &str) -> Option<&NamedHom> {
        self.homs().find(|h| h.name == name)
    }
}

fn mentioned_constants(act: &Arc<Act>, equations: &[Equation]) -> Result<Subact> {
    let seed: Vec<usize> = equations
        .iter()
        .flat_map(|e| [e.lhs, e.rhs])
        .filter_map(|t| match t {
            Term::Const(a) => Some(a),
            Term::Var { .. } => None,
        })
        .collect();
    if seed.is_empty() {
        Ok(Subact::whole(act.clone()))
    } else {
        generated_subact(act, &seed)
    }
}

fn join(labels: impl IntoIterator<Item = impl AsRef<str>>) -> String {
    labels.into_iter().map(|l| l.as_ref().to_string()).collect::<Vec<_>>().join(" ")
}

/// Canonical text: blocks in order, separated by blank lines.
pub fn serialize_catalog(doc: &CatalogDocument) -> String {
    let mut out = String::new();
    for (i, block) in doc.blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match block {
            Block::Comment(text) => {
                let _ = writeln!(out, "#{text}");
            }
            Block::Monoid(m) => {
                let _ = writeln!(out, "monoid {}", m.name());
                let _ = writeln!(out, "elements {}", join(m.labels()));
                let _ = writeln!(out, "identity {}", m.label(m.identity()));
                out.push_str("mul\n");
                for i in 0..m.order() {
                    let _ = writeln!(out, "{}", join((0..m.order()).map(|j| m.label(m.mul(i, j)))));
                }
                out.push_str("end\n");
            }
            Block::Act(a) => {
                let _ = writeln!(out, "act {} over {}", a.name(), a.monoid().name());
                let _ = writeln!(out, "elements {}", join(a.labels()));
                out.push_str("action\n");
                for x in 0..a.size() {
                    let _ = writeln!(out, "{}", join(a.row(x).iter().map(|&y| a.label(y))));
                }
                out.push_str("end\n");
            }
            Block::System(s) => {
                let _ = writeln!(out, "system {} in {}", s.name, s.system.ambient().name());
                if s.system.var_names().is_empty() {
                    out.push_str("vars\n");
                } else {
                    let _ = writeln!(out, "vars {}", join(s.system.var_names()));
                }
                for eq in s.system.equations() {
                    let _ = writeln!(out, "eq {}", s.system.format_equation(eq));
                }
                out.push_str("end\n");
            }
            Block::Hom(h) => {
                let (src, dst) = (h.hom.source(), h.hom.target());
                let _ = writeln!(out, "hom {} : {} -> {}", h.name, src.name(), dst.name());
                for (a, &b) in h.hom.map().iter().enumerate() {
                    let _ = writeln!(out, "map {} -> {}", src.label(a), dst.label(b));
                }
                out.push_str("end\n");
            }
        }
    }
    out
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || matches!(c, '#' | ',' | '@' | '.' | '='))
}

/// A table row: line number and entries.
type Row<'a> = (usize, Vec<&'a str>);

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    /// Next non-blank line with comments stripped, as (line number, content).
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        while let Some(&(no, raw)) = self.lines.get(self.pos) {
            self.pos += 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if !content.is_empty() {
                return Some((no, content));
            }
        }
        None
    }

    fn expect(&mut self, last_line: usize) -> Result<(usize, &'a str)> {
        self.next_content().ok_or_else(|| syntax(last_line, "unexpected end of input inside a block"))
    }

    fn keyword_line(&mut self, last_line: usize, keyword: &str) -> Result<(usize, Vec<&'a str>)> {
        let (no, content) = self.expect(last_line)?;
        let mut words = content.split_whitespace();
        if words.next() != Some(keyword) {
            return Err(syntax(no, format!("expected `{keyword}`")));
        }
        Ok((no, words.collect()))
    }

    fn rows_until_end(&mut self, last_line: usize) -> Result<(usize, Vec<Row<'a>>)> {
        let mut rows = Vec::new();
        let mut last = last_line;
        loop {
            let (no, content) = self.expect(last)?;
            last = no;
            if content == "end" {
                return Ok((no, rows));
            }
            rows.push((no, content.split_whitespace().collect()));
        }
    }
}

fn lookup(labels: &[String], label: &str, line: usize) -> Result<usize> {
    labels.iter().position(|l| l == label).ok_or_else(|| syntax(line, format!("unknown element `{label}`")))
}

fn parse_table(rows: &[Row<'_>], row_labels: &[String], columns: usize, end_line: usize) -> Result<Vec<Vec<usize>>> {
    if rows.len() != row_labels.len() {
        return Err(syntax(end_line, format!("expected {} rows, found {}", row_labels.len(), rows.len())));
    }
    rows.iter()
        .map(|(no, words)| {
            if words.len() != columns {
                return Err(syntax(*no, format!("expected {columns} entries, found {}", words.len())));
            }
            words.iter().map(|w| lookup(row_labels, w, *no)).collect()
        })
        .collect()
}

fn parse_labels(words: &[&str], line: usize) -> Result<Vec<String>> {
    let mut seen = HashSet::new();
    for w in words {
        if !valid_name(w) {
            return Err(syntax(line, format!("invalid label `{w}`")));
        }
        if !seen.insert(*w) {
            return Err(syntax(line, format!("duplicate label `{w}`")));
        }
    }
    Ok(words.iter().map(|w| w.to_string()).collect())
}

fn parse_term(text: &str, act: &Act, vars: &[String], line: usize) -> Result<Term> {
    let text = text.trim();
    if let Some(label) = text.strip_prefix('@') {
        let label = label.trim();
        return act.index_of(label).map(Term::Const).ok_or_else(|| syntax(line, format!("unknown element `{label}`")));
    }
    let (var, scalar) = match text.split_once('.') {
        Some((v, s)) => (v.trim(), Some(s.trim())),
        None => (text, None),
    };
    let var = vars.iter().position(|v| v == var).ok_or_else(|| syntax(line, format!("undeclared variable `{var}`")))?;
    let monoid = act.monoid();
    let scalar = match scalar {
        Some(s) => monoid.index_of(s).ok_or_else(|| syntax(line, format!("unknown monoid element `{s}`")))?,
        None => monoid.identity(),
    };
    Ok(Term::var(var, scalar))
}

fn in_block<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Validation { block: name.to_string(), source: Box::new(e) })
}

pub fn parse_catalog(text: &str) -> Result<CatalogDocument> {
    let mut lines = Lines { lines: text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect(), pos: 0 };
    let mut doc = CatalogDocument::new();
    let mut names: HashSet<(&'static str, String)> = HashSet::new();

    // whole-line comments between blocks are kept
    while let Some(&(_, raw)) = lines.lines.get(lines.pos) {
        if let Some(rest) = raw.trim_start().strip_prefix('#') {
            lines.pos += 1;
            doc.push_comment(rest);
            continue;
        }
        if raw.trim().is_empty() {
            lines.pos += 1;
            continue;
        }
        let (no, header) = lines.next_content().expect("line has content");
        let words: Vec<&str> = header.split_whitespace().collect();
        let kind = words[0];
        let name = match words.get(1) {
            Some(n) if valid_name(n) => n.to_string(),
            Some(n) => return Err(syntax(no, format!("invalid name `{n}`"))),
            None => return Err(syntax(no, format!("`{kind}` needs a name"))),
        };
        let key = match kind {
            "monoid" => "monoid",
            "act" => "act",
            "system" => "system",
            "hom" => "hom",
            other => return Err(syntax(no, format!("unknown block kind `{other}`"))),
        };
        if !names.insert((key, name.clone())) {
            return Err(syntax(no, format!("duplicate {key} `{name}`")));
        }

        match key {
            "monoid" => {
                if words.len() != 2 {
                    return Err(syntax(no, "expected `monoid NAME`"));
                }
                let (l, elems) = lines.keyword_line(no, "elements")?;
                let labels = parse_labels(&elems, l)?;
                if labels.is_empty() {
                    return Err(syntax(l, "a monoid needs at least one element"));
                }
                let (l, id) = lines.keyword_line(l, "identity")?;
                if id.len() != 1 {
                    return Err(syntax(l, "expected `identity LABEL`"));
                }
                let identity = lookup(&labels, id[0], l)?;
                let (l, rest) = lines.keyword_line(l, "mul")?;
                if !rest.is_empty() {
                    return Err(syntax(l, "unexpected text after `mul`"));
                }
                let (end, rows) = lines.rows_until_end(l)?;
                let table = parse_table(&rows, &labels, labels.len(), end)?;
                let monoid = in_block(&name, Monoid::new(name.clone(), labels, identity, &table))?;
                doc.push_monoid(Arc::new(monoid));
            }
            "act" => {
                if words.len() != 4 || words[2] != "over" {
                    return Err(syntax(no, "expected `act NAME over MONOID`"));
                }
                let monoid = doc
                    .monoid(words[3])
                    .cloned()
                    .ok_or_else(|| Error::UnknownReference { name: words[3].to_string(), line: no })?;
                let (l, elems) = lines.keyword_line(no, "elements")?;
                let labels = parse_labels(&elems, l)?;
                if labels.is_empty() {
                    return Err(syntax(l, "an act needs at least one element"));
                }
                let (l, rest) = lines.keyword_line(l, "action")?;
                if !rest.is_empty() {
                    return Err(syntax(l, "unexpected text after `action`"));
                }
                let (end, rows) = lines.rows_until_end(l)?;
                let table = parse_table(&rows, &labels, monoid.order(), end)?;
                let act = in_block(&name, Act::new(name.clone(), monoid, labels, &table))?;
                doc.push_act(Arc::new(act));
            }
            "system" => {
                if words.len() != 4 || words[2] != "in" {
                    return Err(syntax(no, "expected `system NAME in ACT`"));
                }
                let act = doc
                    .act(words[3])
                    .cloned()
                    .ok_or_else(|| Error::UnknownReference { name: words[3].to_string(), line: no })?;
                let (l, vars) = lines.keyword_line(no, "vars")?;
                let vars = parse_labels(&vars, l)?;
                let mut equations = Vec::new();
                let mut last = l;
                loop {
                    let (l, content) = lines.expect(last)?;
                    last = l;
                    if content == "end" {
                        break;
                    }
                    let body = content
                        .strip_prefix("eq")
                        .filter(|b| b.starts_with(char::is_whitespace))
                        .ok_or_else(|| syntax(l, "expected `eq TERM = TERM` or `end`"))?;
                    let (lhs, rhs) = body.split_once('=').ok_or_else(|| syntax(l, "missing `=`"))?;
                    if rhs.contains('=') {
                        return Err(syntax(l, "more than one `=`"));
                    }
                    equations.push(Equation::new(parse_term(lhs, &act, &vars, l)?, parse_term(rhs, &act, &vars, l)?));
                }
                let constants = in_block(&name, mentioned_constants(&act, &equations))?;
                let system = in_block(&name, EquationSystem::new(vars, constants, equations))?;
                doc.blocks.push(Block::System(NamedSystem { name, system }));
            }
            _ => {
                if words.len() != 6 || words[2] != ":" || words[4] != "->" {
                    return Err(syntax(no, "expected `hom NAME : SOURCE -> TARGET`"));
                }
                let resolve = |n: &str| {
                    doc.act(n).cloned().ok_or_else(|| Error::UnknownReference { name: n.to_string(), line: no })
                };
                let (source, target) = (resolve(words[3])?, resolve(words[5])?);
                let mut map = vec![None; source.size()];
                let mut last = no;
                loop {
                    let (l, content) = lines.expect(last)?;
                    last = l;
                    if content == "end" {
                        break;
                    }
                    let w: Vec<&str> = content.split_whitespace().collect();
                    if w.len() != 4 || w[0] != "map" || w[2] != "->" {
                        return Err(syntax(l, "expected `map A -> B` or `end`"));
                    }
                    let a = lookup(source.labels(), w[1], l)?;
                    let b = lookup(target.labels(), w[3], l)?;
                    if map[a].replace(b).is_some() {
                        return Err(syntax(l, format!("`{}` mapped twice", w[1])));
                    }
                }
                let map: Vec<usize> = match map.iter().position(Option::is_none) {
                    Some(a) => return Err(syntax(last, format!("no image for `{}`", source.label(a)))),
                    None => map.into_iter().flatten().collect(),
                };
                let hom = in_block(&name, ActHom::new(source, target, map))?;
                doc.push_hom(name, hom);
            }
        }
    }
    Ok(doc)
}
