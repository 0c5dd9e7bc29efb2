//! Text formats: presentations, graphs of groups, Tietze certificates.
//!
//! Words are whitespace-separated factors. A factor is a generator name, a
//! parenthesized word, or a commutator `[u, v] = u v u^-1 v^-1`, optionally
//! followed by `^k` with `k` a nonzero integer. The identity is written `1`.

use orelt_core::gog::{Edge, EdgeKind, GraphOfGroups, TietzeCertificate, TietzeMove, Vertex, VertexTag};
use orelt_core::words::commutator;
use orelt_core::{Presentation, Word};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, column, message: message.into() })
}

struct WordParser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column0: usize,
    names: &'a [String],
}

impl WordParser<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        err(self.line, self.column0 + self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => self.error(format!("expected '{c}', found '{d}'")),
            None => self.error(format!("expected '{c}', found end of input")),
        }
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut acc = Word::empty();
        while let Some(c) = self.peek() {
            if matches!(c, ')' | ']' | ',') {
                break;
            }
            let factor = self.factor()?;
            acc = acc.concat(&factor);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Word, ParseError> {
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                w
            }
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                commutator(&u, &v)
            }
            Some('1') => {
                self.pos += 1;
                Word::empty()
            }
            Some(c) if is_name_start(c) => {
                let start = self.pos;
                while self.pos < self.chars.len() && is_name_char(self.chars[self.pos]) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Word::generator(i + 1),
                    None => {
                        return err(self.line, self.column0 + start, format!("unknown generator '{name}'"));
                    }
                }
            }
            Some(c) => return self.error(format!("unexpected '{c}'")),
            None => return self.error("unexpected end of input"),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let k = self.integer()?;
            if k == 0 {
                return err(self.line, self.column0 + at, "exponent must be nonzero");
            }
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-' | '+')) {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().or_else(|_| err(self.line, self.column0 + start, format!("bad exponent '{text}'")))
    }
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\'')
}

fn is_name(s: &str) -> bool {
    let mut it = s.chars();
    it.next().is_some_and(is_name_start) && it.all(is_name_char)
}

/// Parses `text` as a word over `names`. `line` and `column` locate `text`
/// in its file for error messages (both 1-based).
pub fn parse_word_at(text: &str, names: &[String], line: usize, column: usize) -> Result<Word, ParseError> {
    let mut p = WordParser { chars: text.chars().collect(), pos: 0, line, column0: column, names };
    let w = p.word()?;
    if let Some(c) = p.peek() {
        return p.error(format!("unexpected '{c}'"));
    }
    Ok(w)
}

pub fn parse_word(text: &str, names: &[String]) -> Result<Word, ParseError> {
    parse_word_at(text, names, 1, 1)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Offset (1-based column) of `part` inside `line`; `part` must be a subslice.
fn column_of(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize + 1
}

/// Accumulates `gens:` and `rel:` lines.
#[derive(Default)]
struct PresentationBuilder {
    generators: Option<Vec<String>>,
    relators: Vec<Word>,
}

impl PresentationBuilder {
    /// Returns false if the line is not a presentation line.
    fn feed(&mut self, raw: &str, body: &str, line: usize) -> Result<bool, ParseError> {
        if let Some(rest) = body.strip_prefix("gens:") {
            if self.generators.is_some() {
                return err(line, column_of(raw, body), "duplicate 'gens:' line");
            }
            let mut names: Vec<String> = Vec::new();
            for name in rest.split_whitespace() {
                let col = column_of(raw, name);
                if !is_name(name) {
                    return err(line, col, format!("invalid generator name '{name}'"));
                }
                if names.iter().any(|n| n == name) {
                    return err(line, col, format!("duplicate generator '{name}'"));
                }
                names.push(name.to_string());
            }
            self.generators = Some(names);
            Ok(true)
        } else if let Some(rest) = body.strip_prefix("rel:") {
            let Some(names) = &self.generators else {
                return err(line, column_of(raw, body), "'rel:' before 'gens:'");
            };
            let w = parse_word_at(rest, names, line, column_of(raw, rest))?;
            if w.is_empty() {
                return err(line, column_of(raw, rest), "empty relator");
            }
            self.relators.push(w);
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn finish(self, line: usize) -> Result<Presentation, ParseError> {
        let Some(generators) = self.generators else {
            return err(line, 1, "missing 'gens:' line");
        };
        Presentation::new(generators, self.relators).or_else(|e| err(line, 1, e.to_string()))
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut b = PresentationBuilder::default();
    let mut last = 1;
    for (i, raw) in text.lines().enumerate() {
        last = i + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        if !b.feed(raw, body, i + 1)? {
            return err(i + 1, column_of(raw, body), format!("expected 'gens:' or 'rel:', found '{body}'"));
        }
    }
    b.finish(last)
}

/// Run-length form, e.g. `a^2 b^-1 a`; the empty word prints as `1`.
pub fn print_word(w: &Word, names: &[String]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        let name = &names[letters[i].gen() - 1];
        let k = (j - i) as i64 * if letters[i].is_positive() { 1 } else { -1 };
        parts.push(if k == 1 { name.clone() } else { format!("{name}^{k}") });
        i = j;
    }
    parts.join(" ")
}

pub fn print_presentation(p: &Presentation) -> String {
    let mut out = format!("gens: {}\n", p.generators.join(" "));
    for r in &p.relators {
        out.push_str(&format!("rel: {}\n", print_word(r, &p.generators)));
    }
    out
}

fn key_values(line: usize, raw: &str, tokens: &[&str]) -> Result<Vec<(String, String)>, ParseError> {
    tokens
        .iter()
        .map(|t| match t.split_once('=') {
            Some((k, v)) => Ok((k.to_string(), v.to_string())),
            None => err(line, column_of(raw, t), format!("expected key=value, found '{t}'")),
        })
        .collect()
}

fn lookup<'a>(kv: &'a [(String, String)], key: &str, line: usize) -> Result<&'a str, ParseError> {
    kv.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str()).ok_or_else(|| ParseError {
        line,
        column: 1,
        message: format!("missing '{key}='"),
    })
}

fn parse_bool(v: &str, line: usize) -> Result<bool, ParseError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => err(line, 1, format!("expected true or false, found '{v}'")),
    }
}

fn parse_index(v: &str, line: usize) -> Result<usize, ParseError> {
    v.parse().or_else(|_| err(line, 1, format!("expected a non-negative integer, found '{v}'")))
}

struct PendingVertex {
    id: String,
    tag: VertexTag,
    line: usize,
    body: PresentationBuilder,
}

struct PendingEdge {
    id: String,
    u: usize,
    v: usize,
    kind: EdgeKind,
    in_tree: bool,
    images_u: Vec<Word>,
    images_v: Vec<Word>,
}

enum Section {
    None,
    Vertex(PendingVertex),
    Edge(PendingEdge),
}

/// Graph-of-groups format:
///
/// ```text
/// graph jsj=true
/// vertex X tag=elementary-cyclic
///   gens: x
/// vertex V tag=rigid
///   gens: b c
///   rel: (b c^2)^2
/// edge e1 u=X v=V kind=cyclic tree=true
///   image.u = x
///   image.v = b
/// ```
///
/// Vertices must precede the edges that use them. Dihedral edges carry two
/// `image.u` and two `image.v` lines.
pub fn parse_graph(text: &str) -> Result<GraphOfGroups, ParseError> {
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut jsj = false;
    let mut section = Section::None;

    let close = |section: Section, vertices: &mut Vec<Vertex>, edges: &mut Vec<Edge>| -> Result<(), ParseError> {
        match section {
            Section::None => {}
            Section::Vertex(pv) => {
                let presentation = pv.body.finish(pv.line)?;
                vertices.push(Vertex { id: pv.id, tag: pv.tag, presentation });
            }
            Section::Edge(pe) => edges.push(Edge {
                id: pe.id,
                u: pe.u,
                v: pe.v,
                kind: pe.kind,
                images_u: pe.images_u,
                images_v: pe.images_v,
                in_tree: pe.in_tree,
            }),
        }
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens[0] {
            "graph" => {
                if !vertices.is_empty() || !matches!(section, Section::None) {
                    return err(line, 1, "'graph' header must come first");
                }
                let kv = key_values(line, raw, &tokens[1..])?;
                jsj = match kv.iter().find(|(k, _)| k == "jsj") {
                    Some((_, v)) => parse_bool(v, line)?,
                    None => false,
                };
            }
            "vertex" => {
                close(std::mem::replace(&mut section, Section::None), &mut vertices, &mut edges)?;
                if !edges.is_empty() {
                    return err(line, 1, "vertices must precede edges");
                }
                let Some(id) = tokens.get(1) else {
                    return err(line, 1, "vertex needs an id");
                };
                if vertices.iter().any(|v| v.id == *id) {
                    return err(line, column_of(raw, id), format!("duplicate vertex '{id}'"));
                }
                let kv = key_values(line, raw, &tokens[2..])?;
                let tag = match lookup(&kv, "tag", line)? {
                    "elementary-cyclic" => VertexTag::ElementaryCyclic,
                    "elementary-dihedral" => VertexTag::ElementaryDihedral,
                    "rigid" => VertexTag::Rigid,
                    t => return err(line, 1, format!("unknown tag '{t}'")),
                };
                section = Section::Vertex(PendingVertex {
                    id: id.to_string(),
                    tag,
                    line,
                    body: PresentationBuilder::default(),
                });
            }
            "edge" => {
                close(std::mem::replace(&mut section, Section::None), &mut vertices, &mut edges)?;
                let Some(id) = tokens.get(1) else {
                    return err(line, 1, "edge needs an id");
                };
                if edges.iter().any(|e| e.id == *id) {
                    return err(line, column_of(raw, id), format!("duplicate edge '{id}'"));
                }
                let kv = key_values(line, raw, &tokens[2..])?;
                let endpoint = |key: &str| -> Result<usize, ParseError> {
                    let name = lookup(&kv, key, line)?;
                    vertices.iter().position(|v| v.id == name).ok_or_else(|| ParseError {
                        line,
                        column: 1,
                        message: format!("edge '{id}': unknown vertex '{name}'"),
                    })
                };
                let (u, v) = (endpoint("u")?, endpoint("v")?);
                let kind = match lookup(&kv, "kind", line)? {
                    "cyclic" => EdgeKind::InfiniteCyclic,
                    "dihedral" => EdgeKind::InfiniteDihedral,
                    k => return err(line, 1, format!("unknown edge kind '{k}'")),
                };
                let in_tree = parse_bool(lookup(&kv, "tree", line)?, line)?;
                section = Section::Edge(PendingEdge {
                    id: id.to_string(),
                    u,
                    v,
                    kind,
                    in_tree,
                    images_u: Vec::new(),
                    images_v: Vec::new(),
                });
            }
            _ => match &mut section {
                Section::Vertex(pv) => {
                    if !pv.body.feed(raw, body, line)? {
                        return err(line, column_of(raw, body), format!("unexpected '{body}' in vertex"));
                    }
                }
                Section::Edge(pe) => {
                    let Some((lhs, rhs)) = body.split_once('=') else {
                        return err(line, column_of(raw, body), "expected 'image.u = <word>' or 'image.v = <word>'");
                    };
                    let (vid, target) = match lhs.trim() {
                        "image.u" => (pe.u, &mut pe.images_u),
                        "image.v" => (pe.v, &mut pe.images_v),
                        other => return err(line, column_of(raw, body), format!("unknown edge field '{other}'")),
                    };
                    let names = &vertices[vid].presentation.generators;
                    target.push(parse_word_at(rhs, names, line, column_of(raw, rhs))?);
                }
                Section::None => return err(line, column_of(raw, body), format!("unexpected '{body}'")),
            },
        }
    }
    close(section, &mut vertices, &mut edges)?;
    Ok(GraphOfGroups { vertices, edges, jsj_candidate: jsj })
}

fn vertex_tag_name(t: VertexTag) -> &'static str {
    match t {
        VertexTag::ElementaryCyclic => "elementary-cyclic",
        VertexTag::ElementaryDihedral => "elementary-dihedral",
        VertexTag::Rigid => "rigid",
    }
}

pub fn print_graph(g: &GraphOfGroups) -> String {
    let mut out = format!("graph jsj={}\n", g.jsj_candidate);
    for v in &g.vertices {
        out.push_str(&format!("vertex {} tag={}\n", v.id, vertex_tag_name(v.tag)));
        for l in print_presentation(&v.presentation).lines() {
            out.push_str(&format!("  {l}\n"));
        }
    }
    for e in &g.edges {
        let kind = match e.kind {
            EdgeKind::InfiniteCyclic => "cyclic",
            EdgeKind::InfiniteDihedral => "dihedral",
        };
        let (u, v) = (&g.vertices[e.u], &g.vertices[e.v]);
        out.push_str(&format!("edge {} u={} v={} kind={kind} tree={}\n", e.id, u.id, v.id, e.in_tree));
        for (a, b) in e.images_u.iter().zip(&e.images_v) {
            out.push_str(&format!("  image.u = {}\n", print_word(a, &u.presentation.generators)));
            out.push_str(&format!("  image.v = {}\n", print_word(b, &v.presentation.generators)));
        }
    }
    out
}

/// Certificate format, one move per line; words use the generator names
/// current at that step and relator indices are 0-based:
///
/// ```text
/// add-generator d = a c
/// remove-generator b relator=1
/// replace-relator target=0 other=2 sign=-1 conjugator = b c
/// cyclic-shift relator=1 by=3
/// invert-relator relator=0
/// invert-generator t
/// rename c->a t_e2->t
/// ```
pub fn parse_certificate(text: &str, start: &Presentation) -> Result<TietzeCertificate, ParseError> {
    let mut names = start.generators.clone();
    let mut moves = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        // trailing ` = <word>` clause
        let (args, word_text) = match rest.split_once(" = ") {
            Some((l, r)) if head == "add-generator" => (l, Some(r)),
            Some((l, r)) if head == "replace-relator" => match l.trim_end().strip_suffix("conjugator") {
                Some(l) => (l, Some(r)),
                None => return err(line, column_of(raw, l), "expected 'conjugator = <word>'"),
            },
            _ => (rest, None),
        };
        let tokens: Vec<&str> = args.split_whitespace().collect();
        let word = |text: Option<&str>| -> Result<Word, ParseError> {
            let text = text.ok_or_else(|| ParseError { line, column: 1, message: "missing '= <word>'".into() })?;
            parse_word_at(text, &names, line, column_of(raw, text))
        };
        let single_name = || -> Result<String, ParseError> {
            match tokens.first() {
                Some(n) if is_name(n) => Ok(n.to_string()),
                _ => err(line, 1, format!("{head} needs a generator name")),
            }
        };
        let mv = match head {
            "add-generator" => TietzeMove::AddGenerator { name: single_name()?, definition: word(word_text)? },
            "remove-generator" => {
                let kv = key_values(line, raw, &tokens[1.min(tokens.len())..])?;
                TietzeMove::RemoveGenerator {
                    name: single_name()?,
                    relator: parse_index(lookup(&kv, "relator", line)?, line)?,
                }
            }
            "replace-relator" => {
                let kv = key_values(line, raw, &tokens)?;
                let sign: i8 = match lookup(&kv, "sign", line)? {
                    "1" | "+1" => 1,
                    "-1" => -1,
                    s => return err(line, 1, format!("sign must be 1 or -1, found '{s}'")),
                };
                TietzeMove::ReplaceRelatorByProduct {
                    target: parse_index(lookup(&kv, "target", line)?, line)?,
                    other: parse_index(lookup(&kv, "other", line)?, line)?,
                    sign,
                    conjugator: if word_text.is_some() { word(word_text)? } else { Word::empty() },
                }
            }
            "cyclic-shift" => {
                let kv = key_values(line, raw, &tokens)?;
                TietzeMove::CyclicShiftRelator {
                    relator: parse_index(lookup(&kv, "relator", line)?, line)?,
                    by: parse_index(lookup(&kv, "by", line)?, line)?,
                }
            }
            "invert-relator" => {
                let kv = key_values(line, raw, &tokens)?;
                TietzeMove::InvertRelator { relator: parse_index(lookup(&kv, "relator", line)?, line)? }
            }
            "invert-generator" => {
                let name = single_name()?;
                let g = names.iter().position(|n| *n == name).ok_or_else(|| ParseError {
                    line,
                    column: 1,
                    message: format!("unknown generator '{name}'"),
                })?;
                TietzeMove::InvertGenerator { generator: g + 1 }
            }
            "rename" => {
                let mut next = names.clone();
                for t in &tokens {
                    let Some((old, new)) = t.split_once("->") else {
                        return err(line, column_of(raw, t), format!("expected old->new, found '{t}'"));
                    };
                    let Some(g) = names.iter().position(|n| n == old) else {
                        return err(line, column_of(raw, t), format!("unknown generator '{old}'"));
                    };
                    if !is_name(new) {
                        return err(line, column_of(raw, t), format!("invalid generator name '{new}'"));
                    }
                    next[g] = new.to_string();
                }
                TietzeMove::RenameGenerators { names: next }
            }
            other => return err(line, 1, format!("unknown move '{other}'")),
        };
        names = mv.next_names(&names);
        moves.push(mv);
    }
    Ok(TietzeCertificate { moves })
}

pub fn print_certificate(cert: &TietzeCertificate, start: &Presentation) -> String {
    let mut names = start.generators.clone();
    let mut out = String::new();
    for mv in &cert.moves {
        let line = match mv {
            TietzeMove::AddGenerator { name, definition } => {
                format!("add-generator {name} = {}", print_word(definition, &names))
            }
            TietzeMove::RemoveGenerator { name, relator } => format!("remove-generator {name} relator={relator}"),
            TietzeMove::ReplaceRelatorByProduct { target, conjugator, other, sign } => format!(
                "replace-relator target={target} other={other} sign={sign} conjugator = {}",
                print_word(conjugator, &names)
            ),
            TietzeMove::CyclicShiftRelator { relator, by } => format!("cyclic-shift relator={relator} by={by}"),
            TietzeMove::InvertRelator { relator } => format!("invert-relator relator={relator}"),
            TietzeMove::InvertGenerator { generator } => format!("invert-generator {}", names[generator - 1]),
            TietzeMove::RenameGenerators { names: new } => {
                let pairs: Vec<String> =
                    names.iter().zip(new).filter(|(a, b)| a != b).map(|(a, b)| format!("{a}->{b}")).collect();
                format!("rename {}", pairs.join(" "))
            }
        };
        out.push_str(&line);
        out.push('\n');
        names = mv.next_names(&names);
    }
    out
}
