//! The text fixture format.
//!
//! A fixture file starts with the header line `colimkit-fixture 1` and then
//! lists blocks. A block is a head line (a keyword followed by arguments),
//! indented body lines and a closing `end`. Tokens are separated by
//! whitespace and `#` starts a comment. Blocks may refer to blocks declared
//! earlier in the same file, or in files pulled in by `include <path>`
//! lines before the first block, by name.
//!
//! ```text
//! colimkit-fixture 1
//!
//! category Two
//!   objects 0 1
//!   arrow a : 0 -> 1
//!   terminal 1
//!   product 0 0 = 0 : id_0 id_0
//!   ...
//! end
//! ```
//!
//! Block kinds:
//!
//! - `category N`: `objects ..`, `identity x name`, `arrow f : a -> b`,
//!   `compose g f = h` (for `g ∘ f`), or `le a b` lines generating a
//!   preorder; optionally `terminal x`, `product a b = p : l r`,
//!   `equalizer f g = e : i`, or `limits auto` to choose limits by search.
//! - `presentation N bound K`: `objects ..`, `generator e : a -> b`,
//!   `relation p.. = q..` with paths in application order and `1` for the
//!   empty path.
//! - `functor N : C -> D`: `ob x y`, `mor f g`; identities follow objects.
//! - `twocat N over C`: `cell g : u => v`, `vcompose b a = c`,
//!   `hcompose b a = c`. Unit cells are named `1_u`.
//! - `diagram N over T [opposite]`: `fiber A C`,
//!   `transition u identity`, `transition u = F`, or inline `ob u x y` and
//!   `mor u f g` lines, and `component g x f` for non-unit 2-cells.
//! - `cone N over D vertex X`: `leg A identity`, `leg A = F`,
//!   `coherence u x f`; missing coherence components are identities.
//! - `site N on C`: `generators ..` or `generators all`,
//!   `cover x : f ..`.
//! - `sitediagram N on D`: `site A S`.
//! - `ambient N on D`: `generators A x ..`.
//! - `presheaf N on C`: `representable x`, or `set x n` and
//!   `map f v ..` giving `P(f): P(target) → P(source)`.
//!
//! [`render`] prints a document in canonical layout; canonical files
//! round-trip byte for byte through [`parse`] and [`render`].

mod print;
mod resolve;

pub use print::{print_category, print_workspace};
pub use resolve::{resolve, resolve_in, resolve_with, Item, Workspace};

use crate::{Error, Result};

pub const HEADER: &str = "colimkit-fixture";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl Token {
    /// Token without a source position, for generated documents.
    pub fn bare(text: impl Into<String>) -> Token {
        Token {
            text: text.into(),
            line: 0,
            column: 0,
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    pub(crate) fn unknown(&self, kind: &'static str) -> Error {
        Error::UnknownName {
            kind,
            name: self.text.clone(),
            line: self.line,
            column: self.column,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub tokens: Vec<Token>,
}

impl Line {
    pub fn bare<S: Into<String>>(words: impl IntoIterator<Item = S>) -> Line {
        Line {
            tokens: words.into_iter().map(Token::bare).collect(),
        }
    }

    pub fn keyword(&self) -> &str {
        &self.tokens[0].text
    }

    pub fn line(&self) -> usize {
        self.tokens[0].line
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub head: Line,
    pub body: Vec<Line>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub version: u32,
    /// `include <path>` lines, which must precede all blocks.
    pub includes: Vec<Token>,
    pub blocks: Vec<Block>,
}

fn tokenize(line_no: usize, text: &str) -> Vec<Token> {
    let text = match text.find('#') {
        Some(i) => &text[..i],
        None => text,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
        match (start, ch.is_whitespace()) {
            (None, false) => start = Some(i),
            (Some(s), true) => {
                tokens.push(Token {
                    text: text[s..i].to_string(),
                    line: line_no,
                    column: text[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    tokens
}

pub fn parse(text: &str) -> Result<Document> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokenize(i + 1, l)))
        .filter(|(_, t)| !t.is_empty());
    let Some((_, header)) = lines.next() else {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("empty file; expected `{HEADER} {VERSION}`"),
        });
    };
    if header[0].text != HEADER || header.len() != 2 {
        return Err(header[0].error(format!("expected header `{HEADER} {VERSION}`")));
    }
    let version: u32 = header[1]
        .text
        .parse()
        .map_err(|_| header[1].error("version must be a number"))?;
    if version != VERSION {
        return Err(header[1].error(format!("unsupported fixture version {version}")));
    }
    let mut blocks: Vec<Block> = Vec::new();
    let mut includes = Vec::new();
    let mut current: Option<Block> = None;
    let mut last_line = 1;
    for (n, tokens) in lines {
        last_line = n;
        let line = Line { tokens };
        match current.take() {
            None if line.keyword() == "include" => {
                if !blocks.is_empty() {
                    return Err(line.tokens[0].error("`include` must come before the first block"));
                }
                if line.tokens.len() != 2 {
                    return Err(line.tokens[0].error("expected `include <path>`"));
                }
                includes.push(line.tokens[1].clone());
            }
            None => {
                if line.keyword() == "end" {
                    return Err(line.tokens[0].error("`end` outside a block"));
                }
                current = Some(Block {
                    head: line,
                    body: Vec::new(),
                });
            }
            Some(mut block) => {
                if line.keyword() == "end" {
                    if line.tokens.len() > 1 {
                        return Err(line.tokens[1].error("unexpected token after `end`"));
                    }
                    blocks.push(block);
                } else {
                    block.body.push(line);
                    current = Some(block);
                }
            }
        }
    }
    if let Some(block) = current {
        return Err(Error::Parse {
            line: last_line,
            column: 1,
            message: format!(
                "block `{}` opened on line {} is not closed",
                block.head.keyword(),
                block.head.line()
            ),
        });
    }
    Ok(Document {
        version,
        includes,
        blocks,
    })
}

fn join(line: &Line) -> String {
    line.tokens
        .iter()
        .map(|t| t.text.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Canonical layout: header, then each block after a blank line, body lines
/// indented by two spaces.
pub fn render(doc: &Document) -> String {
    let mut out = format!("{HEADER} {}\n", doc.version);
    if !doc.includes.is_empty() {
        out.push('\n');
    }
    for inc in &doc.includes {
        out.push_str(&format!("include {}\n", inc.text));
    }
    for block in &doc.blocks {
        out.push('\n');
        out.push_str(&join(&block.head));
        out.push('\n');
        for line in &block.body {
            out.push_str("  ");
            out.push_str(&join(line));
            out.push('\n');
        }
        out.push_str("end\n");
    }
    out
}

/// Parses and resolves a self-contained fixture text.
pub fn load(text: &str) -> Result<Workspace> {
    resolve(&parse(text)?)
}

/// Parses and resolves a fixture file, following includes relative to the
/// including file and then to `search` directories.
pub fn load_path(path: &std::path::Path, search: &[std::path::PathBuf], budget: crate::Budget) -> Result<Workspace> {
    let mut ws = Workspace::default();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let doc = parse(&text)?;
    let dir = path.parent().map(|p| p.to_path_buf()).unwrap_or_default();
    resolve_in(&mut ws, &doc, budget, &mut |tok: &Token| {
        let candidates = std::iter::once(dir.join(&tok.text)).chain(search.iter().map(|d| d.join(&tok.text)));
        for p in candidates {
            if let Ok(text) = std::fs::read_to_string(&p) {
                return parse(&text);
            }
        }
        Err(tok.error(format!("cannot find included file `{}`", tok.text)))
    })?;
    Ok(ws)
}
