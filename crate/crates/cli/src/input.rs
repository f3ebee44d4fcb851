//! Locating and loading fixture files.
//!
//! A file argument is looked up as a path, then inside each fixture
//! directory, then in the embedded corpus. Corpus names also match with
//! underscores dropped, so `consttwo.diag` finds `const_two.diag`. Includes
//! resolve next to the including file, then in the fixture directories,
//! then in the corpus.

use std::path::{Path, PathBuf};

use colimkit::corpus;
use colimkit::fixture::{parse, resolve_in, Document, Token, Workspace};
use colimkit::{Budget, Error, Result};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug)]
pub struct Input {
    pub arg: String,
    pub digest: String,
    pub workspace: Workspace,
}

enum Source {
    File(PathBuf),
    Corpus(&'static str),
}

fn corpus_entry(name: &str) -> Option<(&'static str, &'static str)> {
    let squash = |s: &str| s.replace('_', "");
    corpus::FILES
        .iter()
        .find(|(n, _)| *n == name)
        .or_else(|| corpus::FILES.iter().find(|(n, _)| squash(n) == squash(name)))
        .copied()
}

fn locate(arg: &str, dirs: &[PathBuf]) -> Option<Source> {
    let direct = Path::new(arg);
    if direct.is_file() {
        return Some(Source::File(direct.to_path_buf()));
    }
    if let Some(p) = dirs.iter().map(|d| d.join(arg)).find(|p| p.is_file()) {
        return Some(Source::File(p));
    }
    corpus_entry(arg).map(|(name, _)| Source::Corpus(name))
}

fn read_error(message: String) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message,
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Loads `arg` and everything it includes.
pub fn load_input(arg: &str, dirs: &[PathBuf], budget: Budget) -> Result<Input> {
    let source = locate(arg, dirs).ok_or_else(|| read_error(format!("cannot find input file `{arg}`")))?;
    let (bytes, home) = match &source {
        Source::File(p) => (
            std::fs::read(p).map_err(|e| read_error(format!("cannot read `{}`: {e}", p.display())))?,
            p.parent().map(Path::to_path_buf),
        ),
        Source::Corpus(name) => (
            corpus::text(name).expect("listed corpus file").as_bytes().to_vec(),
            None,
        ),
    };
    let text = String::from_utf8(bytes.clone()).map_err(|_| read_error(format!("`{arg}` is not UTF-8")))?;
    let doc = parse(&text)?;
    let mut search: Vec<PathBuf> = home.into_iter().collect();
    search.extend(dirs.iter().cloned());
    let mut workspace = Workspace::default();
    resolve_in(&mut workspace, &doc, budget, &mut |t: &Token| -> Result<Document> {
        if let Some(p) = search.iter().map(|d| d.join(&t.text)).find(|p| p.is_file()) {
            let text =
                std::fs::read_to_string(&p).map_err(|e| t.error(format!("cannot read `{}`: {e}", p.display())))?;
            return parse(&text);
        }
        match corpus_entry(&t.text) {
            Some((_, text)) => parse(text),
            None => Err(t.error(format!("cannot find included file `{}`", t.text))),
        }
    })?;
    Ok(Input {
        arg: arg.to_string(),
        digest: digest(&bytes),
        workspace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_names_match_without_underscores() {
        assert_eq!(corpus_entry("consttwo.diag").unwrap().0, "const_two.diag");
        assert_eq!(corpus_entry("notfiltered.diag").unwrap().0, "not_filtered.diag");
        assert!(corpus_entry("missing.cat").is_none());
    }

    #[test]
    fn digests_track_bytes() {
        assert_eq!(
            digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_ne!(digest(b"abc"), digest(b"abd"));
    }

    #[test]
    fn missing_inputs_are_parse_errors() {
        assert!(matches!(
            load_input("no/such/file.cat", &[], Budget::default()),
            Err(Error::Parse { .. })
        ));
    }
}
