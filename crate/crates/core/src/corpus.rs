//! The fixture corpus shipped with the crate.
//!
//! Files live in `fixtures/` and are embedded at compile time, so the
//! corpus can be loaded without touching the file system.

use crate::fixture::{parse, resolve_in, Document, Token, Workspace};
use crate::{Budget, Error, Result};

/// `(file name, contents)` for every corpus file.
pub const FILES: &[(&str, &str)] = &[
    ("basics.cat", include_str!("../fixtures/basics.cat")),
    ("chaotic.cat", include_str!("../fixtures/chaotic.cat")),
    ("collapse.diag", include_str!("../fixtures/collapse.diag")),
    ("collapse_diamond.amb", include_str!("../fixtures/collapse_diamond.amb")),
    (
        "collapse_diamond.diag",
        include_str!("../fixtures/collapse_diamond.diag"),
    ),
    ("cones.cone", include_str!("../fixtures/cones.cone")),
    ("const_two.diag", include_str!("../fixtures/const_two.diag")),
    ("const_two.site", include_str!("../fixtures/const_two.site")),
    ("const_two_op.diag", include_str!("../fixtures/const_two_op.diag")),
    ("covered_chain.site", include_str!("../fixtures/covered_chain.site")),
    ("diamond.cat", include_str!("../fixtures/diamond.cat")),
    ("diamond_chain.amb", include_str!("../fixtures/diamond_chain.amb")),
    ("diamond_chain.diag", include_str!("../fixtures/diamond_chain.diag")),
    ("incl_two.diag", include_str!("../fixtures/incl_two.diag")),
    ("indices.cat", include_str!("../fixtures/indices.cat")),
    ("iso_pair.diag", include_str!("../fixtures/iso_pair.diag")),
    ("not_filtered.diag", include_str!("../fixtures/not_filtered.diag")),
    ("one.cat", include_str!("../fixtures/one.cat")),
    ("par_two.diag", include_str!("../fixtures/par_two.diag")),
    ("point_diamond.amb", include_str!("../fixtures/point_diamond.amb")),
    ("point_diamond.diag", include_str!("../fixtures/point_diamond.diag")),
    ("point_diamond.site", include_str!("../fixtures/point_diamond.site")),
    ("point_two.diag", include_str!("../fixtures/point_two.diag")),
    ("presheaves.psh", include_str!("../fixtures/presheaves.psh")),
    ("sites.site", include_str!("../fixtures/sites.site")),
    ("swap_chain.diag", include_str!("../fixtures/swap_chain.diag")),
    ("two.cat", include_str!("../fixtures/two.cat")),
    ("z2.cat", include_str!("../fixtures/z2.cat")),
];

pub fn text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Loads a corpus file, resolving includes within the corpus.
pub fn load(name: &str) -> Result<Workspace> {
    let doc = parse(text(name).ok_or_else(|| Error::Parse {
        line: 0,
        column: 0,
        message: format!("no corpus file `{name}`"),
    })?)?;
    let mut ws = Workspace::default();
    resolve_in(&mut ws, &doc, Budget::default(), &mut |t: &Token| -> Result<Document> {
        parse(text(&t.text).ok_or_else(|| t.unknown("corpus file"))?)
    })?;
    Ok(ws)
}

/// Diagram files whose index is 2-filtered.
pub const FILTERED_DIAGRAMS: &[(&str, &str)] = &[
    ("point_two.diag", "PointTwo"),
    ("const_two.diag", "ConstTwo"),
    ("const_two_op.diag", "ConstTwoOp"),
    ("incl_two.diag", "InclTwo"),
    ("collapse.diag", "Collapse"),
    ("swap_chain.diag", "SwapChain"),
    ("diamond_chain.diag", "DiamondChain"),
    ("iso_pair.diag", "IsoPair"),
    ("point_diamond.diag", "PointDiamond"),
    ("collapse_diamond.diag", "CollapseDiamond"),
];

/// Diagram files whose index fails the filteredness test.
pub const UNFILTERED_DIAGRAMS: &[(&str, &str)] = &[("not_filtered.diag", "NotFiltered"), ("par_two.diag", "ParTwo")];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{print_workspace, render};

    #[test]
    fn every_file_loads() {
        for (name, _) in FILES {
            load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn printed_corpus_is_canonical() {
        for (name, _) in FILES {
            let printed = render(&print_workspace(&load(name).unwrap()));
            assert_eq!(render(&parse(&printed).unwrap()), printed, "{name}");
            let again = render(&print_workspace(&crate::fixture::load(&printed).unwrap()));
            assert_eq!(again, printed, "{name}");
        }
    }
}
