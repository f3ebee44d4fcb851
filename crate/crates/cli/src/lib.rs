//! Batch front-end for `colimkit`.
//!
//! Each subcommand loads fixture files, runs one construction or verifier
//! and fills a [`RunReport`]. Exit status: 0 pass, 1 verified failure,
//! 2 input error, 3 budget exceeded.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use colimkit::bicolim::{
    build_pseudocolimit, check_span_transitivity, verify_bicolimit, BicolimitReport, ColimOptions,
};
use colimkit::fixture::{print_workspace, render, Item, Workspace};
use colimkit::pseudocone::check_pseudocone;
use colimkit::restriction::{restrict_diagram, verify_restriction, AmbientDiagram};
use colimkit::sites::{
    build_colim_site, check_sheaf, enumerate_presheaves, validate_site, verify_site_pseudocolimit, SiteDiagram,
};
use colimkit::twocat::check_two_functor;
use colimkit::{Budget, Error, Result, Verdict, DEFAULT_BUDGET};

pub mod input;
pub mod report;

pub use input::{load_input, Input};
pub use report::{Outcome, RunReport};

#[derive(Debug, Parser)]
#[command(name = "colimkit", version, about = "Pseudocolimits of finite categories and sites")]
pub struct Cli {
    /// Cap on the candidates visited by any single enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Extra directories searched for inputs and includes.
    #[arg(long = "fixture-dir", global = true)]
    pub fixture_dir: Vec<PathBuf>,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Shuffle the refinement order used when composing spans.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every item of a fixture file.
    Validate {
        /// Fixture file to check.
        file: String,
    },
    /// Build the pseudocolimit of a diagram.
    Colim {
        /// Fixture file holding the diagram.
        file: String,
        /// Diagram to use; defaults to the last one declared.
        #[arg(long)]
        name: Option<String>,
        /// Write the colimit category as a fixture.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Build the colimit site of a diagram of sites.
    SiteColim {
        /// Fixture file holding the site diagram.
        file: String,
        /// Site diagram to use; defaults to the last one declared.
        #[arg(long)]
        name: Option<String>,
        /// Write the colimit category and site as a fixture.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Close generator sets under finite limits and transitions.
    Restrict {
        /// Fixture file holding the ambient diagram.
        file: String,
        /// Ambient diagram to use; defaults to the last one declared.
        #[arg(long)]
        name: Option<String>,
    },
    /// Compare functors out of the colimit with pseudocones into a vertex.
    VerifyBicolim {
        /// Fixture file holding the diagram.
        file: String,
        /// Diagram to use; defaults to the last one declared.
        #[arg(long)]
        name: Option<String>,
        /// Fixture file holding the vertex category.
        #[arg(long)]
        vertex: String,
        /// Item in the vertex file; defaults to the last of its kind.
        #[arg(long)]
        vertex_name: Option<String>,
    },
    /// The same comparison for the colimit site against a vertex site.
    VerifySite {
        /// Fixture file holding the site diagram.
        file: String,
        /// Site diagram to use; defaults to the last one declared.
        #[arg(long)]
        name: Option<String>,
        /// Fixture file holding the vertex site.
        #[arg(long)]
        vertex: String,
        /// Item in the vertex file; defaults to the last of its kind.
        #[arg(long)]
        vertex_name: Option<String>,
    },
    /// Check presheaves against the sheaf condition of a site.
    SheafCheck {
        /// Fixture file holding the site.
        file: String,
        /// Site to use; defaults to the last one declared.
        #[arg(long)]
        name: Option<String>,
        /// Presheaves to check; without it every presheaf with value sets
        /// of size at most `--max` is enumerated.
        #[arg(long)]
        presheaf: Option<String>,
        /// Largest value set tried when enumerating presheaves.
        #[arg(long, default_value_t = 2)]
        max: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Colim { .. } => "colim",
            Command::SiteColim { .. } => "site-colim",
            Command::Restrict { .. } => "restrict",
            Command::VerifyBicolim { .. } => "verify-bicolim",
            Command::VerifySite { .. } => "verify-site",
            Command::SheafCheck { .. } => "sheaf-check",
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    report: RunReport,
}

impl Ctx<'_> {
    fn budget(&self) -> Budget {
        Budget::new(self.cli.budget)
    }

    fn options(&self) -> ColimOptions {
        ColimOptions {
            budget: self.budget(),
            seed: self.cli.seed,
        }
    }

    fn load(&mut self, arg: &str) -> Result<Workspace> {
        let input = load_input(arg, &self.cli.fixture_dir, self.budget())?;
        self.report.inputs.push((input.arg, input.digest));
        Ok(input.workspace)
    }
}

fn missing(kind: &'static str, name: Option<&str>, file: &str) -> Error {
    match name {
        Some(n) => Error::UnknownName {
            kind,
            name: n.to_string(),
            line: 0,
            column: 0,
        },
        None => Error::Parse {
            line: 0,
            column: 0,
            message: format!("`{file}` declares no {kind}"),
        },
    }
}

/// The named item, or the last one of its kind.
fn pick<'w, T: 'w>(
    items: impl Iterator<Item = (&'w str, &'w T)>,
    name: Option<&str>,
    kind: &'static str,
    file: &str,
) -> Result<(String, &'w T)> {
    let found = match name {
        Some(n) => items.into_iter().find(|(m, _)| *m == n),
        None => items.into_iter().last(),
    };
    found
        .map(|(n, t)| (n.to_string(), t))
        .ok_or_else(|| missing(kind, name, file))
}

/// Runs the command and returns its report. Never panics on bad input.
pub fn run(cli: &Cli) -> RunReport {
    let mut ctx = Ctx {
        cli,
        report: RunReport::new(cli.command.name(), cli.budget, cli.seed),
    };
    let result = match &cli.command {
        Command::Validate { file } => validate(&mut ctx, file),
        Command::Colim { file, name, emit } => colim(&mut ctx, file, name.as_deref(), emit.as_ref()),
        Command::SiteColim { file, name, emit } => site_colim(&mut ctx, file, name.as_deref(), emit.as_ref()),
        Command::Restrict { file, name } => restrict(&mut ctx, file, name.as_deref()),
        Command::VerifyBicolim {
            file,
            name,
            vertex,
            vertex_name,
        } => verify_bicolim(&mut ctx, file, name.as_deref(), vertex, vertex_name.as_deref()),
        Command::VerifySite {
            file,
            name,
            vertex,
            vertex_name,
        } => verify_site(&mut ctx, file, name.as_deref(), vertex, vertex_name.as_deref()),
        Command::SheafCheck {
            file,
            name,
            presheaf,
            max,
        } => sheaf_check(&mut ctx, file, name.as_deref(), presheaf.as_deref(), *max),
    };
    if let Err(e) = result {
        ctx.report.abort(&e);
    }
    ctx.report
}

/// Structural errors raised while building items are what `validate`
/// looks for, so they count as verified failures there.
fn is_structural(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidCategory { .. }
            | Error::InvalidTwoCat { .. }
            | Error::InvalidFunctor(_)
            | Error::InvalidTransformation(_)
            | Error::InvalidDiagram(_)
            | Error::IllFormedCone(_)
            | Error::BoundaryMismatch(_)
            | Error::InvalidSite(_)
            | Error::InvalidPresheaf(_)
    )
}

fn validate(ctx: &mut Ctx, file: &str) -> Result<()> {
    let ws = match ctx.load(file) {
        Ok(ws) => ws,
        Err(e) if is_structural(&e) => {
            ctx.report.fail_with([e.to_string()]);
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let budget = ctx.budget();
    let mut violations = Vec::new();
    let mut counts = [0usize; 9];
    for (name, item) in ws.items() {
        let kind = item.kind();
        let found: Vec<String> = match item {
            Item::Category(c) => {
                let mut v = c.validate().violations;
                if v.is_empty() {
                    if let Some(l) = c.limits() {
                        v = l.validate(c, budget)?.violations;
                    }
                }
                counts[0] += 1;
                v
            }
            Item::Functor(_) => {
                counts[1] += 1;
                Vec::new()
            }
            Item::TwoCat(_) => {
                counts[2] += 1;
                Vec::new()
            }
            Item::Diagram(d) => {
                counts[3] += 1;
                verdict(check_two_functor(d))
            }
            Item::Cone(h) => {
                counts[4] += 1;
                verdict(check_pseudocone(h))
            }
            Item::Site(s) => {
                counts[5] += 1;
                validate_site(s, budget)?.violations
            }
            Item::SiteDiagram(d) => {
                counts[6] += 1;
                d.validate(budget)?.violations
            }
            Item::Ambient(a) => {
                counts[7] += 1;
                a.validate(budget)?.violations
            }
            Item::Presheaf(_) => {
                counts[8] += 1;
                Vec::new()
            }
        };
        violations.extend(found.into_iter().map(|v| format!("{kind} `{name}`: {v}")));
    }
    let r = &mut ctx.report;
    r.tally("items", ws.items().len());
    let kinds = [
        "categories",
        "functors",
        "twocats",
        "diagrams",
        "cones",
        "sites",
        "sitediagrams",
        "ambients",
        "presheaves",
    ];
    for (k, n) in kinds.iter().zip(counts) {
        r.tally(*k, n);
    }
    r.fail_with(violations);
    Ok(())
}

fn verdict(v: Verdict) -> Vec<String> {
    v.counterexample().map(str::to_string).into_iter().collect()
}

fn emit(path: &PathBuf, ws: &Workspace) -> Result<()> {
    std::fs::write(path, render(&print_workspace(ws))).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("cannot write `{}`: {e}", path.display()),
    })
}

fn colim(ctx: &mut Ctx, file: &str, name: Option<&str>, out: Option<&PathBuf>) -> Result<()> {
    let ws = ctx.load(file)?;
    let (subject, d) = pick(ws.diagrams(), name, "diagram", file)?;
    ctx.report.subject = Some(subject);
    let r = build_pseudocolimit(d, ctx.options())?;
    let base = d.index.base();
    let rep = &mut ctx.report;
    rep.tally("index-objects", base.object_count());
    rep.tally("index-1-cells", base.arrow_count());
    rep.tally("index-2-cells", d.index.cell_count());
    rep.tally(
        "fiber-objects",
        d.fibers.iter().map(|f| f.object_count()).sum::<usize>(),
    );
    rep.tally("objects", r.colim.object_count());
    rep.tally("morphisms", r.colim.arrow_count());
    rep.tally_flag("chosen-limits", r.colim.limits().is_some());
    let mut violations = check_span_transitivity(&r, ctx.budget())?.violations;
    violations.extend(
        verdict(check_pseudocone(&r.lambda))
            .into_iter()
            .map(|v| format!("colimit cone: {v}")),
    );
    ctx.report.fail_with(violations);
    if let Some(path) = out {
        let mut w = Workspace::default();
        w.insert(r.colim.name(), Item::Category(r.colim.clone()))?;
        emit(path, &w)?;
    }
    Ok(())
}

fn site_colim(ctx: &mut Ctx, file: &str, name: Option<&str>, out: Option<&PathBuf>) -> Result<()> {
    let ws = ctx.load(file)?;
    let (subject, d) = pick(ws.site_diagrams(), name, "sitediagram", file)?;
    ctx.report.subject = Some(subject);
    let cs = build_colim_site(d, ctx.options())?;
    let mut violations = validate_site(&cs.site, ctx.budget())?.violations;
    let base = d.diagram.index.base();
    for (a, leg) in cs.legs.iter().enumerate() {
        if let Verdict::Fails(why) = leg.check()? {
            violations.push(format!("leg over `{}`: {why}", base.object_name(a)));
        }
    }
    let rep = &mut ctx.report;
    rep.tally("objects", cs.site.category.object_count());
    rep.tally("morphisms", cs.site.category.arrow_count());
    rep.tally("covers", cs.site.basis.len());
    rep.tally("generators", cs.site.generators.len());
    rep.fail_with(violations);
    if let Some(path) = out {
        let mut w = Workspace::default();
        w.insert(cs.site.category.name(), Item::Category(cs.site.category.clone()))?;
        w.insert(&cs.site.name, Item::Site(cs.site.clone()))?;
        emit(path, &w)?;
    }
    Ok(())
}

fn restrict(ctx: &mut Ctx, file: &str, name: Option<&str>) -> Result<()> {
    let ws = ctx.load(file)?;
    let (subject, a) = pick(ws.ambients(), name, "ambient", file)?;
    ctx.report.subject = Some(subject);
    let r = restrict_diagram(a)?;
    let mut violations = verify_restriction(&r).violations;
    let again = restrict_diagram(&AmbientDiagram::new(a.diagram.clone(), r.subsets.clone())?)?;
    if again.subsets != r.subsets {
        violations.push("restricting the result again changes it".to_string());
    }
    let base = a.diagram.index.base();
    let rep = &mut ctx.report;
    rep.tally("rounds", r.rounds);
    for x in base.objects() {
        rep.tally(format!("objects@{}", base.object_name(x)), r.subsets[x].len());
    }
    rep.fail_with(violations);
    Ok(())
}

fn comparison_tallies(rep: &mut RunReport, c: &BicolimitReport) {
    rep.tally("functors", c.functors);
    rep.tally("cones", c.cones);
    rep.tally("transformations", c.transformations);
    rep.tally("modifications", c.modifications);
    rep.tally_flag("injective-on-objects", c.injective_on_objects);
    rep.tally_flag("surjective-on-objects", c.surjective_on_objects);
    rep.tally_flag("bijective-on-morphisms", c.bijective_on_morphisms);
    rep.tally_flag("fully-faithful", c.fully_faithful);
    rep.tally_flag("essentially-surjective", c.essentially_surjective);
    rep.tally("factorization-failures", c.factorization_failures);
}

fn comparison_violations(c: &BicolimitReport) -> Vec<String> {
    let mut v = c.violations.clone();
    if v.is_empty() && !c.is_isomorphism() {
        v.push("the comparison functor is not an isomorphism of categories".to_string());
    }
    v
}

fn verify_bicolim(
    ctx: &mut Ctx,
    file: &str,
    name: Option<&str>,
    vertex: &str,
    vertex_name: Option<&str>,
) -> Result<()> {
    let ws = ctx.load(file)?;
    let vs = ctx.load(vertex)?;
    let (subject, d) = pick(ws.diagrams(), name, "diagram", file)?;
    let (_, x) = pick(vs.categories(), vertex_name, "category", vertex)?;
    ctx.report.subject = Some(format!("{subject} -> {}", x.name()));
    let r = build_pseudocolimit(d, ctx.options())?;
    let c = verify_bicolimit(&r, x, ctx.budget())?;
    comparison_tallies(&mut ctx.report, &c);
    ctx.report.fail_with(comparison_violations(&c));
    Ok(())
}

fn verify_site(ctx: &mut Ctx, file: &str, name: Option<&str>, vertex: &str, vertex_name: Option<&str>) -> Result<()> {
    let ws = ctx.load(file)?;
    let vs = ctx.load(vertex)?;
    let (subject, d): (String, &SiteDiagram) = pick(ws.site_diagrams(), name, "sitediagram", file)?;
    let (xname, x) = pick(vs.sites(), vertex_name, "site", vertex)?;
    ctx.report.subject = Some(format!("{subject} -> {xname}"));
    let cs = build_colim_site(d, ctx.options())?;
    let s = verify_site_pseudocolimit(d, &cs, x, ctx.budget())?;
    comparison_tallies(&mut ctx.report, &s.comparison);
    ctx.report.tally("covers-checked", s.covers_checked);
    let mut violations = comparison_violations(&s.comparison);
    violations.extend(s.cover_preservation_failures);
    ctx.report.fail_with(violations);
    Ok(())
}

fn sheaf_check(ctx: &mut Ctx, file: &str, name: Option<&str>, presheaf: Option<&str>, max: usize) -> Result<()> {
    let ws = ctx.load(file)?;
    let (subject, site) = pick(ws.sites(), name, "site", file)?;
    ctx.report.subject = Some(subject);
    let site = Arc::clone(site);
    let budget = ctx.budget();
    let (mut total, mut sheaves, mut violations) = (0usize, 0usize, Vec::new());
    match presheaf {
        Some(pfile) => {
            let ps = ctx.load(pfile)?;
            let all: Vec<_> = ps.presheaves().collect();
            if all.is_empty() {
                return Err(missing("presheaf", None, pfile));
            }
            for (pname, p) in all {
                total += 1;
                match check_sheaf(p, &site, budget)? {
                    Verdict::Holds => sheaves += 1,
                    Verdict::Fails(why) => violations.push(format!("presheaf `{pname}`: {why}")),
                }
            }
        }
        None => {
            ctx.report.tally("max-size", max);
            for p in enumerate_presheaves(&site.category, max, budget)? {
                total += 1;
                sheaves += usize::from(check_sheaf(&p, &site, budget)?.holds());
            }
        }
    }
    ctx.report.tally("presheaves", total);
    ctx.report.tally("sheaves", sheaves);
    ctx.report.fail_with(violations);
    Ok(())
}
