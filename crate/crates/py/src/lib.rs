//! Python bindings.
//!
//! Exposes fixture loading, the pseudocolimit construction and its
//! verifiers, the colimit site, restriction and sheaf checks, plus the
//! command-line front-end as `run_cli`. Budget exhaustion raises
//! `BudgetExceeded`; every other rejection raises `ColimkitError`.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;
use colimkit::bicolim::{build_pseudocolimit, verify_bicolimit, ColimOptions};
use colimkit::cat::FinCat;
use colimkit::fixture::{self, parse, print_workspace, render, resolve_in, Document, Item, Token};
use colimkit::restriction::{restrict_diagram, verify_restriction};
use colimkit::sites::{build_colim_site, check_sheaf, is_covering, validate_site};
use colimkit::{corpus, Budget, Error, Verdict, DEFAULT_BUDGET};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(colimkit, ColimkitError, PyValueError);
create_exception!(colimkit, BudgetExceeded, PyException);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } | Error::SaturationExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        _ => ColimkitError::new_err(e.to_string()),
    }
}

fn missing(kind: &str, name: &str) -> PyErr {
    ColimkitError::new_err(format!("no {kind} named `{name}`"))
}

/// A finite category.
#[pyclass(frozen, name = "Category", module = "colimkit")]
struct PyCategory {
    inner: Arc<FinCat>,
}

fn object(c: &FinCat, name: &str) -> PyResult<usize> {
    c.object_id(name).ok_or_else(|| missing("object", name))
}

fn arrow(c: &FinCat, name: &str) -> PyResult<usize> {
    c.arrow_id(name).ok_or_else(|| missing("arrow", name))
}

#[pymethods]
impl PyCategory {
    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn objects(&self) -> Vec<String> {
        self.inner.object_names().to_vec()
    }

    /// `(name, source, target)` for every arrow, identities included.
    fn arrows(&self) -> Vec<(String, String, String)> {
        let c = &self.inner;
        c.arrows()
            .iter()
            .map(|a| {
                (
                    a.name.clone(),
                    c.object_name(a.source).to_string(),
                    c.object_name(a.target).to_string(),
                )
            })
            .collect()
    }

    fn hom(&self, a: &str, b: &str) -> PyResult<Vec<String>> {
        let c = &self.inner;
        Ok(c.hom(object(c, a)?, object(c, b)?)
            .iter()
            .map(|&f| c.arrow_name(f).to_string())
            .collect())
    }

    /// `g ∘ f`; raises when the arrows are not composable.
    fn compose(&self, g: &str, f: &str) -> PyResult<String> {
        let c = &self.inner;
        let h = c
            .try_compose(arrow(c, g)?, arrow(c, f)?)
            .ok_or_else(|| ColimkitError::new_err(format!("`{g}` and `{f}` do not compose")))?;
        Ok(c.arrow_name(h).to_string())
    }

    fn is_thin(&self) -> bool {
        self.inner.is_thin()
    }

    fn has_chosen_limits(&self) -> bool {
        self.inner.limits().is_some()
    }

    /// Violated category laws; empty when the category is valid.
    fn validate(&self) -> Vec<String> {
        self.inner.validate().violations
    }

    /// The category as fixture text.
    fn to_fixture(&self) -> PyResult<String> {
        let mut ws = fixture::Workspace::default();
        ws.insert(self.inner.name(), Item::Category(self.inner.clone()))
            .map_err(py_err)?;
        Ok(render(&print_workspace(&ws)))
    }

    fn __len__(&self) -> usize {
        self.inner.object_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Category({:?}, objects={}, arrows={})",
            self.inner.name(),
            self.inner.object_count(),
            self.inner.arrow_count()
        )
    }
}

fn wrap(c: Arc<FinCat>) -> PyCategory {
    PyCategory { inner: c }
}

/// Named fixture items.
#[pyclass(frozen, name = "Workspace", module = "colimkit")]
struct PyWorkspace {
    inner: fixture::Workspace,
}

fn options(budget: u64, seed: Option<u64>) -> ColimOptions {
    ColimOptions {
        budget: Budget::new(budget),
        seed,
    }
}

fn pick<'w, T: 'w>(items: impl Iterator<Item = (&'w str, &'w T)>, name: Option<&str>, kind: &str) -> PyResult<&'w T> {
    let found = match name {
        Some(n) => items.into_iter().find(|(m, _)| *m == n),
        None => items.into_iter().last(),
    };
    found
        .map(|(_, t)| t)
        .ok_or_else(|| missing(kind, name.unwrap_or("<any>")))
}

#[pymethods]
impl PyWorkspace {
    /// Item names of one kind, in declaration order. Kinds: category,
    /// functor, twocat, diagram, cone, site, sitediagram, ambient, presheaf.
    fn names(&self, kind: &str) -> Vec<String> {
        self.inner
            .items()
            .iter()
            .filter(|(_, i)| i.kind() == kind)
            .map(|(n, _)| n.clone())
            .collect()
    }

    fn category(&self, name: &str) -> PyResult<PyCategory> {
        self.inner
            .category(name)
            .cloned()
            .map(wrap)
            .ok_or_else(|| missing("category", name))
    }

    fn render(&self) -> String {
        render(&print_workspace(&self.inner))
    }

    /// Pseudocolimit of the named diagram, or of the last one declared.
    #[pyo3(signature = (diagram=None, budget=DEFAULT_BUDGET, seed=None))]
    fn colimit(&self, diagram: Option<&str>, budget: u64, seed: Option<u64>) -> PyResult<PyCategory> {
        let d = pick(self.inner.diagrams(), diagram, "diagram")?;
        let r = build_pseudocolimit(d, options(budget, seed)).map_err(py_err)?;
        Ok(wrap(r.colim))
    }

    /// Compares functors out of the colimit with pseudocones into `vertex`.
    #[pyo3(signature = (vertex, diagram=None, budget=DEFAULT_BUDGET))]
    fn verify_bicolimit<'py>(
        &self,
        py: Python<'py>,
        vertex: &PyCategory,
        diagram: Option<&str>,
        budget: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let d = pick(self.inner.diagrams(), diagram, "diagram")?;
        let r = build_pseudocolimit(d, options(budget, None)).map_err(py_err)?;
        let rep = verify_bicolimit(&r, &vertex.inner, Budget::new(budget)).map_err(py_err)?;
        let out = PyDict::new(py);
        out.set_item("functors", rep.functors)?;
        out.set_item("cones", rep.cones)?;
        out.set_item("transformations", rep.transformations)?;
        out.set_item("modifications", rep.modifications)?;
        out.set_item("isomorphism", rep.is_isomorphism())?;
        out.set_item("equivalence", rep.is_equivalence())?;
        out.set_item("factorization_failures", rep.factorization_failures)?;
        out.set_item("violations", rep.violations)?;
        Ok(out)
    }

    /// The colimit site: its category and its basis as
    /// `(target, [leg, ...])` pairs.
    #[pyo3(signature = (sitediagram=None, budget=DEFAULT_BUDGET))]
    #[allow(clippy::type_complexity)]
    fn colimit_site(
        &self,
        sitediagram: Option<&str>,
        budget: u64,
    ) -> PyResult<(PyCategory, Vec<(String, Vec<String>)>)> {
        let d = pick(self.inner.site_diagrams(), sitediagram, "sitediagram")?;
        let cs = build_colim_site(d, options(budget, None)).map_err(py_err)?;
        let report = validate_site(&cs.site, Budget::new(budget)).map_err(py_err)?;
        if let Some(v) = report.violations.first() {
            return Err(ColimkitError::new_err(v.clone()));
        }
        let c = &cs.site.category;
        let basis = cs
            .site
            .basis
            .iter()
            .map(|cover| {
                let legs = cover.legs.iter().map(|&f| c.arrow_name(f).to_string()).collect();
                (c.object_name(cover.target).to_string(), legs)
            })
            .collect();
        Ok((wrap(c.clone()), basis))
    }

    /// Whether the arrows named in `family` cover `target` in the site.
    fn is_covering(&self, site: &str, target: &str, family: Vec<String>) -> PyResult<bool> {
        let s = self.inner.site(site).ok_or_else(|| missing("site", site))?;
        let c = &s.category;
        let legs = family.iter().map(|f| arrow(c, f)).collect::<PyResult<Vec<_>>>()?;
        Ok(is_covering(s, object(c, target)?, &legs))
    }

    /// Restricts an ambient diagram; returns the number of rounds and the
    /// object names kept in each fiber.
    #[pyo3(signature = (ambient=None))]
    fn restrict(&self, ambient: Option<&str>) -> PyResult<(usize, Vec<Vec<String>>)> {
        let a = pick(self.inner.ambients(), ambient, "ambient")?;
        let r = restrict_diagram(a).map_err(py_err)?;
        if let Some(v) = verify_restriction(&r).violations.first() {
            return Err(ColimkitError::new_err(v.clone()));
        }
        let names = |i: usize, s: &BTreeSet<usize>| -> Vec<String> {
            let fiber = r.ambient.fiber(i);
            s.iter().map(|&x| fiber.object_name(x).to_string()).collect()
        };
        Ok((
            r.rounds,
            r.subsets.iter().enumerate().map(|(i, s)| names(i, s)).collect(),
        ))
    }

    /// `None` when the presheaf is a sheaf, otherwise a failing cover.
    #[pyo3(signature = (site, presheaf, budget=DEFAULT_BUDGET))]
    fn check_sheaf(&self, site: &str, presheaf: &str, budget: u64) -> PyResult<Option<String>> {
        let s = self.inner.site(site).ok_or_else(|| missing("site", site))?;
        let p = self
            .inner
            .presheaf(presheaf)
            .ok_or_else(|| missing("presheaf", presheaf))?;
        match check_sheaf(p, s, Budget::new(budget)).map_err(py_err)? {
            Verdict::Holds => Ok(None),
            Verdict::Fails(why) => Ok(Some(why)),
        }
    }

    fn __repr__(&self) -> String {
        format!("Workspace(items={})", self.inner.items().len())
    }
}

fn corpus_include(t: &Token) -> colimkit::Result<Document> {
    parse(corpus::text(&t.text).ok_or_else(|| t.error(format!("cannot find included file `{}`", t.text)))?)
}

/// Parses fixture text; includes resolve against the bundled corpus.
#[pyfunction]
#[pyo3(signature = (text, budget=DEFAULT_BUDGET))]
fn load(text: &str, budget: u64) -> PyResult<PyWorkspace> {
    let doc = parse(text).map_err(py_err)?;
    let mut ws = fixture::Workspace::default();
    resolve_in(&mut ws, &doc, Budget::new(budget), &mut corpus_include).map_err(py_err)?;
    Ok(PyWorkspace { inner: ws })
}

/// Loads a fixture file; includes resolve next to it, then in `search`.
#[pyfunction]
#[pyo3(signature = (path, search=Vec::new(), budget=DEFAULT_BUDGET))]
fn load_file(path: PathBuf, search: Vec<PathBuf>, budget: u64) -> PyResult<PyWorkspace> {
    let inner = fixture::load_path(&path, &search, Budget::new(budget)).map_err(py_err)?;
    Ok(PyWorkspace { inner })
}

#[pyfunction]
fn load_corpus(name: &str) -> PyResult<PyWorkspace> {
    corpus::load(name).map(|inner| PyWorkspace { inner }).map_err(py_err)
}

#[pyfunction]
fn corpus_files() -> Vec<&'static str> {
    corpus::FILES.iter().map(|(n, _)| *n).collect()
}

#[pyfunction]
fn corpus_text(name: &str) -> PyResult<&'static str> {
    corpus::text(name).ok_or_else(|| missing("corpus file", name))
}

/// Runs the command-line front-end on `args` (without the program name)
/// and returns its exit code and report. Nothing is printed.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    let argv = std::iter::once("colimkit".to_string()).chain(args);
    match colimkit_cli::Cli::try_parse_from(argv) {
        Ok(cli) => {
            let report = colimkit_cli::run(&cli);
            let text = report.render();
            if let Some(path) = &cli.report {
                if let Err(e) = std::fs::write(path, &text) {
                    return (2, format!("cannot write report `{}`: {e}", path.display()));
                }
            }
            (report.outcome.exit_code(), text)
        }
        Err(e) => (2, e.to_string()),
    }
}

#[pymodule]
#[pyo3(name = "colimkit")]
fn colimkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ColimkitError", m.py().get_type::<ColimkitError>())?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add("DEFAULT_BUDGET", DEFAULT_BUDGET)?;
    m.add_class::<PyCategory>()?;
    m.add_class::<PyWorkspace>()?;
    m.add_function(wrap_pyfunction!(load, m)?)?;
    m.add_function(wrap_pyfunction!(load_file, m)?)?;
    m.add_function(wrap_pyfunction!(load_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_files, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_text, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
