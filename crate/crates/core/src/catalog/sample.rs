//! Pointwise field values of a verified closed form, as a table or CSV.

use std::io::Write;

use crate::operators::Grid;

use super::doc::ProblemSpec;
use super::figures::figure;
use super::solution::KnownSolution;
use super::verify::{verify, verify_spec, VerifyOptions};
use super::{bind, example, known_for_spec, CatalogError, Values};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn evaluate(spec: &ProblemSpec, known: &KnownSolution, axes: &[(f64, f64, usize)]) -> Result<Table, CatalogError> {
    if axes.len() != spec.variables.len() {
        return Err(CatalogError::Spec(format!(
            "grid has {} axes but the problem has {} variables",
            axes.len(),
            spec.variables.len()
        )));
    }
    let grid = Grid::new(axes.to_vec())?;
    let eval = known.evaluator(spec)?;
    let mut header = spec.variables.clone();
    header.extend(spec.components.iter().map(|c| c.name.clone()));
    let rows = grid
        .points()
        .into_iter()
        .map(|pt| {
            let fields = eval.eval(&pt)?;
            Ok(pt.into_iter().chain(fields).collect())
        })
        .collect::<Result<Vec<Vec<f64>>, CatalogError>>()?;
    Ok(Table { header, rows })
}

fn require_pass(report: super::VerificationReport) -> Result<(), CatalogError> {
    if report.passed() {
        Ok(())
    } else {
        Err(CatalogError::VerificationFailed(report.to_string()))
    }
}

/// Rows `(t, x1, …, f1, …)` over the grid; refuses unless verification passes or `force` is set.
pub fn sample(id: &str, overrides: &Values, axes: &[(f64, f64, usize)], force: bool) -> Result<Table, CatalogError> {
    if !force {
        require_pass(verify(id, overrides, &VerifyOptions::default())?)?;
    }
    let ex = example(id)?;
    let values = bind(ex, overrides)?;
    let spec = ex.spec(&values)?;
    let known = ex.known(&values, &spec)?;
    evaluate(&spec, &known, axes)
}

/// As [`sample`], for a spec document naming a catalog example.
pub fn sample_spec(spec: &ProblemSpec, axes: &[(f64, f64, usize)], force: bool) -> Result<Table, CatalogError> {
    if !force {
        require_pass(verify_spec(spec, &VerifyOptions::default())?)?;
    }
    evaluate(spec, &known_for_spec(spec)?, axes)
}

/// Data behind a figure; the parameters that vary between panels lead each row.
pub fn sample_figure(number: u32, force: bool) -> Result<Table, CatalogError> {
    let fig = figure(number)?;
    let varied = fig.varied();
    let mut out: Option<Table> = None;
    for panel in &fig.panels {
        let t = sample(fig.example, &panel.overrides, &fig.grid, force)?;
        let lead: Vec<f64> = varied.iter().map(|n| panel.overrides.get(n).unwrap_or(f64::NAN)).collect();
        let table = out.get_or_insert_with(|| Table {
            header: varied.iter().cloned().chain(t.header.iter().cloned()).collect(),
            rows: Vec::new(),
        });
        table.rows.extend(t.rows.into_iter().map(|r| lead.iter().copied().chain(r).collect()));
    }
    out.ok_or(CatalogError::UnknownFigure(number))
}

/// CSV with a header row, LF line endings and 17 significant digits.
pub fn write_csv(table: &Table, out: impl Write) -> Result<(), CatalogError> {
    let err = |e: csv::Error| CatalogError::Output(e.to_string());
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(&table.header).map_err(err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|x| format!("{x:.16e}"))).map_err(err)?;
    }
    w.flush().map_err(|e| CatalogError::Output(e.to_string()))
}
