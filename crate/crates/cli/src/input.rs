//! Loaders for the JSON and CSV input formats.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use gframe::affine::SampledSignal;
use gframe::linalg::{CMat, CVec};
use gframe::representations::UnitaryRep;
use gframe::{GroupFunction, GroupTable};
use num_complex::Complex64;
use serde::Deserialize;

#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<gframe::Error> for InputError {
    fn from(e: gframe::Error) -> Self {
        InputError(e.to_string())
    }
}

pub type InputResult<T> = std::result::Result<T, InputError>;

fn read(path: &Path) -> InputResult<String> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> InputResult<T> {
    serde_json::from_str(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// A complex entry, written either as a bare real number or `[re, im]`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub order: usize,
    pub product: Vec<Vec<usize>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

impl GroupFile {
    fn build(self) -> InputResult<GroupTable> {
        if self.product.len() != self.order {
            return Err(InputError(format!(
                "group order {} but product table has {} rows",
                self.order,
                self.product.len()
            )));
        }
        Ok(GroupTable::from_product(self.product, self.labels)?)
    }
}

pub fn load_group(path: &Path) -> InputResult<Arc<GroupTable>> {
    Ok(Arc::new(parse::<GroupFile>(path)?.build()?))
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GroupRef {
    Path(PathBuf),
    Inline(GroupFile),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepFile {
    group: GroupRef,
    dim: usize,
    matrices: Vec<Vec<Vec<Entry>>>,
}

/// Loads a representation. A group given by path is resolved relative to the
/// representation file.
pub fn load_rep(path: &Path) -> InputResult<UnitaryRep> {
    let file: RepFile = parse(path)?;
    let group = match file.group {
        GroupRef::Path(p) => {
            let base = path.parent().unwrap_or_else(|| Path::new("."));
            load_group(&base.join(p))?
        }
        GroupRef::Inline(g) => Arc::new(g.build()?),
    };
    rep_on(group, file.dim, file.matrices)
}

fn rep_on(group: Arc<GroupTable>, dim: usize, raw: Vec<Vec<Vec<Entry>>>) -> InputResult<UnitaryRep> {
    let mut matrices = Vec::with_capacity(raw.len());
    for (s, rows) in raw.into_iter().enumerate() {
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(InputError(format!("matrix {s} is not {dim}×{dim}")));
        }
        matrices.push(CMat::from_fn(dim, dim, |i, j| rows[i][j].into()));
    }
    Ok(UnitaryRep::new(group, matrices)?)
}

/// Rebuilds `rep` on `group` when both tables agree, so the two share one
/// group handle.
pub fn rebase(rep: &UnitaryRep, group: &Arc<GroupTable>) -> InputResult<UnitaryRep> {
    if rep.group().product_rows() != group.product_rows() {
        return Err(InputError("representations live on different groups".into()));
    }
    Ok(UnitaryRep::new(group.clone(), rep.matrices().to_vec())?)
}

pub fn load_vector(path: &Path) -> InputResult<CVec> {
    let entries: Vec<Entry> = parse(path)?;
    Ok(CVec::from_iterator(entries.len(), entries.into_iter().map(Complex64::from)))
}

pub fn load_function(path: &Path, group: &Arc<GroupTable>) -> InputResult<GroupFunction> {
    let v = load_vector(path)?;
    if v.len() != group.order() {
        return Err(InputError(format!(
            "{}: expected {} values, found {}",
            path.display(),
            group.order(),
            v.len()
        )));
    }
    Ok(GroupFunction::from_vector(group, &v)?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignalFile {
    start: f64,
    step: f64,
    samples: Vec<Entry>,
}

/// Signals come as JSON `{start, step, samples}` or as CSV with columns
/// `x, re[, im]` on a uniform grid.
pub fn load_signal(path: &Path) -> InputResult<SampledSignal> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if !is_csv {
        let f: SignalFile = parse(path)?;
        let samples = f.samples.into_iter().map(Complex64::from).collect();
        return Ok(SampledSignal::new(samples, f.start, f.step)?);
    }
    let err = |e: csv::Error| InputError(format!("{}: {e}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(err)?;
    let mut xs = Vec::new();
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(err)?;
        let field = |i: usize| -> InputResult<f64> {
            record
                .get(i)
                .unwrap_or("0")
                .trim()
                .parse()
                .map_err(|e| InputError(format!("{}: {e}", path.display())))
        };
        if record.len() < 2 {
            return Err(InputError(format!("{}: need columns x,re[,im]", path.display())));
        }
        xs.push(field(0)?);
        samples.push(Complex64::new(field(1)?, field(2)?));
    }
    if xs.len() < 2 {
        return Err(InputError(format!("{}: need at least two samples", path.display())));
    }
    let step = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let uniform = xs
        .iter()
        .enumerate()
        .all(|(i, &x)| (x - (xs[0] + i as f64 * step)).abs() <= 1e-9 * step.abs().max(1.0));
    if !uniform {
        return Err(InputError(format!("{}: x column is not a uniform grid", path.display())));
    }
    Ok(SampledSignal::new(samples, xs[0], step)?)
}

/// `lo:hi:count`, where the bounds may be written `2^k`.
pub fn parse_range(text: &str) -> std::result::Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err(format!("expected lo:hi:count, got {text:?}"));
    };
    let number = |s: &str| -> std::result::Result<f64, String> {
        let s = s.trim();
        match s.split_once('^') {
            Some((base, exp)) => {
                let base: f64 = base.parse().map_err(|_| format!("bad number {s:?}"))?;
                let exp: f64 = exp.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
                Ok(base.powf(exp))
            }
            None => s.parse().map_err(|_| format!("bad number {s:?}")),
        }
    };
    let count = count.trim().parse().map_err(|_| format!("bad count {count:?}"))?;
    Ok((number(lo)?, number(hi)?, count))
}
