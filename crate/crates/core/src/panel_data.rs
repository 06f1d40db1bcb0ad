//! Panel data model: DMUs × periods × variables, each variable carrying a
//! role (input, output, desirable link, undesirable link).
//!
//! On disk a panel is two files: a long-format CSV with header
//! `dmu,period,variable,value`, and a schema listing `name=role` per line in
//! variable order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableRole {
    Input,
    Output,
    GoodLink,
    BadLink,
}

impl VariableRole {
    pub fn as_str(self) -> &'static str {
        match self {
            VariableRole::Input => "input",
            VariableRole::Output => "output",
            VariableRole::GoodLink => "good_link",
            VariableRole::BadLink => "bad_link",
        }
    }

    /// Inputs and undesirable links: less is better.
    pub fn is_input_like(self) -> bool {
        matches!(self, VariableRole::Input | VariableRole::BadLink)
    }

    pub fn is_link(self) -> bool {
        matches!(self, VariableRole::GoodLink | VariableRole::BadLink)
    }
}

impl fmt::Display for VariableRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VariableRole {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "input" => Ok(VariableRole::Input),
            "output" => Ok(VariableRole::Output),
            "good_link" => Ok(VariableRole::GoodLink),
            "bad_link" => Ok(VariableRole::BadLink),
            other => Err(format!("unknown role `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub role: VariableRole,
}

impl Variable {
    pub fn new(name: impl Into<String>, role: VariableRole) -> Self {
        Self {
            name: name.into(),
            role,
        }
    }
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("bad csv header: expected `dmu,period,variable,value`, found `{0}`")]
    BadHeader(String),
    #[error("schema line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("generator spec line {line}: {message}")]
    InvalidSpec { line: usize, message: String },
    #[error("variable `{0}` is not declared in the schema")]
    UnknownVariable(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("dmu `{0}` listed twice")]
    DuplicateDmu(String),
    #[error("period `{0}` listed twice")]
    DuplicatePeriod(String),
    #[error("data row {row}: cannot parse value `{value}`")]
    BadValue { row: usize, value: String },
    #[error("value for ({dmu}, {period}, {variable}) is not finite")]
    NonFinite {
        dmu: String,
        period: String,
        variable: String,
    },
    #[error("negative value {value} for ({dmu}, {period}, {variable})")]
    NegativeValue {
        dmu: String,
        period: String,
        variable: String,
        value: f64,
    },
    #[error("duplicate row for ({dmu}, {period}, {variable})")]
    DuplicateTriple {
        dmu: String,
        period: String,
        variable: String,
    },
    #[error("missing value for ({dmu}, {period}, {variable})")]
    MissingCell {
        dmu: String,
        period: String,
        variable: String,
    },
    #[error("dataset needs at least one input and one output variable")]
    NoInputOrNoOutput,
    #[error("dataset has no rows")]
    Empty,
    #[error("value tensor has {got} entries, expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },
}

/// A complete, validated panel. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDataset {
    dmu_ids: Vec<String>,
    periods: Vec<String>,
    variables: Vec<Variable>,
    // index: (dmu * T + period) * V + variable
    values: Vec<f64>,
}

impl PanelDataset {
    /// Builds a dataset from a dense tensor laid out as
    /// `values[(dmu * T + period) * V + variable]`.
    pub fn new(
        dmu_ids: Vec<String>,
        periods: Vec<String>,
        variables: Vec<Variable>,
        values: Vec<f64>,
    ) -> Result<Self, DataError> {
        check_roles(&variables)?;
        let mut seen = HashSet::new();
        for v in &variables {
            if !seen.insert(v.name.as_str()) {
                return Err(DataError::DuplicateVariable(v.name.clone()));
            }
        }
        let mut seen = HashSet::new();
        for d in &dmu_ids {
            if !seen.insert(d.as_str()) {
                return Err(DataError::DuplicateDmu(d.clone()));
            }
        }
        if dmu_ids.is_empty() || periods.is_empty() {
            return Err(DataError::Empty);
        }
        let mut periods = periods;
        // Period labels are opaque; only their ascending order matters.
        let mut order: Vec<usize> = (0..periods.len()).collect();
        order.sort_by(|&a, &b| periods[a].cmp(&periods[b]));
        let expected = dmu_ids.len() * periods.len() * variables.len();
        if values.len() != expected {
            return Err(DataError::ShapeMismatch {
                expected,
                got: values.len(),
            });
        }
        let n_vars = variables.len();
        let n_periods = periods.len();
        let mut sorted = Vec::with_capacity(values.len());
        for j in 0..dmu_ids.len() {
            for &t in &order {
                let start = (j * n_periods + t) * n_vars;
                sorted.extend_from_slice(&values[start..start + n_vars]);
            }
        }
        periods = order.iter().map(|&t| periods[t].clone()).collect();
        for w in periods.windows(2) {
            if w[0] == w[1] {
                return Err(DataError::DuplicatePeriod(w[1].clone()));
            }
        }
        for (idx, &v) in sorted.iter().enumerate() {
            let i = idx % n_vars;
            let t = (idx / n_vars) % n_periods;
            let j = idx / (n_vars * n_periods);
            if !v.is_finite() {
                return Err(DataError::NonFinite {
                    dmu: dmu_ids[j].clone(),
                    period: periods[t].clone(),
                    variable: variables[i].name.clone(),
                });
            }
            if v < 0.0 {
                return Err(DataError::NegativeValue {
                    dmu: dmu_ids[j].clone(),
                    period: periods[t].clone(),
                    variable: variables[i].name.clone(),
                    value: v,
                });
            }
        }
        Ok(Self {
            dmu_ids,
            periods,
            variables,
            values: sorted,
        })
    }

    pub fn dmu_ids(&self) -> &[String] {
        &self.dmu_ids
    }

    pub fn periods(&self) -> &[String] {
        &self.periods
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn n_dmus(&self) -> usize {
        self.dmu_ids.len()
    }

    pub fn n_periods(&self) -> usize {
        self.periods.len()
    }

    pub fn n_variables(&self) -> usize {
        self.variables.len()
    }

    /// Value of variable `var` for DMU `dmu` in period `period` (all 0-based).
    #[inline]
    pub fn value(&self, dmu: usize, period: usize, var: usize) -> f64 {
        self.values[(dmu * self.periods.len() + period) * self.variables.len() + var]
    }

    pub fn dmu_index(&self, id: &str) -> Option<usize> {
        self.dmu_ids.iter().position(|d| d == id)
    }

    pub fn role_count(&self, role: VariableRole) -> usize {
        self.variables.iter().filter(|v| v.role == role).count()
    }

    /// Indices of the variables with the given role, in schema order.
    pub fn indices_of(&self, role: VariableRole) -> Vec<usize> {
        self.variables
            .iter()
            .enumerate()
            .filter(|(_, v)| v.role == role)
            .map(|(i, _)| i)
            .collect()
    }

    /// Returns a copy with every value of variable `var` multiplied by `factor`.
    pub fn scale_variable(&self, var: usize, factor: f64) -> PanelDataset {
        let mut out = self.clone();
        let n_vars = self.variables.len();
        for (idx, v) in out.values.iter_mut().enumerate() {
            if idx % n_vars == var {
                *v *= factor;
            }
        }
        out
    }

    /// Restricts the panel to the listed DMUs (by index, in the given order).
    pub fn subset(&self, dmus: &[usize]) -> PanelDataset {
        let block = self.periods.len() * self.variables.len();
        let mut values = Vec::with_capacity(dmus.len() * block);
        for &j in dmus {
            values.extend_from_slice(&self.values[j * block..(j + 1) * block]);
        }
        PanelDataset {
            dmu_ids: dmus.iter().map(|&j| self.dmu_ids[j].clone()).collect(),
            periods: self.periods.clone(),
            variables: self.variables.clone(),
            values,
        }
    }

    /// Writes the long CSV, rows ordered dmu, period, variable. Values carry
    /// 12 significant digits.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), DataError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["dmu", "period", "variable", "value"])?;
        for (j, dmu) in self.dmu_ids.iter().enumerate() {
            for (t, period) in self.periods.iter().enumerate() {
                for (i, var) in self.variables.iter().enumerate() {
                    let v = format_sig(self.value(j, t, i), 12);
                    w.write_record([dmu.as_str(), period.as_str(), var.name.as_str(), &v])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_schema<W: Write>(&self, mut writer: W) -> Result<(), DataError> {
        for v in &self.variables {
            writeln!(writer, "{}={}", v.name, v.role)?;
        }
        Ok(())
    }
}

/// Formats `v` rounded to `digits` significant digits, shortest round-trip
/// representation of the rounded value.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{}", v);
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), v)
        .parse()
        .expect("scientific formatting round-trips");
    format!("{}", rounded)
}

fn check_roles(variables: &[Variable]) -> Result<(), DataError> {
    let has = |r| variables.iter().any(|v| v.role == r);
    if !has(VariableRole::Input) || !has(VariableRole::Output) {
        return Err(DataError::NoInputOrNoOutput);
    }
    Ok(())
}

/// Parses a schema: one `name=role` per line, `#` comment lines, blank lines
/// ignored.
pub fn parse_schema(text: &str) -> Result<Vec<Variable>, DataError> {
    let mut vars: Vec<Variable> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line_no = lineno + 1;
        let (name, role) = line.split_once('=').ok_or_else(|| DataError::Schema {
            line: line_no,
            message: format!("expected `name=role`, found `{line}`"),
        })?;
        let name = name.trim();
        if name.is_empty() {
            return Err(DataError::Schema {
                line: line_no,
                message: "empty variable name".into(),
            });
        }
        let role = role.parse().map_err(|message| DataError::Schema {
            line: line_no,
            message,
        })?;
        if vars.iter().any(|v| v.name == name) {
            return Err(DataError::DuplicateVariable(name.to_string()));
        }
        vars.push(Variable::new(name, role));
    }
    check_roles(&vars)?;
    Ok(vars)
}

/// Reads the long CSV against an already-parsed schema.
pub fn read_csv<R: Read>(reader: R, variables: Vec<Variable>) -> Result<PanelDataset, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != ["dmu", "period", "variable", "value"] {
        return Err(DataError::BadHeader(header.join(",")));
    }
    let var_index: HashMap<&str, usize> = variables
        .iter()
        .enumerate()
        .map(|(i, v)| (v.name.as_str(), i))
        .collect();

    let mut dmu_ids: Vec<String> = Vec::new();
    let mut dmu_pos: HashMap<String, usize> = HashMap::new();
    let mut period_set: BTreeMap<String, ()> = BTreeMap::new();
    let mut cells: HashMap<(usize, String, usize), f64> = HashMap::new();

    for (row_idx, record) in rdr.records().enumerate() {
        let record = record?;
        let row = row_idx + 2;
        let (dmu, period, var, raw) = (&record[0], &record[1], &record[2], &record[3]);
        let &vi = var_index
            .get(var)
            .ok_or_else(|| DataError::UnknownVariable(var.to_string()))?;
        let value: f64 = raw.parse().map_err(|_| DataError::BadValue {
            row,
            value: raw.to_string(),
        })?;
        if !value.is_finite() {
            return Err(DataError::NonFinite {
                dmu: dmu.into(),
                period: period.into(),
                variable: var.into(),
            });
        }
        if value < 0.0 {
            return Err(DataError::NegativeValue {
                dmu: dmu.into(),
                period: period.into(),
                variable: var.into(),
                value,
            });
        }
        let j = *dmu_pos.entry(dmu.to_string()).or_insert_with(|| {
            dmu_ids.push(dmu.to_string());
            dmu_ids.len() - 1
        });
        period_set.insert(period.to_string(), ());
        if cells.insert((j, period.to_string(), vi), value).is_some() {
            return Err(DataError::DuplicateTriple {
                dmu: dmu.into(),
                period: period.into(),
                variable: var.into(),
            });
        }
    }
    if dmu_ids.is_empty() {
        return Err(DataError::Empty);
    }
    let periods: Vec<String> = period_set.into_keys().collect();
    let mut values = Vec::with_capacity(dmu_ids.len() * periods.len() * variables.len());
    for (j, dmu) in dmu_ids.iter().enumerate() {
        for period in &periods {
            for (i, var) in variables.iter().enumerate() {
                match cells.get(&(j, period.clone(), i)) {
                    Some(&v) => values.push(v),
                    None => {
                        return Err(DataError::MissingCell {
                            dmu: dmu.clone(),
                            period: period.clone(),
                            variable: var.name.clone(),
                        })
                    }
                }
            }
        }
    }
    PanelDataset::new(dmu_ids, periods, variables, values)
}

/// Loads and validates a dataset from a long CSV and a schema file.
pub fn load_dataset(
    data_path: impl AsRef<Path>,
    schema_path: impl AsRef<Path>,
) -> Result<PanelDataset, DataError> {
    let schema = std::fs::read_to_string(schema_path)?;
    let variables = parse_schema(&schema)?;
    let file = File::open(data_path)?;
    read_csv(BufReader::new(file), variables)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorVariable {
    pub name: String,
    pub role: VariableRole,
    pub min: f64,
    pub max: f64,
    /// Calibration target only; draws are uniform on `[min, max]`.
    pub variance: f64,
}

/// Parameters of the synthetic panel generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub variables: Vec<GeneratorVariable>,
    pub dmu_count: usize,
    pub period_count: usize,
    /// Defaults to `P1..PT` (zero-padded so lexical order is numeric order).
    pub period_labels: Option<Vec<String>>,
    pub seed: u64,
}

impl GeneratorSpec {
    /// Five bank ratios (two inputs, one undesirable link, one desirable
    /// link, one output) with ranges calibrated to the descriptive
    /// statistics of a 531-branch, 2017–2019 panel.
    pub fn bank_ratios(dmu_count: usize, seed: u64) -> Self {
        let var = |name: &str, role, max, variance| GeneratorVariable {
            name: name.into(),
            role,
            min: 0.0,
            max,
            variance,
        };
        Self {
            variables: vec![
                var("L1", VariableRole::Input, 0.0520, 0.0042),
                var("EX1", VariableRole::Input, 0.0532, 0.0037),
                var("EX2", VariableRole::BadLink, 0.0820, 0.0039),
                var("IN1", VariableRole::GoodLink, 0.0870, 0.0048),
                var("IN2", VariableRole::Output, 0.0753, 0.0040),
            ],
            dmu_count,
            period_count: 3,
            period_labels: Some(vec!["2017".into(), "2018".into(), "2019".into()]),
            seed,
        }
    }

    /// Parses the text form:
    ///
    /// ```text
    /// # comment
    /// dmus = 531
    /// periods = 3
    /// seed = 7                      # optional
    /// period_labels = 2017,2018,2019  # optional
    /// L1 = input, 0, 0.0520, 0.0042   # name = role, min, max, variance
    /// ```
    ///
    /// `seed` defaults to `default_seed` when absent.
    pub fn parse(text: &str, default_seed: u64) -> Result<Self, DataError> {
        let mut dmus = None;
        let mut periods = None;
        let mut seed = None;
        let mut labels: Option<(usize, Vec<String>)> = None;
        let mut variables: Vec<GeneratorVariable> = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| DataError::InvalidSpec {
                line: line_no,
                message,
            };
            let (key, rest) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `key = value`, found `{line}`")))?;
            let key = key.trim();
            let rest = rest.trim();
            let positive = |s: &str| -> Result<usize, DataError> {
                match s.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v),
                    _ => Err(bad(format!(
                        "`{key}` must be a positive integer, found `{s}`"
                    ))),
                }
            };
            match key {
                "dmus" => dmus = Some(positive(rest)?),
                "periods" => periods = Some(positive(rest)?),
                "seed" => {
                    seed = Some(
                        rest.parse::<u64>()
                            .map_err(|_| bad(format!("bad seed `{rest}`")))?,
                    )
                }
                "period_labels" => {
                    labels = Some((
                        line_no,
                        rest.split(',').map(|s| s.trim().to_string()).collect(),
                    ))
                }
                name => {
                    let fields: Vec<&str> = rest.split(',').map(str::trim).collect();
                    if fields.len() != 4 {
                        return Err(bad(format!(
                            "variable `{name}` needs `role, min, max, variance`"
                        )));
                    }
                    let role: VariableRole = fields[0].parse().map_err(bad)?;
                    let num = |s: &str| -> Result<f64, DataError> {
                        s.parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .ok_or_else(|| bad(format!("bad number `{s}`")))
                    };
                    let (min, max, variance) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
                    if min < 0.0 {
                        return Err(bad(format!("min {min} is negative")));
                    }
                    if min > max {
                        return Err(bad(format!("min {min} exceeds max {max}")));
                    }
                    if variables.iter().any(|v| v.name == name) {
                        return Err(bad(format!("variable `{name}` declared twice")));
                    }
                    variables.push(GeneratorVariable {
                        name: name.to_string(),
                        role,
                        min,
                        max,
                        variance,
                    });
                }
            }
        }
        let missing = |what: &str| DataError::InvalidSpec {
            line: last_line,
            message: format!("missing `{what}`"),
        };
        let dmu_count = dmus.ok_or_else(|| missing("dmus"))?;
        let period_count = periods.ok_or_else(|| missing("periods"))?;
        let period_labels = match labels {
            Some((line, l)) => {
                if l.len() != period_count {
                    return Err(DataError::InvalidSpec {
                        line,
                        message: format!("{} labels for {} periods", l.len(), period_count),
                    });
                }
                Some(l)
            }
            None => None,
        };
        let spec = Self {
            variables,
            dmu_count,
            period_count,
            period_labels,
            seed: seed.unwrap_or(default_seed),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), DataError> {
        let invalid = |message: String| DataError::InvalidSpec { line: 0, message };
        if self.dmu_count == 0 || self.period_count == 0 {
            return Err(invalid("dmu and period counts must be positive".into()));
        }
        for v in &self.variables {
            if !(v.min.is_finite() && v.max.is_finite()) || v.min < 0.0 || v.min > v.max {
                return Err(invalid(format!("bad interval for `{}`", v.name)));
            }
        }
        if let Some(labels) = &self.period_labels {
            if labels.len() != self.period_count {
                return Err(invalid("period label count mismatch".into()));
            }
        }
        let vars: Vec<Variable> = self
            .variables
            .iter()
            .map(|v| Variable::new(v.name.clone(), v.role))
            .collect();
        check_roles(&vars)
    }

    fn labels(&self) -> Vec<String> {
        if let Some(l) = &self.period_labels {
            return l.clone();
        }
        let width = self.period_count.to_string().len();
        (1..=self.period_count)
            .map(|t| format!("P{t:0width$}"))
            .collect()
    }
}

/// Draws every value independently and uniformly on its variable's interval,
/// in dmu, period, variable order, from a ChaCha stream seeded by
/// `spec.seed`.
pub fn generate_synthetic(spec: &GeneratorSpec) -> Result<PanelDataset, DataError> {
    spec.validate()?;
    let mut rng = seed::rng(spec.seed);
    let width = spec.dmu_count.to_string().len();
    let dmu_ids: Vec<String> = (1..=spec.dmu_count)
        .map(|j| format!("DMU{j:0width$}"))
        .collect();
    let mut values = Vec::with_capacity(spec.dmu_count * spec.period_count * spec.variables.len());
    for _ in 0..spec.dmu_count {
        for _ in 0..spec.period_count {
            for v in &spec.variables {
                values.push(if v.min == v.max {
                    v.min
                } else {
                    rng.gen_range(v.min..=v.max)
                });
            }
        }
    }
    let variables = spec
        .variables
        .iter()
        .map(|v| Variable::new(v.name.clone(), v.role))
        .collect();
    PanelDataset::new(dmu_ids, spec.labels(), variables, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_schema() -> Vec<Variable> {
        parse_schema("a=input\nb=output\n").unwrap()
    }

    #[test]
    fn minimal_dataset_loads() {
        let csv = "dmu,period,variable,value\nd1,p1,a,1.0\nd1,p1,b,1.0\n";
        let ds = read_csv(csv.as_bytes(), ab_schema()).unwrap();
        assert_eq!(ds.n_dmus(), 1);
        assert_eq!(ds.n_periods(), 1);
        assert_eq!(ds.value(0, 0, 1), 1.0);
    }

    #[test]
    fn missing_cell_is_named() {
        let csv = "dmu,period,variable,value\nd1,p1,a,1.0\n";
        match read_csv(csv.as_bytes(), ab_schema()) {
            Err(DataError::MissingCell {
                dmu,
                period,
                variable,
            }) => assert_eq!(
                (dmu.as_str(), period.as_str(), variable.as_str()),
                ("d1", "p1", "b")
            ),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_negative_duplicate() {
        let unknown = "dmu,period,variable,value\nd1,p1,c,1.0\n";
        assert!(matches!(
            read_csv(unknown.as_bytes(), ab_schema()),
            Err(DataError::UnknownVariable(v)) if v == "c"
        ));
        let neg = "dmu,period,variable,value\nd1,p1,a,-1.0\n";
        assert!(matches!(
            read_csv(neg.as_bytes(), ab_schema()),
            Err(DataError::NegativeValue { .. })
        ));
        let dup = "dmu,period,variable,value\nd1,p1,a,1\nd1,p1,a,2\n";
        assert!(matches!(
            read_csv(dup.as_bytes(), ab_schema()),
            Err(DataError::DuplicateTriple { .. })
        ));
        let bad_header = "dmu,year,variable,value\n";
        assert!(matches!(
            read_csv(bad_header.as_bytes(), ab_schema()),
            Err(DataError::BadHeader(_))
        ));
    }

    #[test]
    fn schema_requires_input_and_output() {
        assert!(matches!(
            parse_schema("a=input\nz=good_link\n"),
            Err(DataError::NoInputOrNoOutput)
        ));
        assert!(matches!(
            parse_schema("# c\na=input\nb=outptu\n"),
            Err(DataError::Schema { line: 3, .. })
        ));
    }

    #[test]
    fn periods_sorted_ascending() {
        let csv = "dmu,period,variable,value\n\
                   d1,2019,a,3\nd1,2019,b,30\nd1,2017,a,1\nd1,2017,b,10\n";
        let ds = read_csv(csv.as_bytes(), ab_schema()).unwrap();
        assert_eq!(ds.periods(), ["2017", "2019"]);
        assert_eq!(ds.value(0, 0, 0), 1.0);
        assert_eq!(ds.value(0, 1, 1), 30.0);
    }

    #[test]
    fn bank_schema_counts() {
        let vars =
            parse_schema("L1=input\nEX1=input\nEX2=bad_link\nIN1=good_link\nIN2=output\n").unwrap();
        let spec = GeneratorSpec::bank_ratios(531, 1);
        let ds = generate_synthetic(&spec).unwrap();
        assert_eq!(ds.variables(), vars.as_slice());
        assert_eq!(ds.role_count(VariableRole::Input), 2);
        assert_eq!(ds.role_count(VariableRole::Output), 1);
        assert_eq!(ds.role_count(VariableRole::GoodLink), 1);
        assert_eq!(ds.role_count(VariableRole::BadLink), 1);
        assert_eq!((ds.n_dmus(), ds.n_periods()), (531, 3));
    }

    #[test]
    fn degenerate_interval_is_constant() {
        let mut spec = GeneratorSpec::bank_ratios(20, 3);
        spec.variables[0].min = 0.25;
        spec.variables[0].max = 0.25;
        let ds = generate_synthetic(&spec).unwrap();
        for j in 0..20 {
            for t in 0..3 {
                assert_eq!(ds.value(j, t, 0), 0.25);
            }
        }
    }

    #[test]
    fn spec_text_errors_carry_line() {
        let text = "dmus=3\nperiods=2\na=input,0,1,0\nb=outptu,0,1,0\n";
        match GeneratorSpec::parse(text, 0) {
            Err(DataError::InvalidSpec { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("outptu"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let ok = GeneratorSpec::parse(
            "dmus=3\nperiods=2\nseed=9\na=input,0,1,0\nb=output,0,1,0\n",
            0,
        )
        .unwrap();
        assert_eq!(ok.seed, 9);
        assert_eq!(ok.labels(), ["P1", "P2"]);
    }

    #[test]
    fn format_sig_rounds() {
        assert_eq!(format_sig(0.1234567890123456, 12), "0.123456789012");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(0.0, 12), "0");
    }
}
