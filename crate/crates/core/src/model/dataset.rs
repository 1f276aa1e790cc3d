use std::io::{Read, Write};

use crate::error::ModelError;
use crate::graph::{VarId, Variable};

/// Discrete samples stored column-major as integer state codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    variables: Vec<Variable>,
    columns: Vec<Vec<u8>>,
}

impl Dataset {
    pub fn new(variables: Vec<Variable>, columns: Vec<Vec<u8>>) -> Result<Self, ModelError> {
        if variables.len() != columns.len() {
            return Err(ModelError::Dataset(format!(
                "{} variables but {} columns",
                variables.len(),
                columns.len()
            )));
        }
        let rows = columns.first().map_or(0, Vec::len);
        for (v, col) in variables.iter().zip(&columns) {
            if v.arity > 256 {
                return Err(ModelError::Dataset(format!(
                    "{} has arity above 256",
                    v.name
                )));
            }
            if col.len() != rows {
                return Err(ModelError::Dataset(format!("column {} is ragged", v.name)));
            }
            if let Some(&s) = col.iter().find(|&&s| s as usize >= v.arity) {
                return Err(ModelError::Dataset(format!(
                    "{} has state {s} but arity {}",
                    v.name, v.arity
                )));
            }
        }
        Ok(Self { variables, columns })
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn arity(&self, v: VarId) -> usize {
        self.variables[v.0].arity
    }

    pub fn column(&self, v: VarId) -> &[u8] {
        &self.columns[v.0]
    }

    pub fn var(&self, name: &str) -> Option<VarId> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .map(VarId)
    }

    /// The first `n` rows.
    pub fn head(&self, n: usize) -> Self {
        let n = n.min(self.rows());
        Self {
            variables: self.variables.clone(),
            columns: self.columns.iter().map(|c| c[..n].to_vec()).collect(),
        }
    }

    /// Writes a header of variable names followed by one row of codes per sample.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), ModelError> {
        let mut out = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| ModelError::Dataset(e.to_string());
        out.write_record(self.variables.iter().map(|v| v.name.as_str()))
            .map_err(csv_err)?;
        let mut buf = Vec::with_capacity(self.n_vars());
        for r in 0..self.rows() {
            buf.clear();
            buf.extend(self.columns.iter().map(|c| c[r].to_string()));
            out.write_record(&buf).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a CSV written by [`Dataset::write_csv`]. When `arities` is `None`
    /// each arity is inferred as `max(2, largest code + 1)`.
    pub fn read_csv<R: Read>(
        r: R,
        arities: Option<&[(String, usize)]>,
    ) -> Result<Self, ModelError> {
        let mut rdr = csv::Reader::from_reader(r);
        let csv_err = |e: csv::Error| ModelError::Dataset(e.to_string());
        let header: Vec<String> = rdr
            .headers()
            .map_err(csv_err)?
            .iter()
            .map(str::to_owned)
            .collect();
        let mut columns: Vec<Vec<u8>> = vec![Vec::new(); header.len()];
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(csv_err)?;
            for (col, field) in columns.iter_mut().zip(rec.iter()) {
                let code: u8 = field.trim().parse().map_err(|_| {
                    ModelError::Dataset(format!("row {}: bad state code {field:?}", line + 1))
                })?;
                col.push(code);
            }
        }
        let variables = match arities {
            Some(known) => header
                .iter()
                .map(|name| {
                    known
                        .iter()
                        .find(|(n, _)| n == name)
                        .map(|&(_, a)| Variable::new(name.clone(), a))
                        .ok_or_else(|| ModelError::Dataset(format!("unknown column {name}")))
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => header
                .iter()
                .zip(&columns)
                .map(|(name, col)| {
                    let max = col.iter().copied().max().map_or(0, |m| m as usize + 1);
                    Variable::new(name.clone(), max.max(2))
                })
                .collect(),
        };
        Self::new(variables, columns)
    }
}
