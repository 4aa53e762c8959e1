use std::fmt;

use super::Domain;

#[derive(Debug, Clone, PartialEq)]
pub enum EntryValue {
    Number(f64),
    Text(String),
}

impl fmt::Display for EntryValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntryValue::Number(v) => write!(f, "{v}"),
            EntryValue::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    pub key: String,
    pub value: EntryValue,
    /// Grid label of the run that produced the value.
    pub grid: String,
    pub eps: f64,
    pub domain: Domain,
}

/// Named values and pass/fail verdicts of one scenario run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EstimateReport {
    pub entries: Vec<ReportEntry>,
    pub verdicts: Vec<(String, bool)>,
}

impl EstimateReport {
    pub fn number(&mut self, key: impl Into<String>, value: f64, grid: &str, eps: f64, domain: Domain) {
        self.entries.push(ReportEntry {
            key: key.into(),
            value: EntryValue::Number(value),
            grid: grid.to_string(),
            eps,
            domain,
        });
    }

    pub fn text(&mut self, key: impl Into<String>, value: impl Into<String>, grid: &str, eps: f64) {
        self.entries.push(ReportEntry {
            key: key.into(),
            value: EntryValue::Text(value.into()),
            grid: grid.to_string(),
            eps,
            domain: Domain::Full,
        });
    }

    pub fn verdict(&mut self, check: impl Into<String>, pass: bool) {
        self.verdicts.push((check.into(), pass));
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|(_, p)| *p)
    }

    pub fn get(&self, key: &str) -> Option<&EntryValue> {
        self.entries.iter().find(|e| e.key == key).map(|e| &e.value)
    }

    pub fn get_number(&self, key: &str) -> Option<f64> {
        match self.get(key)? {
            EntryValue::Number(v) => Some(*v),
            EntryValue::Text(_) => None,
        }
    }

    pub fn extend(&mut self, other: EstimateReport) {
        self.entries.extend(other.entries);
        self.verdicts.extend(other.verdicts);
    }

    /// `key = value` lines followed by `verdict.<check> = pass|fail` lines.
    pub fn to_text(&self, header: &str) -> String {
        let mut s = format!("{header}\n");
        for e in &self.entries {
            s.push_str(&format!("{} = {}\n", e.key, e.value));
        }
        for (k, p) in &self.verdicts {
            s.push_str(&format!("verdict.{k} = {}\n", if *p { "pass" } else { "fail" }));
        }
        s
    }

    pub fn to_csv(&self, header: &str) -> String {
        let mut s = format!("{header}\nkey,value,grid,eps,domain\n");
        for e in &self.entries {
            s.push_str(&format!("{},{},{},{},{}\n", e.key, e.value, e.grid, e.eps, e.domain));
        }
        s
    }
}
