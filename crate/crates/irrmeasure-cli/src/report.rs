//! Uniform command output: scalar fields plus named tables, rendered as
//! human text, JSON or CSV.

use serde::{Deserialize, Serialize};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    pub key: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: Vec<Field>,
    pub values: Vec<Field>,
    pub tables: Vec<Table>,
    /// One line per failed check, with the parameters that reproduce it.
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), params: Vec::new(), values: Vec::new(), tables: Vec::new(), failures: Vec::new() }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push(Field { key: key.into(), value: value.to_string() });
    }

    pub fn value(&mut self, key: &str, value: impl ToString) {
        self.values.push(Field { key: key.into(), value: value.to_string() });
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.iter().find(|f| f.key == key).map(|f| f.value.as_str())
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Human => self.render_human(),
        }
    }

    fn render_human(&self) -> String {
        let mut out = format!("{}\n", self.command);
        let width = self.params.iter().chain(&self.values).map(|f| f.key.chars().count()).max().unwrap_or(0);
        for f in self.params.iter().chain(&self.values) {
            out += &format!("  {:width$}  {}\n", f.key, f.value);
        }
        for t in &self.tables {
            out += &format!("\n[{}]\n", t.name);
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for r in &t.rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:w$}")).collect();
                format!("  {}\n", parts.join("  ").trim_end())
            };
            out += &line(&t.columns);
            for r in &t.rows {
                out += &line(r);
            }
        }
        if !self.failures.is_empty() {
            out += "\nfailures:\n";
            for f in &self.failures {
                out += &format!("  {f}\n");
            }
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        let mut write = |rec: &[&str]| w.write_record(rec).expect("in-memory write");
        write(&["section", "key", "value"]);
        write(&["command", "command", &self.command]);
        for f in &self.params {
            write(&["param", &f.key, &f.value]);
        }
        for f in &self.values {
            write(&["value", &f.key, &f.value]);
        }
        for f in &self.failures {
            write(&["failure", "", f]);
        }
        for t in &self.tables {
            let mut head = vec!["table", t.name.as_str()];
            head.extend(t.columns.iter().map(String::as_str));
            write(&head);
            for r in &t.rows {
                let mut row = vec!["row", t.name.as_str()];
                row.extend(r.iter().map(String::as_str));
                write(&row);
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}
