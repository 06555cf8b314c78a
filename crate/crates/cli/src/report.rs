//! Report assembly.
//!
//! Every subcommand writes through a [`Reporter`] so the two output
//! formats stay in lockstep.  Text mode prints `key = value` for
//! top-level pairs and `key: value` under a `[SECTION]` header;
//! json-lines mode prints one JSON object per pair.  Output is buffered
//! and emitted in one piece so a command either prints a whole report or
//! nothing.

use std::fmt::Display;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    JsonLines,
}

pub struct Reporter {
    format: Format,
    section: Option<String>,
    lines: Vec<String>,
}

fn jstr(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

impl Reporter {
    pub fn new(format: Format) -> Self {
        Reporter {
            format,
            section: None,
            lines: Vec::new(),
        }
    }

    /// Open a section; subsequent pairs belong to it.
    pub fn section(&mut self, name: &str) {
        if self.format == Format::Text {
            if !self.lines.is_empty() {
                self.lines.push(String::new());
            }
            self.lines.push(format!("[{name}]"));
        }
        self.section = Some(name.to_string());
    }

    pub fn kv(&mut self, key: &str, value: impl Display) {
        let value = value.to_string();
        let line = match self.format {
            Format::Text => match &self.section {
                Some(_) => format!("{key}: {value}"),
                None => format!("{key} = {value}"),
            },
            Format::JsonLines => match &self.section {
                Some(s) => format!(
                    "{{\"section\":{},\"key\":{},\"value\":{}}}",
                    jstr(s),
                    jstr(key),
                    jstr(&value)
                ),
                None => format!("{{\"key\":{},\"value\":{}}}", jstr(key), jstr(&value)),
            },
        };
        self.lines.push(line);
    }

    pub fn finish(self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}
