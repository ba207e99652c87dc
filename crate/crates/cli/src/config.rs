//! Sectioned `key = value` run files.
//!
//! ```text
//! # comment
//! [section]
//! key = 1.5
//! list = -1, 1
//! expr = "0.5*x^2 - t^2"
//! ```
//!
//! Values are comma-separated items. An item is either a bare token
//! (number, identifier) or a double-quoted string, which is kept verbatim.

use std::fmt;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ConfigError {}

pub fn error_at(line: usize, column: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Item {
    pub text: String,
    pub quoted: bool,
    pub line: usize,
    /// Column of the first character of `text` (inside the quotes when quoted).
    pub column: usize,
}

impl Item {
    pub fn error(&self, message: impl Into<String>) -> ConfigError {
        error_at(self.line, self.column, message)
    }

    pub fn parse<T: FromStr>(&self, what: &str) -> Result<T, ConfigError> {
        if self.quoted {
            return Err(self.error(format!("expected {what}, found a quoted string")));
        }
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected {what}, found `{}`", self.text)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub key: String,
    pub items: Vec<Item>,
    pub line: usize,
    pub column: usize,
}

impl Entry {
    pub fn error(&self, message: impl Into<String>) -> ConfigError {
        error_at(self.line, self.column, message)
    }

    pub fn single(&self) -> Result<&Item, ConfigError> {
        match self.items.as_slice() {
            [item] => Ok(item),
            _ => Err(self.error(format!("`{}` takes a single value, got {}", self.key, self.items.len()))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn error(&self, message: impl Into<String>) -> ConfigError {
        error_at(self.line, 1, message)
    }

    /// The unique entry named `key`.
    pub fn get(&self, key: &str) -> Result<Option<&Entry>, ConfigError> {
        let mut found = self.entries.iter().filter(|e| e.key == key);
        let first = found.next();
        if let Some(dup) = found.next() {
            return Err(dup.error(format!("`{key}` is set more than once in [{}]", self.name)));
        }
        Ok(first)
    }

    pub fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.entries.iter().filter(move |e| e.key == key)
    }

    pub fn require(&self, key: &str) -> Result<&Entry, ConfigError> {
        self.get(key)?
            .ok_or_else(|| self.error(format!("[{}] is missing `{key}`", self.name)))
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key)?.map(|e| e.single()?.parse("a number")).transpose()
    }

    pub fn count(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.get(key)?.map(|e| e.single()?.parse("a non-negative integer")).transpose()
    }

    pub fn flag(&self, key: &str) -> Result<Option<bool>, ConfigError> {
        self.get(key)?.map(|e| e.single()?.parse("`true` or `false`")).transpose()
    }

    pub fn text(&self, key: &str) -> Result<Option<&Item>, ConfigError> {
        self.get(key)?.map(Entry::single).transpose()
    }

    /// Reject keys outside `allowed`. A trailing `.` in an allowed key
    /// accepts any key with that prefix.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        for e in &self.entries {
            let ok = allowed.iter().any(|a| match a.strip_suffix('.') {
                Some(prefix) => e.key.starts_with(prefix) && e.key.len() > a.len() && e.key.as_bytes()[prefix.len()] == b'.',
                None => e.key == *a,
            });
            if !ok {
                return Err(e.error(format!("unknown key `{}` in [{}]", e.key, self.name)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    pub sections: Vec<Section>,
}

impl Document {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&Section, ConfigError> {
        self.section(name)
            .ok_or_else(|| error_at(1, 1, format!("missing section [{name}]")))
    }
}

fn is_key_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')
}

fn parse_items(value: &str, line: usize, start: usize) -> Result<Vec<Item>, ConfigError> {
    let chars: Vec<char> = value.chars().collect();
    let mut items = Vec::new();
    let mut i = 0;
    loop {
        while i < chars.len() && chars[i].is_whitespace() {
            i += 1;
        }
        let column = start + i;
        if i >= chars.len() || chars[i] == ',' {
            return Err(error_at(line, column, "expected a value"));
        }
        if chars[i] == '"' {
            let mut text = String::new();
            let mut j = i + 1;
            loop {
                match chars.get(j) {
                    None => return Err(error_at(line, column, "unterminated string")),
                    Some('"') => break,
                    Some('\\') if matches!(chars.get(j + 1), Some('"' | '\\')) => {
                        text.push(chars[j + 1]);
                        j += 2;
                    }
                    Some(c) => {
                        text.push(*c);
                        j += 1;
                    }
                }
            }
            items.push(Item {
                text,
                quoted: true,
                line,
                column: column + 1,
            });
            i = j + 1;
        } else {
            let mut j = i;
            while j < chars.len() && chars[j] != ',' && chars[j] != '"' {
                j += 1;
            }
            if chars.get(j) == Some(&'"') {
                return Err(error_at(line, start + j, "unexpected `\"` inside a bare value"));
            }
            let text: String = chars[i..j].iter().collect::<String>().trim_end().to_owned();
            items.push(Item {
                text,
                quoted: false,
                line,
                column,
            });
            i = j;
        }
        while i < chars.len() && chars[i].is_whitespace() {
            i += 1;
        }
        match chars.get(i) {
            None => return Ok(items),
            Some(',') => i += 1,
            Some(c) => return Err(error_at(line, start + i, format!("expected `,` or end of line, found `{c}`"))),
        }
    }
}

pub fn parse(text: &str) -> Result<Document, ConfigError> {
    let mut doc = Document::default();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim_start();
        let indent = raw.chars().count() - trimmed.chars().count();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let close = rest
                .find(']')
                .ok_or_else(|| error_at(line, indent + 1, "expected `]` to close the section header"))?;
            let name = rest[..close].trim();
            if name.is_empty() || !name.chars().all(is_key_char) {
                return Err(error_at(line, indent + 2, format!("invalid section name `{name}`")));
            }
            let tail = rest[close + 1..].trim();
            if !(tail.is_empty() || tail.starts_with('#')) {
                return Err(error_at(line, indent + close + 3, "unexpected text after section header"));
            }
            if doc.section(name).is_some() {
                return Err(error_at(line, indent + 1, format!("section [{name}] appears twice")));
            }
            doc.sections.push(Section {
                name: name.to_owned(),
                line,
                entries: Vec::new(),
            });
            continue;
        }

        let key_len = trimmed.chars().take_while(|c| is_key_char(*c)).count();
        if key_len == 0 {
            return Err(error_at(line, indent + 1, "expected `key = value` or `[section]`"));
        }
        let key: String = trimmed.chars().take(key_len).collect();
        let after_key = &trimmed[key.len()..];
        let after_ws = after_key.trim_start();
        let eq_column = indent + key_len + (after_key.len() - after_ws.len()) + 1;
        let Some(value) = after_ws.strip_prefix('=') else {
            return Err(error_at(line, eq_column, format!("expected `=` after `{key}`")));
        };
        let section = doc
            .sections
            .last_mut()
            .ok_or_else(|| error_at(line, indent + 1, "entry before any [section] header"))?;
        let value_column = eq_column + 1;
        let value = strip_comment(value);
        section.entries.push(Entry {
            items: parse_items(value, line, value_column)?,
            key,
            line,
            column: indent + 1,
        });
    }
    Ok(doc)
}

/// Drop a trailing `# comment` that is not inside a quoted string.
fn strip_comment(value: &str) -> &str {
    let mut quoted = false;
    let mut escaped = false;
    for (i, c) in value.char_indices() {
        match c {
            '\\' if quoted && !escaped => {
                escaped = true;
                continue;
            }
            '"' if !escaped => quoted = !quoted,
            '#' if !quoted => return &value[..i],
            _ => {}
        }
        escaped = false;
    }
    value
}
