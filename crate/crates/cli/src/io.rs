use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use majority_landscape::{OlympusTemplate, Rule};

pub fn parse_rule(text: &str) -> Result<Rule> {
    text.trim().parse::<Rule>().map_err(|e| anyhow!("malformed rule {:?}: {e}", text.trim()))
}

fn read(path: &Path, what: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {what} file {}", path.display()))
}

/// Non-empty lines with `#` comments stripped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// One rule per line, optionally preceded by a name: `GKL 005F...`.
pub fn read_rules(path: &Path) -> Result<Vec<(String, Rule)>> {
    let text = read(path, "rule")?;
    content_lines(&text)
        .map(|(no, line)| {
            let mut tokens: Vec<&str> = line.split_whitespace().collect();
            let hex = tokens.pop().expect("line is not empty");
            let rule = parse_rule(hex).with_context(|| format!("{}:{no}", path.display()))?;
            let name = if tokens.is_empty() { rule.to_hex() } else { tokens.join(" ") };
            Ok((name, rule))
        })
        .collect()
}

/// 128 symbols `0`, `1`, `*`; whitespace and `#` comments are ignored.
pub fn read_template(path: &Path) -> Result<OlympusTemplate> {
    let text = read(path, "template")?;
    let body: String = content_lines(&text).map(|(_, l)| l).collect::<Vec<_>>().join(" ");
    body.parse::<OlympusTemplate>()
        .map_err(|e| anyhow!("malformed template in {}: {e}", path.display()))
}

pub fn template_or_canonical(path: Option<&Path>) -> Result<OlympusTemplate> {
    path.map_or_else(|| Ok(OlympusTemplate::canonical()), read_template)
}

/// The `neutral_degree` column of a walk CSV.
pub fn read_walk_degrees(path: &Path) -> Result<Vec<f64>> {
    let text = read(path, "walk")?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| anyhow!("walk file {} is empty", path.display()))?;
    let col = header
        .split(',')
        .position(|h| h.trim() == "neutral_degree")
        .ok_or_else(|| anyhow!("walk file {} has no neutral_degree column", path.display()))?;
    lines
        .enumerate()
        .map(|(i, l)| {
            let field = l.split(',').nth(col).unwrap_or("").trim();
            if field.is_empty() {
                bail!("walk file {} row {} has no neutral degree", path.display(), i + 1);
            }
            field
                .parse::<f64>()
                .with_context(|| format!("walk file {} row {}: bad degree {field:?}", path.display(), i + 1))
        })
        .collect()
}

/// CSV text with a single header row.
pub struct Csv(String);

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv(header.join(",") + "\n")
    }

    pub fn row(&mut self, fields: &[String]) {
        self.0.push_str(&fields.join(","));
        self.0.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0.into_bytes()
    }
}

/// Shorthand for building CSV rows from displayable values.
#[macro_export]
macro_rules! fields {
    ($($x:expr),* $(,)?) => { &[$($x.to_string()),*] };
}
