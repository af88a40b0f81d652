//! Line-oriented `key: value` reader shared by the poset and space formats.

use crate::error::{Error, Result};

pub(crate) struct Section {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Splits `text` into `key: value` sections. Lines starting with `#` are
/// comments; `;` separates sections on the same line.
pub(crate) fn sections(text: &str) -> Result<Vec<Section>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        for part in trimmed.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part.split_once(':').ok_or_else(|| Error::Syntax {
                line,
                message: format!("expected `key: value`, found `{part}`"),
            })?;
            out.push(Section {
                line,
                key: key.trim().to_ascii_lowercase(),
                value: value.trim().to_string(),
            });
        }
    }
    Ok(out)
}

/// Splits a comma-separated list of `left<sep>right` pairs.
pub(crate) fn pairs(line: usize, value: &str, sep: char) -> Result<Vec<(String, String)>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (l, r) = p.split_once(sep).ok_or_else(|| Error::Syntax {
                line,
                message: format!("expected `x{sep}y`, found `{p}`"),
            })?;
            let (l, r) = (l.trim(), r.trim());
            if l.is_empty() || r.is_empty() {
                return Err(Error::Syntax {
                    line,
                    message: format!("empty label in `{p}`"),
                });
            }
            Ok((l.to_string(), r.to_string()))
        })
        .collect()
}

pub(crate) fn check_label(line: usize, label: &str, reserved: &[char]) -> Result<()> {
    if let Some(c) = label.chars().find(|c| reserved.contains(c) || *c == ',' || *c == ';' || *c == '#') {
        return Err(Error::Syntax {
            line,
            message: format!("label `{label}` contains reserved character `{c}`"),
        });
    }
    Ok(())
}
