//! Text normalization shared by the emulator's line extraction, probe
//! scoring, and the text-space metrics: strip leading/trailing whitespace,
//! collapse internal whitespace runs to a single space, drop empty lines.
//! Case and punctuation are preserved so commands, paths, and symbols stay
//! visible.

/// Normalize one line. Returns `None` when the line is empty after
/// normalization (callers drop those).
pub fn normalize_line(line: &str) -> Option<String> {
    let mut out = String::with_capacity(line.len());
    let mut in_space = false;
    for ch in line.trim().chars() {
        if ch.is_whitespace() {
            in_space = true;
        } else {
            if in_space && !out.is_empty() {
                out.push(' ');
            }
            in_space = false;
            out.push(ch);
        }
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

/// Normalize a block of text into the ordered list of normalized lines.
pub fn normalize_lines(text: &str) -> Vec<String> {
    text.lines().filter_map(normalize_line).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapses_space_runs_and_trims() {
        assert_eq!(normalize_line("  ls   -l  "), Some("ls -l".to_string()));
    }

    #[test]
    fn empty_after_normalization_is_dropped() {
        assert_eq!(normalize_line("   "), None);
        assert_eq!(normalize_line(""), None);
    }

    #[test]
    fn case_and_punctuation_survive() {
        assert_eq!(
            normalize_line("Foo/Bar.tar.gz  --Flag"),
            Some("Foo/Bar.tar.gz --Flag".to_string())
        );
    }

    #[test]
    fn tabs_collapse_like_spaces() {
        assert_eq!(normalize_line("a\t\tb"), Some("a b".to_string()));
    }

    #[test]
    fn block_drops_empty_lines() {
        assert_eq!(normalize_lines("a\n\n  \nb"), vec!["a", "b"]);
    }
}
