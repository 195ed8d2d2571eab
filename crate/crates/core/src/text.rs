//! Surface-string helpers shared by the simplifier and the CLI.

/// Tokens that attach to the preceding token without a space.
fn attaches_left(tok: &str) -> bool {
    matches!(
        tok,
        "," | "." | ";" | ":" | ")" | "]" | "}" | "!" | "?" | "%" | "''" | "'s" | "'S" | "'" | "n't"
            | "'re" | "'ve" | "'ll" | "'d" | "'m"
    )
}

/// Tokens that attach to the following token without a space.
fn attaches_right(tok: &str) -> bool {
    matches!(tok, "(" | "[" | "{" | "``" | "$")
}

/// Joins tokens with single spaces, without a space before closing
/// punctuation and clitics or after opening brackets. PTB quote tokens are
/// rendered as plain double quotes.
pub fn detokenize<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut out = String::new();
    let mut glue_next = true;
    for tok in tokens {
        let tok = tok.as_ref();
        if !glue_next && !attaches_left(tok) {
            out.push(' ');
        }
        out.push_str(match tok {
            "``" | "''" => "\"",
            other => other,
        });
        glue_next = attaches_right(tok);
    }
    out
}

/// Uppercases the first alphanumeric character of `s` when it is a letter.
pub fn capitalize_first(s: &str) -> String {
    match s.char_indices().find(|(_, c)| c.is_alphanumeric()) {
        Some((i, c)) if c.is_lowercase() => {
            let mut out = String::with_capacity(s.len());
            out.push_str(&s[..i]);
            out.extend(c.to_uppercase());
            out.push_str(&s[i + c.len_utf8()..]);
            out
        }
        _ => s.to_string(),
    }
}

/// Lowercases the first character of a word.
pub fn lowercase_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// True unless the first alphanumeric character is a lowercase letter.
pub fn starts_uppercase(s: &str) -> bool {
    s.chars()
        .find(|c| c.is_alphanumeric())
        .is_none_or(|c| !c.is_lowercase())
}
