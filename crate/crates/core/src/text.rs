//! Tokenization shared by every module that looks at explanation text.
//!
//! Rules: lowercase, split on whitespace, and detach punctuation into its own
//! token. Apostrophes and hyphens between two alphanumeric characters stay
//! inside the word (`don't`, `well-known`).

use alloc::string::String;
use alloc::vec::Vec;

pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut word = String::new();
        for (i, &c) in chars.iter().enumerate() {
            if c.is_alphanumeric() || (is_joiner(c) && joins(&chars, i)) {
                word.extend(c.to_lowercase());
            } else {
                if !word.is_empty() {
                    tokens.push(core::mem::take(&mut word));
                }
                let mut punct = String::new();
                punct.extend(c.to_lowercase());
                tokens.push(punct);
            }
        }
        if !word.is_empty() {
            tokens.push(word);
        }
    }
    tokens
}

/// Lowercase already-tokenized input so externally supplied tokens follow the
/// same case rule as [`tokenize`].
pub fn normalize_tokens<S: AsRef<str>>(tokens: &[S]) -> Vec<String> {
    tokens.iter().map(|t| t.as_ref().to_lowercase()).collect()
}

/// True when the token contains at least one alphanumeric character.
pub fn is_word(token: &str) -> bool {
    token.chars().any(char::is_alphanumeric)
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '’' | '-')
}

fn joins(chars: &[char], i: usize) -> bool {
    i > 0 && i + 1 < chars.len() && chars[i - 1].is_alphanumeric() && chars[i + 1].is_alphanumeric()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_punctuation_and_lowercases() {
        assert_eq!(tokenize("The dog, I think, is CUTE!"), ["the", "dog", ",", "i", "think", ",", "is", "cute", "!"]);
    }

    #[test]
    fn keeps_inner_apostrophes_and_hyphens() {
        assert_eq!(
            tokenize("I don't like well-known 'quotes'"),
            ["i", "don't", "like", "well-known", "'", "quotes", "'"]
        );
    }

    #[test]
    fn empty_and_whitespace_only() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  \t\n ").is_empty());
    }

    #[test]
    fn tokenize_is_idempotent_on_joined_output() {
        let once = tokenize("Wow... it looks like a dragon-shaped cloud!!");
        let again = tokenize(&once.join(" "));
        assert_eq!(once, again);
    }
}
