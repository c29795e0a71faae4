//! Tokenizers shared by the lexical backends and ROUGE.

/// Whitespace tokens, lowercased, with every non-alphanumeric character
/// stripped. Tokens that end up empty are dropped, so `"state-of-the-art"`
/// stays one token (`"stateoftheart"`).
pub fn lexical_tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.chars().filter(|c| c.is_alphanumeric()).flat_map(char::to_lowercase).collect::<String>())
        .filter(|t| !t.is_empty())
        .collect()
}

/// Lowercased maximal runs of alphanumeric characters. Punctuation separates
/// tokens, so `"state-of-the-art"` yields four.
pub fn alphanumeric_tokens(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.chars().flat_map(char::to_lowercase).collect())
        .collect()
}

/// 64-bit FNV-1a.
pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes.iter().fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}
