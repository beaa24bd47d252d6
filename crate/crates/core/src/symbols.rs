//! Parsing and rendering of symbol strings.
//!
//! Cyclic strings whose symbols are all single digits are written compactly
//! (`0312021`); anything with a symbol ≥ 10 is comma-separated (`0,12,3`).
//! Parsing accepts both forms.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty symbol string")]
    Empty,
    #[error("invalid symbol {0:?}")]
    InvalidSymbol(String),
}

/// Renders symbols compactly when every symbol is a single digit, otherwise
/// comma-separated.
pub fn render(symbols: &[u64]) -> String {
    if symbols.iter().all(|&s| s < 10) {
        symbols.iter().map(|s| s.to_string()).collect()
    } else if symbols.len() == 1 {
        // A trailing comma keeps a lone multi-digit symbol distinguishable
        // from a compact digit string.
        format!("{},", symbols[0])
    } else {
        let parts: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
        parts.join(",")
    }
}

/// Parses either a compact digit string or a comma-separated list.
pub fn parse(text: &str) -> Result<Vec<u64>, ParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseError::Empty);
    }
    if text.contains(',') {
        let symbols: Vec<u64> = text
            .split(',')
            .map(str::trim)
            .filter(|part| !part.is_empty())
            .map(|part| {
                part.parse::<u64>().map_err(|_| ParseError::InvalidSymbol(part.to_string()))
            })
            .collect::<Result<_, _>>()?;
        if symbols.is_empty() {
            return Err(ParseError::Empty);
        }
        Ok(symbols)
    } else {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(u64::from)
                    .ok_or_else(|| ParseError::InvalidSymbol(c.to_string()))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_round_trip() {
        assert_eq!(render(&[0, 3, 1, 2, 0, 2, 1]), "0312021");
        assert_eq!(parse("0312021").unwrap(), vec![0, 3, 1, 2, 0, 2, 1]);
    }

    #[test]
    fn comma_form_used_for_large_symbols() {
        assert_eq!(render(&[0, 12, 3]), "0,12,3");
        assert_eq!(parse("0,12,3").unwrap(), vec![0, 12, 3]);
        assert_eq!(parse(" 4, 5 ,6 ").unwrap(), vec![4, 5, 6]);
        assert_eq!(parse("1,,2").unwrap(), vec![1, 2]);
    }

    #[test]
    fn lone_large_symbol_keeps_a_comma() {
        assert_eq!(render(&[10]), "10,");
        assert_eq!(parse("10,").unwrap(), vec![10]);
        assert_eq!(parse("10").unwrap(), vec![1, 0]);
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse(""), Err(ParseError::Empty));
        assert_eq!(parse(","), Err(ParseError::Empty));
        assert!(parse("12x4").is_err());
        assert!(parse("1,x,2").is_err());
    }
}
