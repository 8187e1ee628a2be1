use super::Position;
use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Lower(String),
    Upper(String),
    Quoted(String),
    Dollar(String),
    Distinct(String),
    Number(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Colon,
    Bang,
    Question,
    Tilde,
    And,
    Or,
    Implies,
    Implied,
    Iff,
    Xor,
    Nor,
    Nand,
    Eq,
    Neq,
    /// Any other punctuation; only legal inside annotations.
    Other(char),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) | Tok::Number(s) => format!("'{s}'"),
            Tok::Quoted(s) => format!("quoted atom '{s}'"),
            Tok::Dollar(s) => format!("'${s}'"),
            Tok::Distinct(s) => format!("\"{s}\""),
            Tok::Eof => "end of input".to_string(),
            Tok::Other(c) => format!("'{c}'"),
            t => format!("'{}'", punct(t)),
        }
    }
}

fn punct(t: &Tok) -> &'static str {
    match t {
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBrack => "[",
        Tok::RBrack => "]",
        Tok::Comma => ",",
        Tok::Dot => ".",
        Tok::Colon => ":",
        Tok::Bang => "!",
        Tok::Question => "?",
        Tok::Tilde => "~",
        Tok::And => "&",
        Tok::Or => "|",
        Tok::Implies => "=>",
        Tok::Implied => "<=",
        Tok::Iff => "<=>",
        Tok::Xor => "<~>",
        Tok::Nor => "~|",
        Tok::Nand => "~&",
        Tok::Eq => "=",
        Tok::Neq => "!=",
        _ => "?",
    }
}

pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(text: &str, file: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let err = |line, column, message: String| ParseError::Syntax {
        at: Position { file: file.to_string(), line, column },
        message,
    };

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let advance = |n: usize, i: &mut usize, line: &mut usize, col: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            advance(1, &mut i, &mut line, &mut col);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance(1, &mut i, &mut line, &mut col);
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            advance(2, &mut i, &mut line, &mut col);
            loop {
                if i >= chars.len() {
                    return Err(err(start_line, start_col, "unterminated block comment".into()));
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    advance(2, &mut i, &mut line, &mut col);
                    break;
                }
                advance(1, &mut i, &mut line, &mut col);
            }
            continue;
        }

        let word_end = |from: usize| {
            let mut j = from;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            j
        };

        let (tok, len) = if c.is_ascii_lowercase() {
            let j = word_end(i);
            (Tok::Lower(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_uppercase() {
            let j = word_end(i);
            (Tok::Upper(chars[i..j].iter().collect()), j - i)
        } else if c == '$' {
            let mut j = i + 1;
            if chars.get(j) == Some(&'$') {
                j += 1;
            }
            let end = word_end(j);
            (Tok::Dollar(chars[i + 1..end].iter().collect()), end - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.' && chars.get(j + 1).is_some_and(|d| d.is_ascii_digit())) {
                j += 1;
            }
            (Tok::Number(chars[i..j].iter().collect()), j - i)
        } else if c == '\'' || c == '"' {
            let mut j = i + 1;
            let mut s = String::new();
            loop {
                match chars.get(j) {
                    None | Some('\n') => {
                        return Err(err(start_line, start_col, "unterminated quoted token".into()));
                    }
                    Some('\\') => {
                        match chars.get(j + 1) {
                            Some(&e) if e == '\\' || e == c => s.push(e),
                            _ => return Err(err(start_line, start_col, "invalid escape in quoted token".into())),
                        }
                        j += 2;
                    }
                    Some(&q) if q == c => {
                        j += 1;
                        break;
                    }
                    Some(&o) => {
                        s.push(o);
                        j += 1;
                    }
                }
            }
            if c == '\'' && s.is_empty() {
                return Err(err(start_line, start_col, "empty quoted atom".into()));
            }
            (if c == '\'' { Tok::Quoted(s) } else { Tok::Distinct(s) }, j - i)
        } else {
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            let table: [(&str, Tok); 20] = [
                ("<=>", Tok::Iff),
                ("<~>", Tok::Xor),
                ("=>", Tok::Implies),
                ("<=", Tok::Implied),
                ("~|", Tok::Nor),
                ("~&", Tok::Nand),
                ("!=", Tok::Neq),
                ("(", Tok::LParen),
                (")", Tok::RParen),
                ("[", Tok::LBrack),
                ("]", Tok::RBrack),
                (",", Tok::Comma),
                (".", Tok::Dot),
                (":", Tok::Colon),
                ("!", Tok::Bang),
                ("?", Tok::Question),
                ("~", Tok::Tilde),
                ("&", Tok::And),
                ("|", Tok::Or),
                ("=", Tok::Eq),
            ];
            match table.into_iter().find(|(s, _)| rest.starts_with(s)) {
                Some((s, t)) => (t, s.len()),
                None => (Tok::Other(c), 1),
            }
        };
        out.push(Spanned { tok, line: start_line, column: start_col });
        advance(len, &mut i, &mut line, &mut col);
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s, "t").unwrap().into_iter().map(|s| s.tok).collect()
    }

    #[test]
    fn longest_match_operators() {
        assert_eq!(
            toks("<=> <= => = != ~| ~ <~>"),
            vec![Tok::Iff, Tok::Implied, Tok::Implies, Tok::Eq, Tok::Neq, Tok::Nor, Tok::Tilde, Tok::Xor, Tok::Eof]
        );
    }

    #[test]
    fn comments_are_skipped_and_positions_tracked() {
        let spanned = tokenize("% header\n/* block\n */ fof(a", "t").unwrap();
        assert_eq!(spanned[0].tok, Tok::Lower("fof".into()));
        assert_eq!((spanned[0].line, spanned[0].column), (3, 5));
        assert_eq!((spanned[2].line, spanned[2].column), (3, 9));
    }

    #[test]
    fn quoted_atoms_unescape() {
        assert_eq!(toks(r"'it\'s'"), vec![Tok::Quoted("it's".into()), Tok::Eof]);
        assert!(tokenize("'open", "t").is_err());
    }
}
