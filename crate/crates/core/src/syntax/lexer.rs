use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    Dot,
    Imp,
    Amp,
    Backslash,
    Colon,
    Arrow,
    Comma,
    Pi,
    True,
    Kind,
    Type,
    StrengthenDirective,
    ContextDirective,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Imp => "`=>`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Pi => "`pi`".into(),
            Tok::True => "`true`".into(),
            Tok::Kind => "`kind`".into(),
            Tok::Type => "`type`".into(),
            Tok::StrengthenDirective => "`%strengthen`".into(),
            Tok::ContextDirective => "`%context`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, Loc)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let loc = Loc { line, col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            let rest: String = chars[i + 1..].iter().take_while(|c| is_ident_char(**c)).collect();
            let directive = match rest.as_str() {
                "strengthen" => Some(Tok::StrengthenDirective),
                "context" => Some(Tok::ContextDirective),
                _ => None,
            };
            if let Some(tok) = directive {
                for _ in 0..=rest.chars().count() {
                    bump!();
                }
                out.push((tok, loc));
            } else {
                while i < chars.len() && chars[i] != '\n' {
                    bump!();
                }
            }
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let tok = match (c, two.as_str()) {
            (_, "=>") => Some((Tok::Imp, 2)),
            (_, "->") => Some((Tok::Arrow, 2)),
            ('(', _) => Some((Tok::LParen, 1)),
            (')', _) => Some((Tok::RParen, 1)),
            ('.', _) => Some((Tok::Dot, 1)),
            ('&', _) => Some((Tok::Amp, 1)),
            ('\\', _) => Some((Tok::Backslash, 1)),
            (':', _) => Some((Tok::Colon, 1)),
            (',', _) => Some((Tok::Comma, 1)),
            _ => None,
        };
        if let Some((t, n)) = tok {
            for _ in 0..n {
                bump!();
            }
            out.push((t, loc));
            continue;
        }
        if is_ident_char(c) {
            let mut s = String::new();
            while i < chars.len() && is_ident_char(chars[i]) {
                s.push(chars[i]);
                bump!();
            }
            let t = match s.as_str() {
                "pi" => Tok::Pi,
                "true" => Tok::True,
                "kind" => Tok::Kind,
                "type" => Tok::Type,
                _ => Tok::Ident(s),
            };
            out.push((t, loc));
            continue;
        }
        return Err(ParseError::Syntax { line, col, msg: format!("unexpected character `{c}`") });
    }
    out.push((Tok::Eof, Loc { line, col }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn lexes_clause() {
        assert_eq!(
            toks("p X => q (x\\ x). % done"),
            vec![
                Tok::Ident("p".into()),
                Tok::Ident("X".into()),
                Tok::Imp,
                Tok::Ident("q".into()),
                Tok::LParen,
                Tok::Ident("x".into()),
                Tok::Backslash,
                Tok::Ident("x".into()),
                Tok::RParen,
                Tok::Dot,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn directives_survive_comments() {
        assert_eq!(toks("%context c.")[0], Tok::ContextDirective);
        assert_eq!(toks("% context c.").len(), 1);
    }

    #[test]
    fn reports_position() {
        match lex("p.\n  q $") {
            Err(ParseError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 5)),
            other => panic!("{other:?}"),
        }
    }
}
