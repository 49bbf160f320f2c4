use std::fmt;

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownToken(String),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnbalancedParen,
    BadVariable(String),
    Empty,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownToken(t) => write!(f, "unknown token `{t}`"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected `{t}`"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UnbalancedParen => write!(f, "unbalanced parentheses"),
            ParseErrorKind::BadVariable(t) => {
                write!(f, "bad variable `{t}`: expected X followed by an index >= 1")
            }
            ParseErrorKind::Empty => write!(f, "empty formula"),
        }
    }
}

/// Syntax error; `position` is a 0-based character offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Zero,
    One,
    Var(u32),
    Not,
    Implies,
    Iff,
    And,
    Or,
    Oplus,
    Odot,
    Ominus,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Zero => "0".to_string(),
            Tok::One => "1".to_string(),
            Tok::Var(i) => format!("X{i}"),
            Tok::Not => "~".into(),
            Tok::Implies => "->".into(),
            Tok::Iff => "<->".into(),
            Tok::And => "/\\".into(),
            Tok::Or => "\\/".into(),
            Tok::Oplus => "(+)".into(),
            Tok::Odot => "(.)".into(),
            Tok::Ominus => "(-)".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        };
        f.write_str(&s)
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let starts = |i: usize, pat: &str| {
        pat.chars()
            .enumerate()
            .all(|(k, c)| chars.get(i + k) == Some(&c))
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let fixed: &[(&str, Tok)] = &[
            ("(+)", Tok::Oplus),
            ("(.)", Tok::Odot),
            ("(-)", Tok::Ominus),
            ("<->", Tok::Iff),
            ("->", Tok::Implies),
            ("/\\", Tok::And),
            ("\\/", Tok::Or),
            ("~", Tok::Not),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("0", Tok::Zero),
            ("1", Tok::One),
        ];
        if let Some((pat, tok)) = fixed.iter().find(|(pat, _)| starts(i, pat)) {
            // "0"/"1" must not run into further digits
            if matches!(tok, Tok::Zero | Tok::One)
                && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())
            {
                let end = (i..chars.len())
                    .find(|&k| !chars[k].is_ascii_digit())
                    .unwrap_or(chars.len());
                return Err(ParseError {
                    kind: ParseErrorKind::UnknownToken(chars[i..end].iter().collect()),
                    position: i,
                });
            }
            out.push((*tok, i));
            i += pat.chars().count();
            continue;
        }
        if c == 'X' {
            let end = (i + 1..chars.len())
                .find(|&k| !chars[k].is_ascii_digit())
                .unwrap_or(chars.len());
            let digits: String = chars[i + 1..end].iter().collect();
            let index = digits.parse::<u32>().ok().filter(|&n| n >= 1);
            match index {
                Some(n) => out.push((Tok::Var(n), i)),
                None => {
                    return Err(ParseError {
                        kind: ParseErrorKind::BadVariable(chars[i..end].iter().collect()),
                        position: i,
                    })
                }
            }
            i = end;
            continue;
        }
        let end = (i + 1..chars.len())
            .find(|&k| chars[k].is_whitespace() || chars[k].is_ascii_alphanumeric())
            .unwrap_or(chars.len())
            .max(i + 1);
        return Err(ParseError {
            kind: ParseErrorKind::UnknownToken(chars[i..end].iter().collect()),
            position: i,
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            position: self.here(),
        }
    }

    // implication level: `->`, `<->`, right-associative
    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        match self.peek() {
            Some(Tok::Implies) => {
                self.bump();
                Ok(lhs.implies(self.implication()?))
            }
            Some(Tok::Iff) => {
                self.bump();
                Ok(lhs.iff(self.implication()?))
            }
            _ => Ok(lhs),
        }
    }

    // `(+)`, `\/`, left-associative
    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        loop {
            match self.peek() {
                Some(Tok::Oplus) => {
                    self.bump();
                    lhs = lhs.oplus(self.conjunction()?);
                }
                Some(Tok::Or) => {
                    self.bump();
                    lhs = lhs.or(self.conjunction()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    // `/\`, left-associative
    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.strong()?;
        while self.peek() == Some(Tok::And) {
            self.bump();
            lhs = lhs.and(self.strong()?);
        }
        Ok(lhs)
    }

    // `(.)`, `(-)`, left-associative
    fn strong(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Odot) => {
                    self.bump();
                    lhs = lhs.odot(self.unary()?);
                }
                Some(Tok::Ominus) => {
                    self.bump();
                    lhs = lhs.ominus(self.unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        // iterative so that long runs of `~` do not recurse
        let mut negations = 0usize;
        while self.peek() == Some(Tok::Not) {
            self.bump();
            negations += 1;
        }
        let mut f = self.atom()?;
        for _ in 0..negations {
            f = f.not();
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Zero) => Ok(Formula::Bottom),
            Some(Tok::One) => Ok(Formula::verum()),
            Some(Tok::Var(i)) => Ok(Formula::Var(i)),
            Some(Tok::LParen) => {
                let inner = self.implication()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.bump();
                        Ok(inner)
                    }
                    None => Err(ParseError {
                        kind: ParseErrorKind::UnbalancedParen,
                        position: at,
                    }),
                    Some(t) => Err(self.err(ParseErrorKind::UnexpectedToken(t.to_string()))),
                }
            }
            Some(Tok::RParen) => Err(ParseError {
                kind: ParseErrorKind::UnbalancedParen,
                position: at,
            }),
            Some(t) => Err(ParseError {
                kind: ParseErrorKind::UnexpectedToken(t.to_string()),
                position: at,
            }),
            None => Err(ParseError {
                kind: ParseErrorKind::UnexpectedEnd,
                position: at,
            }),
        }
    }
}

/// Parse formula text, expanding derived connectives into core syntax.
///
/// Precedence from tightest to loosest: `~`; `(.)` `(-)`; `/\`;
/// `(+)` `\/`; `->` `<->` (right-associative).
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let end = text.chars().count();
    if toks.is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::Empty,
            position: 0,
        });
    }
    let mut p = Parser { toks, pos: 0, end };
    let f = p.implication()?;
    match p.peek() {
        None => Ok(f),
        Some(Tok::RParen) => Err(p.err(ParseErrorKind::UnbalancedParen)),
        Some(t) => Err(p.err(ParseErrorKind::UnexpectedToken(t.to_string()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Formula {
        Formula::var(i)
    }

    #[test]
    fn parses_core_syntax() {
        assert_eq!(parse("X1 -> X1").unwrap(), x(1).implies(x(1)));
        assert_eq!(parse("~X1").unwrap(), x(1).not());
        assert_eq!(parse("0").unwrap(), Formula::Bottom);
        assert_eq!(parse("1").unwrap(), Formula::Bottom.not());
        assert_eq!(parse("  X12->~ 0 ").unwrap(), x(12).implies(Formula::Bottom.not()));
    }

    #[test]
    fn half_axiom_desugars() {
        let f = parse("(~X1 -> X1) /\\ (X1 -> ~X1)").unwrap();
        let expected = x(1).not().implies(x(1)).and(x(1).implies(x(1).not()));
        assert_eq!(f, expected);
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(
            parse("X1 -> X2 -> X3").unwrap(),
            x(1).implies(x(2).implies(x(3)))
        );
    }

    #[test]
    fn precedence_levels() {
        // ~ binds tighter than (.), which binds tighter than /\ ...
        assert_eq!(
            parse("~X1 (.) X2 /\\ X3 (+) X4 -> X5").unwrap(),
            x(1).not().odot(x(2)).and(x(3)).oplus(x(4)).implies(x(5))
        );
        assert_eq!(
            parse("X1 (-) X2 (.) X3").unwrap(),
            x(1).ominus(x(2)).odot(x(3))
        );
        assert_eq!(parse("X1 \\/ X2 (+) X3").unwrap(), x(1).or(x(2)).oplus(x(3)));
        assert_eq!(
            parse("X1 <-> X2 -> X3").unwrap(),
            x(1).iff(x(2).implies(x(3)))
        );
    }

    #[test]
    fn reports_errors_with_positions() {
        let e = parse("X1 -> ").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(e.position, 6);

        let e = parse("(X1 -> X2").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnbalancedParen);
        assert_eq!(e.position, 0);

        let e = parse("X1 -> X2)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnbalancedParen);
        assert_eq!(e.position, 8);

        let e = parse("X1 & X2").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownToken("&".into()));
        assert_eq!(e.position, 3);

        let e = parse("X0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BadVariable("X0".into()));

        let e = parse("X1 X2").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedToken("X2".into()));
        assert_eq!(e.position, 3);

        assert_eq!(parse("   ").unwrap_err().kind, ParseErrorKind::Empty);
        assert!(matches!(
            parse("12").unwrap_err().kind,
            ParseErrorKind::UnknownToken(_)
        ));
    }
}
