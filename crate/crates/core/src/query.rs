//! Boolean keyword protocol: parsing, rendering and matching.
//!
//! Grammar:
//!
//! ```text
//! query  := clause ('OR' clause)*
//! clause := term+                  adjacency is conjunction
//! term   := '-'? (WORD | QUOTED)
//! ```
//!
//! `OR` is only an operator in exact uppercase. A quoted term opens with
//! `'` or `"` and closes at the first matching quote that is followed by
//! whitespace or the end of input, so `':'('` is the literal `:'(`.
//!
//! Unquoted terms match whole tokens (maximal runs of letters or digits)
//! case-insensitively; a term spanning several tokens (`covid-19`) must
//! match them contiguously. Quoted terms match as case-insensitive
//! substrings of the raw text.

use std::fmt;

use thiserror::Error;

/// The keyword protocol used to collect the health corpus.
pub const BUILTIN_PROTOCOL: &str = "rumah OR sakit OR rawat OR inap OR demam OR panas -cuaca OR berdarah OR pendarahan OR trombosit OR badan OR muntah OR badan OR tua OR ':'('";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("query parse error at byte {offset}: {reason}")]
pub struct QueryError {
    pub offset: usize,
    pub reason: String,
}

impl QueryError {
    fn new(offset: usize, reason: impl Into<String>) -> Self {
        QueryError {
            offset,
            reason: reason.into(),
        }
    }
}

const QUOTES: [char; 2] = ['"', '\''];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    text: String,
    negated: bool,
    quoted: bool,
}

impl Term {
    /// An unquoted term. It must be a single whitespace-free word with at
    /// least one letter or digit, and must not read as an operator, a
    /// negation or a quoted term.
    pub fn word(text: impl Into<String>, negated: bool) -> Result<Self, String> {
        let text = text.into();
        if text.is_empty() {
            return Err("empty term".into());
        }
        if text.chars().any(char::is_whitespace) {
            return Err(format!("unquoted term `{text}` contains whitespace"));
        }
        if text == "OR" {
            return Err("`OR` is an operator, quote it to search for it".into());
        }
        if text.starts_with('-') || text.starts_with(QUOTES) {
            return Err(format!(
                "unquoted term `{text}` starts with an operator character"
            ));
        }
        if tokens(&text).next().is_none() {
            return Err(format!(
                "term `{text}` has no letters or digits, quote it to match it literally"
            ));
        }
        Ok(Term {
            text,
            negated,
            quoted: false,
        })
    }

    /// A quoted literal. Any non-empty text is accepted as long as one of
    /// the two quote characters can delimit it.
    pub fn quoted(text: impl Into<String>, negated: bool) -> Result<Self, String> {
        let text = text.into();
        if text.is_empty() {
            return Err("empty quoted term".into());
        }
        let term = Term {
            text,
            negated,
            quoted: true,
        };
        if term.delimiter().is_none() {
            return Err(format!("quoted term `{}` cannot be delimited", term.text));
        }
        Ok(term)
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn is_quoted(&self) -> bool {
        self.quoted
    }

    fn delimiter(&self) -> Option<char> {
        QUOTES.into_iter().find(|&q| !closes_early(&self.text, q))
    }

    fn occurs_in(&self, text: &PreparedText) -> bool {
        if self.quoted {
            text.lowered.contains(&self.text.to_lowercase())
        } else {
            let needle: Vec<String> = tokens(&self.text).map(str::to_lowercase).collect();
            text.tokens
                .windows(needle.len())
                .any(|w| w == needle.as_slice())
        }
    }
}

/// True if `q` followed by whitespace occurs inside `content`, which would
/// end a quoted literal before its real end.
fn closes_early(content: &str, q: char) -> bool {
    let mut chars = content.chars().peekable();
    while let Some(c) = chars.next() {
        if c == q && chars.peek().is_some_and(|n| n.is_whitespace()) {
            return true;
        }
    }
    false
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("-")?;
        }
        match self.quoted.then(|| self.delimiter()).flatten() {
            Some(q) => write!(f, "{q}{}{q}", self.text),
            None => f.write_str(&self.text),
        }
    }
}

/// A conjunction of terms. Holds at least one non-negated term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    terms: Vec<Term>,
}

impl Clause {
    pub fn new(terms: Vec<Term>) -> Result<Self, String> {
        if terms.is_empty() {
            return Err("empty clause".into());
        }
        if terms.iter().all(|t| t.negated) {
            return Err("clause has only negated terms".into());
        }
        Ok(Clause { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    fn matches(&self, text: &PreparedText) -> bool {
        self.terms.iter().all(|t| t.occurs_in(text) != t.negated)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A disjunction of clauses.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Query {
    clauses: Vec<Clause>,
}

impl Query {
    pub fn new(clauses: Vec<Clause>) -> Result<Self, String> {
        if clauses.is_empty() {
            return Err("query has no clauses".into());
        }
        Ok(Query { clauses })
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Returns a copy with `clause` appended as a further alternative.
    pub fn or(&self, clause: Clause) -> Query {
        let mut clauses = self.clauses.clone();
        clauses.push(clause);
        Query { clauses }
    }

    pub fn matches(&self, text: &str) -> bool {
        let prepared = PreparedText::new(text);
        self.clauses.iter().any(|c| c.matches(&prepared))
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" OR ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Query {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_query(s)
    }
}

pub fn matches(query: &Query, text: &str) -> bool {
    query.matches(text)
}

/// Renders a query in protocol syntax. `parse_query(&render(q)) == Ok(q)`.
pub fn render(query: &Query) -> String {
    query.to_string()
}

pub fn default_protocol() -> Query {
    parse_query(BUILTIN_PROTOCOL).expect("built-in protocol parses")
}

struct PreparedText {
    lowered: String,
    tokens: Vec<String>,
}

impl PreparedText {
    fn new(text: &str) -> Self {
        PreparedText {
            lowered: text.to_lowercase(),
            tokens: tokens(text).map(str::to_lowercase).collect(),
        }
    }
}

/// Maximal runs of letters or digits.
fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
}

pub fn parse_query(input: &str) -> Result<Query, QueryError> {
    let mut parser = Parser { input, pos: 0 };
    let mut clauses = Vec::new();
    let mut current: Vec<Term> = Vec::new();
    let mut clause_start = 0;

    loop {
        parser.skip_ws();
        let Some(c) = parser.peek() else { break };
        let start = parser.pos;
        if current.is_empty() {
            clause_start = start;
        }

        let negated = c == '-';
        if negated {
            parser.bump(c);
            match parser.peek() {
                None => return Err(QueryError::new(start, "dangling `-`")),
                Some(n) if n.is_whitespace() => return Err(QueryError::new(start, "dangling `-`")),
                _ => {}
            }
        }

        let term = match parser.peek() {
            Some(q) if QUOTES.contains(&q) => {
                let text = parser.quoted(q)?;
                Term::quoted(text, negated).map_err(|r| QueryError::new(start, r))?
            }
            _ => {
                let word = parser.word();
                if word == "OR" {
                    if negated {
                        return Err(QueryError::new(start, "`OR` cannot be negated"));
                    }
                    if current.is_empty() {
                        let reason = if clauses.is_empty() {
                            "leading `OR`"
                        } else {
                            "`OR` without a term before it"
                        };
                        return Err(QueryError::new(start, reason));
                    }
                    let terms = std::mem::take(&mut current);
                    clauses.push(Clause::new(terms).map_err(|r| QueryError::new(clause_start, r))?);
                    continue;
                }
                Term::word(word, negated).map_err(|r| QueryError::new(start, r))?
            }
        };
        current.push(term);
    }

    if current.is_empty() {
        return Err(if clauses.is_empty() {
            QueryError::new(0, "empty query")
        } else {
            QueryError::new(input.len(), "trailing `OR`")
        });
    }
    clauses.push(Clause::new(current).map_err(|r| QueryError::new(clause_start, r))?);
    Ok(Query { clauses })
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn word(&mut self) -> &'a str {
        let rest = self.rest();
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    /// Reads a quoted literal starting at the opening quote `q`.
    fn quoted(&mut self, q: char) -> Result<&'a str, QueryError> {
        let open = self.pos;
        let body_start = open + q.len_utf8();
        let body = &self.input[body_start..];
        let mut iter = body.char_indices().peekable();
        while let Some((i, c)) = iter.next() {
            let terminal = iter.peek().is_none_or(|&(_, n)| n.is_whitespace());
            if c == q && terminal {
                self.pos = body_start + i + q.len_utf8();
                return Ok(&body[..i]);
            }
        }
        Err(QueryError::new(open, "unbalanced quote"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn clause_texts(q: &Query) -> Vec<Vec<(String, bool, bool)>> {
        q.clauses()
            .iter()
            .map(|c| {
                c.terms()
                    .iter()
                    .map(|t| (t.text().to_string(), t.is_negated(), t.is_quoted()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn protocol_has_fourteen_clauses() {
        let q = default_protocol();
        assert_eq!(q.clauses().len(), 14);
        let texts = clause_texts(&q);
        let expected_single = [
            "rumah",
            "sakit",
            "rawat",
            "inap",
            "demam",
            "",
            "berdarah",
            "pendarahan",
            "trombosit",
            "badan",
            "muntah",
            "badan",
            "tua",
        ];
        for (i, word) in expected_single.iter().enumerate() {
            if i == 5 {
                continue;
            }
            assert_eq!(
                texts[i],
                vec![(word.to_string(), false, false)],
                "clause {}",
                i + 1
            );
        }
        assert_eq!(
            texts[5],
            vec![
                ("panas".into(), false, false),
                ("cuaca".into(), true, false)
            ]
        );
        assert_eq!(texts[13], vec![(":'(".into(), false, true)]);
    }

    #[test]
    fn protocol_round_trips() {
        let q = default_protocol();
        assert_eq!(parse_query(&render(&q)).unwrap(), q);
    }

    #[test]
    fn small_queries() {
        let q = parse_query("demam OR panas -cuaca").unwrap();
        assert_eq!(q.clauses().len(), 2);
        assert_eq!(clause_texts(&q)[1][1], ("cuaca".into(), true, false));

        let q = parse_query("a").unwrap();
        assert_eq!(clause_texts(&q), vec![vec![("a".into(), false, false)]]);
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("-cuaca", 0),
            ("", 0),
            ("   ", 0),
            ("OR a", 0),
            ("a OR", 4),
            ("a OR OR b", 5),
            ("a 'oops", 2),
            ("a OR -b -c", 5),
            ("a - b", 2),
            ("a -OR b", 2),
            ("a :)", 2),
            ("a ''", 2),
        ];
        for (input, offset) in cases {
            let err = parse_query(input).unwrap_err();
            assert_eq!(err.offset, offset, "{input}: {err}");
        }
    }

    #[test]
    fn lowercase_or_is_a_term() {
        let q = parse_query("a or b").unwrap();
        assert_eq!(q.clauses().len(), 1);
        assert_eq!(q.clauses()[0].terms().len(), 3);
    }

    #[test]
    fn quoted_may_contain_spaces_and_or() {
        let q = parse_query(r#""sakit OR hati" OR x"#).unwrap();
        assert_eq!(
            clause_texts(&q)[0],
            vec![("sakit OR hati".into(), false, true)]
        );
        assert!(q.matches("aku SAKIT or hati"));
        assert!(!q.matches("sakit hati"));
    }

    #[test]
    fn matching_semantics() {
        let q = default_protocol();
        assert!(q.matches("Aku demam tinggi sejak kemarin"));
        assert!(!q.matches("panas banget cuaca hari ini"));
        assert!(q.matches("panas banget hari ini"));
        assert!(q.matches("sedih banget :'("));
        assert!(!q.matches("sedih banget :("));
        // whole-token matching only
        assert!(!q.matches("rumahnya jauh"));
        assert!(q.matches("RUMAH-SAKIT penuh"));
    }

    #[test]
    fn multi_token_term_is_contiguous() {
        let q = parse_query("covid-19").unwrap();
        assert!(q.matches("kasus COVID 19 naik"));
        assert!(!q.matches("covid naik 19"));
    }

    fn word() -> impl Strategy<Value = String> {
        "[a-z][a-z0-9]{0,6}".prop_filter("operator", |w| w != "or")
    }

    fn term() -> impl Strategy<Value = Term> {
        let plain = (word(), any::<bool>()).prop_map(|(w, n)| Term::word(w, n).unwrap());
        let quoted = ("[a-z :'\"()!,.-]{1,8}", any::<bool>())
            .prop_filter_map("undelimitable", |(t, n)| Term::quoted(t, n).ok());
        prop_oneof![3 => plain, 1 => quoted]
    }

    fn clause() -> impl Strategy<Value = Clause> {
        (word(), prop::collection::vec(term(), 0..4), 0usize..4).prop_map(|(head, rest, at)| {
            let mut terms = rest;
            let at = at.min(terms.len());
            terms.insert(at, Term::word(head, false).unwrap());
            Clause::new(terms).unwrap()
        })
    }

    pub(crate) fn query() -> impl Strategy<Value = Query> {
        prop::collection::vec(clause(), 1..6).prop_map(|c| Query::new(c).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn render_parse_round_trip(q in query()) {
            prop_assert_eq!(parse_query(&render(&q)).unwrap(), q);
        }

        #[test]
        fn adding_a_clause_is_monotone(q in query(), extra in clause(), text in "[a-z :'(]{0,40}") {
            if q.matches(&text) {
                prop_assert!(q.or(extra).matches(&text));
            }
        }

        #[test]
        fn negated_word_blocks_clause(w in word(), text in "[a-z ]{0,30}") {
            let clause = Clause::new(vec![
                Term::word("x", false).unwrap(),
                Term::word(w.clone(), true).unwrap(),
            ]).unwrap();
            let q = Query::new(vec![clause]).unwrap();
            let with_w = format!("x {text} {w}");
            prop_assert!(!q.matches(&with_w));
        }

        #[test]
        fn case_insensitive(q in query(), text in "[a-zA-Z :'(]{0,40}") {
            let m = q.matches(&text);
            prop_assert_eq!(q.matches(&text.to_uppercase()), m);
            prop_assert_eq!(q.matches(&text.to_lowercase()), m);
        }
    }
}
