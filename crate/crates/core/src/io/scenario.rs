//! The scenario file format: parsing with positioned diagnostics, and the
//! canonical formatter.
//!
//! A file declares exactly one scenario:
//!
//! ```text
//! scenario broughton
//!   kind polynomial
//!   dim 2
//!   deg 3
//!   chi_gen auto
//!   inf_ind_stratum label=q1 chi=1 zeta@0=[1:-1]
//!   inf_ind_stratum label=q2 chi=1
//!   value 0
//!     chi_fiber 1
//!     fiber_stratum label=axis chi=1 smooth
//!     fiber_stratum label=hyperbola chi=0 smooth
//!   end
//! end
//! ```
//!
//! Indentation and line breaks are free; only token order matters. The
//! statement set depends on the declared kind, so `kind` must come before
//! any kind-specific statement. Chi sums, label uniqueness, value
//! references and Milnor number consistency are all checked before a
//! scenario is returned, each failure pointing at the offending token.

use std::collections::{BTreeMap, BTreeSet};

use crate::acampo::{MultStratum, NCModel};
use crate::euler::Stratum;
use crate::global::{
    ChiGen, FiberData, FiberStratum, FiberZeta, LocalZetaData, MeromorphicScenario, ProjValue,
    ScenarioError,
};
use crate::polynomial::{CapData, HypersurfaceData, PolyCrit, PolyFiberData, PolynomialScenario};
use crate::zeta::{parse_zeta, CyclotomicProduct};

use super::{DiagnosticCode, ParseError};

/// One parsed scenario file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioFile {
    pub name: String,
    pub body: ScenarioBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScenarioBody {
    Meromorphic(MeromorphicScenario),
    Polynomial {
        scenario: PolynomialScenario,
        hypersurface: Option<HypersurfaceData>,
    },
    Germ(NCModel),
}

impl ScenarioFile {
    pub fn kind_name(&self) -> &'static str {
        match &self.body {
            ScenarioBody::Meromorphic(_) => "meromorphic",
            ScenarioBody::Polynomial { .. } => "polynomial",
            ScenarioBody::Germ(_) => "germ",
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    text: String,
    line: u32,
    col: u32,
}

impl Token {
    fn error(&self, code: DiagnosticCode, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col, code, message)
    }
}

fn tokenize(input: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for (li, line) in input.lines().enumerate() {
        let mut current: Option<(u32, String)> = None;
        let mut col = 0u32;
        for ch in line.chars() {
            col += 1;
            if ch == '#' {
                break;
            }
            if ch.is_whitespace() {
                if let Some((start, text)) = current.take() {
                    tokens.push(Token {
                        text,
                        line: li as u32 + 1,
                        col: start,
                    });
                }
            } else if let Some((_, text)) = &mut current {
                text.push(ch);
            } else {
                current = Some((col, ch.to_string()));
            }
        }
        if let Some((start, text)) = current {
            tokens.push(Token {
                text,
                line: li as u32 + 1,
                col: start,
            });
        }
    }
    tokens
}

struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn expect(&mut self, what: &str) -> Result<Token, ParseError> {
        self.next().ok_or_else(|| {
            let (line, col) = self
                .tokens
                .last()
                .map(|t| (t.line, t.col + t.text.chars().count() as u32))
                .unwrap_or((1, 1));
            ParseError::new(
                line,
                col,
                DiagnosticCode::Syntax,
                format!("unexpected end of input, expected {what}"),
            )
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Meromorphic,
    Polynomial,
    Germ,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Meromorphic => "meromorphic",
            Kind::Polynomial => "polynomial",
            Kind::Germ => "germ",
        }
    }
}

/// A split `key=value` token, or the bare word `smooth`.
struct Pair {
    token: Token,
    key: String,
    value: String,
}

impl Pair {
    /// Column of the first character of the value part.
    fn value_col(&self) -> u32 {
        self.token.col + self.key.chars().count() as u32 + 1
    }
}

#[derive(Default)]
struct ValueBlock {
    token_line: u32,
    token_col: u32,
    chi_fiber: Option<i64>,
    strata: Vec<FiberStratum>,
    crits: Vec<PolyCrit>,
    labels: Vec<(String, Token)>,
}

struct CapBlock {
    token: Token,
    chi: i64,
    strata: Vec<FiberStratum>,
}

struct Parser {
    cur: Cursor,
    name: String,
    scenario_pos: (u32, u32),
    kind: Option<Kind>,
    ints: BTreeMap<&'static str, (Token, i64)>,
    chi_gen: Option<(Token, ChiGen)>,
    ind_strata: Vec<(Stratum, LocalZetaData)>,
    ind_labels: Vec<(String, Token)>,
    inf_cover: Vec<(Stratum, CyclotomicProduct)>,
    nc_strata: Vec<MultStratum>,
    values: BTreeMap<ProjValue, ValueBlock>,
    hyp_seen: bool,
    hyp_chi_cap_gen: Option<i64>,
    hyp_caps: BTreeMap<ProjValue, CapBlock>,
    hyp_inf: Vec<(Stratum, LocalZetaData)>,
    value_refs: Vec<(ProjValue, Token)>,
    crit_tokens: Vec<(ProjValue, String, Token)>,
}

/// Parses one scenario from `input`; trailing tokens are an error.
pub fn parse_scenario(input: &str) -> Result<ScenarioFile, ParseError> {
    let mut cur = Cursor {
        tokens: tokenize(input),
        pos: 0,
    };
    let kw = cur.expect("`scenario`")?;
    if kw.text != "scenario" {
        return Err(kw.error(
            DiagnosticCode::Syntax,
            format!("expected `scenario`, got `{}`", kw.text),
        ));
    }
    let name_tok = cur.expect("a scenario name")?;
    if name_tok.text == "end" || name_tok.text.contains('=') {
        return Err(name_tok.error(DiagnosticCode::Syntax, "expected a scenario name"));
    }
    let mut parser = Parser {
        cur,
        name: name_tok.text.clone(),
        scenario_pos: (kw.line, kw.col),
        kind: None,
        ints: BTreeMap::new(),
        chi_gen: None,
        ind_strata: Vec::new(),
        ind_labels: Vec::new(),
        inf_cover: Vec::new(),
        nc_strata: Vec::new(),
        values: BTreeMap::new(),
        hyp_seen: false,
        hyp_chi_cap_gen: None,
        hyp_caps: BTreeMap::new(),
        hyp_inf: Vec::new(),
        value_refs: Vec::new(),
        crit_tokens: Vec::new(),
    };
    parser.run()?;
    if let Some(extra) = parser.cur.peek() {
        return Err(extra.error(
            DiagnosticCode::Syntax,
            format!("expected end of input, got `{}`", extra.text),
        ));
    }
    parser.finish()
}

impl Parser {
    fn scenario_error(&self, code: DiagnosticCode, message: impl Into<String>) -> ParseError {
        ParseError::new(self.scenario_pos.0, self.scenario_pos.1, code, message)
    }

    fn require_kind(&self, wanted: &[Kind], tok: &Token) -> Result<Kind, ParseError> {
        let Some(kind) = self.kind else {
            return Err(tok.error(
                DiagnosticCode::MissingField,
                format!("`kind` must be declared before `{}`", tok.text),
            ));
        };
        if !wanted.contains(&kind) {
            return Err(tok.error(
                DiagnosticCode::UnknownKeyword,
                format!("`{}` does not apply to {} scenarios", tok.text, kind.name()),
            ));
        }
        Ok(kind)
    }

    fn parse_int_token(&self, tok: &Token, what: &str) -> Result<i64, ParseError> {
        tok.text.parse::<i64>().map_err(|_| {
            tok.error(
                DiagnosticCode::BadInt,
                format!("expected an integer for {what}, got `{}`", tok.text),
            )
        })
    }

    fn set_int_field(&mut self, key: &'static str, kw: Token) -> Result<(), ParseError> {
        let val = self.cur.expect(&format!("an integer after `{key}`"))?;
        let parsed = self.parse_int_token(&val, key)?;
        if self.ints.insert(key, (kw.clone(), parsed)).is_some() {
            return Err(kw.error(
                DiagnosticCode::DuplicateField,
                format!("`{key}` declared twice"),
            ));
        }
        Ok(())
    }

    /// Collects the `key=value` tokens (and the bare word `smooth`)
    /// following a stratum-like keyword.
    fn pairs(&mut self) -> Vec<Pair> {
        let mut out = Vec::new();
        while let Some(tok) = self.cur.peek() {
            if tok.text == "smooth" {
                let token = self.cur.next().expect("peeked");
                out.push(Pair {
                    token,
                    key: "smooth".into(),
                    value: String::new(),
                });
            } else if let Some((key, value)) = tok.text.split_once('=') {
                let (key, value) = (key.to_string(), value.to_string());
                let token = self.cur.next().expect("peeked");
                out.push(Pair { token, key, value });
            } else {
                break;
            }
        }
        out
    }

    fn parse_pair_i64(&self, pair: &Pair) -> Result<i64, ParseError> {
        pair.value.parse::<i64>().map_err(|_| {
            ParseError::new(
                pair.token.line,
                pair.value_col(),
                DiagnosticCode::BadInt,
                format!("expected an integer for `{}`", pair.key),
            )
        })
    }

    fn parse_pair_u64(&self, pair: &Pair) -> Result<u64, ParseError> {
        pair.value.parse::<u64>().map_err(|_| {
            ParseError::new(
                pair.token.line,
                pair.value_col(),
                DiagnosticCode::BadInt,
                format!("expected a nonnegative integer for `{}`", pair.key),
            )
        })
    }

    fn parse_pair_zeta(&self, pair: &Pair) -> Result<CyclotomicProduct, ParseError> {
        parse_zeta(&pair.value).map_err(|err| {
            ParseError::new(
                pair.token.line,
                pair.value_col() + err.offset as u32,
                DiagnosticCode::BadZeta,
                err.kind.to_string(),
            )
        })
    }

    fn parse_pair_label(&self, pair: &Pair) -> Result<String, ParseError> {
        if pair.value.is_empty() || pair.value.contains('=') {
            return Err(ParseError::new(
                pair.token.line,
                pair.value_col(),
                DiagnosticCode::Syntax,
                "a label must be a nonempty token without `=`",
            ));
        }
        Ok(pair.value.clone())
    }

    fn parse_pair_value_tag(&self, pair: &Pair) -> Result<ProjValue, ParseError> {
        if pair.value.is_empty() {
            return Err(ParseError::new(
                pair.token.line,
                pair.value_col(),
                DiagnosticCode::Syntax,
                "a value tag must be a nonempty token",
            ));
        }
        let value = ProjValue::finite(&pair.value);
        if self.kind == Some(Kind::Polynomial) && value.is_infinite() {
            return Err(ParseError::new(
                pair.token.line,
                pair.value_col(),
                DiagnosticCode::ReservedValue,
                "polynomial scenarios declare finite values only",
            ));
        }
        Ok(value)
    }

    fn duplicate_key(pair: &Pair) -> ParseError {
        pair.token.error(
            DiagnosticCode::DuplicateField,
            format!("`{}` given twice in one statement", pair.key),
        )
    }

    fn unknown_key(pair: &Pair, stmt: &str) -> ParseError {
        pair.token.error(
            DiagnosticCode::UnknownKeyword,
            format!("unknown key `{}` in `{stmt}`", pair.key),
        )
    }

    fn run(&mut self) -> Result<(), ParseError> {
        loop {
            let tok = self.cur.expect("a statement or `end`")?;
            match tok.text.as_str() {
                "end" => return Ok(()),
                "kind" => self.parse_kind_stmt(tok)?,
                "dim" => self.set_int_field("dim", tok)?,
                "deg" => {
                    self.require_kind(&[Kind::Polynomial], &tok)?;
                    self.set_int_field("deg", tok)?;
                }
                "chi_M" => {
                    self.require_kind(&[Kind::Meromorphic], &tok)?;
                    self.set_int_field("chi_M", tok)?;
                }
                "chi_ind" => {
                    self.require_kind(&[Kind::Meromorphic], &tok)?;
                    self.set_int_field("chi_ind", tok)?;
                }
                "chi_Q0" => {
                    self.require_kind(&[Kind::Meromorphic], &tok)?;
                    self.set_int_field("chi_Q0", tok)?;
                }
                "chi_gen" => {
                    self.require_kind(&[Kind::Meromorphic, Kind::Polynomial], &tok)?;
                    self.parse_chi_gen(tok)?;
                }
                "ind_stratum" => {
                    self.require_kind(&[Kind::Meromorphic], &tok)?;
                    self.parse_ind_stratum(tok)?;
                }
                "inf_ind_stratum" => {
                    self.require_kind(&[Kind::Polynomial], &tok)?;
                    self.parse_ind_stratum(tok)?;
                }
                "inf_cover_stratum" => {
                    self.require_kind(&[Kind::Polynomial], &tok)?;
                    self.parse_inf_cover_stratum(tok)?;
                }
                "nc_stratum" => {
                    self.require_kind(&[Kind::Germ], &tok)?;
                    self.parse_nc_stratum(tok)?;
                }
                "value" => {
                    self.require_kind(&[Kind::Meromorphic, Kind::Polynomial], &tok)?;
                    self.parse_value_block(tok)?;
                }
                "hypersurface" => {
                    self.require_kind(&[Kind::Polynomial], &tok)?;
                    self.parse_hypersurface_block(tok)?;
                }
                other => {
                    return Err(tok.error(
                        DiagnosticCode::UnknownKeyword,
                        format!("unknown statement `{other}`"),
                    ))
                }
            }
        }
    }

    fn parse_kind_stmt(&mut self, kw: Token) -> Result<(), ParseError> {
        if self.kind.is_some() {
            return Err(kw.error(DiagnosticCode::DuplicateField, "`kind` declared twice"));
        }
        let val = self.cur.expect("a scenario kind")?;
        self.kind = Some(match val.text.as_str() {
            "meromorphic" => Kind::Meromorphic,
            "polynomial" => Kind::Polynomial,
            "germ" => Kind::Germ,
            other => {
                return Err(val.error(
                    DiagnosticCode::Syntax,
                    format!("expected `meromorphic`, `polynomial` or `germ`, got `{other}`"),
                ))
            }
        });
        Ok(())
    }

    fn parse_chi_gen(&mut self, kw: Token) -> Result<(), ParseError> {
        if self.chi_gen.is_some() {
            return Err(kw.error(
                DiagnosticCode::DuplicateField,
                "`chi_gen` declared twice",
            ));
        }
        let val = self.cur.expect("an integer or `auto` after `chi_gen`")?;
        let parsed = if val.text == "auto" {
            ChiGen::Auto
        } else {
            ChiGen::Explicit(self.parse_int_token(&val, "chi_gen")?)
        };
        self.chi_gen = Some((kw, parsed));
        Ok(())
    }

    fn check_new_ind_label(&mut self, label: &str, tok: &Token) -> Result<(), ParseError> {
        if self.ind_labels.iter().any(|(l, _)| l == label) {
            return Err(tok.error(
                DiagnosticCode::DuplicateLabel,
                format!("duplicate stratum label `{label}`"),
            ));
        }
        self.ind_labels.push((label.to_string(), tok.clone()));
        Ok(())
    }

    fn parse_ind_stratum(&mut self, kw: Token) -> Result<(), ParseError> {
        let stmt = kw.text.clone();
        let mut label = None;
        let mut chi = None;
        let mut data = LocalZetaData::trivial();
        let mut seen_tags = BTreeSet::new();
        for pair in self.pairs() {
            match pair.key.as_str() {
                "label" if label.is_none() => label = Some(self.parse_pair_label(&pair)?),
                "chi" if chi.is_none() => chi = Some(self.parse_pair_i64(&pair)?),
                "label" | "chi" => return Err(Self::duplicate_key(&pair)),
                key if key.starts_with("zeta@") => {
                    let tag_pair = Pair {
                        token: pair.token.clone(),
                        key: "zeta@".into(),
                        value: key["zeta@".len()..].to_string(),
                    };
                    let value = self.parse_pair_value_tag(&tag_pair)?;
                    if !seen_tags.insert(value.clone()) {
                        return Err(Self::duplicate_key(&pair));
                    }
                    let zeta = self.parse_pair_zeta(&pair)?;
                    self.value_refs.push((value.clone(), pair.token.clone()));
                    data.set(value, zeta);
                }
                _ => return Err(Self::unknown_key(&pair, &stmt)),
            }
        }
        let label = label
            .ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `label=`"))?;
        let chi = chi.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `chi=`"))?;
        self.check_new_ind_label(&label, &kw)?;
        self.ind_strata.push((Stratum::new(label, chi), data));
        Ok(())
    }

    fn parse_inf_cover_stratum(&mut self, kw: Token) -> Result<(), ParseError> {
        let mut label = None;
        let mut chi = None;
        let mut zeta = None;
        for pair in self.pairs() {
            match pair.key.as_str() {
                "label" if label.is_none() => label = Some(self.parse_pair_label(&pair)?),
                "chi" if chi.is_none() => chi = Some(self.parse_pair_i64(&pair)?),
                "zeta_inf" if zeta.is_none() => zeta = Some(self.parse_pair_zeta(&pair)?),
                "label" | "chi" | "zeta_inf" => return Err(Self::duplicate_key(&pair)),
                _ => return Err(Self::unknown_key(&pair, "inf_cover_stratum")),
            }
        }
        let label = label
            .ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `label=`"))?;
        let chi = chi.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `chi=`"))?;
        let zeta =
            zeta.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `zeta_inf=`"))?;
        if self.inf_cover.iter().any(|(s, _)| s.label == label) {
            return Err(kw.error(
                DiagnosticCode::DuplicateLabel,
                format!("duplicate stratum label `{label}`"),
            ));
        }
        self.inf_cover.push((Stratum::new(label, chi), zeta));
        Ok(())
    }

    fn parse_nc_stratum(&mut self, kw: Token) -> Result<(), ParseError> {
        let mut label = None;
        let mut k = None;
        let mut l = None;
        let mut chi = None;
        for pair in self.pairs() {
            match pair.key.as_str() {
                "label" if label.is_none() => label = Some(self.parse_pair_label(&pair)?),
                "k" if k.is_none() => k = Some(self.parse_pair_u64(&pair)?),
                "l" if l.is_none() => l = Some(self.parse_pair_u64(&pair)?),
                "chi" if chi.is_none() => chi = Some(self.parse_pair_i64(&pair)?),
                "label" | "k" | "l" | "chi" => return Err(Self::duplicate_key(&pair)),
                _ => return Err(Self::unknown_key(&pair, "nc_stratum")),
            }
        }
        let k = k.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `k=`"))?;
        let l = l.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `l=`"))?;
        let chi = chi.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `chi=`"))?;
        let label = label.unwrap_or_else(|| format!("nc{}", self.nc_strata.len() + 1));
        if self.nc_strata.iter().any(|s| s.label == label) {
            return Err(kw.error(
                DiagnosticCode::DuplicateLabel,
                format!("duplicate stratum label `{label}`"),
            ));
        }
        self.nc_strata.push(MultStratum::new(label, k, l, chi));
        Ok(())
    }

    /// Parses one `fiber_stratum`, `crit` or `cap_stratum` tail shared
    /// shape: label, chi or mu, and a smooth/zeta alternative.
    fn parse_value_block(&mut self, kw: Token) -> Result<(), ParseError> {
        let tag = self.cur.expect("a value tag after `value`")?;
        let tag_pair = Pair {
            token: tag.clone(),
            key: String::new(),
            value: tag.text.clone(),
        };
        let value = self.parse_pair_value_tag(&tag_pair)?;
        if self.values.contains_key(&value) {
            return Err(tag.error(
                DiagnosticCode::DuplicateValue,
                format!("value {value} declared twice"),
            ));
        }
        let mut block = ValueBlock {
            token_line: kw.line,
            token_col: kw.col,
            ..ValueBlock::default()
        };
        loop {
            let tok = self.cur.expect("a value statement or `end`")?;
            match tok.text.as_str() {
                "end" => break,
                "chi_fiber" => {
                    if block.chi_fiber.is_some() {
                        return Err(tok.error(
                            DiagnosticCode::DuplicateField,
                            "`chi_fiber` declared twice",
                        ));
                    }
                    let val = self.cur.expect("an integer after `chi_fiber`")?;
                    block.chi_fiber = Some(self.parse_int_token(&val, "chi_fiber")?);
                }
                "fiber_stratum" => {
                    let (label, chi, zeta) = self.parse_fiber_stratum_tail(&tok)?;
                    block.labels.push((label.clone(), tok.clone()));
                    block.strata.push(FiberStratum {
                        stratum: Stratum::new(label, chi),
                        zeta,
                    });
                }
                "crit" => {
                    if self.kind != Some(Kind::Polynomial) {
                        return Err(tok.error(
                            DiagnosticCode::UnknownKeyword,
                            "`crit` does not apply to meromorphic scenarios",
                        ));
                    }
                    let crit = self.parse_crit_tail(&tok)?;
                    block.labels.push((crit.label.clone(), tok.clone()));
                    self.crit_tokens
                        .push((value.clone(), crit.label.clone(), tok.clone()));
                    block.crits.push(crit);
                }
                other => {
                    return Err(tok.error(
                        DiagnosticCode::UnknownKeyword,
                        format!("unknown statement `{other}` in a value block"),
                    ))
                }
            }
        }
        let mut seen = BTreeSet::new();
        for (label, tok) in &block.labels {
            if !seen.insert(label.clone()) {
                return Err(tok.error(
                    DiagnosticCode::DuplicateLabel,
                    format!("duplicate stratum label `{label}`"),
                ));
            }
        }
        self.values.insert(value, block);
        Ok(())
    }

    fn parse_fiber_stratum_tail(
        &mut self,
        kw: &Token,
    ) -> Result<(String, i64, FiberZeta), ParseError> {
        let mut label = None;
        let mut chi = None;
        let mut zeta: Option<FiberZeta> = None;
        for pair in self.pairs() {
            match pair.key.as_str() {
                "label" if label.is_none() => label = Some(self.parse_pair_label(&pair)?),
                "chi" if chi.is_none() => chi = Some(self.parse_pair_i64(&pair)?),
                "smooth" if zeta.is_none() => zeta = Some(FiberZeta::Smooth),
                "zeta" if zeta.is_none() => {
                    zeta = Some(FiberZeta::Explicit(self.parse_pair_zeta(&pair)?))
                }
                "label" | "chi" => return Err(Self::duplicate_key(&pair)),
                "smooth" | "zeta" => {
                    return Err(pair.token.error(
                        DiagnosticCode::Syntax,
                        "a stratum is either `smooth` or `zeta=`, not both",
                    ))
                }
                _ => return Err(Self::unknown_key(&pair, "fiber_stratum")),
            }
        }
        let label = label
            .ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `label=`"))?;
        let chi = chi.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `chi=`"))?;
        let zeta = zeta.ok_or_else(|| {
            kw.error(DiagnosticCode::MissingField, "missing `smooth` or `zeta=`")
        })?;
        Ok((label, chi, zeta))
    }

    fn parse_crit_tail(&mut self, kw: &Token) -> Result<PolyCrit, ParseError> {
        let mut label = None;
        let mut mu = None;
        let mut zeta = None;
        for pair in self.pairs() {
            match pair.key.as_str() {
                "label" if label.is_none() => label = Some(self.parse_pair_label(&pair)?),
                "mu" if mu.is_none() => mu = Some(self.parse_pair_i64(&pair)?),
                "zeta" if zeta.is_none() => zeta = Some(self.parse_pair_zeta(&pair)?),
                "label" | "mu" | "zeta" => return Err(Self::duplicate_key(&pair)),
                _ => return Err(Self::unknown_key(&pair, "crit")),
            }
        }
        let label = label
            .ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `label=`"))?;
        let mu = mu.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `mu=`"))?;
        let zeta =
            zeta.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `zeta=`"))?;
        Ok(PolyCrit::new(label, mu, zeta))
    }

    fn parse_hypersurface_block(&mut self, kw: Token) -> Result<(), ParseError> {
        if self.hyp_seen {
            return Err(kw.error(
                DiagnosticCode::DuplicateField,
                "`hypersurface` declared twice",
            ));
        }
        self.hyp_seen = true;
        loop {
            let tok = self.cur.expect("a hypersurface statement or `end`")?;
            match tok.text.as_str() {
                "end" => break,
                "chi_cap_gen" => {
                    if self.hyp_chi_cap_gen.is_some() {
                        return Err(tok.error(
                            DiagnosticCode::DuplicateField,
                            "`chi_cap_gen` declared twice",
                        ));
                    }
                    let val = self.cur.expect("an integer after `chi_cap_gen`")?;
                    self.hyp_chi_cap_gen = Some(self.parse_int_token(&val, "chi_cap_gen")?);
                }
                "cap" => self.parse_cap(tok)?,
                "cap_stratum" => self.parse_cap_stratum(tok)?,
                "hyp_inf_stratum" => self.parse_hyp_inf_stratum(tok)?,
                other => {
                    return Err(tok.error(
                        DiagnosticCode::UnknownKeyword,
                        format!("unknown statement `{other}` in a hypersurface block"),
                    ))
                }
            }
        }
        Ok(())
    }

    fn parse_cap(&mut self, kw: Token) -> Result<(), ParseError> {
        let mut value = None;
        let mut chi = None;
        for pair in self.pairs() {
            match pair.key.as_str() {
                "value" if value.is_none() => {
                    let v = self.parse_pair_value_tag(&pair)?;
                    self.value_refs.push((v.clone(), pair.token.clone()));
                    value = Some(v);
                }
                "chi" if chi.is_none() => chi = Some(self.parse_pair_i64(&pair)?),
                "value" | "chi" => return Err(Self::duplicate_key(&pair)),
                _ => return Err(Self::unknown_key(&pair, "cap")),
            }
        }
        let value =
            value.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `value=`"))?;
        let chi = chi.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `chi=`"))?;
        if self.hyp_caps.contains_key(&value) {
            return Err(kw.error(
                DiagnosticCode::DuplicateValue,
                format!("cap for value {value} declared twice"),
            ));
        }
        self.hyp_caps.insert(
            value,
            CapBlock {
                token: kw,
                chi,
                strata: Vec::new(),
            },
        );
        Ok(())
    }

    fn parse_cap_stratum(&mut self, kw: Token) -> Result<(), ParseError> {
        let mut value = None;
        let mut label = None;
        let mut chi = None;
        let mut zeta: Option<FiberZeta> = None;
        for pair in self.pairs() {
            match pair.key.as_str() {
                "value" if value.is_none() => value = Some(self.parse_pair_value_tag(&pair)?),
                "label" if label.is_none() => label = Some(self.parse_pair_label(&pair)?),
                "chi" if chi.is_none() => chi = Some(self.parse_pair_i64(&pair)?),
                "smooth" if zeta.is_none() => zeta = Some(FiberZeta::Smooth),
                "zeta" if zeta.is_none() => {
                    zeta = Some(FiberZeta::Explicit(self.parse_pair_zeta(&pair)?))
                }
                "value" | "label" | "chi" => return Err(Self::duplicate_key(&pair)),
                "smooth" | "zeta" => {
                    return Err(pair.token.error(
                        DiagnosticCode::Syntax,
                        "a stratum is either `smooth` or `zeta=`, not both",
                    ))
                }
                _ => return Err(Self::unknown_key(&pair, "cap_stratum")),
            }
        }
        let value =
            value.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `value=`"))?;
        let label = label
            .ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `label=`"))?;
        let chi = chi.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `chi=`"))?;
        let zeta = zeta.ok_or_else(|| {
            kw.error(DiagnosticCode::MissingField, "missing `smooth` or `zeta=`")
        })?;
        let Some(cap) = self.hyp_caps.get_mut(&value) else {
            return Err(kw.error(
                DiagnosticCode::Syntax,
                format!("`cap_stratum` before `cap` for value {value}"),
            ));
        };
        if cap.strata.iter().any(|fs| fs.stratum.label == label) {
            return Err(kw.error(
                DiagnosticCode::DuplicateLabel,
                format!("duplicate stratum label `{label}`"),
            ));
        }
        cap.strata.push(FiberStratum {
            stratum: Stratum::new(label, chi),
            zeta,
        });
        Ok(())
    }

    fn parse_hyp_inf_stratum(&mut self, kw: Token) -> Result<(), ParseError> {
        let mut label = None;
        let mut chi = None;
        let mut data = LocalZetaData::trivial();
        let mut seen_tags = BTreeSet::new();
        for pair in self.pairs() {
            match pair.key.as_str() {
                "label" if label.is_none() => label = Some(self.parse_pair_label(&pair)?),
                "chi" if chi.is_none() => chi = Some(self.parse_pair_i64(&pair)?),
                "label" | "chi" => return Err(Self::duplicate_key(&pair)),
                key if key.starts_with("zeta@") => {
                    let tag_pair = Pair {
                        token: pair.token.clone(),
                        key: "zeta@".into(),
                        value: key["zeta@".len()..].to_string(),
                    };
                    let value = self.parse_pair_value_tag(&tag_pair)?;
                    if !seen_tags.insert(value.clone()) {
                        return Err(Self::duplicate_key(&pair));
                    }
                    let zeta = self.parse_pair_zeta(&pair)?;
                    self.value_refs.push((value.clone(), pair.token.clone()));
                    data.set(value, zeta);
                }
                _ => return Err(Self::unknown_key(&pair, "hyp_inf_stratum")),
            }
        }
        let label = label
            .ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `label=`"))?;
        let chi = chi.ok_or_else(|| kw.error(DiagnosticCode::MissingField, "missing `chi=`"))?;
        if self.hyp_inf.iter().any(|(s, _)| s.label == label) {
            return Err(kw.error(
                DiagnosticCode::DuplicateLabel,
                format!("duplicate stratum label `{label}`"),
            ));
        }
        self.hyp_inf.push((Stratum::new(label, chi), data));
        Ok(())
    }

    fn int_field(&self, key: &str) -> Option<i64> {
        self.ints.get(key).map(|(_, v)| *v)
    }

    fn require_int_field(&self, key: &str) -> Result<(Token, i64), ParseError> {
        self.ints.get(key).cloned().ok_or_else(|| {
            self.scenario_error(DiagnosticCode::MissingField, format!("missing field `{key}`"))
        })
    }

    fn require_positive_dim(&self) -> Result<u32, ParseError> {
        let (tok, dim) = self.require_int_field("dim")?;
        if dim < 1 || dim > u32::MAX as i64 {
            return Err(tok.error(DiagnosticCode::BadInt, "`dim` must be at least 1"));
        }
        Ok(dim as u32)
    }

    fn require_chi_gen(&self) -> Result<ChiGen, ParseError> {
        self.chi_gen
            .as_ref()
            .map(|(_, v)| *v)
            .ok_or_else(|| {
                self.scenario_error(DiagnosticCode::MissingField, "missing field `chi_gen`")
            })
    }

    fn check_value_refs(&self) -> Result<(), ParseError> {
        for (value, tok) in &self.value_refs {
            if !self.values.contains_key(value) {
                return Err(tok.error(
                    DiagnosticCode::UndeclaredValue,
                    format!("value {value} is not declared in this scenario"),
                ));
            }
        }
        Ok(())
    }

    fn check_cross_labels(&self) -> Result<(), ParseError> {
        for block in self.values.values() {
            for (label, tok) in &block.labels {
                if self.ind_labels.iter().any(|(l, _)| l == label) {
                    return Err(tok.error(
                        DiagnosticCode::DuplicateLabel,
                        format!("duplicate stratum label `{label}`"),
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_value_sums(&self, count_crits: bool) -> Result<(), ParseError> {
        for (value, block) in &self.values {
            let declared = block.chi_fiber.ok_or_else(|| {
                ParseError::new(
                    block.token_line,
                    block.token_col,
                    DiagnosticCode::MissingField,
                    format!("value {value} has no `chi_fiber`"),
                )
            })?;
            let mut sum: i64 = block.strata.iter().map(|fs| fs.stratum.chi).sum();
            if count_crits {
                sum += block.crits.len() as i64;
            }
            if sum != declared {
                return Err(ParseError::new(
                    block.token_line,
                    block.token_col,
                    DiagnosticCode::ChiSumMismatch,
                    format!(
                        "strata of value {value} sum to chi {sum}, declared chi_fiber is {declared}"
                    ),
                ));
            }
        }
        Ok(())
    }

    fn map_scenario_error(&self, err: ScenarioError) -> ParseError {
        let code = match &err {
            ScenarioError::DuplicateLabel(_) => DiagnosticCode::DuplicateLabel,
            ScenarioError::IndChiMismatch { .. }
            | ScenarioError::FiberChiMismatch { .. }
            | ScenarioError::CapChiMismatch { .. } => DiagnosticCode::ChiSumMismatch,
            ScenarioError::UndeclaredValueData { .. } | ScenarioError::CapUndeclaredValue(_) => {
                DiagnosticCode::UndeclaredValue
            }
            ScenarioError::InfiniteValue(_) => DiagnosticCode::ReservedValue,
            ScenarioError::MuZetaMismatch { .. } => DiagnosticCode::MuZetaMismatch,
            ScenarioError::InfinityCoverIncomplete { .. } => DiagnosticCode::InfCoverIncomplete,
            ScenarioError::ZeroDimension | ScenarioError::ZeroDegree => DiagnosticCode::BadInt,
            _ => DiagnosticCode::Syntax,
        };
        self.scenario_error(code, err.to_string())
    }

    fn finish(mut self) -> Result<ScenarioFile, ParseError> {
        let kind = self.kind.ok_or_else(|| {
            self.scenario_error(DiagnosticCode::MissingField, "missing field `kind`")
        })?;
        self.check_value_refs()?;
        self.check_cross_labels()?;
        let body = match kind {
            Kind::Germ => {
                if let Some((tok, _)) = self.ints.get("dim") {
                    let _ = tok;
                }
                let model = NCModel::new(std::mem::take(&mut self.nc_strata))
                    .map_err(|e| self.scenario_error(DiagnosticCode::DuplicateLabel, e.to_string()))?;
                ScenarioBody::Germ(model)
            }
            Kind::Meromorphic => {
                let n = self.require_positive_dim()?;
                let (_, chi_m) = self.require_int_field("chi_M")?;
                let (chi_ind_tok, chi_ind) = self.require_int_field("chi_ind")?;
                let chi_q0 = self.int_field("chi_Q0");
                let chi_gen = self.require_chi_gen()?;
                if chi_gen == ChiGen::Auto && chi_q0.is_none() {
                    let (tok, _) = self.chi_gen.as_ref().expect("checked above");
                    return Err(tok.error(
                        DiagnosticCode::MissingField,
                        "`chi_gen auto` needs `chi_Q0`",
                    ));
                }
                self.check_value_sums(false)?;
                let ind_sum: i64 = self.ind_strata.iter().map(|(s, _)| s.chi).sum();
                if ind_sum != chi_ind {
                    return Err(chi_ind_tok.error(
                        DiagnosticCode::ChiSumMismatch,
                        format!(
                            "indeterminacy strata sum to chi {ind_sum}, declared chi_ind is {chi_ind}"
                        ),
                    ));
                }
                let values = std::mem::take(&mut self.values)
                    .into_iter()
                    .map(|(value, block)| {
                        (
                            value,
                            FiberData {
                                chi_fiber: block.chi_fiber.expect("checked in sums"),
                                strata: block.strata,
                            },
                        )
                    })
                    .collect();
                let scenario = MeromorphicScenario {
                    name: self.name.clone(),
                    n,
                    chi_m,
                    chi_ind,
                    chi_q0,
                    chi_gen,
                    ind_strata: std::mem::take(&mut self.ind_strata),
                    values,
                };
                scenario
                    .validate()
                    .map_err(|e| self.map_scenario_error(e))?;
                ScenarioBody::Meromorphic(scenario)
            }
            Kind::Polynomial => {
                let n = self.require_positive_dim()?;
                let (deg_tok, deg) = self.require_int_field("deg")?;
                if deg < 1 {
                    return Err(deg_tok.error(DiagnosticCode::BadInt, "`deg` must be at least 1"));
                }
                let chi_gen = self.require_chi_gen()?;
                self.check_value_sums(true)?;
                if !self.inf_cover.is_empty() {
                    let total: i64 = self.inf_cover.iter().map(|(s, _)| s.chi).sum();
                    if total != n as i64 {
                        return Err(self.scenario_error(
                            DiagnosticCode::InfCoverIncomplete,
                            format!(
                                "infinity cover sums to chi {total}, the hyperplane at infinity has chi {n}"
                            ),
                        ));
                    }
                }
                let values: BTreeMap<ProjValue, PolyFiberData> =
                    std::mem::take(&mut self.values)
                        .into_iter()
                        .map(|(value, block)| {
                            (
                                value,
                                PolyFiberData {
                                    chi_fiber: block.chi_fiber.expect("checked in sums"),
                                    strata: block.strata,
                                    crits: block.crits,
                                },
                            )
                        })
                        .collect();
                let scenario = PolynomialScenario {
                    name: self.name.clone(),
                    n,
                    degree: deg as u64,
                    chi_gen,
                    inf_ind_strata: std::mem::take(&mut self.ind_strata),
                    inf_cover: std::mem::take(&mut self.inf_cover),
                    values,
                };
                scenario.validate().map_err(|e| match &e {
                    ScenarioError::MuZetaMismatch { label, .. } => {
                        let pos = self
                            .crit_tokens
                            .iter()
                            .find(|(_, l, _)| l == label)
                            .map(|(_, _, t)| (t.line, t.col));
                        match pos {
                            Some((line, col)) => ParseError::new(
                                line,
                                col,
                                DiagnosticCode::MuZetaMismatch,
                                e.to_string(),
                            ),
                            None => self.map_scenario_error(e),
                        }
                    }
                    _ => self.map_scenario_error(e),
                })?;
                let hypersurface = if self.hyp_seen {
                    let chi_cap_gen = self.hyp_chi_cap_gen.ok_or_else(|| {
                        self.scenario_error(
                            DiagnosticCode::MissingField,
                            "missing field `chi_cap_gen`",
                        )
                    })?;
                    let mut caps = BTreeMap::new();
                    for (value, cap) in std::mem::take(&mut self.hyp_caps) {
                        if !cap.strata.is_empty() {
                            let sum: i64 = cap.strata.iter().map(|fs| fs.stratum.chi).sum();
                            if sum != cap.chi {
                                return Err(cap.token.error(
                                    DiagnosticCode::ChiSumMismatch,
                                    format!(
                                        "cap strata of value {value} sum to chi {sum}, declared {}",
                                        cap.chi
                                    ),
                                ));
                            }
                        }
                        caps.insert(
                            value,
                            CapData {
                                chi: cap.chi,
                                strata: cap.strata,
                            },
                        );
                    }
                    let hyp = HypersurfaceData {
                        chi_cap_gen,
                        caps,
                        inf_strata: if self.hyp_inf.is_empty() {
                            None
                        } else {
                            Some(std::mem::take(&mut self.hyp_inf))
                        },
                    };
                    scenario
                        .validate_hypersurface(&hyp)
                        .map_err(|e| self.map_scenario_error(e))?;
                    Some(hyp)
                } else {
                    None
                };
                ScenarioBody::Polynomial {
                    scenario,
                    hypersurface,
                }
            }
        };
        Ok(ScenarioFile {
            name: self.name,
            body,
        })
    }
}

fn push_local_zeta(line: &mut String, data: &LocalZetaData) {
    for (value, zeta) in data.entries() {
        line.push_str(&format!(" zeta@{value}={zeta}"));
    }
}

fn push_fiber_zeta(line: &mut String, zeta: &FiberZeta) {
    match zeta {
        FiberZeta::Smooth => line.push_str(" smooth"),
        FiberZeta::Explicit(z) => line.push_str(&format!(" zeta={z}")),
    }
}

/// Writes a scenario in the canonical layout: one statement per line,
/// two-space indentation, values and zeta data in canonical order.
/// Parsing the output yields the scenario back, provided its labels and
/// tags are single tokens, which holds for anything that came out of
/// [`parse_scenario`].
pub fn format_scenario(file: &ScenarioFile) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("scenario {}", file.name));
    match &file.body {
        ScenarioBody::Germ(model) => {
            line("  kind germ".into());
            for s in model.strata() {
                line(format!(
                    "  nc_stratum label={} k={} l={} chi={}",
                    s.label, s.k, s.l, s.chi
                ));
            }
        }
        ScenarioBody::Meromorphic(scn) => {
            line("  kind meromorphic".into());
            line(format!("  dim {}", scn.n));
            line(format!("  chi_M {}", scn.chi_m));
            line(format!("  chi_ind {}", scn.chi_ind));
            if let Some(q0) = scn.chi_q0 {
                line(format!("  chi_Q0 {q0}"));
            }
            match scn.chi_gen {
                ChiGen::Auto => line("  chi_gen auto".into()),
                ChiGen::Explicit(v) => line(format!("  chi_gen {v}")),
            }
            for (stratum, data) in &scn.ind_strata {
                let mut text = format!("  ind_stratum label={} chi={}", stratum.label, stratum.chi);
                push_local_zeta(&mut text, data);
                line(text);
            }
            for (value, fiber) in &scn.values {
                line(format!("  value {value}"));
                line(format!("    chi_fiber {}", fiber.chi_fiber));
                for fs in &fiber.strata {
                    let mut text = format!(
                        "    fiber_stratum label={} chi={}",
                        fs.stratum.label, fs.stratum.chi
                    );
                    push_fiber_zeta(&mut text, &fs.zeta);
                    line(text);
                }
                line("  end".into());
            }
        }
        ScenarioBody::Polynomial {
            scenario: scn,
            hypersurface,
        } => {
            line("  kind polynomial".into());
            line(format!("  dim {}", scn.n));
            line(format!("  deg {}", scn.degree));
            match scn.chi_gen {
                ChiGen::Auto => line("  chi_gen auto".into()),
                ChiGen::Explicit(v) => line(format!("  chi_gen {v}")),
            }
            for (stratum, data) in &scn.inf_ind_strata {
                let mut text = format!(
                    "  inf_ind_stratum label={} chi={}",
                    stratum.label, stratum.chi
                );
                push_local_zeta(&mut text, data);
                line(text);
            }
            for (stratum, zeta) in &scn.inf_cover {
                line(format!(
                    "  inf_cover_stratum label={} chi={} zeta_inf={}",
                    stratum.label, stratum.chi, zeta
                ));
            }
            for (value, fiber) in &scn.values {
                line(format!("  value {value}"));
                line(format!("    chi_fiber {}", fiber.chi_fiber));
                for fs in &fiber.strata {
                    let mut text = format!(
                        "    fiber_stratum label={} chi={}",
                        fs.stratum.label, fs.stratum.chi
                    );
                    push_fiber_zeta(&mut text, &fs.zeta);
                    line(text);
                }
                for crit in &fiber.crits {
                    line(format!(
                        "    crit label={} mu={} zeta={}",
                        crit.label, crit.mu, crit.zeta
                    ));
                }
                line("  end".into());
            }
            if let Some(hyp) = hypersurface {
                line("  hypersurface".into());
                line(format!("    chi_cap_gen {}", hyp.chi_cap_gen));
                for (value, cap) in &hyp.caps {
                    line(format!("    cap value={value} chi={}", cap.chi));
                    for fs in &cap.strata {
                        let mut text = format!(
                            "    cap_stratum value={value} label={} chi={}",
                            fs.stratum.label, fs.stratum.chi
                        );
                        push_fiber_zeta(&mut text, &fs.zeta);
                        line(text);
                    }
                }
                for (stratum, data) in hyp.inf_strata.as_deref().unwrap_or(&[]) {
                    let mut text = format!(
                        "    hyp_inf_stratum label={} chi={}",
                        stratum.label, stratum.chi
                    );
                    push_local_zeta(&mut text, data);
                    line(text);
                }
                line("  end".into());
            }
        }
    }
    line("end".into());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(src: &str) -> ScenarioFile {
        let first = parse_scenario(src).expect("source parses");
        let formatted = format_scenario(&first);
        let second = parse_scenario(&formatted)
            .unwrap_or_else(|e| panic!("formatted output must parse, got {e}\n{formatted}"));
        assert_eq!(first, second, "format must preserve the scenario");
        assert_eq!(
            formatted,
            format_scenario(&second),
            "formatting must be a fixpoint"
        );
        first
    }

    #[test]
    fn parses_a_full_meromorphic_scenario() {
        let src = "\
scenario xy-on-p2
  kind meromorphic
  dim 2
  chi_M 3
  chi_ind 1
  chi_Q0 2
  chi_gen 1
  ind_stratum label=origin chi=1
  value 0
    chi_fiber 1
    fiber_stratum label=line chi=1 smooth
  end
  value inf
    chi_fiber 1
    fiber_stratum label=line-at-inf chi=1 smooth
  end
end
";
        let file = roundtrip(src);
        assert_eq!(file.name, "xy-on-p2");
        let ScenarioBody::Meromorphic(scn) = &file.body else {
            panic!("expected a meromorphic scenario");
        };
        assert_eq!(scn.n, 2);
        assert_eq!(scn.values.len(), 2);
    }

    #[test]
    fn parses_a_full_polynomial_scenario() {
        let src = "\
scenario workbench
  kind polynomial
  dim 2
  deg 3
  chi_gen auto
  inf_ind_stratum label=q1 chi=1 zeta@0=[1:-1] zeta@c=[2:1]
  inf_cover_stratum label=pole chi=2 zeta_inf=[3:1]
  value 0
    chi_fiber 1
    fiber_stratum label=axis chi=1 smooth
    fiber_stratum label=rest chi=0 zeta=[2:1]
  end
  value c
    chi_fiber 0
    crit label=node mu=1 zeta=[]
    fiber_stratum label=bulk chi=-1 smooth
  end
  hypersurface
    chi_cap_gen 1
    cap value=0 chi=1
    cap_stratum value=0 label=cap-pt chi=1 smooth
    cap value=c chi=0
    hyp_inf_stratum label=edge chi=1 zeta@c=[4:1]
  end
end
";
        let file = roundtrip(src);
        let ScenarioBody::Polynomial {
            scenario,
            hypersurface,
        } = &file.body
        else {
            panic!("expected a polynomial scenario");
        };
        assert_eq!(scenario.degree, 3);
        assert_eq!(scenario.values.len(), 2);
        let hyp = hypersurface.as_ref().expect("hypersurface block");
        assert_eq!(hyp.chi_cap_gen, 1);
        assert_eq!(hyp.caps.len(), 2);
        assert!(hyp.inf_strata.is_some());
    }

    #[test]
    fn parses_a_germ_scenario_with_auto_labels() {
        let src = "scenario cusp kind germ nc_stratum k=2 l=0 chi=1 \
                   nc_stratum k=3 l=0 chi=1 nc_stratum label=core k=6 l=0 chi=-1 end";
        let file = roundtrip(src);
        let ScenarioBody::Germ(model) = &file.body else {
            panic!("expected a germ scenario");
        };
        let labels: Vec<&str> = model.strata().iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, vec!["nc1", "nc2", "core"]);
    }

    #[test]
    fn whitespace_and_comments_are_free() {
        let one_line = "scenario s kind germ nc_stratum k=1 l=0 chi=1 end";
        let spread = "# a germ\nscenario s\n  kind germ # inline note\n\n  nc_stratum k=1 l=0 chi=1\nend\n";
        assert_eq!(
            parse_scenario(one_line).unwrap(),
            parse_scenario(spread).unwrap()
        );
    }

    fn err_of(src: &str) -> ParseError {
        parse_scenario(src).expect_err("source must not parse")
    }

    #[test]
    fn reports_positions_and_codes() {
        let err = err_of("scenario s\n  kind germ\n  nc_stratum k=x l=0 chi=1\nend");
        assert_eq!(err.code, DiagnosticCode::BadInt);
        assert_eq!((err.line, err.col), (3, 16));

        let err = err_of("scenario s\n  kind bogus\nend");
        assert_eq!(err.code, DiagnosticCode::Syntax);
        assert_eq!((err.line, err.col), (2, 8));

        let err = err_of("scenario s\n  kind germ\n  dance k=1\nend");
        assert_eq!(err.code, DiagnosticCode::UnknownKeyword);
        assert_eq!((err.line, err.col), (3, 3));
    }

    #[test]
    fn zeta_literal_errors_point_into_the_literal() {
        let err = err_of(
            "scenario s\n  kind meromorphic\n  dim 1\n  chi_M 2\n  chi_ind 0\n  chi_gen 1\n  \
             ind_stratum label=a chi=0 zeta@0=[1:x]\nend",
        );
        assert_eq!(err.code, DiagnosticCode::BadZeta);
        assert_eq!(err.line, 7);
        // the token starts at column 29; `zeta@0=` is 7 characters, and the
        // literal fails 3 characters in, after `[1:`
        assert_eq!(err.col, 29 + 7 + 3);
    }

    #[test]
    fn kind_must_come_before_kind_specific_statements() {
        let err = err_of("scenario s\n  dim 2\n  deg 3\nend");
        assert_eq!(err.code, DiagnosticCode::MissingField);
        assert_eq!((err.line, err.col), (3, 3));
    }

    #[test]
    fn duplicate_fields_and_values_are_rejected() {
        let err = err_of("scenario s kind germ kind germ end");
        assert_eq!(err.code, DiagnosticCode::DuplicateField);

        let err = err_of(
            "scenario s kind polynomial dim 1 deg 1 chi_gen 1 \
             value 0 chi_fiber 0 end value 0 chi_fiber 0 end end",
        );
        assert_eq!(err.code, DiagnosticCode::DuplicateValue);
    }

    #[test]
    fn chi_sums_are_checked_with_positions() {
        let err = err_of(
            "scenario s\n  kind polynomial\n  dim 2\n  deg 2\n  chi_gen 0\n  value 0\n    \
             chi_fiber 3\n    fiber_stratum label=a chi=1 smooth\n  end\nend",
        );
        assert_eq!(err.code, DiagnosticCode::ChiSumMismatch);
        assert_eq!((err.line, err.col), (6, 3));

        let err = err_of(
            "scenario s\n  kind meromorphic\n  dim 2\n  chi_M 3\n  chi_ind 2\n  chi_gen 1\n  \
             ind_stratum label=a chi=1\nend",
        );
        assert_eq!(err.code, DiagnosticCode::ChiSumMismatch);
        assert_eq!((err.line, err.col), (5, 3));
    }

    #[test]
    fn undeclared_value_references_are_rejected() {
        let err = err_of(
            "scenario s\n  kind polynomial\n  dim 2\n  deg 2\n  chi_gen 0\n  \
             inf_ind_stratum label=q chi=1 zeta@7=[1:1]\nend",
        );
        assert_eq!(err.code, DiagnosticCode::UndeclaredValue);
        assert_eq!((err.line, err.col), (6, 33));
    }

    #[test]
    fn infinite_values_are_reserved_in_polynomial_scenarios() {
        let err = err_of(
            "scenario s kind polynomial dim 1 deg 1 chi_gen 1 value inf chi_fiber 0 end end",
        );
        assert_eq!(err.code, DiagnosticCode::ReservedValue);
    }

    #[test]
    fn milnor_numbers_must_match_their_zeta() {
        let err = err_of(
            "scenario s\n  kind polynomial\n  dim 2\n  deg 2\n  chi_gen 0\n  value 0\n    \
             chi_fiber 1\n    crit label=node mu=2 zeta=[]\n  end\nend",
        );
        assert_eq!(err.code, DiagnosticCode::MuZetaMismatch);
        assert_eq!((err.line, err.col), (8, 5));
    }

    #[test]
    fn incomplete_infinity_cover_is_rejected() {
        let err = err_of(
            "scenario s kind polynomial dim 2 deg 1 chi_gen 1 \
             inf_cover_stratum label=a chi=1 zeta_inf=[1:1] end",
        );
        assert_eq!(err.code, DiagnosticCode::InfCoverIncomplete);
    }

    #[test]
    fn auto_chi_gen_needs_chi_q0_in_meromorphic_scenarios() {
        let err = err_of(
            "scenario s kind meromorphic dim 1 chi_M 2 chi_ind 0 chi_gen auto end",
        );
        assert_eq!(err.code, DiagnosticCode::MissingField);
        assert!(err.message.contains("chi_Q0"));
    }

    #[test]
    fn trailing_tokens_are_rejected() {
        let err = err_of("scenario s kind germ end scenario t kind germ end");
        assert_eq!(err.code, DiagnosticCode::Syntax);
        assert!(err.message.contains("end of input"));
    }

    #[test]
    fn cross_namespace_labels_collide() {
        let err = err_of(
            "scenario s\n  kind meromorphic\n  dim 2\n  chi_M 3\n  chi_ind 1\n  chi_gen 1\n  \
             ind_stratum label=p chi=1\n  value 0\n    chi_fiber 1\n    \
             fiber_stratum label=p chi=1 smooth\n  end\nend",
        );
        assert_eq!(err.code, DiagnosticCode::DuplicateLabel);
        assert_eq!((err.line, err.col), (10, 5));
    }

    #[test]
    fn cap_strata_need_their_cap() {
        let err = err_of(
            "scenario s\n  kind polynomial\n  dim 2\n  deg 1\n  chi_gen 1\n  value 0\n    \
             chi_fiber 1\n    fiber_stratum label=a chi=1 smooth\n  end\n  hypersurface\n    \
             chi_cap_gen 0\n    cap_stratum value=0 label=b chi=0 smooth\n  end\nend",
        );
        assert_eq!(err.code, DiagnosticCode::Syntax);
        assert!(err.message.contains("before `cap`"));
    }
}
