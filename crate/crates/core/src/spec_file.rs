//! Line-based text format describing a model and optional structure data.
//!
//! ```text
//! # comments run to end of line
//! name nil5_cosymp
//! dim 5
//! d e3 = e15            # or: bracket [e1,e5] = -e3   (never both)
//! d e4 = e12
//! eta = e5
//! omega = e13 - e24
//! flag nilpotent
//! monodromy e1 = -e2    # action on the fibre (the first dim-1 generators)
//! caveat model-level cohomology only
//! ```
//!
//! A generator token is `e` followed by its decimal index (`e12` is the
//! twelfth generator here) or `e[12]`. Right-hand sides use the form syntax
//! of [`Form::parse`], where `e12` means `e1 ∧ e2`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cdga::{ce_differential, Cdga, CdgaError, LieAlgebra, Substitution};
use crate::exterior::{ExteriorError, Form, Vector, MAX_GENERATORS};
use crate::rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: bracket and d definitions cannot be mixed")]
    MixedStyles { line: usize },
    #[error("missing `dim` line")]
    MissingDim,
    #[error(transparent)]
    Model(#[from] CdgaError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    Nilpotent,
    CompletelySolvable,
    Unimodular,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Nilpotent => "nilpotent",
            Flag::CompletelySolvable => "completely_solvable",
            Flag::Unimodular => "unimodular",
        }
    }
}

impl FromStr for Flag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nilpotent" => Ok(Flag::Nilpotent),
            "completely_solvable" => Ok(Flag::CompletelySolvable),
            "unimodular" => Ok(Flag::Unimodular),
            other => Err(format!("unknown flag `{other}`")),
        }
    }
}

/// How the model is defined: differentials of generators, or structure
/// constants of the dual Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Definition {
    Differentials(BTreeMap<usize, Form>),
    /// `[e_i, e_j]` for `i < j`, as a 1-form whose `e_k` coefficient is the
    /// `k`-th component.
    Brackets(BTreeMap<(usize, usize), Form>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub name: Option<String>,
    pub dim: usize,
    pub definition: Definition,
    pub eta: Option<Form>,
    pub omega: Option<Form>,
    pub flags: BTreeSet<Flag>,
    /// Images of fibre generators under the monodromy; unlisted ones are fixed.
    pub monodromy: BTreeMap<usize, Form>,
    pub caveats: Vec<String>,
}

impl AlgebraSpec {
    pub fn new(dim: usize) -> Self {
        AlgebraSpec {
            name: None,
            dim,
            definition: Definition::Differentials(BTreeMap::new()),
            eta: None,
            omega: None,
            flags: BTreeSet::new(),
            monodromy: BTreeMap::new(),
            caveats: Vec::new(),
        }
    }

    /// A spec listing the nonzero differentials of `c`.
    pub fn from_cdga(name: &str, c: &Cdga) -> Self {
        let diffs = c
            .differentials()
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(i, f)| (i + 1, f.clone()))
            .collect();
        AlgebraSpec {
            name: Some(name.to_string()),
            definition: Definition::Differentials(diffs),
            ..AlgebraSpec::new(c.dim())
        }
    }

    pub fn parse(text: &str) -> Result<Self, SpecError> {
        Parser::default().run(text)
    }

    pub fn has_flag(&self, f: Flag) -> bool {
        self.flags.contains(&f)
    }

    /// The model. Bracket definitions are checked for the Jacobi identity;
    /// differential definitions are not checked for `d² = 0` here.
    pub fn cdga(&self) -> Result<Cdga, SpecError> {
        match &self.definition {
            Definition::Differentials(ds) => {
                let mut diffs = vec![Form::zero(self.dim); self.dim];
                for (i, f) in ds {
                    diffs[i - 1] = f.clone();
                }
                Ok(Cdga::new(self.dim, diffs)?)
            }
            Definition::Brackets(bs) => {
                let mut g = LieAlgebra::abelian(self.dim);
                for ((i, j), f) in bs {
                    g.set_bracket(*i, *j, &linear_to_vector(f))?;
                }
                Ok(ce_differential(&g)?)
            }
        }
    }

    /// Monodromy on the fibre (generators `1..dim`), if any line was given.
    pub fn monodromy_substitution(&self) -> Result<Option<Substitution>, SpecError> {
        if self.monodromy.is_empty() {
            return Ok(None);
        }
        let fibre = self.dim - 1;
        let images = (1..=fibre)
            .map(|i| {
                self.monodromy
                    .get(&i)
                    .cloned()
                    .unwrap_or_else(|| Form::generator(fibre, i))
            })
            .collect();
        Ok(Some(Substitution::new(fibre, images)?))
    }

    /// Canonical text; `parse(to_text())` gives back the same spec.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out += &format!("name {name}\n");
        }
        out += &format!("dim {}\n", self.dim);
        for f in &self.flags {
            out += &format!("flag {}\n", f.as_str());
        }
        match &self.definition {
            Definition::Differentials(ds) => {
                for (i, f) in ds {
                    out += &format!("d e{i} = {f}\n");
                }
            }
            Definition::Brackets(bs) => {
                for ((i, j), f) in bs {
                    out += &format!("bracket [e{i},e{j}] = {f}\n");
                }
            }
        }
        if let Some(eta) = &self.eta {
            out += &format!("eta = {eta}\n");
        }
        if let Some(omega) = &self.omega {
            out += &format!("omega = {omega}\n");
        }
        for (i, f) in &self.monodromy {
            out += &format!("monodromy e{i} = {f}\n");
        }
        for c in &self.caveats {
            out += &format!("caveat {c}\n");
        }
        out
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn linear_to_vector(f: &Form) -> Vector {
    let mut v = vec![rational::zero(); f.dim()];
    for (m, c) in f.terms() {
        v[m.max_index() - 1] = c.clone();
    }
    Vector::new(v)
}

#[derive(Default)]
struct Parser {
    name: Option<String>,
    dim: Option<usize>,
    diffs: BTreeMap<usize, Form>,
    brackets: BTreeMap<(usize, usize), Form>,
    style_line: Option<(bool, usize)>,
    eta: Option<Form>,
    omega: Option<Form>,
    flags: BTreeSet<Flag>,
    monodromy: BTreeMap<usize, Form>,
    caveats: Vec<String>,
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let r = self.rest();
        let end = r
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(r.len());
        self.pos += end;
        &r[..end]
    }

    fn expect(&mut self, ch: char) -> Result<(), SpecError> {
        self.skip_ws();
        if self.rest().starts_with(ch) {
            self.pos += ch.len_utf8();
            Ok(())
        } else {
            self.error(format!("expected `{ch}`"))
        }
    }

    fn number(&mut self) -> Result<usize, SpecError> {
        self.skip_ws();
        let r = self.rest();
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if end == 0 {
            return self.error("expected a number");
        }
        let n = r[..end]
            .parse()
            .or_else(|_| self.error("number too large"))?;
        self.pos += end;
        Ok(n)
    }

    /// `eN` or `e[N]`, checked against `dim`.
    fn generator(&mut self, dim: usize) -> Result<usize, SpecError> {
        self.skip_ws();
        let start = self.pos;
        if !self.rest().starts_with('e') {
            return self.error("expected a generator such as `e3`");
        }
        self.pos += 1;
        let i = if self.rest().starts_with('[') {
            self.pos += 1;
            let i = self.number()?;
            self.expect(']')?;
            i
        } else {
            self.number()?
        };
        if i == 0 || i > dim {
            self.pos = start;
            return self.error(format!("generator index {i} out of range 1..={dim}"));
        }
        Ok(i)
    }

    /// The rest of the line as a form.
    fn form(&mut self, dim: usize) -> Result<Form, SpecError> {
        self.skip_ws();
        let start = self.column();
        let text = self.rest();
        self.pos = self.text.len();
        Form::parse(dim, text).map_err(|e| match e {
            ExteriorError::Parse { column, message } => SpecError::Syntax {
                line: self.line,
                column: start + column - 1,
                message,
            },
            other => SpecError::Syntax {
                line: self.line,
                column: start,
                message: other.to_string(),
            },
        })
    }
}

impl Parser {
    fn dim(&self, cur: &Cursor) -> Result<usize, SpecError> {
        self.dim
            .map_or_else(|| cur.error("`dim` must come first"), Ok)
    }

    fn style(&mut self, brackets: bool, line: usize) -> Result<(), SpecError> {
        match self.style_line {
            Some((b, _)) if b != brackets => Err(SpecError::MixedStyles { line }),
            Some(_) => Ok(()),
            None => {
                self.style_line = Some((brackets, line));
                Ok(())
            }
        }
    }

    fn run(mut self, text: &str) -> Result<AlgebraSpec, SpecError> {
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("");
            let mut cur = Cursor {
                text: content,
                pos: 0,
                line: idx + 1,
            };
            if cur.at_end() {
                continue;
            }
            let keyword_at = cur.pos;
            let keyword = cur.word();
            match keyword {
                "name" => {
                    let id = cur.word();
                    if id.is_empty() {
                        return cur.error("expected a name");
                    }
                    self.name = Some(id.to_string());
                }
                "dim" => {
                    if self.dim.is_some() {
                        cur.pos = keyword_at;
                        return cur.error("duplicate `dim`");
                    }
                    let n = cur.number()?;
                    if n > MAX_GENERATORS {
                        return cur
                            .error(format!("at most {MAX_GENERATORS} generators are supported"));
                    }
                    self.dim = Some(n);
                }
                "d" => {
                    let dim = self.dim(&cur)?;
                    self.style(false, cur.line)?;
                    let i = cur.generator(dim)?;
                    cur.expect('=')?;
                    let f = cur.form(dim)?;
                    if !f.is_homogeneous_of(2) {
                        cur.pos = keyword_at;
                        return cur.error(format!("d e{i} must be a 2-form"));
                    }
                    if self.diffs.insert(i, f).is_some() {
                        cur.pos = keyword_at;
                        return cur.error(format!("duplicate definition of d e{i}"));
                    }
                }
                "bracket" => {
                    let dim = self.dim(&cur)?;
                    self.style(true, cur.line)?;
                    cur.expect('[')?;
                    let i = cur.generator(dim)?;
                    cur.expect(',')?;
                    let j = cur.generator(dim)?;
                    cur.expect(']')?;
                    cur.expect('=')?;
                    let f = cur.form(dim)?;
                    if !f.is_homogeneous_of(1) {
                        cur.pos = keyword_at;
                        return cur.error("a bracket value must be a combination of generators");
                    }
                    if i == j {
                        if f.is_zero() {
                            continue;
                        }
                        cur.pos = keyword_at;
                        return cur.error(format!("[e{i},e{i}] must vanish"));
                    }
                    let (key, f) = if i < j { ((i, j), f) } else { ((j, i), -f) };
                    if self.brackets.insert(key, f).is_some() {
                        cur.pos = keyword_at;
                        return cur.error(format!("duplicate bracket [e{},e{}]", key.0, key.1));
                    }
                }
                "eta" | "omega" => {
                    let dim = self.dim(&cur)?;
                    cur.expect('=')?;
                    let f = cur.form(dim)?;
                    let slot = if keyword == "eta" {
                        &mut self.eta
                    } else {
                        &mut self.omega
                    };
                    if slot.replace(f).is_some() {
                        cur.pos = keyword_at;
                        return cur.error(format!("duplicate `{keyword}`"));
                    }
                }
                "flag" => {
                    let at = cur.pos;
                    let name = cur.word();
                    match name.parse::<Flag>() {
                        Ok(f) => {
                            self.flags.insert(f);
                        }
                        Err(msg) => {
                            cur.pos = at;
                            cur.skip_ws();
                            return cur.error(msg);
                        }
                    }
                }
                "monodromy" => {
                    let dim = self.dim(&cur)?;
                    if dim == 0 {
                        return cur.error("monodromy needs at least one generator");
                    }
                    let i = cur.generator(dim - 1)?;
                    cur.expect('=')?;
                    let f = cur.form(dim - 1)?;
                    if !f.is_homogeneous_of(1) {
                        cur.pos = keyword_at;
                        return cur.error("a monodromy image must be a combination of generators");
                    }
                    if self.monodromy.insert(i, f).is_some() {
                        cur.pos = keyword_at;
                        return cur.error(format!("duplicate monodromy image of e{i}"));
                    }
                }
                "caveat" => {
                    cur.skip_ws();
                    self.caveats.push(cur.rest().trim_end().to_string());
                    continue;
                }
                "" => return cur.error("expected a keyword"),
                other => {
                    cur.pos = keyword_at;
                    return cur.error(format!("unknown keyword `{other}`"));
                }
            }
            if !cur.at_end() {
                return cur.error("unexpected trailing text");
            }
        }
        let dim = self.dim.ok_or(SpecError::MissingDim)?;
        let definition = match self.style_line {
            Some((true, _)) => Definition::Brackets(self.brackets),
            _ => Definition::Differentials(self.diffs),
        };
        Ok(AlgebraSpec {
            name: self.name,
            dim,
            definition,
            eta: self.eta,
            omega: self.omega,
            flags: self.flags,
            monodromy: self.monodromy,
            caveats: self.caveats,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NIL5: &str = "\
# five-dimensional nilpotent cosymplectic model
name nil5_cosymp
dim 5
d e3 = e15
d e4 = e12
eta = e5
omega = e13 - e24
flag nilpotent
";

    #[test]
    fn parses_differential_file() {
        let s = AlgebraSpec::parse(NIL5).unwrap();
        assert_eq!(s.name.as_deref(), Some("nil5_cosymp"));
        let c = s.cdga().unwrap();
        assert_eq!(c.generator_differential(3), &Form::parse(5, "e15").unwrap());
        assert_eq!(c.generator_differential(4), &Form::parse(5, "e12").unwrap());
        assert_eq!(s.eta, Some(Form::parse(5, "e5").unwrap()));
        assert!(s.has_flag(Flag::Nilpotent));
        assert_eq!(AlgebraSpec::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn brackets_give_the_same_model() {
        let text = "dim 5\nbracket [e1,e2] = -e4\nbracket [e5,e1] = e3\n";
        let s = AlgebraSpec::parse(text).unwrap();
        let d = AlgebraSpec::parse(NIL5).unwrap();
        assert_eq!(s.cdga().unwrap(), d.cdga().unwrap());
        assert_eq!(AlgebraSpec::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn abelian_and_rejections() {
        let s = AlgebraSpec::parse("dim 2").unwrap();
        assert_eq!(s.cdga().unwrap(), Cdga::abelian(2));
        assert_eq!(
            AlgebraSpec::parse("dim 3\nbracket [e1,e2] = e3\nd e3 = e12\n"),
            Err(SpecError::MixedStyles { line: 3 })
        );
        assert_eq!(
            AlgebraSpec::parse("# nothing\n"),
            Err(SpecError::MissingDim)
        );
    }

    #[test]
    fn error_positions() {
        let err = AlgebraSpec::parse("dim 3\nd e4 = e12").unwrap_err();
        assert!(
            matches!(
                err,
                SpecError::Syntax {
                    line: 2,
                    column: 3,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = AlgebraSpec::parse("dim 3\nd e3 = e12 + e14").unwrap_err();
        assert!(
            matches!(
                err,
                SpecError::Syntax {
                    line: 2,
                    column: 14,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = AlgebraSpec::parse("dim 3\nfrobnicate").unwrap_err();
        assert!(
            matches!(
                err,
                SpecError::Syntax {
                    line: 2,
                    column: 1,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = AlgebraSpec::parse("dim 3\nd e3 e12").unwrap_err();
        assert!(
            matches!(
                err,
                SpecError::Syntax {
                    line: 2,
                    column: 6,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = AlgebraSpec::parse("d e1 = 0").unwrap_err();
        assert!(matches!(err, SpecError::Syntax { line: 1, .. }), "{err:?}");
    }

    #[test]
    fn jacobi_failure_is_reported() {
        let s = AlgebraSpec::parse(
            "dim 3\nbracket [e1,e2] = e3\nbracket [e2,e3] = e1\nbracket [e1,e3] = e1",
        )
        .unwrap();
        assert!(matches!(
            s.cdga(),
            Err(SpecError::Model(CdgaError::Jacobi(..)))
        ));
    }

    #[test]
    fn monodromy_lines() {
        let text = "dim 3\nmonodromy e1 = -e2\nmonodromy e2 = e1\n";
        let s = AlgebraSpec::parse(text).unwrap();
        let phi = s.monodromy_substitution().unwrap().unwrap();
        assert_eq!(phi.dim(), 2);
        assert_eq!(phi.image(1), &Form::parse(2, "-e2").unwrap());
        assert_eq!(AlgebraSpec::parse(&s.to_text()).unwrap(), s);
    }
}
