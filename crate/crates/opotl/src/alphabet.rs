//! Operator precedence alphabets: a finite proposition set partitioned into
//! structural and normal labels, plus a partial precedence matrix over the
//! structural labels (including the `#` delimiter conventions).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// The reserved delimiter label.
pub const DELIM: &str = "#";

/// Structural label id within an alphabet. Id 0 is always `#`.
pub type StructId = usize;

/// Normal label id within an alphabet.
pub type NormalId = usize;

/// The three precedence relations.
///
/// Despite the symbols, these are not order relations: no transitivity,
/// symmetry or reflexivity is assumed anywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PrecRel {
    /// `<` yields precedence
    Yields,
    /// `=` equal in precedence
    Equals,
    /// `>` takes precedence
    Takes,
}

impl PrecRel {
    pub fn ascii(self) -> char {
        match self {
            PrecRel::Yields => '<',
            PrecRel::Equals => '=',
            PrecRel::Takes => '>',
        }
    }

    pub fn from_ascii(c: char) -> Option<PrecRel> {
        match c {
            '<' => Some(PrecRel::Yields),
            '=' => Some(PrecRel::Equals),
            '>' => Some(PrecRel::Takes),
            _ => None,
        }
    }
}

impl fmt::Display for PrecRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ascii())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropKind {
    Structural,
    Normal,
}

/// An atomic proposition together with its kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop {
    pub name: String,
    pub kind: PropKind,
}

/// A set of atomic propositions labeling one word position: exactly one
/// structural label plus any number of normal labels.
///
/// Normal labels are stored as a bitmask over the alphabet's normal ids, so
/// label sets are cheap to copy and compare. An alphabet supports at most 64
/// normal labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet {
    pub structural: StructId,
    pub normals: u64,
}

impl LabelSet {
    pub fn structural_only(s: StructId) -> LabelSet {
        LabelSet { structural: s, normals: 0 }
    }

    pub fn has_normal(&self, n: NormalId) -> bool {
        self.normals & (1 << n) != 0
    }

    pub fn with_normal(mut self, n: NormalId) -> LabelSet {
        self.normals |= 1 << n;
        self
    }

    pub fn is_delimiter(&self) -> bool {
        self.structural == 0
    }

    /// The delimiter-only label set `{#}`.
    pub fn delimiter() -> LabelSet {
        LabelSet::structural_only(0)
    }
}

#[derive(Debug, Error)]
pub enum AlphabetError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("conflicting precedence for ({a}, {b}): `{first}` redefined as `{second}`")]
    Conflict { a: String, b: String, first: PrecRel, second: PrecRel },
    #[error("label set must contain exactly one structural label, found {found}")]
    InvalidLabelSet { found: usize },
    #[error("unknown proposition `{0}`")]
    UnknownProp(String),
    #[error("duplicate proposition `{0}`")]
    DuplicateProp(String),
    #[error("`{0}` is reserved")]
    ReservedName(String),
    #[error("precedence relations involving `#` are fixed by convention (`# < a` and `a > #` only)")]
    DelimiterConvention,
    #[error("at most 64 normal propositions are supported")]
    TooManyNormals,
}

/// An operator precedence alphabet `(Σ, M)` lifted to proposition sets.
///
/// The matrix is stored over structural labels only; precedence of full label
/// sets projects each set to its structural component first. Entries may be
/// undefined (the matrix is partial). The `#` row holds only `Yields` and the
/// `#` column only `Takes`; `M(#, #)` is never stored.
#[derive(Debug, Clone)]
pub struct OpAlphabet {
    structurals: Vec<String>,
    normals: Vec<String>,
    /// Dense row-major matrix over structural ids (including `#` as id 0).
    matrix: Vec<Option<PrecRel>>,
}

impl PartialEq for OpAlphabet {
    /// Semantic equality: same proposition sets and same defined entries,
    /// independent of declaration order.
    fn eq(&self, other: &Self) -> bool {
        self.sorted_structurals() == other.sorted_structurals()
            && self.sorted_normals() == other.sorted_normals()
            && self.named_matrix() == other.named_matrix()
    }
}

impl Eq for OpAlphabet {}

impl OpAlphabet {
    pub fn new(structurals: &[&str], normals: &[&str]) -> Result<OpAlphabet, AlphabetError> {
        let mut a = OpAlphabet {
            structurals: vec![DELIM.to_string()],
            normals: Vec::new(),
            matrix: Vec::new(),
        };
        for s in structurals {
            a.declare_structural(s)?;
        }
        for n in normals {
            a.declare_normal(n)?;
        }
        a.matrix = vec![None; a.structurals.len() * a.structurals.len()];
        Ok(a)
    }

    fn declare_structural(&mut self, name: &str) -> Result<(), AlphabetError> {
        check_name(name)?;
        if self.prop(name).is_some() {
            return Err(AlphabetError::DuplicateProp(name.to_string()));
        }
        self.structurals.push(name.to_string());
        Ok(())
    }

    fn declare_normal(&mut self, name: &str) -> Result<(), AlphabetError> {
        check_name(name)?;
        if self.prop(name).is_some() {
            return Err(AlphabetError::DuplicateProp(name.to_string()));
        }
        if self.normals.len() == 64 {
            return Err(AlphabetError::TooManyNormals);
        }
        self.normals.push(name.to_string());
        Ok(())
    }

    pub fn structurals(&self) -> &[String] {
        &self.structurals
    }

    /// Structural labels other than `#`.
    pub fn proper_structurals(&self) -> impl Iterator<Item = (StructId, &str)> {
        self.structurals.iter().enumerate().skip(1).map(|(i, s)| (i, s.as_str()))
    }

    pub fn normals(&self) -> &[String] {
        &self.normals
    }

    pub fn struct_id(&self, name: &str) -> Option<StructId> {
        self.structurals.iter().position(|s| s == name)
    }

    pub fn normal_id(&self, name: &str) -> Option<NormalId> {
        self.normals.iter().position(|s| s == name)
    }

    pub fn struct_name(&self, id: StructId) -> &str {
        &self.structurals[id]
    }

    pub fn prop(&self, name: &str) -> Option<Prop> {
        if self.struct_id(name).is_some() {
            Some(Prop { name: name.to_string(), kind: PropKind::Structural })
        } else if self.normal_id(name).is_some() {
            Some(Prop { name: name.to_string(), kind: PropKind::Normal })
        } else {
            None
        }
    }

    /// Defines `M(a, b) = rel` for two structural labels. Redefinition with a
    /// different relation is a conflict; the `#` conventions are enforced.
    pub fn set_rel(&mut self, a: &str, b: &str, rel: PrecRel) -> Result<(), AlphabetError> {
        let ia = self.struct_id(a).ok_or_else(|| AlphabetError::UnknownProp(a.to_string()))?;
        let ib = self.struct_id(b).ok_or_else(|| AlphabetError::UnknownProp(b.to_string()))?;
        if (ia == 0 && ib == 0)
            || (ia == 0 && rel != PrecRel::Yields)
            || (ib == 0 && rel != PrecRel::Takes)
        {
            return Err(AlphabetError::DelimiterConvention);
        }
        let idx = ia * self.structurals.len() + ib;
        match self.matrix[idx] {
            Some(old) if old != rel => Err(AlphabetError::Conflict {
                a: a.to_string(),
                b: b.to_string(),
                first: old,
                second: rel,
            }),
            _ => {
                self.matrix[idx] = Some(rel);
                Ok(())
            }
        }
    }

    /// Fills the whole `#` row with `Yields` and `#` column with `Takes`.
    pub fn fill_delimiter_conventions(&mut self) {
        let k = self.structurals.len();
        for s in 1..k {
            self.matrix[s] = Some(PrecRel::Yields); // (#, s)
            self.matrix[s * k] = Some(PrecRel::Takes); // (s, #)
        }
    }

    /// Matrix lookup on structural ids.
    ///
    /// The pair `(#, #)` is never stored but answers the conventional `=`
    /// stated between the two delimiters: the outermost chain relies on it,
    /// and the chain-relation shape properties hold for it only under this
    /// convention.
    pub fn rel(&self, a: StructId, b: StructId) -> Option<PrecRel> {
        if a == 0 && b == 0 {
            return Some(PrecRel::Equals);
        }
        self.matrix[a * self.structurals.len() + b]
    }

    /// The precedence relation between two label sets, or `None` when the
    /// matrix entry is undefined. Only the structural components matter.
    pub fn precedence_of(&self, a: LabelSet, b: LabelSet) -> Option<PrecRel> {
        self.rel(a.structural, b.structural)
    }

    /// Validating variant of [`precedence_of`](Self::precedence_of) working on
    /// raw proposition name sets. A set with zero or several structural labels
    /// is rejected.
    pub fn precedence_of_sets(
        &self,
        a: &[&str],
        b: &[&str],
    ) -> Result<Option<PrecRel>, AlphabetError> {
        let la = self.label_set(a)?;
        let lb = self.label_set(b)?;
        Ok(self.precedence_of(la, lb))
    }

    /// Builds a [`LabelSet`] from proposition names, checking that exactly one
    /// of them is structural.
    pub fn label_set(&self, names: &[&str]) -> Result<LabelSet, AlphabetError> {
        let mut structural = None;
        let mut count = 0usize;
        let mut normals = 0u64;
        for name in names {
            if let Some(id) = self.struct_id(name) {
                count += 1;
                structural = Some(id);
            } else if let Some(id) = self.normal_id(name) {
                normals |= 1 << id;
            } else {
                return Err(AlphabetError::UnknownProp(name.to_string()));
            }
        }
        match (structural, count) {
            (Some(s), 1) => Ok(LabelSet { structural: s, normals }),
            (_, n) => Err(AlphabetError::InvalidLabelSet { found: n }),
        }
    }

    /// Renders a label set as a word token, e.g. `call{pA,pB}` or `#`.
    pub fn display_label_set(&self, ls: LabelSet) -> String {
        let mut names: Vec<&str> = Vec::new();
        for (i, n) in self.normals.iter().enumerate() {
            if ls.has_normal(i) {
                names.push(n);
            }
        }
        names.sort_unstable();
        if names.is_empty() {
            self.structurals[ls.structural].clone()
        } else {
            format!("{}{{{}}}", self.structurals[ls.structural], names.join(","))
        }
    }

    /// Parses a word token `structural` or `structural{n1,n2}`.
    pub fn label_set_from_token(&self, token: &str) -> Result<LabelSet, AlphabetError> {
        let (head, rest) = match token.find('{') {
            Some(i) => {
                let inner = token[i..]
                    .strip_prefix('{')
                    .and_then(|r| r.strip_suffix('}'))
                    .ok_or_else(|| AlphabetError::UnknownProp(token.to_string()))?;
                (&token[..i], Some(inner))
            }
            None => (token, None),
        };
        let sid = match self.struct_id(head) {
            Some(id) => id,
            None if self.normal_id(head).is_some() => {
                return Err(AlphabetError::InvalidLabelSet { found: 0 })
            }
            None => return Err(AlphabetError::UnknownProp(head.to_string())),
        };
        let mut ls = LabelSet::structural_only(sid);
        if let Some(inner) = rest {
            for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match self.normal_id(name) {
                    Some(id) => ls = ls.with_normal(id),
                    None if self.struct_id(name).is_some() => {
                        return Err(AlphabetError::InvalidLabelSet { found: 2 })
                    }
                    None => return Err(AlphabetError::UnknownProp(name.to_string())),
                }
            }
        }
        Ok(ls)
    }

    /// True when every non-`#` entry of the matrix is defined.
    pub fn is_complete(&self) -> bool {
        let k = self.structurals.len();
        (1..k).all(|a| (1..k).all(|b| self.rel(a, b).is_some()))
    }

    fn sorted_structurals(&self) -> Vec<&String> {
        let mut v: Vec<&String> = self.structurals.iter().collect();
        v.sort();
        v
    }

    fn sorted_normals(&self) -> Vec<&String> {
        let mut v: Vec<&String> = self.normals.iter().collect();
        v.sort();
        v
    }

    fn named_matrix(&self) -> BTreeMap<(&str, &str), PrecRel> {
        let k = self.structurals.len();
        let mut m = BTreeMap::new();
        for a in 0..k {
            for b in 0..k {
                if let Some(rel) = self.matrix[a * k + b] {
                    m.insert((self.structurals[a].as_str(), self.structurals[b].as_str()), rel);
                }
            }
        }
        m
    }

    /// Serializes to the OPM text format: declarations first, then relation
    /// lines in lexicographic order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut ss: Vec<&String> = self.structurals.iter().skip(1).collect();
        ss.sort();
        out.push_str("props: ");
        out.push_str(&ss.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", "));
        out.push('\n');
        if !self.normals.is_empty() {
            let mut ns: Vec<&String> = self.normals.iter().collect();
            ns.sort();
            out.push_str("normal: ");
            out.push_str(&ns.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", "));
            out.push('\n');
        }
        for ((a, b), rel) in self.named_matrix() {
            out.push_str(&format!("{} {} {}\n", a, rel.ascii(), b));
        }
        out
    }
}

fn check_name(name: &str) -> Result<(), AlphabetError> {
    if name == DELIM {
        return Err(AlphabetError::ReservedName(name.to_string()));
    }
    if name.is_empty()
        || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        || name.chars().next().unwrap().is_ascii_digit()
    {
        return Err(AlphabetError::Parse {
            line: 0,
            msg: format!("invalid proposition name `{}`", name),
        });
    }
    Ok(())
}

/// Loads an alphabet from the OPM text format.
///
/// Grammar (line oriented, `;` starts a comment):
/// `props: a, b` declares structural labels, `normal: p, q` declares normal
/// ones, and `a < b` / `a = b` / `a > b` declare matrix entries. `#` may be
/// mentioned explicitly but only consistently with its convention.
pub fn load_opm(text: &str) -> Result<OpAlphabet, AlphabetError> {
    let mut structurals: Vec<String> = Vec::new();
    let mut normals: Vec<String> = Vec::new();
    let mut rels: Vec<(usize, String, PrecRel, String)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split(';').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("props:") {
            for name in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                structurals.push(name.to_string());
            }
        } else if let Some(rest) = content.strip_prefix("normal:") {
            for name in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                normals.push(name.to_string());
            }
        } else {
            let parts: Vec<&str> = content.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(AlphabetError::Parse {
                    line,
                    msg: format!("expected `a < b`, `a = b` or `a > b`, got `{}`", content),
                });
            }
            let rel = parts[1]
                .chars()
                .next()
                .filter(|_| parts[1].len() == 1)
                .and_then(PrecRel::from_ascii)
                .ok_or_else(|| AlphabetError::Parse {
                    line,
                    msg: format!("unknown precedence symbol `{}`", parts[1]),
                })?;
            rels.push((line, parts[0].to_string(), rel, parts[2].to_string()));
        }
    }
    let mut alpha = OpAlphabet::new(
        &structurals.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        &normals.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
    )?;
    for (line, a, rel, b) in rels {
        alpha.set_rel(&a, &b, rel).map_err(|e| match e {
            AlphabetError::Conflict { .. } => e,
            AlphabetError::UnknownProp(p) => AlphabetError::Parse {
                line,
                msg: format!("unknown structural label `{}`", p),
            },
            other => other,
        })?;
    }
    Ok(alpha)
}

/// The OPM `M_call` over `{call, ret, han, exc}` with normal labels
/// `pA, pB, pC, pErr`, delimiter conventions included.
pub fn builtin_mcall() -> OpAlphabet {
    let mut a = OpAlphabet::new(&["call", "ret", "han", "exc"], &["pA", "pB", "pC", "pErr"])
        .expect("static alphabet");
    let rows = [
        ("call", [PrecRel::Yields, PrecRel::Equals, PrecRel::Yields, PrecRel::Takes]),
        ("ret", [PrecRel::Takes, PrecRel::Takes, PrecRel::Takes, PrecRel::Takes]),
        ("han", [PrecRel::Yields, PrecRel::Takes, PrecRel::Yields, PrecRel::Equals]),
        ("exc", [PrecRel::Takes, PrecRel::Takes, PrecRel::Takes, PrecRel::Takes]),
    ];
    let cols = ["call", "ret", "han", "exc"];
    for (l, row) in rows {
        for (r, rel) in cols.iter().zip(row) {
            a.set_rel(l, r, rel).expect("static matrix");
        }
    }
    a.fill_delimiter_conventions();
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mcall_matches_published_matrix() {
        let a = builtin_mcall();
        assert_eq!(a.precedence_of_sets(&["call"], &["ret"]).unwrap(), Some(PrecRel::Equals));
        assert_eq!(a.precedence_of_sets(&["#"], &["call"]).unwrap(), Some(PrecRel::Yields));
        assert_eq!(a.precedence_of_sets(&["ret"], &["ret"]).unwrap(), Some(PrecRel::Takes));
        assert_eq!(a.precedence_of_sets(&["han"], &["exc"]).unwrap(), Some(PrecRel::Equals));
        assert_eq!(a.precedence_of_sets(&["exc"], &["call"]).unwrap(), Some(PrecRel::Takes));
        assert_eq!(a.precedence_of_sets(&["call"], &["call"]).unwrap(), Some(PrecRel::Yields));
    }

    #[test]
    fn precedence_ignores_normal_labels() {
        let a = builtin_mcall();
        assert_eq!(
            a.precedence_of_sets(&["call", "pA", "pErr"], &["ret", "pB"]).unwrap(),
            Some(PrecRel::Equals)
        );
    }

    #[test]
    fn malformed_label_sets_are_rejected() {
        let a = builtin_mcall();
        match a.precedence_of_sets(&["pA"], &["ret"]) {
            Err(AlphabetError::InvalidLabelSet { found: 0 }) => {}
            other => panic!("expected InvalidLabelSet, got {:?}", other),
        }
        match a.precedence_of_sets(&["call", "ret"], &["ret"]) {
            Err(AlphabetError::InvalidLabelSet { found: 2 }) => {}
            other => panic!("expected InvalidLabelSet, got {:?}", other),
        }
    }

    #[test]
    fn load_simple_opm() {
        let a = load_opm("props: call, ret, han\ncall = ret\ncall < han\n").unwrap();
        assert_eq!(a.precedence_of_sets(&["call"], &["ret"]).unwrap(), Some(PrecRel::Equals));
        assert_eq!(a.precedence_of_sets(&["call"], &["han"]).unwrap(), Some(PrecRel::Yields));
        assert_eq!(a.precedence_of_sets(&["han"], &["call"]).unwrap(), None);
    }

    #[test]
    fn conflicting_relations_are_rejected() {
        let err = load_opm("props: call, ret\ncall < ret\ncall > ret\n").unwrap_err();
        match err {
            AlphabetError::Conflict { a, b, .. } => {
                assert_eq!((a.as_str(), b.as_str()), ("call", "ret"));
            }
            other => panic!("expected Conflict, got {:?}", other),
        }
    }

    #[test]
    fn delimiter_convention_is_enforced() {
        assert!(load_opm("props: a\n# < a\na > #\n").is_ok());
        assert!(load_opm("props: a\n# > a\n").is_err());
        assert!(load_opm("props: a\na = #\n").is_err());
    }

    #[test]
    fn serialize_roundtrip_mcall() {
        let a = builtin_mcall();
        let b = load_opm(&a.serialize()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn delimiter_row_and_column_follow_convention() {
        let a = builtin_mcall();
        for (id, _) in a.proper_structurals() {
            assert!(matches!(a.rel(0, id), Some(PrecRel::Yields) | None));
            assert!(matches!(a.rel(id, 0), Some(PrecRel::Takes) | None));
        }
        // The delimiters are conventionally equal in precedence.
        assert_eq!(a.rel(0, 0), Some(PrecRel::Equals));
    }
}
