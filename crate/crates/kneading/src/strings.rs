//! Finite words and eventually periodic strings over `{0, …, k−1}`.
//!
//! An [`EpString`] stores a preperiod and a period in canonical form, so two
//! values denote the same infinite string iff their fields agree. Order is the
//! signed lexicographic order: at the first difference the symbol order is
//! reversed when the common prefix contains an odd number of decreasing
//! symbols.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Symbol = u32;

/// Finite word, possibly empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// `w₀ ⋯ w_{n−2}`.
    pub fn drop_last(&self) -> Result<Word> {
        match self.0.split_last() {
            Some((_, init)) => Ok(Word(init.to_vec())),
            None => Err(Error::EmptyWord),
        }
    }

    /// `w₁ ⋯ w_{n−1}`.
    pub fn drop_first(&self) -> Result<Word> {
        match self.0.split_first() {
            Some((_, tail)) => Ok(Word(tail.to_vec())),
            None => Err(Error::EmptyWord),
        }
    }

    fn render(&self, k: u32) -> String {
        render_symbols(&self.0, k)
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        parse_symbols(s.trim()).map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.0.iter().max().map_or(2, |&m| m + 1);
        f.write_str(&self.render(k))
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Word {
        s.parse().expect("valid word literal")
    }
}

fn render_symbols(s: &[Symbol], k: u32) -> String {
    if k <= 10 {
        s.iter().map(|d| char::from_digit(*d, 10).unwrap()).collect()
    } else {
        s.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn parse_symbols(s: &str) -> Result<Vec<Symbol>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<Symbol>().map_err(|_| Error::Parse(format!("bad symbol {t:?}"))))
            .collect()
    } else {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(format!("bad symbol {c:?}"))))
            .collect()
    }
}

/// Per-symbol orientation: `+1` where the branch increases, `−1` where it
/// decreases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidSystem("signs must be +1 or -1".into()));
        }
        Ok(SignVector(signs))
    }

    pub fn lexicographic(k: u32) -> Self {
        SignVector(vec![1; k as usize])
    }

    pub fn get(&self, j: Symbol) -> i8 {
        self.0.get(j as usize).copied().unwrap_or(1)
    }

    pub fn is_lexicographic(&self) -> bool {
        self.0.iter().all(|&s| s == 1)
    }

    /// `δ(w)`, the product of the signs along a word.
    pub fn of_word(&self, w: &[Symbol]) -> i8 {
        w.iter().fold(1, |acc, &x| acc * self.get(x))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Eventually periodic string `pre · per^∞` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EpString {
    pre: Vec<Symbol>,
    per: Vec<Symbol>,
    k: u32,
}

fn minimal_period(per: &[Symbol]) -> usize {
    let n = per.len();
    (1..=n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| per[i] == per[i - d])).unwrap_or(n)
}

impl EpString {
    /// Canonical string over an alphabet of size `k`.
    pub fn new(pre: Vec<Symbol>, per: Vec<Symbol>, k: u32) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        if let Some(&s) = pre.iter().chain(per.iter()).find(|&&s| s >= k) {
            return Err(Error::SymbolOutOfRange { symbol: s, k });
        }
        let mut pre = pre;
        let mut per = per;
        per.truncate(minimal_period(&per));
        while pre.last().is_some() && pre.last() == per.last() {
            pre.pop();
            per.rotate_right(1);
        }
        Ok(EpString { pre, per, k })
    }

    /// Canonical form with the alphabet inferred as `max(2, max symbol + 1)`.
    pub fn canonicalize(pre: Vec<Symbol>, per: Vec<Symbol>) -> Result<Self> {
        let k = pre.iter().chain(per.iter()).max().map_or(2, |&m| (m + 1).max(2));
        EpString::new(pre, per, k)
    }

    pub fn periodic(per: Vec<Symbol>) -> Result<Self> {
        EpString::canonicalize(Vec::new(), per)
    }

    /// The constant string `s^∞`.
    pub fn constant(s: Symbol, k: u32) -> Self {
        EpString::new(Vec::new(), vec![s], k).expect("symbol in range")
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn preperiod(&self) -> &[Symbol] {
        &self.pre
    }

    pub fn period(&self) -> &[Symbol] {
        &self.per
    }

    pub fn pre_len(&self) -> usize {
        self.pre.len()
    }

    pub fn period_len(&self) -> usize {
        self.per.len()
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.pre.is_empty()
    }

    pub fn is_constant(&self, s: Symbol) -> bool {
        self.pre.is_empty() && self.per == [s]
    }

    /// Same string viewed over a larger alphabet.
    pub fn with_alphabet(&self, k: u32) -> Result<Self> {
        EpString::new(self.pre.clone(), self.per.clone(), k)
    }

    pub fn symbol(&self, i: usize) -> Symbol {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    pub fn first(&self) -> Symbol {
        self.symbol(0)
    }

    pub fn prefix(&self, n: usize) -> Vec<Symbol> {
        (0..n).map(|i| self.symbol(i)).collect()
    }

    /// `σⁿx`.
    pub fn shift(&self, n: usize) -> EpString {
        if n < self.pre.len() {
            return EpString { pre: self.pre[n..].to_vec(), per: self.per.clone(), k: self.k };
        }
        let mut per = self.per.clone();
        let r = (n - self.pre.len()) % per.len();
        per.rotate_left(r);
        EpString { pre: Vec::new(), per, k: self.k }
    }

    /// Number of distinct shifts, `|pre| + |per|`.
    pub fn shift_count(&self) -> usize {
        self.pre.len() + self.per.len()
    }

    /// All distinct shifts `σ⁰x, …, σ^{m+p−1}x`.
    pub fn shifts(&self) -> Vec<EpString> {
        (0..self.shift_count()).map(|n| self.shift(n)).collect()
    }

    /// `w · x`.
    pub fn prepend(&self, w: &[Symbol]) -> Result<EpString> {
        let mut pre = w.to_vec();
        pre.extend_from_slice(&self.pre);
        EpString::new(pre, self.per.clone(), self.k)
    }

    /// Positions needed to tell two strings apart.
    pub fn compare_horizon(&self, other: &EpString) -> usize {
        self.pre.len().max(other.pre.len()) + self.per.len().lcm(&other.per.len())
    }
}

/// Signed lexicographic comparison of two eventually periodic strings.
pub fn compare(x: &EpString, y: &EpString, delta: &SignVector) -> Ordering {
    let mut sign = 1i8;
    for i in 0..x.compare_horizon(y) {
        let (a, b) = (x.symbol(i), y.symbol(i));
        if a != b {
            let o = a.cmp(&b);
            return if sign > 0 { o } else { o.reverse() };
        }
        sign *= delta.get(a);
    }
    Ordering::Equal
}

/// Plain lexicographic order.
pub fn lex(x: &EpString, y: &EpString) -> Ordering {
    for i in 0..x.compare_horizon(y) {
        let o = x.symbol(i).cmp(&y.symbol(i));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Lexicographic supremum of all shifts of `u`.
pub fn sup_shift(u: &EpString) -> EpString {
    u.shifts()
        .into_iter()
        .reduce(|a, b| if lex(&b, &a) == Ordering::Greater { b } else { a })
        .expect("at least one shift")
}

impl fmt::Display for EpString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", render_symbols(&self.pre, self.k), render_symbols(&self.per, self.k))
    }
}

impl FromStr for EpString {
    type Err = Error;
    fn from_str(s: &str) -> Result<EpString> {
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| Error::Parse(format!("missing '(' in {s:?}")))?;
        if !s.ends_with(')') || s[open + 1..].contains('(') {
            return Err(Error::Parse(format!("expected PRE(PER), got {s:?}")));
        }
        let pre = parse_symbols(s[..open].trim().trim_end_matches(','))?;
        let per = parse_symbols(&s[open + 1..s.len() - 1])?;
        EpString::canonicalize(pre, per)
    }
}

impl From<&str> for EpString {
    fn from(s: &str) -> EpString {
        s.parse().expect("valid string literal")
    }
}

/// Both strings over a common alphabet, the smaller one embedded by identity.
pub fn common_alphabet(u: &EpString, v: &EpString) -> (EpString, EpString, u32) {
    let k = u.k.max(v.k);
    (u.with_alphabet(k).unwrap(), v.with_alphabet(k).unwrap(), k)
}

/// Outcome of checking the admissibility inequalities for a pair `(u, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub k: u32,
    /// `u ⪯ σⁿu ⪯ v` and `u ⪯ σⁿv ⪯ v` for all `n`.
    pub weak: bool,
    /// `u ⪯ σⁿu ≺ v` and `u ≺ σⁿv ⪯ v` for all `n`.
    pub strict: bool,
    pub u0_is_zero: bool,
    pub v0_is_top: bool,
    /// For `k = 2`, whether `σu ⪯ σv`; `None` otherwise.
    pub sigma_order: Option<bool>,
    /// Human readable description of each failed inequality.
    pub violations: Vec<String>,
}

impl ConditionReport {
    /// Everything the entropy solver needs.
    pub fn admissible(&self) -> bool {
        self.weak && self.u0_is_zero && self.v0_is_top
    }

    /// Everything the inverse problem needs.
    pub fn admissible_strict(&self) -> bool {
        self.strict && self.u0_is_zero && self.v0_is_top && self.sigma_order != Some(false)
    }
}

pub fn check_conditions(u: &EpString, v: &EpString) -> ConditionReport {
    let (u, v, k) = common_alphabet(u, v);
    let mut weak = true;
    let mut strict = true;
    let mut violations = Vec::new();
    for (n, s) in u.shifts().iter().enumerate() {
        if lex(&u, s) == Ordering::Greater {
            weak = false;
            strict = false;
            violations.push(format!("u ⪯ σ^{n}u fails: σ^{n}u = {s} ≺ u = {u}"));
        }
        match lex(s, &v) {
            Ordering::Greater => {
                weak = false;
                strict = false;
                violations.push(format!("σ^{n}u ⪯ v fails: σ^{n}u = {s} ≻ v = {v}"));
            }
            Ordering::Equal => {
                strict = false;
                violations.push(format!("σ^{n}u ≺ v fails: σ^{n}u = v = {v}"));
            }
            Ordering::Less => {}
        }
    }
    for (n, s) in v.shifts().iter().enumerate() {
        match lex(&u, s) {
            Ordering::Greater => {
                weak = false;
                strict = false;
                violations.push(format!("u ⪯ σ^{n}v fails: σ^{n}v = {s} ≺ u = {u}"));
            }
            Ordering::Equal => {
                strict = false;
                violations.push(format!("u ≺ σ^{n}v fails: σ^{n}v = u = {u}"));
            }
            Ordering::Less => {}
        }
        if lex(s, &v) == Ordering::Greater {
            weak = false;
            strict = false;
            violations.push(format!("σ^{n}v ⪯ v fails: σ^{n}v = {s} ≻ v = {v}"));
        }
    }
    let u0_is_zero = u.first() == 0;
    if !u0_is_zero {
        violations.push(format!("u₀ = 0 fails: u₀ = {}", u.first()));
    }
    let v0_is_top = v.first() == k - 1;
    if !v0_is_top {
        violations.push(format!("v₀ = k−1 = {} fails: v₀ = {}", k - 1, v.first()));
    }
    let sigma_order = (k == 2).then(|| lex(&u.shift(1), &v.shift(1)) != Ordering::Greater);
    if sigma_order == Some(false) {
        violations.push(format!("σu ⪯ σv fails: σu = {} ≻ σv = {}", u.shift(1), v.shift(1)));
    }
    ConditionReport { k, weak, strict, u0_is_zero, v0_is_top, sigma_order, violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(s: &str) -> EpString {
        s.parse().unwrap()
    }

    #[test]
    fn word_ops() {
        assert_eq!(Word::from("0110").drop_last().unwrap(), Word::from("011"));
        assert_eq!(Word::from("0").drop_last().unwrap(), Word::empty());
        assert_eq!(Word::from("110").drop_last().unwrap(), Word::from("11"));
        assert_eq!(Word::from("0110").drop_first().unwrap(), Word::from("110"));
        assert_eq!(Word::from("0").drop_first().unwrap(), Word::empty());
        assert_eq!(Word::from("01").drop_first().unwrap(), Word::from("1"));
        assert_eq!(Word::empty().drop_last(), Err(Error::EmptyWord));
        assert_eq!(Word::empty().drop_first(), Err(Error::EmptyWord));
    }

    #[test]
    fn canonical_forms() {
        let a = EpString::canonicalize(vec![], vec![0, 1, 0, 1]).unwrap();
        assert_eq!((a.preperiod(), a.period()), (&[][..], &[0, 1][..]));
        let b = EpString::canonicalize(vec![0], vec![1, 0]).unwrap();
        assert_eq!((b.preperiod(), b.period()), (&[][..], &[0, 1][..]));
        // 01·(10)^∞ = 0110101… has no shorter representation
        let b = EpString::canonicalize(vec![0, 1], vec![1, 0]).unwrap();
        assert_eq!((b.preperiod(), b.period()), (&[0, 1][..], &[1, 0][..]));
        for i in 0..20 {
            let naive = if i < 2 { [0, 1][i] } else { [1, 0][(i - 2) % 2] };
            assert_eq!(b.symbol(i), naive);
        }
        let c = EpString::canonicalize(vec![2], vec![0]).unwrap();
        assert_eq!((c.preperiod(), c.period()), (&[2][..], &[0][..]));
        assert_eq!(EpString::canonicalize(vec![], vec![]), Err(Error::EmptyPeriod));
    }

    #[test]
    fn canonical_absorbs_preperiod() {
        // 1·(01)^∞ = (10)^∞
        let a = EpString::canonicalize(vec![1], vec![0, 1]).unwrap();
        assert_eq!(a, ep("(10)"));
        let b = EpString::canonicalize(vec![0, 1, 1, 0], vec![1, 1, 0]).unwrap();
        assert_eq!(b, ep("0(110)"));
    }

    #[test]
    fn shifts() {
        assert_eq!(ep("(01)").shift(1), ep("(10)"));
        assert_eq!(ep("001(10)").shift(3), ep("(10)"));
        assert_eq!(ep("(00110111)").shift(8), ep("(00110111)"));
        let x = ep("2201(120)");
        for m in 0..7 {
            for n in 0..7 {
                assert_eq!(x.shift(m + n), x.shift(m).shift(n));
            }
        }
    }

    #[test]
    fn comparisons() {
        let lexs = SignVector::lexicographic(2);
        assert_eq!(compare(&ep("(01)"), &ep("(110)"), &lexs), Ordering::Less);
        assert_eq!(compare(&ep("(10)"), &ep("(100110)"), &lexs), Ordering::Greater);
        let x = ep("01(011)");
        assert_eq!(compare(&x, &x, &SignVector::new(vec![-1, 1]).unwrap()), Ordering::Equal);
        // tent order: 1 reverses
        let tent = SignVector::new(vec![1, -1]).unwrap();
        assert_eq!(compare(&ep("1(0)"), &ep("1(1)"), &tent), Ordering::Greater);
        assert_eq!(compare(&ep("(0)"), &ep("(1)"), &tent), Ordering::Less);
    }

    #[test]
    fn sup_of_shifts() {
        assert_eq!(sup_shift(&ep("(00110111)")), ep("(11100110)"));
        assert_eq!(sup_shift(&ep("(0)")), ep("(0)"));
        assert_eq!(sup_shift(&ep("(10)")), ep("(10)"));
        assert_eq!(sup_shift(&ep("0(01)")), ep("(10)"));
    }

    #[test]
    fn conditions() {
        let r = check_conditions(&ep("(01)"), &ep("(110)"));
        assert!(r.strict && r.weak && r.u0_is_zero && r.v0_is_top && r.sigma_order == Some(true));
        let r = check_conditions(&ep("(0)"), &ep("(1)"));
        assert!(r.weak && r.strict);
        let r = check_conditions(&ep("(0)"), &ep("(2)"));
        assert!(r.weak && r.admissible());
        let r = check_conditions(&ep("(01)"), &ep("(10)"));
        assert!(r.weak && !r.strict);
        let r = check_conditions(&ep("(10)"), &ep("(110)"));
        assert!(!r.u0_is_zero && !r.admissible());
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(ep("001(10)").to_string(), "001(10)");
        assert_eq!(ep("0(10)").to_string(), "(01)");
        let big: EpString = "(10,11,0)".parse().unwrap();
        assert_eq!(big.k(), 12);
        assert_eq!(big.period(), &[10, 11, 0]);
        assert_eq!(big.to_string(), "(10,11,0)");
        let mixed: EpString = "3,10(0)".parse().unwrap();
        assert_eq!(mixed.preperiod(), &[3, 10]);
        assert!("0101".parse::<EpString>().is_err());
        assert!("(0a)".parse::<EpString>().is_err());
        assert!("0()".parse::<EpString>().is_err());
    }
}
