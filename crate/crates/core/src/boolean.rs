//! Exact GF(2) algebra on Boolean functions `B^n -> B`.
//!
//! Words are read big-endian: for `x = x_0 ... x_{n-1}`, `x_0` is the most
//! significant bit of the integer index. Truth tables and ANF coefficient
//! vectors are both indexed by that integer.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitTable;
use crate::error::{Result, TnnError};

/// Largest arity for which truth tables are materialized.
pub const MAX_ARITY: usize = 24;

/// Default bound on the arity accepted by [`transform_matrix`].
pub const DEFAULT_MATRIX_ARITY: usize = 6;

pub(crate) fn check_arity(n: usize) -> Result<()> {
    if n > MAX_ARITY {
        Err(TnnError::ArityTooLarge { n, max: MAX_ARITY })
    } else {
        Ok(())
    }
}

/// An `n`-bit word `u_0 ... u_{n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InputWord {
    value: usize,
    arity: usize,
}

impl InputWord {
    pub fn new(value: usize, arity: usize) -> Result<Self> {
        if arity >= usize::BITS as usize || value >> arity != 0 {
            return Err(TnnError::WordOutOfRange { value, bits: arity });
        }
        Ok(Self { value, arity })
    }

    pub(crate) fn new_unchecked(value: usize, arity: usize) -> Self {
        debug_assert!(value >> arity == 0);
        Self { value, arity }
    }

    /// Integer value with `u_0` as the most significant bit.
    pub fn value(self) -> usize {
        self.value
    }

    pub fn arity(self) -> usize {
        self.arity
    }

    /// The bit `u_i`.
    pub fn bit(self, i: usize) -> bool {
        assert!(i < self.arity);
        (self.value >> (self.arity - 1 - i)) & 1 == 1
    }

    /// The positions `{i | u_i = 1}` in ascending order.
    pub fn ones(self) -> impl Iterator<Item = usize> {
        (0..self.arity).filter(move |&i| self.bit(i))
    }

    pub fn weight(self) -> usize {
        self.value.count_ones() as usize
    }

    /// Every word of the given arity in ascending integer order.
    pub fn all(arity: usize) -> impl Iterator<Item = InputWord> {
        (0..1usize << arity).map(move |v| InputWord::new_unchecked(v, arity))
    }
}

impl fmt::Display for InputWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.arity {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for InputWord {
    type Err = TnnError;

    /// Parses a binary string; the arity is the string length.
    fn from_str(s: &str) -> Result<Self> {
        let mut value = 0usize;
        for c in s.chars() {
            value = (value << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(TnnError::Parse(format!("invalid bit {c:?} in word {s:?}"))),
                };
        }
        InputWord::new(value, s.len())
    }
}

/// `m_u(x)`: 1 iff every position set in `u` is also set in `x`.
pub fn eval_monomial(u: InputWord, x: InputWord) -> Result<bool> {
    if u.arity != x.arity {
        return Err(TnnError::ArityMismatch {
            left: u.arity,
            right: x.arity,
        });
    }
    Ok(x.value & u.value == u.value)
}

/// Truth table of a function `B^n -> B`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    table: BitTable,
}

impl BooleanFunction {
    pub fn new(n: usize, table: BitTable) -> Result<Self> {
        check_arity(n)?;
        if table.len() != 1 << n {
            return Err(TnnError::InvalidArgument(format!(
                "truth table of length {} for arity {n}",
                table.len()
            )));
        }
        Ok(Self { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        check_arity(n)?;
        Ok(Self {
            n,
            table: BitTable::from_bools((0..1usize << n).map(f)),
        })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        check_arity(n)?;
        let len = 1 << n;
        Ok(Self {
            n,
            table: if value {
                BitTable::ones(len)
            } else {
                BitTable::zeros(len)
            },
        })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &BitTable {
        &self.table
    }

    /// `f(x)` for the word whose integer value is `x`.
    pub fn eval(&self, x: usize) -> bool {
        self.table.get(x)
    }

    pub fn eval_word(&self, x: InputWord) -> Result<bool> {
        if x.arity != self.n {
            return Err(TnnError::ArityMismatch {
                left: self.n,
                right: x.arity,
            });
        }
        Ok(self.table.get(x.value))
    }

    /// `f^{-1}({1})` in ascending order.
    pub fn support(&self) -> impl Iterator<Item = InputWord> + '_ {
        let n = self.n;
        self.table
            .iter_ones()
            .map(move |v| InputWord::new_unchecked(v, n))
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.table.fmt(f)
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction(n={}, {})", self.n, self.table)
    }
}

/// ANF coefficient vector `{c_u}`; bit `u` set means monomial `m_u` is present.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Anf {
    n: usize,
    coeffs: BitTable,
}

impl Anf {
    pub fn new(n: usize, coeffs: BitTable) -> Result<Self> {
        check_arity(n)?;
        if coeffs.len() != 1 << n {
            return Err(TnnError::InvalidArgument(format!(
                "coefficient vector of length {} for arity {n}",
                coeffs.len()
            )));
        }
        Ok(Self { n, coeffs })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_arity(n)?;
        Ok(Self {
            n,
            coeffs: BitTable::zeros(1 << n),
        })
    }

    /// Builds an ANF from the monomial masks present in it. Repeated masks cancel.
    pub fn from_monomials(n: usize, monomials: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut a = Self::zero(n)?;
        for u in monomials {
            InputWord::new(u, n)?;
            a.coeffs.toggle(u);
        }
        Ok(a)
    }

    /// Parses the text grammar: `^`-separated terms, each `1` or a `.`-product of `x<i>`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        parse_anf(text, n)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &BitTable {
        &self.coeffs
    }

    pub fn coeff(&self, u: usize) -> bool {
        self.coeffs.get(u)
    }

    /// Present monomials in ascending mask order.
    pub fn monomials(&self) -> impl Iterator<Item = InputWord> + '_ {
        let n = self.n;
        self.coeffs
            .iter_ones()
            .map(move |u| InputWord::new_unchecked(u, n))
    }

    pub fn degree(&self) -> Option<usize> {
        self.monomials().map(InputWord::weight).max()
    }
}

impl fmt::Display for Anf {
    /// Terms ordered by degree, then by variable list: `1^x1^x0.x1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<Vec<usize>> = self.monomials().map(|u| u.ones().collect()).collect();
        if terms.is_empty() {
            return f.write_str("0");
        }
        terms.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for (k, vars) in terms.iter().enumerate() {
            if k > 0 {
                f.write_str("^")?;
            }
            if vars.is_empty() {
                f.write_str("1")?;
            }
            for (j, v) in vars.iter().enumerate() {
                if j > 0 {
                    f.write_str(".")?;
                }
                write!(f, "x{v}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Anf(n={}, {})", self.n, self)
    }
}

/// Fast Möbius transform of the truth table: `c = T v_f`.
pub fn anf_from_truth_table(f: &BooleanFunction) -> Anf {
    let mut coeffs = f.table.clone();
    coeffs.mobius_in_place();
    Anf { n: f.n, coeffs }
}

/// `f = XOR_u c_u m_u`, evaluated with the same (self-inverse) transform.
pub fn truth_table_from_anf(a: &Anf) -> BooleanFunction {
    let mut table = a.coeffs.clone();
    table.mobius_in_place();
    BooleanFunction { n: a.n, table }
}

pub fn xor_functions(f: &BooleanFunction, g: &BooleanFunction) -> Result<BooleanFunction> {
    if f.n != g.n {
        return Err(TnnError::ArityMismatch {
            left: f.n,
            right: g.n,
        });
    }
    let mut table = f.table.clone();
    table.xor_assign(&g.table);
    Ok(BooleanFunction { n: f.n, table })
}

/// Dense `2^n x 2^n` GF(2) matrix; row `x` holds `m_u(x)` at column `u`.
#[derive(Clone, PartialEq, Eq)]
pub struct TransformMatrix {
    n: usize,
    rows: Vec<BitTable>,
}

impl TransformMatrix {
    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, x: usize, u: usize) -> bool {
        self.rows[x].get(u)
    }

    pub fn identity(n: usize) -> Self {
        let dim = 1 << n;
        let rows = (0..dim)
            .map(|x| {
                let mut r = BitTable::zeros(dim);
                r.set(x, true);
                r
            })
            .collect();
        Self { n, rows }
    }

    /// GF(2) product `self * rhs`.
    pub fn mul(&self, rhs: &TransformMatrix) -> TransformMatrix {
        assert_eq!(self.n, rhs.n);
        let dim = self.dim();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = BitTable::zeros(dim);
                for k in row.iter_ones() {
                    out.xor_assign(&rhs.rows[k]);
                }
                out
            })
            .collect();
        TransformMatrix { n: self.n, rows }
    }

    /// GF(2) matrix-vector product.
    pub fn apply(&self, v: &BitTable) -> BitTable {
        assert_eq!(v.len(), self.dim());
        BitTable::from_bools(
            self.rows
                .iter()
                .map(|row| row.iter_ones().filter(|&k| v.get(k)).count() % 2 == 1),
        )
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(x, row)| row.iter_ones().all(|u| u <= x))
    }
}

impl fmt::Debug for TransformMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TransformMatrix(n={})", self.n)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

/// `T` for arity `n`, bounded by [`DEFAULT_MATRIX_ARITY`].
pub fn transform_matrix(n: usize) -> Result<TransformMatrix> {
    transform_matrix_bounded(n, DEFAULT_MATRIX_ARITY)
}

pub fn transform_matrix_bounded(n: usize, max: usize) -> Result<TransformMatrix> {
    if n > max {
        return Err(TnnError::ArityTooLarge { n, max });
    }
    let dim = 1usize << n;
    let rows = (0..dim)
        .map(|x| BitTable::from_bools((0..dim).map(|u| x & u == u)))
        .collect();
    Ok(TransformMatrix { n, rows })
}

/// Parses either a `2^n`-character truth table or an ANF expression.
pub fn parse_function(text: &str, n: usize) -> Result<BooleanFunction> {
    check_arity(n)?;
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(TnnError::Parse("empty function text".into()));
    }
    let binary = compact.chars().all(|c| c == '0' || c == '1');
    if binary && compact.len() == 1 << n {
        return BooleanFunction::new(n, BitTable::from_bools(compact.chars().map(|c| c == '1')));
    }
    if binary && compact.len() > 1 {
        return Err(TnnError::Parse(format!(
            "truth table has {} entries, expected {} for arity {n}",
            compact.len(),
            1usize << n
        )));
    }
    Ok(truth_table_from_anf(&parse_anf(&compact, n)?))
}

fn parse_anf(text: &str, n: usize) -> Result<Anf> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut anf = Anf::zero(n)?;
    if compact == "0" {
        return Ok(anf);
    }
    if compact.is_empty() {
        return Err(TnnError::Parse("empty ANF expression".into()));
    }
    for term in compact.split('^') {
        if term.is_empty() {
            return Err(TnnError::Parse(format!("empty term in {text:?}")));
        }
        let mut u = 0usize;
        if term != "1" {
            for factor in term.split('.') {
                let idx = factor
                    .strip_prefix('x')
                    .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
                    .ok_or_else(|| TnnError::Parse(format!("malformed token {factor:?}")))?;
                let i: usize = idx
                    .parse()
                    .map_err(|_| TnnError::Parse(format!("malformed token {factor:?}")))?;
                if i >= n {
                    return Err(TnnError::Parse(format!(
                        "variable x{i} out of range for arity {n}"
                    )));
                }
                u |= 1 << (n - 1 - i);
            }
        }
        anf.coeffs.toggle(u);
    }
    Ok(anf)
}
