//! Generator matrices, the (0,n,2)-net test, and construction of shifted and
//! symmetrized digital nets in base 2.

use crate::bitmatrix::BitMatrix;
use crate::error::{param, Error, Result};
use crate::points::{DyadicPointSet, MAX_RESOLUTION};

/// Bit `i` (1-indexed) of a parameter vector as an integer.
#[inline]
pub(crate) fn bit(v: &[bool], i: usize) -> i64 {
    v[i - 1] as i64
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != ',' && *c != '_')
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("bad bit {other:?} in {s:?}"))),
        })
        .collect()
}

pub fn bits_to_string(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Digital shift `(sigma_1, ..., sigma_n)` added to the digits of the second coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftVector(Vec<bool>);

impl ShiftVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    /// Bits of `word`, with bit `k-1` giving `sigma_k`.
    pub fn from_word(n: usize, word: u64) -> Self {
        Self((0..n).map(|k| (word >> k) & 1 == 1).collect())
    }

    pub fn parse(s: &str) -> Result<Self> {
        parse_bits(s).map(Self)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// `sigma_i` for `1 <= i <= n`.
    pub fn sigma(&self, i: usize) -> i64 {
        bit(&self.0, i)
    }

    pub fn word(&self) -> u64 {
        self.0.iter().enumerate().fold(0, |w, (k, &b)| w | ((b as u64) << k))
    }

    /// Number of zero digits.
    pub fn zeros_count(&self) -> usize {
        self.0.iter().filter(|b| !**b).count()
    }

    pub fn complement(&self) -> Self {
        complement_shift(self)
    }
}

impl std::fmt::Display for ShiftVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&bits_to_string(&self.0))
    }
}

pub fn complement_shift(shift: &ShiftVector) -> ShiftVector {
    ShiftVector(shift.0.iter().map(|b| !b).collect())
}

/// Strictly upper triangular entries `a_{i,j}`, `1 <= i < j <= n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriEntries {
    n: usize,
    upper: BitMatrix,
}

impl TriEntries {
    pub fn zeros(n: usize) -> Result<Self> {
        Ok(Self { n, upper: BitMatrix::zeros(n)? })
    }

    /// Entries listed row by row: `a_{1,2}, ..., a_{1,n}, a_{2,3}, ...`.
    pub fn from_flat(n: usize, flat: &[bool]) -> Result<Self> {
        let want = n * n.saturating_sub(1) / 2;
        if flat.len() != want {
            return param(format!("triangular entries: got {}, expected {want}", flat.len()));
        }
        let mut t = Self::zeros(n)?;
        let mut it = flat.iter();
        for i in 1..=n {
            for j in i + 1..=n {
                t.set(i, j, *it.next().unwrap());
            }
        }
        Ok(t)
    }

    /// Reads the strict upper triangle of a unit upper triangular matrix.
    pub fn from_matrix(m: &BitMatrix) -> Result<Self> {
        let n = m.n();
        let mut t = Self::zeros(n)?;
        for r in 0..n {
            for c in 0..n {
                let v = m.get(r, c);
                match r.cmp(&c) {
                    std::cmp::Ordering::Less => t.set(r + 1, c + 1, v),
                    std::cmp::Ordering::Equal if !v => {
                        return param("triangular matrix needs a unit diagonal")
                    }
                    std::cmp::Ordering::Greater if v => {
                        return param("triangular matrix has entries below the diagonal")
                    }
                    _ => {}
                }
            }
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        i < j && self.upper.get(i - 1, j - 1)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        assert!(i < j && j <= self.n, "a_{{{i},{j}}} is not strictly upper triangular");
        self.upper.set(i - 1, j - 1, v);
    }

    pub fn to_flat(&self) -> Vec<bool> {
        (1..=self.n)
            .flat_map(|i| (i + 1..=self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect()
    }

    /// Unit upper triangular matrix with these entries above the diagonal.
    pub fn matrix(&self) -> BitMatrix {
        let mut m = self.upper.clone();
        for i in 0..self.n {
            m.set(i, i, true);
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `C2` = identity with last column `(a_1, ..., a_{n-1}, 1)`.
    Pa { a: Vec<bool> },
    /// `C2` = identity with first column `(1, c_2, ..., c_n)`; `c` holds `c_2..c_n`.
    Pc { c: Vec<bool> },
    /// `C2` unit upper triangular.
    Tri { entries: TriEntries },
    Custom { c1: BitMatrix, c2: BitMatrix },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Pa { .. } => "pa",
            Family::Pc { .. } => "pc",
            Family::Tri { .. } => "tri",
            Family::Custom { .. } => "custom",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetSpec {
    pub n: usize,
    pub family: Family,
    pub shift: ShiftVector,
    pub symmetrized: bool,
}

impl NetSpec {
    pub fn pa(a: Vec<bool>, shift: ShiftVector) -> Self {
        Self { n: shift.len(), family: Family::Pa { a }, shift, symmetrized: false }
    }

    pub fn pc(c: Vec<bool>, shift: ShiftVector) -> Self {
        Self { n: shift.len(), family: Family::Pc { c }, shift, symmetrized: false }
    }

    pub fn tri(entries: TriEntries, shift: ShiftVector) -> Self {
        Self { n: shift.len(), family: Family::Tri { entries }, shift, symmetrized: false }
    }

    pub fn custom(c1: BitMatrix, c2: BitMatrix, shift: ShiftVector) -> Self {
        Self { n: shift.len(), family: Family::Custom { c1, c2 }, shift, symmetrized: false }
    }

    pub fn symmetrized(mut self, yes: bool) -> Self {
        self.symmetrized = yes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 || n as u32 > MAX_RESOLUTION {
            return param(format!("n = {n} outside 1..={MAX_RESOLUTION}"));
        }
        if self.shift.len() != n {
            return param(format!("shift has length {}, expected n = {n}", self.shift.len()));
        }
        match &self.family {
            Family::Pa { a } if a.len() != n - 1 => {
                param(format!("a has length {}, expected n-1 = {}", a.len(), n - 1))
            }
            Family::Pc { c } if c.len() != n - 1 => {
                param(format!("c has length {}, expected n-1 = {}", c.len(), n - 1))
            }
            Family::Tri { entries } if entries.n() != n => {
                param(format!("triangular entries sized {}, expected {n}", entries.n()))
            }
            Family::Custom { c1, c2 } if c1.n() != n || c2.n() != n => {
                param(format!("custom matrices sized {}x{}, expected {n}", c1.n(), c2.n()))
            }
            _ => Ok(()),
        }
    }

    pub fn with_shift(&self, shift: ShiftVector) -> Self {
        Self { shift, ..self.clone() }
    }
}

/// Returns `(C1, C2)` for a [`NetSpec`].
pub fn build_generators(spec: &NetSpec) -> Result<(BitMatrix, BitMatrix)> {
    spec.validate()?;
    let n = spec.n;
    let c1 = BitMatrix::reversal(n)?;
    let c2 = match &spec.family {
        Family::Pa { a } => {
            let mut m = BitMatrix::identity(n)?;
            for (i, &ai) in a.iter().enumerate() {
                m.set(i, n - 1, ai);
            }
            m
        }
        Family::Pc { c } => {
            let mut m = BitMatrix::identity(n)?;
            for (i, &ci) in c.iter().enumerate() {
                m.set(i + 1, 0, ci);
            }
            m
        }
        Family::Tri { entries } => entries.matrix(),
        Family::Custom { c1, c2 } => return Ok((c1.clone(), c2.clone())),
    };
    Ok((c1, c2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NetCheck {
    /// GF(2) rank of the stacked leading rows for every `d1 + d2 = n`.
    Rank,
    /// One point in every elementary dyadic box of volume `2^-n`.
    Counting,
}

pub fn is_0n2_net(c1: &BitMatrix, c2: &BitMatrix, method: NetCheck) -> Result<bool> {
    let n = c1.n();
    if c2.n() != n {
        return param(format!("matrix sizes differ: {} vs {}", n, c2.n()));
    }
    Ok(match method {
        NetCheck::Rank => (0..=n).all(|d1| {
            let rows = (0..d1).map(|r| c1.row_word(r)).chain((0..n - d1).map(|r| c2.row_word(r)));
            BitMatrix::rank_of_rows(rows) == n
        }),
        NetCheck::Counting => {
            let pts = generate_points(c1, c2, &ShiftVector::zeros(n))?;
            let side = 1usize << n;
            (0..=n).all(|d1| {
                let mut seen = vec![false; side];
                pts.points().iter().all(|&(x, y)| {
                    let cell = ((x >> (n - d1)) << (n - d1)) as usize | (y >> d1) as usize;
                    !std::mem::replace(&mut seen[cell], true)
                })
            })
        }
    })
}

/// Reverses the low `n` bits: digit word (bit `k-1` = weight `2^-k`) to integer numerator.
#[inline]
fn digits_to_int(word: u64, n: usize) -> u64 {
    word.reverse_bits() >> (64 - n)
}

/// The digital net generated by `C1`, `C2`, shift added to the second coordinate.
pub fn generate_points(c1: &BitMatrix, c2: &BitMatrix, shift: &ShiftVector) -> Result<DyadicPointSet> {
    let n = c1.n();
    if c2.n() != n || shift.len() != n {
        return param(format!(
            "sizes differ: C1 {n}, C2 {}, shift {}",
            c2.n(),
            shift.len()
        ));
    }
    if n as u32 > MAX_RESOLUTION {
        return param(format!("n = {n} exceeds {MAX_RESOLUTION}"));
    }
    let s = shift.word();
    let points = (0..1u64 << n)
        .map(|r| {
            let x = digits_to_int(c1.mul_vec(r), n);
            let y = digits_to_int(c2.mul_vec(r) ^ s, n);
            (x, y)
        })
        .collect();
    DyadicPointSet::new(n as u32, points)
}

/// `P_a(sigma)` from the explicit digit description, without matrices.
pub fn generate_pa_direct(n: usize, a: &[bool], shift: &ShiftVector) -> Result<DyadicPointSet> {
    if n == 0 || a.len() + 1 != n || shift.len() != n {
        return param(format!(
            "need |a| = n-1 and |shift| = n (n = {n}, |a| = {}, |shift| = {})",
            a.len(),
            shift.len()
        ));
    }
    let mut points = Vec::with_capacity(1 << n);
    for t in 0..1u64 << n {
        // t_k is bit k-1
        let tk = |k: usize| (t >> (k - 1)) & 1;
        let tn = tk(n);
        let mut x = 0u64;
        let mut y = 0u64;
        for k in 1..=n {
            // x = t_n/2 + ... + t_1/2^n, so t_k carries weight 2^(k-1-n)
            x |= tk(k) << (k - 1);
            let b = if k < n {
                tk(k) ^ (a[k - 1] as u64 & tn) ^ shift.sigma(k) as u64
            } else {
                tn ^ shift.sigma(n) as u64
            };
            y |= b << (n - k);
        }
        points.push((x, y));
    }
    DyadicPointSet::new(n as u32, points)
}

/// `P` together with its reflection `y -> 1 - 2^-res - y`.
pub fn symmetrize(p: &DyadicPointSet) -> DyadicPointSet {
    let top = p.side() - 1;
    let mut pts = p.points().to_vec();
    pts.extend(p.points().iter().map(|&(x, y)| (x, top - y)));
    DyadicPointSet::new(p.resolution(), pts).expect("reflection stays in range")
}

/// Generates the point set described by `spec`, symmetrized if requested.
pub fn generate(spec: &NetSpec) -> Result<DyadicPointSet> {
    let (c1, c2) = build_generators(spec)?;
    let p = generate_points(&c1, &c2, &spec.shift)?;
    Ok(if spec.symmetrized { symmetrize(&p) } else { p })
}
