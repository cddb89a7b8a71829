//! Arithmetic in `GF(p^n)`.
//!
//! Elements are dense integer handles in `[0, q)`: the handle of
//! `c_0 + c_1 t + ... + c_{n-1} t^{n-1}` is `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`,
//! so `0` and `1` are the additive and multiplicative identities and handle
//! order is the natural enumeration order.
//!
//! Fields up to a table cap (default `2^16` elements) carry discrete-log and
//! antilog tables; extension fields add through Zech logarithms (or XOR in
//! characteristic 2). Prime fields above the cap fall back to direct modular
//! arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TABLE_CAP: u64 = 1 << 16;

const NO_LOG: u32 = u32::MAX;

/// Handle of a field element, meaningful only relative to its [`FieldCtx`].
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    #[inline]
    pub const fn from_handle(handle: u32) -> Self {
        FqElem(handle)
    }

    #[inline]
    pub const fn handle(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for FqElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a field: characteristic, degree and the
/// modulus coefficients, least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Tables {
    // exp[i] = g^i, doubled so exp[log a + log b] never needs a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    // zech[i] = log(1 + g^i), NO_LOG when 1 + g^i = 0. Empty unless the
    // field is an extension of odd characteristic.
    zech: Vec<u32>,
    neg: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Arith {
    Tables(Tables),
    Direct,
}

/// Immutable description of `GF(p^n)` together with its arithmetic tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    arith: Arith,
}

/// Builds `GF(p^n)`. Without an explicit modulus the lexicographically
/// smallest monic irreducible of degree `n` is used.
pub fn make_field(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<FieldCtx> {
    FieldCtx::new(p, n, modulus)
}

impl FieldCtx {
    pub fn new(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<Self> {
        Self::with_table_cap(p, n, modulus, DEFAULT_TABLE_CAP)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn with_table_cap(p: u32, n: u32, modulus: Option<&[u32]>, cap: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::CompositeCharacteristic(p as u64));
        }
        if n == 0 {
            return Err(Error::ZeroExtensionDegree);
        }
        let q = (p as u64)
            .checked_pow(n)
            .filter(|&q| q < (1 << 31))
            .ok_or(Error::FieldTooLarge {
                p,
                n,
                limit: cap.min(1 << 31),
            })?;
        if q > cap && n > 1 {
            return Err(Error::FieldTooLarge { p, n, limit: cap });
        }

        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 || m[n as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::MalformedModulus { expected: n });
                }
                if !is_irreducible_mod_p(p, m) {
                    return Err(Error::ReducibleModulus { p });
                }
                m.to_vec()
            }
            None => default_modulus(p, n),
        };

        let mut ctx = FieldCtx {
            p,
            n,
            q: q as u32,
            modulus,
            arith: Arith::Direct,
        };
        if q <= cap {
            ctx.arith = Arith::Tables(ctx.build_tables());
        }
        Ok(ctx)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Field order as `usize`, handy for sizing vertex arrays.
    #[inline]
    pub fn order(&self) -> usize {
        self.q as usize
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        matches!(self.arith, Arith::Tables(_))
    }

    pub fn desc(&self) -> FieldDesc {
        FieldDesc {
            p: self.p,
            n: self.n,
            modulus: self.modulus.clone(),
        }
    }

    /// The generator behind the log tables, if the field has tables.
    pub fn primitive_element(&self) -> Option<FqElem> {
        match &self.arith {
            Arith::Tables(t) => Some(FqElem(t.exp[1 % t.exp.len().max(1)])),
            Arith::Direct => None,
        }
    }

    /// Checked handle conversion.
    pub fn elem(&self, handle: u32) -> Result<FqElem> {
        if handle < self.q {
            Ok(FqElem(handle))
        } else {
            Err(Error::out_of_range(
                "element handle",
                format!("{handle} not below q = {}", self.q),
            ))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FqElem {
        FqElem(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(FqElem)
    }

    pub fn enumerate_elements(&self) -> Vec<FqElem> {
        self.elements().collect()
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.n == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return FqElem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let Arith::Tables(t) = &self.arith else {
            unreachable!("extension fields always carry tables")
        };
        let order = self.q - 1;
        let la = t.log[a.index()];
        let lb = t.log[b.index()];
        let diff = if lb >= la { lb - la } else { lb + order - la };
        match t.zech[diff as usize] {
            NO_LOG => FqElem::ZERO,
            z => FqElem(t.exp[(la + z) as usize]),
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        if a.0 == 0 || self.p == 2 {
            return a;
        }
        if self.n == 1 {
            return FqElem(self.p - a.0);
        }
        match &self.arith {
            Arith::Tables(t) => FqElem(t.neg[a.index()]),
            Arith::Direct => unreachable!("extension fields always carry tables"),
        }
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        match &self.arith {
            Arith::Tables(t) => FqElem(t.exp[(t.log[a.index()] + t.log[b.index()]) as usize]),
            Arith::Direct => FqElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32),
        }
    }

    /// Multiplicative inverse; zero has none.
    #[inline]
    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.arith {
            Arith::Tables(t) => {
                let order = self.q - 1;
                let l = t.log[a.index()];
                FqElem(t.exp[((order - l) % order) as usize])
            }
            Arith::Direct => self.pow(a, self.p as u64 - 2),
        })
    }

    #[inline]
    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut base = a;
        let mut acc = FqElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn digits(&self, h: u32) -> Vec<u32> {
        let mut h = h;
        (0..self.n)
            .map(|_| {
                let d = h % self.p;
                h /= self.p;
                d
            })
            .collect()
    }

    fn pack_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    // Schoolbook product reduced by the modulus; only used to build tables.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.n == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let n = self.n as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for i in (n..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus.iter().enumerate() {
                let idx = i - n + j;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let low: Vec<u32> = prod[..n].iter().map(|&c| c as u32).collect();
        self.pack_digits(&low)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        self.pack_digits(&sum)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q;
        let order = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * order.max(1)];
        'candidate: for g in 1..q {
            exp[0] = 1;
            let mut x = 1;
            for slot in exp.iter_mut().take(order).skip(1) {
                x = self.slow_mul(x, g);
                if x == 1 {
                    continue 'candidate;
                }
                *slot = x;
            }
            break;
        }
        for i in 0..order {
            exp[i + order] = exp[i];
        }
        let mut log = vec![NO_LOG; q as usize];
        for (i, &e) in exp.iter().take(order).enumerate() {
            log[e as usize] = i as u32;
        }

        let (zech, neg) = if self.n > 1 && self.p != 2 {
            let zech = (0..order)
                .map(|i| match self.slow_add(1, exp[i]) {
                    0 => NO_LOG,
                    s => log[s as usize],
                })
                .collect();
            let neg = (0..q)
                .map(|h| {
                    let d: Vec<u32> = self
                        .digits(h)
                        .iter()
                        .map(|&c| (self.p - c) % self.p)
                        .collect();
                    self.pack_digits(&d)
                })
                .collect();
            (zech, neg)
        } else {
            (Vec::new(), Vec::new())
        };
        Tables {
            exp,
            log,
            zech,
            neg,
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Remainder of `a` modulo a monic `m`, coefficients in GF(p), least significant first.
fn rem_mod_p(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    if r.len() > dm {
        for i in (dm..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            for (j, &mj) in m.iter().enumerate() {
                let idx = i - dm + j;
                r[idx] = (r[idx] + (p - c) * mj as u64) % p;
            }
        }
        r.truncate(dm);
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial-division irreducibility test for a monic polynomial over `GF(p)`.
pub(crate) fn is_irreducible_mod_p(p: u32, f: &[u32]) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for e in 1..=deg / 2 {
        let count = (p as u64).pow(e as u32);
        for low in 0..count {
            let mut divisor = Vec::with_capacity(e + 1);
            let mut h = low;
            for _ in 0..e {
                divisor.push((h % p as u64) as u32);
                h /= p as u64;
            }
            divisor.push(1);
            if rem_mod_p(p, f, &divisor).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `n` over `GF(p)`, ordering candidates
/// by the handle of their lower `n` coefficients.
pub(crate) fn default_modulus(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for low in 0..count {
        let mut f = Vec::with_capacity(n as usize + 1);
        let mut h = low;
        for _ in 0..n {
            f.push((h % p as u64) as u32);
            h /= p as u64;
        }
        f.push(1);
        if is_irreducible_mod_p(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
