//! Polynomials over `F_q`, rational maps on `P^1(F_q)`, their enumeration,
//! and `PGL_2` conjugation.
//!
//! Degree conventions: every constant has degree 0, including the zero
//! polynomial and the map sending all of `P^1(F_q)` to infinity. A rational
//! map is stored as a canonical coprime pair with monic denominator; the
//! constant-infinity map is the pair `(1, 0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FqElem};

/// Polynomial with coefficients least significant first and no trailing
/// zeros; the zero polynomial is the empty list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<FqElem>", into = "Vec<FqElem>")]
pub struct Poly {
    coeffs: Vec<FqElem>,
}

impl From<Vec<FqElem>> for Poly {
    fn from(coeffs: Vec<FqElem>) -> Self {
        Poly::from_coeffs(coeffs)
    }
}

impl From<Poly> for Vec<FqElem> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(FqElem::ONE)
    }

    pub fn x() -> Self {
        Poly {
            coeffs: vec![FqElem::ZERO, FqElem::ONE],
        }
    }

    pub fn constant(c: FqElem) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `x - root`
    pub fn monic_linear(ctx: &FieldCtx, root: FqElem) -> Self {
        Poly {
            coeffs: vec![ctx.neg(root), FqElem::ONE],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<FqElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_handles(handles: &[u32]) -> Self {
        Poly::from_coeffs(handles.iter().map(|&h| FqElem::from_handle(h)).collect())
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn handles(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.handle()).collect()
    }

    /// Checks that every coefficient is a valid handle of `ctx`.
    pub fn validate(&self, ctx: &FieldCtx) -> Result<()> {
        for c in &self.coeffs {
            ctx.elem(c.handle())?;
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with every constant (zero included) of degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn leading(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FqElem::ONE
    }

    #[inline]
    pub fn eval(&self, ctx: &FieldCtx, x: FqElem) -> FqElem {
        eval_coeffs(ctx, &self.coeffs, x)
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..len)
                .map(|i| ctx.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| ctx.neg(c)).collect(),
        }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn scale(&self, ctx: &FieldCtx, s: FqElem) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&c| ctx.mul(c, s)).collect())
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, ctx: &FieldCtx, e: usize) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(ctx, self))
    }

    /// Quotient and remainder; dividing by zero is an error.
    pub fn div_rem(&self, ctx: &FieldCtx, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.len() < divisor.coeffs.len() {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead_inv = ctx.inv(divisor.leading())?;
        let dd = divisor.degree();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FqElem::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = ctx.mul(rem[i], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &dj) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = ctx.sub(rem[idx], ctx.mul(c, dj));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, ctx: &FieldCtx, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(ctx, divisor)?.1)
    }

    pub fn divides(&self, ctx: &FieldCtx, other: &Poly) -> bool {
        !self.is_zero() && other.rem(ctx, self).is_ok_and(|r| r.is_zero())
    }

    /// Rescales to leading coefficient 1; the zero polynomial is returned as is.
    pub fn monic(&self, ctx: &FieldCtx) -> Poly {
        match ctx.inv(self.leading()) {
            Ok(s) => self.scale(ctx, s),
            Err(_) => Poly::zero(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(ctx, &b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    /// Trial division by every monic polynomial of degree up to half.
    pub fn is_irreducible(&self, ctx: &FieldCtx) -> bool {
        let deg = self.degree();
        if self.is_zero() || deg == 0 {
            return false;
        }
        (1..=deg / 2).all(|e| monic_polys(ctx, e).all(|g| !g.divides(ctx, self)))
    }
}

#[inline]
pub(crate) fn eval_coeffs(ctx: &FieldCtx, coeffs: &[FqElem], x: FqElem) -> FqElem {
    coeffs
        .iter()
        .rev()
        .fold(FqElem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
}

pub fn eval_poly(ctx: &FieldCtx, f: &Poly, x: FqElem) -> FqElem {
    f.eval(ctx, x)
}

/// All monic polynomials of degree exactly `e`, lower coefficients in handle order.
pub fn monic_polys(ctx: &FieldCtx, e: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = ctx.q() as u64;
    let count = q.pow(e as u32);
    (0..count).map(move |idx| {
        let mut coeffs = digits_base_q(idx, q, e);
        coeffs.push(FqElem::ONE);
        Poly { coeffs }
    })
}

fn digits_base_q(mut idx: u64, q: u64, len: usize) -> Vec<FqElem> {
    (0..len)
        .map(|_| {
            let d = (idx % q) as u32;
            idx /= q;
            FqElem::from_handle(d)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeMode {
    Exactly,
    AtMost,
}

/// Indexable space of polynomials of a given degree.
///
/// `AtMost` covers all `q^(d+1)` polynomials of degree at most `d`, index
/// digits base `q` giving the coefficients. `Exactly` with `d >= 1` covers the
/// `q^d (q - 1)` polynomials of degree exactly `d`; with `d = 0` it covers all
/// `q` constants, the zero polynomial included.
#[derive(Clone, Debug)]
pub struct PolySpace {
    q: u64,
    d: usize,
    mode: DegreeMode,
    len: u128,
}

impl PolySpace {
    pub fn new(ctx: &FieldCtx, d: usize, mode: DegreeMode) -> Self {
        let q = ctx.q() as u64;
        let qp = |e: usize| (q as u128).saturating_pow(e as u32);
        let len = match mode {
            DegreeMode::AtMost => qp(d + 1),
            DegreeMode::Exactly if d == 0 => q as u128,
            DegreeMode::Exactly => qp(d).saturating_mul(q as u128 - 1),
        };
        PolySpace { q, d, mode, len }
    }

    pub fn len(&self) -> u128 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn degree_bound(&self) -> usize {
        self.d
    }

    /// Writes the coefficients of the polynomial at `index` into `buf`
    /// (length `d + 1`, possibly with trailing zeros).
    pub fn write(&self, index: u64, buf: &mut Vec<FqElem>) {
        buf.clear();
        match self.mode {
            DegreeMode::Exactly if self.d >= 1 => {
                let low_count = self.q.pow(self.d as u32);
                buf.extend(digits_base_q(index % low_count, self.q, self.d));
                buf.push(FqElem::from_handle((1 + index / low_count) as u32));
            }
            _ => buf.extend(digits_base_q(index, self.q, self.d + 1)),
        }
    }

    pub fn get(&self, index: u64) -> Poly {
        let mut buf = Vec::with_capacity(self.d + 1);
        self.write(index, &mut buf);
        Poly::from_coeffs(buf)
    }

    pub fn iter(&self) -> impl Iterator<Item = Poly> + '_ {
        (0..self.len as u64).map(move |i| self.get(i))
    }
}

pub fn enumerate_polys(ctx: &FieldCtx, d: usize, mode: DegreeMode) -> impl Iterator<Item = Poly> {
    let space = PolySpace::new(ctx, d, mode);
    (0..space.len() as u64).map(move |i| space.get(i))
}

/// Point of the projective line over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Finite(FqElem),
    Infinity,
}

impl ProjPoint {
    /// Vertex index: finite points by handle, infinity last at `q`.
    #[inline]
    pub fn to_index(self, ctx: &FieldCtx) -> usize {
        match self {
            ProjPoint::Finite(x) => x.index(),
            ProjPoint::Infinity => ctx.order(),
        }
    }

    #[inline]
    pub fn from_index(ctx: &FieldCtx, index: usize) -> Self {
        if index == ctx.order() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(FqElem::from_handle(index as u32))
        }
    }

    pub fn all(ctx: &FieldCtx) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..=ctx.order()).map(move |i| ProjPoint::from_index(ctx, i))
    }
}

/// Rational map on `P^1(F_q)` in canonical form: coprime numerator and monic
/// denominator, or the constant-infinity map stored as `(1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMap {
    num: Poly,
    den: Poly,
}

/// Reduces `num / den` to canonical form.
pub fn canonicalize_rational(ctx: &FieldCtx, num: &Poly, den: &Poly) -> Result<RationalMap> {
    RationalMap::new(ctx, num, den)
}

impl RationalMap {
    pub fn new(ctx: &FieldCtx, num: &Poly, den: &Poly) -> Result<Self> {
        if num.is_zero() && den.is_zero() {
            return Err(Error::ZeroPair);
        }
        if den.is_zero() {
            return Ok(Self::constant_infinity());
        }
        let g = num.gcd(ctx, den);
        let (num, _) = num.div_rem(ctx, &g)?;
        let (den, _) = den.div_rem(ctx, &g)?;
        let s = ctx.inv(den.leading())?;
        Ok(RationalMap {
            num: num.scale(ctx, s),
            den: den.scale(ctx, s),
        })
    }

    pub fn constant_infinity() -> Self {
        RationalMap {
            num: Poly::one(),
            den: Poly::zero(),
        }
    }

    pub fn from_poly(f: &Poly) -> Self {
        RationalMap {
            num: f.clone(),
            den: Poly::one(),
        }
    }

    /// Builds from a pair already known to be canonical.
    pub(crate) fn from_canonical(num: Poly, den: Poly) -> Self {
        RationalMap { num, den }
    }

    pub fn is_constant_infinity(&self) -> bool {
        self.den.is_zero()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    pub fn eval(&self, ctx: &FieldCtx, x: ProjPoint) -> ProjPoint {
        if self.is_constant_infinity() {
            return ProjPoint::Infinity;
        }
        match x {
            ProjPoint::Finite(x) => {
                let d = self.den.eval(ctx, x);
                match ctx.inv(d) {
                    Ok(dinv) => ProjPoint::Finite(ctx.mul(self.num.eval(ctx, x), dinv)),
                    Err(_) => ProjPoint::Infinity,
                }
            }
            ProjPoint::Infinity => {
                let (dn, dd) = (self.num.degree(), self.den.degree());
                if dn > dd {
                    ProjPoint::Infinity
                } else if dn < dd {
                    ProjPoint::Finite(FqElem::ZERO)
                } else {
                    // den is monic
                    ProjPoint::Finite(self.num.leading())
                }
            }
        }
    }
}

impl Serialize for RationalMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        if self.is_constant_infinity() {
            return s.serialize_str("INF");
        }
        let mut st = s.serialize_struct("RationalMap", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den)?;
        st.end()
    }
}

pub fn eval_rational(ctx: &FieldCtx, r: &RationalMap, x: ProjPoint) -> ProjPoint {
    r.eval(ctx, x)
}

/// Indexable space of canonical rational maps of bounded degree.
///
/// Raw indices run over (monic denominator, numerator) pairs: denominators by
/// degree then handle order, numerators over all polynomials of degree at
/// most `d` in handle order. Non-coprime pairs and pairs of the wrong degree
/// are holes. The constant-infinity map occupies the last raw index when the
/// space includes degree 0.
#[derive(Clone, Debug)]
pub struct RationalSpace {
    d: usize,
    mode: DegreeMode,
    dens: Vec<Poly>,
    nums: PolySpace,
    raw_len: u128,
}

impl RationalSpace {
    pub fn new(ctx: &FieldCtx, d: usize, mode: DegreeMode) -> Self {
        let nums = PolySpace::new(ctx, d, DegreeMode::AtMost);
        let den_count: u128 = (0..=d)
            .map(|e| (ctx.q() as u128).saturating_pow(e as u32))
            .fold(0u128, |a, b| a.saturating_add(b));
        let raw_len = den_count.saturating_mul(nums.len()).saturating_add(1);
        // Materialize denominators only when the whole space is addressable.
        let dens = if raw_len <= u64::MAX as u128 && den_count <= 1 << 24 {
            (0..=d).flat_map(|e| monic_polys(ctx, e)).collect()
        } else {
            Vec::new()
        };
        RationalSpace {
            d,
            mode,
            dens,
            nums,
            raw_len,
        }
    }

    pub fn raw_len(&self) -> u128 {
        self.raw_len
    }

    pub fn includes_infinity(&self) -> bool {
        self.mode == DegreeMode::AtMost || self.d == 0
    }

    /// Number of canonical maps in the space (closed form).
    pub fn count(&self, ctx: &FieldCtx) -> u128 {
        rat_count_closed(ctx.q() as u128, self.d, self.mode)
    }

    /// The canonical map at a raw index, or `None` for a hole.
    pub fn get(&self, ctx: &FieldCtx, raw: u64) -> Option<RationalMap> {
        let raw = raw as u128;
        if raw + 1 == self.raw_len {
            return self
                .includes_infinity()
                .then(RationalMap::constant_infinity);
        }
        let per_den = self.nums.len();
        let den = &self.dens[(raw / per_den) as usize];
        let num = self.nums.get((raw % per_den) as u64);
        let deg = num.degree().max(den.degree());
        if self.mode == DegreeMode::Exactly && deg != self.d {
            return None;
        }
        if num.gcd(ctx, den) != Poly::one() {
            return None;
        }
        Some(RationalMap::from_canonical(num, den.clone()))
    }

    pub fn iter<'a>(&'a self, ctx: &'a FieldCtx) -> impl Iterator<Item = RationalMap> + 'a {
        (0..self.raw_len as u64).filter_map(move |i| self.get(ctx, i))
    }
}

pub(crate) fn rat_count_closed(q: u128, d: usize, mode: DegreeMode) -> u128 {
    let qp = |e: usize| q.saturating_pow(e as u32);
    match mode {
        DegreeMode::AtMost => qp(2 * d + 1).saturating_add(1),
        DegreeMode::Exactly if d == 0 => q + 1,
        DegreeMode::Exactly => qp(2 * d - 1).saturating_mul(q * q - 1),
    }
}

pub fn enumerate_rationals(
    ctx: &FieldCtx,
    d: usize,
    mode: DegreeMode,
) -> impl Iterator<Item = RationalMap> + '_ {
    let space = RationalSpace::new(ctx, d, mode);
    (0..space.raw_len() as u64).filter_map(move |i| space.get(ctx, i))
}

/// Lagrange interpolation: the unique polynomial of degree below
/// `points.len()` through the given points.
pub fn interpolate(ctx: &FieldCtx, points: &[(FqElem, FqElem)]) -> Result<Poly> {
    if points.len() > ctx.order() {
        return Err(Error::TooManyPoints {
            points: points.len(),
            q: ctx.q() as u64,
        });
    }
    for (i, &(xi, _)) in points.iter().enumerate() {
        ctx.elem(xi.handle())?;
        if points[..i].iter().any(|&(xj, _)| xj == xi) {
            return Err(Error::DuplicateAbscissa(xi.handle()));
        }
    }
    let mut acc = Poly::zero();
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let mut basis = Poly::one();
        let mut denom = FqElem::ONE;
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i != j {
                basis = basis.mul(ctx, &Poly::monic_linear(ctx, xj));
                denom = ctx.mul(denom, ctx.sub(xi, xj));
            }
        }
        let s = ctx.div(yi, denom)?;
        acc = acc.add(ctx, &basis.scale(ctx, s));
    }
    Ok(acc)
}

/// Mobius transformation `x -> (a x + b) / (c x + d)` up to scalars, scaled
/// so the first nonzero entry of `(a, b, c, d)` is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "[FqElem; 4]")]
pub struct Mobius {
    a: FqElem,
    b: FqElem,
    c: FqElem,
    d: FqElem,
}

impl From<Mobius> for [FqElem; 4] {
    fn from(m: Mobius) -> Self {
        m.entries()
    }
}

impl Mobius {
    pub fn new(ctx: &FieldCtx, a: FqElem, b: FqElem, c: FqElem, d: FqElem) -> Result<Self> {
        if ctx.mul(a, d) == ctx.mul(b, c) {
            return Err(Error::SingularMobius);
        }
        let first = [a, b, c, d]
            .into_iter()
            .find(|e| !e.is_zero())
            .expect("nonzero determinant");
        let s = ctx.inv(first)?;
        Ok(Mobius {
            a: ctx.mul(a, s),
            b: ctx.mul(b, s),
            c: ctx.mul(c, s),
            d: ctx.mul(d, s),
        })
    }

    pub fn identity() -> Self {
        Mobius {
            a: FqElem::ONE,
            b: FqElem::ZERO,
            c: FqElem::ZERO,
            d: FqElem::ONE,
        }
    }

    pub fn entries(&self) -> [FqElem; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Self {
        Mobius::new(ctx, self.d, ctx.neg(self.b), ctx.neg(self.c), self.a)
            .expect("inverse of an invertible matrix")
    }

    /// `self ∘ other`
    pub fn compose(&self, ctx: &FieldCtx, other: &Mobius) -> Self {
        let m = |x: FqElem, y: FqElem, z: FqElem, w: FqElem| ctx.add(ctx.mul(x, y), ctx.mul(z, w));
        Mobius::new(
            ctx,
            m(self.a, other.a, self.b, other.c),
            m(self.a, other.b, self.b, other.d),
            m(self.c, other.a, self.d, other.c),
            m(self.c, other.b, self.d, other.d),
        )
        .expect("product of invertible matrices")
    }

    pub fn apply(&self, ctx: &FieldCtx, x: ProjPoint) -> ProjPoint {
        match x {
            ProjPoint::Finite(x) => {
                let den = ctx.add(ctx.mul(self.c, x), self.d);
                match ctx.inv(den) {
                    Ok(inv) => ProjPoint::Finite(ctx.mul(ctx.add(ctx.mul(self.a, x), self.b), inv)),
                    Err(_) => ProjPoint::Infinity,
                }
            }
            ProjPoint::Infinity => match ctx.inv(self.c) {
                Ok(inv) => ProjPoint::Finite(ctx.mul(self.a, inv)),
                Err(_) => ProjPoint::Infinity,
            },
        }
    }

    /// Every element of `PGL_2(F_q)`, `q (q^2 - 1)` in total.
    pub fn enumerate(ctx: &FieldCtx) -> Vec<Mobius> {
        let mut out = Vec::new();
        let els = ctx.enumerate_elements();
        for &a in &els {
            for &b in &els {
                for &c in &els {
                    for &d in &els {
                        let first = [a, b, c, d].into_iter().find(|e| !e.is_zero());
                        if first == Some(FqElem::ONE) && ctx.mul(a, d) != ctx.mul(b, c) {
                            out.push(Mobius { a, b, c, d });
                        }
                    }
                }
            }
        }
        out
    }
}

/// `φ ∘ r ∘ φ⁻¹` in canonical form, computed by substituting `φ⁻¹` into the
/// homogenized pair and applying `φ`.
pub fn conjugate(ctx: &FieldCtx, r: &RationalMap, phi: &Mobius) -> RationalMap {
    let deg = r.degree();
    let [a, b, c, d] = phi.entries();
    // φ⁻¹ = (d x - b) / (-c x + a)
    let x_part = Poly::from_coeffs(vec![ctx.neg(b), d]);
    let y_part = Poly::from_coeffs(vec![a, ctx.neg(c)]);
    let x_pows: Vec<Poly> = (0..=deg).map(|i| x_part.pow(ctx, i)).collect();
    let y_pows: Vec<Poly> = (0..=deg).map(|i| y_part.pow(ctx, i)).collect();
    let substitute = |f: &Poly| {
        (0..=deg).fold(Poly::zero(), |acc, i| {
            let term = x_pows[i].mul(ctx, &y_pows[deg - i]).scale(ctx, f.coeff(i));
            acc.add(ctx, &term)
        })
    };
    let n1 = substitute(r.num());
    let d1 = substitute(r.den());
    let num = n1.scale(ctx, a).add(ctx, &d1.scale(ctx, b));
    let den = n1.scale(ctx, c).add(ctx, &d1.scale(ctx, d));
    RationalMap::new(ctx, &num, &den).expect("conjugate of a nonzero pair is nonzero")
}

/// A self-map of a finite vertex set indexed `0..vertex_count`.
pub trait SelfMap {
    fn vertex_count(&self, ctx: &FieldCtx) -> usize;

    fn image(&self, ctx: &FieldCtx, vertex: usize) -> usize;

    fn fill_successors(&self, ctx: &FieldCtx, out: &mut Vec<u32>) {
        out.clear();
        out.extend((0..self.vertex_count(ctx)).map(|v| self.image(ctx, v) as u32));
    }
}

impl SelfMap for Poly {
    fn vertex_count(&self, ctx: &FieldCtx) -> usize {
        ctx.order()
    }

    #[inline]
    fn image(&self, ctx: &FieldCtx, vertex: usize) -> usize {
        self.eval(ctx, FqElem::from_handle(vertex as u32)).index()
    }
}

impl SelfMap for RationalMap {
    fn vertex_count(&self, ctx: &FieldCtx) -> usize {
        ctx.order() + 1
    }

    #[inline]
    fn image(&self, ctx: &FieldCtx, vertex: usize) -> usize {
        self.eval(ctx, ProjPoint::from_index(ctx, vertex)).to_index(ctx)
    }
}

/// Coefficient slice of a polynomial acting on `F_q`; lets hot loops evaluate
/// without building a [`Poly`].
#[derive(Clone, Copy, Debug)]
pub struct CoeffSlice<'a>(pub &'a [FqElem]);

impl SelfMap for CoeffSlice<'_> {
    fn vertex_count(&self, ctx: &FieldCtx) -> usize {
        ctx.order()
    }

    #[inline]
    fn image(&self, ctx: &FieldCtx, vertex: usize) -> usize {
        eval_coeffs(ctx, self.0, FqElem::from_handle(vertex as u32)).index()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;

    fn e(h: u32) -> FqElem {
        FqElem::from_handle(h)
    }

    fn p(h: &[u32]) -> Poly {
        Poly::from_handles(h)
    }

    #[test]
    fn eval_examples() {
        let f5 = make_field(5, 1, None).unwrap();
        assert_eq!(p(&[1, 0, 1]).eval(&f5, e(2)), e(0));
        for x in f5.elements() {
            assert_eq!(Poly::zero().eval(&f5, x), FqElem::ZERO);
        }
        let f2 = make_field(2, 1, None).unwrap();
        assert_eq!(p(&[0, 1, 1]).eval(&f2, e(0)), e(0));
        assert_eq!(p(&[0, 1, 1]).eval(&f2, e(1)), e(0));
    }

    #[test]
    fn canonicalize_examples() {
        let f3 = make_field(3, 1, None).unwrap();
        let r = RationalMap::new(&f3, &p(&[2, 2]), &p(&[2])).unwrap();
        assert_eq!((r.num(), r.den()), (&p(&[1, 1]), &p(&[1])));
        assert_eq!(r.degree(), 1);
        // x^2 - 1 over x - 1
        let r = RationalMap::new(&f3, &p(&[2, 0, 1]), &p(&[2, 1])).unwrap();
        assert_eq!((r.num(), r.den()), (&p(&[1, 1]), &p(&[1])));
        assert_eq!(r.degree(), 1);
        let inf = RationalMap::new(&f3, &p(&[1]), &Poly::zero()).unwrap();
        assert!(inf.is_constant_infinity());
        assert_eq!(inf.degree(), 0);
        assert_eq!(
            RationalMap::new(&f3, &Poly::zero(), &Poly::zero()),
            Err(Error::ZeroPair)
        );
        let zero = RationalMap::new(&f3, &Poly::zero(), &p(&[0, 2])).unwrap();
        assert_eq!((zero.num(), zero.den()), (&Poly::zero(), &Poly::one()));
    }

    #[test]
    fn eval_rational_examples() {
        let f3 = make_field(3, 1, None).unwrap();
        let recip = RationalMap::new(&f3, &Poly::one(), &Poly::x()).unwrap();
        assert_eq!(recip.eval(&f3, ProjPoint::Finite(e(0))), ProjPoint::Infinity);
        assert_eq!(recip.eval(&f3, ProjPoint::Infinity), ProjPoint::Finite(e(0)));
        assert_eq!(recip.eval(&f3, ProjPoint::Finite(e(2))), ProjPoint::Finite(e(2)));
        let r = RationalMap::new(&f3, &p(&[1, 0, 1]), &Poly::x()).unwrap();
        assert_eq!(r.eval(&f3, ProjPoint::Infinity), ProjPoint::Infinity);

        let f5 = make_field(5, 1, None).unwrap();
        let r = RationalMap::new(&f5, &p(&[1, 2]), &p(&[3, 1])).unwrap();
        assert_eq!(r.eval(&f5, ProjPoint::Infinity), ProjPoint::Finite(e(2)));

        let inf = RationalMap::constant_infinity();
        for x in ProjPoint::all(&f5) {
            assert_eq!(inf.eval(&f5, x), ProjPoint::Infinity);
        }
    }

    #[test]
    fn poly_enumeration_examples() {
        let f3 = make_field(3, 1, None).unwrap();
        assert_eq!(enumerate_polys(&f3, 2, DegreeMode::Exactly).count(), 18);
        assert!(enumerate_polys(&f3, 2, DegreeMode::Exactly).all(|f| f.degree() == 2));
        let f2 = make_field(2, 1, None).unwrap();
        let all: Vec<Poly> = enumerate_polys(&f2, 1, DegreeMode::AtMost).collect();
        assert_eq!(all, vec![Poly::zero(), p(&[1]), p(&[0, 1]), p(&[1, 1])]);
        let f5 = make_field(5, 1, None).unwrap();
        let consts: Vec<Poly> = enumerate_polys(&f5, 0, DegreeMode::Exactly).collect();
        assert_eq!(consts.len(), 5);
        assert_eq!(consts[0], Poly::zero());
    }

    #[test]
    fn rational_enumeration_examples() {
        let f2 = make_field(2, 1, None).unwrap();
        assert_eq!(enumerate_rationals(&f2, 1, DegreeMode::AtMost).count(), 9);
        let consts: Vec<RationalMap> = enumerate_rationals(&f2, 0, DegreeMode::Exactly).collect();
        assert_eq!(consts.len(), 3);
        assert_eq!(consts[0], RationalMap::from_poly(&Poly::zero()));
        assert_eq!(consts[1], RationalMap::from_poly(&Poly::one()));
        assert!(consts[2].is_constant_infinity());
        let deg1: Vec<RationalMap> = enumerate_rationals(&f2, 1, DegreeMode::Exactly).collect();
        assert_eq!(deg1.len(), 6);
        assert!(deg1.iter().all(|r| r.degree() == 1));
    }

    #[test]
    fn enumeration_cardinalities_match_closed_forms() {
        for (pp, n) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)] {
            let ctx = make_field(pp, n, None).unwrap();
            let q = ctx.q() as u128;
            for d in 0..=3usize {
                let at_most = PolySpace::new(&ctx, d, DegreeMode::AtMost).len();
                assert_eq!(at_most, q.pow(d as u32 + 1));
                let exactly = enumerate_polys(&ctx, d, DegreeMode::Exactly)
                    .filter(|f| f.degree() == d)
                    .count() as u128;
                let expected = if d == 0 { q } else { q.pow(d as u32) * (q - 1) };
                assert_eq!(exactly, expected);
                // rational enumeration is the expensive one; q=7, d=3 is 8e5 raw pairs
                if q.pow(2 * d as u32 + 2) <= 200_000 {
                    for mode in [DegreeMode::AtMost, DegreeMode::Exactly] {
                        let maps: Vec<RationalMap> = enumerate_rationals(&ctx, d, mode).collect();
                        assert_eq!(maps.len() as u128, rat_count_closed(q, d, mode), "q={q} d={d} {mode:?}");
                        let uniq: std::collections::HashSet<_> = maps.iter().collect();
                        assert_eq!(uniq.len(), maps.len());
                    }
                }
            }
        }
    }

    #[test]
    fn interpolate_examples() {
        let f5 = make_field(5, 1, None).unwrap();
        assert_eq!(interpolate(&f5, &[(e(0), e(1)), (e(1), e(2))]).unwrap(), p(&[1, 1]));
        assert_eq!(
            interpolate(&f5, &[(e(0), e(0)), (e(1), e(1)), (e(2), e(4))]).unwrap(),
            p(&[0, 0, 1])
        );
        let f3 = make_field(3, 1, None).unwrap();
        assert_eq!(interpolate(&f3, &[(e(0), e(2))]).unwrap(), p(&[2]));
        assert_eq!(
            interpolate(&f3, &[(e(1), e(2)), (e(1), e(0))]),
            Err(Error::DuplicateAbscissa(1))
        );
    }

    #[test]
    fn conjugation_examples() {
        let f3 = make_field(3, 1, None).unwrap();
        let sq = RationalMap::from_poly(&p(&[0, 0, 1]));
        assert_eq!(conjugate(&f3, &sq, &Mobius::identity()), sq);
        let shift = Mobius::new(&f3, e(1), e(1), e(0), e(1)).unwrap();
        let conj = conjugate(&f3, &sq, &shift);
        assert_eq!(conj.degree(), 2);
        // (x - 1)^2 + 1 = x^2 + x + 2 over F_3
        assert_eq!((conj.num(), conj.den()), (&p(&[2, 1, 1]), &Poly::one()));
        assert_eq!(conjugate(&f3, &conj, &shift.inverse(&f3)), sq);
    }

    #[test]
    fn pgl2_size_and_group_laws() {
        for (pp, n) in [(2, 1), (3, 1), (2, 2)] {
            let ctx = make_field(pp, n, None).unwrap();
            let q = ctx.q() as usize;
            let all = Mobius::enumerate(&ctx);
            assert_eq!(all.len(), q * (q * q - 1));
            for m in &all {
                assert_eq!(m.compose(&ctx, &m.inverse(&ctx)), Mobius::identity());
                for x in ProjPoint::all(&ctx) {
                    assert_eq!(m.inverse(&ctx).apply(&ctx, m.apply(&ctx, x)), x);
                }
            }
        }
    }

    #[test]
    fn conjugate_matches_pointwise_composition() {
        let ctx = make_field(2, 2, None).unwrap();
        let phis = Mobius::enumerate(&ctx);
        for r in enumerate_rationals(&ctx, 2, DegreeMode::AtMost).step_by(7) {
            for phi in phis.iter().step_by(5) {
                let c = conjugate(&ctx, &r, phi);
                assert_eq!(c.degree(), r.degree());
                let inv = phi.inverse(&ctx);
                for x in ProjPoint::all(&ctx) {
                    let expected = phi.apply(&ctx, r.eval(&ctx, inv.apply(&ctx, x)));
                    assert_eq!(c.eval(&ctx, x), expected);
                }
            }
        }
    }

    #[test]
    fn irreducibility() {
        let f2 = make_field(2, 1, None).unwrap();
        assert!(p(&[1, 1, 1]).is_irreducible(&f2));
        assert!(!p(&[1, 0, 1]).is_irreducible(&f2));
        assert!(!p(&[1]).is_irreducible(&f2));
        assert!(p(&[0, 1]).is_irreducible(&f2));
        let f3 = make_field(3, 1, None).unwrap();
        let count = monic_polys(&f3, 2).filter(|g| g.is_irreducible(&f3)).count();
        assert_eq!(count, 3); // (q^2 - q) / 2
    }

    #[test]
    fn serialization_shapes() {
        let f3 = make_field(3, 1, None).unwrap();
        let r = RationalMap::new(&f3, &p(&[1, 1]), &p(&[0, 1])).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"num":[1,1],"den":[0,1]}"#);
        assert_eq!(
            serde_json::to_string(&RationalMap::constant_infinity()).unwrap(),
            r#""INF""#
        );
        let m = Mobius::new(&f3, e(2), e(1), e(0), e(1)).unwrap();
        assert_eq!(serde_json::to_string(&m).unwrap(), "[1,2,0,2]");
        let back: Poly = serde_json::from_str("[1,2,0,0]").unwrap();
        assert_eq!(back, p(&[1, 2]));
    }
}
