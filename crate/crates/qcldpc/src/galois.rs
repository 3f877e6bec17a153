//! GF(2^r) arithmetic, cyclotomic cosets of 2, and the length-e Fourier
//! transform pair.
//!
//! A [`FieldContext`] fixes the extension degree `r` and the defining
//! primitive polynomial, and precomputes log/antilog tables so that
//! multiplication reduces to exponent arithmetic modulo `e = 2^r - 1`.
//! Elements are canonical: either the zero element or a power `a^k`
//! (`0 <= k < e`) of the fixed primitive element `a`. Contexts are immutable
//! after construction and safe to share across threads.

use std::fmt;

use crate::error::Error;

/// Smallest supported extension degree.
pub const MIN_EXTENSION: u32 = 2;
/// Largest supported extension degree.
pub const MAX_EXTENSION: u32 = 16;

/// Minimal-weight primitive polynomials over GF(2) for degrees 2..=16, as
/// bitmasks including the x^r term (e.g. 0x7 is x^2 + x + 1). Fixing one
/// published polynomial per degree keeps CPM positions reproducible; ranks do
/// not depend on the choice.
const PRIMITIVE_POLYS: [u32; 15] = [
    0x7,     // r=2:  x^2 + x + 1
    0xB,     // r=3:  x^3 + x + 1
    0x13,    // r=4:  x^4 + x + 1
    0x25,    // r=5:  x^5 + x^2 + 1
    0x43,    // r=6:  x^6 + x + 1
    0x89,    // r=7:  x^7 + x^3 + 1
    0x11D,   // r=8:  x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // r=9:  x^9 + x^4 + 1
    0x409,   // r=10: x^10 + x^3 + 1
    0x805,   // r=11: x^11 + x^2 + 1
    0x1053,  // r=12: x^12 + x^6 + x^4 + x + 1
    0x201B,  // r=13: x^13 + x^4 + x^3 + x + 1
    0x4443,  // r=14: x^14 + x^10 + x^6 + x + 1
    0x8003,  // r=15: x^15 + x + 1
    0x1100B, // r=16: x^16 + x^12 + x^3 + x + 1
];

/// An element of GF(2^r): the zero element or a power of the primitive
/// element. Exactly one representation exists per field value; the exponent
/// of `Alpha(k)` always satisfies `0 <= k < e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldElement {
    /// The additive identity.
    Zero,
    /// `a^k` for the primitive element `a`.
    Alpha(u32),
}

impl FieldElement {
    /// The multiplicative identity `a^0`.
    pub const ONE: FieldElement = FieldElement::Alpha(0);

    pub fn is_zero(self) -> bool {
        self == FieldElement::Zero
    }

    pub fn is_one(self) -> bool {
        self == FieldElement::ONE
    }

    /// Exponent of a nonzero element, `None` for zero.
    pub fn exponent(self) -> Option<u32> {
        match self {
            FieldElement::Zero => None,
            FieldElement::Alpha(k) => Some(k),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Zero => write!(f, "0"),
            FieldElement::Alpha(0) => write!(f, "1"),
            FieldElement::Alpha(1) => write!(f, "a"),
            FieldElement::Alpha(k) => write!(f, "a^{k}"),
        }
    }
}

/// A concrete GF(2^r) with its log/antilog tables.
#[derive(Debug, Clone)]
pub struct FieldContext {
    r: u32,
    q: u32,
    e: u32,
    primitive_poly: u32,
    /// `log[x]` is the exponent of the nonzero polynomial representation `x`.
    log: Vec<u32>,
    /// `antilog[k]` is the polynomial representation of `a^k`.
    antilog: Vec<u32>,
}

impl FieldContext {
    /// Builds GF(2^r) from the fixed primitive polynomial for `r`.
    pub fn new(r: u32) -> Result<FieldContext, Error> {
        if !(MIN_EXTENSION..=MAX_EXTENSION).contains(&r) {
            return Err(Error::UnsupportedExtension { r });
        }
        let primitive_poly = PRIMITIVE_POLYS[(r - MIN_EXTENSION) as usize];
        let q = 1u32 << r;
        let e = q - 1;
        let mut antilog = vec![0u32; e as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = 1u32;
        for k in 0..e {
            antilog[k as usize] = cur;
            debug_assert_eq!(log[cur as usize], u32::MAX, "non-primitive polynomial");
            log[cur as usize] = k;
            cur <<= 1;
            if cur & q != 0 {
                cur ^= primitive_poly;
            }
        }
        debug_assert_eq!(cur, 1, "a^e != 1 for the configured polynomial");
        Ok(FieldContext {
            r,
            q,
            e,
            primitive_poly,
            log,
            antilog,
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Field size `q = 2^r`.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Multiplicative group order `e = 2^r - 1`.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// Bitmask of the defining primitive polynomial (x^r term included).
    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Whether `other` realizes the same field (same degree and polynomial).
    pub fn same_field(&self, other: &FieldContext) -> bool {
        self.r == other.r && self.primitive_poly == other.primitive_poly
    }

    /// `a^k`, reducing `k` modulo `e`.
    pub fn alpha(&self, k: u64) -> FieldElement {
        FieldElement::Alpha((k % self.e as u64) as u32)
    }

    /// Element with the given polynomial representation.
    pub fn from_poly(&self, bits: u32) -> FieldElement {
        if bits == 0 {
            FieldElement::Zero
        } else {
            debug_assert!(bits < self.q);
            FieldElement::Alpha(self.log[bits as usize])
        }
    }

    /// Polynomial representation (0 for the zero element).
    pub fn to_poly(&self, x: FieldElement) -> u32 {
        match x {
            FieldElement::Zero => 0,
            FieldElement::Alpha(k) => self.antilog[k as usize],
        }
    }

    /// Characteristic-2 addition (subtraction is identical).
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.from_poly(self.to_poly(a) ^ self.to_poly(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Zero, _) | (_, FieldElement::Zero) => FieldElement::Zero,
            (FieldElement::Alpha(i), FieldElement::Alpha(j)) => {
                FieldElement::Alpha((i + j) % self.e)
            }
        }
    }

    /// Multiplicative inverse. The zero element has none; calling this on
    /// zero is a contract violation and panics.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        match a {
            FieldElement::Zero => panic!("inverse of the zero element"),
            FieldElement::Alpha(k) => FieldElement::Alpha((self.e - k) % self.e),
        }
    }

    /// Exponent (log) of a nonzero element; panics on zero.
    pub fn log(&self, a: FieldElement) -> u32 {
        a.exponent().expect("log of the zero element")
    }

    /// `a` raised to the `t`-th power, with the scalar convention `x^0 = 1`.
    /// Hadamard powers of matrices use their own `0^0 = 0` convention; see
    /// [`crate::matrix::BaseMatrix::hadamard_power`].
    pub fn pow(&self, a: FieldElement, t: u64) -> FieldElement {
        if t == 0 {
            return FieldElement::ONE;
        }
        match a {
            FieldElement::Zero => FieldElement::Zero,
            FieldElement::Alpha(k) => {
                FieldElement::Alpha(((k as u64 * (t % self.e as u64)) % self.e as u64) as u32)
            }
        }
    }

    /// All q elements: zero first, then `1, a, a^2, ...`.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        std::iter::once(FieldElement::Zero).chain((0..self.e).map(FieldElement::Alpha))
    }
}

/// One cyclotomic coset of 2 modulo `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coset {
    representative: u32,
    members: Vec<u32>,
}

impl Coset {
    /// Smallest member of the coset.
    pub fn representative(&self) -> u32 {
        self.representative
    }

    /// Members in doubling order, representative first.
    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// The cyclotomic cosets of 2 modulo `e`, ordered by increasing
/// representative. Coset 0 is always `{0}`.
#[derive(Debug, Clone)]
pub struct CyclotomicCosets {
    e: u32,
    cosets: Vec<Coset>,
    class_of: Vec<u32>,
}

impl CyclotomicCosets {
    pub fn e(&self) -> u32 {
        self.e
    }

    /// Number of cosets (the paper's lambda).
    pub fn count(&self) -> usize {
        self.cosets.len()
    }

    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    /// Index of the coset containing `t`.
    pub fn class_of(&self, t: u32) -> usize {
        self.class_of[t as usize] as usize
    }
}

/// Partitions `{0, 1, ..., e-1}` into cyclotomic cosets of 2 modulo `e` by
/// the smallest-unused-integer recursion: each new coset starts at the
/// smallest integer not yet covered and doubles modulo `e` until it closes.
///
/// The orbit structure requires an odd modulus (doubling must be invertible
/// modulo `e`); `e` is `2^r - 1` or a divisor of it everywhere in this crate.
pub fn cyclotomic_cosets(e: u32) -> CyclotomicCosets {
    assert!(e >= 1, "modulus must be positive");
    assert!(e == 1 || e % 2 == 1, "doubling orbits need an odd modulus");
    let mut class_of = vec![u32::MAX; e as usize];
    let mut cosets = Vec::new();
    for start in 0..e {
        if class_of[start as usize] != u32::MAX {
            continue;
        }
        let index = cosets.len() as u32;
        let mut members = Vec::new();
        let mut t = start;
        loop {
            class_of[t as usize] = index;
            members.push(t);
            t = (2 * t) % e;
            if t == start {
                break;
            }
        }
        cosets.push(Coset {
            representative: start,
            members,
        });
    }
    CyclotomicCosets {
        e,
        cosets,
        class_of,
    }
}

/// Fourier transform of a length-e vector: `b_t = sum_l a_l a^(l t)`.
///
/// For binary input the output satisfies the conjugacy constraint
/// `b_(2t mod e) = b_t^2` (see [`satisfies_conjugacy`]).
pub fn fourier(a: &[FieldElement], ctx: &FieldContext) -> Result<Vec<FieldElement>, Error> {
    let e = ctx.e() as usize;
    if a.len() != e {
        return Err(Error::LengthMismatch {
            expected: e,
            got: a.len(),
        });
    }
    let mut out = Vec::with_capacity(e);
    for t in 0..e as u64 {
        let mut acc = 0u32;
        for (l, &al) in a.iter().enumerate() {
            if al.is_zero() {
                continue;
            }
            acc ^= ctx.to_poly(ctx.mul(al, ctx.alpha(l as u64 * t)));
        }
        out.push(ctx.from_poly(acc));
    }
    Ok(out)
}

/// Inverse Fourier transform: `a_l = sum_t b_t a^(-l t)`.
///
/// Round-trips with [`fourier`]; if `b` satisfies the conjugacy constraint
/// every output component is 0 or 1 (check with [`is_binary`]). A violating
/// input is not an error: the output simply contains non-binary elements.
pub fn inverse_fourier(b: &[FieldElement], ctx: &FieldContext) -> Result<Vec<FieldElement>, Error> {
    let e = ctx.e() as usize;
    if b.len() != e {
        return Err(Error::LengthMismatch {
            expected: e,
            got: b.len(),
        });
    }
    let mut out = Vec::with_capacity(e);
    for l in 0..e as u64 {
        let mut acc = 0u32;
        for (t, &bt) in b.iter().enumerate() {
            if bt.is_zero() {
                continue;
            }
            let exp = (e as u64 - (l * t as u64) % e as u64) % e as u64;
            acc ^= ctx.to_poly(ctx.mul(bt, ctx.alpha(exp)));
        }
        out.push(ctx.from_poly(acc));
    }
    Ok(out)
}

/// Whether `b_(2t mod e) = b_t^2` holds for every `t`.
pub fn satisfies_conjugacy(b: &[FieldElement], ctx: &FieldContext) -> bool {
    let e = ctx.e() as usize;
    if b.len() != e {
        return false;
    }
    (0..e).all(|t| b[(2 * t) % e] == ctx.mul(b[t], b[t]))
}

/// Whether every component is 0 or 1.
pub fn is_binary(v: &[FieldElement]) -> bool {
    v.iter().all(|&x| x.is_zero() || x.is_one())
}
