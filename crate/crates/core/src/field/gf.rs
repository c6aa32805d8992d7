//! Finite fields `GF(p^m)` in a polynomial basis, with log/exp tables.
//!
//! An element is stored as the integer whose base-`p` digits are its
//! coefficients in the basis `1, g, g^2, ...`, where `g` is the class of `x`
//! modulo the defining polynomial. Integer order on the codes is the
//! lexicographic order used when enumerating the field.

use std::fmt;

use super::FieldError;

/// Element of a [`FiniteField`], identified by its digit code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf(pub u16);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Fixed defaults so that reports are reproducible across builds.
fn default_modulus(p: u32, m: u32) -> Option<Vec<u32>> {
    match (p, m) {
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (2, 5) => Some(vec![1, 0, 1, 0, 0, 1]),
        (3, 3) => Some(vec![1, 2, 0, 1]),
        _ => None,
    }
}

const MAX_ORDER: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    m: u32,
    q: u32,
    /// Monic defining polynomial, lowest coefficient first.
    modulus: Vec<u32>,
    exp: Vec<u16>,
    log: Vec<u32>,
    add: Option<Vec<u16>>,
    neg: Vec<u16>,
    /// `theta(a) = a^(p^(n+1))` as a shift of discrete logarithms.
    theta_mult: u64,
    frob_mult: u64,
}

impl FiniteField {
    /// `GF(p^m)` with the default or smallest irreducible modulus.
    pub fn new(p: u32, m: u32) -> Result<Self, FieldError> {
        if p != 2 && p != 3 {
            return Err(FieldError::Config(format!(
                "characteristic {p} is not 2 or 3"
            )));
        }
        if m == 0 || m.is_multiple_of(2) {
            return Err(FieldError::Config(format!("degree {m} must be odd")));
        }
        if (p as u64).checked_pow(m).is_none_or(|q| q > MAX_ORDER) {
            return Err(FieldError::Config(format!("GF({p}^{m}) is too large")));
        }
        let modulus = match default_modulus(p, m) {
            Some(f) => f,
            None => smallest_irreducible(p, m),
        };
        Self::with_modulus(p, modulus)
    }

    /// `GF(p^m)` for an explicit monic irreducible polynomial (low to high).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        let m = (modulus.len() as u32).saturating_sub(1);
        if m == 0 || modulus[m as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::Config(
                "modulus must be monic with digits below p".into(),
            ));
        }
        if m.is_multiple_of(2) {
            return Err(FieldError::Config(format!("degree {m} must be odd")));
        }
        if !is_irreducible(p, &modulus) {
            return Err(FieldError::Config("modulus is reducible".into()));
        }
        let q = p.pow(m);
        let mut f = FiniteField {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add: None,
            neg: Vec::new(),
            theta_mult: 0,
            frob_mult: p as u64,
        };
        f.neg = (0..q).map(|c| f.digit_neg(c as u16)).collect();
        if q <= 1024 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = f.digit_add(a as u16, b as u16);
                }
            }
            f.add = Some(t);
        }
        f.build_tables();
        let n = (m - 1) / 2;
        f.theta_mult = (p as u64).pow(n + 1);
        Ok(f)
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        let g = (1..self.q as u16)
            .find(|&c| self.slow_order(c) == order)
            .expect("a finite field has a primitive element");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u16;
        for k in 0..order {
            exp.push(x);
            log[x as usize] = k;
            x = self.slow_mul(x, g);
        }
        self.exp = exp;
        self.log = log;
    }

    fn slow_order(&self, c: u16) -> u32 {
        let mut x = c;
        let mut k = 1;
        while x != 1 {
            x = self.slow_mul(x, c);
            k += 1;
            if k > self.q {
                return 0;
            }
        }
        k
    }

    fn digits(&self, c: u16) -> Vec<u32> {
        let mut c = c as u32;
        (0..self.m)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    fn from_digits(&self, d: &[u32]) -> u16 {
        d.iter().rev().fold(0u32, |acc, &x| acc * self.p + x) as u16
    }

    fn digit_add(&self, a: u16, b: u16) -> u16 {
        if self.p == 2 {
            return a ^ b;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&s)
    }

    fn digit_neg(&self, a: u16) -> u16 {
        let d: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|x| (self.p - x) % self.p)
            .collect();
        self.from_digits(&d)
    }

    fn slow_mul(&self, a: u16, b: u16) -> u16 {
        let (da, db) = (self.digits(a), self.digits(b));
        let m = self.m as usize;
        let mut prod = vec![0u32; 2 * m];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % self.p;
            }
        }
        for k in (m..2 * m).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..m {
                let sub = c * self.modulus[i] % self.p;
                prod[k - m + i] = (prod[k - m + i] + self.p - sub) % self.p;
            }
        }
        self.from_digits(&prod[..m])
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// All elements in code order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.q as u16).map(Gf)
    }

    /// The class `g` of `x`.
    pub fn generator(&self) -> Gf {
        if self.m == 1 {
            Gf(0)
        } else {
            Gf(self.p as u16)
        }
    }

    pub fn from_int(&self, n: i64) -> Gf {
        Gf(n.rem_euclid(self.p as i64) as u16)
    }

    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        match &self.add {
            Some(t) => Gf(t[a.0 as usize * self.q as usize + b.0 as usize]),
            None => Gf(self.digit_add(a.0, b.0)),
        }
    }

    pub fn neg(&self, a: Gf) -> Gf {
        Gf(self.neg[a.0 as usize])
    }

    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() || b.is_zero() {
            return Gf::ZERO;
        }
        let k = (self.log[a.0 as usize] + self.log[b.0 as usize]) % (self.q - 1);
        Gf(self.exp[k as usize])
    }

    pub fn inv(&self, a: Gf) -> Result<Gf, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let k = (self.q - 1 - self.log[a.0 as usize]) % (self.q - 1);
        Ok(Gf(self.exp[k as usize]))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer `e`; `0^0 = 1`.
    pub fn pow(&self, a: Gf, e: i64) -> Result<Gf, FieldError> {
        if e == 0 {
            return Ok(Gf::ONE);
        }
        if a.is_zero() {
            return if e > 0 {
                Ok(Gf::ZERO)
            } else {
                Err(FieldError::DivisionByZero)
            };
        }
        let ord = (self.q - 1) as i64;
        let k = ((self.log[a.0 as usize] as i64) * e.rem_euclid(ord)).rem_euclid(ord);
        Ok(Gf(self.exp[k as usize]))
    }

    fn log_power(&self, a: Gf, mult: u64) -> Gf {
        if a.is_zero() {
            return a;
        }
        let ord = (self.q - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (mult % ord)) % ord;
        Gf(self.exp[k as usize])
    }

    /// The Tits endomorphism `a -> a^(p^(n+1))`, where `m = 2n + 1`.
    pub fn theta(&self, a: Gf) -> Gf {
        self.log_power(a, self.theta_mult)
    }

    pub fn frobenius(&self, a: Gf) -> Gf {
        self.log_power(a, self.frob_mult)
    }

    /// Polynomial literal in `g`, highest degree first, e.g. `g^2+2*g+1`.
    pub fn format(&self, a: Gf) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let d = self.digits(a.0);
        let mut parts = Vec::new();
        for (k, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "g".into(),
                _ => format!("g^{k}"),
            };
            parts.push(match (c, k) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        parts.join("+")
    }

    /// Parses the literal produced by [`FiniteField::format`]; `-` negates a term.
    /// `offset` shifts reported error positions.
    pub fn parse(&self, text: &str, offset: usize) -> Result<Gf, FieldError> {
        let syntax = |pos: usize, msg: &str| FieldError::Syntax {
            pos: offset + pos,
            msg: msg.into(),
        };
        let bytes = text.as_bytes();
        if text.trim().is_empty() {
            return Err(syntax(0, "empty field literal"));
        }
        let mut acc = Gf::ZERO;
        let mut i = 0;
        let mut first = true;
        while i < bytes.len() {
            while i < bytes.len() && bytes[i] == b' ' {
                i += 1;
            }
            let mut negate = false;
            if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                negate = bytes[i] == b'-';
                i += 1;
            } else if !first {
                return Err(syntax(i, "expected '+' or '-'"));
            }
            while i < bytes.len() && bytes[i] == b' ' {
                i += 1;
            }
            let start = i;
            while i < bytes.len() && !matches!(bytes[i], b'+' | b'-') {
                i += 1;
            }
            let term = text[start..i].trim();
            let value = self.parse_term(term, offset + start)?;
            acc = if negate {
                self.sub(acc, value)
            } else {
                self.add(acc, value)
            };
            first = false;
        }
        Ok(acc)
    }

    fn parse_term(&self, term: &str, pos: usize) -> Result<Gf, FieldError> {
        let syntax = |msg: &str| FieldError::Syntax {
            pos,
            msg: msg.into(),
        };
        if term.is_empty() {
            return Err(syntax("empty term"));
        }
        let (coef, mono) = match term.split_once('*') {
            Some((c, m)) => (c.trim(), Some(m.trim())),
            None if term.starts_with('g') => ("1", Some(term)),
            None => (term, None),
        };
        let c: i64 = coef.parse().map_err(|_| syntax("bad coefficient"))?;
        let c = self.from_int(c);
        let Some(mono) = mono else { return Ok(c) };
        let k: i64 = match mono {
            "g" => 1,
            _ => mono
                .strip_prefix("g^")
                .and_then(|e| e.parse().ok())
                .ok_or_else(|| syntax("expected g or g^k"))?,
        };
        if self.m == 1 && k > 0 {
            return Err(syntax("prime field has no generator g"));
        }
        let mut g_pow = Gf::ONE;
        for _ in 0..k {
            g_pow = self.slow_mul(g_pow.0, self.generator().0).into();
        }
        Ok(self.mul(c, g_pow))
    }
}

impl From<u16> for Gf {
    fn from(c: u16) -> Gf {
        Gf(c)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

fn poly_rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = (1..p).find(|x| x * b[db] % p == 1).unwrap();
    while r.len() > db {
        let c = r[r.len() - 1] * lead_inv % p;
        let shift = r.len() - 1 - db;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bi % p) % p;
        }
        r.pop();
        while r.last() == Some(&0) && r.len() > 1 {
            r.pop();
        }
    }
    r
}

/// Trial division by every monic polynomial of degree at most half.
fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g: Vec<u32> = (0..d)
                .scan(code, |c, _| {
                    let x = *c % p;
                    *c /= p;
                    Some(x)
                })
                .collect();
            g.push(1);
            if poly_rem(p, f, &g).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    (0..p.pow(m))
        .map(|code| {
            let mut g: Vec<u32> = (0..m)
                .scan(code, |c, _| {
                    let x = *c % p;
                    *c /= p;
                    Some(x)
                })
                .collect();
            g.push(1);
            g
        })
        .find(|g| is_irreducible(p, g))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf8_product_reduces_by_modulus() {
        let f = FiniteField::new(2, 3).unwrap();
        let g = f.generator();
        let g2 = f.mul(g, g);
        assert_eq!(f.mul(g, g2), f.parse("g+1", 0).unwrap());
    }

    #[test]
    fn gf8_theta_is_fourth_power() {
        let f = FiniteField::new(2, 3).unwrap();
        let g = f.generator();
        assert_eq!(f.theta(g), f.parse("g^2+g", 0).unwrap());
        for a in f.elements() {
            assert_eq!(f.theta(f.theta(a)), f.frobenius(a));
        }
    }

    #[test]
    fn default_moduli() {
        assert_eq!(
            FiniteField::new(2, 5).unwrap().modulus(),
            &[1, 0, 1, 0, 0, 1]
        );
        assert_eq!(FiniteField::new(3, 3).unwrap().modulus(), &[1, 2, 0, 1]);
        assert_eq!(FiniteField::new(3, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(FiniteField::new(2, 7).unwrap().order(), 128);
    }

    #[test]
    fn rejects_bad_degrees_and_moduli() {
        assert!(FiniteField::new(2, 2).is_err());
        assert!(FiniteField::new(5, 1).is_err());
        assert!(FiniteField::with_modulus(2, vec![1, 0, 1]).is_err());
        assert!(FiniteField::with_modulus(2, vec![1, 1, 1, 1]).is_err());
    }

    #[test]
    fn multiplicative_group_orders() {
        for (p, m) in [(2, 1), (2, 3), (2, 5), (3, 1), (3, 3)] {
            let f = FiniteField::new(p, m).unwrap();
            let units: Vec<Gf> = f.elements().filter(|a| !a.is_zero()).collect();
            assert_eq!(units.len() as u32, p.pow(m) - 1);
            for &a in &units {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Gf::ONE);
                assert_eq!(f.pow(a, (p.pow(m) - 1) as i64).unwrap(), Gf::ONE);
            }
        }
    }

    #[test]
    fn literals_round_trip() {
        let f = FiniteField::new(3, 3).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse(&f.format(a), 0).unwrap(), a);
        }
        assert_eq!(f.parse("-1", 0).unwrap(), f.from_int(2));
        assert_eq!(f.format(f.parse("2*g^2+g", 0).unwrap()), "2*g^2+g");
        assert!(matches!(
            f.parse("1 + h", 0),
            Err(FieldError::Syntax { pos: 4, .. })
        ));
    }
}
