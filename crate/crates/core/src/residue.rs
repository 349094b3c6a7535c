//! Arithmetic on Z/10Z and the two characteristic functions that decide the
//! parity of regular positions.
//!
//! Dividing by 3 in Z/10Z is multiplication by 7, so both functions look at
//! where `7a mod 10` lands.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue(u8);

impl Residue {
    pub const ALL: [Residue; 10] = {
        let mut all = [Residue(0); 10];
        let mut i = 0;
        while i < 10 {
            all[i] = Residue(i as u8);
            i += 1;
        }
        all
    };

    pub const fn new(value: u8) -> Self {
        Residue(value % 10)
    }

    /// Residue class of a non-negative length.
    pub const fn of(n: usize) -> Self {
        Residue((n % 10) as u8)
    }

    /// Residue class of a signed integer.
    pub const fn of_signed(n: i64) -> Self {
        Residue(n.rem_euclid(10) as u8)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    /// `self / 3`, i.e. `7 * self`.
    pub const fn third(self) -> Self {
        Residue((self.0 * 7) % 10)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        Residue((self.0 + rhs.0) % 10)
    }
}

impl Add<i64> for Residue {
    type Output = Residue;
    fn add(self, rhs: i64) -> Residue {
        Residue::of_signed(self.0 as i64 + rhs)
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        Residue((self.0 + 10 - rhs.0) % 10)
    }
}

impl Sub<i64> for Residue {
    type Output = Residue;
    fn sub(self, rhs: i64) -> Residue {
        Residue::of_signed(self.0 as i64 - rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue((10 - self.0) % 10)
    }
}

/// Parity index of a regular position: `+1` means SG value 0, `-1` means 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// The SG value a regular position with this sign takes.
    pub fn grundy(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, |acc, s| acc * s)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chi2Value {
    Plus,
    Zero,
    Minus,
}

impl Chi2Value {
    pub fn as_i8(self) -> i8 {
        match self {
            Chi2Value::Plus => 1,
            Chi2Value::Zero => 0,
            Chi2Value::Minus => -1,
        }
    }

    pub fn sign(self) -> Option<Sign> {
        match self {
            Chi2Value::Plus => Some(Sign::Plus),
            Chi2Value::Zero => None,
            Chi2Value::Minus => Some(Sign::Minus),
        }
    }
}

impl From<Sign> for Chi2Value {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Plus => Chi2Value::Plus,
            Sign::Minus => Chi2Value::Minus,
        }
    }
}

impl Neg for Chi2Value {
    type Output = Chi2Value;
    fn neg(self) -> Chi2Value {
        match self {
            Chi2Value::Plus => Chi2Value::Minus,
            Chi2Value::Zero => Chi2Value::Zero,
            Chi2Value::Minus => Chi2Value::Plus,
        }
    }
}

const fn chi1_from_formula(a: u8) -> bool {
    (a * 7) % 10 <= 4
}

const fn chi2_from_formula(a: u8) -> i8 {
    match (a * 7) % 10 {
        9 | 0 | 1 => 1,
        4..=6 => -1,
        _ => 0,
    }
}

const CHI1_PLUS: [bool; 10] = {
    let mut t = [false; 10];
    let mut a = 0;
    while a < 10 {
        t[a] = chi1_from_formula(a as u8);
        a += 1;
    }
    t
};

const CHI2: [i8; 10] = {
    let mut t = [0i8; 10];
    let mut a = 0;
    while a < 10 {
        t[a] = chi2_from_formula(a as u8);
        a += 1;
    }
    t
};

// The residue sets as they appear in the winning-position characterization.
const _: () = {
    let plus = [0usize, 2, 3, 6, 9];
    let mut a = 0;
    while a < 10 {
        let mut member = false;
        let mut j = 0;
        while j < plus.len() {
            if plus[j] == a {
                member = true;
            }
            j += 1;
        }
        assert!(CHI1_PLUS[a] == member);
        a += 1;
    }
    let chi2 = [1i8, 0, -1, 1, 0, -1, 0, 1, -1, 0];
    let mut a = 0;
    while a < 10 {
        assert!(CHI2[a] == chi2[a]);
        a += 1;
    }
};

pub fn chi1(a: Residue) -> Sign {
    if CHI1_PLUS[a.0 as usize] {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

pub fn chi2(a: Residue) -> Chi2Value {
    match CHI2[a.0 as usize] {
        1 => Chi2Value::Plus,
        -1 => Chi2Value::Minus,
        _ => Chi2Value::Zero,
    }
}

/// χ1 of a length.
pub fn chi1_len(n: usize) -> Sign {
    chi1(Residue::of(n))
}

/// χ2 of a length.
pub fn chi2_len(n: usize) -> Chi2Value {
    chi2(Residue::of(n))
}

/// Outcome of one identity at one residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub a: Residue,
    pub lhs: i8,
    pub rhs: i8,
    pub holds: bool,
}

/// Evaluates the seven χ-symmetry identities at every residue. The last one
/// has two halves and only applies where χ2(a) is non-zero.
pub fn prop21_check() -> Vec<IdentityCheck> {
    type Eval = fn(Residue) -> Option<(i8, i8)>;
    let identities: [(&'static str, Eval); 8] = [
        ("chi1(-a) = -chi1(a)", |a| Some((chi1(-a).as_i8(), -chi1(a).as_i8()))),
        ("chi1(5+a) = -chi1(a)", |a| Some((chi1(Residue(5) + a).as_i8(), -chi1(a).as_i8()))),
        ("chi1(5-a) = chi1(a)", |a| Some((chi1(Residue(5) - a).as_i8(), chi1(a).as_i8()))),
        ("chi2(-a) = chi2(a)", |a| Some((chi2(-a).as_i8(), chi2(a).as_i8()))),
        ("chi2(5+a) = -chi2(a)", |a| Some((chi2(Residue(5) + a).as_i8(), -chi2(a).as_i8()))),
        ("chi2(5-a) = -chi2(a)", |a| Some((chi2(Residue(5) - a).as_i8(), -chi2(a).as_i8()))),
        ("chi1(a-1) = chi2(a) where chi2(a) != 0", |a| {
            (chi2(a) != Chi2Value::Zero).then(|| (chi1(a - 1).as_i8(), chi2(a).as_i8()))
        }),
        ("chi1(a-2) = -chi2(a) where chi2(a) != 0", |a| {
            (chi2(a) != Chi2Value::Zero).then(|| (chi1(a - 2).as_i8(), -chi2(a).as_i8()))
        }),
    ];
    let mut out = Vec::new();
    for (identity, eval) in identities {
        for a in Residue::ALL {
            if let Some((lhs, rhs)) = eval(a) {
                out.push(IdentityCheck { identity, a, lhs, rhs, holds: lhs == rhs });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AlphaCheck {
    pub a: Residue,
    pub b: Residue,
    pub first_holds: bool,
    pub second_holds: bool,
}

/// Evaluates both sides of the two candidate equalities
/// `χ1(a)χ1(b) = χ1(a+b+4)` and `χ1(a+1)χ1(b-1) = χ1(a+b+4)`.
pub fn lemma_alpha_check(a: Residue, b: Residue) -> AlphaCheck {
    let target = chi1(a + b + 4);
    AlphaCheck {
        a,
        b,
        first_holds: chi1(a) * chi1(b) == target,
        second_holds: chi1(a + 1) * chi1(b - 1) == target,
    }
}

pub fn lemma_alpha_all() -> Vec<AlphaCheck> {
    Residue::ALL
        .iter()
        .flat_map(|&a| Residue::ALL.iter().map(move |&b| lemma_alpha_check(a, b)))
        .collect()
}
