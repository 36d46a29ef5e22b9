//! Value groups for flows: the integers `Z` and finite products of cyclic
//! groups `Zn1 x … x Znr`.
//!
//! Elements are coordinate vectors. For `Z` the vector has length one and is
//! unbounded; for a finite product each coordinate is kept in canonical range
//! `0 <= c < n`. The textual grammar is `Z`, `Z<n>`, or `Z<n>xZ<m>...` with no
//! spaces (e.g. `Z2xZ4`); elements render as a bare integer for `Z` and as a
//! tuple `(c1,…,cr)` otherwise.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// A value group: the integers, or a finite product of cyclic groups given by
/// its moduli (each at least 2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Integers,
    /// Product of `Z_n` for the listed moduli, in order.
    Cyclic(Vec<u64>),
}

/// An element of some [`GroupSpec`]; plain data, interpreted by the
/// `GroupSpec` that created it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coords: Vec<i64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// The single coordinate of an integer-group element.
    pub fn as_integer(&self) -> Option<i64> {
        match self.coords.as_slice() {
            [z] => Some(*z),
            _ => None,
        }
    }
}

/// Order of a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(u64),
    Infinite,
}

/// Which construction a group supports for nowhere-zero flows on signed
/// eulerian graphs, in priority order: an involution makes a constant flow
/// work on any even-degree graph; the cyclic group of order three reduces to
/// the integer 3-flow question; two independent elements of order three, or a
/// single element of order at least four, support the even-cover scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupCase {
    /// Carries the lexicographically least nonzero `x` with `x + x = 0`.
    Involution(GroupElement),
    /// The group is cyclic of order three.
    CyclicOrderThree,
    /// Carries `b1`, `b2` of order three whose cyclic subgroups intersect
    /// trivially.
    OrderThreePair(GroupElement, GroupElement),
    /// Carries an element of order at least four (`1` for `Z`).
    OrderAtLeastFour(GroupElement),
}

impl GroupSpec {
    /// Builds a finite product; every modulus must be at least 2.
    pub fn cyclic(moduli: Vec<u64>) -> Result<GroupSpec> {
        if moduli.is_empty() {
            return Err(invalid("a cyclic product needs at least one modulus"));
        }
        for &n in &moduli {
            if n < 2 {
                return Err(invalid(format!("modulus {n} is below 2")));
            }
            if n > u32::MAX as u64 {
                return Err(invalid(format!("modulus {n} is unreasonably large")));
            }
        }
        Ok(GroupSpec::Cyclic(moduli))
    }

    /// Number of coordinates of an element.
    pub fn rank(&self) -> usize {
        match self {
            GroupSpec::Integers => 1,
            GroupSpec::Cyclic(m) => m.len(),
        }
    }

    /// Group order; `None` for the integers.
    pub fn order(&self) -> Option<u128> {
        match self {
            GroupSpec::Integers => None,
            GroupSpec::Cyclic(m) => Some(m.iter().map(|&n| n as u128).product()),
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    /// Builds an element from coordinates, reducing each into canonical range
    /// for a finite product. Fails on a length mismatch.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(invalid(format!(
                "element has {} coordinates, group {self} expects {}",
                coords.len(),
                self.rank()
            )));
        }
        match self {
            GroupSpec::Integers => Ok(GroupElement {
                coords: coords.to_vec(),
            }),
            GroupSpec::Cyclic(m) => Ok(GroupElement {
                coords: coords
                    .iter()
                    .zip(m)
                    .map(|(&c, &n)| c.rem_euclid(n as i64))
                    .collect(),
            }),
        }
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if x.coords.len() != self.rank() {
            return Err(invalid(format!(
                "element has {} coordinates, group {self} expects {}",
                x.coords.len(),
                self.rank()
            )));
        }
        if let GroupSpec::Cyclic(m) = self {
            for (&c, &n) in x.coords.iter().zip(m) {
                if c < 0 || c >= n as i64 {
                    return Err(invalid(format!(
                        "coordinate {c} out of canonical range for modulus {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let coords = a.coords.iter().zip(&b.coords).map(|(&x, &y)| x + y);
        self.element(&coords.collect::<Vec<_>>())
    }

    pub fn negate(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let coords: Vec<i64> = a.coords.iter().map(|&x| -x).collect();
        self.element(&coords)
    }

    /// `k`-fold sum of `a` (negative `k` negates).
    pub fn scalar_mul(&self, k: i64, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        match self {
            GroupSpec::Integers => self.element(&[k
                .checked_mul(a.coords[0])
                .ok_or_else(|| invalid("integer overflow in scalar multiple"))?]),
            GroupSpec::Cyclic(m) => {
                let coords: Vec<i64> = a
                    .coords
                    .iter()
                    .zip(m)
                    .map(|(&c, &n)| ((k as i128 * c as i128).rem_euclid(n as i128)) as i64)
                    .collect();
                self.element(&coords)
            }
        }
    }

    pub fn is_zero(&self, a: &GroupElement) -> Result<bool> {
        self.check(a)?;
        Ok(a.coords.iter().all(|&c| c == 0))
    }

    /// Order of `a`: least `k >= 1` with `k·a = 0`, or infinite.
    pub fn element_order(&self, a: &GroupElement) -> Result<ElementOrder> {
        self.check(a)?;
        match self {
            GroupSpec::Integers => Ok(if a.coords[0] == 0 {
                ElementOrder::Finite(1)
            } else {
                ElementOrder::Infinite
            }),
            GroupSpec::Cyclic(m) => {
                let order = a
                    .coords
                    .iter()
                    .zip(m)
                    .map(|(&c, &n)| n / gcd(c as u64, n))
                    .fold(1, lcm);
                Ok(ElementOrder::Finite(order))
            }
        }
    }

    /// All elements of a finite product in ascending lexicographic order of
    /// their coordinate vectors; `None` for the integers.
    pub fn elements(&self) -> Option<impl Iterator<Item = GroupElement> + '_> {
        match self {
            GroupSpec::Integers => None,
            GroupSpec::Cyclic(m) => {
                let moduli = m.clone();
                let mut current: Option<Vec<i64>> = Some(vec![0; moduli.len()]);
                Some(std::iter::from_fn(move || {
                    let out = current.clone()?;
                    // Odometer with the last coordinate fastest: yields
                    // lexicographic order.
                    let mut next = out.clone();
                    let mut i = moduli.len();
                    loop {
                        if i == 0 {
                            current = None;
                            break;
                        }
                        i -= 1;
                        next[i] += 1;
                        if next[i] < moduli[i] as i64 {
                            current = Some(next);
                            break;
                        }
                        next[i] = 0;
                    }
                    Some(GroupElement { coords: out })
                }))
            }
        }
    }

    /// The lexicographically least nonzero `x` with `x + x = 0`, if any.
    /// Such elements have each coordinate `0` or `n/2` (for even `n`), so the
    /// least one is zero everywhere except the last even-modulus coordinate.
    pub fn find_involution(&self) -> Option<GroupElement> {
        match self {
            GroupSpec::Integers => None,
            GroupSpec::Cyclic(m) => {
                let last_even = m.iter().rposition(|&n| n % 2 == 0)?;
                let coords = m
                    .iter()
                    .enumerate()
                    .map(|(i, &n)| if i == last_even { (n / 2) as i64 } else { 0 })
                    .collect();
                Some(GroupElement { coords })
            }
        }
    }

    /// Case analysis for group-valued flow construction, in priority order:
    /// involution, then cyclic of order three, then a pair of independent
    /// order-three elements, then an element of order at least four. Exactly
    /// one case applies to every group.
    pub fn group_case(&self) -> GroupCase {
        if let Some(x) = self.find_involution() {
            return GroupCase::Involution(x);
        }
        match self {
            GroupSpec::Integers => GroupCase::OrderAtLeastFour(GroupElement { coords: vec![1] }),
            GroupSpec::Cyclic(m) => {
                if self.order() == Some(3) {
                    return GroupCase::CyclicOrderThree;
                }
                let div3: Vec<usize> = (0..m.len()).filter(|&i| m[i] % 3 == 0).collect();
                if div3.len() >= 2 {
                    // Two independent order-three elements, one per modulus.
                    let unit = |i: usize| {
                        let coords = (0..m.len())
                            .map(|j| if j == i { (m[i] / 3) as i64 } else { 0 })
                            .collect();
                        GroupElement { coords }
                    };
                    return GroupCase::OrderThreePair(unit(div3[0]), unit(div3[1]));
                }
                // No involution means every modulus is odd; at most one is
                // divisible by 3 and the group is not Z3, so some modulus is
                // at least 5.
                let i = (0..m.len())
                    .find(|&i| m[i] >= 4)
                    .expect("a group with no involution, not Z3, no Z3xZ3 has a large modulus");
                let coords = (0..m.len()).map(|j| i64::from(j == i)).collect();
                GroupCase::OrderAtLeastFour(GroupElement { coords })
            }
        }
    }

    /// Renders an element: bare integer for `Z`, tuple `(c1,…,cr)` otherwise.
    pub fn format_element(&self, x: &GroupElement) -> Result<String> {
        self.check(x)?;
        match self {
            GroupSpec::Integers => Ok(x.coords[0].to_string()),
            GroupSpec::Cyclic(_) => {
                let inner: Vec<String> = x.coords.iter().map(|c| c.to_string()).collect();
                Ok(format!("({})", inner.join(",")))
            }
        }
    }

    /// Parses an element in the format produced by [`format_element`]:
    /// a bare integer for `Z`, a tuple for a finite product. Coordinates are
    /// reduced into canonical range.
    ///
    /// [`format_element`]: GroupSpec::format_element
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        match self {
            GroupSpec::Integers => {
                let z: i64 = s
                    .parse()
                    .map_err(|_| invalid(format!("expected an integer value, got {s:?}")))?;
                self.element(&[z])
            }
            GroupSpec::Cyclic(_) => {
                let inner = s
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| {
                        invalid(format!("expected a tuple value like (c1,…,cr), got {s:?}"))
                    })?;
                let coords: Vec<i64> = inner
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<i64>()
                            .map_err(|_| invalid(format!("bad coordinate {c:?} in value {s:?}")))
                    })
                    .collect::<Result<_>>()?;
                self.element(&coords)
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Integers => write!(f, "Z"),
            GroupSpec::Cyclic(m) => {
                let parts: Vec<String> = m.iter().map(|n| format!("Z{n}")).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Grammar: `Z` for the integers, or `Z<n>xZ<m>…` with every `n >= 2`
    /// and no spaces.
    fn from_str(s: &str) -> Result<GroupSpec> {
        if s == "Z" {
            return Ok(GroupSpec::Integers);
        }
        let mut moduli = Vec::new();
        for part in s.split('x') {
            let digits = part.strip_prefix('Z').ok_or_else(|| {
                invalid(format!("bad group spec {s:?}: expected Z or Z<n>xZ<m>…"))
            })?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(invalid(format!(
                    "bad group spec {s:?}: {part:?} is not Z<n> with decimal n"
                )));
            }
            let n: u64 = digits
                .parse()
                .map_err(|_| invalid(format!("bad group spec {s:?}: modulus out of range")))?;
            moduli.push(n);
        }
        GroupSpec::cyclic(moduli)
    }
}
