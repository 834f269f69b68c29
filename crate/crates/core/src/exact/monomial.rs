use std::cmp::Ordering;

use smallvec::SmallVec;

/// Exponent vector with trailing zeros trimmed, so monomials built over
/// different variable counts compare structurally.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    deg: u32,
    e: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        let mut e: SmallVec<[u16; 8]> = exps.iter().copied().collect();
        while e.last() == Some(&0) {
            e.pop();
        }
        let deg = e.iter().map(|&x| x as u32).sum();
        Monomial { deg, e }
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, p: u16) -> Self {
        if p == 0 {
            return Self::one();
        }
        let mut e: SmallVec<[u16; 8]> = SmallVec::from_elem(0, i + 1);
        e[i] = p;
        Monomial { deg: p as u32, e }
    }

    pub fn exps(&self) -> &[u16] {
        &self.e
    }

    /// Number of variables actually touched (index of last nonzero exponent + 1).
    pub fn width(&self) -> usize {
        self.e.len()
    }

    pub fn get(&self, i: usize) -> u16 {
        self.e.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.e.is_empty()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (long, short) = if self.e.len() >= o.e.len() { (self, o) } else { (o, self) };
        let mut e = long.e.clone();
        for (a, b) in e.iter_mut().zip(short.e.iter()) {
            *a += *b;
        }
        Monomial { deg: self.deg + o.deg, e }
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.e.len() <= o.e.len() && self.e.iter().zip(o.e.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        if !o.divides(self) {
            return None;
        }
        let mut e = self.e.clone();
        for (a, b) in e.iter_mut().zip(o.e.iter()) {
            *a -= *b;
        }
        Some(Self::trimmed(e, self.deg - o.deg))
    }

    /// Sets exponent of variable `i`.
    pub fn with(&self, i: usize, p: u16) -> Monomial {
        let mut e = self.e.clone();
        if e.len() <= i {
            if p == 0 {
                return self.clone();
            }
            e.resize(i + 1, 0);
        }
        let deg = self.deg - e[i] as u32 + p as u32;
        e[i] = p;
        Self::trimmed(e, deg)
    }

    fn trimmed(mut e: SmallVec<[u16; 8]>, deg: u32) -> Monomial {
        while e.last() == Some(&0) {
            e.pop();
        }
        Monomial { deg, e }
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let n = self.e.len().max(o.e.len());
        let e: SmallVec<[u16; 8]> = (0..n).map(|i| self.get(i).max(o.get(i))).collect();
        let deg = e.iter().map(|&x| x as u32).sum();
        Monomial { deg, e }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic with x₀ > x₁ > ….
    fn cmp(&self, o: &Self) -> Ordering {
        self.deg.cmp(&o.deg).then_with(|| {
            let n = self.e.len().max(o.e.len());
            for i in 0..n {
                match self.get(i).cmp(&o.get(i)) {
                    Ordering::Equal => continue,
                    c => return c,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.e.as_slice())
    }
}
