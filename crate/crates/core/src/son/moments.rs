use crate::error::{Error, Result};
use crate::exact::{Rational, RationalFunction};

/// How λ is supplied.
#[derive(Clone, Debug, PartialEq)]
pub enum LambdaSource {
    /// Explicit positive rationals.
    Explicit(Vec<Rational>),
    /// Symbolic values μ₁..μ_u, one per block of consecutive indices of the
    /// given sizes.
    Symbolic(Vec<usize>),
}

/// Generalized moments of inertia and the derived multiplicity data.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSpec {
    n: usize,
    source: LambdaSource,
    block_of: Vec<usize>,
    q: Vec<usize>,
}

impl MomentSpec {
    pub fn explicit(lambda: Vec<Rational>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::Invalid("empty lambda".into()));
        }
        if lambda.iter().any(|l| !l.is_positive()) {
            return Err(Error::Invalid("lambda entries must be positive".into()));
        }
        let mut distinct: Vec<Rational> = Vec::new();
        let mut block_of = Vec::with_capacity(lambda.len());
        for l in &lambda {
            let b = match distinct.iter().position(|d| d == l) {
                Some(b) => b,
                None => {
                    distinct.push(l.clone());
                    distinct.len() - 1
                }
            };
            block_of.push(b);
        }
        let mut q = vec![0usize; distinct.len()];
        for &b in &block_of {
            q[b] += 1;
        }
        q.sort_unstable();
        Ok(MomentSpec { n: lambda.len(), source: LambdaSource::Explicit(lambda), block_of, q })
    }

    pub fn from_ints(lambda: &[i64]) -> Result<Self> {
        Self::explicit(lambda.iter().map(|&v| Rational::integer(v)).collect())
    }

    /// Symbolic spec with consecutive blocks of the given sizes.
    pub fn symbolic(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        let n = blocks.iter().sum();
        let mut block_of = Vec::with_capacity(n);
        for (b, &sz) in blocks.iter().enumerate() {
            block_of.extend(std::iter::repeat(b).take(sz));
        }
        let mut q = blocks.clone();
        q.sort_unstable();
        Ok(MomentSpec { n, source: LambdaSource::Symbolic(blocks), block_of, q })
    }

    /// Fully symbolic distinct λ₁..λ_n.
    pub fn generic(n: usize) -> Self {
        Self::symbolic(vec![1; n]).expect("valid partition")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> &LambdaSource {
        &self.source
    }

    pub fn q(&self) -> &[usize] {
        &self.q
    }

    pub fn u(&self) -> usize {
        self.q.len()
    }

    pub fn d(&self) -> usize {
        self.q.iter().filter(|&&x| x % 2 == 1).count()
    }

    pub fn block_of(&self) -> &[usize] {
        &self.block_of
    }

    /// Index sets I^k, in order of first appearance.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let u = self.block_of.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); u];
        for (i, &b) in self.block_of.iter().enumerate() {
            out[b].push(i);
        }
        out
    }

    /// I^λ: pairs with equal moments.
    pub fn block_pairs(&self) -> Vec<(usize, usize)> {
        super::pairs(self.n)
            .into_iter()
            .filter(|&(i, j)| self.block_of[i] == self.block_of[j])
            .collect()
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.source, LambdaSource::Symbolic(_))
    }

    /// Number of symbols of the coefficient field (0 for explicit λ).
    pub fn symbol_count(&self) -> usize {
        match &self.source {
            LambdaSource::Explicit(_) => 0,
            LambdaSource::Symbolic(b) => b.len(),
        }
    }

    pub fn symbol_names(&self) -> Vec<String> {
        match &self.source {
            LambdaSource::Explicit(_) => Vec::new(),
            LambdaSource::Symbolic(b) if b.iter().all(|&x| x == 1) => {
                (1..=b.len()).map(|i| format!("l{i}")).collect()
            }
            LambdaSource::Symbolic(b) => (1..=b.len()).map(|i| format!("mu{i}")).collect(),
        }
    }

    /// λᵢ as elements of Q(λ).
    pub fn lambda_rf(&self) -> Vec<RationalFunction> {
        match &self.source {
            LambdaSource::Explicit(v) => v.iter().map(|x| RationalFunction::constant(x.clone())).collect(),
            LambdaSource::Symbolic(b) => {
                let u = b.len();
                self.block_of.iter().map(|&k| RationalFunction::var(k, u)).collect()
            }
        }
    }

    pub fn lambda_rational(&self) -> Option<Vec<Rational>> {
        match &self.source {
            LambdaSource::Explicit(v) => Some(v.clone()),
            LambdaSource::Symbolic(_) => None,
        }
    }

    /// Explicit spec with the same block structure and the given block values.
    pub fn specialize(&self, mu: &[Rational]) -> Result<MomentSpec> {
        let u = self.block_of.iter().max().map_or(0, |m| m + 1);
        if mu.len() != u {
            return Err(Error::Invalid(format!("need {u} block values")));
        }
        for i in 0..u {
            for j in i + 1..u {
                if mu[i] == mu[j] {
                    return Err(Error::Invalid("block values must be distinct".into()));
                }
            }
        }
        MomentSpec::explicit(self.block_of.iter().map(|&b| mu[b].clone()).collect())
    }

    pub fn lambda_strings(&self) -> Vec<String> {
        match &self.source {
            LambdaSource::Explicit(v) => v.iter().map(|x| x.to_string()).collect(),
            LambdaSource::Symbolic(_) => {
                let names = self.symbol_names();
                self.block_of.iter().map(|&b| names[b].clone()).collect()
            }
        }
    }

    pub fn lambda_f64(&self) -> Option<Vec<f64>> {
        self.lambda_rational().map(|v| v.iter().map(|x| x.to_f64()).collect())
    }
}

/// All partitions of `n` as non-decreasing part lists, ordered by number of
/// parts then lexicographically.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in min..=rem {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}
