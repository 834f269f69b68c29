use crate::exact::{Monomial, MultiPoly, Rational, RationalFunction, Ring};
use crate::son::{dim, pair_index, pairs, StructureConstants};

/// Polynomial in the momenta on T*SO(n). Variables `0..N` are P^L in
/// lexicographic pair order; variables `N..2N`, when present, are P^R.
pub type LiePoissonPoly<C = RationalFunction> = MultiPoly<C>;

/// P^L_{ij} (0-based, either order).
pub fn left<C: Ring>(n: usize, i: usize, j: usize) -> LiePoissonPoly<C> {
    momentum(n, i, j, 0, dim(n))
}

/// P^R_{ij}, living in the 2N-variable space.
pub fn right<C: Ring>(n: usize, i: usize, j: usize) -> LiePoissonPoly<C> {
    momentum(n, i, j, dim(n), 2 * dim(n))
}

fn momentum<C: Ring>(n: usize, i: usize, j: usize, off: usize, nv: usize) -> LiePoissonPoly<C> {
    assert!(i != j && i < n && j < n, "bad momentum index");
    let (s, a) = if i < j { (1, pair_index(n, i, j)) } else { (-1, pair_index(n, j, i)) };
    MultiPoly::term(Monomial::var(off + a), C::from_i64(s), nv)
}

/// All P^L_{ij}, i<j.
pub fn left_momenta<C: Ring>(n: usize) -> Vec<LiePoissonPoly<C>> {
    pairs(n).into_iter().map(|(i, j)| left(n, i, j)).collect()
}

pub fn right_momenta<C: Ring>(n: usize) -> Vec<LiePoissonPoly<C>> {
    pairs(n).into_iter().map(|(i, j)| right(n, i, j)).collect()
}

/// Bracket engine for so(n)*, with P^R carrying the opposite-sign constants
/// and commuting with every P^L.
#[derive(Clone, Debug)]
pub struct LiePoisson {
    n: usize,
    sc: StructureConstants,
}

impl LiePoisson {
    pub fn new(n: usize) -> Self {
        LiePoisson { n, sc: StructureConstants::new(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// {y_a, y_b} as (sign, variable) or `None` when zero.
    fn elementary(&self, a: usize, b: usize) -> Option<(i64, usize)> {
        let nn = dim(self.n);
        match (a < nn, b < nn) {
            (true, true) => self.sc.bracket(a, b),
            (false, false) => self.sc.bracket(a - nn, b - nn).map(|(s, c)| (-s, c + nn)),
            _ => None,
        }
    }

    pub fn bracket<C: Ring>(&self, f: &LiePoissonPoly<C>, g: &LiePoissonPoly<C>) -> LiePoissonPoly<C> {
        let nv = f.nvars().max(g.nvars());
        let mut out = MultiPoly::zero_in(nv);
        if f.is_empty() || g.is_empty() {
            return out;
        }
        let fvars = used_vars(f, nv);
        let gvars = used_vars(g, nv);
        let gder: Vec<Option<LiePoissonPoly<C>>> =
            (0..nv).map(|b| gvars[b].then(|| g.derivative(b))).collect();
        for a in (0..nv).filter(|&a| fvars[a]) {
            // G_a = Σ_b {y_a, y_b} ∂g/∂y_b
            let mut ga = MultiPoly::zero_in(nv);
            for (b, gb) in gder.iter().enumerate() {
                let Some(gb) = gb else { continue };
                if let Some((s, c)) = self.elementary(a, b) {
                    ga.add_scaled(&gb.mul_monomial(&Monomial::var(c), &C::one()), &C::from_i64(s));
                }
            }
            if !ga.is_empty() {
                out = out.add(&f.derivative(a).mul(&ga));
            }
        }
        out
    }
}

fn used_vars<C: Ring>(p: &MultiPoly<C>, nv: usize) -> Vec<bool> {
    let mut v = vec![false; nv];
    for m in p.terms().keys() {
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                v[i] = true;
            }
        }
    }
    v
}

/// Variable names P12.. then R12.. (1-based; separated by `_` once n ≥ 10).
pub fn var_names(n: usize, with_right: bool) -> Vec<String> {
    let fmt = |t: &str, i: usize, j: usize| {
        if n < 10 { format!("{t}{}{}", i + 1, j + 1) } else { format!("{t}_{}_{}", i + 1, j + 1) }
    };
    let mut v: Vec<String> = pairs(n).into_iter().map(|(i, j)| fmt("P", i, j)).collect();
    if with_right {
        v.extend(pairs(n).into_iter().map(|(i, j)| fmt("R", i, j)));
    }
    v
}

pub fn render<C: Ring + std::fmt::Display>(n: usize, p: &LiePoissonPoly<C>) -> String {
    p.fmt_with(&var_names(n, p.nvars() > dim(n)))
}

/// Substitutes explicit values for the λ symbols; `None` at a pole.
pub fn specialize(p: &LiePoissonPoly<RationalFunction>, vals: &[Rational]) -> Option<LiePoissonPoly<Rational>> {
    let mut out = MultiPoly::zero_in(p.nvars());
    for (m, c) in p.terms() {
        out.add_term(m.clone(), &c.eval(vals)?);
    }
    Some(out)
}

/// Embeds an explicit polynomial as constants of Q(λ).
pub fn lift(p: &LiePoissonPoly<Rational>) -> LiePoissonPoly<RationalFunction> {
    p.map_coeffs(|c| RationalFunction::constant(c.clone()))
}
