//! Canonical brackets on T*Rⁿ, Lie–Poisson brackets on so(n)*, and exact
//! Jacobian ranks in local charts.

mod chart;
pub mod lie;
mod phase;

pub use chart::{phase_gradient, phase_jacobian, phase_jacobian_rank, phase_rank_sampled, BodyPoint, PhasePoint};
pub use lie::{LiePoisson, LiePoissonPoly};
pub use phase::{canonical_bracket, PhasePoly};

use crate::report::{Check, VerificationReport};

/// Computes every bracket {a, b} for a in `a`, b in `b` and records nonzero
/// results verbatim. Checks are ordered by input index.
pub fn involution_report<T>(
    prefix: &str,
    a: &[(String, T)],
    b: &[(String, T)],
    bracket: impl Fn(&T, &T) -> T,
    is_zero: impl Fn(&T) -> bool,
    render: impl Fn(&T) -> String,
) -> VerificationReport {
    let mut rep = VerificationReport::default();
    for (la, fa) in a {
        for (lb, fb) in b {
            let v = bracket(fa, fb);
            let z = is_zero(&v);
            rep.push(Check::from_bool(
                format!("{prefix}{{{la},{lb}}}"),
                format!("{{{la}, {lb}}} = 0"),
                z,
                || render(&v),
            ));
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Rational, Ring};
    use crate::sample::Sampler;

    fn pij(n: usize, i: usize, j: usize) -> PhasePoly {
        PhasePoly::x(n, i).mul(&PhasePoly::p(n, j)).sub(&PhasePoly::x(n, j).mul(&PhasePoly::p(n, i)))
    }

    fn p2(n: usize) -> PhasePoly {
        let mut acc = PhasePoly::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                acc = acc.add(&pij(n, i, j).square());
            }
        }
        acc
    }

    #[test]
    fn momentum_bracket_sign() {
        let n = 3;
        assert_eq!(canonical_bracket(&pij(n, 0, 1), &pij(n, 1, 2)), pij(n, 0, 2));
    }

    #[test]
    fn p_squared_is_invariant_n4() {
        let n = 4;
        let p2 = p2(n);
        for i in 0..n {
            for j in i + 1..n {
                assert!(canonical_bracket(&p2, &pij(n, i, j)).is_zero());
            }
        }
    }

    #[test]
    fn p2_r2_bracket() {
        let n = 3;
        let mut pp = PhasePoly::zero(n);
        let mut rr = PhasePoly::zero(n);
        let mut xp = PhasePoly::zero(n);
        for i in 0..n {
            pp = pp.add(&PhasePoly::p(n, i).square());
            rr = rr.add(&PhasePoly::x(n, i).square());
            xp = xp.add(&PhasePoly::x(n, i).mul(&PhasePoly::p(n, i)));
        }
        assert_eq!(canonical_bracket(&pp, &rr), xp.scale(&Rational::integer(4)));
    }

    #[test]
    fn rotation_map_rank() {
        let n = 3;
        let fs = vec![p2(n), pij(n, 0, 2), pij(n, 1, 2)];
        let mut s = Sampler::new(1);
        assert_eq!(phase_rank_sampled(&fs, n, &mut s).unwrap(), 2 * n - 3);
    }

    #[test]
    fn free_particle_set_rank_n4() {
        let n = 4;
        let mut h = PhasePoly::zero(n);
        for i in 0..n {
            h = h.add(&PhasePoly::p(n, i).square());
        }
        let h = h.scale(&Rational::new(1, 2));
        let mut fs = vec![h, p2(n)];
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            fs.push(pij(n, i, j));
        }
        let mut s = Sampler::new(2);
        assert_eq!(phase_rank_sampled(&fs, n, &mut s).unwrap(), 6);
    }

    #[test]
    fn report_lists_nonzero_brackets() {
        let n = 3;
        let a = vec![("P12".to_string(), pij(n, 0, 1))];
        let b = vec![("P12".to_string(), pij(n, 0, 1)), ("P13".to_string(), pij(n, 0, 2))];
        let rep = involution_report("", &a, &b, canonical_bracket, PhasePoly::is_zero, PhasePoly::render);
        assert!(rep.checks[0].status.ok());
        assert!(!rep.checks[1].status.ok());
        assert!(rep.checks[1].witness.is_some());
        let _ = Rational::one();
    }
}
