//! SNC to minimum distance (MDP) through a covering gadget, the parameter
//! window for the gadget multiplicities, and MDP amplification by tensoring.

use rand::RngCore;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::gf2codes::{min_nonzero_image_weight, Distance};
use crate::mldchain::SncInstance;
use crate::scc::CoveringGadget;
use crate::{ratio, Rational};

/// A code with generator `a` and the claim `d(a) ≤ k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MdpInstance {
    pub a: BitMatrix,
    pub k: usize,
}

impl MdpInstance {
    pub fn new(a: BitMatrix, k: usize) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidInstance("generator must be nonzero".into()));
        }
        if k == 0 {
            return Err(Error::InvalidInstance("parameter must be at least 1".into()));
        }
        Ok(MdpInstance { a, k })
    }

    /// Minimum weight of a nonzero image, searched up to `cap` when full
    /// enumeration is out of reach.
    pub fn distance(&self, cap: Option<usize>, budget: Budget) -> Result<Distance> {
        min_nonzero_image_weight(&self.a, cap, budget)
    }
}

/// Multiplicities of the gadget reduction and the window they came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetParams {
    pub a_prime: u64,
    pub b_prime: u64,
    pub a: u64,
    pub b: u64,
    pub k_out: u64,
    pub gamma: Rational,
    pub gamma_prime: Rational,
    pub eps: Option<Rational>,
    /// Open window `(γ/(γ′−γ), (d/r − γ)/γ)` for `a′/b′`.
    pub window: (Rational, Rational),
    /// Whether `a′, b′ ≤ ⌈2/ζ⌉` for the window width `ζ`.
    pub size_bound_holds: bool,
}

/// Smallest-denominator `a′/b′` strictly inside the window, then
/// `a = a′r`, `b = b′t` and `k_out = at + br`.
pub fn pick_window_params(
    gamma_prime: &Rational,
    gamma: &Rational,
    t: usize,
    d: usize,
    r: usize,
) -> Result<GadgetParams> {
    if *gamma < Rational::from_integer(1.into()) {
        return Err(Error::EmptyWindow(format!("γ = {} is below 1", ratio::show(gamma))));
    }
    if gamma_prime <= gamma {
        return Err(Error::EmptyWindow(format!(
            "γ′ = {} does not exceed γ = {}",
            ratio::show(gamma_prime),
            ratio::show(gamma)
        )));
    }
    if t == 0 || r == 0 {
        return Err(Error::EmptyWindow("sparsity and radius must be positive".into()));
    }
    let lower = gamma / (gamma_prime - gamma);
    let upper = (Rational::new(d.into(), r.into()) - gamma) / gamma;
    if upper <= lower {
        return Err(Error::EmptyWindow(format!(
            "window ({}, {}) is empty",
            ratio::show(&lower),
            ratio::show(&upper)
        )));
    }
    let width = &upper - &lower;
    let size_cap = ratio::ceil_u64(&(ratio::int(2) / &width))?;
    let mut b_prime = 1u64;
    let a_prime = loop {
        let candidate = ratio::floor_u64(&(&lower * ratio::from_count(b_prime as usize)))? + 1;
        if Rational::new(candidate.into(), b_prime.into()) < upper {
            break candidate;
        }
        b_prime += 1;
    };
    let size_bound_holds = a_prime <= size_cap && b_prime <= size_cap;
    // Below 1 the window forces a′ < b′ ≤ ⌈1/ζ⌉.
    assert!(
        upper > Rational::from_integer(1.into()) || size_bound_holds,
        "smallest-denominator fraction must respect the 2/ζ bound"
    );
    let (t64, r64, d64) = (t as u64, r as u64, d as u64);
    let a = a_prime * r64;
    let b = b_prime * t64;
    let k_out = a * t64 + b * r64;
    let claimed = gamma * ratio::from_count(k_out as usize);
    let yes_side = gamma_prime * ratio::from_count((a * t64) as usize);
    let no_side = ratio::from_count((b * d64) as usize);
    if claimed >= yes_side || claimed >= no_side {
        return Err(Error::EmptyWindow(
            "γ(at + br) < min(γ′at, bd) fails for the chosen fraction".into(),
        ));
    }
    Ok(GadgetParams {
        a_prime,
        b_prime,
        a,
        b,
        k_out,
        gamma: gamma.clone(),
        gamma_prime: gamma_prime.clone(),
        eps: None,
        window: (lower, upper),
        size_bound_holds,
    })
}

pub fn pick_gadget_params(
    gamma_prime: &Rational,
    gamma: &Rational,
    g: &dyn CoveringGadget,
) -> Result<GadgetParams> {
    let mut params = pick_window_params(gamma_prime, gamma, g.t(), g.d(), g.r())?;
    params.eps = g.eps();
    Ok(params)
}

/// The gadget instance with the center it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdpReduction {
    pub instance: MdpInstance,
    pub center: BitVector,
}

/// `[1_a ⊗ (B·T·L) | 1_a ⊗ y ; 1_b ⊗ L | 1_b ⊗ s]` for one sampled center `s`.
/// Over GF(2) the negated blocks `−y`, `−s` are `y`, `s`.
pub fn snc_to_mdp(
    i: &SncInstance,
    params: &GadgetParams,
    g: &dyn CoveringGadget,
    rng: &mut dyn RngCore,
) -> Result<MdpReduction> {
    let s = g.sample_center(rng);
    snc_to_mdp_with_center(i, params, g, s)
}

pub fn snc_to_mdp_with_center(
    i: &SncInstance,
    params: &GadgetParams,
    g: &dyn CoveringGadget,
    s: BitVector,
) -> Result<MdpReduction> {
    if i.a.cols() != g.q() {
        return Err(Error::DimensionMismatch(format!(
            "instance has {} columns, gadget projects to {}",
            i.a.cols(),
            g.q()
        )));
    }
    if i.k != g.t() {
        return Err(Error::DimensionMismatch(format!(
            "instance parameter {} differs from gadget sparsity {}",
            i.k,
            g.t()
        )));
    }
    let l = g.generator();
    let projected = l.select_rows(&(0..g.q()).collect::<Vec<_>>());
    let column = |v: &BitVector| {
        BitMatrix::from_columns(v.len(), std::slice::from_ref(v)).expect("column has its own length")
    };
    let top = i.a.mul(&projected).hstack(&column(&i.y));
    let bottom = l.hstack(&column(&s));
    let a = top
        .repeat_rows(params.a as usize)
        .vstack(&bottom.repeat_rows(params.b as usize));
    Ok(MdpReduction {
        instance: MdpInstance::new(a, params.k_out as usize)?,
        center: s,
    })
}

/// `z′ ∘ 1`, the codeword message built from a covering message `z′`.
pub fn mdp_witness(cover_message: &BitVector) -> BitVector {
    cover_message.concat(&BitVector::all_ones(1))
}

/// Replaces the generator by its `steps`-fold tensor square and the
/// parameter by `k^{2^steps}`.
pub fn mdp_amplify(i: &MdpInstance, steps: u32, budget: Budget) -> Result<MdpInstance> {
    if steps == 0 {
        return Err(Error::InvalidParameter("at least one tensoring step is required".into()));
    }
    let mut current = i.clone();
    for _ in 0..steps {
        let entries = (current.a.rows() as u128 * current.a.cols() as u128).saturating_pow(2);
        budget.check("tensor square", entries)?;
        let k = current
            .k
            .checked_mul(current.k)
            .ok_or_else(|| Error::SizeOverflow("squared parameter".into()))?;
        current = MdpInstance::new(current.a.kron(&current.a), k)?;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{frac, int};
    use crate::scc::{scc_construct, MicroGadget};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn window_example() {
        let p = pick_window_params(&int(5), &frac(6, 5), 1, 41, 21).unwrap();
        assert_eq!(p.window, (frac(6, 19), frac(79, 126)));
        assert_eq!((p.a_prime, p.b_prime), (1, 2));
        assert_eq!((p.a, p.b, p.k_out), (21, 2, 63));
        assert!(p.size_bound_holds);
    }

    #[test]
    fn window_from_gadget() {
        let g = scc_construct(1, 1, &frac(1, 20)).unwrap();
        let p = pick_gadget_params(&int(5), &frac(6, 5), &g).unwrap();
        assert_eq!(p.k_out, 63);
        assert_eq!(p.eps, Some(frac(1, 20)));
    }

    #[test]
    fn large_gap_window() {
        let gp = int(400);
        let g = frac(199, 100);
        assert!(ratio::int(2) * &gp / (ratio::int(2) + &gp) > g);
        // ε = 1/100000 and t = 1 give d = 200001, r = 100001.
        let p = pick_window_params(&gp, &g, 1, 200_001, 100_001).unwrap();
        let inside = Rational::new(p.a_prime.into(), p.b_prime.into());
        assert!(p.window.0 < inside && inside < p.window.1);
        assert_eq!(inside, frac(1, 200));
    }

    #[test]
    fn degenerate_window() {
        // γ = 2γ′/(2+γ′) = 10/7 with γ′ = 5, at d/r → 2.
        assert!(matches!(
            pick_window_params(&int(5), &frac(10, 7), 1, 41, 21),
            Err(Error::EmptyWindow(_))
        ));
        assert!(matches!(
            pick_window_params(&int(2), &int(3), 1, 5, 3),
            Err(Error::EmptyWindow(_))
        ));
    }

    #[test]
    fn gadget_matrix_shape() {
        let g = scc_construct(3, 1, &frac(1, 2)).unwrap();
        let mut params = pick_window_params(&int(5), &frac(6, 5), 1, 41, 21).unwrap();
        params.k_out = 63;
        let b = BitMatrix::zeros(5, 3);
        let snc = SncInstance::new(b, BitVector::all_ones(5), 1).unwrap();
        let out = snc_to_mdp(&snc, &params, &g, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!((out.instance.a.rows(), out.instance.a.cols()), (21 * 5 + 2 * 15, 8));
        assert_eq!(out.instance.k, 63);
    }

    #[test]
    fn dimension_checks() {
        let g = MicroGadget::repetition(2, 1, 8, 1, Budget::DEFAULT).unwrap();
        let params = pick_gadget_params(&int(5), &frac(3, 2), &g).unwrap();
        let wrong = SncInstance::new(BitMatrix::zeros(2, 3), BitVector::all_ones(2), 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            snc_to_mdp(&wrong, &params, &g, &mut rng),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn covered_witness_has_bounded_weight() {
        let g = MicroGadget::repetition(2, 1, 8, 1, Budget::DEFAULT).unwrap();
        let params = pick_gadget_params(&int(5), &frac(3, 2), &g).unwrap();
        assert_eq!((params.a, params.b, params.k_out), (1, 1, 2));
        // x = (1,0) solves B x = y exactly.
        let b = BitMatrix::parse_rows(2, &["10", "10"]).unwrap();
        let snc = SncInstance::new(b, BitVector::all_ones(2), 1).unwrap();
        let x = BitVector::parse01("10").unwrap();
        let s = g.centers()[1].clone();
        let out = snc_to_mdp_with_center(&snc, &params, &g, s.clone()).unwrap();
        let z = g.cover_witness(&x, &s, Budget::DEFAULT).unwrap().unwrap();
        let w = mdp_witness(&z);
        let weight = out.instance.a.mul_vec(&w).weight();
        let expected = params.a as usize * snc.residual_weight(&x)
            + params.b as usize * g.generator().mul_vec(&z).distance(&s);
        assert_eq!(weight, expected);
        assert!(weight <= params.k_out as usize);
    }

    #[test]
    fn amplify_repetition() {
        let rep = BitMatrix::parse_rows(1, &["1", "1", "1"]).unwrap();
        let i = MdpInstance::new(rep, 3).unwrap();
        let out = mdp_amplify(&i, 1, Budget::DEFAULT).unwrap();
        assert_eq!(out.k, 9);
        assert_eq!(out.distance(None, Budget::DEFAULT).unwrap().exact(), Some(9));
        assert!(matches!(
            mdp_amplify(&i, 0, Budget::DEFAULT),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            mdp_amplify(&i, 5, Budget(1000)),
            Err(Error::TooLarge { .. })
        ));
    }
}
