//! The registered cases, grouped by area.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spencer::equations_engine::{build_group_system, ConstantMetric, GroupKind, GroupSystem};
use spencer::symbolic_core::{MultiIndex, Poly, RatFunc, Rational};

use crate::{Case, Ctx, Outcome, Status};

mod cohomology;
mod curvature;
mod engine;
mod lie;
mod nonlinear;

pub(crate) type CaseResult = Result<Outcome, String>;

pub(crate) fn check(cond: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

pub(crate) fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    check(got == want, || format!("{what}: got {got:?}, expected {want:?}"))
}

pub(crate) fn pass(detail: Vec<String>) -> CaseResult {
    Ok(Outcome { status: Status::Pass, witness: None, detail })
}

pub(crate) fn documented(note: &str, detail: Vec<String>) -> CaseResult {
    Ok(Outcome { status: Status::DiscrepancyDocumented, witness: Some(note.to_string()), detail })
}

/// Independent stream per case so results do not depend on run order.
pub(crate) fn rng(ctx: &Ctx, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt))
}

pub(crate) fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub(crate) fn poly(s: &str, n: usize) -> Poly {
    Poly::parse_with(s, &Poly::default_names(n)).expect("fixed polynomial literal")
}

pub(crate) fn random_poly<R: Rng>(rng: &mut R, n: usize, deg: u32) -> Poly {
    Poly::from_terms(
        n,
        MultiIndex::up_to_degree(n, deg).into_iter().map(|m| (m, Rational::from_integer(rng.gen_range(-3i64..=3).into()))),
    )
}

pub(crate) fn random_rf<R: Rng>(rng: &mut R, n: usize, deg: u32) -> RatFunc {
    RatFunc::from_poly(random_poly(rng, n, deg))
}

pub(crate) fn system(kind: GroupKind, n: usize) -> Result<GroupSystem, String> {
    build_group_system(kind, &ConstantMetric::euclidean(n)).map_err(|e| format!("{kind:?} n={n}: {e}"))
}

pub(crate) fn polys(rows: &[&[&str]], n: usize) -> Vec<Vec<Poly>> {
    rows.iter().map(|r| r.iter().map(|s| poly(s, n)).collect()).collect()
}

macro_rules! case {
    ($id:literal, [$($tag:literal),*], $crit:literal, $r:literal, $f:path) => {
        Case { id: $id, tags: &[$($tag),*], criterion: $crit, paper_ref: $r, run: $f }
    };
}

/// Every case, in id order.
pub fn registry() -> Vec<Case> {
    let mut v = vec![
        case!("mc-affine", ["lie"], 1, "Maurer-Cartan forms of the affine group of the line", lie::mc_affine),
        case!("adjoint-rep", ["lie"], 1, "adjoint representation system of the affine group", lie::adjoint_rep),
        case!("structure-constants", ["lie"], 2, "structure constants of the Killing, Weyl and conformal algebras", lie::structure_constants_case),
        case!("gauge-nabla", ["lie"], 3, "second covariant derivative of an algebra-valued function and the curvature", lie::gauge_nabla),
        case!("poincare-el", ["lie"], 3, "Poincare field equations as adjoint of the covariant derivative", lie::poincare_el_case),
        case!("jet-matrix-projective", ["spencer"], 4, "jet matrix of the projective group of the line", engine::jet_matrix_projective),
        case!("jet-matrix-weyl", ["spencer"], 4, "jet matrix of the Weyl group of the plane", engine::jet_matrix_weyl),
        case!("jet-matrix-conformal", ["spencer"], 4, "jet matrix of the conformal group of the plane", engine::jet_matrix_conformal),
        case!("jet-reductions", ["spencer"], 14, "reduction of the dilatation and elation jets under the parametric substitution", engine::jet_reductions),
        case!("cccmw-projective", ["adjoint"], 5, "adjoint first Spencer operator of the projective line", engine::cccmw_projective),
        case!("cccmw-weyl", ["adjoint"], 5, "Cauchy, Cosserat and Clausius equations of the Weyl plane", engine::cccmw_weyl),
        case!("cccmw-conformal", ["adjoint"], 5, "Cauchy, Cosserat, Clausius and Maxwell-Weyl equations of the conformal plane", engine::cccmw_conformal),
        case!("divergence-projective", ["divergence"], 6, "divergence identities of the projective line", engine::divergence_projective),
        case!("divergence-weyl-rotation", ["divergence"], 6, "rotation flux of the Weyl plane", engine::divergence_weyl_rotation),
        case!("divergence-weyl-dilatation", ["divergence"], 6, "dilatation flux of the Weyl plane", engine::divergence_weyl_dilatation),
        case!("divergence-conformal-elations", ["divergence"], 6, "elation fluxes of the conformal plane", engine::divergence_conformal_elations),
        case!("divergence-synthesis-n3", ["divergence"], 6, "elation flux for arbitrary dimension, synthesized at n = 3", engine::divergence_synthesis_n3),
        case!("divergence-all-systems", ["divergence"], 6, "divergence certificates for every group system up to n = 3", engine::divergence_all_systems),
        case!("parametrization-killing-plane", ["adjoint"], 7, "three-potential parametrization of the Killing plane stress equations", engine::parametrization_killing_plane),
        case!("airy", ["adjoint"], 7, "Airy stress function parametrization of the Cauchy equations", engine::airy),
        case!("adjoint-chain", ["adjoint"], 7, "composition of the adjoint Spencer operators vanishes", engine::adjoint_chain),
        case!("potential-counts", ["adjoint"], 7, "number of potentials for the Poincare and conformal groups", engine::potential_counts),
        case!("macaulay-dims", ["cohomology"], 8, "Macaulay system: symbols, prolongations and the fundamental diagram", cohomology::macaulay_dims),
        case!("macaulay-cc", ["cohomology"], 8, "Macaulay system: compatibility conditions and their syzygy", cohomology::macaulay_cc),
        case!("euler-poincare", ["cohomology"], 8, "Euler-Poincare characteristics of the Macaulay sequences", cohomology::euler_poincare_case),
        case!("jet-dim-table", ["cohomology"], 8, "jet dimensions for three independent variables", cohomology::jet_dim_table_case),
        case!("conformal-diagram", ["cohomology"], 9, "fundamental diagram of the conformal plane", cohomology::conformal_diagram),
        case!("curvature-trace", ["curvature"], 10, "Ricci tensor and scalar from the second-order Lie equation data", curvature::curvature_trace),
        case!("curvature-splitting", ["curvature"], 10, "splitting of the Riemann tensor into Ricci lift and Weyl part", curvature::curvature_splitting),
        case!("curvature-dims", ["curvature"], 10, "dimensions of the Riemann and Weyl bundles", curvature::curvature_dims),
        case!("weyl-n3", ["curvature"], 10, "Weyl tensor vanishes in dimension three", curvature::weyl_n3),
        case!("maxwell", ["curvature"], 11, "second Maxwell block: conservation of current and traceless stress", curvature::maxwell),
        case!("em-projection", ["curvature"], 12, "EM field from the second-order jets of the conformal system", curvature::em_projection),
        case!("nonlinear-groupoid", ["nonlinear"], 13, "jet groupoid composition, identity and inverse", nonlinear::groupoid),
        case!("nonlinear-holonomic", ["nonlinear"], 13, "nonlinear Spencer operator vanishes on holonomic jets", nonlinear::holonomic),
        case!("nonlinear-cc", ["nonlinear"], 13, "compatibility conditions of the nonlinear Spencer operator", nonlinear::cc),
        case!("nonlinear-gauge", ["nonlinear"], 13, "gauge transformation of the nonlinear Spencer form", nonlinear::gauge),
        case!("nonlinear-variation", ["nonlinear"], 13, "variation of the nonlinear Spencer form by source and target fields", nonlinear::variation),
    ];
    v.sort_by(|a, b| a.id.cmp(b.id));
    v
}
