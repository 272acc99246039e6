//! Rank of tensors in the secant variety of lines.
//!
//! The border-rank gate uses flattening ranks; σ₂ tensors are concised to a
//! `2^q` core and split by the rank-one locus of a slice pencil: two simple
//! members mean rank 2, a single double member means the tensor lies on a
//! tangent space and its rank is `q`.

use std::fmt;

use serde::Serialize;

use crate::concision::{concise_core, ConciseCore};
use crate::error::{Error, Result};
use crate::flatten::{core_sweep, mode_flattening, multilinear_ranks};
use crate::matrix::ExactMatrix;
use crate::scalar::{binary_quadratic_roots, BinaryForm, ProjPoint, RootStructure};
use crate::tensor::DenseTensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BorderRankClass {
    Zero,
    RankOne,
    /// Rank 2, off the tangent developable.
    GenericRank2,
    /// On the tangent developable with `q` essential modes; rank `q`.
    Tangent(usize),
    BeyondSigmaTwo,
}

impl BorderRankClass {
    pub fn rank(&self) -> Option<usize> {
        match *self {
            BorderRankClass::Zero => Some(0),
            BorderRankClass::RankOne => Some(1),
            BorderRankClass::GenericRank2 => Some(2),
            BorderRankClass::Tangent(q) => Some(q),
            BorderRankClass::BeyondSigmaTwo => None,
        }
    }

    pub fn border_rank(&self) -> Option<usize> {
        match self {
            BorderRankClass::Zero => Some(0),
            BorderRankClass::RankOne => Some(1),
            BorderRankClass::GenericRank2 | BorderRankClass::Tangent(_) => Some(2),
            BorderRankClass::BeyondSigmaTwo => None,
        }
    }

    /// Stable tag used in JSON reports and generator ground truth.
    pub fn tag(&self) -> &'static str {
        match self {
            BorderRankClass::Zero => "zero",
            BorderRankClass::RankOne => "rank1",
            BorderRankClass::GenericRank2 => "rank2",
            BorderRankClass::Tangent(_) => "tangent",
            BorderRankClass::BeyondSigmaTwo => "beyond_sigma2",
        }
    }
}

impl fmt::Display for BorderRankClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BorderRankClass::Tangent(q) => write!(f, "tangent({q})"),
            other => f.write_str(other.tag()),
        }
    }
}

/// The rank-one locus of the slice pencil `λM₀ + μM₁` along one mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilRootStructure {
    pub mode: usize,
    pub gcd_form: BinaryForm,
    pub structure: RootStructure,
}

/// Slices of `core` along `mode` as a linear pencil: every entry of the
/// pencil tensor is the linear form `λ·M₀[idx] + μ·M₁[idx]`.
fn pencil_forms(core: &DenseTensor, mode: usize) -> Result<(DenseTensor, DenseTensor)> {
    Ok((core.slice(mode, 0)?, core.slice(mode, 1)?))
}

/// gcd of the 2×2 minors of the slice pencil along `mode`, and its roots.
///
/// The minors are taken over the single-mode flattenings of the pencil
/// tensor, which already cut out the rank ≤ 1 locus.
pub fn slice_pencil_gcd(core: &DenseTensor, mode: usize) -> Result<PencilRootStructure> {
    if core.dims().iter().any(|&n| n != 2) {
        return Err(Error::Shape(format!("pencil analysis needs a 2×⋯×2 core, got {:?}", core.shape())));
    }
    if core.order() < 3 {
        return Err(Error::PencilDegenerate);
    }
    let (m0, m1) = pencil_forms(core, mode)?;
    let rest = m0.order();
    let mut minors: Vec<BinaryForm> = Vec::new();
    for k in 0..rest {
        let f0 = mode_flattening(&m0, k);
        let f1 = mode_flattening(&m1, k);
        // Columns dependent in the stacked [M₀; M₁] flattening are the same
        // combination of the others for every pencil member, so minors on an
        // independent set of columns already cut out the rank ≤ 1 locus.
        let stacked = ExactMatrix::from_rows((0..2).flat_map(|r| [f0.row(r).to_vec(), f1.row(r).to_vec()]).collect())?;
        let cols = stacked.basis_columns(4);
        let lin = |r: usize, c: usize| BinaryForm::linear(f0.get(r, c).clone(), f1.get(r, c).clone());
        for (a, &c1) in cols.iter().enumerate() {
            for &c2 in &cols[a + 1..] {
                let m = lin(0, c1).mul(&lin(1, c2)).sub(&lin(0, c2).mul(&lin(1, c1)));
                if !m.is_zero() {
                    minors.push(m);
                }
            }
        }
    }
    let gcd = BinaryForm::gcd_all(&minors)?.ok_or(Error::PencilDegenerate)?;
    let c = gcd.coeffs();
    let structure = match gcd.degree() {
        2 => binary_quadratic_roots(&c[0], &c[1], &c[2])?,
        1 => RootStructure::DegenerateLinear(ProjPoint::new(-&c[1], c[0].clone())?),
        _ => {
            return Err(Error::Internal(format!(
                "slice pencil along mode {mode} has no rank-one member; the core is not in σ₂"
            )))
        }
    };
    Ok(PencilRootStructure { mode, gcd_form: gcd, structure })
}

/// Full classification output, keeping the intermediate data that the
/// decomposition step reuses.
#[derive(Debug, Clone)]
pub struct Classification {
    pub class: BorderRankClass,
    pub multilinear_ranks: Vec<usize>,
    pub concise: Option<ConciseCore>,
    pub pencil: Option<PencilRootStructure>,
}

pub fn classify(t: &DenseTensor) -> Result<BorderRankClass> {
    Ok(classify_detailed(t)?.class)
}

pub fn classify_detailed(t: &DenseTensor) -> Result<Classification> {
    let plain = |class, ml| Ok(Classification { class, multilinear_ranks: ml, concise: None, pencil: None });
    if t.is_zero() {
        return plain(BorderRankClass::Zero, vec![0; t.order()]);
    }
    // σ₂ gate, first half: every single-mode rank ≤ 2, certified by concision.
    let cc = match concise_core(t) {
        Ok(cc) => cc,
        Err(Error::NotInSigma2) => return plain(BorderRankClass::BeyondSigmaTwo, multilinear_ranks(t)),
        Err(e) => return Err(e),
    };
    let ml: Vec<usize> = (0..t.order()).map(|m| if cc.mode_map.contains(&m) { 2 } else { 1 }).collect();
    let q = cc.q();
    if q == 0 {
        return plain(BorderRankClass::RankOne, ml);
    }
    // Second half: the remaining bipartitions, on the core (injective bases
    // preserve every flattening rank).
    if core_sweep(&cc.core, 2) > 2 {
        return plain(BorderRankClass::BeyondSigmaTwo, ml);
    }
    let (class, pencil) = match q {
        1 => {
            return Err(Error::Internal("a single essential mode cannot carry flattening rank 2".into()));
        }
        // Every point of σ₂(P¹×P¹) lies on a tangent plane: rank 2, type 2.
        2 => (BorderRankClass::Tangent(2), None),
        _ => {
            let p = slice_pencil_gcd(&cc.core, 0)?;
            let class = if p.structure.is_distinct() {
                BorderRankClass::GenericRank2
            } else {
                BorderRankClass::Tangent(q)
            };
            (class, Some(p))
        }
    };
    Ok(Classification { class, multilinear_ranks: ml, concise: Some(cc), pencil })
}

/// The type η of a σ₂ point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Eta {
    pub value: usize,
    /// `false` for generic rank-2 points, which lie off the tangent
    /// developable; `value` is then the conventional 2.
    pub defined: bool,
}

pub fn type_eta(t: &DenseTensor) -> Result<Eta> {
    eta_of(classify(t)?)
}

pub fn eta_of(class: BorderRankClass) -> Result<Eta> {
    match class {
        BorderRankClass::RankOne => Ok(Eta { value: 1, defined: true }),
        BorderRankClass::Tangent(q) => Ok(Eta { value: q, defined: true }),
        BorderRankClass::GenericRank2 => Ok(Eta { value: 2, defined: false }),
        BorderRankClass::Zero | BorderRankClass::BeyondSigmaTwo => Err(Error::EtaUndefined),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ExactMatrix;
    use crate::scalar::Scalar;

    fn w_state() -> DenseTensor {
        DenseTensor::from_ints(&[2, 2, 2], &[0, 1, 1, 0, 1, 0, 0, 0]).unwrap()
    }

    fn ghz() -> DenseTensor {
        DenseTensor::from_ints(&[2, 2, 2], &[1, 0, 0, 0, 0, 0, 0, 1]).unwrap()
    }

    #[test]
    fn canonical_instances() {
        let r1 = DenseTensor::outer_product(&[
            vec![Scalar::ratio(2, 3), Scalar::from_int(-1)],
            vec![Scalar::from_int(5), Scalar::ratio(1, 7)],
            vec![Scalar::from_int(3), Scalar::from_int(4)],
        ])
        .unwrap();
        assert_eq!(classify(&r1).unwrap(), BorderRankClass::RankOne);
        assert_eq!(classify(&ghz()).unwrap(), BorderRankClass::GenericRank2);
        assert_eq!(classify(&w_state()).unwrap(), BorderRankClass::Tangent(3));
        let mut e = vec![0; 27];
        for i in 0..3 {
            e[i * 13] = 1;
        }
        let diag = DenseTensor::from_ints(&[3, 3, 3], &e).unwrap();
        assert_eq!(classify(&diag).unwrap(), BorderRankClass::BeyondSigmaTwo);
        let z = DenseTensor::from_ints(&[2, 2], &[0; 4]).unwrap();
        assert_eq!(classify(&z).unwrap(), BorderRankClass::Zero);
    }

    #[test]
    fn eta_values() {
        assert_eq!(type_eta(&w_state()).unwrap(), Eta { value: 3, defined: true });
        assert_eq!(type_eta(&ghz()).unwrap(), Eta { value: 2, defined: false });
        let r1 = DenseTensor::from_ints(&[2, 2], &[1, 1, 1, 1]).unwrap();
        assert_eq!(type_eta(&r1).unwrap().value, 1);
        let mut e = vec![0; 27];
        for i in 0..3 {
            e[i * 13] = 1;
        }
        let diag = DenseTensor::from_ints(&[3, 3, 3], &e).unwrap();
        assert!(matches!(type_eta(&diag), Err(Error::EtaUndefined)));
    }

    #[test]
    fn w_state_pencil_has_double_root_at_zero_one() {
        let p = slice_pencil_gcd(&w_state(), 0).unwrap();
        let expect = ProjPoint::new(Scalar::zero(), Scalar::one()).unwrap();
        assert_eq!(p.structure, RootStructure::DoubleRoot(expect));
        // gcd ∝ λ²
        assert_eq!(p.gcd_form.coeffs(), &[Scalar::one(), Scalar::zero(), Scalar::zero()]);
    }

    #[test]
    fn ghz_pencil_roots_are_the_slices() {
        let p = slice_pencil_gcd(&ghz(), 0).unwrap();
        let RootStructure::TwoDistinct(a, b) = p.structure else { panic!() };
        let e = [ProjPoint::new(Scalar::one(), Scalar::zero()).unwrap(), ProjPoint::new(Scalar::zero(), Scalar::one()).unwrap()];
        assert!(e.contains(&a) && e.contains(&b));
    }

    #[test]
    fn basis_change_moves_pencil_roots() {
        // mode-0 change [[1,1],[1,2]]: new slices mix, the locus moves but stays two points
        let m = ExactMatrix::from_ints(&[&[1, 1], &[1, 2]]);
        let t = ghz().mode_apply(0, &m).unwrap();
        let p = slice_pencil_gcd(&t, 0).unwrap();
        let RootStructure::TwoDistinct(a, b) = p.structure else { panic!() };
        // slices: M0 = E00 + E11, M1 = E00 + 2 E11; rank one at λ+μ=0 and λ+2μ=0
        let e = [
            ProjPoint::new(Scalar::from_int(-1), Scalar::one()).unwrap(),
            ProjPoint::new(Scalar::from_int(-2), Scalar::one()).unwrap(),
        ];
        assert!(e.contains(&a) && e.contains(&b));
    }

    #[test]
    fn two_essential_modes_is_tangent_two() {
        let t = DenseTensor::from_ints(&[2, 2], &[1, 0, 0, -1]).unwrap();
        assert_eq!(classify(&t).unwrap(), BorderRankClass::Tangent(2));
    }

    #[test]
    fn order_one_is_rank_one() {
        let t = DenseTensor::from_ints(&[3], &[0, 2, 1]).unwrap();
        assert_eq!(classify(&t).unwrap(), BorderRankClass::RankOne);
    }
}
