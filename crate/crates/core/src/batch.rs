//! Independent per-instance work fanned out over an [`Execution`] policy.
//! Results keep input order.

use crate::classify::{classify_detailed, Classification};
use crate::decompose::{decompose, Decomposition};
use crate::error::Result;
use crate::exec::Execution;
use crate::tensor::DenseTensor;

pub fn classify_all(ts: &[DenseTensor], exec: Execution) -> Vec<Result<Classification>> {
    exec.map(ts, classify_detailed)
}

pub fn decompose_all(ts: &[DenseTensor], exec: Execution) -> Vec<Result<Decomposition>> {
    exec.map(ts, |t| decompose(t, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, GenKind, GenSpec};
    use crate::tensor::Shape;

    #[test]
    fn parallel_matches_sequential() {
        let ts: Vec<DenseTensor> = (0..12)
            .map(|s| {
                let kind = [GenKind::Rank1, GenKind::Rank2, GenKind::Tangent][s as usize % 3];
                generate(&GenSpec::new(kind, Shape::new(vec![2, 3, 2, 2]).unwrap(), s)).unwrap().0
            })
            .collect();
        let seq: Vec<_> = classify_all(&ts, Execution::Sequential).into_iter().map(|c| c.unwrap().class).collect();
        let par: Vec<_> = classify_all(&ts, Execution::Parallel).into_iter().map(|c| c.unwrap().class).collect();
        assert_eq!(seq, par);
        let seq: Vec<_> = decompose_all(&ts, Execution::Sequential).into_iter().map(Result::unwrap).collect();
        let par: Vec<_> = decompose_all(&ts, Execution::Parallel).into_iter().map(Result::unwrap).collect();
        assert_eq!(seq, par);
    }
}
