//! Storage nodes as linear functions of a uniform message.
//!
//! Every node's content is an `alpha x (k_i*alpha)` coefficient block over
//! the message coordinates. For a uniform message the Shannon entropy (in
//! units of `log q`) of any collection of such linear functions is the rank
//! of their stacked coefficient rows.

use serde::Serialize;

use crate::convertible::{ConversionScheme, SplitParams};
use crate::error::ParamError;
use crate::gf::{Field, Matrix};
use crate::mds::{make_systematic_mds, VectorCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Info,
    InitialParity,
    FinalParity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeId {
    pub kind: NodeKind,
    pub index: usize,
}

impl NodeId {
    pub fn info(index: usize) -> Self {
        NodeId {
            kind: NodeKind::Info,
            index,
        }
    }

    pub fn initial_parity(index: usize) -> Self {
        NodeId {
            kind: NodeKind::InitialParity,
            index,
        }
    }

    pub fn final_parity(index: usize) -> Self {
        NodeId {
            kind: NodeKind::FinalParity,
            index,
        }
    }
}

/// Rank of the stacked rows of `blocks`.
pub fn entropy(blocks: &[&Matrix]) -> usize {
    let Some(first) = blocks.first() else {
        return 0;
    };
    let cols = first.cols();
    Matrix::vstack(first.field(), cols, blocks.iter().copied())
        .expect("blocks share the message dimension")
        .rank()
}

/// `H(A | B) = H(A, B) - H(B)`.
pub fn cond_entropy(a: &[&Matrix], b: &[&Matrix]) -> usize {
    let joint: Vec<&Matrix> = a.iter().chain(b).copied().collect();
    entropy(&joint) - entropy(b)
}

/// `I(A; B) = H(A) + H(B) - H(A, B)`.
pub fn mutual_info(a: &[&Matrix], b: &[&Matrix]) -> usize {
    let joint: Vec<&Matrix> = a.iter().chain(b).copied().collect();
    entropy(a) + entropy(b) - entropy(&joint)
}

/// True iff the blocks are independent: their joint entropy is the sum of
/// their individual entropies.
pub fn independent(blocks: &[&Matrix]) -> bool {
    entropy(blocks) == blocks.iter().map(|m| m.rank()).sum::<usize>()
}

#[derive(Clone, Debug)]
pub struct LinearEnsemble {
    params: SplitParams,
    field: Field,
    info: Vec<Matrix>,
    initial_parity: Vec<Matrix>,
    final_parity: Vec<Matrix>,
}

impl LinearEnsemble {
    pub fn params(&self) -> &SplitParams {
        &self.params
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn message_dim(&self) -> usize {
        self.params.message_dim()
    }

    pub fn block(&self, id: NodeId) -> &Matrix {
        match id.kind {
            NodeKind::Info => &self.info[id.index],
            NodeKind::InitialParity => &self.initial_parity[id.index],
            NodeKind::FinalParity => &self.final_parity[id.index],
        }
    }

    pub fn info(&self) -> &[Matrix] {
        &self.info
    }

    pub fn initial_parity(&self) -> &[Matrix] {
        &self.initial_parity
    }

    /// All `lambda_f * r_f` final parity blocks; codeword `t` owns
    /// `t*r_f .. (t+1)*r_f`.
    pub fn final_parity(&self) -> &[Matrix] {
        &self.final_parity
    }

    pub fn final_parity_of(&self, t: usize) -> &[Matrix] {
        let r = self.params.r_f;
        &self.final_parity[t * r..(t + 1) * r]
    }

    pub fn info_of(&self, t: usize) -> &[Matrix] {
        &self.info[self.params.codeword_nodes(t)]
    }

    pub fn entropy_of(&self, nodes: &[NodeId]) -> usize {
        let blocks: Vec<&Matrix> = nodes.iter().map(|&n| self.block(n)).collect();
        entropy(&blocks)
    }

    /// Downloaded data `V_j = A_j X_j` for every information node.
    pub fn downloaded_info(&self, scheme: &ConversionScheme) -> Vec<Matrix> {
        scheme
            .info_maps()
            .iter()
            .zip(&self.info)
            .map(|(a, x)| a.mul(x))
            .collect()
    }

    /// Downloaded data `U_i = B_i Y_i` for every initial parity node.
    pub fn downloaded_parity(&self, scheme: &ConversionScheme) -> Vec<Matrix> {
        scheme
            .parity_maps()
            .iter()
            .zip(&self.initial_parity)
            .map(|(b, y)| b.mul(y))
            .collect()
    }

    /// Copy with one final parity block overwritten; used to plant
    /// counterexamples.
    pub fn with_final_parity(&self, slot: usize, block: Matrix) -> Self {
        let mut e = self.clone();
        e.final_parity[slot] = block;
        e
    }

    pub fn with_initial_parity(&self, slot: usize, block: Matrix) -> Self {
        let mut e = self.clone();
        e.initial_parity[slot] = block;
        e
    }
}

/// Builds the ensemble for an initial `[n_i, k_i, alpha]` code and a final
/// `[n_f, k_f, alpha]` code. Final codeword `t` encodes message nodes
/// `t*k_f .. (t+1)*k_f`.
pub fn ensemble_from_codes(
    params: SplitParams,
    initial: &VectorCode,
    final_code: &VectorCode,
) -> Result<LinearEnsemble, ParamError> {
    let a = params.alpha;
    let shape = |c: &VectorCode| (c.n(), c.k(), c.alpha());
    if shape(initial) != (params.n_i(), params.k_i(), a) {
        return Err(ParamError::SchemeShape(format!(
            "initial code is {:?}, expected {:?}",
            shape(initial),
            (params.n_i(), params.k_i(), a)
        )));
    }
    if shape(final_code) != (params.n_f(), params.k_f, a) {
        return Err(ParamError::SchemeShape(format!(
            "final code is {:?}, expected {:?}",
            shape(final_code),
            (params.n_f(), params.k_f, a)
        )));
    }
    if initial.field() != final_code.field() {
        return Err(ParamError::SchemeShape(
            "initial and final codes use different fields".into(),
        ));
    }
    if let Some(q) = params.q {
        if q != initial.field().order() {
            return Err(ParamError::SchemeShape(format!(
                "parameters name GF({q}) but codes are over {:?}",
                initial.field()
            )));
        }
    }
    let field = initial.field().clone();
    let m = params.message_dim();

    let info = (0..params.k_i())
        .map(|j| {
            let mut b = Matrix::zeros(&field, a, m);
            for l in 0..a {
                b.set(l, j * a + l, 1);
            }
            b
        })
        .collect();
    let initial_parity = (params.k_i()..params.n_i())
        .map(|node| initial.node_columns(node).transpose())
        .collect();

    let kf_dim = params.k_f * a;
    let mut final_parity = Vec::with_capacity(params.lambda_f * params.r_f);
    for t in 0..params.lambda_f {
        for node in params.k_f..params.n_f() {
            // alpha x (k_f*alpha) block, embedded at codeword t's coordinates.
            let local = final_code.node_columns(node).transpose();
            let mut b = Matrix::zeros(&field, a, m);
            for r in 0..a {
                for c in 0..kf_dim {
                    b.set(r, t * kf_dim + c, local.get(r, c));
                }
            }
            final_parity.push(b);
        }
    }
    Ok(LinearEnsemble {
        params,
        field,
        info,
        initial_parity,
        final_parity,
    })
}

/// The canonical code pair for `params`: systematic Reed-Solomon initial
/// and final codes over `GF(params.q)`.
pub fn canonical_pair(params: &SplitParams) -> Result<(VectorCode, VectorCode), ParamError> {
    let q = params
        .q
        .ok_or_else(|| ParamError::SchemeShape("field order not set".into()))?;
    let field = Field::new(q)?;
    let initial = make_systematic_mds(params.n_i(), params.k_i(), params.alpha, &field)?;
    let final_code = make_systematic_mds(params.n_f(), params.k_f, params.alpha, &field)?;
    Ok((initial, final_code))
}

/// Ensemble of the canonical Reed-Solomon pair.
pub fn rs_ensemble(params: SplitParams) -> Result<LinearEnsemble, ParamError> {
    let (initial, final_code) = canonical_pair(&params)?;
    ensemble_from_codes(params, &initial, &final_code)
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    pub(crate) fn rs_ensemble(lf: usize, kf: usize, rf: usize, ri: usize, alpha: usize, q: usize) -> LinearEnsemble {
        let p = SplitParams::new(lf, kf, rf, ri, alpha).unwrap().with_field(q).unwrap();
        super::rs_ensemble(p).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::tests_support::rs_ensemble;
    use super::*;

    #[test]
    fn block_counts_follow_parameters() {
        let e = rs_ensemble(2, 1, 1, 1, 1, 5);
        assert_eq!(
            (e.info().len(), e.initial_parity().len(), e.final_parity().len()),
            (2, 1, 2)
        );
        assert!(e.final_parity().iter().all(|b| b.rows() == 1));
    }

    #[test]
    fn info_blocks_span_message() {
        let e = rs_ensemble(3, 2, 1, 2, 2, 11);
        let all: Vec<&Matrix> = e.info().iter().collect();
        assert_eq!(entropy(&all), e.message_dim());
    }

    #[test]
    fn final_parity_is_embedded_in_its_codeword() {
        let e = rs_ensemble(2, 2, 2, 1, 2, 7);
        let kf_dim = 2 * 2;
        for b in e.final_parity_of(0) {
            for r in 0..b.rows() {
                assert!(b.row(r)[kf_dim..].iter().all(|&v| v == 0));
            }
        }
        for b in e.final_parity_of(1) {
            for r in 0..b.rows() {
                assert!(b.row(r)[..kf_dim].iter().all(|&v| v == 0));
            }
        }
    }

    #[test]
    fn entropy_identities() {
        let e = rs_ensemble(2, 2, 1, 2, 1, 7);
        let x0 = e.block(NodeId::info(0));
        assert_eq!(entropy(&[x0]), 1);
        assert_eq!(entropy(&[]), 0);
        let all_x: Vec<&Matrix> = e.info().iter().collect();
        let all_y: Vec<&Matrix> = e.initial_parity().iter().collect();
        assert_eq!(cond_entropy(&all_y, &all_x), 0);
        assert_eq!(mutual_info(&all_y, &all_y), entropy(&all_y));
        let c1: Vec<&Matrix> = e.info_of(0).iter().collect();
        let c2: Vec<&Matrix> = e.info_of(1).iter().collect();
        assert_eq!(mutual_info(&c1, &c2), 0);
        let joint: Vec<&Matrix> = all_x.iter().chain(&all_y).copied().collect();
        assert_eq!(entropy(&joint), 4);
    }

    #[test]
    fn rejects_mismatched_codes() {
        let p = SplitParams::new(2, 2, 1, 1, 1).unwrap();
        let f = Field::new(7).unwrap();
        let init = make_systematic_mds(5, 4, 1, &f).unwrap();
        let wrong = make_systematic_mds(4, 2, 1, &f).unwrap();
        assert!(ensemble_from_codes(p, &init, &wrong).is_err());
        let other_field = make_systematic_mds(3, 2, 1, &Field::new(5).unwrap()).unwrap();
        assert!(ensemble_from_codes(p, &init, &other_field).is_err());
    }
}
