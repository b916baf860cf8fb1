use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::gf::Field;

/// Parameters of a split-regime conversion: one `[n_i, k_i]` initial
/// codeword becomes `lambda_f` final `[n_f, k_f]` codewords, with
/// `k_i = lambda_f * k_f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitParams {
    #[serde(rename = "lf")]
    pub lambda_f: usize,
    #[serde(rename = "kf")]
    pub k_f: usize,
    #[serde(rename = "rf")]
    pub r_f: usize,
    #[serde(rename = "ri")]
    pub r_i: usize,
    pub alpha: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<usize>,
}

impl SplitParams {
    pub fn new(lambda_f: usize, k_f: usize, r_f: usize, r_i: usize, alpha: usize) -> Result<Self, ParamError> {
        if lambda_f < 2 {
            return Err(ParamError::LambdaTooSmall(lambda_f));
        }
        if k_f == 0 {
            return Err(ParamError::ZeroDimension);
        }
        if alpha == 0 {
            return Err(ParamError::ZeroAlpha);
        }
        Ok(SplitParams {
            lambda_f,
            k_f,
            r_f,
            r_i,
            alpha,
            q: None,
        })
    }

    /// Attaches a field order, which must admit Reed-Solomon codes of both
    /// lengths.
    pub fn with_field(mut self, q: usize) -> Result<Self, ParamError> {
        Field::new(q)?;
        let needed = self.n_i().max(self.n_f());
        if q < needed {
            return Err(ParamError::FieldTooSmall { q, needed });
        }
        self.q = Some(q);
        Ok(self)
    }

    pub fn k_i(&self) -> usize {
        self.lambda_f * self.k_f
    }

    pub fn n_i(&self) -> usize {
        self.k_i() + self.r_i
    }

    pub fn n_f(&self) -> usize {
        self.k_f + self.r_f
    }

    /// Message length in nodes; equals `k_i` in the split regime.
    pub fn message_nodes(&self) -> usize {
        self.k_i()
    }

    /// Message length in field symbols.
    pub fn message_dim(&self) -> usize {
        self.k_i() * self.alpha
    }

    /// Info-node indices of final codeword `t` (zero-based), i.e. the
    /// contiguous block `t*k_f .. (t+1)*k_f`.
    pub fn codeword_nodes(&self, t: usize) -> std::ops::Range<usize> {
        t * self.k_f..(t + 1) * self.k_f
    }

    pub fn field(&self) -> Option<Result<Field, ParamError>> {
        self.q.map(|q| Field::new(q).map_err(ParamError::from))
    }
}
