//! Linear conversion schemes: one download map per initial node.

use serde::{Deserialize, Serialize};

use super::params::SplitParams;
use crate::error::ParamError;
use crate::gf::{Elem, Field, Matrix};

/// Per-node linear download maps. `info_maps[j]` is the `beta_j x alpha`
/// map applied to information node `j`; `parity_maps[i]` is the
/// `sigma_i x alpha` map applied to initial parity node `i`. Every map has
/// full row rank, so `beta_j` and `sigma_i` are both row counts and
/// entropies of the downloaded data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConversionScheme {
    params: SplitParams,
    info_maps: Vec<Matrix>,
    parity_maps: Vec<Matrix>,
}

/// JSON form of a scheme; `A` and `B` are row-major flattened maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeDoc {
    pub beta: Vec<usize>,
    pub sigma: Vec<usize>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<u32>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<u32>>,
}

fn check_maps(maps: &[Matrix], expected: usize, alpha: usize, what: &str) -> Result<(), ParamError> {
    if maps.len() != expected {
        return Err(ParamError::SchemeShape(format!(
            "{} {what} maps, expected {expected}",
            maps.len()
        )));
    }
    for (i, m) in maps.iter().enumerate() {
        if m.cols() != alpha || m.rows() > alpha {
            return Err(ParamError::SchemeShape(format!(
                "{what} map {i} is {}x{}, expected at most {alpha}x{alpha}",
                m.rows(),
                m.cols()
            )));
        }
        if m.rank() != m.rows() {
            return Err(ParamError::SchemeShape(format!("{what} map {i} is not full row rank")));
        }
    }
    Ok(())
}

impl ConversionScheme {
    pub fn new(params: SplitParams, info_maps: Vec<Matrix>, parity_maps: Vec<Matrix>) -> Result<Self, ParamError> {
        check_maps(&info_maps, params.k_i(), params.alpha, "info")?;
        check_maps(&parity_maps, params.r_i, params.alpha, "parity")?;
        Ok(ConversionScheme {
            params,
            info_maps,
            parity_maps,
        })
    }

    /// Replaces each map by the canonical basis of its row space, so any
    /// linear map (rank-deficient or not) yields an equivalent scheme.
    pub fn canonicalized(
        params: SplitParams,
        info_maps: &[Matrix],
        parity_maps: &[Matrix],
    ) -> Result<Self, ParamError> {
        let canon = |ms: &[Matrix]| ms.iter().map(Matrix::row_space_basis).collect::<Vec<_>>();
        Self::new(params, canon(info_maps), canon(parity_maps))
    }

    /// Downloads nothing.
    pub fn empty(params: SplitParams, field: &Field) -> Self {
        let z = Matrix::zeros(field, 0, params.alpha);
        ConversionScheme {
            params,
            info_maps: vec![z.clone(); params.k_i()],
            parity_maps: vec![z; params.r_i],
        }
    }

    pub fn params(&self) -> &SplitParams {
        &self.params
    }

    pub fn info_maps(&self) -> &[Matrix] {
        &self.info_maps
    }

    pub fn parity_maps(&self) -> &[Matrix] {
        &self.parity_maps
    }

    pub fn beta(&self) -> Vec<usize> {
        self.info_maps.iter().map(Matrix::rows).collect()
    }

    pub fn sigma(&self) -> Vec<usize> {
        self.parity_maps.iter().map(Matrix::rows).collect()
    }

    /// Total downloaded subsymbols.
    pub fn read_total(&self) -> usize {
        self.beta().iter().sum::<usize>() + self.sigma().iter().sum::<usize>()
    }

    pub fn to_doc(&self) -> SchemeDoc {
        let flat = |m: &Matrix| m.data().iter().map(|&v| v as u32).collect();
        SchemeDoc {
            beta: self.beta(),
            sigma: self.sigma(),
            a: self.info_maps.iter().map(flat).collect(),
            b: self.parity_maps.iter().map(flat).collect(),
        }
    }

    pub fn from_doc(params: SplitParams, field: &Field, doc: &SchemeDoc) -> Result<Self, ParamError> {
        let build = |dims: &[usize], flat: &[Vec<u32>]| -> Result<Vec<Matrix>, ParamError> {
            if dims.len() != flat.len() {
                return Err(ParamError::SchemeShape("dimension list and map list differ".into()));
            }
            dims.iter()
                .zip(flat)
                .map(|(&d, v)| {
                    let data: Vec<Elem> = v.iter().map(|&x| x.min(255) as Elem).collect();
                    if v.iter().any(|&x| x as usize >= field.order()) {
                        return Err(ParamError::SchemeShape("map entry outside the field".into()));
                    }
                    Ok(Matrix::from_vec(field, d, params.alpha, data)?)
                })
                .collect()
        };
        Self::new(params, build(&doc.beta, &doc.a)?, build(&doc.sigma, &doc.b)?)
    }
}
