//! Split-regime convertible codes: parameters, conversion schemes,
//! bandwidth accounting and the conversion itself on concrete data.

mod params;
mod scheme;

pub use params::SplitParams;
pub use scheme::{ConversionScheme, SchemeDoc};

use serde::Serialize;

use crate::entropy::{ensemble_from_codes, LinearEnsemble};
use crate::error::{ConversionError, ParamError};
use crate::gf::{in_span, Elem, Field, Matrix};
use crate::mds::VectorCode;

/// Re-encoding: every information node is read in full, no parity is read.
pub fn default_scheme(params: SplitParams, field: &Field) -> ConversionScheme {
    let id = Matrix::identity(field, params.alpha);
    ConversionScheme::new(
        params,
        vec![id; params.k_i()],
        vec![Matrix::zeros(field, 0, params.alpha); params.r_i],
    )
    .expect("identity maps are full rank")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandwidthReport {
    pub beta: Vec<usize>,
    pub sigma: Vec<usize>,
    pub read_total: usize,
    /// Symbols written to the new final parity nodes.
    pub write_total: usize,
    /// `read_total` over the default scheme's read total `k_i * alpha`.
    pub default_ratio: f64,
}

pub fn scheme_bandwidth(scheme: &ConversionScheme) -> BandwidthReport {
    let p = scheme.params();
    let read_total = scheme.read_total();
    BandwidthReport {
        beta: scheme.beta(),
        sigma: scheme.sigma(),
        read_total,
        write_total: p.lambda_f * p.r_f * p.alpha,
        default_ratio: read_total as f64 / (p.k_i() * p.alpha) as f64,
    }
}

/// Coefficient rows of everything the scheme downloads, stacked: info
/// nodes first, then initial parities.
pub fn downloaded_rows(ens: &LinearEnsemble, scheme: &ConversionScheme) -> Matrix {
    let v = ens.downloaded_info(scheme);
    let u = ens.downloaded_parity(scheme);
    Matrix::vstack(ens.field(), ens.message_dim(), v.iter().chain(&u)).expect("blocks share the message dimension")
}

fn final_rows(ens: &LinearEnsemble) -> Matrix {
    Matrix::vstack(ens.field(), ens.message_dim(), ens.final_parity()).expect("blocks share the message dimension")
}

/// True iff every final parity row lies in the span of the downloads.
pub fn check_feasible(ens: &LinearEnsemble, scheme: &ConversionScheme) -> bool {
    in_span(&final_rows(ens), &downloaded_rows(ens, scheme)).expect("same message dimension")
}

#[derive(Clone, Debug, Serialize)]
pub struct ConversionOutput {
    /// `codewords[t][node]` holds the `alpha` symbols of node `node` of
    /// final codeword `t`; nodes `0..k_f` are information nodes.
    pub codewords: Vec<Vec<Vec<Elem>>>,
    pub bandwidth: BandwidthReport,
}

/// Encodes `message` with `initial`, then builds the final codewords using
/// only the symbols the scheme downloads from the initial nodes.
pub fn run_conversion(
    params: SplitParams,
    initial: &VectorCode,
    final_code: &VectorCode,
    scheme: &ConversionScheme,
    message: &[Elem],
) -> Result<ConversionOutput, ConversionError> {
    let ens = ensemble_from_codes(params, initial, final_code)?;
    check_maps_match(&ens, scheme)?;
    let stored = initial.encode(message)?;
    let a = params.alpha;

    // Values the coordinator receives, in the row order of `downloaded_rows`.
    let mut received: Vec<Elem> = Vec::with_capacity(scheme.read_total());
    let nodes = scheme.info_maps().iter().chain(scheme.parity_maps());
    for (node, map) in nodes.enumerate() {
        received.extend(map.transpose().vec_mul(&stored[node]));
    }

    let coeffs = Matrix::solve_left(&final_rows(&ens), &downloaded_rows(&ens, scheme))
        .map_err(ParamError::from)?
        .ok_or(ConversionError::Infeasible)?;
    let parity_values = if received.is_empty() {
        vec![0; coeffs.rows()]
    } else {
        coeffs.transpose().vec_mul(&received)
    };

    let rf = params.r_f;
    let codewords = (0..params.lambda_f)
        .map(|t| {
            let mut cw: Vec<Vec<Elem>> = params.codeword_nodes(t).map(|j| stored[j].clone()).collect();
            for s in 0..rf {
                let start = (t * rf + s) * a;
                cw.push(parity_values[start..start + a].to_vec());
            }
            cw
        })
        .collect();
    Ok(ConversionOutput {
        codewords,
        bandwidth: scheme_bandwidth(scheme),
    })
}

fn check_maps_match(ens: &LinearEnsemble, scheme: &ConversionScheme) -> Result<(), ParamError> {
    let p = ens.params();
    let s = scheme.params();
    if (s.lambda_f, s.k_f, s.r_f, s.r_i, s.alpha) != (p.lambda_f, p.k_f, p.r_f, p.r_i, p.alpha) {
        return Err(ParamError::SchemeShape(format!(
            "scheme is for {s:?}, codes are for {p:?}"
        )));
    }
    let field_ok = scheme
        .info_maps()
        .iter()
        .chain(scheme.parity_maps())
        .all(|m| m.field() == ens.field());
    if !field_ok {
        return Err(ParamError::SchemeShape("scheme maps use a different field".into()));
    }
    Ok(())
}
