//! Systematic MDS vector codes.
//!
//! A code with parameters `[n, k, alpha]` stores `alpha` field symbols on
//! each of `n` nodes. The generator is a `k*alpha x n*alpha` matrix; node
//! `i` owns columns `i*alpha .. (i+1)*alpha` and message coordinate
//! `j*alpha + l` is layer `l` of systematic node `j`. The systematic set is
//! always the first `k` nodes.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CodeError, GfError};
use crate::gf::{Elem, Field, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorCode {
    n: usize,
    k: usize,
    alpha: usize,
    generator: Matrix,
    systematic_set: Vec<usize>,
}

/// JSON form of a [`VectorCode`]; `generator` is row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorCodeDoc {
    pub n: usize,
    pub k: usize,
    pub alpha: usize,
    pub q: usize,
    pub generator: Vec<u32>,
    pub systematic_set: Vec<usize>,
}

/// Systematic `[n, k]` generalized Reed-Solomon generator over `field`,
/// evaluation points are the element labels `0..n`.
pub fn systematic_rs_scalar(n: usize, k: usize, field: &Field) -> Result<Matrix, CodeError> {
    if k == 0 || k > n {
        return Err(CodeError::InvalidParams(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    if field.order() < n {
        return Err(CodeError::FieldTooSmall { q: field.order(), n });
    }
    let mut vander = Matrix::zeros(field, k, n);
    for c in 0..n {
        let x = c as Elem;
        for r in 0..k {
            vander.set(r, c, field.pow(x, r as u64));
        }
    }
    let head: Vec<usize> = (0..k).collect();
    let inv = vander.select_cols(&head).inverse()?;
    Ok(inv.mul(&vander))
}

/// Expands a scalar `k x n` generator into `alpha` independent layers.
fn layer_generator(scalar: &Matrix, alpha: usize) -> Matrix {
    let (k, n) = (scalar.rows(), scalar.cols());
    let mut g = Matrix::zeros(scalar.field(), k * alpha, n * alpha);
    for a in 0..k {
        for b in 0..n {
            let v = scalar.get(a, b);
            for l in 0..alpha {
                g.set(a * alpha + l, b * alpha + l, v);
            }
        }
    }
    g
}

/// Systematic MDS `[n, k, alpha]` code: a systematic RS code per layer.
pub fn make_systematic_mds(n: usize, k: usize, alpha: usize, field: &Field) -> Result<VectorCode, CodeError> {
    if alpha == 0 {
        return Err(CodeError::InvalidParams("alpha must be >= 1".into()));
    }
    let scalar = systematic_rs_scalar(n, k, field)?;
    VectorCode::from_generator(n, k, alpha, layer_generator(&scalar, alpha))
}

impl VectorCode {
    /// Wraps a generator, checking its shape and systematic form.
    pub fn from_generator(n: usize, k: usize, alpha: usize, generator: Matrix) -> Result<Self, CodeError> {
        if k == 0 || k > n || alpha == 0 {
            return Err(CodeError::InvalidParams(format!("n={n}, k={k}, alpha={alpha}")));
        }
        if generator.rows() != k * alpha || generator.cols() != n * alpha {
            return Err(CodeError::InvalidParams(format!(
                "generator is {}x{}, expected {}x{}",
                generator.rows(),
                generator.cols(),
                k * alpha,
                n * alpha
            )));
        }
        let head: Vec<usize> = (0..k * alpha).collect();
        if generator.select_cols(&head) != Matrix::identity(generator.field(), k * alpha) {
            return Err(CodeError::InvalidParams("generator is not in systematic form".into()));
        }
        Ok(VectorCode {
            n,
            k,
            alpha,
            generator,
            systematic_set: (0..k).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.n - self.k
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn field(&self) -> &Field {
        self.generator.field()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn systematic_set(&self) -> &[usize] {
        &self.systematic_set
    }

    /// Generator columns of `node`, as a `k*alpha x alpha` matrix.
    pub fn node_columns(&self, node: usize) -> Matrix {
        let cols: Vec<usize> = (node * self.alpha..(node + 1) * self.alpha).collect();
        self.generator.select_cols(&cols)
    }

    fn columns_of(&self, nodes: &[usize]) -> Matrix {
        let cols: Vec<usize> = nodes
            .iter()
            .flat_map(|&i| i * self.alpha..(i + 1) * self.alpha)
            .collect();
        self.generator.select_cols(&cols)
    }

    /// The parity part `P` of `G = [I | P]`.
    pub fn parity_block(&self) -> Matrix {
        let cols: Vec<usize> = (self.k * self.alpha..self.n * self.alpha).collect();
        self.generator.select_cols(&cols)
    }

    /// Same systematic part, parity part replaced by `parity`.
    pub fn with_parity_block(&self, parity: &Matrix) -> Result<Self, CodeError> {
        let ident = Matrix::identity(self.field(), self.k * self.alpha);
        let g = ident.hstack(parity)?;
        Self::from_generator(self.n, self.k, self.alpha, g)
    }

    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Vec<Elem>>, CodeError> {
        let expected = self.k * self.alpha;
        if message.len() != expected {
            return Err(CodeError::LengthMismatch {
                expected,
                got: message.len(),
            });
        }
        if message.iter().any(|&v| !self.field().contains(v)) {
            return Err(GfError::DimensionMismatch("message symbol outside the field".into()).into());
        }
        let flat = self.generator.vec_mul(message);
        Ok(flat.chunks(self.alpha).map(<[Elem]>::to_vec).collect())
    }

    /// Recovers the message from at least `k` nodes. The first `k` indices
    /// (in ascending order) determine the message; every supplied node is
    /// then checked against the re-encoding.
    pub fn decode_from(&self, available: &BTreeMap<usize, Vec<Elem>>) -> Result<Vec<Elem>, CodeError> {
        if available.len() < self.k {
            return Err(CodeError::TooFewNodes {
                needed: self.k,
                got: available.len(),
            });
        }
        for (&node, sym) in available {
            if node >= self.n {
                return Err(CodeError::NodeOutOfRange(node));
            }
            if sym.len() != self.alpha {
                return Err(CodeError::LengthMismatch {
                    expected: self.alpha,
                    got: sym.len(),
                });
            }
        }
        let chosen: Vec<usize> = available.keys().copied().take(self.k).collect();
        let square = self.columns_of(&chosen);
        let inv = square.inverse().map_err(|_| CodeError::NotDecodable)?;
        let observed: Vec<Elem> = chosen.iter().flat_map(|i| available[i].iter().copied()).collect();
        // m * G_S = c_S  =>  m = c_S * G_S^{-1}
        let message = inv.vec_mul(&observed);
        let codeword = self.encode(&message)?;
        for (&node, sym) in available {
            if &codeword[node] != sym {
                return Err(CodeError::Corrupted { node });
            }
        }
        Ok(message)
    }

    /// True iff every `k`-subset of nodes has full rank `k*alpha`.
    pub fn verify_mds(&self) -> bool {
        self.first_rank_deficient_subset().is_none()
    }

    pub fn first_rank_deficient_subset(&self) -> Option<Vec<usize>> {
        (0..self.n)
            .combinations(self.k)
            .find(|s| self.columns_of(s).rank() != self.k * self.alpha)
    }

    /// The scalar code of a layered generator, if the generator has the
    /// block-diagonal layered structure.
    pub fn scalar_layer(&self) -> Option<VectorCode> {
        let a = self.alpha;
        let mut scalar = Matrix::zeros(self.field(), self.k, self.n);
        for i in 0..self.k * a {
            for j in 0..self.n * a {
                let v = self.generator.get(i, j);
                if i % a != j % a {
                    if v != 0 {
                        return None;
                    }
                } else if i % a == 0 {
                    scalar.set(i / a, j / a, v);
                } else if v != self.generator.get(i - i % a, j - j % a) {
                    return None;
                }
            }
        }
        VectorCode::from_generator(self.n, self.k, 1, scalar).ok()
    }

    /// Another systematic code with the same parameters: the parity block is
    /// right-multiplied by a random invertible matrix and kept if MDS. After
    /// `attempts` failures it falls back to independent per-node invertible
    /// mixes, which always preserve the MDS property.
    pub fn random_parity_mix<R: Rng + ?Sized>(&self, rng: &mut R, attempts: usize) -> VectorCode {
        let field = self.field().clone();
        let r_cols = self.r() * self.alpha;
        let parity = self.parity_block();
        if r_cols == 0 {
            return self.clone();
        }
        for _ in 0..attempts {
            let mix = Matrix::random_invertible(&field, r_cols, rng);
            if let Ok(code) = self.with_parity_block(&parity.mul(&mix)) {
                if code.verify_mds() {
                    return code;
                }
            }
        }
        let mut mix = Matrix::zeros(&field, r_cols, r_cols);
        for node in 0..self.r() {
            let block = Matrix::random_invertible(&field, self.alpha, rng);
            for i in 0..self.alpha {
                for j in 0..self.alpha {
                    mix.set(node * self.alpha + i, node * self.alpha + j, block.get(i, j));
                }
            }
        }
        self.with_parity_block(&parity.mul(&mix))
            .expect("block-diagonal mix keeps systematic shape")
    }

    /// A systematic code with the same parameters and a uniformly random
    /// parity block, if one of `attempts` draws is MDS.
    pub fn random_parity<R: Rng + ?Sized>(&self, rng: &mut R, attempts: usize) -> Option<VectorCode> {
        let (rows, cols) = (self.k * self.alpha, self.r() * self.alpha);
        (0..attempts).find_map(|_| {
            let parity = Matrix::random(self.field(), rows, cols, rng);
            self.with_parity_block(&parity).ok().filter(VectorCode::verify_mds)
        })
    }

    pub fn to_doc(&self) -> VectorCodeDoc {
        VectorCodeDoc {
            n: self.n,
            k: self.k,
            alpha: self.alpha,
            q: self.field().order(),
            generator: self.generator.data().iter().map(|&v| v as u32).collect(),
            systematic_set: self.systematic_set.clone(),
        }
    }

    pub fn from_doc(doc: &VectorCodeDoc) -> Result<Self, CodeError> {
        let field = Field::new(doc.q)?;
        let (rows, cols) = (doc.k * doc.alpha, doc.n * doc.alpha);
        if doc.generator.len() != rows * cols {
            return Err(CodeError::LengthMismatch {
                expected: rows * cols,
                got: doc.generator.len(),
            });
        }
        let mut data = Vec::with_capacity(doc.generator.len());
        for &v in &doc.generator {
            if v as usize >= doc.q {
                return Err(GfError::InvalidEntry { value: v, q: doc.q }.into());
            }
            data.push(v as Elem);
        }
        let g = Matrix::from_vec(&field, rows, cols, data)?;
        let code = Self::from_generator(doc.n, doc.k, doc.alpha, g)?;
        if doc.systematic_set != code.systematic_set {
            return Err(CodeError::InvalidParams(
                "systematic set must be the first k nodes".into(),
            ));
        }
        Ok(code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: usize) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn four_two_code_has_invertible_pairs() {
        let code = make_systematic_mds(4, 2, 1, &gf(5)).unwrap();
        let g = code.generator();
        // All six 2x2 column minors, computed directly.
        let f = code.field();
        for (a, b) in (0..4).tuple_combinations() {
            let det = f.sub(f.mul(g.get(0, a), g.get(1, b)), f.mul(g.get(0, b), g.get(1, a)));
            assert_ne!(det, 0, "columns {a},{b}");
        }
        assert!(code.verify_mds());
    }

    #[test]
    fn no_parity_code_is_identity() {
        let code = make_systematic_mds(3, 3, 2, &gf(5)).unwrap();
        assert_eq!(code.generator(), &Matrix::identity(&gf(5), 6));
        assert!(code.verify_mds());
    }

    #[test]
    fn six_four_over_gf7_is_mds() {
        assert!(make_systematic_mds(6, 4, 1, &gf(7)).unwrap().verify_mds());
    }

    #[test]
    fn rejects_small_field() {
        assert_eq!(
            make_systematic_mds(6, 3, 1, &gf(5)),
            Err(CodeError::FieldTooSmall { q: 5, n: 6 })
        );
    }

    #[test]
    fn repeated_column_is_not_mds() {
        let f = gf(5);
        let g = Matrix::from_rows(&f, &[vec![1, 0, 1, 1], vec![0, 1, 1, 1]]).unwrap();
        let code = VectorCode::from_generator(4, 2, 1, g).unwrap();
        assert!(!code.verify_mds());
        assert_eq!(code.first_rank_deficient_subset(), Some(vec![2, 3]));
    }

    #[test]
    fn encode_examples() {
        let code = make_systematic_mds(4, 2, 1, &gf(5)).unwrap();
        assert_eq!(code.encode(&[0, 0]).unwrap(), vec![vec![0]; 4]);
        let cw = code.encode(&[1, 0]).unwrap();
        assert_eq!((cw[0][0], cw[1][0]), (1, 0));
        let row0: Vec<Vec<u8>> = code.generator().row(0).iter().map(|&v| vec![v]).collect();
        assert_eq!(cw, row0);
        assert!(matches!(code.encode(&[1]), Err(CodeError::LengthMismatch { .. })));
    }

    #[test]
    fn decode_round_trips_every_subset() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, k, alpha, q) in [(4, 2, 1, 5), (6, 4, 2, 7), (5, 3, 2, 8), (6, 2, 1, 11)] {
            let code = make_systematic_mds(n, k, alpha, &gf(q)).unwrap();
            let msg: Vec<u8> = (0..k * alpha).map(|_| code.field().random(&mut rng)).collect();
            let cw = code.encode(&msg).unwrap();
            for subset in (0..n).combinations(k) {
                let avail: BTreeMap<usize, Vec<u8>> = subset.iter().map(|&i| (i, cw[i].clone())).collect();
                assert_eq!(code.decode_from(&avail).unwrap(), msg);
            }
        }
    }

    #[test]
    fn decode_errors() {
        let code = make_systematic_mds(5, 3, 1, &gf(7)).unwrap();
        let cw = code.encode(&[1, 2, 3]).unwrap();
        let two: BTreeMap<usize, Vec<u8>> = [(0, cw[0].clone()), (4, cw[4].clone())].into();
        assert_eq!(
            code.decode_from(&two),
            Err(CodeError::TooFewNodes { needed: 3, got: 2 })
        );
        let mut four: BTreeMap<usize, Vec<u8>> = (0..4).map(|i| (i, cw[i].clone())).collect();
        four.get_mut(&3).unwrap()[0] ^= 1;
        assert_eq!(code.decode_from(&four), Err(CodeError::Corrupted { node: 3 }));
    }

    #[test]
    fn layered_code_mds_iff_scalar_mds() {
        let f = gf(5);
        let good = make_systematic_mds(4, 2, 2, &f).unwrap();
        let scalar = good.scalar_layer().unwrap();
        assert_eq!(good.verify_mds(), scalar.verify_mds());
        assert!(good.verify_mds());

        let bad_scalar = Matrix::from_rows(&f, &[vec![1, 0, 1, 1], vec![0, 1, 1, 1]]).unwrap();
        let bad = VectorCode::from_generator(4, 2, 2, layer_generator(&bad_scalar, 2)).unwrap();
        assert!(!bad.verify_mds());
        assert!(!bad.scalar_layer().unwrap().verify_mds());
    }

    #[test]
    fn random_mix_stays_mds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let code = make_systematic_mds(5, 3, 2, &gf(7)).unwrap();
        for _ in 0..10 {
            let mixed = code.random_parity_mix(&mut rng, 32);
            assert!(mixed.verify_mds());
        }
    }

    #[test]
    fn random_parity_is_mds_and_varies() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let code = make_systematic_mds(5, 4, 2, &gf(5)).unwrap();
        let a = code.random_parity(&mut rng, 256).unwrap();
        let b = code.random_parity(&mut rng, 256).unwrap();
        assert!(a.verify_mds() && b.verify_mds());
        assert_ne!(a, b);
    }

    #[test]
    fn json_doc_round_trip() {
        let code = make_systematic_mds(5, 3, 2, &gf(7)).unwrap();
        let json = serde_json::to_string(&code.to_doc()).unwrap();
        let doc: VectorCodeDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(VectorCode::from_doc(&doc).unwrap(), code);
    }
}
