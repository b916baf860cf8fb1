use convert_bw::bounds::{bound_trivial, theorem_bound, Rational};
use convert_bw::cli::check_round_trip;
use convert_bw::convertible::{default_scheme, SplitParams};
use convert_bw::entropy::canonical_pair;
use convert_bw::gf::{in_span, Elem, Field, Matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ORDERS: [usize; 8] = [2, 3, 4, 5, 7, 8, 11, 256];

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(ORDERS.to_vec()).prop_map(|q| Field::new(q).unwrap())
}

fn matrix(rows: usize, cols: usize, seed: u64, f: &Field) -> Matrix {
    Matrix::random(f, rows, cols, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #[test]
    fn field_axioms(f in field(), a in any::<u16>(), b in any::<u16>(), c in any::<u16>()) {
        let q = f.order() as u16;
        let (a, b, c) = ((a % q) as Elem, (b % q) as Elem, (c % q) as Elem);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        } else {
            prop_assert!(f.inv(0).is_none());
        }
    }

    #[test]
    fn rank_is_submodular(f in field(), ra in 0usize..5, rb in 0usize..5, rc in 0usize..4, cols in 1usize..6, seed in any::<u64>()) {
        let a = matrix(ra, cols, seed, &f);
        let b = matrix(rb, cols, seed ^ 1, &f);
        let c = matrix(rc, cols, seed ^ 2, &f);
        let rank = |parts: &[&Matrix]| Matrix::vstack(&f, cols, parts.iter().copied()).unwrap().rank();
        prop_assert!(rank(&[&a, &c]) + rank(&[&b, &c]) >= rank(&[&a, &b, &c]) + rank(&[&c]));
        prop_assert!(rank(&[&a]) <= rank(&[&a, &b]));
    }

    #[test]
    fn solve_left_is_consistent(f in field(), rows in 1usize..5, k in 1usize..5, cols in 1usize..6, seed in any::<u64>()) {
        let basis = matrix(k, cols, seed, &f);
        let target = matrix(rows, cols, seed ^ 7, &f);
        match Matrix::solve_left(&target, &basis).unwrap() {
            Some(x) => prop_assert_eq!(x.mul(&basis), target.clone()),
            None => prop_assert!(!in_span(&target, &basis).unwrap()),
        }
        let combo = matrix(rows, k, seed ^ 9, &f).mul(&basis);
        prop_assert!(in_span(&combo, &basis).unwrap());
    }

    #[test]
    fn bound_lies_between_trivial_and_full_read(lf in 2usize..6, kf in 1usize..9, rf in 0usize..9, ri in 0usize..20, alpha in 1usize..5) {
        let p = SplitParams::new(lf, kf, rf, ri, alpha).unwrap();
        let rep = theorem_bound(&p);
        prop_assert!(rep.value >= bound_trivial(&p));
        prop_assert!(rep.value <= Rational::from_integer((p.k_i() * alpha) as i64));
        if let Some(cost) = rep.matching_construction_cost {
            prop_assert!(cost >= rep.value);
        }
    }

    #[test]
    fn default_conversion_round_trips(lf in 2usize..4, kf in 1usize..3, rf in 0usize..3, ri in 0usize..4, alpha in 1usize..3, seed in any::<u64>()) {
        let p = SplitParams::new(lf, kf, rf, ri, alpha).unwrap();
        let q = if p.n_i().max(p.n_f()) <= 11 { 11 } else { 16 };
        let p = p.with_field(q).unwrap();
        let (init, fin) = canonical_pair(&p).unwrap();
        let f = init.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msg: Vec<_> = (0..p.message_dim()).map(|_| f.random(&mut rng)).collect();
        let report = check_round_trip(p, &init, &fin, &default_scheme(p, &f), &msg);
        prop_assert!(report.is_ok(), "{:?}", report);
        prop_assert_eq!(report.unwrap().read_total, p.k_i() * alpha);
    }
}
