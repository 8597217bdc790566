use num_bigint::BigInt;
use proptest::prelude::*;

use vgv_core::cyclotomic::CycInt;
use vgv_core::field::FieldCtx;
use vgv_core::lfunction::{weil_bounds, Curve, CurveSpec};
use vgv_core::linearized::{e_r, f_r, ore_compose, ore_right_divide, LinPoly};
use vgv_core::oracle::{count, count_affine, count_affine_naive, spec_hash};

/// (p0, field degree) pairs small enough to enumerate.
fn small_field() -> impl Strategy<Value = (u64, usize)> {
    prop_oneof![Just((3u64, 1usize)), Just((3, 2)), Just((3, 3)), Just((3, 4)), Just((5, 1)), Just((5, 2)), Just((7, 1)), Just((7, 2))]
}

fn linpoly(ctx: &FieldCtx, s: u32, raw: &[u64]) -> LinPoly {
    LinPoly::new(s, raw.iter().map(|&i| ctx.from_index(i % ctx.size())).collect())
}

/// A curve spec with nonzero leading coefficient, e = len - 1 >= 1.
fn spec_strategy() -> impl Strategy<Value = CurveSpec> {
    small_field().prop_flat_map(|(p0, n)| {
        (Just(p0), Just(n), prop::collection::vec(0..p0 as i64, 1..=2), 1..p0 as i64).prop_map(|(p0, n, mut c, lead)| {
            c.push(lead);
            CurveSpec::prime(p0, 1, n as u32, &c)
        })
    })
}

fn cyc(p0: u64, raw: &[i64]) -> CycInt {
    CycInt::from_coeffs(p0, &raw.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cocycle_identity((p0, m) in small_field(), raw in prop::collection::vec(any::<u64>(), 2..=3), xi in any::<u64>(), yi in any::<u64>()) {
        let ctx = FieldCtx::new(p0, m).unwrap();
        let mut raw = raw;
        let last = raw.len() - 1;
        raw[last] = 1 + raw[last] % (ctx.size() - 1);
        let r = linpoly(&ctx, 1, &raw);
        let er = e_r(&ctx, &r).unwrap();
        let e = r.degree().unwrap() as i64;
        let (x, y) = (ctx.from_index(xi % ctx.size()), ctx.from_index(yi % ctx.size()));
        let f = f_r(&ctx, &r, &x, &y).unwrap();
        let lhs = ctx.sub(&ctx.frobenius(&f, 1), &f);
        let rhs = ctx.add(&ctx.add(&ctx.neg(&ctx.mul(&ctx.frobenius(&x, e), &er.eval(&ctx, &y))), &ctx.mul(&x, &r.eval(&ctx, &y))), &ctx.mul(&y, &r.eval(&ctx, &x)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn antisymmetrized_cocycle((p0, m) in small_field(), raw in prop::collection::vec(any::<u64>(), 2..=3), xi in any::<u64>(), yi in any::<u64>()) {
        // d = f_R(x, y) - f_R(y, x) has d^p - d = y^{p^e} E_R(x) - x^{p^e} E_R(y), which vanishes on V_R.
        let ctx = FieldCtx::new(p0, m).unwrap();
        let mut raw = raw;
        let last = raw.len() - 1;
        raw[last] = 1 + raw[last] % (ctx.size() - 1);
        let r = linpoly(&ctx, 1, &raw);
        let e = r.degree().unwrap() as i64;
        let er = e_r(&ctx, &r).unwrap();
        let (x, y) = (ctx.from_index(xi % ctx.size()), ctx.from_index(yi % ctx.size()));
        let d = ctx.sub(&f_r(&ctx, &r, &x, &y).unwrap(), &f_r(&ctx, &r, &y, &x).unwrap());
        let lhs = ctx.sub(&ctx.frobenius(&d, 1), &d);
        let rhs = ctx.sub(&ctx.mul(&ctx.frobenius(&y, e), &er.eval(&ctx, &x)), &ctx.mul(&ctx.frobenius(&x, e), &er.eval(&ctx, &y)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ore_composition_is_associative((p0, m) in small_field(), a in prop::collection::vec(any::<u64>(), 1..=3), b in prop::collection::vec(any::<u64>(), 1..=3), c in prop::collection::vec(any::<u64>(), 1..=3), xi in any::<u64>()) {
        let ctx = FieldCtx::new(p0, m).unwrap();
        let (a, b, c) = (linpoly(&ctx, 1, &a), linpoly(&ctx, 1, &b), linpoly(&ctx, 1, &c));
        let ab_c = ore_compose(&ctx, &ore_compose(&ctx, &a, &b).unwrap(), &c).unwrap();
        let a_bc = ore_compose(&ctx, &a, &ore_compose(&ctx, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        let x = ctx.from_index(xi % ctx.size());
        prop_assert_eq!(ab_c.eval(&ctx, &x), a.eval(&ctx, &b.eval(&ctx, &c.eval(&ctx, &x))));
    }

    #[test]
    fn right_division_reconstructs((p0, m) in small_field(), n in prop::collection::vec(any::<u64>(), 1..=4), d in prop::collection::vec(any::<u64>(), 1..=3)) {
        let ctx = FieldCtx::new(p0, m).unwrap();
        let mut d = d;
        let last = d.len() - 1;
        d[last] = 1 + d[last] % (ctx.size() - 1);
        let (n, d) = (linpoly(&ctx, 1, &n), linpoly(&ctx, 1, &d));
        let (quo, rem) = ore_right_divide(&ctx, &n, &d).unwrap();
        prop_assert!(rem.degree().map_or(true, |r| r < d.degree().unwrap()));
        prop_assert_eq!(ore_compose(&ctx, &quo, &d).unwrap().add(&ctx, &rem), n);
    }

    #[test]
    fn cyclotomic_ring_laws(p0 in prop_oneof![Just(3u64), Just(5), Just(7)], a in prop::collection::vec(-9i64..9, 7), b in prop::collection::vec(-9i64..9, 7), c in prop::collection::vec(-9i64..9, 7)) {
        let (a, b, c) = (cyc(p0, &a[..p0 as usize]), cyc(p0, &b[..p0 as usize]), cyc(p0, &c[..p0 as usize]));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &CycInt::one(p0), a.clone());
        prop_assert_eq!(CycInt::zeta_pow(p0, 1).pow(p0), CycInt::one(p0));
        // Galois action is a ring automorphism, conjugation an involution.
        prop_assert_eq!((&a * &b).galois(2), &a.galois(2) * &b.galois(2));
        prop_assert_eq!(a.conj().conj(), a.clone());
    }

    #[test]
    fn counts_within_weil_interval(spec in spec_strategy(), k in 1u32..=2) {
        let curve = Curve::resolve(&spec).unwrap();
        prop_assume!(curve.field_degree(k) <= 6);
        let row = count(&spec_hash(&spec), &curve, k, 1 << 20).unwrap();
        prop_assert_eq!(&row.projective, &(&row.affine + 1u32));
        let (lo, hi) = weil_bounds(curve.p0(), curve.field_degree(k), &curve.genus());
        prop_assert_eq!((&lo, &hi), (&row.bound_lo, &row.bound_hi));
        prop_assert!(lo <= row.projective && row.projective <= hi);
    }

    #[test]
    fn image_path_count_matches_naive(spec in spec_strategy()) {
        let curve = Curve::resolve(&spec).unwrap();
        prop_assume!(curve.field_degree(1) <= 4);
        prop_assert_eq!(count_affine(&curve, 1, 1 << 20).unwrap(), count_affine_naive(&curve, 1, 1 << 20).unwrap());
    }
}
