use proptest::prelude::*;
use terrace_core::exec::{self, sequential, CHUNK};

fn stencil(src: &[f64]) -> impl Fn(usize, &mut [f64], &mut [f64]) + Sync + Send + '_ {
    move |off, uc, vc| {
        for (i, (u, v)) in uc.iter_mut().zip(vc.iter_mut()).enumerate() {
            let j = off + i;
            let l = src[j.saturating_sub(1)];
            let r = src[(j + 1).min(src.len() - 1)];
            *u = l - 2.0 * src[j] + r;
            *v = src[j] * (1.0 - src[j]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn backends_agree_bitwise(src in prop::collection::vec(0.0..1.0f64, 1..3 * CHUNK + 7)) {
        let n = src.len();
        let (mut u1, mut v1) = (vec![0.0; n], vec![0.0; n]);
        let (mut u2, mut v2) = (vec![0.0; n], vec![0.0; n]);
        exec::for_each_chunk_pair(&mut u1, &mut v1, stencil(&src));
        sequential::for_each_chunk_pair(&mut u2, &mut v2, stencil(&src));
        prop_assert!(u1.iter().zip(&u2).all(|(a, b)| a.to_bits() == b.to_bits()));
        prop_assert!(v1.iter().zip(&v2).all(|(a, b)| a.to_bits() == b.to_bits()));

        let f = |x: &f64| x.sqrt().ln_1p();
        prop_assert_eq!(exec::map(&src, f), sequential::map(&src, f));
        prop_assert_eq!(exec::map_range(n, |i| src[i] * i as f64), sequential::map_range(n, |i| src[i] * i as f64));
    }
}
