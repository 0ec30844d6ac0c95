use binsquare::enumerate::{iterate_fixed_weight, next_same_weight, prefilter_square_weight};
use binsquare::{BitInt, BitWord};
use num_bigint::BigUint;
use proptest::prelude::*;

fn big(limbs: &[u64]) -> BigUint {
    let digits: Vec<u32> = limbs.iter().flat_map(|l| [*l as u32, (*l >> 32) as u32]).collect();
    BigUint::from_slice(&digits)
}

fn bit_int(limbs: &[u64]) -> BitInt {
    let mut v = BitInt::zero();
    for (i, l) in limbs.iter().enumerate() {
        v.add_shifted(&BitInt::from(*l), 64 * i);
    }
    v
}

fn as_big(v: &BitInt) -> BigUint {
    big(v.limbs())
}

fn limbs() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), 0..6)
}

proptest! {
    #[test]
    fn arithmetic_matches_bigint(a in limbs(), b in limbs(), s in 0usize..300) {
        let (x, y) = (bit_int(&a), bit_int(&b));
        let (bx, by) = (big(&a), big(&b));
        prop_assert_eq!(as_big(&x), bx.clone());
        prop_assert_eq!(as_big(&x.mul(&y)), &bx * &by);
        prop_assert_eq!(as_big(&x.square()), &bx * &bx);
        prop_assert_eq!(as_big(&(&x + &y)), &bx + &by);
        let mut z = x.clone();
        z.add_shifted(&y, s);
        prop_assert_eq!(as_big(&z), &bx + (&by << s));
        prop_assert_eq!(as_big(&x.shift_left(s)), &bx << s);
        prop_assert_eq!(as_big(&x.shift_right(s)), &bx >> s);
        prop_assert_eq!(u64::from(x.weight()), bx.count_ones());
        prop_assert_eq!(x.bit_len() as u64, bx.bits());
        prop_assert_eq!(x.to_string(), bx.to_string());
        prop_assert_eq!(x.to_binary_string(), if bx.bits() == 0 { "0".to_string() } else { bx.to_str_radix(2) });
        prop_assert_eq!(x.weight_below(s), x.low_bits(s).weight());
        prop_assert_eq!(as_big(&x.low_bits(s)), &bx % (BigUint::from(1u8) << s));
    }

    #[test]
    fn text_round_trips(a in limbs(), pad in 0usize..5) {
        let x = bit_int(&a);
        prop_assert_eq!(x.to_string().parse::<BitInt>().unwrap(), x.clone());
        prop_assert_eq!(BitInt::from_binary_str(&x.to_binary_string()).unwrap(), x.clone());
        let w = BitWord::from_int_padded(&x, x.bit_len() + pad).unwrap();
        prop_assert_eq!(w.leading_zeros(), pad);
        prop_assert_eq!(w.to_string().parse::<BitWord>().unwrap(), w.clone());
        prop_assert_eq!(w.to_int(), x);
    }

    #[test]
    fn next_same_weight_is_next(a in limbs()) {
        let x = bit_int(&a);
        prop_assume!(!x.is_zero());
        let n = next_same_weight(&x).unwrap();
        prop_assert!(n > x);
        prop_assert_eq!(n.weight(), x.weight());
    }
}

#[test]
fn next_same_weight_below_2_pow_16() {
    for n in 1u64..(1 << 16) {
        let want = (n + 1..).find(|m| m.count_ones() == n.count_ones()).unwrap();
        assert_eq!(next_same_weight(&BitInt::from(n)).unwrap().to_u64(), Some(want), "n = {n}");
    }
}

#[test]
fn fixed_weight_streams_are_complete() {
    for m in 1..=16usize {
        for k in 0..=m {
            let got: Vec<u64> = iterate_fixed_weight(k, m, false, None).map(|v| v.to_u64().unwrap()).collect();
            let want: Vec<u64> = (0..1u64 << m).filter(|n| n.count_ones() as usize == k).collect();
            assert_eq!(got, want, "k={k} m={m}");
        }
    }
}

#[test]
fn prefilter_sound_for_odd_n_below_2_pow_22() {
    for n in (1u64..1 << 22).step_by(2) {
        let w = (n * n).count_ones();
        let v = BitInt::from(n);
        for window in [1u32, 8, 16, 23, 40, 64] {
            assert!(prefilter_square_weight(&v, w, window), "n={n} window={window}");
        }
    }
}
