mod common;

use common::{cosine_sum, gcd, prime_powers_up_to};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use permpoly::lucas::{
    aw_criterion, aw_criterion_with_window, characteristic_polynomial, lucas_by_recurrence,
    lucas_exact, lucas_mod_p, lucas_twice, AWParams, LucasParams,
};
use permpoly::Field;

fn odd_ds(max: u64) -> impl Iterator<Item = u64> {
    (3..=max).step_by(2)
}

#[test]
fn exact_values_match_the_cosine_oracle() {
    for d in odd_ds(15) {
        let params = LucasParams::new(d).unwrap();
        for n in 0..=40u32 {
            let float = cosine_sum(d, n);
            let rounded = float.round();
            assert!(
                (float - rounded).abs() < 1e-6 * rounded.abs().max(1.0),
                "d={d} n={n}"
            );
            let exact = lucas_exact(&params, n as u64).to_f64().unwrap();
            assert_eq!(exact, rounded, "d={d} n={n}");
        }
    }
}

#[test]
fn doubled_values_are_even_up_to_n_200() {
    for d in odd_ds(21) {
        let params = LucasParams::new(d).unwrap();
        for n in 0..=200 {
            let twice = lucas_twice(&params, n);
            assert!(twice.is_even(), "d={d} n={n}");
            assert_eq!(lucas_exact(&params, n) * 2, twice);
        }
    }
}

#[test]
fn characteristic_polynomial_recurrence_reproduces_the_sequence() {
    for d in odd_ds(21) {
        let params = LucasParams::new(d).unwrap();
        let chi = characteristic_polynomial(&params);
        let c = chi.coeffs();
        let order = ((d - 1) / 2) as usize;
        assert_eq!(c.len(), order + 1);
        assert_eq!(c[order], BigInt::from(1));
        let a: Vec<BigInt> = (0..=100 + order as u64)
            .map(|n| lucas_exact(&params, n))
            .collect();
        for n in 0..=100 {
            let sum: BigInt = (0..=order).map(|i| &c[i] * &a[n + i]).sum();
            assert!(sum.is_zero(), "d={d} n={n}");
        }
        assert_eq!(lucas_by_recurrence(&params, 101), a[..101].to_vec());
    }
}

#[test]
fn residues_in_the_field_match_exact_values() {
    for q in prime_powers_up_to(729).into_iter().filter(|q| q % 2 == 1) {
        let field = Field::with_order(q).unwrap();
        let p = BigInt::from(field.p());
        for d in odd_ds(q) {
            if (q - 1) % (2 * d) != 0 {
                continue;
            }
            let params = LucasParams::with_field(d, &field).unwrap();
            for n in 0..=50 {
                let exact = lucas_exact(&params, n).mod_floor(&p);
                let expected = field.from_int(exact.to_i64().unwrap());
                assert_eq!(
                    lucas_mod_p(&params, n).unwrap(),
                    expected,
                    "q={q} d={d} n={n}"
                );
            }
        }
    }
}

#[test]
fn wider_periodicity_window_never_changes_the_answer() {
    let mut held = 0;
    for q in prime_powers_up_to(729).into_iter().filter(|q| q % 2 == 1) {
        let field = Field::with_order(q).unwrap();
        for d in odd_ds(q) {
            if (q - 1) % (2 * d) != 0 {
                continue;
            }
            let s = (q - 1) / d;
            for e in (1..d).filter(|&e| gcd(e, d) == 1) {
                for r in (1..q).filter(|&r| gcd(r, s) == 1) {
                    let params = AWParams::new(q, s, d, r, e).unwrap();
                    let narrow = aw_criterion(&field, &params).unwrap();
                    let wide =
                        aw_criterion_with_window(&field, &params, 4 * params.window()).unwrap();
                    assert_eq!(
                        narrow.hypothesis_ok, wide.hypothesis_ok,
                        "q={q} d={d} r={r} e={e}"
                    );
                    held += narrow.hypothesis_ok as usize;
                }
            }
        }
    }
    assert!(held > 0);
}

#[test]
fn parameter_validation() {
    assert!(LucasParams::new(4).is_err());
    assert!(LucasParams::new(1).is_err());
    let f7 = Field::with_order(7).unwrap();
    assert!(LucasParams::with_field(5, &f7).is_err());
    assert!(AWParams::new(81, 16, 5, 2, 1).is_err());
    assert!(AWParams::new(81, 16, 5, 1, 5).is_err());
    assert!(AWParams::new(81, 8, 10, 1, 1).is_err());
    assert!(AWParams::new(81, 16, 5, 1, 1).is_ok());
}
