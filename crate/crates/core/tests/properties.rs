use divitopos::heyting::{implies, neg};
use divitopos::presheaf::random_presheaf;
use divitopos::sieve::enumerate_sieves;
use divitopos::{Lattice, Topology, TopologyKind};
use proptest::prelude::*;

fn modulus() -> impl Strategy<Value = u64> {
    prop_oneof![1u64..=120, Just(360u64), Just(720u64)]
}

proptest! {
    #[test]
    fn meet_and_join_are_bounds(n in modulus(), i in 0usize..64, j in 0usize..64) {
        let l = Lattice::new(n).unwrap();
        let els = l.elements();
        let (a, b) = (els[i % els.len()], els[j % els.len()]);
        let m = l.meet(a, b).unwrap();
        let s = l.join(a, b).unwrap();
        prop_assert!(a % m == 0 && b % m == 0);
        prop_assert!(s % a == 0 && s % b == 0);
        for &c in els {
            if a % c == 0 && b % c == 0 {
                prop_assert_eq!(m % c, 0);
            }
            if c % a == 0 && c % b == 0 {
                prop_assert_eq!(c % s, 0);
            }
        }
    }

    #[test]
    fn implication_is_right_adjoint(n in modulus(), i in 0usize..64, j in 0usize..64) {
        let l = Lattice::new(n).unwrap();
        let els = l.elements();
        let (k, m) = (els[i % els.len()], els[j % els.len()]);
        let imp = implies(&l, k, m).unwrap();
        for &t in els {
            let meet = l.meet(t, k).unwrap();
            prop_assert_eq!(imp % t == 0, m % meet == 0);
        }
        prop_assert_eq!(l.meet(k, neg(&l, k).unwrap()).unwrap(), 1);
    }

    #[test]
    fn pullbacks_stay_sieves(n in modulus(), i in 0usize..64) {
        let l = Lattice::new(n).unwrap();
        let top = l.elements()[i % l.len()];
        for s in enumerate_sieves(&l, top) {
            for &k in l.elements().iter().filter(|&&k| top % k == 0) {
                let p = s.pullback(&l, k).unwrap();
                prop_assert_eq!(p.base(), k);
                for &x in p.members() {
                    prop_assert!(s.contains(x) && k % x == 0);
                }
            }
        }
    }

    #[test]
    fn random_presheaves_are_functors_and_trivial_sheaves(
        n in prop_oneof![Just(12u64), Just(30u64), Just(36u64), Just(16u64)],
        seed in any::<u64>(),
        size in 1usize..=4,
    ) {
        let l = Lattice::new(n).unwrap();
        let f = random_presheaf(&l, seed, size);
        prop_assert!(f.validate().valid);
        prop_assert_eq!(&f, &random_presheaf(&l, seed, size));
        let t = Topology::build(&l, TopologyKind::Trivial);
        prop_assert!(f.is_sheaf(&t).unwrap().is_sheaf);
    }
}
