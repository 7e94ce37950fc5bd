//! Property tests for the structural invariants.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shapkit::hpoly::HPoly;
use shapkit::liealg::{supercommutator, StructureTable};
use shapkit::rational::Q;
use shapkit::rootdata::{BasisChoice, Partition, RootSystem, Subgroup, WeylWord};
use shapkit::shap::{construct, pi_zero};
use shapkit::uea::{Elem, Pbw, RootOrder};
use std::collections::BTreeSet;

const ALGEBRAS: [(&str, BasisChoice); 9] = [
    ("sl(3)", BasisChoice::Distinguished),
    ("sl(4)", BasisChoice::Distinguished),
    ("sp(6)", BasisChoice::Distinguished),
    ("gl(2|1)", BasisChoice::Distinguished),
    ("gl(2|2)", BasisChoice::Distinguished),
    ("gl(2|2)", BasisChoice::AntiDistinguished),
    ("osp(3,2)", BasisChoice::Distinguished),
    ("osp(3,2)", BasisChoice::AntiDistinguished),
    ("osp(2,4)", BasisChoice::Distinguished),
];

fn system(i: usize) -> RootSystem {
    let (n, b) = ALGEBRAS[i % ALGEBRAS.len()];
    RootSystem::from_name(n, b).unwrap()
}

fn table(i: usize) -> StructureTable {
    StructureTable::realize(&system(i)).unwrap()
}

fn random_order(rs: &RootSystem, rng: &mut ChaCha8Rng) -> RootOrder {
    let mut v: Vec<usize> = (0..rs.num_positive()).collect();
    for i in (1..v.len()).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
    RootOrder(v)
}

fn random_elem(pbw: &Pbw, rng: &mut ChaCha8Rng, max_len: usize) -> Elem<Q> {
    let np = pbw.rs().num_positive();
    let mut out = Elem::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut u = Elem::<Q>::one(pbw.ngens());
        for _ in 0..rng.gen_range(0..=max_len) {
            u = pbw.mul(&pbw.root_elem(rng.gen_range(0..np)), &u);
        }
        out.add_scaled_q(&u, &Q::new(rng.gen_range(-9..=9), rng.gen_range(1..=4)));
    }
    out
}

fn mono_cg(pbw: &Pbw, m: &[u16]) -> u32 {
    pbw.mono_to_partition(&m.to_vec()).clifford_degree(pbw.rs())
}

fn cg_degree(pbw: &Pbw, u: &Elem<Q>) -> Option<u32> {
    u.terms.keys().map(|m| mono_cg(pbw, m)).max()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, .. ProptestConfig::default() })]

    #[test]
    fn n_set_grows_by_one_root(alg in 0usize..9, seed in any::<u64>()) {
        let rs = system(alg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let letters: Vec<usize> = (0..rs.simple.len())
            .filter(|&l| !rs.positive[rs.simple[l]].isotropic)
            .collect();
        prop_assume!(!letters.is_empty());
        let u = WeylWord { letters: (0..rng.gen_range(0..5)).map(|_| letters[rng.gen_range(0..letters.len())]).collect(), reduced: false };
        let l = letters[rng.gen_range(0..letters.len())];
        let su = WeylWord { letters: [vec![l], u.letters.clone()].concat(), reduced: false };
        let (nu, nsu) = (rs.n_set(&u), rs.n_set(&su));
        prop_assume!(nsu.len() > nu.len());
        let alpha = &rs.positive[rs.simple[l]];
        let added: Vec<i64> = if alpha.parity.is_odd() { alpha.coeffs.iter().map(|c| 2 * c).collect() } else { alpha.coeffs.clone() };
        let mut expect: BTreeSet<usize> = nu.iter().map(|&b| rs.root_index(&rs.reflect_root(alpha, &rs.positive[b].coeffs)).unwrap()).collect();
        prop_assert!(expect.insert(rs.root_index(&added).unwrap()));
        prop_assert_eq!(nsu.into_iter().collect::<BTreeSet<_>>(), expect);
    }

    #[test]
    fn height_from_q_factors(alg in 0usize..9, g in 0usize..32) {
        let rs = system(alg);
        let g = g % rs.num_positive();
        for sub in [Subgroup::Even, Subgroup::Nonisotropic] {
            let Ok((beta, w)) = rs.minimal_word(g, sub) else { continue };
            if sub == Subgroup::Nonisotropic && w.letters.iter().any(|&l| rs.positive[rs.simple[l]].parity.is_odd()) {
                continue;
            }
            let sum: i64 = rs.n_set(&w).iter().map(|&a| rs.q_factor(&w, beta, a).unwrap()).sum();
            prop_assert_eq!(rs.height(g), 1 + sum);
        }
    }

    #[test]
    fn partitions_match_brute_force(alg in 0usize..9, seed in any::<u64>()) {
        let rs = system(alg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rs.simple.len();
        let mut sc = vec![0i64; k];
        for _ in 0..rng.gen_range(1..=6) {
            sc[rng.gen_range(0..k)] += 1;
        }
        let mut eta = vec![0i64; rs.rank()];
        for (p, &c) in sc.iter().enumerate() {
            for (x, y) in eta.iter_mut().zip(&rs.positive[rs.simple[p]].coeffs) {
                *x += c * y;
            }
        }
        let ht: i64 = sc.iter().sum();
        let gens: Vec<usize> = (0..rs.num_positive()).filter(|&i| rs.is_generator(i)).collect();
        let mut brute = BTreeSet::new();
        let mut mult = vec![0u32; gens.len()];
        loop {
            let mut p = Partition::empty(rs.num_positive());
            for (i, &g) in gens.iter().enumerate() {
                p.mult[g] = mult[i];
            }
            if p.weight(&rs) == eta && gens.iter().all(|&g| !rs.positive[g].isotropic || p.mult[g] <= 1) {
                brute.insert(p);
            }
            let mut i = 0;
            while i < mult.len() && mult[i] as i64 == ht {
                mult[i] = 0;
                i += 1;
            }
            if i == mult.len() {
                break;
            }
            mult[i] += 1;
        }
        let fast: BTreeSet<Partition> = rs.enumerate_partitions(&eta).into_iter().collect();
        prop_assert_eq!(fast, brute);
    }

    #[test]
    fn dot_reflection_is_an_involution(alg in 0usize..9, seed in any::<u64>()) {
        let rs = system(alg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = || -> Vec<Q> { (0..rs.rank()).map(|_| Q::new(rng.gen_range(-20..=20), rng.gen_range(1..=3))).collect() };
        let (mu, nu) = (w(), w());
        for r in rs.positive.iter().filter(|r| !r.isotropic) {
            prop_assert_eq!(rs.dot_reflect(r, &rs.dot_reflect(r, &mu).unwrap()).unwrap(), mu.clone());
            let (a, b) = (rs.reflect(r, &mu).unwrap(), rs.reflect(r, &nu).unwrap());
            prop_assert_eq!(rs.pair(&a, &b), rs.pair(&mu, &nu));
        }
    }

    #[test]
    fn pbw_multiplication_is_associative(alg in 0usize..9, seed in any::<u64>()) {
        let t = table(alg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let order = random_order(&t.rs, &mut rng);
        let pbw = Pbw::new(&t, &order).unwrap();
        let (x, y, z) = (random_elem(&pbw, &mut rng, 2), random_elem(&pbw, &mut rng, 2), random_elem(&pbw, &mut rng, 1));
        prop_assert_eq!(pbw.mul(&pbw.mul(&x, &y), &z), pbw.mul(&x, &pbw.mul(&y, &z)));
    }

    #[test]
    fn straightening_matches_products(alg in 0usize..9, seed in any::<u64>()) {
        let t = table(alg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let order = random_order(&t.rs, &mut rng);
        let pbw = Pbw::new(&t, &order).unwrap();
        let np = t.rs.num_positive();
        let word: Vec<usize> = (0..rng.gen_range(1..=5)).map(|_| rng.gen_range(0..np)).collect();
        let mut prod = Elem::<HPoly>::one(pbw.ngens());
        for &r in &word {
            prod = pbw.mul(&prod, &pbw.root_elem(r));
        }
        let basis_word: Vec<usize> = word.iter().map(|&r| t.neg_idx(r)).collect();
        prop_assert_eq!(pbw.straighten(&basis_word).unwrap(), prod);
    }

    #[test]
    fn reorder_round_trip(alg in 0usize..9, seed in any::<u64>()) {
        let t = table(alg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (o1, o2) = (random_order(&t.rs, &mut rng), random_order(&t.rs, &mut rng));
        let (p1, p2) = (Pbw::new(&t, &o1).unwrap(), Pbw::new(&t, &o2).unwrap());
        let u = random_elem(&p1, &mut rng, 4);
        prop_assert_eq!(p1.reorder_from(&p2, &p2.reorder_from(&p1, &u)), u);
    }

    #[test]
    fn reorder_is_unitriangular_in_length(alg in 0usize..9, seed in any::<u64>()) {
        let t = table(alg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (o1, o2) = (random_order(&t.rs, &mut rng), random_order(&t.rs, &mut rng));
        let (p1, p2) = (Pbw::new(&t, &o1).unwrap(), Pbw::new(&t, &o2).unwrap());
        let u = random_elem(&p1, &mut rng, 4);
        for m in u.terms.keys() {
            let single = Elem::mono(m.clone(), Q::one());
            let v = p2.reorder_from(&p1, &single);
            let part = p1.mono_to_partition(m);
            let same = p2.partition_to_mono(&part).unwrap();
            let c = v.coeff(&same).cloned().unwrap_or_else(Q::zero);
            prop_assert!(c == Q::one() || c == -Q::one());
            let len = p1.mono_degree(m);
            for k in v.terms.keys() {
                prop_assert!(*k == same || p2.mono_degree(k) < len);
            }
        }
    }

    #[test]
    fn ad_respects_the_clifford_filtration(alg in 0usize..9, seed in any::<u64>()) {
        let t = table(alg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pbw = Pbw::new(&t, &RootOrder::standard(&t.rs)).unwrap();
        let u = random_elem(&pbw, &mut rng, 3);
        let r = rng.gen_range(0..t.rs.num_positive());
        prop_assume!(t.rs.is_generator(r));
        let v = pbw.ad(r, &u);
        if let (Some(a), Some(b)) = (cg_degree(&pbw, &u), cg_degree(&pbw, &v)) {
            let step = if t.rs.positive[r].parity.is_odd() { 1 } else { 0 };
            prop_assert!(b <= a + step, "cg {} -> {}", a, b);
        }
    }

    #[test]
    fn constructed_elements_are_normalized(alg in 0usize..9, g in 0usize..32, m in 1u32..3) {
        let t = table(alg);
        let g = g % t.rs.num_positive();
        let order = RootOrder::standard(&t.rs);
        let Ok(s) = construct(&t, g, m, &order) else { return Ok(()) };
        let pbw = Pbw::new(&t, &order).unwrap();
        prop_assert_eq!(s.elem.coeff(&pi_zero(&pbw, g, m)), Some(&HPoly::one()));
    }

    #[test]
    fn json_round_trip(alg in 0usize..9, seed in any::<u64>()) {
        let t = table(alg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pbw = Pbw::new(&t, &random_order(&t.rs, &mut rng)).unwrap();
        let mut u = random_elem(&pbw, &mut rng, 3).to_poly();
        let big = HPoly::affine(&vec![Q::new(1, 3); t.rs.rank()], &Q::new(i128::MAX, 7)).pow(3);
        u = u.mul_coeff(&big);
        let v = pbw.to_json(&u);
        let text = serde_json::to_string(&v).unwrap();
        let back = pbw.from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, u);
    }
}

#[test]
fn clifford_degree_counts_odd_factors_on_osp32() {
    for basis in [BasisChoice::Distinguished, BasisChoice::AntiDistinguished] {
        let rs = RootSystem::from_name("osp(3,2)", basis).unwrap();
        for g in 0..rs.num_positive() {
            for p in rs.enumerate_partitions(&rs.positive[g].coeffs) {
                assert_eq!(2 * p.degree() - p.clifford_degree(&rs), p.odd_count(&rs));
                let a: u32 = p
                    .mult
                    .iter()
                    .zip(&rs.positive)
                    .filter(|(_, r)| r.parity.is_odd() && !r.isotropic)
                    .map(|(k, _)| *k)
                    .sum();
                assert!(a <= 2, "{} has {a} odd non-isotropic factors", rs.root_str(g));
            }
        }
    }
}

#[test]
fn brackets_are_supercommutators() {
    for i in 0..ALGEBRAS.len() {
        let t = table(i);
        for a in 0..t.dim() {
            for b in 0..t.dim() {
                let direct = supercommutator(&t.matrix(a), &t.matrix(b), &t.v_odd);
                assert_eq!(t.lin_matrix(t.bracket_basis(a, b)), direct, "{} [{a}, {b}]", t.rs.name());
            }
        }
    }
}
