//! Oracle and property suite: brute-force reference computations frozen
//! against the production paths, and randomized structural invariants.

use std::collections::BTreeSet;

use num::{BigInt, BigRational};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use k3strata::budget;
use k3strata::catalog::Catalog;
use k3strata::fibers::{ambi_typical_filter, config_dimension, FiberConfiguration, FiberType};
use k3strata::hurwitz::{
    block_factorization_by_power, block_factorization_exhaustive, divisibility_factor_exists,
    find_block_factorization, hurwitz_move, FactorizationTuple,
};
use k3strata::lattices::{ade, discriminant_form};
use k3strata::perm::Perm;
use k3strata::permcover::{enumerate_by_tables, enumerate_triples, EnumConstraints, PermTriple};
use k3strata::roots::RootSymbol;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn qmod(x: BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let f = (&x / &m).floor();
    x - f * m
}

/// All permutations of degree d, as image vectors.
fn all_perms(d: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Vec<u16>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        let d = used.len();
        if prefix.len() == d {
            out.push(Perm::from_images(prefix.clone()));
            return;
        }
        for v in 0..d as u16 {
            if !used[v as usize] {
                used[v as usize] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

fn random_perm(rng: &mut ChaCha8Rng, d: usize) -> Perm {
    let mut img: Vec<u16> = (0..d as u16).collect();
    img.shuffle(rng);
    Perm::from_images(img)
}

/// Brute-force list of triple classes at tiny degree: iterate all pairs
/// with legal cycle types, keep the transitive ones, reduce to canonical
/// forms.
fn brute_force_classes(d: usize) -> Vec<PermTriple> {
    let perms = all_perms(d);
    let mu0s: Vec<&Perm> = perms
        .iter()
        .filter(|p| p.cycle_type().iter().all(|&l| l == 1 || l == 3))
        .collect();
    let mu1s: Vec<&Perm> = perms
        .iter()
        .filter(|p| p.cycle_type().iter().all(|&l| l == 1 || l == 2))
        .collect();
    let mut classes: BTreeSet<PermTriple> = BTreeSet::new();
    for &a in &mu0s {
        for &b in &mu1s {
            if !Perm::transitive(&[a, b]) {
                continue;
            }
            let t = PermTriple::from_pair(a.clone(), b.clone()).unwrap();
            classes.insert(t.canonical_form());
        }
    }
    classes.into_iter().collect()
}

#[test]
fn enumeration_against_brute_force_up_to_degree_6() {
    for d in 1..=6 {
        let brute = brute_force_classes(d);
        let fast = enumerate_triples(&EnumConstraints {
            degree: d,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(fast, brute, "degree {d}");
        let tables = enumerate_by_tables(&EnumConstraints {
            degree: d,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(tables, brute, "tables at degree {d}");
    }
}

#[test]
fn enumeration_methods_agree_at_degree_12_torsion_free() {
    let c = EnumConstraints::torsion_free_genus0(12);
    let fast = enumerate_triples(&c).unwrap();
    let tables = enumerate_by_tables(&c).unwrap();
    assert_eq!(fast, tables);
    assert_eq!(fast.len(), 6);
}

#[test]
fn canonical_form_constant_on_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cat = Catalog::embedded();
    let mut triples: Vec<PermTriple> = vec![
        PermTriple::from_pair(
            Perm::parse(9, "(1 2 3)(4 5 6)(7 8 9)").unwrap(),
            Perm::parse(9, "(1 4)(2 7)(5 6)(8 9)").unwrap(),
        )
        .unwrap(),
        cat.row(24).unwrap().perm_triple().unwrap(),
        cat.row(38).unwrap().perm_triple().unwrap(),
    ];
    triples.push(cat.row(49).unwrap().perm_triple().unwrap());
    for t in &triples {
        let canon = t.canonical_form();
        assert_eq!(canon, canon.canonical_form(), "idempotent");
        for _ in 0..100 {
            let g = random_perm(&mut rng, t.degree());
            let conj = PermTriple::from_pair(
                t.mu0().conjugate_by(&g),
                t.mu1().conjugate_by(&g),
            )
            .unwrap();
            assert_eq!(conj.canonical_form(), canon);
            assert!(conj.is_conjugate(t).unwrap());
        }
    }
}

/// Random factorization tuples: r - 1 random entries and one correcting
/// entry, retried until transitive.
fn random_tuple(rng: &mut ChaCha8Rng, d: usize, r: usize) -> FactorizationTuple {
    loop {
        let mut sigmas: Vec<Perm> = (0..r - 1).map(|_| random_perm(rng, d)).collect();
        let mut prod = Perm::identity(d);
        for s in &sigmas {
            prod = prod.then(s);
        }
        sigmas.push(prod.inverse());
        if let Ok(t) = FactorizationTuple::new(sigmas) {
            return t;
        }
    }
}

#[test]
fn hurwitz_moves_on_ten_thousand_random_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let d = rng.gen_range(2..=8);
        let r = rng.gen_range(3..=5);
        let t = random_tuple(&mut rng, d, r);
        let i = rng.gen_range(1..t.len());
        let moved = hurwitz_move(&t, i, 1).unwrap();
        // the move fixes the product (validity is re-checked on build),
        // the generated class multiset, and is undone by the inverse move
        assert_eq!(moved.class_multiset(), t.class_multiset());
        assert_eq!(hurwitz_move(&moved, i, -1).unwrap(), t);
    }
}

#[test]
fn braid_relations_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..500 {
        let d = rng.gen_range(2..=8);
        let r = rng.gen_range(3..=5);
        let t = random_tuple(&mut rng, d, r);
        for i in 1..t.len() - 1 {
            // move_i move_{i+1} move_i = move_{i+1} move_i move_{i+1}
            let lhs = hurwitz_move(
                &hurwitz_move(&hurwitz_move(&t, i, 1).unwrap(), i + 1, 1).unwrap(),
                i,
                1,
            )
            .unwrap();
            let rhs = hurwitz_move(
                &hurwitz_move(&hurwitz_move(&t, i + 1, 1).unwrap(), i, 1).unwrap(),
                i + 1,
                1,
            )
            .unwrap();
            assert_eq!(lhs, rhs);
        }
        // distant moves commute
        if t.len() >= 4 {
            let a = hurwitz_move(&hurwitz_move(&t, 1, 1).unwrap(), 3, 1).unwrap();
            let b = hurwitz_move(&hurwitz_move(&t, 3, 1).unwrap(), 1, 1).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn block_search_equals_exhaustive_search_degree_up_to_6() {
    for d in 2..=6usize {
        let perms = all_perms(d);
        for s1 in &perms {
            for s2 in &perms {
                let s3 = s1.then(s2).inverse();
                let Ok(t) = FactorizationTuple::new(vec![s1.clone(), s2.clone(), s3]) else {
                    continue;
                };
                for k in 2..=d {
                    if d % k != 0 {
                        continue;
                    }
                    let fast = find_block_factorization(&t, k).unwrap();
                    let slow = block_factorization_exhaustive(&t, k).unwrap();
                    assert_eq!(fast.is_some(), slow.is_some(), "d={d} k={k} {t:?}");
                    // necessity of the divisibility condition
                    if fast.is_some() {
                        assert!(divisibility_factor_exists(
                            &s1.cycle_type(),
                            &s2.cycle_type(),
                            k
                        ));
                    }
                }
            }
        }
    }
}

#[test]
fn block_search_equals_exhaustive_search_sampled_degree_8() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..2_000 {
        let d = if rng.gen_bool(0.5) { 7 } else { 8 };
        let r = rng.gen_range(3..=4);
        let t = random_tuple(&mut rng, d, r);
        for k in 2..=d {
            if d % k != 0 {
                continue;
            }
            let fast = find_block_factorization(&t, k).unwrap();
            let slow = block_factorization_exhaustive(&t, k).unwrap();
            assert_eq!(fast.is_some(), slow.is_some(), "d={d} k={k} {t:?}");
        }
    }
}

/// Tuples of the generic factorization shape: two entries of cycle type
/// k^h, the rest transpositions, genus zero by the ramification count.
fn generic_divisible_tuple(
    rng: &mut ChaCha8Rng,
    k: usize,
    h: usize,
) -> Option<FactorizationTuple> {
    let d = k * h;
    let type_kh = |rng: &mut ChaCha8Rng| -> Perm {
        let mut pts: Vec<usize> = (1..=d).collect();
        pts.shuffle(rng);
        let cycles: Vec<Vec<usize>> = pts.chunks(k).map(<[usize]>::to_vec).collect();
        Perm::from_cycles(d, &cycles).unwrap()
    };
    let s1 = type_kh(rng);
    let s2 = type_kh(rng);
    let rho = s1.then(&s2).inverse();
    // factor rho into transpositions: (a1 .. am) = (a_{m-1} a_m) ... (a1 a2)
    let mut taus: Vec<Perm> = Vec::new();
    for cyc in rho.cycles() {
        for w in cyc.windows(2).rev() {
            taus.push(Perm::from_cycles(d, &[vec![w[0], w[1]]]).unwrap());
        }
    }
    if taus.len() > 2 * h - 2 || !(2 * h - 2 - taus.len()).is_multiple_of(2) {
        return None;
    }
    while taus.len() < 2 * h - 2 {
        let t = Perm::from_cycles(d, &[vec![1, 2]]).unwrap();
        taus.push(t.clone());
        taus.push(t);
    }
    let mut sigmas = vec![s1, s2];
    sigmas.extend(taus);
    FactorizationTuple::new(sigmas).ok()
}

#[test]
fn divisible_partitions_force_block_factorizations() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let mut tested = 0;
    while tested < 300 {
        let k = rng.gen_range(2..=3);
        let h = rng.gen_range(2..=3);
        let Some(t) = generic_divisible_tuple(&mut rng, k, h) else {
            continue;
        };
        tested += 1;
        let p1 = t.entries()[0].cycle_type();
        let p2 = t.entries()[1].cycle_type();
        assert!(divisibility_factor_exists(&p1, &p2, k));
        let sys = find_block_factorization(&t, k).unwrap();
        assert!(sys.is_some(), "blocks must exist for {t:?}");
    }
}

#[test]
fn power_route_agrees_on_pullback_tuples() {
    // pull a degree-h tuple back through a cyclic degree-k cover: point
    // (i, j) = i + h*j for i in 0..h (downstairs), j in 0..k (sheet)
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let k = rng.gen_range(2..=3);
        let h = rng.gen_range(2..=3);
        let d = h * k;
        let down1 = random_perm(&mut rng, h);
        let down2 = random_perm(&mut rng, h);
        // sheets rotate under the first two entries, are fixed by the tail
        let mut s1img = vec![0u16; d];
        let mut s2img = vec![0u16; d];
        let mut s3img = vec![0u16; d];
        for i in 0..h {
            for j in 0..k {
                s1img[i + h * j] = (down1.apply0(i) + h * ((j + 1) % k)) as u16;
                s2img[i + h * j] = (down2.apply0(i) + h * ((j + k - 1) % k)) as u16;
                s3img[i + h * j] = (down1.then(&down2).inverse().apply0(i) + h * j) as u16;
            }
        }
        let s1 = Perm::from_images(s1img);
        let s2 = Perm::from_images(s2img);
        let s3 = Perm::from_images(s3img);
        let Ok(t) = FactorizationTuple::new(vec![s1, s2, s3]) else {
            continue; // pullback may be intransitive
        };
        let fast = find_block_factorization(&t, k).unwrap();
        assert!(fast.is_some(), "pullback tuples carry their sheets as blocks");
        let power = block_factorization_by_power(&t, k).unwrap();
        if let (Some(a), Some(b)) = (&fast, &power) {
            // both certify: each checks validity internally; the block
            // shapes must agree
            let mut sa: Vec<usize> = a.blocks().iter().map(Vec::len).collect();
            let mut sb: Vec<usize> = b.blocks().iter().map(Vec::len).collect();
            sa.sort_unstable();
            sb.sort_unstable();
            assert_eq!(sa, sb);
        }
    }
}

#[test]
fn snf_discriminant_forms_match_closed_form_ade_data() {
    // A_n: cyclic of order n+1 with q(k g) = -k(n+1-k)/(n+1) mod 2
    for n in 1..=17u32 {
        let f = discriminant_form(&ade(RootSymbol::A(n))).unwrap();
        assert_eq!(f.group_order(), i64::from(n) + 1);
        let m = i64::from(n) + 1;
        let mut expected: Vec<(i64, BigRational)> = (0..m)
            .map(|k| {
                let ord = m / num::integer::gcd(k, m);
                (ord, qmod(q(-k * (m - k), m), 2))
            })
            .collect();
        expected.sort();
        assert_eq!(f.fingerprint(), expected, "A{n}");
    }
    // D_n: order 4; spinor classes have q = -n/4, the vector class -1
    for n in 4..=17u32 {
        let f = discriminant_form(&ade(RootSymbol::D(n))).unwrap();
        assert_eq!(f.group_order(), 4, "D{n}");
        let spinor = qmod(q(-i64::from(n), 4), 2);
        let vector = qmod(q(-1, 1), 2);
        let zero = q(0, 1);
        let mut expected = if n % 2 == 0 {
            vec![
                (1, zero),
                (2, vector),
                (2, spinor.clone()),
                (2, spinor),
            ]
        } else {
            vec![(1, zero), (2, vector), (4, spinor.clone()), (4, spinor)]
        };
        expected.sort();
        assert_eq!(f.fingerprint(), expected, "D{n}");
    }
    // E6: Z/3 with q = -4/3 on both generators; E7: Z/2 with q = -3/2; E8
    // trivial
    let e6 = discriminant_form(&ade(RootSymbol::E(6))).unwrap();
    let mut expected = vec![
        (1, q(0, 1)),
        (3, qmod(q(-4, 3), 2)),
        (3, qmod(q(-4, 3), 2)),
    ];
    expected.sort();
    assert_eq!(e6.fingerprint(), expected);
    let e7 = discriminant_form(&ade(RootSymbol::E(7))).unwrap();
    assert_eq!(
        e7.fingerprint(),
        vec![(1, q(0, 1)), (2, qmod(q(-3, 2), 2))]
    );
    let e8 = discriminant_form(&ade(RootSymbol::E(8))).unwrap();
    assert_eq!(e8.group_order(), 1);
}

#[test]
fn stratum_dimensions_bounded_by_group_degree_maximum() {
    let cat = Catalog::embedded();
    for r in cat.rows.iter().filter(|r| r.ind >= 2) {
        let e2 = r.passport[1].iter().filter(|&&x| x == 1).count() as u32;
        let e3 = r.passport[0].iter().filter(|&&x| x == 1).count() as u32;
        let poles = budget::n_poles(r.ind, e2, e3).unwrap();
        let bound = budget::max_stratum_dim(r.ind, e2, e3, poles).unwrap();
        assert!(
            bound >= r.dim,
            "row {}: bound {bound} below dim {}",
            r.id,
            r.dim
        );
    }
}

#[test]
fn index_18_enumeration_has_five_cusps_everywhere() {
    let found = enumerate_triples(&EnumConstraints::torsion_free_genus0(18)).unwrap();
    assert_eq!(found.len(), 26);
    for t in &found {
        assert_eq!(t.cusp_partition().len(), 5);
        let (e2, e3) = t.torsion_counts();
        assert_eq!((e2, e3), (0, 0));
        assert_eq!(t.degree() % 2, e2 % 2);
        assert_eq!(t.degree() % 3, e3 % 3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Any fiber multiset made of I/I*/IV* fibers with Euler sum 24 and a
    /// positive I or I* part satisfies both dimension formulas (checked
    /// internally by config_dimension).
    #[test]
    fn config_dimension_formulas_agree(seed in 0u64..1 << 48) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts: Vec<(FiberType, u32)> = Vec::new();
        let mut euler = 0u32;
        // one forced movable fiber
        let b = rng.gen_range(1..=6);
        counts.push((FiberType::I(b), 1));
        euler += b;
        while euler < 24 {
            let rest = 24 - euler;
            let t = match rng.gen_range(0..3) {
                0 => FiberType::I(rng.gen_range(1..=rest)),
                1 if rest >= 6 => FiberType::IStar(rng.gen_range(0..=(rest - 6).min(4))),
                _ if rest >= 8 => FiberType::IVStar,
                _ => FiberType::I(rest.min(3)),
            };
            if t.euler() > rest || t.euler() == 0 {
                continue;
            }
            euler += t.euler();
            counts.push((t, 1));
        }
        let config = FiberConfiguration::new(counts);
        prop_assert_eq!(config.total_euler(), 24);
        // config_dimension asserts the two formulas agree
        let _ = config_dimension(&config).unwrap();
        // the filter never passes II*/III* and respects the -id flag
        if ambi_typical_filter(&config, true) {
            prop_assert!(config.counts().iter().all(|&(t, _)|
                matches!(t, FiberType::I(_) | FiberType::IStar(0))));
        }
    }

    /// Cycle notation round-trips through display and parse.
    #[test]
    fn perm_display_parse_round_trip(seed in 0u64..1 << 48, d in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_perm(&mut rng, d);
        let s = p.to_string();
        let back = Perm::parse(d, &s).unwrap();
        prop_assert_eq!(p, back);
    }
}
