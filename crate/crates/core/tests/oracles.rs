use ehc_core::chainlocal::ChainContext;
use ehc_core::genre::{GroupDescriptor, Model, Series, WreathGroup};
use ehc_core::labelcomb::{e_core, partitions};
use ehc_core::oracle::{oracle_chain_count_small, oracle_core, oracle_valuation, oracle_wreath};
use ehc_core::uniphc::wreath_irr_degrees;
use ehc_core::CycProduct;

#[test]
fn chain_census_matches_parabolic_enumeration() {
    let mut groups = Vec::new();
    for n in 1..=3 {
        groups.push(GroupDescriptor::new(Series::A, n, Model::Gl).unwrap());
        groups.push(GroupDescriptor::new(Series::TwoA, n, Model::Sc).unwrap());
        groups.push(GroupDescriptor::new(Series::B, n, Model::Sc).unwrap());
        groups.push(GroupDescriptor::new(Series::C, n, Model::Sc).unwrap());
    }
    for g in &groups {
        for e in 1..=6 {
            let cx = ChainContext::new(g, e, None).unwrap();
            let fast = cx.census();
            let slow = oracle_chain_count_small(g, e).unwrap();
            assert_eq!(fast, slow, "{g} e={e}");
        }
    }
}

#[test]
fn oracle_rejects_large_rank() {
    let g = GroupDescriptor::new(Series::A, 4, Model::Gl).unwrap();
    assert!(oracle_chain_count_small(&g, 1).is_err());
}

#[test]
fn cores_agree() {
    for n in 0..=12 {
        for lambda in partitions(n) {
            for e in 1..=5 {
                assert_eq!(e_core(&lambda, e), oracle_core(&lambda, e).unwrap(), "{lambda} e={e}");
            }
        }
    }
}

#[test]
fn wreath_degrees_agree() {
    for c in 1..=4u32 {
        for m in 0..=4u32 {
            let w = WreathGroup { factors: vec![(c, m)] };
            let mut fast: Vec<u64> = wreath_irr_degrees(&w)
                .into_iter()
                .flat_map(|(d, k)| std::iter::repeat_n(d, k as usize))
                .collect();
            fast.sort_unstable();
            assert_eq!(fast, oracle_wreath(&w), "{w}");
            let sq: u128 = fast.iter().map(|&d| (d as u128) * (d as u128)).sum();
            assert_eq!(sq, w.order());
        }
    }
    let w = WreathGroup { factors: vec![(2, 2), (1, 3)] };
    assert_eq!(oracle_wreath(&w).len(), 15);
}

#[test]
fn valuations_agree() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for ell in [3u64, 5, 7, 11] {
            if q % ell == 0 {
                continue;
            }
            for d in 1..=24 {
                let p = CycProduct::phi(d);
                assert_eq!(p.ell_valuation(q, ell).unwrap(), oracle_valuation(&p, q, ell), "d={d} q={q} ell={ell}");
            }
        }
    }
}
