//! The consistency engine: every catalog row is checked against the fiber
//! dictionary, the budget tables, the branching restrictions, the
//! permutation triples, the congruence-group data, the polynomial
//! identities, and the lattice layer.

use num::BigInt;

use super::{Catalog, StratumRecord};
use crate::budget;
use crate::congruence;
use crate::fibers;
use crate::hurwitz::{self, BranchDataJE};
use crate::lattices::{
    admissible_isotropics, component_disc_form, covering_degree, dynkin::dynkin_group,
    isotropic::{CosetRootTable, IsotropicSubgroup}, mm_counts, overlattice, overlattice_adds_roots,
    root_lattice, single_genus_check, stabilized_image,
};
use crate::permcover::{enumerate_triples, EnumConstraints, PermTriple};
use crate::ratfun;
use crate::report::{CheckResult, RowReport};
use crate::roots::RootSum;

fn check(name: &str, pass: bool, details: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass,
        details,
    }
}

fn ones(p: &[usize]) -> usize {
    p.iter().filter(|&&x| x == 1).count()
}

/// Runs every applicable check on one row.
pub fn verify_row(r: &StratumRecord) -> RowReport {
    let mut checks = Vec::new();
    let roots = r.root_sum();
    let rank = roots.rank() as i64;

    checks.push(check(
        "dim-rank",
        r.dim == 18 - rank,
        format!("dim {} vs 18 - rank {rank}", r.dim),
    ));

    let euler = r.ind as usize * r.je_deg + 6 * r.n_star as usize;
    checks.push(check("euler-24", euler == 24, format!("total {euler}")));

    if r.ind >= 2 {
        checks.push(check(
            "budget-column",
            budget::is_live_column(r.ind, r.je_deg as u32, r.n_star, 0),
            format!("({}, {}, {}, 0)", r.ind, r.je_deg, r.n_star),
        ));
    }

    // passport structure and torsion congruences
    let [p0, p1, pinf] = &r.passport;
    let d = r.ind as usize;
    let e3 = ones(p0);
    let e2 = ones(p1);
    let passport_ok = p0.iter().sum::<usize>() == d
        && p1.iter().sum::<usize>() == d
        && pinf.iter().sum::<usize>() == d
        && p0.iter().all(|&x| x == 1 || x == 3)
        && p1.iter().all(|&x| x == 1 || x == 2)
        && e2 % 2 == d % 2
        && e3 % 3 == d % 3;
    checks.push(check(
        "passport-congruences",
        passport_ok,
        format!("e2 {e2}, e3 {e3}, degree {d}"),
    ));

    if r.ind >= 2 {
        let poles_ok = budget::n_poles(r.ind, e2 as u32, e3 as u32)
            .map(|n| n as usize == pinf.len())
            .unwrap_or(false);
        checks.push(check(
            "pole-count",
            poles_ok,
            format!("{} cusps", pinf.len()),
        ));
    }

    // fiber configuration: Euler number, root lattice, dimension, allowed types
    let config = r.fiber_configuration();
    checks.push(check(
        "config-euler",
        config.total_euler() == 24,
        format!("{config}"),
    ));
    let config_roots = RootSum(config.root_lattice());
    checks.push(check(
        "config-roots",
        config_roots.same_multiset(&roots),
        format!("{config_roots} vs {roots}"),
    ));
    let dim_ok = fibers::config_dimension(&config)
        .map(|v| v == r.dim)
        .unwrap_or(false);
    checks.push(check("config-dim", dim_ok, format!("dim {}", r.dim)));
    checks.push(check(
        "fiber-types-allowed",
        fibers::ambi_typical_filter(&config, r.ker == 2),
        format!("ker {}", r.ker),
    ));

    // branching restrictions at torsion points
    let branch = BranchDataJE {
        deg_je: r.je_deg,
        at_2_torsion: r.branch_b.iter().cloned().collect(),
        at_3_torsion: r.branch_a.iter().cloned().collect(),
        at_poles: r.branch_pole.iter().map(|bp| bp.parts.clone()).collect(),
        n_ivstar: 0,
    };
    let sums_ok = branch
        .at_2_torsion
        .iter()
        .chain(&branch.at_3_torsion)
        .chain(&branch.at_poles)
        .all(|p| p.iter().sum::<usize>() == r.je_deg);
    let violations = hurwitz::rami_check(&branch, e2, e3);
    checks.push(check(
        "branch-restrictions",
        sums_ok && violations.is_empty(),
        format!("{violations:?}"),
    ));

    // permutation triple data
    if r.triple.is_some() {
        let triple_ok = match r.perm_triple() {
            Some(t) => {
                t.validate().is_ok()
                    && t.genus() == Ok(0)
                    && t.cusp_partition() == *pinf
                    && t.torsion_counts() == (e2, e3)
            }
            None => false,
        };
        checks.push(check("triple-valid", triple_ok, String::new()));
    }

    // congruence data for the low-index rows
    if let Some(group) = r.modular_group() {
        let ind_ok = congruence::index_in_psl2(&group) == Ok(u64::from(r.ind));
        checks.push(check("psl-index", ind_ok, format!("expected {}", r.ind)));
        let ker_ok = group.contains_minus_id() == Ok(r.ker == 2);
        checks.push(check("kernel-size", ker_ok, format!("ker {}", r.ker)));
        let mw_ok = congruence::mw_torsion(&group, 12)
            == Ok((r.mw[0] as u32, r.mw[1] as u32));
        checks.push(check(
            "mw-torsion",
            mw_ok,
            format!("expected {}", r.mw_type()),
        ));
    }

    // quotient-map and Weierstrass identities for the low-index rows
    if let Some(jrow) = r.jrow {
        let mut ok = ratfun::verify_jtable_row(jrow);
        if let Some(row) = ratfun::jtable_row(jrow) {
            let (q0, q1, qi) = row.map.branching_passport();
            ok = ok && q0 == *p0 && q1 == *p1 && qi == *pinf;
        }
        checks.push(check("j-map-identity", ok, format!("table row {jrow}")));
    }
    if let Some(fam) = r
        .wfamily
        .as_deref()
        .and_then(|s| {
            ratfun::WeierstrassFamily::all()
                .into_iter()
                .find(|f| f.label() == s)
        })
    {
        checks.push(check(
            "weierstrass-identity",
            ratfun::verify_weierstrass_family(fam).is_some(),
            format!("family {}", fam.label()),
        ));
    }

    // lattice layer: admissible glue of the right type
    let mw = r.mw_type();
    let glue = find_glue(r);
    checks.push(check(
        "mw-glue-admissible",
        glue.is_some(),
        format!("type {mw}"),
    ));
    if let (Some(g), Some(glue_gens)) = (&glue, &r.glue) {
        // the row pins its glue subgroup explicitly: the found and pinned
        // subgroups must agree, be isotropic and add no roots
        let form = component_disc_form(&roots);
        let pinned: Vec<Vec<i64>> = glue_gens.clone();
        let base = root_lattice(&roots);
        let pinned_ok = pinned.iter().all(|x| form.is_isotropic_element(x))
            && overlattice(&base, &pinned.iter().map(|x| form.lift(x)).collect::<Vec<_>>())
                .map(|over| !overlattice_adds_roots(&base, &over))
                .unwrap_or(false);
        let table = CosetRootTable::build(&base, &form);
        let same = {
            let mut set = std::collections::BTreeSet::new();
            let mut frontier = vec![form.zero_element()];
            while let Some(x) = frontier.pop() {
                if set.insert(x.clone()) {
                    for gen in &pinned {
                        frontier.push(form.add(&x, gen));
                    }
                }
            }
            set == g.elements && table.admissible(g)
        };
        checks.push(check(
            "pinned-glue",
            pinned_ok && same,
            format!("{} elements", g.elements.len()),
        ));
    }

    // glued discriminant order: |D(M)| = |D(R)| / |G|^2
    let d_m = disc_order_of_m(r);
    let glue_order_ok = {
        let expected = BigInt::from(roots.disc_order()) / BigInt::from(mw.order() * mw.order());
        expected == d_m
    };
    checks.push(check("glued-disc-order", glue_order_ok, format!("{d_m}")));

    checks.push(check(
        "single-genus",
        single_genus_check(rank as u32, &d_m),
        format!("rank {rank}, det {d_m}"),
    ));

    // counting identities over the reference indices
    if let Some(app) = &r.appendix {
        let counting_ok = match mm_counts(app.i3, 1, app.i2) {
            Ok((_, components)) => match &r.covering {
                Some(cov) => {
                    components == cov.components
                        && covering_degree(app.sbar_m, components, cov.conjugate_pair)
                            == Ok(cov.degree)
                }
                None => true,
            },
            Err(_) => false,
        };
        checks.push(check(
            "component-counting",
            counting_ok,
            format!("i2 {}, i3 {}", app.i2, app.i3),
        ));
    }
    if let Some(embeddings) = r.embeddings {
        let i3_matches = r.appendix.as_ref().is_none_or(|a| a.i3 == embeddings);
        checks.push(check(
            "two-embeddings",
            embeddings == 2 && i3_matches,
            format!("{embeddings}"),
        ));
    }

    // diagram-symmetry image on the glued form, where tabulated
    if let (Some(cov), Some(app), Some(g)) = (&r.covering, &r.appendix, &glue) {
        let group = dynkin_group(&roots);
        let image_ok = stabilized_image(&group, g, 1 << 22)
            .map(|(_, _, mod_sign)| mod_sign == app.sbar_m)
            .unwrap_or(false);
        checks.push(check(
            "symmetry-image",
            image_ok,
            format!("expected {}", app.sbar_m),
        ));
        let _ = cov;
    }

    RowReport {
        id: r.id,
        label: format!("{} ({})", r.roots, mw),
        checks,
    }
}

/// The glue subgroup a row's lattice data points at: the pinned one when
/// present, otherwise the first admissible subgroup of the right type.
pub fn find_glue(r: &StratumRecord) -> Option<IsotropicSubgroup> {
    let roots = r.root_sum();
    let mw = r.mw_type();
    if let Some(gens) = &r.glue {
        let form = component_disc_form(&roots);
        let mut elements = std::collections::BTreeSet::new();
        let mut frontier = vec![form.zero_element()];
        while let Some(x) = frontier.pop() {
            if elements.insert(x.clone()) {
                for gen in gens {
                    frontier.push(form.add(&x, gen));
                }
            }
        }
        return Some(IsotropicSubgroup {
            gens: gens.clone(),
            elements,
        });
    }
    admissible_isotropics(&roots, mw, 1).into_iter().next()
}

/// Verifies all rows.
pub fn verify_all(cat: &Catalog) -> Vec<RowReport> {
    cat.rows.iter().map(verify_row).collect()
}

/// Re-derives the high-index classification by enumeration and matches it
/// class by class against the embedded data.
pub fn rederive_high_index(cat: &Catalog, index: usize) -> Result<RowReport, String> {
    let mut checks = Vec::new();
    match index {
        9 => {
            let c = EnumConstraints {
                degree: 9,
                e2: Some(1),
                e3: Some(0),
                genus: Some(0),
                ..Default::default()
            };
            let found = enumerate_triples(&c).map_err(|e| e.to_string())?;
            checks.push(check(
                "class-count",
                found.len() == 4,
                format!("{} classes", found.len()),
            ));
            let mut cusps: Vec<Vec<usize>> = found.iter().map(|t| t.cusp_partition()).collect();
            cusps.sort();
            let mut expected: Vec<Vec<usize>> = (8..=11)
                .map(|i| cat.rows[i].passport[2].clone())
                .collect();
            expected.sort();
            checks.push(check(
                "cusp-partitions",
                cusps == expected,
                format!("{cusps:?}"),
            ));
        }
        12 => {
            let found = enumerate_triples(&EnumConstraints::torsion_free_genus0(12))
                .map_err(|e| e.to_string())?;
            checks.push(check(
                "class-count",
                found.len() == 6,
                format!("{} classes", found.len()),
            ));
            let mut cusps: Vec<Vec<usize>> = found.iter().map(|t| t.cusp_partition()).collect();
            cusps.sort();
            let mut expected: Vec<Vec<usize>> = (12..=17)
                .map(|i| cat.rows[i].passport[2].clone())
                .collect();
            expected.sort();
            checks.push(check(
                "cusp-partitions",
                cusps == expected,
                format!("{cusps:?}"),
            ));
            // the same six subgroups also serve rows 18..=23
            let mut twisted: Vec<Vec<usize>> = (18..=23)
                .map(|i| cat.rows[i].passport[2].clone())
                .collect();
            twisted.sort();
            checks.push(check("shared-subgroups", cusps == twisted, String::new()));
        }
        18 => {
            let found = enumerate_triples(&EnumConstraints::torsion_free_genus0(18))
                .map_err(|e| e.to_string())?;
            checks.push(check(
                "class-count",
                found.len() == 26,
                format!("{} classes", found.len()),
            ));
            // bijective class-by-class match against embedded triples
            let embedded: Vec<(usize, PermTriple)> = (24..=49)
                .filter_map(|i| cat.rows[i].perm_triple().map(|t| (i, t)))
                .collect();
            checks.push(check(
                "embedded-triples-parse",
                embedded.len() == 26,
                format!("{}", embedded.len()),
            ));
            let mut matched_class: Vec<Option<usize>> = vec![None; embedded.len()];
            let mut used = vec![false; found.len()];
            let mut bijective = true;
            for (slot, (_, t)) in embedded.iter().enumerate() {
                let hits: Vec<usize> = found
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| t.is_conjugate(f).unwrap_or(false))
                    .map(|(k, _)| k)
                    .collect();
                if hits.len() == 1 && !used[hits[0]] {
                    used[hits[0]] = true;
                    matched_class[slot] = Some(hits[0]);
                } else {
                    bijective = false;
                }
            }
            checks.push(check(
                "class-by-class-match",
                bijective && used.iter().all(|&u| u),
                String::new(),
            ));
            // the two strata sharing a root lattice carry non-conjugate data
            let t38 = cat.rows[38].perm_triple().unwrap();
            let t39 = cat.rows[39].perm_triple().unwrap();
            checks.push(check(
                "pair-non-conjugate",
                !t38.is_conjugate(&t39).unwrap_or(true),
                String::new(),
            ));
            // informational: the two differ by reversing the orientation
            let mirrored = mirror(&t39);
            checks.push(check(
                "pair-mirror-conjugate",
                t38.is_conjugate(&mirrored).unwrap_or(false),
                "orientation reversal".to_string(),
            ));
        }
        other => return Err(format!("no high-index family with index {other}")),
    }
    Ok(RowReport {
        id: index,
        label: format!("re-derivation at index {index}"),
        checks,
    })
}

/// The orientation-reversed cover: both small generators inverted.
fn mirror(t: &PermTriple) -> PermTriple {
    PermTriple::from_pair(t.mu0().inverse(), t.mu1().inverse())
        .expect("degrees unchanged")
}

fn disc_order_of_m(r: &StratumRecord) -> BigInt {
    let roots = r.root_sum();
    let mw = r.mw_type();
    BigInt::from(roots.disc_order()) / BigInt::from(mw.order() * mw.order())
}

/// Checks that lie across rows rather than within one: the tallies of
/// component counts over the rank-17 rows.
pub fn verify_component_tallies(cat: &Catalog) -> RowReport {
    let mut ones = 0;
    let mut twos = 0;
    let mut fours = 0;
    for r in cat.rows.iter().skip(24) {
        // rows 38/39 share a lattice: count it once, on row 38
        if r.id == 39 {
            continue;
        }
        if let Some(app) = &r.appendix {
            match mm_counts(app.i3, 1, app.i2) {
                Ok((_, 1)) => ones += 1,
                Ok((_, 2)) => twos += 1,
                Ok((_, 4)) => fours += 1,
                _ => {}
            }
        }
    }
    let checks = vec![
        check("one-component", ones == 18, format!("{ones}")),
        check("two-components", twos == 4, format!("{twos}")),
        check("four-components", fours == 3, format!("{fours}")),
    ];
    RowReport {
        id: 0,
        label: "component tallies over the 25 rank-17 lattices".to_string(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_4_verifies() {
        let cat = Catalog::embedded();
        let report = verify_row(cat.row(4).unwrap());
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn row_8_verifies() {
        let cat = Catalog::embedded();
        let report = verify_row(cat.row(8).unwrap());
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn tampered_row_fails() {
        let cat = Catalog::embedded();
        let mut row = cat.row(4).unwrap().clone();
        row.dim = 7;
        let report = verify_row(&row);
        assert!(!report.all_pass());
    }

    #[test]
    fn rederive_index_9() {
        let cat = Catalog::embedded();
        let report = rederive_high_index(&cat, 9).unwrap();
        assert!(report.all_pass(), "{report:?}");
        assert!(rederive_high_index(&cat, 10).is_err());
    }
}
