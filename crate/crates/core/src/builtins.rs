//! The built-in group data: `S4 = C4·S3`, the dihedral factorization
//! `D4 = C4·C2` with inversion, and `A3 ⊲ S3`.

use crate::error::{Error, Result};
use crate::groups::{
    derive_actions, group_from_permutations, Composition, MatchedPair, Permutation,
    PermutationGroup, Subgroup, DEFAULT_SIZE_CAP,
};

fn perm_group(gens: &[&str], degree: usize, conv: Composition) -> Result<PermutationGroup> {
    let perms = gens
        .iter()
        .map(|g| Permutation::parse_cycles(g, degree))
        .collect::<Result<Vec<_>>>()?;
    group_from_permutations(&perms, DEFAULT_SIZE_CAP, conv)
}

/// Expected `◁` table: row `x ∈ {t, s, s2, st, ts}`, column `h ∈ {g, g2, g3}`.
pub const RACT_TABLE: [[&str; 3]; 5] = [
    ["g", "g3", "g2"],
    ["g2", "g3", "g"],
    ["g3", "g", "g2"],
    ["g3", "g2", "g"],
    ["g2", "g", "g3"],
];

/// Expected `▷` table: row `h ∈ {g, g2, g3}`, column `x ∈ {t, s, s2, st, ts}`.
pub const LACT_TABLE: [[&str; 5]; 3] = [
    ["ts", "t", "s", "st", "s2"],
    ["s2", "ts", "t", "st", "s"],
    ["s", "s2", "ts", "st", "t"],
];

pub const G_NAMES: [&str; 3] = ["g", "g2", "g3"];
pub const F_NAMES: [&str; 5] = ["t", "s", "s2", "st", "ts"];

/// `S4 = C4·S3` with `C4 = ⟨(1234)⟩` and `S3` the stabilizer of 4, labelled
/// `g, g2, g3` and `t = (12), s = (123), s2, st, ts`.
pub fn s4_matched_pair(conv: Composition) -> Result<MatchedPair> {
    let s4 = perm_group(&["(1234)", "(12)"], 4, conv)?;
    let g = s4.subgroup_from_cycles(&["(1234)"])?;
    let f = s4.subgroup_from_cycles(&["(12)", "(123)"])?;
    let mut mp = derive_actions(&s4.group, &f, &g)?;
    let sg = &s4.group;
    let gen = s4.index_of_cycles("(1234)")?;
    let t = s4.index_of_cycles("(12)")?;
    let s = s4.index_of_cycles("(123)")?;
    let g2 = sg.mul(gen, gen);
    let names = vec![
        (sg.identity(), "1".to_string()),
        (gen, "g".into()),
        (g2, "g2".into()),
        (sg.mul(g2, gen), "g3".into()),
        (t, "t".into()),
        (s, "s".into()),
        (sg.mul(s, s), "s2".into()),
        (sg.mul(s, t), "st".into()),
        (sg.mul(t, s), "ts".into()),
    ];
    mp.relabel(&names);
    Ok(mp)
}

/// `(table, row, column, expected, found)`.
pub type TableMismatch = (String, String, String, String, String);

/// Cells where the derived actions differ from the expected tables.
pub fn table_mismatches(mp: &MatchedPair) -> Result<Vec<TableMismatch>> {
    let g_local = |name: &str| -> Result<usize> {
        (0..mp.g_order())
            .find(|&i| mp.g_label(i) == name)
            .ok_or_else(|| Error::Consistency(format!("no G element labelled {name}")))
    };
    let f_local = |name: &str| -> Result<usize> {
        (0..mp.f_order())
            .find(|&i| mp.f_label(i) == name)
            .ok_or_else(|| Error::Consistency(format!("no F element labelled {name}")))
    };
    let mut out = Vec::new();
    for (r, x) in F_NAMES.iter().enumerate() {
        for (cidx, h) in G_NAMES.iter().enumerate() {
            let found = mp.g_label(mp.ract[g_local(h)?][f_local(x)?]).to_string();
            if found != RACT_TABLE[r][cidx] {
                out.push(("ract".into(), x.to_string(), h.to_string(), RACT_TABLE[r][cidx].into(), found));
            }
        }
    }
    for (r, h) in G_NAMES.iter().enumerate() {
        for (cidx, x) in F_NAMES.iter().enumerate() {
            let found = mp.f_label(mp.lact[g_local(h)?][f_local(x)?]).to_string();
            if found != LACT_TABLE[r][cidx] {
                out.push(("lact".into(), h.to_string(), x.to_string(), LACT_TABLE[r][cidx].into(), found));
            }
        }
    }
    Ok(out)
}

/// `D4 = C4·C2` with `C4 = ⟨(1234)⟩`, `C2 = ⟨(13)⟩`: `▷` is trivial and `◁`
/// inverts.
pub fn c4_c2_matched_pair() -> Result<MatchedPair> {
    let d4 = perm_group(&["(1234)", "(13)"], 4, Composition::RightToLeft)?;
    let g = d4.subgroup_from_cycles(&["(1234)"])?;
    let f = d4.subgroup_from_cycles(&["(13)"])?;
    let mut mp = derive_actions(&d4.group, &f, &g)?;
    let dg = &d4.group;
    let gen = d4.index_of_cycles("(1234)")?;
    let r = d4.index_of_cycles("(13)")?;
    let g2 = dg.mul(gen, gen);
    mp.relabel(&[
        (dg.identity(), "1".into()),
        (gen, "g".into()),
        (g2, "g2".into()),
        (dg.mul(g2, gen), "g3".into()),
        (r, "r".into()),
    ]);
    Ok(mp)
}

/// `S3` on three points with its normal subgroup `A3`.
pub fn s3_a3() -> Result<(PermutationGroup, Subgroup)> {
    let s3 = perm_group(&["(12)", "(123)"], 3, Composition::RightToLeft)?;
    let a3 = s3.subgroup_from_cycles(&["(123)"])?;
    Ok((s3, a3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{is_invariant_subgroup_under_lact, orbit_and_stabilizer, verify_matched_pair};

    #[test]
    fn s4_tables_match_cell_for_cell() {
        let mp = s4_matched_pair(Composition::RightToLeft).unwrap();
        assert!(verify_matched_pair(&mp).passed());
        assert_eq!(table_mismatches(&mp).unwrap(), vec![]);
    }

    #[test]
    fn opposite_convention_does_not_reproduce_tables() {
        let mp = s4_matched_pair(Composition::LeftToRight).unwrap();
        assert!(!table_mismatches(&mp).unwrap().is_empty());
    }

    #[test]
    fn stabilizer_of_g_is_not_lact_invariant() {
        let mp = s4_matched_pair(Composition::RightToLeft).unwrap();
        let g = (0..4).find(|&i| mp.g_label(i) == "g").unwrap();
        let (orbit, h) = orbit_and_stabilizer(&mp, g).unwrap();
        assert_eq!(orbit.len(), 3);
        let names: Vec<&str> = h.members().iter().map(|&x| mp.f_label(x)).collect();
        assert_eq!(names, vec!["1", "t"]);
        assert!(!is_invariant_subgroup_under_lact(&mp, &h));
    }

    #[test]
    fn inversion_pair_has_trivial_lact() {
        let mp = c4_c2_matched_pair().unwrap();
        assert!(verify_matched_pair(&mp).passed());
        for g in 0..4 {
            for x in 0..2 {
                assert_eq!(mp.lact[g][x], x);
            }
        }
        let g2 = (0..4).find(|&i| mp.g_label(i) == "g2").unwrap();
        let (orbit, h) = orbit_and_stabilizer(&mp, g2).unwrap();
        assert_eq!(orbit, vec![g2]);
        assert_eq!(h.order(), 2);
    }
}
