use planesat_web::{lex_le_check, lex_le_listing, orbit_report, solve_plane};

#[test]
fn solved_planes_have_one_common_point_per_line_pair() {
    for order in 2..=4 {
        let p = solve_plane(order, "normalized").unwrap();
        let side = p.side();
        assert_eq!(side, order * order + order + 1);
        let cells = p.cells();
        for i in 0..side {
            assert_eq!(cells[i * side..(i + 1) * side].iter().map(|&c| c as usize).sum::<usize>(), order + 1);
            for j in 0..i {
                let common = (0..side).filter(|&c| cells[i * side + c] == 1 && cells[j * side + c] == 1).count();
                assert_eq!(common, 1);
            }
        }
    }
    assert!(solve_plane(6, "normalized").is_err());
    assert!(solve_plane(3, "sideways").is_err());
}

#[test]
fn lex_listing_and_check() {
    let listing = lex_le_listing(3).unwrap();
    assert!(listing.starts_with("7 clauses, 2 auxiliary variables"));
    assert_eq!(listing.lines().count(), 8);
    assert_eq!(lex_le_check("010", "011").unwrap(), "encoding admits the pair; x ≤lex y");
    assert_eq!(lex_le_check("110", "011").unwrap(), "encoding rejects the pair; x >lex y");
    assert!(lex_le_check("01", "011").is_err());
}

#[test]
fn orbit_under_a_swap() {
    let out = orbit_report("(1,2)\n(3,4)", "abab").unwrap();
    assert!(out.starts_with("group 4, orbit 4, stabilizer 1"));
    let out = orbit_report("(1,2,3)", "aab").unwrap();
    assert!(out.starts_with("group 3, orbit 3, stabilizer 1"));
    assert!(orbit_report("(1,5)", "ab").is_err());
}
