use coxwall::classification::{classify, order_of_finite, SpecialSubset};
use coxwall::coxeter::{presets, CoxeterMatrix, CoxeterSystem, Label};
use coxwall::even_polytopes::{
    andreev_check, coxeter_cell, even_polyhedra_table, instantiate_rank3, parallel_classes, verify_parallel_class,
    verify_simple,
};
use std::collections::HashSet;

/// Every finite system of rank ≤ 4 with labels in {2, 3, 4, 5, 6} and order
/// at most 1200.
fn small_finite_systems() -> Vec<CoxeterSystem> {
    let labels = [2, 3, 4, 5, 6];
    let mut out = Vec::new();
    for rank in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..rank).flat_map(|i| (i + 1..rank).map(move |j| (i, j))).collect();
        for code in 0..labels.len().pow(pairs.len() as u32) {
            let mut rows = vec![vec![Label::Finite(1); rank]; rank];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                let l = Label::Finite(labels[code / labels.len().pow(k as u32) % labels.len()]);
                rows[i][j] = l;
                rows[j][i] = l;
            }
            let sys = CoxeterSystem::new(CoxeterMatrix::new(rows).unwrap()).unwrap();
            let whole = SpecialSubset::whole(&sys);
            if classify(&whole).is_finite() && order_of_finite(&whole).unwrap() <= 1200 {
                out.push(sys);
            }
        }
    }
    out
}

#[test]
fn cells_are_spheres_with_coset_face_counts() {
    let systems = small_finite_systems();
    assert!(systems.len() > 50);
    for sys in systems {
        let cell = coxeter_cell(&sys).unwrap();
        let rank = sys.rank() as i64;
        // χ(S^{n-1}) = 1 + (-1)^{n-1}
        assert_eq!(cell.boundary_euler_characteristic(), 1 + if rank % 2 == 1 { 1 } else { -1 });
        let order = order_of_finite(&SpecialSubset::whole(&sys)).unwrap();
        let mut expected = vec![0usize; sys.rank() + 1];
        for t in 0..1u64 << sys.rank() {
            expected[t.count_ones() as usize] +=
                (order / order_of_finite(&SpecialSubset::from_mask(&sys, t)).unwrap()) as usize;
        }
        assert_eq!(cell.face_vector(), expected);
        let classes = parallel_classes(&cell);
        let mut seen = HashSet::new();
        for c in &classes {
            assert!(verify_parallel_class(&cell, c));
            for &e in &c.edges {
                assert!(seen.insert(e));
            }
        }
        assert_eq!(seen.len(), cell.group().edges().len());
    }
}

#[test]
fn small_cells_are_simple() {
    for sys in [presets::a3(), presets::b3(), presets::a1_cubed(), presets::dihedral(7)] {
        assert!(verify_simple(&coxeter_cell(&sys).unwrap()));
    }
}

#[test]
fn every_table_entry_passes_andreev() {
    assert_eq!(even_polyhedra_table(3).unwrap().len(), 8);
    let m_values: Vec<u32> = (2..=20).collect();
    for inst in instantiate_rank3(30, &m_values) {
        let r = andreev_check(&inst.cellulation, inst.angles).unwrap();
        assert!(r.passed, "{} {} n = {}: {r:?}", inst.coxeter_type, inst.cellulation, inst.n);
    }
}
