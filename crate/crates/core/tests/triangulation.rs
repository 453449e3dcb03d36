use std::collections::BTreeMap;

use envycut_core::rational::rat;
use envycut_core::simplex::{
    barycentric_to_cube, cell_diameter, cell_vertices, cells_in_cube, cube_to_barycentric, kuhn_interior_contains,
    label, simplex_points, BarycentricPoint, CubePoint,
};
use envycut_core::sperner::Region;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn round_trip_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let d = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=1000u32);
        let mut z: Vec<u32> = (0..d).map(|_| rng.gen_range(0..=n)).collect();
        z.sort_unstable_by(|a, b| b.cmp(a));
        let cube = CubePoint::new(z);
        let x = cube_to_barycentric(&cube, n).unwrap();
        assert_eq!(x.coords().iter().map(|&c| u64::from(c)).sum::<u64>(), u64::from(n));
        assert_eq!(barycentric_to_cube(&x), cube);
    }
}

#[test]
fn cells_have_unit_diameter() {
    for d in 2..=5 {
        let n = if d <= 3 { 6 } else { 3 };
        for cell in Region::full(d, n).cells() {
            assert_eq!(cell_diameter(&cell_vertices(&cell, n).unwrap()), 1, "{cell:?}");
        }
    }
}

#[test]
fn cells_tile_the_simplex() {
    // every facet is shared by two cells, except facets on the outer boundary
    for (d, n) in [(2usize, 5u32), (3, 4), (4, 3)] {
        let cells = Region::full(d, n).cells();
        let mut facets: BTreeMap<Vec<BarycentricPoint>, usize> = BTreeMap::new();
        for cell in &cells {
            let vertices = cell_vertices(cell, n).unwrap();
            for skip in 0..=d {
                let mut facet: Vec<_> =
                    vertices.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, v)| v.clone()).collect();
                facet.sort();
                *facets.entry(facet).or_default() += 1;
            }
        }
        for (facet, count) in &facets {
            let outer = (0..=d).any(|i| facet.iter().all(|v| v.coords()[i] == 0));
            assert_eq!(*count, if outer { 1 } else { 2 }, "d={d} n={n} {facet:?}");
        }
        assert_eq!(cells.len(), (n as usize).pow(d as u32));
    }
}

#[test]
fn unit_cube_interior_points_lie_in_one_cell() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let d = rng.gen_range(1..=5);
        let x: Vec<_> = (0..d).map(|_| rat(rng.gen_range(1..1000), 1000)).collect();
        let mut sorted = x.clone();
        sorted.sort();
        sorted.dedup();
        let owners = cells_in_cube(&CubePoint::new(vec![0; d]))
            .into_iter()
            .filter(|cell| kuhn_interior_contains(&cell.perm, &x))
            .count();
        // points with repeated coordinates lie on shared walls
        assert_eq!(owners, usize::from(sorted.len() == d));
    }
}

#[test]
fn labels_cover_every_residue() {
    for d in 1..=5 {
        let mut seen = vec![false; d + 1];
        for x in simplex_points(d, 4) {
            seen[label(&x)] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
