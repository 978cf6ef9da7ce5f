//! Tile and boundary counts checked against a recurrence on the cyclic
//! sequence of per-vertex tile counts, which never touches geometry.

use hyperqec::{InflationRule, Preset};

/// Grows a boundary of tile counts by one layer of `degree`-gons.
/// Returns the new boundary and the number of tiles added.
fn grow(boundary: &[u8], degree: usize, rule: InflationRule) -> (Vec<u8>, usize) {
    let m = boundary.len();
    let start = (0..m).find(|&i| boundary[i] < 3).expect("open boundary");
    let mut out = Vec::new();
    let mut tiles = 0;
    let mut t = 0;
    while t < m {
        let mut r = 1;
        while boundary[(start + t + r) % m] == 3 {
            r += 1;
        }
        let end = boundary[(start + t + r) % m];
        tiles += 1;
        out.extend(std::iter::repeat(1).take(degree - r - 3));
        match (end, rule) {
            (2, _) => out.push(2),
            (1, InflationRule::Vertex) => {
                tiles += 1;
                out.push(2);
                out.extend(std::iter::repeat(1).take(degree - 3));
                out.push(2);
            }
            (1, InflationRule::Edge) => out.extend([1, 3, 1]),
            _ => unreachable!(),
        }
        t += r;
    }
    (out, tiles)
}

/// `(tiles, boundary qubits)` after `layers` layers.
fn predicted(center: usize, outer: usize, layers: usize, rule: InflationRule) -> (usize, usize) {
    let mut boundary = vec![1u8; center];
    let mut tiles = 1;
    for _ in 0..layers {
        let (b, added) = grow(&boundary, outer, rule);
        boundary = b;
        tiles += added;
    }
    (tiles, boundary.len())
}

fn degrees(preset: Preset) -> (usize, usize) {
    match preset {
        Preset::ZeroRateSteane => (7, 8),
        _ => (5, 5),
    }
}

#[test]
fn recurrence_matches_builder() {
    for preset in Preset::ALL {
        let (c, o) = degrees(preset);
        for rule in [InflationRule::Vertex, InflationRule::Edge] {
            let max = if preset == Preset::ZeroRateSteane { 2 } else { 3 };
            for layers in 0..=max {
                let net = preset.build_with(layers, rule).unwrap();
                assert_eq!(
                    (net.tensors.len(), net.n()),
                    predicted(c, o, layers, rule),
                    "{preset} {rule} L={layers}"
                );
            }
        }
    }
}

#[test]
fn frozen_counts() {
    let happy: Vec<_> = (0..=3)
        .map(|l| predicted(5, 5, l, InflationRule::Vertex))
        .collect();
    assert_eq!(happy, [(1, 5), (11, 25), (51, 95), (201, 355)]);
    let happy_edge: Vec<_> = (0..=3)
        .map(|l| predicted(5, 5, l, InflationRule::Edge))
        .collect();
    assert_eq!(happy_edge, [(1, 5), (6, 20), (21, 55), (61, 145)]);
    let steane: Vec<_> = (0..=3)
        .map(|l| predicted(7, 8, l, InflationRule::Vertex).1)
        .collect();
    assert_eq!(steane, [7, 77, 763, 7553]);
    let steane_edge: Vec<_> = (0..=3)
        .map(|l| predicted(7, 8, l, InflationRule::Edge).1)
        .collect();
    assert_eq!(steane_edge, [7, 49, 287, 1673]);
}

#[test]
fn layer_sizes() {
    let net = Preset::MaxRateHappy.build(2).unwrap();
    let sizes: Vec<_> = (0..=2).map(|l| net.tensors_in_layer(l).count()).collect();
    assert_eq!(sizes, [1, 10, 40]);
    for t in &net.tensors {
        assert!(t.layer <= 2);
    }
}
