//! Reference configurations shipped with the crate, all over GF(4).
//!
//! Names give (a, b, d1, d2, d3) for labeled objects and (a, d1, d2, d3)
//! for topologies whose weights are all 1.

use crate::code::CodeGraph;
use crate::config::Configuration;
use crate::formats::parse_config;
use crate::gf::{Field, FieldElement};

/// (name, file contents).
pub const ALL: &[(&str, &str)] = &[
    ("gast_6_0_0_9_0", include_str!("../fixtures/gast_6_0_0_9_0.cfg")),
    ("gast_6_1_0_9_0", include_str!("../fixtures/gast_6_1_0_9_0.cfg")),
    ("gast_6_2_2_5_2", include_str!("../fixtures/gast_6_2_2_5_2.cfg")),
    ("topology_6_0_9_0", include_str!("../fixtures/topology_6_0_9_0.cfg")),
    ("topology_6_2_11_0", include_str!("../fixtures/topology_6_2_11_0.cfg")),
    ("topology_7_9_13_0", include_str!("../fixtures/topology_7_9_13_0.cfg")),
    ("topology_8_0_16_0", include_str!("../fixtures/topology_8_0_16_0.cfg")),
    ("topology_8_3_13_1", include_str!("../fixtures/topology_8_3_13_1.cfg")),
];

/// Parses a shipped fixture by name. Panics on unknown names.
pub fn load(name: &str) -> Configuration {
    let (_, text) = ALL.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no fixture `{name}`"));
    parse_config(text, None).expect("shipped fixtures parse")
}

/// [`toy_circulant`] in code-file form.
pub const TOY_CODE: &str = include_str!("../fixtures/toy_circulant.code");

/// Size and step of the generalized Petersen graph behind [`toy_circulant`].
pub const TOY_PETERSEN: (usize, usize) = (13, 5);

/// Small quasi-cyclic cycle code over GF(4), γ = 3, holding one copy of the
/// (6,0,0,9,0) object on VNs 0..6.
///
/// The host is the generalized Petersen graph GP(13,5) (girth 7) with each
/// graph edge a degree-2 check; its VNs are 6..32. The host's first edge check
/// is merged into the object's first check, so the code is connected while
/// the object's induced configuration stays intact. Girth 7 keeps the host
/// free of objects with six or fewer VNs.
pub fn toy_circulant() -> CodeGraph {
    let obj = load("gast_6_0_0_9_0");
    let mut entries = Vec::new();
    for r in 0..obj.ell() {
        for &v in obj.vns_of(r) {
            entries.push((r, v, obj.weight(r, v)));
        }
    }
    let (n, k) = TOY_PETERSEN;
    let host = (0..n).flat_map(|i| [(i, (i + 1) % n), (i, n + i), (n + i, n + (i + k) % n)]);
    let base = obj.a();
    let mut row = obj.ell();
    for (j, (x, y)) in host.enumerate() {
        let r = if j == 0 {
            0
        } else {
            row += 1;
            row - 1
        };
        // Weights cycle through 1, α, α² along the circulant blocks.
        let w = |s: usize| FieldElement::from_raw(1 + ((j + s) % 3) as u16);
        entries.push((r, base + x, w(0)));
        entries.push((r, base + y, w(1)));
    }
    CodeGraph::new(Field::gf4(), 3, row, base + 2 * n, &entries).expect("toy code is column-regular")
}
