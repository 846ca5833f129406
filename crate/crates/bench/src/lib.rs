//! Shared fixtures for the criterion benches.

use invset_core::rational::rat;
use invset_core::{ClosedSet1D, SftSubshift};

/// The subshifts avoiding `00,11`, `000,111`, and the ternary `00,11,22`.
pub fn subshifts() -> Vec<(&'static str, SftSubshift)> {
    vec![
        ("x00_11", SftSubshift::from_strs(1, &["00", "11"]).expect("valid")),
        ("x000_111", SftSubshift::from_strs(1, &["000", "111"]).expect("valid")),
        ("ternary", SftSubshift::from_strs(2, &["00", "11", "22"]).expect("valid")),
    ]
}

/// The 2-cycle `{1/3, 2/3}` of the doubling map.
pub fn pair() -> ClosedSet1D {
    ClosedSet1D::points([rat(1, 3), rat(2, 3)])
}
