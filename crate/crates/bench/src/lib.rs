//! Shared fixtures for the engine benchmarks.

use zerosum_core::{Element, Group, Sequence};

pub fn c2c4() -> Group {
    Group::new(2, 4).expect("valid factors")
}

pub fn c3c6() -> Group {
    Group::new(3, 6).expect("valid factors")
}

/// A fixed length-13 sequence over C3xC6 exercising several multiplicities.
pub fn mixed_sequence() -> Sequence {
    let g = c3c6();
    Sequence::from_entries(
        g,
        &[
            (Element::new(0, 1), 5),
            (Element::new(1, 2), 3),
            (Element::new(2, 5), 3),
            (Element::new(1, 0), 2),
        ],
    )
    .expect("valid entries")
}
