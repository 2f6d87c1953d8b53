//! The calibration search over ccw/cw assignments: it must rediscover the
//! bundled signs (and nothing else but their mirror image) from scratch.

use matchstick_core::{
    builtin_graph54, calibrate_orientations, CalibrateOptions, SolveError, Turn,
};

#[test]
fn rediscovers_the_bundled_signs_when_one_slot_is_pinned() {
    let c = builtin_graph54();
    let opts = CalibrateOptions {
        pinned: vec![(0, Turn::Ccw)],
        expected_value: Some(38.067338069376),
        ..CalibrateOptions::default()
    };
    let found = calibrate_orientations(&c, &opts).unwrap();
    assert_eq!(found, vec![c.turns()]);
}

#[test]
fn unpinned_search_finds_exactly_the_mirror_pair() {
    let c = builtin_graph54();
    let found = calibrate_orientations(&c, &CalibrateOptions::default()).unwrap();
    assert_eq!(found.len(), 2);

    let bundled = c.turns();
    let mirrored: Vec<Turn> = bundled.iter().map(|t| t.flipped()).collect();
    assert!(found.contains(&bundled));
    assert!(found.contains(&mirrored));
}

#[test]
fn contradictory_pin_finds_nothing() {
    // Slot 0 pinned ccw rules out the mirror image; slot 4 pinned cw rules
    // out the bundled assignment. Nothing else survives.
    let c = builtin_graph54();
    assert_eq!(c.turns()[4], Turn::Ccw);
    let opts = CalibrateOptions {
        pinned: vec![(0, Turn::Ccw), (4, Turn::Cw)],
        ..CalibrateOptions::default()
    };
    assert!(matches!(
        calibrate_orientations(&c, &opts),
        Err(SolveError::NoAssignmentFound)
    ));
}

#[test]
fn bundled_turn_vector_shape() {
    // 27 orientation slots; the three cw slots are the two fan-out angle
    // edges and the junction angle edge.
    let turns = builtin_graph54().turns();
    assert_eq!(turns.len(), 27);
    let cw_slots: Vec<usize> = turns
        .iter()
        .enumerate()
        .filter(|(_, t)| **t == Turn::Cw)
        .map(|(i, _)| i)
        .collect();
    assert_eq!(cw_slots, vec![16, 17, 22]);
}
