#![no_main]

use libfuzzer_sys::fuzz_target;
use lpst_core::group::GroupModel;
use lpst_core::io::{parse_group_element, write_group_element};

// The first byte picks the group, the rest is the file.
fuzz_target!(|data: &[u8]| {
    let Some((&tag, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let model = match tag % 4 {
        0 => GroupModel::Integers,
        1 => GroupModel::Lattice(1 + (tag as usize / 4) % 3),
        2 => GroupModel::Free(1 + (tag as usize / 4) % 3),
        _ => GroupModel::Cyclic(1 + (tag as u64 / 4) % 12),
    };
    if let Ok(a) = parse_group_element(text, &model) {
        let back = parse_group_element(&write_group_element(&a, &model), &model)
            .expect("written element parses");
        assert_eq!(back, a);
    }
});
