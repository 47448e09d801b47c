//! Fixed 64-bit mixing used for all environment identifiers. The constants
//! are those of splitmix64, so identifiers are stable across platforms.

pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn combine(h: u64, v: u64) -> u64 {
    mix64(h.rotate_left(23) ^ v.wrapping_add(0x9e37_79b9_7f4a_7c15))
}
