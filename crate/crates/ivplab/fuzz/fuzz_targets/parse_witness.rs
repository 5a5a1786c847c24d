#![no_main]

use libfuzzer_sys::fuzz_target;

// Witness files are untrusted input: parsing either yields a fully
// re-validated witness or a clean error, never a panic.
fuzz_target!(|data: &[u8]| {
    let _ = ivplab::json::parse_witness(data);
});
