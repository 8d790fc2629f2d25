//! Measures over preference profiles: events, the two-period construction,
//! the three-by-three closed form, and verification.

mod events;
mod measure;
mod nu;
mod verify;

pub use events::{canonical_len, choice_event, edge_masses, edge_set_size, history_masses, upper_edge_set, Cylinder};
pub use measure::{check_full_support, Measure};
pub use nu::{
    build_nu, check_extension, check_first_additive, check_normalization, check_second_additive, construct_ru,
    construct_su, construct_su_3x3, construct_su_detailed, ClaimCheck, Construction, NuTable,
};
pub use verify::{verify_representation, VerifyFailure, VerifyMode, VerifyReport};
