//! Holds the `acceptance` test target; run it with
//! `cargo test -p qca-verify --test acceptance`.
