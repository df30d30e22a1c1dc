//! Holds the acceptance suite (`tests/acceptance.rs`). Kept as its own package
//! so its failing criteria do not stop the other test targets from running.
