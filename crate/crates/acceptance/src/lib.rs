//! Holds the `acceptance` integration test target; see tests/acceptance.rs.
