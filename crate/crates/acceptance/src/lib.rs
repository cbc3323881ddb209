//! Holds the `acceptance` integration test; the library is empty.
