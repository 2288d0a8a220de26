//! Doc-test anchors for the guide in `book/`.
//!
//! Each chapter is attached to a hidden module, so `cargo test --doc`
//! compiles and runs every Rust snippet in the book and the guide can never
//! drift from the library.

// Chapters are added here as they are written.
