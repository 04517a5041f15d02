//! C ABI. Placeholder.
