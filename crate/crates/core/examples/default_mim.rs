//! Prints the built-in MIM as a module document.
//!
//! cargo run --example default_mim > mim.fmod

fn main() {
    print!("{}", fomforge::serialize_module(&fomforge::default_mim()));
}
