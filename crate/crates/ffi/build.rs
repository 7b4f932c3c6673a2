fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(format!("{crate_dir}/include/pnlogic.h"));
        }
        // Keep the committed header when generation is unavailable.
        Err(e) => println!("cargo:warning=pnlogic.h not regenerated: {e}"),
    }
}
