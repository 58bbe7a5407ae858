//! Writing functions to JSON and reading them back.
//!
//! `cargo run --example file_io`

use slicekit::funcspec::slice_from_spec;
use slicekit::io::{read_function, write_cube, write_slice, FunctionFile};
use slicekit::{make_domain, CubeFunction};

fn main() -> slicekit::Result<()> {
    let dir = std::env::temp_dir().join("slicekit-file-io");
    std::fs::create_dir_all(&dir)?;

    let d = make_domain(5, 2)?;
    let f = slice_from_spec("random-rat:4", &d)?;
    let slice_path = dir.join("f.json");
    write_slice(&slice_path, &f)?;

    let c = CubeFunction::majority(3)?;
    let cube_path = dir.join("maj.json");
    write_cube(&cube_path, &c)?;

    for path in [&slice_path, &cube_path] {
        match read_function(path)? {
            FunctionFile::Slice(g) => println!("{}: slice function, equal = {}", path.display(), g == f),
            FunctionFile::Cube(g) => println!("{}: cube function, equal = {}", path.display(), g == c),
        }
    }
    print!("{}", std::fs::read_to_string(&cube_path)?);
    Ok(())
}
