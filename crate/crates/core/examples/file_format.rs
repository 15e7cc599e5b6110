//! Saving and loading systems as JSON.

use phbridge::generate::Generator;
use phbridge::io::SystemFile;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut g = Generator::complex(13);
    let sys = g.geometric(1, 1, 1);
    let doc = SystemFile::from_geometric(&sys);
    let text = doc.to_json();
    println!("{} bytes, kind {}", text.len(), doc.kind());
    let back = SystemFile::parse(&text)?;
    assert_eq!(back, doc);
    let loaded = back.to_geometric()?;
    println!("reloaded D gap {:.1e}", loaded.d().gap(sys.d())?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
