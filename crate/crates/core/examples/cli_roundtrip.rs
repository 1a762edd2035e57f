//! Drives the command-line interface in-process: writes a data file, then
//! runs estimate-point and project on it.

use convex_support::cli::{run, write_data};
use convex_support::geometry::{ConvexBody, GridSpec, Point};
use convex_support::risk_lab::generate;

fn main() -> convex_support::Result<()> {
    let dir = std::env::temp_dir().join("convex-support-example");
    std::fs::create_dir_all(&dir)?;
    let data = dir.join("data.csv");
    let body = ConvexBody::ball(Point::ORIGIN, 1.0)?;
    write_data(std::fs::File::create(&data)?, &generate(&body, &GridSpec::new(64)?, 0.2, 42, 0)?)?;

    let mut out = Vec::new();
    let mut err = Vec::new();
    let path = data.to_str().expect("utf-8 path");
    run(["convex-support", "estimate-point", "--data", path, "--estimate-sigma", "--index", "33"], &mut out, &mut err)?;
    print!("{}", String::from_utf8_lossy(&out));

    out.clear();
    run(["convex-support", "project", "--vector", path], &mut out, &mut err)?;
    for line in String::from_utf8_lossy(&out).lines().take(5) {
        println!("{line}");
    }
    print!("{}", String::from_utf8_lossy(&err));
    Ok(())
}
