use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use covplan::{run, CoordMode, Options};
use covplan_core::FirstLineMode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FirstLine {
    /// First line one spacing above the lowest point of each region.
    Paper,
    /// Lines centred so both margins are at most half a spacing.
    Centered,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Coords {
    Auto,
    Planar,
    Geographic,
}

/// Plan boustrophedon survey flights over a region with exclusion zones.
#[derive(Debug, Parser)]
#[command(name = "covplan", version)]
struct Args {
    /// Region file: GeoJSON (Polygon, MultiPolygon or a FeatureCollection of
    /// rings) or CSV blocks of x,y rows separated by blank lines.
    #[arg(long)]
    input: PathBuf,
    /// Wind direction in degrees; flight lines run across it.
    #[arg(long, allow_hyphen_values = true)]
    wind_deg: f64,
    /// Flight-line direction in degrees, overriding the wind.
    #[arg(long, allow_hyphen_values = true)]
    sweep_deg: Option<f64>,
    /// Standoff from the boundary and from exclusion zones, in metres.
    #[arg(long)]
    safe_dist: f64,
    /// Ground footprint width across track, in metres.
    #[arg(long)]
    swath: f64,
    /// Overlap between neighbouring footprints, in [0, 1).
    #[arg(long)]
    sidelap: f64,
    #[arg(long, value_enum, default_value = "paper")]
    first_line: FirstLine,
    /// Projection origin for geographic input, as lon,lat.
    #[arg(long, value_parser = parse_origin, allow_hyphen_values = true)]
    origin: Option<(f64, f64)>,
    #[arg(long, value_enum, default_value = "auto")]
    coords: Coords,
    /// Output prefix; writes <out>.geojson, <out>.csv and <out>.svg.
    #[arg(long)]
    out: PathBuf,
}

fn parse_origin(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lon,lat")?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = Options {
        input: args.input,
        wind_deg: args.wind_deg,
        sweep_deg: args.sweep_deg,
        safe_distance: args.safe_dist,
        swath: args.swath,
        sidelap: args.sidelap,
        first_line: match args.first_line {
            FirstLine::Paper => FirstLineMode::PaperRule,
            FirstLine::Centered => FirstLineMode::Centered,
        },
        origin: args.origin,
        coords: match args.coords {
            Coords::Auto => CoordMode::Auto,
            Coords::Planar => CoordMode::Planar,
            Coords::Geographic => CoordMode::Geographic,
        },
        out: args.out,
        dump_skeleton: std::env::var("COVPLAN_DEBUG_SKELETON").is_ok_and(|v| v == "1"),
    };
    match run(&opts) {
        Ok(out) => {
            for f in &out.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
