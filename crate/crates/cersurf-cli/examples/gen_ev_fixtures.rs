//! Regenerates the electric-vehicle demo fixture under `fixtures/ev/`.
//!
//! Each ticker gets a synthetic parity-consistent chain whose every quote
//! implies one flat rate, so the surface mean equals that rate exactly and
//! `cersurf rank` on the fixture reproduces a known priority order:
//! General Motors (0.0708) before Ford (0.2626) before Tesla (1.0320) —
//! lower positive rate, lower risk, higher priority.
//!
//! Run from the workspace root: `cargo run -p cersurf-cli --example gen_ev_fixtures`

use std::path::{Path, PathBuf};

use cersurf::{chain_to_csv, flat_rate_chain, FlatChainSpec};
use chrono::NaiveDate;

struct Ticker {
    symbol: &'static str,
    spot: f64,
    dividend_yield: f64,
    flat_rate: f64,
}

const TICKERS: &[Ticker] = &[
    Ticker {
        symbol: "TSLA",
        spot: 108.10,
        dividend_yield: 0.0,
        flat_rate: 1.0320,
    },
    Ticker {
        symbol: "GM",
        spot: 33.64,
        dividend_yield: 0.0107,
        flat_rate: 0.0708,
    },
    Ticker {
        symbol: "F",
        spot: 11.63,
        dividend_yield: 0.0516,
        flat_rate: 0.2626,
    },
];

fn main() -> anyhow::Result<()> {
    let dir = fixture_dir();
    std::fs::create_dir_all(&dir)?;
    let start = NaiveDate::from_ymd_opt(2023, 1, 3).expect("valid date");

    for t in TICKERS {
        let spec = FlatChainSpec::new(t.symbol, start, t.spot, t.dividend_yield, t.flat_rate)
            .offsets(vec![10, 21, 42, 63, 126, 189, 252, 378, 504, 630])
            .strikes(
                [0.5, 0.75, 1.0, 1.25, 1.5, 2.0]
                    .iter()
                    .map(|f| f * t.spot)
                    .collect(),
            )
            .spread(0.05);
        let snapshot = flat_rate_chain(&spec)?;

        std::fs::write(
            dir.join(format!("{}_chain.csv", t.symbol)),
            chain_to_csv(&snapshot.quotes),
        )?;
        std::fs::write(
            dir.join(format!("{}_meta.json", t.symbol)),
            format!(
                "{{\n  \"ticker\": \"{}\",\n  \"start_date\": \"{}\",\n  \"spot\": {},\n  \"dividend_yield\": {}\n}}\n",
                t.symbol,
                start.format("%Y-%m-%d"),
                t.spot,
                t.dividend_yield
            ),
        )?;
    }

    let manifest = TICKERS
        .iter()
        .map(|t| {
            format!(
                "    {{ \"ticker\": \"{0}\", \"chain\": \"{0}_chain.csv\", \"meta\": \"{0}_meta.json\" }}",
                t.symbol
            )
        })
        .collect::<Vec<_>>()
        .join(",\n");
    std::fs::write(
        dir.join("manifest.json"),
        format!("{{\n  \"jobs\": [\n{manifest}\n  ]\n}}\n"),
    )?;

    println!("wrote fixtures to {}", dir.display());
    Ok(())
}

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/ev")
}
