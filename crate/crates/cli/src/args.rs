use std::path::PathBuf;

use clap::Parser;

/// Exact lattice, fibration and Salem-degree computations. Every command
/// prints a JSON report.
#[derive(Parser, Debug, Clone)]
#[command(name = "salemlat", version)]
pub struct Args {
    /// One of: info, roots, fibration, scan, exceptional, isometry, salem, search, transfer
    pub command: String,

    /// Lattice file `{"dim": n, "gram": [[...]]}`; the source lattice for `transfer`
    #[arg(long)]
    pub lattice: Option<PathBuf>,

    /// Target lattice file for `transfer`
    #[arg(long = "lattice-y")]
    pub lattice_y: Option<PathBuf>,

    /// Vector as JSON: `[1,0,0]` or `{"coords": [...]}`
    #[arg(long)]
    pub vector: Option<String>,

    /// List of vectors as JSON, e.g. `[[1,0,0],[0,1,0]]`
    #[arg(long)]
    pub classes: Option<String>,

    /// Reference vector for chambers, as JSON
    #[arg(long)]
    pub reference: Option<String>,

    /// Isometry file `{"matrix": [[...]]}` (columns are images of basis vectors)
    #[arg(long)]
    pub matrix: Option<PathBuf>,

    /// Embedding file `{"matrix": [[...]]}` from the `--lattice` basis into `--lattice-y`
    #[arg(long)]
    pub embedding: Option<PathBuf>,

    /// Polynomial coefficients in ascending degree, as JSON
    #[arg(long)]
    pub poly: Option<String>,

    /// Sup-norm bound for isotropic scans
    #[arg(long, default_value_t = 2)]
    pub bound: u32,

    /// Norm of the vectors listed by `roots`
    #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
    pub norm: i64,

    #[arg(long = "max-word-len", default_value_t = 6)]
    pub max_word_len: usize,

    /// Words examined by `search`
    #[arg(long, default_value_t = 20_000)]
    pub budget: u64,

    /// Reflections allowed in a Weyl walk
    #[arg(long = "walk-budget", default_value_t = 1_000)]
    pub walk_budget: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Width of entropy enclosures, e.g. `1/1000000` or `1e-6`
    #[arg(long, default_value = "1/1000000", allow_hyphen_values = true)]
    pub tol: String,

    /// Transvections per fibration class
    #[arg(long = "per-class", default_value_t = 1)]
    pub per_class: usize,

    /// Worker threads for `search`
    #[arg(long, default_value_t = 1)]
    pub workers: usize,

    /// Word search strategy: hybrid, exhaustive or random-walk
    #[arg(long, default_value = "hybrid")]
    pub strategy: String,

    /// Characteristic polynomial method: faddeev-leverrier or berkowitz
    #[arg(long = "char-poly", default_value = "faddeev-leverrier")]
    pub char_poly: String,

    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}
