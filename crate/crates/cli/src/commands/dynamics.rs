use salemlat::dynamics::{
    build_generators, generators_for_classes, search_strategies, search_with_strategy,
    transfer_fibrations, Embedding, GeneratorSet, SearchConfig,
};
use salemlat::fibrations::scan_isotropic;
use salemlat::io;
use salemlat::registry::Named;
use salemlat::{Lattice, LatticeVector, Result};
use serde_json::{json, Value};

use super::{lattice_at, missing, vector_arg, vector_list_arg, Command};
use crate::args::Args;

pub struct Search;
pub struct Transfer;

/// Explicit `--classes`, or every infinite-type class of a `--bound` scan.
fn generators(l: &Lattice, args: &Args) -> Result<GeneratorSet> {
    match args.classes.as_deref() {
        Some(text) => generators_for_classes(l, &vector_list_arg(text, "--classes")?, args.per_class),
        None => build_generators(l, &scan_isotropic(l, args.bound)?, args.per_class),
    }
}

fn infinite_classes(l: &Lattice, args: &Args) -> Result<Vec<LatticeVector>> {
    match args.classes.as_deref() {
        Some(text) => vector_list_arg(text, "--classes"),
        None => Ok(scan_isotropic(l, args.bound)?
            .infinite_classes()
            .map(|c| c.e.clone())
            .collect()),
    }
}

impl Named for Search {
    fn name(&self) -> &'static str {
        "search"
    }
}

impl Command for Search {
    fn summary(&self) -> &'static str {
        "word search over parabolic generators for the largest Salem degree"
    }

    fn run(&self, args: &Args) -> Result<Value> {
        let l = lattice_at(args.lattice.as_deref(), "--lattice")?;
        let gens = generators(&l, args)?;
        let strategies = search_strategies();
        let strategy = strategies.get(&args.strategy)?;
        let cfg = SearchConfig {
            max_word_len: args.max_word_len,
            budget: args.budget,
            seed: args.seed,
            workers: args.workers,
        };
        let report = search_with_strategy(&l, &gens, &cfg, strategy)?;
        let mut out = io::search_report_json(&report);
        out["generators"] = Value::Array(
            gens.generators
                .iter()
                .map(|g| json!({"e": io::int_list(g.e.coords()), "v": io::int_list(g.v.coords())}))
                .collect(),
        );
        Ok(out)
    }
}

impl Named for Transfer {
    fn name(&self) -> &'static str {
        "transfer"
    }
}

impl Command for Transfer {
    fn summary(&self) -> &'static str {
        "pull infinite-type classes back along a finite-index embedding"
    }

    fn run(&self, args: &Args) -> Result<Value> {
        let lx = lattice_at(args.lattice.as_deref(), "--lattice")?;
        let ly = lattice_at(args.lattice_y.as_deref(), "--lattice-y")?;
        let path = args.embedding.as_deref().ok_or_else(|| missing("--embedding"))?;
        let iota = io::parse_matrix_file(&io::read_json(path)?, &path.display().to_string())?;
        let h_y = vector_arg(args.vector.as_deref(), "--vector")?;
        let reference = match args.reference.as_deref() {
            Some(text) => Some(vector_arg(Some(text), "--reference")?),
            None => None,
        };
        let e_list = infinite_classes(&ly, args)?;
        let emb = Embedding {
            lx: &lx,
            ly: &ly,
            iota: &iota,
        };
        let report = transfer_fibrations(&emb, &e_list, &h_y, args.walk_budget, reference.as_ref())?;
        let mut out = io::transfer_report_json(&report);
        out["walk_budget"] = json!(args.walk_budget);
        Ok(out)
    }
}
