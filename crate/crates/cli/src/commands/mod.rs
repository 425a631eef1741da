//! One registered handler per subcommand.

mod dynamics;
mod lattice;
mod spectral;

use std::path::Path;

use num_rational::BigRational;
use salemlat::io;
use salemlat::registry::{Named, Registry};
use salemlat::{Error, Lattice, LatticeVector, Result};
use serde_json::Value;

use crate::args::Args;

pub trait Command: Named + Send + Sync {
    fn summary(&self) -> &'static str;
    fn run(&self, args: &Args) -> Result<Value>;
}

pub fn commands() -> Registry<dyn Command> {
    let mut r: Registry<dyn Command> = Registry::new("command", "info");
    r.register(Box::new(lattice::Info));
    r.register(Box::new(lattice::Roots));
    r.register(Box::new(lattice::Fibration));
    r.register(Box::new(lattice::Scan));
    r.register(Box::new(lattice::Exceptional));
    r.register(Box::new(spectral::IsometryCmd));
    r.register(Box::new(spectral::Salem));
    r.register(Box::new(dynamics::Search));
    r.register(Box::new(dynamics::Transfer));
    r
}

fn missing(flag: &str) -> Error {
    Error::Parse {
        source_name: flag.to_string(),
        message: "required for this command".into(),
    }
}

fn lattice_at(path: Option<&Path>, flag: &str) -> Result<Lattice> {
    io::load_lattice(path.ok_or_else(|| missing(flag))?)
}

fn vector_arg(text: Option<&str>, flag: &str) -> Result<LatticeVector> {
    let text = text.ok_or_else(|| missing(flag))?;
    io::parse_vector(&io::parse_json_str(text, flag)?, flag)
}

fn vector_list_arg(text: &str, flag: &str) -> Result<Vec<LatticeVector>> {
    io::parse_vector_list(&io::parse_json_str(text, flag)?, flag)
}

fn tolerance(args: &Args) -> Result<BigRational> {
    io::parse_positive_rational(&args.tol)
}
