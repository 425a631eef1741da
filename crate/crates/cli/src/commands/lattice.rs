use num_bigint::BigInt;
use salemlat::fibrations::{
    even_picard_report, exceptional_sublattice, fibration_analysis, scan_isotropic, FibrationAtlas,
};
use salemlat::io;
use salemlat::registry::Named;
use salemlat::roots::enumerate_norm_vectors;
use salemlat::Result;
use serde_json::{json, Value};

use super::{lattice_at, vector_arg, vector_list_arg, Command};
use crate::args::Args;

pub struct Info;
pub struct Roots;
pub struct Fibration;
pub struct Scan;
pub struct Exceptional;

impl Named for Info {
    fn name(&self) -> &'static str {
        "info"
    }
}

impl Command for Info {
    fn summary(&self) -> &'static str {
        "dimension, signature and discriminant invariants"
    }

    fn run(&self, args: &Args) -> Result<Value> {
        let l = lattice_at(args.lattice.as_deref(), "--lattice")?;
        let (p, n) = l.signature();
        Ok(json!({
            "dim": l.dim(),
            "signature": [p, n],
            "discriminant": io::int_list(&l.discriminant_group().invariant_factors),
        }))
    }
}

impl Named for Roots {
    fn name(&self) -> &'static str {
        "roots"
    }
}

impl Command for Roots {
    fn summary(&self) -> &'static str {
        "vectors of a given negative norm in a negative definite lattice"
    }

    fn run(&self, args: &Args) -> Result<Value> {
        let l = lattice_at(args.lattice.as_deref(), "--lattice")?;
        let roots = enumerate_norm_vectors(&l, &BigInt::from(args.norm))?;
        let mut out = io::root_set_json(&roots);
        out["norm"] = json!(args.norm);
        Ok(out)
    }
}

impl Named for Fibration {
    fn name(&self) -> &'static str {
        "fibration"
    }
}

impl Command for Fibration {
    fn summary(&self) -> &'static str {
        "ranks of e-perp and its root part for one isotropic class"
    }

    fn run(&self, args: &Args) -> Result<Value> {
        let l = lattice_at(args.lattice.as_deref(), "--lattice")?;
        let e = vector_arg(args.vector.as_deref(), "--vector")?;
        let c = fibration_analysis(&l, &e)?;
        Ok(json!({
            "infinite": c.infinite,
            "rank_perp": c.rank_perp,
            "rank_perp_two": c.rank_perp_two,
        }))
    }
}

impl Named for Scan {
    fn name(&self) -> &'static str {
        "scan"
    }
}

impl Command for Scan {
    fn summary(&self) -> &'static str {
        "all primitive isotropic classes in a coordinate box"
    }

    fn run(&self, args: &Args) -> Result<Value> {
        let l = lattice_at(args.lattice.as_deref(), "--lattice")?;
        let atlas = scan_isotropic(&l, args.bound)?;
        let mut out = io::atlas_json(&atlas);
        out["bound"] = json!(args.bound);
        Ok(out)
    }
}

impl Named for Exceptional {
    fn name(&self) -> &'static str {
        "exceptional"
    }
}

impl Command for Exceptional {
    fn summary(&self) -> &'static str {
        "complement of the infinite-type span, cross-checked against (e-perp)^(2)"
    }

    fn run(&self, args: &Args) -> Result<Value> {
        let l = lattice_at(args.lattice.as_deref(), "--lattice")?;
        let atlas = match args.classes.as_deref() {
            Some(text) => {
                let classes = vector_list_arg(text, "--classes")?
                    .iter()
                    .map(|e| fibration_analysis(&l, e))
                    .collect::<Result<Vec<_>>>()?;
                FibrationAtlas::from_classes(l.dim(), classes)
            }
            None => scan_isotropic(&l, args.bound)?,
        };
        let report = exceptional_sublattice(&l, &atlas)?;
        let mut out = io::exceptional_json(&report);
        out["infinite_count"] = json!(atlas.infinite_classes().count());
        if l.dim() % 2 == 0 && l.dim() >= 4 {
            out["even_picard"] = io::even_picard_json(&even_picard_report(&l, &atlas)?);
        }
        if args.classes.is_none() {
            out["bound"] = json!(args.bound);
        }
        Ok(out)
    }
}
