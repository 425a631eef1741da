use salemlat::dynamics::positive_vector;
use salemlat::io;
use salemlat::isometry::{char_poly_methods, finite_order, in_so_plus, validate_isometry};
use salemlat::registry::Named;
use salemlat::salem::{entropy_interval, is_salem, salem_decomposition_with_width, SalemDecomposition};
use salemlat::{Error, Result};
use serde_json::{json, Value};

use super::{lattice_at, missing, tolerance, Command};
use crate::args::Args;

pub struct IsometryCmd;
pub struct Salem;

fn with_entropy(d: &SalemDecomposition, args: &Args) -> Result<Value> {
    let tol = tolerance(args)?;
    let mut out = io::decomposition_json(d);
    out["entropy"] = io::interval_json(&entropy_interval(d, &tol)?);
    out["tol"] = io::rational(&tol);
    Ok(out)
}

impl Named for IsometryCmd {
    fn name(&self) -> &'static str {
        "isometry"
    }
}

impl Command for IsometryCmd {
    fn summary(&self) -> &'static str {
        "validate an isometry and decompose its characteristic polynomial"
    }

    fn run(&self, args: &Args) -> Result<Value> {
        let l = lattice_at(args.lattice.as_deref(), "--lattice")?;
        let path = args.matrix.as_deref().ok_or_else(|| missing("--matrix"))?;
        let source = path.display().to_string();
        let m = io::parse_matrix_file(&io::read_json(path)?, &source)?;
        let g = validate_isometry(&l, &m)?;
        let methods = char_poly_methods();
        let method = methods.get(&args.char_poly)?;
        let p = method.char_poly(g.matrix());
        let tol = tolerance(args)?;
        let d = salem_decomposition_with_width(&p, &tol)?;
        let mut out = json!({
            "char_poly": io::poly_json(&p),
            "char_poly_method": method.name(),
            "decomposition": with_entropy(&d, args)?,
            "det": g.det(),
            "finite_order": finite_order(&g),
        });
        if l.is_hyperbolic() {
            out["so_plus"] = json!(in_so_plus(&l, &g, &positive_vector(&l))?);
        }
        Ok(out)
    }
}

impl Named for Salem {
    fn name(&self) -> &'static str {
        "salem"
    }
}

impl Command for Salem {
    fn summary(&self) -> &'static str {
        "Salem test, cyclotomic/Salem split and entropy enclosure"
    }

    fn run(&self, args: &Args) -> Result<Value> {
        let text = args.poly.as_deref().ok_or_else(|| missing("--poly"))?;
        let p = io::parse_poly(&io::parse_json_str(text, "--poly")?, "--poly")?;
        let mut out = json!({"is_salem": is_salem(&p)?});
        let tol = tolerance(args)?;
        match salem_decomposition_with_width(&p, &tol) {
            Ok(d) => out["decomposition"] = with_entropy(&d, args)?,
            Err(e @ Error::NotSpectrallySalem(_)) => out["decomposition_error"] = json!(e.name()),
            Err(e) => return Err(e),
        }
        Ok(out)
    }
}
