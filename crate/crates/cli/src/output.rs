//! Human-readable rendering of the certificate registry and cascade traces.

use darboux_core::darboux::{Table1Report, ValidatedCondition};
use darboux_core::graded::CascadeState;

pub fn print_table1(report: &Table1Report) {
    println!("generators of the Darboux polynomials (exact verification):");
    for (i, cert) in report.certificates.iter().enumerate() {
        let status = if cert.residual_witness.is_zero() {
            "residual 0"
        } else {
            "RESIDUAL NONZERO"
        };
        println!("\nrow {} [{}]  cofactor {}  ({status})", i + 1, cert.label, cert.cofactor);
        println!("  f = {}", cert.f);
        for s in &cert.constraints.substitutions {
            if s.den == darboux_core::expr::Poly::one() {
                println!("  where {} = {}", s.var, s.num);
            } else {
                println!("  where {} = ({}) / ({})", s.var, s.num, s.den);
            }
        }
        for r in &cert.constraints.relations {
            println!("  on the locus {} = 0  (reduced in {})", r.poly, r.var);
        }
        for nv in &cert.constraints.nonvanishing {
            println!("  with {} != 0", nv);
        }
        if !cert.residual_witness.is_zero() {
            println!("  residual witness: {}", cert.residual_witness);
        }
    }
    println!("\ncondition adjudication for the conic-locus rows:");
    for adj in &report.adjudications {
        println!("\nrow {} [{}]:", adj.row, adj.label);
        let verdict = |ok: bool| if ok { "residual 0" } else { "residual NONZERO" };
        println!(
            "  table condition  {} = 0  -> {}",
            adj.table_condition,
            verdict(adj.table_residual.is_zero())
        );
        if !adj.table_residual.is_zero() {
            println!("    residual: {}", adj.table_residual);
        }
        println!(
            "  lemma condition  {} = 0  -> {}",
            adj.lemma_condition,
            verdict(adj.lemma_residual.is_zero())
        );
        if !adj.lemma_residual.is_zero() {
            println!("    residual: {}", adj.lemma_residual);
        }
        let name = match adj.validated {
            ValidatedCondition::Table => "the table condition",
            ValidatedCondition::Lemma => "the lemma condition",
            ValidatedCondition::Both => "both conditions",
            ValidatedCondition::Neither => "NEITHER condition",
        };
        println!("  validated: {name}");
    }
}

pub fn print_cascade(state: &CascadeState) {
    println!(
        "cascade at {} with cofactor {}:",
        state.params,
        state.cofactor()
    );
    println!("  F_0 (weight {}) = {}", state.total_weight, state.chain[0]);
    for stage in &state.stages {
        match stage.weight {
            Some(w) if !stage.obstructed => {
                println!("\nstage {} (solve for weight {w}):", stage.stage);
                println!("  rhs      = {}", stage.rhs);
                println!("  F_{}      = {}", stage.stage, stage.solution);
                if !stage.kernel_freedom.is_empty() {
                    println!(
                        "  kernel freedom: {}  (constants {})",
                        stage.kernel_freedom.join(", "),
                        stage.introduced.join(", ")
                    );
                }
            }
            Some(_) | None if !stage.obstructed => {
                println!("\nstage {} (consistency check): rhs = {}", stage.stage, stage.rhs);
            }
            _ => {}
        }
    }
    match &state.obstruction {
        Some(ob) => {
            let coords: Vec<String> = ob.coords.iter().map(|c| c.to_string()).collect();
            println!(
                "\nOBSTRUCTED at stage {}: cokernel components [{}]",
                ob.stage,
                coords.join(", ")
            );
            println!("no Darboux polynomial extends this top component with this cofactor");
        }
        None => {
            if !state.free_constants.is_empty() {
                println!(
                    "\nfree constants {} remained unforced and were set to zero",
                    state.free_constants.join(", ")
                );
            }
            println!(
                "\ncompleted: f = {}",
                state.darboux_polynomial().expect("completed cascade")
            );
        }
    }
}
