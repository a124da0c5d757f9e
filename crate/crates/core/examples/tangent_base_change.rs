use ramify::cli::{builtin_corpus, Context};
use ramify::tangent::{base_change_character, condition_checks, induced_tangent_matrix, residue_presentation};

fn main() -> ramify::Result<()> {
    let cfg = builtin_corpus();
    let ctx = Context::build(&cfg, None)?;
    for decl in &cfg.embeddings {
        let spec = &ctx.embeddings[&decl.name];
        let cond = condition_checks(spec)?;
        println!("{} ({}): {}", decl.name, decl.map, residue_presentation(spec).map(|r| r.name()).unwrap_or("ramified"));
        println!("  cond1 {} cond2 {} cond3 {}", cond.cond1, cond.cond2, cond.cond3);
        if let Ok(m) = induced_tangent_matrix(spec) {
            let res = spec.target.residue();
            for row in &m.rows {
                let cells: Vec<String> = row.iter().map(|c| res.render(c)).collect();
                println!("  [{}]", cells.join(", "));
            }
        }
        for ch in cfg.characters.iter().filter(|c| c.field == decl.source) {
            let bc = base_change_character(spec, &ctx.characters[&ch.name])?;
            println!("  {} = {}: j {} -> {}, invariant {}", ch.name, ch.a, bc.source.j, bc.target.j, bc.invariant());
        }
    }
    Ok(())
}
