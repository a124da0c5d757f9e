use ramify::characters::{compare_corab, conductor_and_rsw, Kind};
use ramify::cli::literal::parse_series;
use ramify::series_arith::{FiniteField, LocalField, ResidueField};

fn main() -> ramify::Result<()> {
    for p in [2u32, 3] {
        let k = LocalField::new(ResidueField::new(FiniteField::prime(p)?, "a", vec!["u".into()])?, 64);
        let res = k.residue();
        for a in ["t^-1", "t^-4", "u*t^-1", "u*t^-2", "u*t^-3"] {
            let a = parse_series(&k, a)?;
            let c = conductor_and_rsw(&a)?;
            let du: Vec<String> = c.rsw.du.iter().map(|g| res.render(g)).collect();
            println!(
                "p = {p}, a = {a}: best form {} ({}), j = {}, rsw = {} dt + [{}] du",
                c.best.a_red,
                c.best.kind.name(),
                c.j,
                res.render(&c.rsw.dt),
                du.join(", ")
            );
            if c.best.kind == Kind::NonFierce {
                let rep = compare_corab(&a)?;
                println!("    largest break r = {}, engine dt = {}, agree: {}", rep.r, res.render(&rep.engine_dt), rep.holds());
            }
        }
    }
    Ok(())
}
