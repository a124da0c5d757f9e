use ramify::additive::{b1_from_beta, beta_map, characters_of, check_diagrams, extension_pairing};
use ramify::characters::artin_schreier_extension;
use ramify::cli::literal::parse_series;
use ramify::ramification::analyze;
use ramify::series_arith::{FiniteField, LocalField, ResidueField};

fn main() -> ramify::Result<()> {
    let f4 = ResidueField::new(FiniteField::new(2, vec![1, 1, 1])?, "b", Vec::new())?;
    let f3u = ResidueField::new(FiniteField::prime(3)?, "a", vec!["u".into()])?;
    for (res, gens) in [(f4, vec!["t^-1", "b*t^-1"]), (f3u, vec!["u*t^-1"])] {
        let k = LocalField::new(res, 64);
        let gens = gens.iter().map(|g| parse_series(&k, g)).collect::<ramify::Result<Vec<_>>>()?;
        let ext = artin_schreier_extension(&k, &gens)?;
        let rep = analyze(&ext.field)?;
        let res = k.residue();
        let d = check_diagrams(&rep.group, &rep.lower, false)?;
        println!("{}", ext.field.render_poly("X"));
        println!("  break i = {}", d.break_index);
        println!("  b1 = {}", d.b1.render(res));
        println!("  P  = {}", d.unit_map.render(res));
        println!("  squares commute: {} {}, rows exact: {}", d.right_square, d.left_square, d.rows_exact);
        let beta = beta_map(&rep.group, &rep.lower)?;
        let b1 = b1_from_beta(res, &beta)?;
        for chi in characters_of(res, &beta) {
            let pairing = extension_pairing(res, &b1, &beta, &chi)?;
            println!("  chi {chi:?} -> {}", res.render(&pairing.scalar));
        }
    }
    Ok(())
}
