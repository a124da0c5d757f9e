use num_rational::Ratio;
use ramify::characters::artin_schreier_extension;
use ramify::cli::literal::parse_series;
use ramify::ramification::analyze;
use ramify::series_arith::{LocalField, ResidueField, INF};

fn show(v: &[Ratio<i64>]) -> String {
    v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ")
}

fn main() -> ramify::Result<()> {
    let k = LocalField::new(ResidueField::prime(2)?, 64);
    let gens = [parse_series(&k, "t^-1")?, parse_series(&k, "t^-3")?];
    let ext = artin_schreier_extension(&k, &gens)?;
    let rep = analyze(&ext.field)?;
    println!("compositum of x^2 + x = t^-1 and y^2 + y = t^-3");
    let i: Vec<String> = rep.i_values.iter().map(|&v| if v == INF { "inf".into() } else { v.to_string() }).collect();
    println!("i(sigma)        [{}]", i.join(", "));
    println!("lower jumps     [{}]", show(&rep.lower.indices()));
    println!("upper_cl jumps  [{}]", show(&rep.upper.indices()));
    println!("nonlog jumps    [{}]", show(&rep.nonlog.indices()));
    println!("different       {}", rep.different);
    println!("Hasse-Arf       {:?}", rep.hasse_arf);
    println!("all checks      {}", rep.checks_pass());
    Ok(())
}
