use num_rational::Ratio;
use ramify::characters::artin_schreier_extension;
use ramify::cli::literal::parse_series;
use ramify::ramification::analyze;
use ramify::series_arith::{LocalField, ResidueField};

fn show(v: &[Ratio<i64>]) -> String {
    v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ")
}

fn main() -> ramify::Result<()> {
    for p in [2u32, 3] {
        let k = LocalField::new(ResidueField::prime(p)?, 64);
        for n in [1, 2, 3, 5].into_iter().filter(|n| n % p as i64 != 0) {
            let ext = artin_schreier_extension(&k, &[parse_series(&k, &format!("t^-{n}"))?])?;
            let rep = analyze(&ext.field)?;
            let largest = rep.largest.as_ref().expect("wild");
            println!("x^{p} - x = t^-{n}");
            println!("  uniformizer polynomial {}", ext.field.render_poly("X"));
            println!("  lower [{}]  upper_cl [{}]  nonlog [{}]", show(&rep.lower.indices()), show(&rep.upper.indices()), show(&rep.nonlog.indices()));
            println!("  r = {}, e = {}, different = {}, i = {}", largest.r, largest.e, largest.different, largest.i);
            for (x, phi, slope) in rep.phi.segments() {
                println!("  phi({x}) = {phi}, slope {slope}");
            }
        }
    }
    Ok(())
}
