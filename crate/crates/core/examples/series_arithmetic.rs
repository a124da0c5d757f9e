use ramify::cli::literal::{parse_polynomial, parse_series};
use ramify::series_arith::{FiniteField, LocalField, PolyOverK, ResidueField};

fn main() -> ramify::Result<()> {
    let fq = FiniteField::prime(3)?;
    let k = LocalField::new(ResidueField::new(fq, "a", vec!["u".into()])?, 12);

    let a = parse_series(&k, "u*t^-2 + 1 + (u + 1)/u*t")?;
    let b = parse_series(&k, "t + 2*t^3")?;
    println!("a       = {a}");
    println!("b       = {b}");
    println!("a * b   = {}", a.mul(&b));
    println!("1 / b   = {}", b.inv()?);
    println!("ord a = {}, ord b = {}, ord ab = {}", a.valuation()?, b.valuation()?, a.mul(&b).valuation()?);
    println!("d/dt a  = {}", a.derivative_t());
    println!("d/du a  = {}", a.derivative_u(0));

    let f = PolyOverK::new(parse_polynomial(&k, "X", "X^3 + u*t*X + t^2")?);
    for s in f.newton_polygon()? {
        println!("slope {} with {} roots", s.root_valuation, s.length);
    }
    Ok(())
}
