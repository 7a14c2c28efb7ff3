// Arithmetic, quadratic characters and μ in F_9 = F_3[x]/(x² + 1).
use fqconfig::ffield::{arith, ArithOp};
use fqconfig::Fq;

fn main() -> fqconfig::Result<()> {
    let f = Fq::new(9)?;
    println!("F_{} = F_{}^{}, modulus (low degree first) {:?}", f.q(), f.p(), f.e(), f.modulus());
    // the code 3 is x, so x·x = -1 = 2
    println!("x * x = {}", f.mul(3, 3));
    println!("x^-1 = {}", f.inv(3)?);
    println!("8 - 5 = {}", arith(&f, 8, 5, ArithOp::Sub)?);
    println!("squares: {:?}", f.qr_set());
    for t in f.elements() {
        print!("η({t}) = {:>2}  μ({t}) = {:>2}   ", f.quad_char(t), f.mu(t));
        if t % 3 == 2 {
            println!();
        }
    }
    match f.inv(0) {
        Err(e) => println!("0^-1: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
