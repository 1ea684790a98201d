use cartanlab::linalg::SquareMatrix;
use cartanlab::samples;

fn main() {
    let a = samples::t3_first().to_float::<f64>();
    // Variant 1: rescale only.
    let mut p = SquareMatrix::<f64>::identity(3);
    let mut log_scale = 0.0;
    for k in 0..10_000usize {
        p = a.mul(&p);
        let s = p.max_norm();
        p = p.scale(1.0 / s);
        log_scale += s.ln();
        if (k + 1) % 2048 == 0 || k + 1 == 10_000 {
            let est = (log_scale + p.operator_norm().ln()) / (k + 1) as f64;
            println!("rescale-only n={} est={est:.9}", k + 1);
        }
    }
    // Variant 2: with periodic QR.
    let mut p = SquareMatrix::<f64>::identity(3);
    let mut log_scale = 0.0;
    for k in 0..10_000usize {
        p = a.mul(&p);
        let s = p.max_norm();
        p = p.scale(1.0 / s);
        log_scale += s.ln();
        if (k + 1) % 64 == 0 {
            let before = p.operator_norm();
            if let Ok((_, r)) = p.qr() {
                let after = r.operator_norm();
                if (k + 1) <= 256 {
                    println!("  qr at {}: norm before {before:.12} after {after:.12}", k + 1);
                }
                p = r;
            }
        }
        if (k + 1) % 2048 == 0 || k + 1 == 10_000 {
            let est = (log_scale + p.operator_norm().ln()) / (k + 1) as f64;
            println!("with-qr n={} est={est:.9}", k + 1);
        }
    }
    println!("target {:.9}", 5.048917339522305f64.ln());
}
