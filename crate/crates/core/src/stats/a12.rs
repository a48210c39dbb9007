/// Vargha-Delaney A12: probability that a value drawn from `m` is larger than
/// one drawn from `n`, ties counting one half.
pub fn a12(m: &[f64], n: &[f64]) -> f64 {
    if m.is_empty() || n.is_empty() {
        return f64::NAN;
    }
    let mut score = 0.0;
    for x in m {
        for y in n {
            if x > y {
                score += 1.0;
            } else if x == y {
                score += 0.5;
            }
        }
    }
    score / (m.len() * n.len()) as f64
}

/// Effect magnitude regardless of direction: `max(A12(m,n), A12(n,m))`.
pub fn a12_magnitude(m: &[f64], n: &[f64]) -> f64 {
    let a = a12(m, n);
    a.max(1.0 - a)
}
