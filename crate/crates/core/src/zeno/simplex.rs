use crate::error::{Result, ZenoError};

pub const BRUTE_FORCE_MAX_N: usize = 40;

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

fn check(k: usize, bounds: &[usize]) -> Result<()> {
    if k == 0 {
        return Err(ZenoError::Parameter("k must be at least 1".into()));
    }
    if bounds.len() != k + 1 {
        return Err(ZenoError::Parameter(format!("N must have length k + 1 = {}, got {}", k + 1, bounds.len())));
    }
    Ok(())
}

/// |I_{n,k}(N)|: points i ∈ ℕ^k with i_l ≥ N_l and Σ i_l ≤ n − N_{k+1}, by C(m + k, k).
pub fn simplex_count(n: usize, k: usize, bounds: &[usize]) -> Result<u128> {
    check(k, bounds)?;
    let used: usize = bounds.iter().sum();
    if used > n {
        return Ok(0);
    }
    let m = (n - used) as u128;
    binomial(m + k as u128, k as u128).ok_or_else(|| ZenoError::Parameter("count overflows u128".into()))
}

pub fn simplex_count_brute(n: usize, k: usize, bounds: &[usize]) -> Result<u128> {
    check(k, bounds)?;
    if n > BRUTE_FORCE_MAX_N {
        return Err(ZenoError::Parameter(format!("brute force limited to n <= {BRUTE_FORCE_MAX_N}")));
    }
    fn rec(level: usize, k: usize, budget: isize, bounds: &[usize]) -> u128 {
        if level == k {
            return u128::from(budget >= 0);
        }
        let lo = bounds[level] as isize;
        (lo..=budget.max(lo - 1)).map(|i| rec(level + 1, k, budget - i, bounds)).sum()
    }
    let budget = n as isize - bounds[k] as isize;
    Ok(rec(0, k, budget, bounds))
}

/// |I_{n,k}(N)|·k!/n^k
pub fn simplex_ratio(n: usize, k: usize, bounds: &[usize]) -> Result<f64> {
    let count = simplex_count(n, k, bounds)? as f64;
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    Ok(count * fact / (n as f64).powi(k as i32))
}
