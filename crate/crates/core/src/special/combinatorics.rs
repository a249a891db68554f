use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Largest `n` accepted by the exact combinatorial routines.
pub const COMBINATORICS_CAP: usize = 400;

fn check_cap(what: &'static str, n: usize) -> Result<()> {
    if n > COMBINATORICS_CAP {
        return Err(Error::Capacity {
            what,
            value: n as u64,
            cap: COMBINATORICS_CAP as u64,
        });
    }
    Ok(())
}

/// Rows `0..=n_max` of Stirling numbers of the second kind; row `n` has
/// `n + 1` entries `s(n, 0..=n)`.
pub fn stirling2_table(n_max: usize) -> Result<Vec<Vec<BigUint>>> {
    check_cap("stirling2 n", n_max)?;
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
    rows.push(vec![BigUint::one()]);
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let mut row = vec![BigUint::zero(); n + 1];
        for r in 1..=n {
            // s(n, r) = r s(n-1, r) + s(n-1, r-1)
            let mut v = prev[r - 1].clone();
            if r < n {
                v += &prev[r] * r;
            }
            row[r] = v;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Stirling number of the second kind `s(n, r)`.
pub fn stirling2(n: usize, r: usize) -> Result<BigUint> {
    if r > n {
        return Err(Error::Domain(format!("stirling2 needs r <= n, got r={r}, n={n}")));
    }
    check_cap("stirling2 n", n)?;
    let mut row = vec![BigUint::one()];
    for i in 1..=n {
        let mut next = vec![BigUint::zero(); i + 1];
        for j in 1..=i {
            let mut v = row[j - 1].clone();
            if j < i {
                v += &row[j] * j;
            }
            next[j] = v;
        }
        row = next;
    }
    Ok(row.swap_remove(r))
}

/// Bell numbers `B(0..=m_max)` from the Bell triangle.
pub fn bell_numbers(m_max: usize) -> Result<Vec<BigUint>> {
    check_cap("bell m", m_max)?;
    let mut out = vec![BigUint::one()];
    let mut row = vec![BigUint::one()];
    for _ in 0..m_max {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().cloned().unwrap_or_else(BigUint::one));
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        out.push(next[0].clone());
        row = next;
    }
    Ok(out)
}

pub fn bell_number(m: usize) -> Result<BigUint> {
    Ok(bell_numbers(m)?.swap_remove(m))
}

/// Binomial coefficient `C(n, k)` (zero for `k > n`).
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Number of partitions of an n-set into exactly r blocks, by restricted
    /// growth strings.
    fn brute_partitions(n: usize) -> Vec<u64> {
        let mut counts = vec![0u64; n + 1];
        if n == 0 {
            counts[0] = 1;
            return counts;
        }
        let mut a = vec![0usize; n];
        loop {
            let blocks = a.iter().max().unwrap() + 1;
            counts[blocks] += 1;
            // next restricted growth string
            let mut i = n - 1;
            loop {
                let max_prefix = a[..i].iter().max().copied().unwrap_or(0);
                if i > 0 && a[i] <= max_prefix {
                    a[i] += 1;
                    for x in a.iter_mut().skip(i + 1) {
                        *x = 0;
                    }
                    break;
                }
                if i == 0 {
                    return counts;
                }
                i -= 1;
            }
        }
    }

    #[test]
    fn small_values() {
        assert_eq!(stirling2(4, 4).unwrap(), BigUint::from(1u32));
        assert_eq!(stirling2(3, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(stirling2(4, 2).unwrap(), BigUint::from(7u32));
        assert_eq!(stirling2(0, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(stirling2(5, 0).unwrap(), BigUint::zero());
        assert_eq!(bell_number(0).unwrap(), BigUint::from(1u32));
        assert_eq!(bell_number(4).unwrap(), BigUint::from(15u32));
        assert_eq!(bell_number(5).unwrap(), BigUint::from(52u32));
    }

    #[test]
    fn matches_partition_enumeration() {
        for n in 0..=9 {
            let counts = brute_partitions(n);
            for (r, &c) in counts.iter().enumerate() {
                assert_eq!(stirling2(n, r).unwrap(), BigUint::from(c), "s({n},{r})");
            }
            let bell: u64 = counts.iter().sum();
            assert_eq!(bell_number(n).unwrap(), BigUint::from(bell));
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(stirling2(3, 4), Err(Error::Domain(_))));
        assert!(matches!(stirling2(401, 1), Err(Error::Capacity { .. })));
        assert!(matches!(bell_number(401), Err(Error::Capacity { .. })));
        assert!(bell_number(400).is_ok());
    }

    #[test]
    fn table_agrees_with_single_values() {
        let t = stirling2_table(30).unwrap();
        for n in [0, 7, 19, 30] {
            for (r, v) in t[n].iter().enumerate() {
                assert_eq!(*v, stirling2(n, r).unwrap());
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(60, 30), "118264581564861424".parse().unwrap());
    }

    proptest! {
        #[test]
        fn stirling_rows_sum_to_bell(n in 0usize..=60) {
            let t = stirling2_table(n).unwrap();
            let total: BigUint = t[n].iter().sum();
            prop_assert_eq!(total, bell_number(n).unwrap());
        }
    }
}
