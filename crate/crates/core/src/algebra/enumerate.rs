use super::{first_non_associative_triple, FinSemigroup};
use crate::error::{Error, Result};

pub const MAX_ENUMERATION_ORDER: usize = 3;

/// Every associative table on `{0, .., order-1}` (labeled, not up to
/// isomorphism), in increasing order of the row-major table read as a base-`order`
/// number with the first cell most significant.
///
/// Names are `sg{order}#{k}` where `k` is the table's position among all
/// `order^(order²)` candidate tables.
pub fn enumerate_semigroups(order: usize) -> Result<Vec<FinSemigroup>> {
    if order == 0 || order > MAX_ENUMERATION_ORDER {
        return Err(Error::SizeLimitExceeded(format!(
            "enumeration of order {order} (supported 1..={MAX_ENUMERATION_ORDER})"
        )));
    }
    let cells = order * order;
    let total = order.pow(cells as u32);
    let mut out = Vec::new();
    let mut table = vec![0u8; cells];
    for k in 0..total {
        let mut x = k;
        for c in (0..cells).rev() {
            table[c] = (x % order) as u8;
            x /= order;
        }
        if first_non_associative_triple(order, &table).is_none() {
            out.push(FinSemigroup::from_flat(format!("sg{order}#{k}"), order, table.clone())?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent associativity test written against nested rows.
    fn associative(rows: &[Vec<usize>]) -> bool {
        let n = rows.len();
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| rows[rows[x][y]][z] == rows[x][rows[y][z]])))
    }

    fn independent_count(order: usize) -> usize {
        let mut count = 0;
        let mut rows = vec![vec![0usize; order]; order];
        let total = order.pow((order * order) as u32);
        for k in 0..total {
            let mut x = k;
            for row in rows.iter_mut() {
                for cell in row.iter_mut() {
                    *cell = x % order;
                    x /= order;
                }
            }
            if associative(&rows) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn counts_agree_with_independent_filter() {
        for order in 1..=3 {
            assert_eq!(enumerate_semigroups(order).unwrap().len(), independent_count(order));
        }
    }

    #[test]
    fn frozen_counts() {
        // Values produced by the brute-force filter above.
        assert_eq!(enumerate_semigroups(1).unwrap().len(), 1);
        assert_eq!(enumerate_semigroups(2).unwrap().len(), 8);
        assert_eq!(enumerate_semigroups(3).unwrap().len(), 113);
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(enumerate_semigroups(4), Err(Error::SizeLimitExceeded(_))));
        assert!(matches!(enumerate_semigroups(0), Err(Error::SizeLimitExceeded(_))));
    }
}
