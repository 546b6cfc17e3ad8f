//! Levenshtein distance and longest common subsequence.

/// Unit-cost insertions, deletions and substitutions.
///
/// Bit-parallel over 64-row blocks of the shorter string, carrying the
/// horizontal delta from block to block.
pub fn edit_distance(x: &[u8], y: &[u8]) -> usize {
    let (x, y) = if x.len() < y.len() { (y, x) } else { (x, y) };
    let m = y.len();
    if m == 0 {
        return x.len();
    }
    let blocks = m.div_ceil(64);
    let mut peq = vec![0u64; 256 * blocks];
    for (j, &c) in y.iter().enumerate() {
        peq[c as usize * blocks + j / 64] |= 1 << (j % 64);
    }
    let last = 1u64 << ((m - 1) % 64);
    let mut pv = vec![!0u64; blocks];
    let mut mv = vec![0u64; blocks];
    let mut score = m as isize;
    for &c in x {
        let eqs = &peq[c as usize * blocks..(c as usize + 1) * blocks];
        let mut hin: i8 = 1;
        for b in 0..blocks {
            let high = if b + 1 == blocks { last } else { 1 << 63 };
            let (p, n) = (pv[b], mv[b]);
            let neg = u64::from(hin < 0);
            let xv = eqs[b] | n;
            let eq = eqs[b] | neg;
            let xh = ((eq & p).wrapping_add(p) ^ p) | eq;
            let mut ph = n | !(xh | p);
            let mut mh = p & xh;
            let hout = if ph & high != 0 {
                1
            } else if mh & high != 0 {
                -1
            } else {
                0
            };
            ph = (ph << 1) | u64::from(hin > 0);
            mh = (mh << 1) | neg;
            pv[b] = mh | !(xv | ph);
            mv[b] = ph & xv;
            hin = hout;
        }
        score += hin as isize;
    }
    score as usize
}

pub fn lcs(x: &[u8], y: &[u8]) -> usize {
    let mut prev = vec![0usize; y.len() + 1];
    let mut cur = vec![0usize; y.len() + 1];
    for &a in x {
        for (j, &b) in y.iter().enumerate() {
            cur[j + 1] = if a == b { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[y.len()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(t: &str) -> Vec<u8> {
        t.bytes().map(|c| c - b'0').collect()
    }

    /// Full-table recursion, written independently of the rolling rows.
    fn naive_ed(x: &[u8], y: &[u8]) -> usize {
        let mut t = vec![vec![0usize; y.len() + 1]; x.len() + 1];
        for i in 0..=x.len() {
            for j in 0..=y.len() {
                t[i][j] = if i == 0 {
                    j
                } else if j == 0 {
                    i
                } else {
                    (t[i - 1][j - 1] + usize::from(x[i - 1] != y[j - 1]))
                        .min(t[i - 1][j] + 1)
                        .min(t[i][j - 1] + 1)
                };
            }
        }
        t[x.len()][y.len()]
    }

    #[test]
    fn hand_examples() {
        assert_eq!(edit_distance(&s("0101"), &s("101")), 1);
        assert_eq!(edit_distance(&s("0101"), &s("0101")), 0);
        assert_eq!(edit_distance(&s(""), &s("011")), 3);
        assert_eq!(lcs(&s("0011"), &s("0101")), 3);
        assert_eq!(lcs(&s("0110"), &s("0110")), 4);
        assert_eq!(lcs(&s(""), &s("1")), 0);
    }

    #[test]
    fn block_boundaries() {
        let mut r = crate::seed::rng(3);
        for len in [63, 64, 65, 127, 128, 129, 192] {
            for other in [0, 1, len - 1, len, len + 7] {
                let x: Vec<u8> = (0..len).map(|_| rand::Rng::gen_range(&mut r, 0..2)).collect();
                let y: Vec<u8> = (0..other).map(|_| rand::Rng::gen_range(&mut r, 0..2)).collect();
                assert_eq!(edit_distance(&x, &y), naive_ed(&x, &y), "{len} {other}");
            }
        }
    }

    proptest! {
        #[test]
        fn matches_full_table(x in proptest::collection::vec(0u8..2, 0..24), y in proptest::collection::vec(0u8..2, 0..24)) {
            prop_assert_eq!(edit_distance(&x, &y), naive_ed(&x, &y));
            prop_assert_eq!(edit_distance(&x, &y), edit_distance(&y, &x));
            let l = lcs(&x, &y);
            prop_assert!(x.len().max(y.len()) - l <= edit_distance(&x, &y));
            prop_assert!(edit_distance(&x, &y) <= x.len() + y.len() - 2 * l);
        }

        #[test]
        fn single_flip_moves_distance_by_at_most_one(z in proptest::collection::vec(0u8..2, 1..40), x in proptest::collection::vec(0u8..2, 1..40), pos in any::<usize>()) {
            let mut xh = x.clone();
            let i = pos % x.len();
            xh[i] ^= 1;
            let (a, b) = (edit_distance(&z, &x), edit_distance(&z, &xh));
            prop_assert!(a.abs_diff(b) <= 1);
        }

        #[test]
        fn multi_block(x in proptest::collection::vec(0u8..3, 0..300), y in proptest::collection::vec(0u8..3, 0..300)) {
            prop_assert_eq!(edit_distance(&x, &y), naive_ed(&x, &y));
        }

        #[test]
        fn triangle(x in proptest::collection::vec(0u8..2, 0..20), y in proptest::collection::vec(0u8..2, 0..20), z in proptest::collection::vec(0u8..2, 0..20)) {
            prop_assert!(edit_distance(&x, &z) <= edit_distance(&x, &y) + edit_distance(&y, &z));
        }
    }
}
