//! Strictly increasing multi-indices in lexicographic order, the basis
//! convention for every exterior power in the crate.

/// All strictly increasing `k`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for l in i + 1..k {
                    cur[l] = cur[l - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Position of a sorted subset in the lexicographic enumeration of `subsets(n, |s|)`.
pub fn rank(n: usize, s: &[usize]) -> usize {
    let k = s.len();
    let mut r = 0;
    let mut prev = 0;
    for (pos, &v) in s.iter().enumerate() {
        for skipped in prev..v {
            r += binomial(n - skipped - 1, k - pos - 1);
        }
        prev = v + 1;
    }
    r
}

/// Sign and sorted union for `dx^a ∧ dx^b` with `a`, `b` sorted; `None` if they overlap.
pub fn merge(a: &[usize], b: &[usize]) -> Option<(f64, Vec<usize>)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((if inversions % 2 == 0 { 1.0 } else { -1.0 }, out))
}

/// Sign of the permutation sorting `seq` (entries distinct), or `None` on repeats.
pub fn sort_sign(seq: &[usize]) -> Option<(f64, Vec<usize>)> {
    let mut v = seq.to_vec();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic_and_ranked() {
        for n in 0..6 {
            for k in 0..=n {
                let s = subsets(n, k);
                assert_eq!(s.len(), binomial(n, k));
                for (i, idx) in s.iter().enumerate() {
                    assert_eq!(rank(n, idx), i);
                }
                assert!(s.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn merge_signs() {
        assert_eq!(merge(&[0], &[1]), Some((1.0, vec![0, 1])));
        assert_eq!(merge(&[1], &[0]), Some((-1.0, vec![0, 1])));
        assert_eq!(merge(&[0, 2], &[1]), Some((-1.0, vec![0, 1, 2])));
        assert_eq!(merge(&[0], &[0]), None);
        assert_eq!(sort_sign(&[2, 0, 1]), Some((1.0, vec![0, 1, 2])));
        assert_eq!(sort_sign(&[1, 0, 2]), Some((-1.0, vec![0, 1, 2])));
    }
}
