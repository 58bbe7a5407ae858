/// All `k`-subsets of `1..=n` as sorted vectors, in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        // Rightmost position that can still advance.
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - (k - 1 - i)) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// All subsets of `1..=n` of size at most `k`, grouped by size.
pub fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..=k.min(n)).flat_map(|s| subsets_of_size(n, s)).collect()
}

pub fn mask_of(coords: &[usize]) -> u64 {
    coords.iter().fold(0u64, |m, &c| m | 1u64 << (c - 1))
}
