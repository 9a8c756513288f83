//! Circuits of the binary matroid spanned by a set of bitmasks: the minimal
//! index multisets whose masks XOR to zero. For spin-1/2 permutation masks
//! these are exactly the shortest identity-equivalent permutation products,
//! together with the trivial involution pairs {j, j}.

/// All minimal index subsets (of distinct indices) whose masks XOR to zero,
/// with sizes bounded by `max_size`, plus every involution pair `[j, j]`.
///
/// Returned multisets are sorted; no returned multiset contains another.
/// Enumeration cost grows combinatorially with the number of masks; callers
/// bound `max_size` (typically 2N).
pub fn gf2_circuits(masks: &[u64], max_size: usize) -> Vec<Vec<usize>> {
    assert!(masks.iter().all(|&m| m != 0), "masks must be nonzero");
    let m = masks.len();
    let mut out: Vec<Vec<usize>> = (0..m).map(|j| vec![j, j]).collect();
    if max_size < 2 || m < 2 {
        out.sort();
        return out;
    }

    // mask value -> indices carrying it, for the final-slot lookup.
    let mut by_mask: std::collections::HashMap<u64, Vec<usize>> = std::collections::HashMap::new();
    for (j, &mk) in masks.iter().enumerate() {
        by_mask.entry(mk).or_default().push(j);
    }

    let mut found: Vec<Vec<usize>> = Vec::new(); // distinct-index circuits, by ascending size
    let max_size = max_size.min(m);
    let mut stack: Vec<usize> = Vec::new();

    fn contains_circuit(cand: &[usize], found: &[Vec<usize>]) -> bool {
        'next: for f in found {
            if f.len() >= cand.len() {
                continue;
            }
            let mut it = cand.iter();
            for want in f {
                loop {
                    match it.next() {
                        Some(x) if x == want => break,
                        Some(x) if x > want => continue 'next,
                        Some(_) => continue,
                        None => continue 'next,
                    }
                }
            }
            return true;
        }
        false
    }

    for size in 2..=max_size {
        // Depth-first combinations i1 < i2 < ... < i_size with XOR pruning on
        // the last slot.
        fn rec(
            masks: &[u64],
            by_mask: &std::collections::HashMap<u64, Vec<usize>>,
            stack: &mut Vec<usize>,
            start: usize,
            remaining: usize,
            xor: u64,
            found: &mut Vec<Vec<usize>>,
        ) {
            if remaining == 1 {
                if let Some(cands) = by_mask.get(&xor) {
                    for &j in cands {
                        if j >= start {
                            stack.push(j);
                            if !contains_circuit(stack, found) {
                                found.push(stack.clone());
                            }
                            stack.pop();
                        }
                    }
                }
                return;
            }
            let m = masks.len();
            // need `remaining` more indices from [start, m)
            if m - start < remaining {
                return;
            }
            for j in start..m {
                if m - j < remaining {
                    break;
                }
                stack.push(j);
                if !contains_circuit(stack, found) {
                    rec(masks, by_mask, stack, j + 1, remaining - 1, xor ^ masks[j], found);
                }
                stack.pop();
            }
        }
        rec(masks, &by_mask, &mut stack, 0, size, 0, &mut found);
    }

    out.extend(found);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive oracle over all index subsets (distinct indices), checking
    /// XOR-zero and minimality directly.
    fn oracle(masks: &[u64], max_size: usize) -> Vec<Vec<usize>> {
        let m = masks.len();
        let mut deps: Vec<u32> = Vec::new();
        for bits in 1u32..(1 << m) {
            let size = bits.count_ones() as usize;
            if size < 2 || size > max_size {
                continue;
            }
            let xor = (0..m)
                .filter(|j| bits >> j & 1 == 1)
                .fold(0u64, |acc, j| acc ^ masks[j]);
            if xor == 0 {
                deps.push(bits);
            }
        }
        let mut out: Vec<Vec<usize>> = (0..m).map(|j| vec![j, j]).collect();
        for &d in &deps {
            let minimal = deps.iter().all(|&e| e == d || (e & d) != e);
            if minimal {
                out.push((0..m).filter(|j| d >> j & 1 == 1).collect());
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    #[test]
    fn triangle_circuit() {
        // 0b110, 0b011, 0b101: the three masks XOR to zero.
        let masks = [0b110, 0b011, 0b101];
        let got = gf2_circuits(&masks, 6);
        assert_eq!(got, oracle(&masks, 6));
        assert!(got.contains(&vec![0, 1, 2]));
        assert_eq!(got.len(), 4); // three self-pairs + the triangle
    }

    #[test]
    fn independent_masks_only_self_pairs() {
        let masks = [0b100, 0b010];
        let got = gf2_circuits(&masks, 4);
        assert_eq!(got, vec![vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn duplicate_masks() {
        let masks = [0b100, 0b100];
        let got = gf2_circuits(&masks, 4);
        assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn random_masks_match_oracle() {
        let mut rng = crate::numerics::rng::RandomStream::new(11);
        for trial in 0..30 {
            let m = 3 + (trial % 8);
            let masks: Vec<u64> = (0..m).map(|_| 1 + rng.below(63)).collect();
            let got = gf2_circuits(&masks, m);
            let want = oracle(&masks, m);
            assert_eq!(got, want, "masks {masks:?}");
        }
    }

    #[test]
    fn no_returned_set_contains_another() {
        let mut rng = crate::numerics::rng::RandomStream::new(5);
        let masks: Vec<u64> = (0..10).map(|_| 1 + rng.below(31)).collect();
        let got = gf2_circuits(&masks, 10);
        for a in &got {
            for b in &got {
                if a == b || a.len() >= b.len() {
                    continue;
                }
                // multiset containment of a in b
                let contained = a.iter().all(|x| {
                    b.iter().filter(|y| *y == x).count() >= a.iter().filter(|y| *y == x).count()
                });
                assert!(!contained, "{a:?} contained in {b:?}");
            }
        }
    }
}
