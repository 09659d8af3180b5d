//! Small enumeration helpers shared across modules.

/// All k-element subsets of `0..n`, each sorted ascending, in
/// lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// All permutations of the given slice, in no particular order.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut scratch: Vec<T> = items.to_vec();
    fn heap<T: Clone>(k: usize, scratch: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if k <= 1 {
            out.push(scratch.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, scratch, out);
            if k % 2 == 0 {
                scratch.swap(i, k - 1);
            } else {
                scratch.swap(0, k - 1);
            }
        }
    }
    let len = scratch.len();
    if len == 0 {
        out.push(Vec::new());
    } else {
        heap(len, &mut scratch, &mut out);
    }
    out
}
