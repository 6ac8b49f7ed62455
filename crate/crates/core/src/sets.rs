//! Element sets as sorted, duplicate-free index lists.

pub type ElemSet = Vec<usize>;

pub fn normalize(mut s: ElemSet) -> ElemSet {
    s.sort_unstable();
    s.dedup();
    s
}

pub fn mask(s: &[usize], n: usize) -> Vec<bool> {
    let mut m = vec![false; n];
    for &i in s {
        m[i] = true;
    }
    m
}

pub fn difference(a: &[usize], b: &[usize]) -> ElemSet {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() {
        if j == b.len() || a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else if a[i] == b[j] {
            i += 1;
            j += 1;
        } else {
            j += 1;
        }
    }
    out
}

pub fn intersection(a: &[usize], b: &[usize]) -> ElemSet {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    difference(a, b).is_empty()
}

pub fn symmetric_difference(a: &[usize], b: &[usize]) -> ElemSet {
    let mut out = difference(a, b);
    out.extend(difference(b, a));
    normalize(out)
}
