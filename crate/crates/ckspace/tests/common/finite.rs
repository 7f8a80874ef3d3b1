//! Brute force over finite universes: subsets are bitmasks of `{0..k}`,
//! self-maps are value arrays, and `[A, B]` is `{f : f(A) ⊆ B}`.

pub struct Universe {
    pub k: usize,
    /// `images[f][s]` is the image of subset `s` under the `f`-th map.
    images: Vec<Vec<u32>>,
}

impl Universe {
    pub fn new(k: usize) -> Self {
        let count = k.pow(k as u32);
        let images = (0..count)
            .map(|mut code| {
                let f: Vec<usize> = (0..k)
                    .map(|_| {
                        let v = code % k;
                        code /= k;
                        v
                    })
                    .collect();
                (0..1u32 << k)
                    .map(|s| {
                        (0..k)
                            .filter(|&x| s & (1 << x) != 0)
                            .fold(0, |acc, x| acc | (1 << f[x]))
                    })
                    .collect()
            })
            .collect();
        Universe { k, images }
    }

    pub fn subsets(&self) -> std::ops::Range<u32> {
        0..1u32 << self.k
    }

    pub fn full(&self) -> u32 {
        (1u32 << self.k) - 1
    }

    pub fn maps(&self) -> usize {
        self.images.len()
    }

    pub fn inside(&self, f: usize, a: u32, b: u32) -> bool {
        self.images[f][a as usize] & !b == 0
    }
}

/// `[A1,B1] ∩ [A,B] = [A1∩A, B1∩B] ∩ [A1∖A, B1] ∩ [A∖A1, B]` pointwise for
/// every map and every tuple. Returns the number of checks or the first
/// counterexample.
pub fn check_split_identity(u: &Universe) -> Result<u64, String> {
    let mut checks = 0;
    let not = |s: u32| !s & u.full();
    for a1 in u.subsets() {
        for b1 in u.subsets() {
            for a in u.subsets() {
                for b in u.subsets() {
                    for f in 0..u.maps() {
                        let lhs = u.inside(f, a1, b1) && u.inside(f, a, b);
                        let rhs = u.inside(f, a1 & a, b1 & b)
                            && u.inside(f, a1 & not(a), b1)
                            && u.inside(f, a & not(a1), b);
                        if lhs != rhs {
                            return Err(format!(
                                "k={} f#{f} A1={a1:b} B1={b1:b} A={a:b} B={b:b}",
                                u.k
                            ));
                        }
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(checks)
}

/// For disjoint `A`, `B`: `[C,C] ∩ [A,B]` is empty exactly when
/// `C∩A ≠ ∅` and `C∩B = ∅`, provided `B ≠ ∅`; with `B = ∅` it is empty
/// exactly when `A ≠ ∅`. Returns (tuples with B ≠ ∅, all tuples).
pub fn check_fix_criterion(u: &Universe) -> Result<(u64, u64), String> {
    let (mut restricted, mut all) = (0, 0);
    for c in u.subsets() {
        for a in u.subsets() {
            for b in u.subsets().filter(|b| b & a == 0) {
                let empty = !(0..u.maps()).any(|f| u.inside(f, c, c) && u.inside(f, a, b));
                let criterion = c & a != 0 && c & b == 0;
                if b != 0 {
                    if empty != criterion {
                        return Err(format!("k={} C={c:b} A={a:b} B={b:b}", u.k));
                    }
                    restricted += 1;
                }
                if empty != (criterion || (a != 0 && b == 0)) {
                    return Err(format!("k={} C={c:b} A={a:b} B=∅", u.k));
                }
                all += 1;
            }
        }
    }
    Ok((restricted, all))
}
