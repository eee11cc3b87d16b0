use std::collections::HashMap;

/// Whether `(i, j, k)` passes the parity and triangle rules.
pub fn triangle_ok(i: usize, j: usize, k: usize) -> bool {
    (i + j + k) % 2 == 0 && i.abs_diff(j) <= k && k <= i + j
}

/// `F_{i,j,k} = (1/2) int_{-1}^{1} P_i P_j P_k dx`.
///
/// Kept sorted so `i <= j <= k`, the triple is walked down to `(0, 0, 0)`:
/// `k` drops by two while `k >= j - i + 2`, otherwise `j` and `k` drop
/// together. The ratios are multiplied back in on the way up.
pub fn f_triple(i: usize, j: usize, k: usize) -> f64 {
    if !triangle_ok(i, j, k) {
        return 0.0;
    }
    let mut t = [i, j, k];
    let mut value = 1.0;
    loop {
        t.sort_unstable();
        let [i, j, k] = t;
        let s = (i + j + k) / 2;
        let (sf, i_f, j_f, k_f) = (s as f64, i as f64, j as f64, k as f64);
        if k >= j - i + 2 {
            value *= (2.0 * sf - 1.0 - 2.0 * i_f) / (sf - i_f) * (2.0 * sf - 1.0 - 2.0 * j_f) / (sf - j_f)
                * (sf - k_f + 1.0)
                / (2.0 * sf - 2.0 * k_f + 1.0)
                * sf
                / (2.0 * sf + 1.0);
            t[2] -= 2;
        } else if i < j {
            value *= (2.0 * sf - 1.0 - 2.0 * i_f) / (sf - i_f) * sf / (2.0 * sf + 1.0);
            t[1] -= 1;
            t[2] -= 1;
        } else {
            // i = j = k = 0 is the only remaining case.
            return value;
        }
    }
}

/// Nonzero `F_{i,j,k}` with all indices `<= max_degree`, stored once per
/// sorted triple.
#[derive(Clone, Debug)]
pub struct TripleProductTensor {
    pub max_degree: usize,
    values: HashMap<(usize, usize, usize), f64>,
}

impl TripleProductTensor {
    pub fn new(max_degree: usize) -> Self {
        let mut values = HashMap::new();
        for i in 0..=max_degree {
            for j in i..=max_degree {
                for k in j..=max_degree.min(i + j) {
                    if triangle_ok(i, j, k) {
                        values.insert((i, j, k), f_triple(i, j, k));
                    }
                }
            }
        }
        Self { max_degree, values }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        let mut t = [i, j, k];
        t.sort_unstable();
        self.values.get(&(t[0], t[1], t[2])).copied().unwrap_or(0.0)
    }

    /// Stored (nonzero) entries.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
