//! Linear algebra and polynomial root finding over a word-sized prime field.
//!
//! Used by the character table computation; the prime is below 2^62 so that
//! products fit in `u128`.

#[derive(Debug, Clone, Copy)]
pub struct Zp {
    pub p: u64,
}

impl Zp {
    pub fn new(p: u64) -> Zp {
        Zp { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "zero is not invertible");
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    /// The least primitive root.
    pub fn primitive_root(self) -> u64 {
        let primes = crate::gf::prime_divisors(self.p - 1);
        (2..self.p)
            .find(|&g| primes.iter().all(|&r| self.pow(g, (self.p - 1) / r) != 1))
            .unwrap_or(1)
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    // Miller-Rabin with bases that are deterministic below 2^64.
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let z = Zp::new(n);
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = z.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = z.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(z: Zp, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = z.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = z.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = z.sub(*x, z.mul(f, y));
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right nullspace `{u : K u = 0}` of a square matrix.
pub fn nullspace(z: Zp, k: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = k.len();
    let mut rows = k.to_vec();
    let pivots = rref(z, &mut rows);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut u = vec![0u64; n];
            u[f] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                u[pc] = z.neg(row[f]);
            }
            u
        })
        .collect()
}

/// Characteristic polynomial, lowest degree first, via Hessenberg reduction.
pub fn charpoly(z: Zp, a: &[Vec<u64>]) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = z.inv(h[m][m - 1]);
        for i in (m + 1)..n {
            let u = z.mul(h[i][m - 1], inv);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let t = z.mul(u, h[m][j]);
                h[i][j] = z.sub(h[i][j], t);
            }
            for row in h.iter_mut() {
                let t = z.mul(u, row[i]);
                row[m] = z.add(row[m], t);
            }
        }
    }
    // p_m(x) = (x - h_mm) p_{m-1} - Σ_i (Π h_{j,j-1}) h_{m-i,m} p_{m-i-1}
    let mut ps: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &ps[m - 1];
        let mut pm = vec![0u64; m + 1];
        for (d, &c) in prev.iter().enumerate() {
            pm[d + 1] = z.add(pm[d + 1], c);
            pm[d] = z.sub(pm[d], z.mul(h[m - 1][m - 1], c));
        }
        let mut t = 1u64;
        for i in 1..m {
            t = z.mul(t, h[m - i][m - i - 1]);
            let coef = z.mul(t, h[m - i - 1][m - 1]);
            if coef == 0 {
                continue;
            }
            for (d, &c) in ps[m - i - 1].iter().enumerate() {
                pm[d] = z.sub(pm[d], z.mul(coef, c));
            }
        }
        ps.push(pm);
    }
    ps.pop().expect("nonempty")
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(z: Zp, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let inv = z.inv(m[dm]);
    while r.len() > dm {
        let c = z.mul(*r.last().expect("nonempty"), inv);
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = z.sub(r[shift + i], z.mul(c, mi));
        }
        r.pop();
        r = trim(r);
        if r.len() <= dm {
            break;
        }
    }
    trim(r)
}

fn poly_mul(z: Zp, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = z.add(out[i + j], z.mul(x, y));
        }
    }
    trim(out)
}

fn poly_powmod(z: Zp, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(z, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(z, &poly_mul(z, &acc, &b), m);
        }
        b = poly_rem(z, &poly_mul(z, &b, &b), m);
        e >>= 1;
    }
    acc
}

fn poly_gcd(z: Zp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(z, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = z.inv(lead);
        for c in a.iter_mut() {
            *c = z.mul(*c, inv);
        }
    }
    a
}

fn poly_div_exact(z: Zp, a: &[u64], d: &[u64]) -> Vec<u64> {
    let dd = d.len() - 1;
    let mut r = a.to_vec();
    let inv = z.inv(d[dd]);
    let mut q = vec![0u64; a.len() - dd];
    for i in (0..q.len()).rev() {
        let c = z.mul(r[i + dd], inv);
        q[i] = c;
        for (j, &dj) in d.iter().enumerate() {
            r[i + j] = z.sub(r[i + j], z.mul(c, dj));
        }
    }
    trim(q)
}

/// Distinct roots of a nonzero polynomial in the prime field, ascending.
pub fn roots(z: Zp, f: &[u64]) -> Vec<u64> {
    let f = trim(f.to_vec());
    if f.len() <= 1 {
        return Vec::new();
    }
    if z.p < 64 {
        return (0..z.p)
            .filter(|&x| f.iter().rev().fold(0, |acc, &c| z.add(z.mul(acc, x), c)) == 0)
            .collect();
    }
    // gcd with x^p - x isolates the product of distinct linear factors
    let xp = poly_powmod(z, &[0, 1], z.p, &f);
    let mut xp_minus_x = xp;
    xp_minus_x.resize(xp_minus_x.len().max(2), 0);
    xp_minus_x[1] = z.sub(xp_minus_x[1], 1);
    let g = poly_gcd(z, &f, &trim(xp_minus_x));
    let mut out = Vec::new();
    split_linear(z, g, &mut out);
    out.sort_unstable();
    out
}

fn split_linear(z: Zp, g: Vec<u64>, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(z.mul(z.neg(g[0]), z.inv(g[1]))),
        _ => {
            for a in 0..z.p {
                let h = poly_powmod(z, &[a, 1], (z.p - 1) / 2, &g);
                let mut h1 = h;
                if h1.is_empty() {
                    h1.push(0);
                }
                h1[0] = z.sub(h1[0], 1);
                let d = poly_gcd(z, &g, &trim(h1));
                if d.len() > 1 && d.len() < g.len() {
                    let rest = poly_div_exact(z, &g, &d);
                    split_linear(z, d, out);
                    split_linear(z, rest, out);
                    return;
                }
            }
            unreachable!("equal-degree splitting always succeeds for odd p");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(z: Zp, f: &[u64], x: u64) -> u64 {
        f.iter().rev().fold(0, |acc, &c| z.add(z.mul(acc, x), c))
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
        assert!(is_prime_u64((1 << 61) - 1));
    }

    #[test]
    fn charpoly_matches_determinant_expansion() {
        let z = Zp::new(101);
        let a = vec![vec![2, 1, 0], vec![0, 3, 4], vec![5, 0, 6]];
        let cp = charpoly(z, &a);
        // det(xI - A) evaluated at several points by cofactor expansion
        for x in [0u64, 1, 7, 50] {
            let m: Vec<Vec<u64>> = (0..3)
                .map(|i| (0..3).map(|j| z.sub(if i == j { x } else { 0 }, a[i][j])).collect())
                .collect();
            let det = z.sub(
                z.add(
                    z.mul(m[0][0], z.sub(z.mul(m[1][1], m[2][2]), z.mul(m[1][2], m[2][1]))),
                    z.mul(m[0][2], z.sub(z.mul(m[1][0], m[2][1]), z.mul(m[1][1], m[2][0]))),
                ),
                z.mul(m[0][1], z.sub(z.mul(m[1][0], m[2][2]), z.mul(m[1][2], m[2][0]))),
            );
            assert_eq!(eval(z, &cp, x), det);
        }
    }

    #[test]
    fn roots_of_split_polynomial() {
        let z = Zp::new(1009);
        let mut f = vec![1u64];
        for r in [3u64, 3, 17, 500, 1008, 0] {
            f = poly_mul(z, &f, &[z.neg(r), 1]);
        }
        // an irreducible quadratic factor contributes no roots
        let nonresidue = (2..1009).find(|&a| z.pow(a, 504) == 1008).unwrap();
        f = poly_mul(z, &f, &[z.neg(nonresidue), 0, 1]);
        assert_eq!(roots(z, &f), vec![0, 3, 17, 500, 1008]);
    }

    #[test]
    fn nullspace_basis() {
        let z = Zp::new(7);
        let k = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 0]];
        let ns = nullspace(z, &k);
        assert_eq!(ns.len(), 2);
        for u in ns {
            for row in &k {
                let s = row.iter().zip(&u).fold(0, |acc, (&a, &b)| z.add(acc, z.mul(a, b)));
                assert_eq!(s, 0);
            }
        }
    }
}
