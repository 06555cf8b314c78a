//! Prime-field scalars and dense polynomials over F_p.
//!
//! This is the innermost layer: everything here works with bare `u64`
//! residues mod p and `Vec<u64>` coefficient vectors (ascending degree,
//! trailing zeros trimmed).  The extension-field layer in `basefield` is
//! built from these primitives, as are the default-modulus search and the
//! small number-theoretic helpers (Lucas binomials for the obstruction
//! witness).

/// True iff `n` is a prime number.  Trial division; p stays tiny here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Additive inverse mod p.
#[inline]
pub fn neg(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

/// Multiplicative inverse mod p.  Panics on zero.
pub fn inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    // Extended Euclid on (a, p); p is prime so gcd = 1.
    let (mut r0, mut r1) = (a as i64 % p as i64, p as i64);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0.abs(), 1);
    let s = s0 * r0.signum();
    s.rem_euclid(p as i64) as u64
}

/// x^n mod p by square-and-multiply.
pub fn pow(mut x: u64, mut n: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    x %= p;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * x % p;
        }
        x = x * x % p;
        n >>= 1;
    }
    acc
}

/// Binomial coefficient C(n, k) mod p via Lucas' theorem.
pub fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        // C(nd, kd) for digits < p, computed directly.
        let mut digit = 1u64;
        for i in 0..kd {
            digit = digit * ((nd - i) % p) % p;
            digit = digit * inv((i + 1) % p, p) % p;
        }
        acc = acc * digit % p;
        n /= p;
        k /= p;
    }
    acc
}

/// Largest power of p that is ≤ n (as (exponent, value)).  Requires n ≥ 1.
pub fn largest_p_power_leq(n: u64, p: u64) -> (u32, u64) {
    assert!(n >= 1);
    let (mut l, mut v) = (0u32, 1u64);
    while v * p <= n {
        v *= p;
        l += 1;
    }
    (l, v)
}

// ---------------------------------------------------------------------------
// Dense polynomials over F_p: Vec<u64> ascending, trailing zeros trimmed.
// ---------------------------------------------------------------------------

/// Remove trailing zero coefficients in place.
pub fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree, with deg 0 = None (zero polynomial).
pub fn deg(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + y) % p;
    }
    trim(&mut out);
    out
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// Euclidean division: returns (quotient, remainder) with deg r < deg b.
/// Panics if b is zero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead_inv = inv(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let c = r.last().unwrap() * lead_inv % p;
        let k = r.len() - b.len();
        q[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * bj % p) % p;
        }
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    trim(&mut q);
    (q, r)
}

/// Monic gcd.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&mut x, p);
    x
}

/// Scale so the leading coefficient is 1 (no-op on zero).
pub fn make_monic(v: &mut [u64], p: u64) {
    if let Some(&lead) = v.last() {
        if lead != 1 {
            let c = inv(lead, p);
            for x in v.iter_mut() {
                *x = *x * c % p;
            }
        }
    }
}

/// a·b mod m.
pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    divrem(&mul(a, b, p), m, p).1
}

/// x^n mod m for a polynomial base.
pub fn powmod(x: &[u64], mut n: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = divrem(&[1], m, p).1;
    let mut base = divrem(x, m, p).1;
    while n > 0 {
        if n & 1 == 1 {
            acc = mulmod(&acc, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
        n >>= 1;
    }
    acc
}

/// Irreducibility over F_p by the Frobenius (Rabin) criterion:
/// f of degree n is irreducible iff x^(p^n) ≡ x (mod f) and
/// gcd(x^(p^(n/ℓ)) − x, f) = 1 for every prime ℓ | n.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = match deg(f) {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    // x^(p^k) mod f, computed by iterating the p-power map.
    let frob_iter = |k: usize| -> Vec<u64> {
        let mut acc = vec![0, 1]; // x
        for _ in 0..k {
            acc = powmod(&acc, p, f, p);
        }
        acc
    };
    for l in prime_divisors(n as u64) {
        let h = frob_iter(n / l as usize);
        // gcd(x^(p^(n/ℓ)) − x, f) must be trivial; note gcd(0, f) = f, so a
        // vanishing difference is caught by the same degree test.
        let hx = sub(&h, &[0, 1], p);
        if deg(&gcd(&hx, f, p)).is_some_and(|d| d > 0) {
            return false;
        }
    }
    let top = frob_iter(n);
    sub(&top, &[0, 1], p).is_empty()
}

/// Distinct prime divisors of n.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The lexicographically smallest monic irreducible polynomial of degree n
/// over F_p.  "Lexicographic" compares the coefficient tuple
/// (c_0, c_1, ..., c_{n-1}) of non-leading coefficients.
pub fn smallest_irreducible(n: usize, p: u64) -> Vec<u64> {
    assert!(n >= 1);
    // Counter over the n low coefficients, least significant digit = c_0.
    let mut low = vec![0u64; n];
    loop {
        let mut f = low.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // increment the tuple in lexicographic order: c_{n-1} varies fastest
        // would scan x^n, x^n + x^{n-1}, ... — we want the smallest *tuple*
        // under (c_0, c_1, ...) comparison, so the *last* coordinate varies
        // fastest.
        let mut i = n;
        loop {
            if i == 0 {
                unreachable!("no irreducible polynomial of degree {n} found");
            }
            i -= 1;
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
        }
    }
}

/// Evaluate at a scalar.
pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in f.iter().rev() {
        acc = (acc * x + c) % p;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(5));
        assert!(!is_prime(1));
        assert!(!is_prime(9));
    }

    #[test]
    fn scalar_inverse() {
        for p in [2u64, 3, 5, 7] {
            for a in 1..p {
                assert_eq!(a * inv(a, p) % p, 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn poly_divrem_roundtrip() {
        let p = 3;
        let a = vec![1, 0, 2, 1, 1]; // 1 + 2x² + x³ + x⁴
        let b = vec![2, 1, 1]; // 2 + x + x²
        let (q, r) = divrem(&a, &b, p);
        let back = add(&mul(&q, &b, p), &r, p);
        assert_eq!(back, a);
        assert!(r.len() < b.len());
    }

    #[test]
    fn gcd_of_multiples() {
        let p = 5;
        let g = vec![1, 1]; // x + 1
        let a = mul(&g, &[2, 0, 1], p);
        let b = mul(&g, &[3, 1], p);
        assert_eq!(gcd(&a, &b, p), g);
    }

    #[test]
    fn irreducibility_small_cases() {
        // x² + 1 over F_3 is irreducible (−1 is not a square mod 3)
        assert!(is_irreducible(&[1, 0, 1], 3));
        // x² + 1 = (x+2)(x+3) over F_5
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // x² + x + 1 over F_2
        assert!(is_irreducible(&[1, 1, 1], 2));
        // x² + x over F_2
        assert!(!is_irreducible(&[0, 1, 1], 2));
        // x³ + x + 1 over F_2
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
    }

    #[test]
    fn irreducible_count_degree_4_over_f2() {
        // Möbius count: (1/4)·Σ_{d|4} μ(d)·2^{4/d} = (16 − 4)/4 = 3.
        let mut count = 0;
        for bits in 0..16u64 {
            let f = vec![bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1, 1];
            if is_irreducible(&f, 2) {
                count += 1;
            }
        }
        assert_eq!(count, 3);
    }

    #[test]
    fn smallest_irreducible_examples() {
        // degree 2 over F_3: x², x²+1 → first irreducible is x²+1
        assert_eq!(smallest_irreducible(2, 3), vec![1, 0, 1]);
        // degree 1 over F_2: x
        assert_eq!(smallest_irreducible(1, 2), vec![0, 1]);
        // degree 2 over F_2: x²+x+1 is the only one
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        // every output is irreducible with the right degree
        for (n, p) in [(3, 3), (4, 3), (6, 2), (2, 5), (8, 3)] {
            let f = smallest_irreducible(n, p);
            assert_eq!(deg(&f), Some(n));
            assert!(is_irreducible(&f, p));
        }
    }

    #[test]
    fn lucas_binomials() {
        // C(4,3) = 4 ≡ 1 mod 3, C(6,3) = 20 ≡ 2 mod 3, C(2,1) = 2 mod 3
        assert_eq!(binom_mod_p(4, 3, 3), 1);
        assert_eq!(binom_mod_p(6, 3, 3), 2);
        assert_eq!(binom_mod_p(2, 1, 3), 2);
        // against direct computation for small n
        for n in 0..12u64 {
            for k in 0..=n {
                let mut exact = 1u128;
                for i in 0..k {
                    exact = exact * (n - i) as u128 / (i + 1) as u128;
                }
                for p in [2u64, 3, 5] {
                    assert_eq!(binom_mod_p(n, k, p), (exact % p as u128) as u64);
                }
            }
        }
    }

    #[test]
    fn largest_p_power() {
        assert_eq!(largest_p_power_leq(2, 3), (0, 1));
        assert_eq!(largest_p_power_leq(4, 3), (1, 3));
        assert_eq!(largest_p_power_leq(6, 3), (1, 3));
        assert_eq!(largest_p_power_leq(9, 3), (2, 9));
        assert_eq!(largest_p_power_leq(8, 2), (3, 8));
    }
}
