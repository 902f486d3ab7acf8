/// Linear sieve of smallest prime factors on `1..=m`.
pub(crate) struct MultiplicativeSieve {
    spf: Vec<u32>,
}

impl MultiplicativeSieve {
    pub fn new(m: usize) -> Self {
        let mut spf = vec![0u32; m + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=m {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let ip = i * p as usize;
                if p > spf[i] || ip > m {
                    break;
                }
                spf[ip] = p;
            }
        }
        Self { spf }
    }

    fn len(&self) -> usize {
        self.spf.len() - 1
    }

    /// `mu(n)` for `n = 1..=m`, index `n - 1`.
    pub fn mobius(&self) -> Vec<i8> {
        let mut out = vec![0i8; self.len()];
        if !out.is_empty() {
            out[0] = 1;
        }
        for n in 2..=self.len() {
            let p = self.spf[n] as usize;
            let q = n / p;
            out[n - 1] = if q.is_multiple_of(p) { 0 } else { -out[q - 1] };
        }
        out
    }

    /// `lambda(n) = (-1)^{Omega(n)}`, index `n - 1`.
    pub fn liouville(&self) -> Vec<i8> {
        let mut out = vec![1i8; self.len()];
        for n in 2..=self.len() {
            let p = self.spf[n] as usize;
            out[n - 1] = -out[n / p - 1];
        }
        out
    }

    /// `Lambda(n)`, index `n - 1`.
    pub fn von_mangoldt(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        for n in 2..=self.len() {
            let p = self.spf[n] as usize;
            let mut q = n;
            while q % p == 0 {
                q /= p;
            }
            if q == 1 {
                out[n - 1] = (p as f64).ln();
            }
        }
        out
    }
}
