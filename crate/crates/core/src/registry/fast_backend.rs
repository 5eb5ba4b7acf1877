//! Word-size backend: everything mod `p^k` (k ≤ 4) in `u64` residues, with
//! scaled p-adic values where a division by `p` is involved. No bignums
//! anywhere, so sweeps over thousands of primes stay fast.

use super::eval::{Bound, Eval};
use crate::bernoulli::{bernoulli_mod_p, fermat_quotient};
use crate::error::ArithResult;
use crate::mhs::{mhs_mod, twisted_power_sum, Signature};
use crate::modular::{batch_inverses, prime_power, Residue};
use crate::padic::PadicScaled;
use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;

/// Caches shared by every check evaluated at one prime.
pub struct FastCtx {
    p: u64,
    /// `q_p(2)` at the highest precision any check consumes.
    q3: Residue,
    bern: RefCell<HashMap<u32, u64>>,
    h_memo: RefCell<HashMap<(Vec<i32>, Bound, u32), Residue>>,
    twisted_memo: RefCell<HashMap<(u32, u32), Residue>>,
    central3: OnceCell<Residue>,
    binom2p3: OnceCell<Vec<Residue>>,
    c2p_p4: OnceCell<Residue>,
}

impl FastCtx {
    /// Fails with `ModulusOverflow` when `p^4` exceeds the word size —
    /// the backend's admissibility envelope.
    pub fn new(p: u64) -> ArithResult<Self> {
        prime_power(p, 4)?;
        let q3 = fermat_quotient(2, p, 3)?;
        Ok(FastCtx {
            p,
            q3,
            bern: RefCell::new(HashMap::new()),
            h_memo: RefCell::new(HashMap::new()),
            twisted_memo: RefCell::new(HashMap::new()),
            central3: OnceCell::new(),
            binom2p3: OnceCell::new(),
            c2p_p4: OnceCell::new(),
        })
    }

    fn bound_n(&self, bound: Bound) -> u64 {
        match bound {
            Bound::PMinus1 => self.p - 1,
            Bound::Half => (self.p - 1) / 2,
        }
    }

    /// `C(2p,j) mod p^3` for all `0 <= j < p`, by the factor recurrence
    /// `C(2p,j) = C(2p,j-1) (2p-j+1)/j`; the single `p` in the numerator
    /// (at `j = 1`, factor `2p`) is tracked separately so the running unit
    /// stays invertible.
    fn binom2p_table(&self) -> &Vec<Residue> {
        self.binom2p3.get_or_init(|| {
            let p = self.p;
            let m3 = prime_power(p, 3).expect("envelope checked at construction");
            let inv = batch_inverses(p - 1, p, 3).expect("batch inverses below p");
            let mut table = Vec::with_capacity(p as usize);
            table.push(Residue::new(1, p, 3).unwrap());
            let mut unit: u64 = 1;
            for j in 1..p {
                let factor = if j == 1 { 2 } else { (2 * p - j + 1) % m3 };
                unit = ((unit as u128 * factor as u128) % m3 as u128) as u64;
                unit = ((unit as u128 * inv[(j - 1) as usize].value() as u128) % m3 as u128)
                    as u64;
                let value = ((p as u128 * unit as u128) % m3 as u128) as u64;
                table.push(Residue::new(value, p, 3).unwrap());
            }
            table
        })
    }

    fn c2p_p_mod_p4(&self) -> Residue {
        *self.c2p_p4.get_or_init(|| {
            // C(2p,p) = 2 C(2p-1,p-1) = 2 prod_{k=1}^{p-1} (p+k)/k.
            let p = self.p;
            let m4 = prime_power(p, 4).expect("envelope checked at construction");
            let inv = batch_inverses(p - 1, p, 4).expect("batch inverses below p");
            let mut acc: u64 = 2 % m4;
            for k in 1..p {
                acc = ((acc as u128 * (p + k) as u128) % m4 as u128) as u64;
                acc = ((acc as u128 * inv[(k - 1) as usize].value() as u128) % m4 as u128)
                    as u64;
            }
            Residue::new(acc, p, 4).unwrap()
        })
    }
}

/// One check's view of a [`FastCtx`]: fixes the modulus exponent, and every
/// produced value is a `Residue` mod `p^k`.
pub struct FastEval<'a> {
    pub ctx: &'a FastCtx,
    pub k: u32,
}

impl FastEval<'_> {
    fn res(&self, v: u64) -> Residue {
        Residue::new(v % prime_power(self.ctx.p, self.k).unwrap(), self.ctx.p, self.k).unwrap()
    }
}

impl Eval for FastEval<'_> {
    type V = Residue;

    fn prime(&self) -> u64 {
        self.ctx.p
    }

    fn rat(&self, num: i64, den: i64) -> Residue {
        let n = Residue::from_int(num, self.ctx.p, self.k).expect("modulus fits");
        let d = Residue::from_int(den, self.ctx.p, self.k)
            .expect("modulus fits")
            .inverse()
            .expect("catalog denominators are coprime to admissible primes");
        n * d
    }

    fn ppow(&self, e: u32) -> Residue {
        if e >= self.k {
            return self.res(0);
        }
        self.res(self.ctx.p.pow(e))
    }

    fn pow2(&self, e: i32) -> Residue {
        let mag = self.res(2).pow(e.unsigned_abs() as u64);
        if e >= 0 {
            mag
        } else {
            mag.inverse().expect("2 is a unit for odd p")
        }
    }

    fn q2(&self) -> Residue {
        assert!(self.k <= 3, "Fermat quotient cached to 3 digits");
        self.ctx.q3.reduce_k(self.k)
    }

    fn p_bern(&self, p_exp: u32, offset: u32) -> Residue {
        let idx = self.ctx.p - offset as u64;
        if idx % 2 == 1 && idx > 1 {
            return self.res(0);
        }
        // B is known mod p only; the leading p^p_exp must absorb the
        // missing digits at this modulus.
        assert!(
            p_exp + 1 >= self.k,
            "p^{p_exp} B pattern too imprecise for modulus exponent {}",
            self.k
        );
        let b = *self
            .ctx
            .bern
            .borrow_mut()
            .entry(offset)
            .or_insert_with(|| {
                bernoulli_mod_p(idx, self.ctx.p)
                    .expect("even index in Faulhaber range for admissible primes")
                    .value()
            });
        self.res(b) * self.ppow(p_exp)
    }

    fn h(&self, entries: &[i32], bound: Bound) -> Residue {
        let key = (entries.to_vec(), bound, self.k);
        if let Some(v) = self.ctx.h_memo.borrow().get(&key) {
            return *v;
        }
        let sig = Signature::new(entries.to_vec()).expect("registry signatures are valid");
        let v = mhs_mod(&sig, self.ctx.bound_n(bound), self.ctx.p, self.k)
            .expect("bound below p by construction");
        self.ctx.h_memo.borrow_mut().insert(key, v);
        v
    }

    fn twisted2(&self, r: u32) -> Residue {
        let key = (r, self.k);
        if let Some(v) = self.ctx.twisted_memo.borrow().get(&key) {
            return *v;
        }
        let two = self.res(2);
        let v = twisted_power_sum(two, r, self.ctx.p - 1).expect("bound below p");
        self.ctx.twisted_memo.borrow_mut().insert(key, v);
        v
    }

    fn inv_int(&self, m: i64) -> Residue {
        Residue::from_int(m, self.ctx.p, self.k)
            .expect("modulus fits")
            .inverse()
            .expect("argument coprime to p")
    }

    fn central_sum(&self) -> Residue {
        assert!(self.k <= 3, "central sum cached to 3 digits");
        self.ctx
            .central3
            .get_or_init(|| {
                let p = self.ctx.p;
                let inv = batch_inverses(p - 1, p, 3).expect("batch inverses below p");
                let inv4 = Residue::new(4, p, 3)
                    .unwrap()
                    .inverse()
                    .expect("4 is a unit for odd p");
                let mut acc = Residue::new(0, p, 3).unwrap();
                let mut inv4pow = Residue::new(1, p, 3).unwrap();
                let stream =
                    crate::padic::central_binomial_stream(p, 3).expect("p prime, modulus fits");
                for (idx, c) in stream.enumerate() {
                    let kk = idx as u64 + 1;
                    inv4pow = inv4pow * inv4;
                    let c3 = c.reduce_mod(3).expect("nonnegative valuation, 3 digits");
                    acc = acc + c3 * inv[(kk - 1) as usize] * inv4pow;
                }
                acc
            })
            .reduce_k(self.k)
    }

    fn pow4_pm1(&self) -> Residue {
        self.res(4).pow(self.ctx.p - 1)
    }

    fn inv4_pm1(&self) -> Residue {
        self.pow4_pm1().inverse().expect("4 is a unit for odd p")
    }

    fn binom_2p(&self, j: u64) -> Residue {
        assert!(j < self.ctx.p, "binom_2p is defined for 0 < j < p");
        assert!(self.k <= 3, "C(2p,j) cached to 3 digits");
        self.ctx.binom2p_table()[j as usize].reduce_k(self.k)
    }

    fn c2p_p(&self) -> Residue {
        assert!(self.k <= 4);
        self.ctx.c2p_p_mod_p4().reduce_k(self.k)
    }

    fn central_defect_quotient(&self) -> Residue {
        assert!(self.k <= 3, "one relative digit survives the division");
        let p = self.ctx.p;
        let two = Residue::new(2, p, 4).unwrap();
        let defect = PadicScaled::from_residue(two - self.ctx.c2p_p_mod_p4());
        let four_p = PadicScaled::from_parts(1, Residue::new(4, p, 3).unwrap());
        defect
            .try_div(&four_p)
            .expect("divisor is nonzero")
            .reduce_mod(self.k)
            .expect("defect has valuation 3, leaving k absolute digits")
    }

    fn reduce(&self, v: &Residue) -> ArithResult<Residue> {
        assert_eq!((v.p(), v.k()), (self.ctx.p, self.k), "value from foreign modulus");
        Ok(*v)
    }
}
