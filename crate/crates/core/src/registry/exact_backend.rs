//! Reference backend: every quantity as an exact `BigRational`, reduced mod
//! `p^k` only at the very end. Slow but assumption-free; the fast backend is
//! judged against it.

use super::eval::{Bound, Eval};
use crate::bernoulli::bernoulli_exact;
use crate::error::ArithResult;
use crate::exact::{binom_exact, rational_reduce_mod, BigRational};
use crate::mhs::{mhs_exact, twisted_power_sum_exact, Signature};
use crate::modular::Residue;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;

/// Caches shared by every check evaluated at one prime.
pub struct ExactCtx {
    p: u64,
    q2: OnceCell<BigRational>,
    central: OnceCell<BigRational>,
    c2p_p: OnceCell<BigRational>,
    h_memo: RefCell<HashMap<(Vec<i32>, Bound), BigRational>>,
    twisted_memo: RefCell<HashMap<u32, BigRational>>,
    /// Rolling `(j, C(2p,j))`, advanced as bodies scan `j` upward.
    binom2p: RefCell<(u64, BigInt)>,
}

impl ExactCtx {
    pub fn new(p: u64) -> Self {
        ExactCtx {
            p,
            q2: OnceCell::new(),
            central: OnceCell::new(),
            c2p_p: OnceCell::new(),
            h_memo: RefCell::new(HashMap::new()),
            twisted_memo: RefCell::new(HashMap::new()),
            binom2p: RefCell::new((0, BigInt::one())),
        }
    }

    fn bound_n(&self, bound: Bound) -> u64 {
        match bound {
            Bound::PMinus1 => self.p - 1,
            Bound::Half => (self.p - 1) / 2,
        }
    }
}

/// One check's view of an [`ExactCtx`]: fixes the modulus exponent used by
/// `reduce`.
pub struct ExactEval<'a> {
    pub ctx: &'a ExactCtx,
    pub k: u32,
}

impl Eval for ExactEval<'_> {
    type V = BigRational;

    fn prime(&self) -> u64 {
        self.ctx.p
    }

    fn rat(&self, num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn ppow(&self, e: u32) -> BigRational {
        BigRational::from(BigInt::from(self.ctx.p).pow(e))
    }

    fn pow2(&self, e: i32) -> BigRational {
        let mag = BigInt::from(2).pow(e.unsigned_abs());
        if e >= 0 {
            BigRational::from(mag)
        } else {
            BigRational::new(BigInt::one(), mag)
        }
    }

    fn q2(&self) -> BigRational {
        self.ctx
            .q2
            .get_or_init(|| {
                let p = self.ctx.p;
                let num = BigInt::from(2).pow((p - 1) as u32) - BigInt::one();
                BigRational::new(num, BigInt::from(p))
            })
            .clone()
    }

    fn p_bern(&self, p_exp: u32, offset: u32) -> BigRational {
        let idx = self.ctx.p - offset as u64;
        if idx % 2 == 1 && idx > 1 {
            return BigRational::zero();
        }
        let b = bernoulli_exact(idx).expect("index within cap for admissible primes");
        BigRational::from(BigInt::from(self.ctx.p).pow(p_exp)) * b
    }

    fn h(&self, entries: &[i32], bound: Bound) -> BigRational {
        let key = (entries.to_vec(), bound);
        if let Some(v) = self.ctx.h_memo.borrow().get(&key) {
            return v.clone();
        }
        let sig = Signature::new(entries.to_vec()).expect("registry signatures are valid");
        let v = mhs_exact(&sig, self.ctx.bound_n(bound));
        self.ctx.h_memo.borrow_mut().insert(key, v.clone());
        v
    }

    fn twisted2(&self, r: u32) -> BigRational {
        if let Some(v) = self.ctx.twisted_memo.borrow().get(&r) {
            return v.clone();
        }
        let v = twisted_power_sum_exact(2, r, self.ctx.p - 1);
        self.ctx.twisted_memo.borrow_mut().insert(r, v.clone());
        v
    }

    fn inv_int(&self, m: i64) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(m))
    }

    fn central_sum(&self) -> BigRational {
        self.ctx
            .central
            .get_or_init(|| {
                // C(2k,k) advanced multiplicatively; term k is C(2k,k)/(k 4^k).
                let mut acc = BigRational::zero();
                let mut pow4 = BigInt::one();
                let mut c = BigInt::one(); // C(0,0)
                for k in 1..self.ctx.p {
                    c = c * BigInt::from(2 * (2 * k - 1)) / BigInt::from(k);
                    pow4 *= BigInt::from(4);
                    acc += BigRational::new(c.clone(), BigInt::from(k) * &pow4);
                }
                acc
            })
            .clone()
    }

    fn pow4_pm1(&self) -> BigRational {
        BigRational::from(BigInt::from(4).pow((self.ctx.p - 1) as u32))
    }

    fn inv4_pm1(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(4).pow((self.ctx.p - 1) as u32))
    }

    fn binom_2p(&self, j: u64) -> BigRational {
        let p = self.ctx.p;
        assert!(j < p, "binom_2p is defined for 0 < j < p");
        let mut state = self.ctx.binom2p.borrow_mut();
        if state.0 > j {
            *state = (0, BigInt::one());
        }
        while state.0 < j {
            let next = state.0 + 1;
            let c = std::mem::take(&mut state.1);
            state.1 = c * BigInt::from(2 * p - next + 1) / BigInt::from(next);
            state.0 = next;
        }
        BigRational::from(state.1.clone())
    }

    fn c2p_p(&self) -> BigRational {
        self.ctx
            .c2p_p
            .get_or_init(|| BigRational::from(binom_exact(2 * self.ctx.p, self.ctx.p as i64)))
            .clone()
    }

    fn central_defect_quotient(&self) -> BigRational {
        (BigRational::from(BigInt::from(2)) - self.c2p_p())
            / BigRational::from(BigInt::from(4 * self.ctx.p))
    }

    fn reduce(&self, v: &BigRational) -> ArithResult<Residue> {
        rational_reduce_mod(v, self.ctx.p, self.k)
    }
}
