/// Residue class modulo a prime `p`, stored in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeResidue {
    p: u64,
    r: u64,
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeResidue {
    pub fn new(p: u64, value: i128) -> Self {
        let r = value.rem_euclid(p as i128) as u64;
        PrimeResidue { p, r }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn residue(&self) -> u64 {
        self.r
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = PrimeResidue::new(self.p, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Option<Self> {
        (self.r != 0).then(|| self.pow(self.p - 2))
    }
}

impl std::ops::Add for PrimeResidue {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        PrimeResidue::new(self.p, self.r as i128 + o.r as i128)
    }
}

impl std::ops::Sub for PrimeResidue {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        PrimeResidue::new(self.p, self.r as i128 - o.r as i128)
    }
}

impl std::ops::Neg for PrimeResidue {
    type Output = Self;
    fn neg(self) -> Self {
        PrimeResidue::new(self.p, -(self.r as i128))
    }
}

impl std::ops::Mul for PrimeResidue {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let r = (self.r as u128 * o.r as u128 % self.p as u128) as u64;
        PrimeResidue { p: self.p, r }
    }
}
