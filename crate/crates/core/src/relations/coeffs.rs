use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncseries::{tau, Index};
use crate::scalars::{Rational, Scalar};

type Mat = Vec<Vec<Rational>>;

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (n, m, k) = (a.len(), b[0].len(), b.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = Rational::zero();
                    for l in 0..k {
                        if !a[i][l].is_zero() && !b[l][j].is_zero() {
                            s += &(a[i][l].clone() * &b[l][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn matpow(a: &Mat, e: u32) -> Mat {
    (0..e).fold(identity(a.len()), |acc, _| matmul(&acc, a))
}

fn row_mat_col(row: &[Rational], m: &Mat, col: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (i, r) in row.iter().enumerate() {
        for (j, c) in col.iter().enumerate() {
            s += &(r.clone() * &m[i][j] * c);
        }
    }
    s
}

fn ints(rows: &[&[i64]]) -> Mat {
    rows.iter().map(|r| r.iter().map(|v| Rational::from_int(*v)).collect()).collect()
}

/// `(0,1,0) . u v^(k1-1) u v^(k2-1) ... u v^(km-1) . (1,1,N)^t`.
pub fn g_val(k: &Index, n: &Rational) -> Rational {
    let one = Rational::one();
    let z = Rational::zero();
    let nm1 = n.clone() - &one;
    let u = vec![
        vec![nm1.clone(), one.clone(), -one.clone()],
        vec![one.clone(), nm1.clone(), -one.clone()],
        vec![z.clone(), z.clone(), z.clone()],
    ];
    let v = vec![vec![nm1.clone(), -one.clone(), one.clone()], vec![z.clone(), z.clone(), z.clone()], vec![one.clone(), -one.clone(), nm1]];
    let mut m = identity(3);
    for &ki in k.parts() {
        m = matmul(&matmul(&m, &u), &matpow(&v, ki - 1));
    }
    row_mat_col(&[z.clone(), one.clone(), z], &m, &[one.clone(), one, n.clone()])
}

/// Equal-depth compositions `(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionPair {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
}

impl CompositionPair {
    pub fn new(p: Vec<u32>, q: Vec<u32>) -> Result<Self> {
        if p.is_empty() || p.len() != q.len() || p.iter().chain(&q).any(|v| *v == 0) {
            return Err(Error::Invalid(format!("{p:?}, {q:?} is not a pair of equal-depth compositions")));
        }
        Ok(CompositionPair { p, q })
    }

    pub fn weight(&self) -> usize {
        self.p.iter().chain(&self.q).map(|v| *v as usize).sum()
    }

    /// `(q*, p*)`: both reversed and swapped.
    pub fn dual(&self) -> Self {
        CompositionPair { p: self.q.iter().rev().copied().collect(), q: self.p.iter().rev().copied().collect() }
    }

    pub fn tau(&self) -> Index {
        tau(&self.p, &self.q).expect("positive entries")
    }

    /// All pairs of total weight `w`.
    pub fn of_weight(w: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for k in 1..=w / 2 {
            for wp in k..=w - k {
                for p in Index::compositions(wp).into_iter().filter(|c| c.dp() == k) {
                    for q in Index::compositions(w - wp).into_iter().filter(|c| c.dp() == k) {
                        out.push(CompositionPair { p: p.parts().to_vec(), q: q.parts().to_vec() });
                    }
                }
            }
        }
        out
    }
}

/// `-(7,7,7,7) . x^p1 y x^q1 y ... x^pk y x^qk y . (27,7,14,0)^t`.
pub fn w_val(pq: &CompositionPair) -> Rational {
    let x = ints(&[&[-14, 0, 0, 0], &[0, -6, 0, 0], &[0, 0, -12, 0], &[0, 0, 0, 0]]);
    let r = Rational::ratio;
    let y = vec![
        vec![r(5, 14), r(-9, 14), r(-9, 14), r(27, 7)],
        vec![r(-1, 6), r(-1, 2), r(1, 2), r(1, 1)],
        vec![r(-1, 3), r(1, 1), r(0, 1), r(2, 1)],
        vec![r(1, 7), r(1, 7), r(1, 7), r(1, 7)],
    ];
    let mut m = identity(4);
    for (a, b) in pq.p.iter().zip(&pq.q) {
        m = matmul(&matmul(&matmul(&matmul(&m, &matpow(&x, *a)), &y), &matpow(&x, *b)), &y);
    }
    let seven = vec![Rational::from_int(7); 4];
    let tail: Vec<Rational> = [27, 7, 14, 0].iter().map(|v| Rational::from_int(*v)).collect();
    -row_mat_col(&seven, &m, &tail)
}

/// Member of `I_{n,k}`: `q_i >= 1`, `p_i + r_i >= 1`, `p_1 >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexTriple {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
    pub r: Vec<u32>,
}

fn wt(v: &[u32]) -> usize {
    v.iter().map(|x| *x as usize).sum()
}

impl IndexTriple {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn weight(&self) -> usize {
        wt(&self.p) + wt(&self.q) + wt(&self.r)
    }

    pub fn is_member(&self, n: usize, k: usize) -> bool {
        let k_ok = self.p.len() == k && self.q.len() == k && self.r.len() == k && k >= 1;
        k_ok && self.weight() == n
            && self.q.iter().all(|v| *v >= 1)
            && self.p.iter().zip(&self.r).all(|(a, b)| a + b >= 1)
            && self.p[0] >= 1
    }

    pub fn p_plus_r(&self) -> Vec<u32> {
        self.p.iter().zip(&self.r).map(|(a, b)| a + b).collect()
    }

    /// `tau(p + r, q)`.
    pub fn index(&self) -> Index {
        tau(&self.p_plus_r(), &self.q).expect("members have positive parts")
    }
}

/// All of `I_{n,k}`, each triple once.
pub fn enum_i(n: usize, k: usize) -> Vec<IndexTriple> {
    fn rec(i: usize, k: usize, rem: usize, cur: &mut IndexTriple, out: &mut Vec<IndexTriple>) {
        if i == k {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // every later slot needs at least 2
        let reserve = 2 * (k - i - 1);
        if rem < 2 + reserve {
            return;
        }
        for qi in 1..=rem - reserve - 1 {
            for pi in 0..=rem - reserve - qi {
                if i == 0 && pi == 0 {
                    continue;
                }
                for ri in 0..=rem - reserve - qi - pi {
                    if pi + ri == 0 {
                        continue;
                    }
                    cur.p.push(pi as u32);
                    cur.q.push(qi as u32);
                    cur.r.push(ri as u32);
                    rec(i + 1, k, rem - qi - pi - ri, cur, out);
                    cur.p.pop();
                    cur.q.pop();
                    cur.r.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    if k >= 1 {
        rec(0, k, n, &mut IndexTriple { p: vec![], q: vec![], r: vec![] }, &mut out);
    }
    out
}

/// `prod_i C(a_i + b_i, b_i)`.
pub fn multi_binom(a: &[u32], b: &[u32]) -> Result<BigInt> {
    if a.len() != b.len() {
        return Err(Error::Invalid(format!("lengths differ: {} vs {}", a.len(), b.len())));
    }
    Ok(a.iter().zip(b).map(|(x, y)| num_integer::binomial(BigInt::from(x + y), BigInt::from(*y))).product())
}

/// Readings of the degenerate factor in the single-triple and paired sums
/// of relation (C). See the crate README for the calibration record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CConvention {
    /// `F_n = (x-1)^n + (x+1)^n` in both sums, paired sum negated.
    #[default]
    Calibrated,
    /// `F_n = (x-1)^n - (x+1)^n` everywhere, so triples with `wt(r) = 0` vanish.
    Literal,
    /// As `Literal`, except `F_0 = 2` inside the paired factor.
    Degenerate,
}

impl CConvention {
    pub const ALL: [CConvention; 3] = [CConvention::Calibrated, CConvention::Literal, CConvention::Degenerate];

    pub fn name(self) -> &'static str {
        match self {
            CConvention::Calibrated => "calibrated",
            CConvention::Literal => "literal",
            CConvention::Degenerate => "degenerate",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::Invalid(format!("unknown convention {s:?}")))
    }

    /// Factor used in the single sum.
    pub fn f_single(self, n: usize, x: &Rational) -> Rational {
        match self {
            CConvention::Calibrated => f_plus(n, x),
            _ => f_minus(n, x),
        }
    }

    /// Factor used in the cancelled paired term.
    pub fn f_pair(self, n: usize, x: &Rational) -> Rational {
        match self {
            CConvention::Calibrated => f_plus(n, x),
            CConvention::Literal => f_minus(n, x),
            CConvention::Degenerate if n == 0 => Rational::from_int(2),
            CConvention::Degenerate => f_minus(n, x),
        }
    }

    /// Overall sign of the paired sum.
    pub fn pair_sign(self) -> i64 {
        match self {
            CConvention::Calibrated => -1,
            _ => 1,
        }
    }
}

fn pw(x: &Rational, n: usize) -> Rational {
    x.powi(n as i32).expect("nonnegative power")
}

/// `(x-1)^n + (x+1)^n`.
pub fn f_plus(n: usize, x: &Rational) -> Rational {
    let one = Rational::one();
    pw(&(x.clone() - &one), n) + pw(&(x.clone() + &one), n)
}

/// `(x-1)^n - (x+1)^n`.
pub fn f_minus(n: usize, x: &Rational) -> Rational {
    let one = Rational::one();
    pw(&(x.clone() - &one), n) - pw(&(x.clone() + &one), n)
}

/// `x^(wt q - k) ((x-1)^p1 - (x+1)^p1) prod_{a>=2} ((x-1)^(pa+1) + (x+1)^(pa+1))`.
pub fn a_prime(t: &IndexTriple, x: &Rational) -> Result<Rational> {
    let k = t.len() as i32;
    let mut v = x.powi(wt(&t.q) as i32 - k)?;
    v = v * f_minus(t.p[0] as usize, x);
    for pa in &t.p[1..] {
        v = v * f_plus(*pa as usize + 1, x);
    }
    Ok(v)
}

pub fn a_val(t: &IndexTriple, x: &Rational, conv: CConvention) -> Result<Rational> {
    Ok(a_prime(t, x)? * conv.f_single(wt(&t.r), x))
}

/// The paired coefficient in cancelled form `A'(t1) A'(t2) F(wt(r + u))`.
pub fn b_val(t1: &IndexTriple, t2: &IndexTriple, x: &Rational, conv: CConvention) -> Result<Rational> {
    Ok(a_prime(t1, x)? * a_prime(t2, x)? * conv.f_pair(wt(&t1.r) + wt(&t2.r), x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    fn t(p: &[u32], q: &[u32], r: &[u32]) -> IndexTriple {
        IndexTriple { p: p.to_vec(), q: q.to_vec(), r: r.to_vec() }
    }

    #[test]
    fn g_of_two() {
        for n in 2..12i64 {
            let nn = Rational::from_int(n);
            assert_eq!(g_val(&idx("2"), &nn), Rational::from_int(-(n - 1) * (n - 2)));
        }
        assert_eq!(g_val(&idx("2"), &Rational::from_int(3)), Rational::from_int(-2));
    }

    #[test]
    fn g_is_integral() {
        for n in 3..=10 {
            for k in Index::admissible_up_to(6) {
                assert!(g_val(&k, &Rational::from_int(n)).is_integer(), "{k} at N={n}");
            }
        }
    }

    #[test]
    fn w_symmetry_and_first_value() {
        for w in 2..=8 {
            for pq in CompositionPair::of_weight(w) {
                assert_eq!(w_val(&pq), w_val(&pq.dual()), "{pq:?}");
            }
        }
        // the h^2 coefficient of the left side is -42 and mu^2 = -24 zeta(2), so w = 24 * (-42)
        let one = CompositionPair::new(vec![1], vec![1]).unwrap();
        assert_eq!(w_val(&one), Rational::from_int(-1008));
    }

    #[test]
    fn pair_counts() {
        assert_eq!(CompositionPair::of_weight(2).len(), 1);
        // depth 1: 3 ways to split 4; depth 2: one pair
        assert_eq!(CompositionPair::of_weight(4).len(), 4);
        assert!(CompositionPair::new(vec![1], vec![0]).is_err());
        assert!(CompositionPair::new(vec![1, 2], vec![1]).is_err());
    }

    #[test]
    fn triples() {
        assert_eq!(enum_i(2, 1), vec![t(&[1], &[1], &[0])]);
        let i42 = enum_i(4, 2);
        assert_eq!(i42.len(), 2);
        assert!(i42.contains(&t(&[1, 1], &[1, 1], &[0, 0])));
        assert!(i42.contains(&t(&[1, 0], &[1, 1], &[0, 1])));
        for n in 2..=8 {
            for k in 1..=n / 2 {
                let all = enum_i(n, k);
                let mut dedup = all.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), all.len());
                assert!(all.iter().all(|x| x.is_member(n, k)));
                if n <= 6 && k <= 2 {
                    assert_eq!(brute_force(n, k), all.len(), "I_{{{n},{k}}}");
                }
            }
        }
        assert_eq!(t(&[2, 1], &[1, 3], &[0, 0]).index(), idx("1,2,4"));
    }

    fn brute_force(n: usize, k: usize) -> usize {
        let vals = 3 * k;
        let mut count = 0;
        let mut digits = vec![0usize; vals];
        loop {
            let tr = IndexTriple {
                p: digits[..k].iter().map(|v| *v as u32).collect(),
                q: digits[k..2 * k].iter().map(|v| *v as u32).collect(),
                r: digits[2 * k..].iter().map(|v| *v as u32).collect(),
            };
            if tr.is_member(n, k) {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == vals {
                    return count;
                }
                digits[i] += 1;
                if digits[i] <= n {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(multi_binom(&[1, 2], &[1, 1]).unwrap(), BigInt::from(6));
        assert_eq!(multi_binom(&[4, 5], &[0, 0]).unwrap(), BigInt::from(1));
        assert_eq!(multi_binom(&[3, 1], &[2, 4]).unwrap(), multi_binom(&[2, 4], &[3, 1]).unwrap());
        assert!(multi_binom(&[1], &[]).is_err());
    }

    #[test]
    fn literal_a_vanishes_without_r() {
        let x = Rational::from_int(5);
        assert!(a_val(&t(&[1], &[1], &[0]), &x, CConvention::Literal).unwrap().is_zero());
        assert!(!a_val(&t(&[1], &[1], &[0]), &x, CConvention::Calibrated).unwrap().is_zero());
    }
}
