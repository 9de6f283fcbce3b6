//! Schwinger-boson occupation space.
//!
//! A state is stored as the coefficients of monomials `Π_j (a†_j)^{p_j} (b†_j)^{q_j} |vac⟩`,
//! keyed by the vector of `a`-counts `p`; the `b`-counts follow from the
//! per-site capacity `n_j = p_j + q_j = 2S_j`. Monomials are orthogonal with
//! `⟨P|P⟩ = Π_j p_j! q_j!`, so every exact computation stays rational.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Write as _};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::angular_momentum::clebsch_gordan;
use crate::chain::{BlockSpec, ChainSpec};
use crate::error::{Error, Result};
use crate::numerics::{binomial, factorial, int_rational, rational_to_f64, HalfInt, SignedSqrtRational};

/// Scalar field for state amplitudes.
pub trait Amplitude:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
{
    fn from_rational(r: &BigRational) -> Self;
    fn conj(&self) -> Self;

    fn from_bigint(n: &BigInt) -> Self {
        Self::from_rational(&int_rational(n.clone()))
    }
}

impl Amplitude for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Amplitude for f64 {
    fn from_rational(r: &BigRational) -> Self {
        rational_to_f64(r)
    }
    fn conj(&self) -> Self {
        *self
    }
}

impl Amplitude for Complex64 {
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
}

/// `a`-boson count per site.
pub type Config = Vec<u32>;

/// Metric weight `Π_j p_j! (n_j − p_j)!` of a monomial.
pub fn weight(capacities: &[u32], config: &[u32]) -> BigInt {
    capacities
        .iter()
        .zip(config)
        .map(|(&n, &p)| factorial(p.into()) * factorial((n - p).into()))
        .product()
}

/// `2 S^z` of a monomial: `Σ_j (2p_j − n_j)`.
pub fn twice_magnetization(capacities: &[u32], config: &[u32]) -> i64 {
    capacities.iter().zip(config).map(|(&n, &p)| 2 * i64::from(p) - i64::from(n)).sum()
}

/// Every configuration of a space in lexicographic order.
pub fn all_configs(capacities: &[u32]) -> Vec<Config> {
    let mut out = vec![Vec::with_capacity(capacities.len())];
    for &n in capacities {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=n).map(move |p| {
                    let mut c = prefix.clone();
                    c.push(p);
                    c
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinOp {
    Raise,
    Lower,
    Z,
}

/// A state in the occupation basis of a fixed set of sites.
#[derive(Clone, PartialEq)]
pub struct FockVector<T = BigRational> {
    capacities: Vec<u32>,
    amplitudes: BTreeMap<Config, T>,
}

pub type RationalVector = FockVector<BigRational>;
pub type ComplexVector = FockVector<Complex64>;

impl<T: Amplitude> FockVector<T> {
    pub fn zero(capacities: Vec<u32>) -> Self {
        FockVector { capacities, amplitudes: BTreeMap::new() }
    }

    /// The single monomial `config` with unit coefficient.
    pub fn basis(capacities: Vec<u32>, config: Config) -> Self {
        assert_eq!(capacities.len(), config.len());
        assert!(config.iter().zip(&capacities).all(|(p, n)| p <= n), "occupation exceeds capacity");
        let mut v = Self::zero(capacities);
        v.amplitudes.insert(config, T::one());
        v
    }

    /// `|vac⟩` on `sites` sites.
    pub fn vacuum(sites: usize) -> Self {
        Self::basis(vec![0; sites], vec![0; sites])
    }

    pub fn from_amplitudes(capacities: Vec<u32>, amplitudes: impl IntoIterator<Item = (Config, T)>) -> Self {
        let mut v = Self::zero(capacities);
        for (c, a) in amplitudes {
            v.accumulate(c, a);
        }
        v
    }

    fn accumulate(&mut self, config: Config, amp: T) {
        if amp.is_zero() {
            return;
        }
        match self.amplitudes.entry(config) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(amp);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += amp;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    /// Spin of each site, `n_j / 2`.
    pub fn site_spins(&self) -> Vec<HalfInt> {
        self.capacities.iter().map(|&n| HalfInt::from_twice(n.into())).collect()
    }

    pub fn num_sites(&self) -> usize {
        self.capacities.len()
    }

    pub fn get(&self, config: &[u32]) -> Option<&T> {
        self.amplitudes.get(config)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Config, &T)> {
        self.amplitudes.iter()
    }

    /// Number of nonzero amplitudes.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// `⟨self|other⟩` under the factorial metric.
    pub fn inner(&self, other: &Self) -> Result<T> {
        if self.capacities != other.capacities {
            return Err(Error::SpaceMismatch);
        }
        let (small, large, flip) = if self.len() <= other.len() { (self, other, false) } else { (other, self, true) };
        let mut acc = T::zero();
        for (c, a) in &small.amplitudes {
            if let Some(b) = large.amplitudes.get(c) {
                let w = T::from_bigint(&weight(&self.capacities, c));
                let term = if flip { b.conj() * a.clone() } else { a.conj() * b.clone() };
                acc += term * w;
            }
        }
        Ok(acc)
    }

    pub fn norm_squared(&self) -> T {
        self.inner(self).expect("same space")
    }

    pub fn scale(&self, factor: &T) -> Self {
        let mut out = Self::zero(self.capacities.clone());
        for (c, a) in &self.amplitudes {
            out.accumulate(c.clone(), a.clone() * factor.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.capacities != other.capacities {
            return Err(Error::SpaceMismatch);
        }
        let mut out = self.clone();
        for (c, a) in &other.amplitudes {
            out.accumulate(c.clone(), a.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    /// Adds `factor · other` in place.
    pub fn add_scaled(&mut self, factor: &T, other: &Self) -> Result<()> {
        if self.capacities != other.capacities {
            return Err(Error::SpaceMismatch);
        }
        for (c, a) in &other.amplitudes {
            self.accumulate(c.clone(), a.clone() * factor.clone());
        }
        Ok(())
    }

    pub fn map<U: Amplitude>(&self, f: impl Fn(&T) -> U) -> FockVector<U> {
        FockVector::from_amplitudes(self.capacities.clone(), self.amplitudes.iter().map(|(c, a)| (c.clone(), f(a))))
    }

    /// Restriction to monomials with `2 S^z = twice_m`.
    pub fn sector(&self, twice_m: i64) -> Self {
        let amps = self
            .amplitudes
            .iter()
            .filter(|(c, _)| twice_magnetization(&self.capacities, c) == twice_m)
            .map(|(c, a)| (c.clone(), a.clone()));
        Self::from_amplitudes(self.capacities.clone(), amps)
    }

    /// Multiplies by `(a†_site)^da (b†_site)^db`, growing that site's capacity.
    pub fn raise(&self, site: usize, da: u32, db: u32) -> Self {
        let mut caps = self.capacities.clone();
        caps[site] += da + db;
        let amps = self.amplitudes.iter().map(|(c, a)| {
            let mut c = c.clone();
            c[site] += da;
            (c, a.clone())
        });
        Self::from_amplitudes(caps, amps)
    }

    /// Multiplies by `(x a†_site + y b†_site)^power`.
    pub fn apply_spinor_power(&self, site: usize, x: &T, y: &T, power: u32) -> Self {
        let mut caps = self.capacities.clone();
        caps[site] += power;
        let mut out = Self::zero(caps);
        for k in 0..=power {
            let coef = T::from_bigint(&binomial(power.into(), k.into())) * pow(x, k) * pow(y, power - k);
            let term = self.raise(site, k, power - k);
            out.add_scaled(&coef, &term).expect("same space");
        }
        out
    }

    /// Multiplies by the valence-bond power `(a†_i b†_j − b†_i a†_j)^power`.
    pub fn apply_valence_bond(&self, i: usize, j: usize, power: u32) -> Self {
        let mut caps = self.capacities.clone();
        caps[i] += power;
        caps[j] += power;
        let mut out = Self::zero(caps);
        for k in 0..=power {
            let mut coef = T::from_bigint(&binomial(power.into(), k.into()));
            if k % 2 == 1 {
                coef = -coef;
            }
            // (a_i b_j)^{power−k} (b_i a_j)^k
            let term = self.raise(i, power - k, k).raise(j, k, power - k);
            out.add_scaled(&coef, &term).expect("same space");
        }
        out
    }

    /// Image under the total `S⁺ = Σ a†b`, `S⁻ = Σ b†a` or `S^z`.
    pub fn apply_total_spin(&self, op: SpinOp) -> Self {
        let caps = &self.capacities;
        let mut out = Self::zero(caps.clone());
        for (c, a) in &self.amplitudes {
            match op {
                SpinOp::Z => {
                    let m = HalfInt::from_twice(twice_magnetization(caps, c)).to_rational();
                    out.accumulate(c.clone(), a.clone() * T::from_rational(&m));
                }
                SpinOp::Raise => {
                    for (j, &p) in c.iter().enumerate() {
                        let q = caps[j] - p;
                        if q > 0 {
                            let mut d = c.clone();
                            d[j] += 1;
                            out.accumulate(d, a.clone() * T::from_bigint(&BigInt::from(q)));
                        }
                    }
                }
                SpinOp::Lower => {
                    for (j, &p) in c.iter().enumerate() {
                        if p > 0 {
                            let mut d = c.clone();
                            d[j] -= 1;
                            out.accumulate(d, a.clone() * T::from_bigint(&BigInt::from(p)));
                        }
                    }
                }
            }
        }
        out
    }

    /// Amplitudes in the orthonormal spin basis `|S_j, m_j⟩`, i.e. multiplied
    /// by `√(Π p! q!)`.
    pub fn to_orthonormal(&self) -> BTreeMap<Config, Complex64>
    where
        T: Into<Complex64>,
    {
        self.amplitudes
            .iter()
            .map(|(c, a)| {
                let w = rational_to_f64(&int_rational(weight(&self.capacities, c))).sqrt();
                (c.clone(), a.clone().into() * w)
            })
            .collect()
    }
}

fn pow<T: Amplitude>(x: &T, k: u32) -> T {
    (0..k).fold(T::one(), |acc, _| acc * x.clone())
}

impl<T: Amplitude + fmt::Display> FockVector<T> {
    /// One line per nonzero amplitude, `p-vector TAB value`, lexicographic.
    pub fn to_debug_text(&self) -> String {
        let mut s = String::new();
        for (c, a) in &self.amplitudes {
            let p: Vec<String> = c.iter().map(u32::to_string).collect();
            let _ = writeln!(s, "{}\t{}", p.join(","), a);
        }
        s
    }
}

impl<T: Debug> Debug for FockVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FockVector")
            .field("capacities", &self.capacities)
            .field("amplitudes", &self.amplitudes)
            .finish()
    }
}

/// `Π (valence-bond)^{M}` over the given bonds on sites starting from `|vac⟩`.
/// `bonds[i]` couples sites `i` and `i+1`; `capacities` are the resulting
/// per-site boson numbers and are checked.
fn bond_product(sites: usize, bonds: &[u32]) -> RationalVector {
    let mut v = RationalVector::vacuum(sites);
    for (i, &m) in bonds.iter().enumerate() {
        v = v.apply_valence_bond(i, i + 1, m);
    }
    v
}

/// The full-chain valence-bond-solid state `Π_j (a†_j b†_{j+1} − b†_j a†_{j+1})^{M_{j,j+1}} |vac⟩`.
pub fn build_vbs(chain: &ChainSpec) -> RationalVector {
    let v = bond_product(chain.num_sites(), &chain.bonds());
    debug_assert!(v.capacities.iter().zip(chain.spins()).all(|(&n, s)| i64::from(n) == s.twice()));
    v
}

/// `⟨VBS|VBS⟩ = Π (2S_j + 1)! / Π (M_{j,j+1} + 1)`.
pub fn vbs_norm_closed_form(chain: &ChainSpec) -> BigRational {
    let num: BigInt = chain.spins().iter().map(|s| factorial((s.twice() + 1) as u64)).product();
    let den: BigInt = chain.bonds().iter().map(|&m| BigInt::from(m + 1)).product();
    BigRational::new(num, den)
}

/// The block state built from the interior bonds only. Its edge sites carry
/// `2S − M_left` and `2S − M_right` bosons.
pub fn build_block_vbs(block: &BlockSpec) -> RationalVector {
    bond_product(block.len(), block.interior_bonds())
}

/// `(b†_1)^p (a†_1)^{M_left−p} (a†_L)^q (b†_L)^{M_right−q} |VBS_L⟩` for all
/// `p ∈ 0..=M_left`, `q ∈ 0..=M_right`, keyed by `(p, q)`.
pub fn boundary_states(block: &BlockSpec) -> Vec<((u32, u32), RationalVector)> {
    let base = build_block_vbs(block);
    let last = block.len() - 1;
    let (ml, mr) = (block.m_left(), block.m_right());
    let mut out = Vec::with_capacity(block.degeneracy() as usize);
    for p in 0..=ml {
        let left = base.raise(0, ml - p, p);
        for q in 0..=mr {
            out.push(((p, q), left.raise(last, q, mr - q)));
        }
    }
    out
}

/// `2 S^z` of the boundary state `(p, q)`: `(M_left − 2p) + (2q − M_right)`.
pub fn boundary_twice_magnetization(block: &BlockSpec, p: u32, q: u32) -> i64 {
    i64::from(block.m_left()) - 2 * i64::from(p) + 2 * i64::from(q) - i64::from(block.m_right())
}

/// A finite combination `Σ_t c_t v_t` of rational vectors with
/// signed-square-root coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RadicalVector {
    capacities: Vec<u32>,
    terms: Vec<(SignedSqrtRational, RationalVector)>,
}

impl RadicalVector {
    pub fn terms(&self) -> &[(SignedSqrtRational, RationalVector)] {
        &self.terms
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    pub fn to_float(&self) -> FockVector<f64> {
        let mut out = FockVector::<f64>::zero(self.capacities.clone());
        for (c, v) in &self.terms {
            out.add_scaled(&c.to_f64(), &v.map(rational_to_f64)).expect("same space");
        }
        out
    }

    pub fn to_complex(&self) -> ComplexVector {
        self.to_float().map(|&x| Complex64::new(x, 0.0))
    }

    /// Inner product with every pairwise term evaluated exactly and only the
    /// final sum of radicals taken in floating point.
    pub fn inner(&self, other: &RadicalVector) -> Result<f64> {
        if self.capacities != other.capacities {
            return Err(Error::SpaceMismatch);
        }
        let mut acc = 0.0;
        for (ca, va) in &self.terms {
            for (cb, vb) in &other.terms {
                let r = va.inner(vb)?;
                acc += ca.mul(cb).mul(&SignedSqrtRational::from_rational(&r)).to_f64();
            }
        }
        Ok(acc)
    }

    pub fn apply_total_spin(&self, op: SpinOp) -> RadicalVector {
        RadicalVector {
            capacities: self.capacities.clone(),
            terms: self.terms.iter().map(|(c, v)| (c.clone(), v.apply_total_spin(op))).collect(),
        }
    }

    /// `√r · w` with `w` rational, when every coefficient shares one radicand
    /// up to rational squares.
    pub fn try_exact(&self) -> Option<(SignedSqrtRational, RationalVector)> {
        let Some((lead, _)) = self.terms.iter().find(|(c, _)| !c.is_zero()) else {
            return Some((SignedSqrtRational::one(), RationalVector::zero(self.capacities.clone())));
        };
        let unit = SignedSqrtRational::new(1, lead.radicand().clone());
        let mut sum = RationalVector::zero(self.capacities.clone());
        for (c, v) in &self.terms {
            if c.is_zero() {
                continue;
            }
            let ratio = SignedSqrtRational::new(c.sign(), c.radicand() / unit.radicand()).to_rational()?;
            sum.add_scaled(&ratio, v).ok()?;
        }
        Some((unit, sum))
    }
}

/// `|VBS_L(J, M)⟩ = Ψ†_{JM} |VBS_L⟩`, where `Ψ†_{JM}` couples spin-`M_left/2`
/// at the first block site and spin-`M_right/2` at the last one to total `(J, M)`.
pub fn degenerate_vbs(block: &BlockSpec, j: HalfInt, m: HalfInt) -> Result<RadicalVector> {
    block.check_total_spin(j)?;
    if !j.admits(m) {
        return Err(Error::MagneticOutOfRange { j, m });
    }
    let base = build_block_vbs(block);
    let last = block.len() - 1;
    let j1 = HalfInt::from_twice(block.m_left().into());
    let j2 = HalfInt::from_twice(block.m_right().into());
    let mut terms = Vec::new();
    for tm1 in (-j1.twice()..=j1.twice()).step_by(2) {
        let m1 = HalfInt::from_twice(tm1);
        let m2 = m - m1;
        if !j2.admits(m2) {
            continue;
        }
        let cg = clebsch_gordan(j1, m1, j2, m2, j, m)?;
        if cg.is_zero() {
            continue;
        }
        let (a1, b1) = (((j1 + m1).twice() / 2) as u32, ((j1 - m1).twice() / 2) as u32);
        let (a2, b2) = (((j2 + m2).twice() / 2) as u32, ((j2 - m2).twice() / 2) as u32);
        let norm = BigRational::new(
            BigInt::one(),
            factorial(a1.into()) * factorial(b1.into()) * factorial(a2.into()) * factorial(b2.into()),
        );
        let coef = cg.mul(&SignedSqrtRational::new(1, norm));
        terms.push((coef, base.raise(0, a1, b1).raise(last, a2, b2)));
    }
    let capacities = block.capacities();
    Ok(RadicalVector { capacities, terms })
}

/// Spinor coordinates `(cos(θ/2) e^{iφ/2}, sin(θ/2) e^{−iφ/2})`.
pub fn spinor(theta: f64, phi: f64) -> (Complex64, Complex64) {
    (
        Complex64::from_polar((theta / 2.0).cos(), phi / 2.0),
        Complex64::from_polar((theta / 2.0).sin(), -phi / 2.0),
    )
}

/// `X_{JM} = u^{J+M} v^{J−M} / √((J+M)!(J−M)!)`.
pub fn coherent_weight(j: HalfInt, m: HalfInt, theta: f64, phi: f64) -> Complex64 {
    let (u, v) = spinor(theta, phi);
    let up = ((j + m).twice() / 2) as u32;
    let down = ((j - m).twice() / 2) as u32;
    let norm = rational_to_f64(&int_rational(factorial(up.into()) * factorial(down.into()))).sqrt();
    u.powu(up) * v.powu(down) / norm
}

/// `|G; J, Ω̂⟩ = (u a†_1 + v b†_1)^{J_−+J} (a†_1 b†_L − b†_1 a†_L)^{J_+−J} (u a†_L + v b†_L)^{−J_−+J} |VBS_L⟩`.
pub fn coherent_ground_state(block: &BlockSpec, j: HalfInt, theta: f64, phi: f64) -> Result<ComplexVector> {
    block.check_total_spin(j)?;
    let (u, v) = spinor(theta, phi);
    let last = block.len() - 1;
    let power = |x: HalfInt| x.to_int().expect("integral exponent") as u32;
    let left = power(block.j_minus() + j);
    let bond = power(block.j_plus() - j);
    let right = power(j - block.j_minus());
    let base = build_block_vbs(block).map(Complex64::from_rational);
    Ok(base
        .apply_spinor_power(0, &u, &v, left)
        .apply_valence_bond(0, last, bond)
        .apply_spinor_power(last, &u, &v, right))
}

/// `√[(J_++J+1)! (J_−+J)! (J_+−J)! (−J_−+J)! / (2J+1)]`, relating
/// `|G; J, Ω̂⟩` to `Σ_M X_{JM} |VBS_L(J, M)⟩`.
pub fn expansion_prefactor(block: &BlockSpec, j: HalfInt) -> SignedSqrtRational {
    let f = |x: HalfInt| factorial(x.to_int().expect("integral argument") as u64);
    let (jm, jp) = (block.j_minus(), block.j_plus());
    let num = f(jp + j + HalfInt::ONE) * f(jm + j) * f(jp - j) * f(j - jm);
    SignedSqrtRational::new(1, BigRational::new(num, BigInt::from(j.multiplicity())))
}
