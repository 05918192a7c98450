use super::GridError;
use crate::func::{Bump1D, Elementary1D, Factor, Interval, Product1D, Scaled1D};
use crate::testfn::{Term, TestFunction};
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Bounded open box `∏ (lo_i, hi_i)` containing the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxRegion {
    pub sides: Vec<Interval>,
}

impl BoxRegion {
    pub fn symmetric(dim: usize, half: f64) -> Self {
        BoxRegion { sides: vec![Interval::new(-half, half); dim] }
    }
    pub fn dim(&self) -> usize {
        self.sides.len()
    }
    pub fn volume(&self) -> f64 {
        self.sides.iter().map(|s| s.width()).product()
    }
    pub fn scaled(&self, s: f64) -> Self {
        BoxRegion { sides: self.sides.iter().map(|i| Interval::new(i.lo * s, i.hi * s)).collect() }
    }
    /// Is the point strictly inside `lam * self + anchor`?
    pub fn contains_scaled(&self, x: &[f64], lam: f64, anchor: &[f64]) -> bool {
        self.sides.iter().zip(x).zip(anchor).all(|((s, &v), &a)| v > a + lam * s.lo && v < a + lam * s.hi)
    }
    pub fn product(parts: &[BoxRegion]) -> Self {
        BoxRegion { sides: parts.iter().flat_map(|p| p.sides.iter().copied()).collect() }
    }
}

#[derive(Debug, Clone)]
pub enum FamilyKind {
    /// Members `g(λ^{-p}(x' - x))` for a separable profile `g`.
    ScaledProfile { g: Vec<Factor>, p: f64 },
    /// Explicit member per ladder value, stored relative to the anchor.
    Tabulated { members: Vec<(f64, TestFunction)>, sup_bound: f64 },
    /// Tensor product of families on consecutive coordinate blocks.
    Product(Vec<TestingFamily>),
}

/// λ-indexed test functions with `supp f_λ ⊂ λO + x`.
#[derive(Debug, Clone)]
pub struct TestingFamily {
    pub kind: FamilyKind,
    pub anchor: Vec<f64>,
    region: BoxRegion,
    /// Members vanish identically for λ above the cutoff.
    pub cutoff: Option<f64>,
    reindex: f64,
    pub label: String,
}

impl TestingFamily {
    /// `g(λ^{-p}(· - x))`; `g` given by its one-dimensional factors centred near 0.
    pub fn scaled_family(g: Vec<Factor>, x: &[f64], p: f64, o: BoxRegion) -> Result<Self, GridError> {
        if !(p >= 1.0) {
            return Err(GridError::BadRange(format!("exponent p = {p} < 1")));
        }
        if g.len() != x.len() || o.dim() != x.len() {
            return Err(GridError::BadRange("profile, anchor and region dimensions differ".into()));
        }
        for (f, side) in g.iter().zip(&o.sides) {
            let s = f.support();
            if !(s.lo > side.lo && s.hi < side.hi) {
                return Err(GridError::SupportViolation(format!(
                    "[{}, {}] not inside ({}, {})",
                    s.lo, s.hi, side.lo, side.hi
                )));
            }
        }
        Ok(TestingFamily {
            kind: FamilyKind::ScaledProfile { g, p },
            anchor: x.to_vec(),
            region: o,
            cutoff: None,
            reindex: 1.0,
            label: format!("scaled(p={p})"),
        })
    }

    /// Tabulated family with a random phase and a random cosine modulation per λ.
    pub fn random_modulated(
        dim: usize,
        lambdas: &[f64],
        anchor: &[f64],
        seed: u64,
        profile_radius: f64,
        sharpness: f64,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut members = Vec::with_capacity(lambdas.len());
        let mut sup_bound = 0.0f64;
        for &lam in lambdas {
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let mut factors: Vec<Factor> = Vec::with_capacity(dim);
            let mut sup = 1.0;
            for _ in 0..dim {
                let amp: f64 = rng.gen_range(0.0..0.3);
                let freq: f64 = rng.gen_range(0.0..3.0);
                let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let g: Factor = Arc::new(Bump1D::new(0.0, profile_radius, sharpness));
                factors.push(Arc::new(Product1D {
                    a: Arc::new(Elementary1D::OnePlusCos { amp, freq: freq / lam, phase }),
                    b: Arc::new(Scaled1D::new(g, 0.0, lam)),
                }));
                sup *= 1.0 + amp;
            }
            sup_bound = sup_bound.max(sup);
            let tf = TestFunction::from_terms(dim, vec![Term { coeff: C64::from_polar(1.0, theta), factors }]);
            members.push((lam, tf));
        }
        let half = profile_radius * 1.25;
        TestingFamily {
            kind: FamilyKind::Tabulated { members, sup_bound },
            anchor: anchor.to_vec(),
            region: BoxRegion::symmetric(dim, half),
            cutoff: None,
            reindex: 1.0,
            label: format!("tabulated(seed={seed})"),
        }
    }

    /// Tensor product of families, one per slot.
    pub fn product(parts: Vec<TestingFamily>) -> Self {
        let anchor = parts.iter().flat_map(|p| p.anchor.iter().copied()).collect();
        let region = BoxRegion::product(&parts.iter().map(|p| p.region()).collect::<Vec<_>>());
        let label = parts.iter().map(|p| p.label.as_str()).collect::<Vec<_>>().join("⊗");
        TestingFamily { kind: FamilyKind::Product(parts), anchor, region, cutoff: None, reindex: 1.0, label }
    }

    pub fn dim(&self) -> usize {
        self.anchor.len()
    }

    /// Support region `O` of the (possibly reindexed) family.
    pub fn region(&self) -> BoxRegion {
        self.region.scaled(1.0 / self.reindex)
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    /// Same family anchored elsewhere.
    pub fn anchored_at(&self, x: &[f64]) -> Self {
        assert_eq!(x.len(), self.dim());
        let mut f = self.clone();
        if let FamilyKind::Product(parts) = &mut f.kind {
            let mut off = 0;
            for p in parts.iter_mut() {
                let d = p.dim();
                *p = p.anchored_at(&x[off..off + d]);
                off += d;
            }
        }
        f.anchor = x.to_vec();
        f
    }

    /// `f'_λ = f_{λ/μ}`; again a testing family, with region `O/μ`.
    pub fn reindexed(&self, mu: f64) -> Self {
        let mut f = self.clone();
        f.reindex *= mu;
        if let FamilyKind::Product(parts) = &mut f.kind {
            for p in parts.iter_mut() {
                *p = p.reindexed(mu);
            }
        }
        f
    }

    /// Exponent of the trivial power `λ^{trivial_order}` carried by every member's
    /// Fourier transform (the volume factor).
    pub fn trivial_order(&self) -> f64 {
        match &self.kind {
            FamilyKind::ScaledProfile { p, .. } => p * self.dim() as f64,
            FamilyKind::Tabulated { .. } => self.dim() as f64,
            FamilyKind::Product(parts) => parts.iter().map(|p| p.trivial_order()).sum(),
        }
    }

    pub fn sup_bound(&self) -> f64 {
        match &self.kind {
            FamilyKind::ScaledProfile { g, .. } => g.iter().map(|f| f.sup_norm()).product(),
            FamilyKind::Tabulated { sup_bound, .. } => *sup_bound,
            FamilyKind::Product(parts) => parts.iter().map(|p| p.sup_bound()).product(),
        }
    }

    /// Member at λ; `None` means identically zero.
    pub fn member(&self, lambda: f64) -> Result<Option<TestFunction>, GridError> {
        if let Some(c) = self.cutoff {
            if lambda > c {
                return Ok(None);
            }
        }
        let lam = lambda / self.reindex;
        match &self.kind {
            FamilyKind::ScaledProfile { g, p } => {
                let s = if *p == 1.0 { lam } else { lam.powf(*p) };
                let factors = g
                    .iter()
                    .zip(&self.anchor)
                    .map(|(f, &x)| Arc::new(Scaled1D::new(f.clone(), x, s)) as Factor)
                    .collect();
                Ok(Some(TestFunction::separable(factors)))
            }
            FamilyKind::Tabulated { members, .. } => {
                let m = members.iter().find(|(l, _)| *l == lam).ok_or(GridError::MissingMember(lam))?;
                Ok(Some(m.1.translated(&self.anchor)))
            }
            FamilyKind::Product(parts) => {
                let mut acc: Option<TestFunction> = None;
                for p in parts {
                    // parts carry their own reindexing already
                    match p.member(lambda)? {
                        None => return Ok(None),
                        Some(m) => acc = Some(match acc { None => m, Some(a) => a.tensor(&m) }),
                    }
                }
                Ok(acc)
            }
        }
    }
}
