use std::fmt;

/// Powers of one mode inside a normally ordered word, `a†^dag a^ann`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModePowers {
    pub dag: u32,
    pub ann: u32,
}

impl ModePowers {
    pub const IDENTITY: ModePowers = ModePowers { dag: 0, ann: 0 };

    pub const fn new(dag: u32, ann: u32) -> Self {
        ModePowers { dag, ann }
    }

    /// Adjoint of `a†^d a^s` is `a†^s a^d`, already normally ordered.
    pub const fn swapped(self) -> Self {
        ModePowers { dag: self.ann, ann: self.dag }
    }

    pub const fn is_identity(self) -> bool {
        self.dag == 0 && self.ann == 0
    }

    /// Diagonal in the number basis.
    pub const fn is_diagonal(self) -> bool {
        self.dag == self.ann
    }
}

/// Normally ordered expansion of `(a†^t1 a^s1)(a†^t2 a^s2)` on one mode:
/// `a^s a†^t = Σ_k k!·C(s,k)·C(t,k)·a†^(t-k) a^(s-k)`.
///
/// Coefficients come from the ratio recurrence
/// `c_{k+1} = c_k (s-k)(t-k) / (k+1)`, which stays integral at every step.
pub fn reorder_single(left: ModePowers, right: ModePowers) -> Vec<(ModePowers, f64)> {
    let s = left.ann;
    let t = right.dag;
    let kmax = s.min(t);
    let mut out = Vec::with_capacity(kmax as usize + 1);
    let mut c = 1.0f64;
    for k in 0..=kmax {
        out.push((
            ModePowers::new(left.dag + t - k, s + right.ann - k),
            c,
        ));
        if k < kmax {
            c = c * f64::from(s - k) * f64::from(t - k) / f64::from(k + 1);
        }
    }
    out
}

/// A multimode normally ordered word `∏_k a_k†^{S'_k} a_k^{S_k}`.
///
/// Operators on distinct modes commute, so per-mode normal order is a
/// canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BosonMonomial {
    powers: Vec<ModePowers>,
}

impl BosonMonomial {
    pub fn identity(mode_count: usize) -> Self {
        BosonMonomial { powers: vec![ModePowers::IDENTITY; mode_count] }
    }

    pub fn from_powers(powers: Vec<ModePowers>) -> Self {
        BosonMonomial { powers }
    }

    /// Builds a word from `(dag, ann)` pairs, one per mode.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        BosonMonomial {
            powers: pairs.iter().map(|&(d, a)| ModePowers::new(d, a)).collect(),
        }
    }

    /// `a_mode^power` on `mode_count` modes.
    pub fn annihilator(mode_count: usize, mode: usize, power: u32) -> Self {
        let mut m = Self::identity(mode_count);
        m.powers[mode].ann = power;
        m
    }

    /// `a_mode†^power` on `mode_count` modes.
    pub fn creator(mode_count: usize, mode: usize, power: u32) -> Self {
        let mut m = Self::identity(mode_count);
        m.powers[mode].dag = power;
        m
    }

    pub fn mode_count(&self) -> usize {
        self.powers.len()
    }

    pub fn powers(&self) -> &[ModePowers] {
        &self.powers
    }

    pub fn mode(&self, k: usize) -> ModePowers {
        self.powers[k]
    }

    pub fn set_mode(&mut self, k: usize, p: ModePowers) {
        self.powers[k] = p;
    }

    pub fn is_identity(&self) -> bool {
        self.powers.iter().all(|p| p.is_identity())
    }

    pub fn dagger(&self) -> Self {
        BosonMonomial {
            powers: self.powers.iter().map(|p| p.swapped()).collect(),
        }
    }

    /// Swaps daggered and undaggered powers on the listed modes only.
    pub fn swap_on(&self, modes: impl IntoIterator<Item = usize>) -> Self {
        let mut out = self.clone();
        for k in modes {
            out.powers[k] = out.powers[k].swapped();
        }
        out
    }

    pub fn max_dag_power(&self) -> u32 {
        self.powers.iter().map(|p| p.dag).max().unwrap_or(0)
    }

    /// Sum of all powers.
    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|p| p.dag + p.ann).sum()
    }
}

impl fmt::Display for BosonMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut first = true;
        for (k, p) in self.powers.iter().enumerate() {
            for (pow, sym) in [(p.dag, "†"), (p.ann, "")] {
                if pow == 0 {
                    continue;
                }
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "a{k}{sym}")?;
                if pow > 1 {
                    write!(f, "^{pow}")?;
                }
            }
        }
        Ok(())
    }
}
