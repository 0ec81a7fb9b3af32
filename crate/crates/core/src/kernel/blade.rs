use std::cmp::Ordering;
use std::fmt;

/// Oriented basis element of a Euclidean Clifford algebra, stored as a
/// strictly ascending list of basis indices. The empty list is the scalar
/// unit.
///
/// Indices are 1-based harmonic orders, so the algebra is never materialized
/// as a full `2^n` basis; only blades that actually occur are allocated.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Blade {
    indices: Vec<u32>,
}

/// Sign attached to a blade product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }
}

impl Blade {
    pub fn scalar() -> Self {
        Blade { indices: Vec::new() }
    }

    pub fn vector(index: u32) -> Self {
        assert!(index >= 1, "basis vectors are 1-based");
        Blade { indices: vec![index] }
    }

    /// Canonical blade spanned by the given indices together with the sign
    /// needed to reorder them, e.g. `[4, 1]` gives `(-1, σ14)`.
    ///
    /// Repeated indices contract (`σkσk = 1`).
    pub fn from_indices(indices: &[u32]) -> (Sign, Self) {
        let mut acc = (Sign::Plus, Blade::scalar());
        for &i in indices {
            let (s, b) = acc.1.mul(&Blade::vector(i));
            acc = (if s.is_negative() { acc.0.flip() } else { acc.0 }, b);
        }
        acc
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn grade(&self) -> usize {
        self.indices.len()
    }

    pub fn is_scalar(&self) -> bool {
        self.indices.is_empty()
    }

    /// Largest basis index used, 0 for the scalar.
    pub fn max_index(&self) -> u32 {
        self.indices.last().copied().unwrap_or(0)
    }

    /// Geometric product of two basis blades.
    ///
    /// The result spans the symmetric difference of the index sets. The sign
    /// is the parity of the number of pairs `(x in self, y in rhs)` with
    /// `x > y`, i.e. the transpositions needed to sort the concatenation.
    pub fn mul(&self, rhs: &Blade) -> (Sign, Blade) {
        let a = &self.indices;
        let b = &rhs.indices;

        let mut swaps = 0usize;
        // For each y in b, count elements of a strictly greater than y.
        let mut ai = 0;
        for &y in b {
            while ai < a.len() && a[ai] <= y {
                ai += 1;
            }
            swaps += a.len() - ai;
        }

        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);

        (Sign::from_parity(swaps % 2 == 1), Blade { indices: out })
    }

    /// Sign picked up by the reverse of a grade-k blade: `(-1)^{k(k-1)/2}`.
    pub fn reverse_sign(&self) -> Sign {
        let k = self.grade();
        Sign::from_parity((k * k.saturating_sub(1) / 2) % 2 == 1)
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.indices.cmp(&other.indices))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return write!(f, "σ0");
        }
        write!(f, "σ")?;
        let wide = self.indices.iter().any(|&i| i > 9);
        for (k, i) in self.indices.iter().enumerate() {
            if wide && k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
