use std::cmp::Ordering;

/// A power product, stored sparsely as `(variable, exponent)` pairs sorted by variable index.
///
/// The `Ord` implementation is degree-reverse-lexicographic with `x0 > x1 > …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    exps: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: u32) -> Self {
        Monomial::from_pairs([(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut exps: Vec<(u32, u32)> = Vec::new();
        let mut sorted: Vec<(u32, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        sorted.sort_unstable();
        for (v, e) in sorted {
            match exps.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => exps.push((v, e)),
            }
        }
        let degree = exps.iter().map(|&(_, e)| e).sum();
        Monomial { degree, exps }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.exps
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.exps
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<u32> {
        self.exps.last().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, b) = (self.exps[i], other.exps[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    exps.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial {
            degree: self.degree + other.degree,
            exps,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        if self.degree > other.degree {
            return false;
        }
        let mut j = 0;
        for &(v, e) in &self.exps {
            while j < other.exps.len() && other.exps[j].0 < v {
                j += 1;
            }
            if j == other.exps.len() || other.exps[j].0 != v || other.exps[j].1 < e {
                return false;
            }
        }
        true
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let pairs = other.exps.iter().map(|&(v, e)| (v, e - self.exponent(v)));
        Some(Monomial::from_pairs(pairs))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut pairs: Vec<(u32, u32)> = self.exps.clone();
        for &(v, e) in &other.exps {
            match pairs.binary_search_by_key(&v, |&(w, _)| w) {
                Ok(i) => pairs[i].1 = pairs[i].1.max(e),
                Err(i) => pairs.insert(i, (v, e)),
            }
        }
        Monomial::from_pairs(pairs)
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().all(|&(v, _)| other.exponent(v) == 0)
    }

    /// Relabel variables; the map must be injective on the variables present.
    pub fn map_vars(&self, f: impl Fn(u32) -> u32) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|&(v, e)| (f(v), e)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        MonomialOrder::DegRevLex.cmp(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Supported term orders; variable 0 is the largest variable in each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    DegLex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => a.degree.cmp(&b.degree).then_with(|| revlex(a, b)),
            MonomialOrder::DegLex => a.degree.cmp(&b.degree).then_with(|| lex(a, b)),
            MonomialOrder::Lex => lex(a, b),
        }
    }
}

// Smallest variable index where the exponents differ decides; larger exponent wins.
fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.exps.get(i), b.exps.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(va, ea)), Some(&(vb, eb))) => {
                if va < vb {
                    return Ordering::Greater;
                }
                if vb < va {
                    return Ordering::Less;
                }
                if ea != eb {
                    return ea.cmp(&eb);
                }
                i += 1;
                j += 1;
            }
        }
    }
}

// Largest variable index where the exponents differ decides; smaller exponent wins.
fn revlex(a: &Monomial, b: &Monomial) -> Ordering {
    let (mut i, mut j) = (a.exps.len(), b.exps.len());
    loop {
        match (i, j) {
            (0, 0) => return Ordering::Equal,
            (_, 0) => return Ordering::Less,
            (0, _) => return Ordering::Greater,
            _ => {
                let (va, ea) = a.exps[i - 1];
                let (vb, eb) = b.exps[j - 1];
                if va > vb {
                    return Ordering::Less;
                }
                if vb > va {
                    return Ordering::Greater;
                }
                if ea != eb {
                    return eb.cmp(&ea);
                }
                i -= 1;
                j -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[(u32, u32)]) -> Monomial {
        Monomial::from_pairs(p.iter().copied())
    }

    #[test]
    fn degrevlex_three_variables() {
        // x0^2 > x0x1 > x1^2 > x0x2 > x1x2 > x2^2
        let chain = [
            m(&[(0, 2)]),
            m(&[(0, 1), (1, 1)]),
            m(&[(1, 2)]),
            m(&[(0, 1), (2, 1)]),
            m(&[(1, 1), (2, 1)]),
            m(&[(2, 2)]),
        ];
        for w in chain.windows(2) {
            assert!(w[0] > w[1], "{:?} vs {:?}", w[0], w[1]);
        }
        assert!(m(&[(2, 1)]) > Monomial::one());
    }

    #[test]
    fn lex_prefers_first_variable() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m(&[(0, 1)]), &m(&[(1, 5)])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[(0, 1), (1, 1)]), &m(&[(0, 1)])), Ordering::Greater);
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[(0, 2), (3, 1)]);
        let b = m(&[(0, 1)]);
        assert!(b.divides(&a));
        assert_eq!(b.quotient_of(&a).unwrap(), m(&[(0, 1), (3, 1)]));
        assert_eq!(a.lcm(&m(&[(1, 1)])), m(&[(0, 2), (1, 1), (3, 1)]));
        assert!(m(&[(1, 2)]).coprime(&a));
    }
}
