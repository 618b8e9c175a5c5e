//! Small stabilizer-tableau simulator (at most 32 qubits).
//!
//! Used as a reference for fusion semantics and graph-state identities;
//! it is not on any performance path.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph_states::PhysGraph;

pub const MAX_QUBITS: usize = 32;

/// Pauli string `i^phase * prod X^x * prod Z^z` (X before Z on each qubit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pauli {
    pub x: u64,
    pub z: u64,
    phase: u8,
}

impl Pauli {
    pub const IDENTITY: Pauli = Pauli { x: 0, z: 0, phase: 0 };

    /// Hermitian Pauli with the given support masks and overall sign.
    pub fn new(x: u64, z: u64, negative: bool) -> Self {
        let ys = (x & z).count_ones() as u8;
        Pauli {
            x,
            z,
            phase: (ys + if negative { 2 } else { 0 }) % 4,
        }
    }

    pub fn x_on(q: usize) -> Self {
        Pauli::new(1 << q, 0, false)
    }

    pub fn z_on(q: usize) -> Self {
        Pauli::new(0, 1 << q, false)
    }

    /// Parses strings such as `"+XZI"`, `"-YIZ"` or `"XX"`; character `k`
    /// acts on qubit `k`.
    pub fn parse(s: &str) -> Result<Self> {
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (mut x, mut z) = (0u64, 0u64);
        for (k, c) in body.chars().enumerate() {
            if k >= MAX_QUBITS {
                return Err(Error::Usage(format!("pauli string longer than {MAX_QUBITS}")));
            }
            match c {
                'I' => {}
                'X' => x |= 1 << k,
                'Z' => z |= 1 << k,
                'Y' => {
                    x |= 1 << k;
                    z |= 1 << k;
                }
                other => return Err(Error::Usage(format!("bad pauli character {other:?}"))),
            }
        }
        Ok(Pauli::new(x, z, negative))
    }

    pub fn is_negative(&self) -> bool {
        let ys = (self.x & self.z).count_ones() as u8;
        (self.phase + 4 - ys % 4) % 4 == 2
    }

    pub fn negate(self) -> Self {
        Pauli {
            phase: (self.phase + 2) % 4,
            ..self
        }
    }

    pub fn commutes(&self, other: &Pauli) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 0
    }

    /// Operator product `self * other`.
    pub fn mul(&self, other: &Pauli) -> Pauli {
        let swaps = (self.z & other.x).count_ones() as u8;
        Pauli {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * (swaps % 2)) % 4,
        }
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    fn conjugate_h(&mut self, q: usize) {
        let bit = 1u64 << q;
        let xb = self.x & bit;
        let zb = self.z & bit;
        if xb != 0 && zb != 0 {
            // H (XZ) H = ZX = -XZ
            self.phase = (self.phase + 2) % 4;
        }
        self.x = (self.x & !bit) | zb;
        self.z = (self.z & !bit) | xb;
    }

    pub fn to_string_n(&self, n: usize) -> String {
        let mut s = String::with_capacity(n + 1);
        s.push(if self.is_negative() { '-' } else { '+' });
        for k in 0..n {
            let bit = 1u64 << k;
            s.push(match (self.x & bit != 0, self.z & bit != 0) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            });
        }
        s
    }
}

/// Pure stabilizer state given by `num_qubits` independent commuting
/// generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Tableau {
    num_qubits: usize,
    generators: Vec<Pauli>,
}

impl Tableau {
    pub fn from_generators(num_qubits: usize, generators: Vec<Pauli>) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::Usage(format!("tableau limited to {MAX_QUBITS} qubits")));
        }
        if generators.len() != num_qubits {
            return Err(Error::Usage("generator count must equal qubit count".into()));
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes(b) {
                    return Err(Error::Usage("generators do not commute".into()));
                }
            }
        }
        let t = Tableau {
            num_qubits,
            generators,
        };
        if t.rank() != num_qubits {
            return Err(Error::Usage("generators are not independent".into()));
        }
        Ok(t)
    }

    /// Graph state `prod CZ |+>^n`.
    pub fn graph_state(num_qubits: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::Usage(format!("tableau limited to {MAX_QUBITS} qubits")));
        }
        let mut nbr = vec![0u64; num_qubits];
        for &(a, b) in edges {
            if a == b || a >= num_qubits || b >= num_qubits {
                return Err(Error::Usage(format!("bad edge ({a}, {b})")));
            }
            nbr[a] ^= 1 << b;
            nbr[b] ^= 1 << a;
        }
        let generators = (0..num_qubits).map(|v| Pauli::new(1 << v, nbr[v], false)).collect();
        Ok(Tableau {
            num_qubits,
            generators,
        })
    }

    /// State of a [`PhysGraph`] with its physical H-marks applied.
    pub fn from_graph(g: &PhysGraph) -> Result<Self> {
        let mut t = Tableau::graph_state(g.vertex_count(), &g.edge_list())?;
        for v in g.h_marked_indices() {
            t.apply_h(v);
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn generators(&self) -> &[Pauli] {
        &self.generators
    }

    pub fn apply_h(&mut self, q: usize) {
        for g in &mut self.generators {
            g.conjugate_h(q);
        }
    }

    fn rank(&self) -> usize {
        let mut rows: Vec<u128> = self
            .generators
            .iter()
            .map(|p| (p.x as u128) << 64 | p.z as u128)
            .collect();
        let mut rank = 0;
        for bit in (0..128).rev() {
            let mask = 1u128 << bit;
            if let Some(pos) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) {
                rows.swap(rank, pos);
                for i in 0..rows.len() {
                    if i != rank && rows[i] & mask != 0 {
                        rows[i] ^= rows[rank];
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    /// `Some(false)` if `op` is in the stabilizer group, `Some(true)` if
    /// `-op` is, `None` otherwise.
    pub fn group_sign(&self, op: &Pauli) -> Option<bool> {
        if self.generators.iter().any(|g| !g.commutes(op)) {
            return None;
        }
        // Express op's (x|z) bits as a combination of generators.
        let mut rows: Vec<(u128, u64)> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, p)| ((p.x as u128) << 64 | p.z as u128, 1u64 << i))
            .collect();
        let mut target = (op.x as u128) << 64 | op.z as u128;
        let mut combo = 0u64;
        let mut rank = 0;
        for bit in (0..128).rev() {
            let mask = 1u128 << bit;
            if let Some(pos) = (rank..rows.len()).find(|&i| rows[i].0 & mask != 0) {
                rows.swap(rank, pos);
                for i in 0..rows.len() {
                    if i != rank && rows[i].0 & mask != 0 {
                        rows[i].0 ^= rows[rank].0;
                        rows[i].1 ^= rows[rank].1;
                    }
                }
                if target & mask != 0 {
                    target ^= rows[rank].0;
                    combo ^= rows[rank].1;
                }
                rank += 1;
            }
        }
        if target != 0 {
            return None;
        }
        let mut prod = Pauli::IDENTITY;
        for (i, g) in self.generators.iter().enumerate() {
            if combo >> i & 1 == 1 {
                prod = prod.mul(g);
            }
        }
        debug_assert_eq!((prod.x, prod.z), (op.x, op.z));
        Some(prod.phase != op.phase)
    }

    pub fn contains(&self, op: &Pauli) -> bool {
        self.group_sign(op) == Some(false)
    }

    /// Measures `op`; returns `+1` or `-1` and collapses the state.
    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, op: &Pauli, rng: &mut R) -> i8 {
        let anti: Vec<usize> = (0..self.generators.len())
            .filter(|&i| !self.generators[i].commutes(op))
            .collect();
        match anti.split_first() {
            None => match self.group_sign(op) {
                Some(false) => 1,
                Some(true) => -1,
                None => unreachable!("pure state: commuting Pauli lies in the group"),
            },
            Some((&pivot, rest)) => {
                let pg = self.generators[pivot];
                for &i in rest {
                    self.generators[i] = self.generators[i].mul(&pg);
                }
                let outcome: i8 = if rng.gen::<bool>() { 1 } else { -1 };
                self.generators[pivot] = if outcome == 1 { *op } else { op.negate() };
                outcome
            }
        }
    }

    /// True iff every non-identity two-qubit Pauli on `(a, b)` has zero
    /// expectation, i.e. the marginal state of `a` and `b` is maximally
    /// mixed.
    pub fn marginal_is_maximally_mixed(&self, a: usize, b: usize) -> bool {
        assert!(a != b, "qubits must differ");
        for pa in 0..4u8 {
            for pb in 0..4u8 {
                if pa == 0 && pb == 0 {
                    continue;
                }
                let bits = |p: u8, q: usize| {
                    let x = if p & 1 != 0 { 1u64 << q } else { 0 };
                    let z = if p & 2 != 0 { 1u64 << q } else { 0 };
                    (x, z)
                };
                let (xa, za) = bits(pa, a);
                let (xb, zb) = bits(pb, b);
                let op = Pauli::new(xa | xb, za | zb, false);
                if self.generators.iter().all(|g| g.commutes(&op)) {
                    return false;
                }
            }
        }
        true
    }

    /// Both tableaux describe the same state.
    pub fn same_state(&self, other: &Tableau) -> bool {
        self.num_qubits == other.num_qubits && other.generators.iter().all(|g| self.contains(g))
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            writeln!(f, "{}", g.to_string_n(self.num_qubits))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Pauli {
        Pauli::parse(s).unwrap()
    }

    #[test]
    fn pauli_algebra() {
        assert!(!p("X").commutes(&p("Z")));
        assert!(p("XX").commutes(&p("ZZ")));
        // XZ = -iY
        let xz = p("X").mul(&p("Z"));
        assert_eq!((xz.x, xz.z), (1, 1));
        assert_eq!(p("X").mul(&p("Z")), p("Z").mul(&p("X")).negate());
        assert!(p("-Y").is_negative());
        assert!(!p("Y").is_negative());
        assert_eq!(p("Y").mul(&p("Y")), Pauli::IDENTITY);
    }

    #[test]
    fn single_vertex_and_edge() {
        let t = Tableau::graph_state(1, &[]).unwrap();
        assert!(t.contains(&p("X")));
        let t = Tableau::graph_state(2, &[(0, 1)]).unwrap();
        assert!(t.contains(&p("XZ")) && t.contains(&p("ZX")));
        assert!(t.contains(&p("YY")));
    }

    #[test]
    fn ghz_from_star_with_leaf_hadamards() {
        let mut t = Tableau::graph_state(3, &[(0, 1), (0, 2)]).unwrap();
        t.apply_h(1);
        t.apply_h(2);
        let ghz = Tableau::from_generators(3, vec![p("XXX"), p("ZZI"), p("IZZ")]).unwrap();
        assert!(t.same_state(&ghz));
    }

    #[test]
    fn measurement_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let plus = Tableau::graph_state(1, &[]).unwrap();
        let mut ups = 0;
        for _ in 0..10_000 {
            let mut t = plus.clone();
            assert_eq!(t.measure_pauli(&p("X"), &mut rng), 1);
            if t.measure_pauli(&p("Z"), &mut rng) == 1 {
                ups += 1;
            }
            // Repeated measurement is stable.
            let again = t.measure_pauli(&p("Z"), &mut rng);
            assert_eq!(again == 1, t.contains(&p("Z")));
        }
        assert!((ups as f64 - 5000.0).abs() < 150.0);
    }

    #[test]
    fn marginal_of_adjacent_pair_is_not_mixed() {
        let t = Tableau::graph_state(2, &[(0, 1)]).unwrap();
        assert!(!t.marginal_is_maximally_mixed(0, 1));
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(Tableau::from_generators(2, vec![p("XI"), p("ZI")]).is_err());
        assert!(Tableau::from_generators(2, vec![p("XI"), p("XI")]).is_err());
        assert!(Tableau::graph_state(40, &[]).is_err());
    }
}
