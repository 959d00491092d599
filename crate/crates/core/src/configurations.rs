//! Configurations: small tuples of total orders that act as forbidden
//! substructures of elections.
//!
//! An `(l, k)`-configuration is `l` total orders on `k` abstract items. An
//! election contains it when some injective choice of `l` votes and `k`
//! candidates reproduces every pairwise comparison of the configuration.

use std::fmt;

use crate::error::{Error, Result};
use crate::vote::{Candidate, Election, Vote};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    k: usize,
    orders: Vec<Vote>,
}

impl Configuration {
    pub fn new(orders: Vec<Vote>) -> Result<Self> {
        let k = orders.first().map(Vote::len).ok_or_else(|| {
            Error::InvalidElection("a configuration needs at least one order".into())
        })?;
        if let Some(bad) = orders.iter().find(|o| o.len() != k) {
            return Err(Error::Dimension {
                expected: k,
                found: bad.len(),
            });
        }
        Ok(Configuration { k, orders })
    }

    /// Builds a configuration from orders written with letters, `a` being
    /// item 1, `b` item 2, and so on: `from_letters(&["dabc", "dcba"])`.
    pub fn from_letters(orders: &[&str]) -> Result<Self> {
        let parsed = orders
            .iter()
            .map(|s| {
                let ranking = s
                    .chars()
                    .map(|ch| {
                        if ch.is_ascii_lowercase() {
                            Ok((ch as u8 - b'a' + 1) as Candidate)
                        } else {
                            Err(Error::InvalidVote(format!("bad item {ch:?} in {s:?}")))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Vote::new(ranking)
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(parsed)
    }

    /// Reads an election as a configuration over its own candidates.
    pub fn from_election(e: &Election) -> Self {
        Configuration {
            k: e.m(),
            orders: e.votes().to_vec(),
        }
    }

    /// Number of items.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of orders.
    pub fn l(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[Vote] {
        &self.orders
    }

    /// The configuration induced by a subset of an election's votes and
    /// candidates; chosen candidates are renamed `1..=k` in ascending order.
    pub fn restriction(e: &Election, votes: &[usize], candidates: &[Candidate]) -> Result<Self> {
        let mut sorted = candidates.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != candidates.len() || sorted.iter().any(|&c| c == 0 || c as usize > e.m())
        {
            return Err(Error::Precondition(
                "candidate subset must be distinct and in range".into(),
            ));
        }
        let orders = votes
            .iter()
            .map(|&i| {
                let v = e
                    .votes()
                    .get(i)
                    .ok_or_else(|| Error::Precondition(format!("vote index {i} out of range")))?;
                Ok(Vote::from_vec_unchecked(
                    v.ranking()
                        .iter()
                        .filter_map(|c| sorted.binary_search(c).ok())
                        .map(|i| (i + 1) as Candidate)
                        .collect(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(orders)
    }
}

impl fmt::Display for Configuration {
    /// Letter form for up to 26 items, e.g. `(dabc, dcba)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, o) in self.orders.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if self.k <= 26 {
                for &c in o.ranking() {
                    write!(f, "{}", (b'a' + c as u8 - 1) as char)?;
                }
            } else {
                write!(f, "[{o}]")?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration{self}")
    }
}

/// Maps showing that an election contains a configuration.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    /// `f[i]` is the 0-based index of the vote matched to order `i`.
    pub f: Vec<usize>,
    /// `g[x - 1]` is the candidate matched to item `x`.
    pub g: Vec<Candidate>,
}

impl Witness {
    /// Checks the witness against the definition directly.
    pub fn verify(&self, e: &Election, cfg: &Configuration) -> bool {
        if self.f.len() != cfg.l() || self.g.len() != cfg.k() {
            return false;
        }
        let injective = |xs: &[usize]| {
            let mut s = xs.to_vec();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] != w[1])
        };
        let g_usize: Vec<usize> = self.g.iter().map(|&c| c as usize).collect();
        if !injective(&self.f)
            || !injective(&g_usize)
            || self.f.iter().any(|&i| i >= e.n())
            || g_usize.iter().any(|&c| c == 0 || c > e.m())
        {
            return false;
        }
        cfg.orders.iter().zip(&self.f).all(|(t, &vi)| {
            let v = &e.votes()[vi];
            let r = t.ranking();
            (0..r.len()).all(|a| {
                (a + 1..r.len())
                    .all(|b| v.prefers(self.g[r[a] as usize - 1], self.g[r[b] as usize - 1]))
            })
        })
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("f = {")?;
        for (i, v) in self.f.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} -> {}", i + 1, v + 1)?;
        }
        f.write_str("}, g = {")?;
        for (x, c) in self.g.iter().enumerate() {
            if x > 0 {
                f.write_str(", ")?;
            }
            if self.g.len() <= 26 {
                write!(f, "{} -> {c}", (b'a' + x as u8) as char)?;
            } else {
                write!(f, "{} -> {c}", x + 1)?;
            }
        }
        f.write_str("}")
    }
}

/// First witness in lexicographic `(f, g)` order, or `None` if the election
/// avoids the configuration.
pub fn contains_configuration(e: &Election, cfg: &Configuration) -> Option<Witness> {
    let (n, m, l, k) = (e.n(), e.m(), cfg.l(), cfg.k());
    if l > n || k > m {
        return None;
    }
    let vpos: Vec<Vec<usize>> = e.votes().iter().map(Vote::positions).collect();
    let tpos: Vec<Vec<usize>> = cfg.orders.iter().map(Vote::positions).collect();
    let mut f = Vec::with_capacity(l);
    let mut used_vote = vec![false; n];
    let mut g = Vec::with_capacity(k);
    let mut used_cand = vec![false; m];
    let search = ContainmentSearch {
        vpos: &vpos,
        tpos: &tpos,
        n,
        m,
        l,
        k,
    };
    if search.choose_f(&mut f, &mut used_vote, &mut g, &mut used_cand) {
        Some(Witness {
            f,
            g: g.into_iter().map(|c| (c + 1) as Candidate).collect(),
        })
    } else {
        None
    }
}

struct ContainmentSearch<'a> {
    vpos: &'a [Vec<usize>],
    tpos: &'a [Vec<usize>],
    n: usize,
    m: usize,
    l: usize,
    k: usize,
}

impl ContainmentSearch<'_> {
    fn choose_f(
        &self,
        f: &mut Vec<usize>,
        used_vote: &mut [bool],
        g: &mut Vec<usize>,
        used_cand: &mut [bool],
    ) -> bool {
        if f.len() == self.l {
            return self.choose_g(f, g, used_cand);
        }
        for vi in 0..self.n {
            if used_vote[vi] {
                continue;
            }
            used_vote[vi] = true;
            f.push(vi);
            if self.choose_f(f, used_vote, g, used_cand) {
                return true;
            }
            f.pop();
            used_vote[vi] = false;
        }
        false
    }

    /// Assigns items in order `1..=k`, smallest free candidate first, so the
    /// first complete assignment is lexicographically minimal.
    fn choose_g(&self, f: &[usize], g: &mut Vec<usize>, used_cand: &mut [bool]) -> bool {
        let x = g.len();
        if x == self.k {
            return true;
        }
        for c in 0..self.m {
            if used_cand[c] {
                continue;
            }
            let consistent = f.iter().enumerate().all(|(i, &vi)| {
                let (tp, vp) = (&self.tpos[i], &self.vpos[vi]);
                g.iter()
                    .enumerate()
                    .all(|(y, &gc)| (tp[x] < tp[y]) == (vp[c] < vp[gc]))
            });
            if !consistent {
                continue;
            }
            used_cand[c] = true;
            g.push(c);
            if self.choose_g(f, g, used_cand) {
                return true;
            }
            g.pop();
            used_cand[c] = false;
        }
        false
    }
}

/// True iff the election contains none of `cfgs`.
pub fn avoids_all(e: &Election, cfgs: &[Configuration]) -> bool {
    first_contained(e, cfgs).is_none()
}

/// Index and witness of the first configuration of `cfgs` that `e` contains.
pub fn first_contained(e: &Election, cfgs: &[Configuration]) -> Option<(usize, Witness)> {
    cfgs.iter()
        .enumerate()
        .find_map(|(i, c)| contains_configuration(e, c).map(|w| (i, w)))
}

/// The twelve configurations whose avoidance characterizes single-peaked
/// elections: four `(2,4)`-configurations followed by eight
/// `(3,3)`-configurations, items named `a = 1, b = 2, …`.
pub fn sp_forbidden_set() -> Vec<Configuration> {
    const SETS: [&[&str]; 12] = [
        &["dabc", "dcba"],
        &["adbc", "dcba"],
        &["dabc", "cdba"],
        &["adbc", "cdba"],
        &["bca", "acb", "abc"],
        &["cba", "acb", "abc"],
        &["bca", "cab", "abc"],
        &["cba", "cab", "abc"],
        &["bca", "acb", "bac"],
        &["cba", "acb", "bac"],
        &["bca", "cab", "bac"],
        &["cba", "cab", "bac"],
    ];
    SETS.iter()
        .map(|orders| Configuration::from_letters(orders).expect("static configuration"))
        .collect()
}

/// The `(2,4)`-configuration `(abcd, bdac)` avoided by every group-separable
/// election.
pub fn gs_configuration() -> Configuration {
    Configuration::from_letters(&["abcd", "bdac"]).expect("static configuration")
}

/// The election `(id_m, id_m, τ)` and configuration `(id_k, id_k, π)`; the
/// election contains the configuration exactly when `τ` contains `π` as a
/// pattern.
pub fn pattern_instance(pi: &Vote, tau: &Vote) -> Result<(Election, Configuration)> {
    let (k, m) = (pi.len(), tau.len());
    if k > m {
        return Err(Error::Precondition(format!(
            "pattern length {k} exceeds permutation length {m}"
        )));
    }
    let e = Election::new(vec![Vote::identity(m), Vote::identity(m), tau.clone()])?;
    let cfg = Configuration::new(vec![Vote::identity(k), Vote::identity(k), pi.clone()])?;
    Ok((e, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vote::perm_of_pair;

    #[test]
    fn three_vote_containment() {
        // u v w x y = 1 2 3 4 5
        let e = Election::parse(&["12345", "35241", "51432"]).unwrap();
        let cfg = Configuration::from_letters(&["dabc", "cdba"]).unwrap();
        let w = contains_configuration(&e, &cfg).expect("contained");
        assert!(w.verify(&e, &cfg));
        let expected = Witness {
            f: vec![0, 2],
            g: vec![2, 4, 5, 1],
        };
        assert!(expected.verify(&e, &cfg));
        assert!(w <= expected);
    }

    #[test]
    fn election_contains_itself() {
        let e = Election::parse(&["2413", "3142", "1234"]).unwrap();
        let w = contains_configuration(&e, &Configuration::from_election(&e)).unwrap();
        assert_eq!(w.f, vec![0, 1, 2]);
        assert_eq!(w.g, vec![1, 2, 3, 4]);
    }

    #[test]
    fn too_few_votes() {
        let e = Election::parse(&["4321"]).unwrap();
        for cfg in sp_forbidden_set() {
            assert!(contains_configuration(&e, &cfg).is_none());
        }
    }

    #[test]
    fn forbidden_set_shape() {
        let set = sp_forbidden_set();
        assert_eq!(set.len(), 12);
        assert_eq!((set[0].l(), set[0].k()), (2, 4));
        assert!(set[..4].iter().all(|c| (c.l(), c.k()) == (2, 4)));
        assert!(set[4..].iter().all(|c| (c.l(), c.k()) == (3, 3)));
        assert_eq!(set[0].to_string(), "(dabc, dcba)");
    }

    #[test]
    fn listed_configuration_as_election() {
        let e = Election::parse(&["231", "132", "123"]).unwrap(); // bca, acb, abc
        assert!(!avoids_all(&e, &sp_forbidden_set()));
        assert!(avoids_all(&e, &[]));
    }

    #[test]
    fn sp_pair_permutations() {
        let set = sp_forbidden_set();
        let perms: Vec<String> = set[..4]
            .iter()
            .map(|c| {
                perm_of_pair(&c.orders()[0], &c.orders()[1])
                    .unwrap()
                    .ranking()
                    .iter()
                    .map(|d| d.to_string())
                    .collect()
            })
            .collect();
        assert_eq!(perms, ["1432", "4132", "2431", "4231"]);
    }

    #[test]
    fn group_separable_configuration() {
        let gs = gs_configuration();
        assert_eq!((gs.l(), gs.k()), (2, 4));
        let p = perm_of_pair(&gs.orders()[0], &gs.orders()[1]).unwrap();
        assert_eq!(p, "3142".parse().unwrap());
        assert_eq!(p.inverse(), "2413".parse().unwrap());
    }

    #[test]
    fn pattern_instance_examples() {
        let tau: Vote = "32514".parse().unwrap();
        let (e, c) = pattern_instance(&"132".parse().unwrap(), &tau).unwrap();
        assert!(contains_configuration(&e, &c).is_some());
        let (e, c) = pattern_instance(&"123".parse().unwrap(), &tau).unwrap();
        assert!(contains_configuration(&e, &c).is_none());
        let (e, c) = pattern_instance(&tau, &tau).unwrap();
        let w = contains_configuration(&e, &c).unwrap();
        assert_eq!(w.f, vec![0, 1, 2]);
        assert_eq!(w.g, vec![1, 2, 3, 4, 5]);
        assert!(pattern_instance(&tau, &"123".parse().unwrap()).is_err());
    }

    #[test]
    fn restriction_relabels() {
        let e = Election::parse(&["35142", "12345"]).unwrap();
        let c = Configuration::restriction(&e, &[0], &[5, 1, 2]).unwrap();
        assert_eq!(c.orders()[0], "312".parse().unwrap());
        assert!(contains_configuration(&e, &c).is_some());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn election(n: usize, m: usize) -> impl Strategy<Value = Election> {
            proptest::collection::vec(
                Just((1..=m as Candidate).collect::<Vec<_>>()).prop_shuffle(),
                n,
            )
            .prop_map(|vs| {
                Election::new(vs.into_iter().map(|r| Vote::new(r).unwrap()).collect()).unwrap()
            })
        }

        proptest! {
            #[test]
            fn found_witnesses_verify(e in election(3, 5), cfg_e in election(2, 3)) {
                let cfg = Configuration::from_election(&cfg_e);
                if let Some(w) = contains_configuration(&e, &cfg) {
                    prop_assert!(w.verify(&e, &cfg));
                }
            }

            #[test]
            fn containment_is_transitive(
                big in election(4, 6),
                mid_votes in proptest::sample::subsequence((0..4usize).collect::<Vec<_>>(), 2..=3),
                mid_cands in proptest::sample::subsequence((1..=6 as Candidate).collect::<Vec<_>>(), 3..=5),
                small_votes in proptest::sample::subsequence(vec![0usize, 1], 1..=2),
                small_size in 2usize..=3,
            ) {
                let mid_cfg = Configuration::restriction(&big, &mid_votes, &mid_cands).unwrap();
                let mid = Election::new(mid_cfg.orders().to_vec()).unwrap();
                prop_assert!(contains_configuration(&big, &mid_cfg).is_some());
                let cands: Vec<Candidate> = (1..=small_size as Candidate).collect();
                let small = Configuration::restriction(&mid, &small_votes, &cands).unwrap();
                prop_assert!(contains_configuration(&mid, &small).is_some());
                prop_assert!(contains_configuration(&big, &small).is_some());
            }
        }
    }
}
