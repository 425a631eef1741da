//! Word search over a generator alphabet for large Salem degree.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::generators::GeneratorSet;
use crate::error::{Error, Result};
use crate::isometry::{char_poly, Isometry};
use crate::lattice::Lattice;
use crate::registry::{Named, Registry};
use crate::salem::{salem_decomposition, SalemDecomposition};

/// Words evaluated per parallel batch. Fixed so results do not depend on the
/// worker count.
const BATCH: usize = 32;

/// Length of the exhaustive phase of the hybrid strategy.
const EXHAUSTIVE_PREFIX: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_word_len: usize,
    pub budget: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_word_len: 6,
            budget: 20_000,
            seed: 0,
            workers: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    /// Signed 1-based generator indices; `-i` is the inverse of generator `i`.
    pub best_word: Vec<i64>,
    pub best_isometry: Isometry,
    pub decomposition: SalemDecomposition,
    pub achieved_degree: usize,
    pub target_degree: usize,
    pub max_degree_seen: usize,
    pub words_examined: u64,
    pub seed: u64,
    pub max_word_len: usize,
    pub budget: u64,
    pub strategy: String,
}

/// A word to evaluate; prefixes shorter than `first_prefix` are skipped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordUnit {
    pub word: Vec<i64>,
    pub first_prefix: usize,
}

pub trait SearchStrategy: Named + Send + Sync {
    fn describe(&self) -> &'static str;

    /// The deterministic stream of words for an alphabet of `letters` generators.
    fn units(&self, letters: usize, cfg: &SearchConfig) -> Box<dyn Iterator<Item = WordUnit> + Send>;
}

/// Breadth-first over reduced words up to a length, then seeded random walks.
pub struct Hybrid;
/// Every reduced word up to `max_word_len`, shortest first.
pub struct Exhaustive;
/// Seeded reduced random walks only.
pub struct RandomWalk;

impl Named for Hybrid {
    fn name(&self) -> &'static str {
        "hybrid"
    }
}

impl Named for Exhaustive {
    fn name(&self) -> &'static str {
        "exhaustive"
    }
}

impl Named for RandomWalk {
    fn name(&self) -> &'static str {
        "random-walk"
    }
}

impl SearchStrategy for Hybrid {
    fn describe(&self) -> &'static str {
        "exhaustive up to length 3, then seeded random walks"
    }

    fn units(&self, letters: usize, cfg: &SearchConfig) -> Box<dyn Iterator<Item = WordUnit> + Send> {
        let short = cfg.max_word_len.min(EXHAUSTIVE_PREFIX);
        let head = ReducedWords::new(letters, short);
        if cfg.max_word_len <= EXHAUSTIVE_PREFIX {
            return Box::new(head);
        }
        let tail = RandomWalks::new(letters, cfg.max_word_len, EXHAUSTIVE_PREFIX + 1, cfg.seed);
        Box::new(head.chain(tail))
    }
}

impl SearchStrategy for Exhaustive {
    fn describe(&self) -> &'static str {
        "all reduced words up to max_word_len"
    }

    fn units(&self, letters: usize, cfg: &SearchConfig) -> Box<dyn Iterator<Item = WordUnit> + Send> {
        Box::new(ReducedWords::new(letters, cfg.max_word_len))
    }
}

impl SearchStrategy for RandomWalk {
    fn describe(&self) -> &'static str {
        "seeded random walks, every prefix examined"
    }

    fn units(&self, letters: usize, cfg: &SearchConfig) -> Box<dyn Iterator<Item = WordUnit> + Send> {
        Box::new(RandomWalks::new(letters, cfg.max_word_len, 1, cfg.seed))
    }
}

pub fn search_strategies() -> Registry<dyn SearchStrategy> {
    let mut r: Registry<dyn SearchStrategy> = Registry::new("search strategy", "hybrid");
    r.register(Box::new(Hybrid));
    r.register(Box::new(Exhaustive));
    r.register(Box::new(RandomWalk));
    r
}

/// Letter `i` of the alphabet `1, -1, 2, -2, ...`.
fn letter_at(i: usize) -> i64 {
    let g = (i / 2 + 1) as i64;
    if i % 2 == 0 {
        g
    } else {
        -g
    }
}

/// Reduced words in order of length, then alphabet order.
struct ReducedWords {
    alphabet: usize,
    max_len: usize,
    len: usize,
    digits: Vec<usize>,
    fresh: bool,
}

impl ReducedWords {
    fn new(letters: usize, max_len: usize) -> Self {
        ReducedWords {
            alphabet: 2 * letters,
            max_len,
            len: 1,
            digits: vec![0],
            fresh: true,
        }
    }

    fn reduced(&self) -> bool {
        self.digits
            .windows(2)
            .all(|w| letter_at(w[0]) != -letter_at(w[1]))
    }

    fn advance(&mut self) -> bool {
        for i in (0..self.len).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.alphabet {
                return true;
            }
            self.digits[i] = 0;
        }
        self.len += 1;
        self.digits = vec![0; self.len];
        self.len <= self.max_len
    }
}

impl Iterator for ReducedWords {
    type Item = WordUnit;

    fn next(&mut self) -> Option<WordUnit> {
        if self.alphabet == 0 || self.max_len == 0 {
            return None;
        }
        loop {
            if self.fresh {
                self.fresh = false;
            } else if !self.advance() {
                return None;
            }
            if self.len > self.max_len {
                return None;
            }
            if self.reduced() {
                let word: Vec<i64> = self.digits.iter().map(|&d| letter_at(d)).collect();
                return Some(WordUnit {
                    first_prefix: word.len(),
                    word,
                });
            }
        }
    }
}

/// Walk `i` draws from ChaCha8 seeded with `seed`, stream `i`.
struct RandomWalks {
    alphabet: usize,
    len: usize,
    first_prefix: usize,
    seed: u64,
    index: u64,
}

impl RandomWalks {
    fn new(letters: usize, len: usize, first_prefix: usize, seed: u64) -> Self {
        RandomWalks {
            alphabet: 2 * letters,
            len,
            first_prefix,
            seed,
            index: 0,
        }
    }
}

impl Iterator for RandomWalks {
    type Item = WordUnit;

    fn next(&mut self) -> Option<WordUnit> {
        if self.alphabet == 0 || self.len == 0 {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.index);
        self.index += 1;
        let mut word: Vec<i64> = Vec::with_capacity(self.len);
        for _ in 0..self.len {
            let letter = match word.last() {
                None => letter_at(rng.gen_range(0..self.alphabet)),
                Some(&prev) if self.alphabet > 1 => {
                    let mut i = rng.gen_range(0..self.alphabet - 1);
                    let banned = (0..self.alphabet).find(|&k| letter_at(k) == -prev).unwrap();
                    if i >= banned {
                        i += 1;
                    }
                    letter_at(i)
                }
                Some(_) => letter_at(0),
            };
            word.push(letter);
        }
        Some(WordUnit {
            word,
            first_prefix: self.first_prefix,
        })
    }
}

struct Evaluated {
    word: Vec<i64>,
    isometry: Isometry,
    outcome: Result<SalemDecomposition>,
}

fn evaluate_unit(gens: &GeneratorSet, dim: usize, unit: &WordUnit) -> Vec<Evaluated> {
    let mut out = Vec::new();
    let mut acc = Isometry::identity(dim);
    for (j, &w) in unit.word.iter().enumerate() {
        acc = acc.compose(gens.letter(w));
        if j + 1 >= unit.first_prefix.max(1) {
            let outcome = salem_decomposition(&char_poly(&acc));
            out.push(Evaluated {
                word: unit.word[..=j].to_vec(),
                isometry: acc.clone(),
                outcome,
            });
        }
    }
    out
}

/// Higher degree, then larger radius lower bound, then shorter word.
fn better(cand: (&SalemDecomposition, usize), best: (&SalemDecomposition, usize)) -> bool {
    let (cd, cl) = cand;
    let (bd, bl) = best;
    match cd.salem_degree.cmp(&bd.salem_degree) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match cd.spectral_radius.0.cmp(&bd.spectral_radius.0) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => cl < bl,
        },
    }
}

/// Searches with the default strategy.
pub fn search_max_salem(l: &Lattice, gens: &GeneratorSet, cfg: &SearchConfig) -> Result<SearchReport> {
    search_with_strategy(l, gens, cfg, search_strategies().default_entry())
}

/// Runs `strategy` until the target degree is reached or `budget` words have
/// been examined. Every examined word is checked against the degree bound.
pub fn search_with_strategy(
    l: &Lattice,
    gens: &GeneratorSet,
    cfg: &SearchConfig,
    strategy: &dyn SearchStrategy,
) -> Result<SearchReport> {
    if gens.is_empty() {
        return Err(Error::NoInfiniteClasses);
    }
    let dim = l.dim();
    let target = gens.target_degree(dim);
    let identity = Isometry::identity(dim);
    let mut report = SearchReport {
        best_word: Vec::new(),
        decomposition: salem_decomposition(&char_poly(&identity))?,
        best_isometry: identity,
        achieved_degree: 0,
        target_degree: target,
        max_degree_seen: 0,
        words_examined: 0,
        seed: cfg.seed,
        max_word_len: cfg.max_word_len,
        budget: cfg.budget,
        strategy: strategy.name().to_string(),
    };
    if report.achieved_degree == target {
        return Ok(report);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))?;
    let mut units = strategy.units(gens.len(), cfg);
    loop {
        let batch: Vec<WordUnit> = units.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            return Err(Error::BudgetExhausted(Box::new(report)));
        }
        let results: Vec<Vec<Evaluated>> =
            pool.install(|| batch.par_iter().map(|u| evaluate_unit(gens, dim, u)).collect());
        for ev in results.into_iter().flatten() {
            if report.words_examined >= cfg.budget {
                return Err(Error::BudgetExhausted(Box::new(report)));
            }
            report.words_examined += 1;
            let dec = match ev.outcome {
                Ok(d) => d,
                Err(Error::NotSpectrallySalem(p)) => {
                    return Err(Error::SpectralAnomaly(format!("{:?} (remainder {p})", ev.word)));
                }
                Err(e) => return Err(e),
            };
            if dec.salem_degree > target {
                return Err(Error::Inconsistent(format!(
                    "word {:?} has Salem degree {} above the bound {target}",
                    ev.word, dec.salem_degree
                )));
            }
            report.max_degree_seen = report.max_degree_seen.max(dec.salem_degree);
            if better((&dec, ev.word.len()), (&report.decomposition, report.best_word.len())) {
                report.achieved_degree = dec.salem_degree;
                report.best_word = ev.word;
                report.best_isometry = ev.isometry;
                report.decomposition = dec;
                if report.achieved_degree == target {
                    return Ok(report);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_word_order() {
        let words: Vec<Vec<i64>> = ReducedWords::new(2, 2).map(|u| u.word).collect();
        assert_eq!(&words[..4], &[vec![1], vec![-1], vec![2], vec![-2]]);
        assert_eq!(words[4], vec![1, 1]);
        assert!(!words.contains(&vec![1, -1]));
        // 4 words of length 1, 4 * 3 of length 2
        assert_eq!(words.len(), 16);
    }

    #[test]
    fn random_walks_are_reduced_and_seeded() {
        let a: Vec<WordUnit> = RandomWalks::new(3, 8, 1, 7).take(20).collect();
        let b: Vec<WordUnit> = RandomWalks::new(3, 8, 1, 7).take(20).collect();
        assert_eq!(a, b);
        let c: Vec<WordUnit> = RandomWalks::new(3, 8, 1, 8).take(20).collect();
        assert_ne!(a, c);
        for u in &a {
            assert!(u.word.windows(2).all(|w| w[0] != -w[1]));
        }
    }

    #[test]
    fn registry_names() {
        let r = search_strategies();
        assert_eq!(r.names(), vec!["hybrid", "exhaustive", "random-walk"]);
        assert!(r.get("nope").is_err());
    }
}
