//! Aggregated counts `N^{alpha,beta}(d, g)` and the recursions among them.
//!
//! A count is the multiplicity-weighted number of lambda-increasing paths
//! with the key's step count from `(0, I(beta))` to `q`. The same numbers
//! satisfy a degeneration recursion that converts one moving contact into a
//! fixed one or drops the degree by one; for triangles there is additionally
//! a recursion for the irreducible counts and a disconnected-from-connected
//! consistency oracle. All engines agree exactly, which `verify_engines`
//! checks key by key.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::iter::{ParallelBridge, ParallelIterator};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{enumerate_paths, LatticePoint, LatticePolygon};
use crate::multiplicity::{MuRoute, MultiplicityContext};
use crate::seq::{alpha_beta_pairs, multinomial, partition_sequences, Sequence};

/// A counting key: polygon, genus and the fixed/moving contact sequences,
/// with `I(alpha) + I(beta)` equal to the height of the left edge.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CountKey {
    polygon: LatticePolygon,
    genus: i64,
    alpha: Sequence,
    beta: Sequence,
}

impl CountKey {
    pub fn new(
        polygon: LatticePolygon,
        genus: i64,
        alpha: Sequence,
        beta: Sequence,
    ) -> Result<Self> {
        let height = polygon.height() as u64;
        if alpha.weighted_sum() + beta.weighted_sum() != height {
            return Err(Error::InvalidKey(format!(
                "I*alpha + I*beta must equal {} ({} + {} = {})",
                height,
                alpha.weighted_sum(),
                beta.weighted_sum(),
                alpha.weighted_sum() + beta.weighted_sum()
            )));
        }
        Ok(CountKey {
            polygon,
            genus,
            alpha,
            beta,
        })
    }

    pub fn triangle(d: u32, genus: i64, alpha: Sequence, beta: Sequence) -> Result<Self> {
        CountKey::new(LatticePolygon::triangle(d), genus, alpha, beta)
    }

    pub fn rectangle(
        dprime: u32,
        d: u32,
        genus: i64,
        alpha: Sequence,
        beta: Sequence,
    ) -> Result<Self> {
        CountKey::new(LatticePolygon::rectangle(dprime, d), genus, alpha, beta)
    }

    pub fn polygon(&self) -> LatticePolygon {
        self.polygon
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }

    pub fn alpha(&self) -> &Sequence {
        &self.alpha
    }

    pub fn beta(&self) -> &Sequence {
        &self.beta
    }

    /// Steps of a qualifying path: `2d + g + |beta| - 1` for the triangle,
    /// `2d' + d + g + |beta| - 1` for the rectangle. May be non-positive,
    /// in which case the key counts zero.
    pub fn step_count(&self) -> i64 {
        let base = match self.polygon {
            LatticePolygon::Triangle { size } => 2 * size as i64,
            LatticePolygon::Rectangle { width, height } => 2 * width as i64 + height as i64,
        };
        base + self.genus + self.beta.part_count() as i64 - 1
    }
}

impl fmt::Display for CountKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}/{}",
            polygon_tag(self.polygon),
            self.genus,
            self.alpha,
            self.beta
        )
    }
}

fn polygon_tag(polygon: LatticePolygon) -> String {
    match polygon {
        LatticePolygon::Triangle { size } => format!("t{size}"),
        LatticePolygon::Rectangle { width, height } => format!("r{width}x{height}"),
    }
}

fn parse_polygon_tag(s: &str) -> Option<LatticePolygon> {
    if let Some(d) = s.strip_prefix('t') {
        let d: u32 = d.parse().ok()?;
        (d >= 1).then(|| LatticePolygon::triangle(d))
    } else if let Some(rest) = s.strip_prefix('r') {
        let (w, h) = rest.split_once('x')?;
        let (w, h): (u32, u32) = (w.parse().ok()?, h.parse().ok()?);
        (w >= 1 && h >= 1).then(|| LatticePolygon::rectangle(w, h))
    } else {
        None
    }
}

/// Engine tag, part of the memo key and of result records.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Path enumeration with the recursive multiplicity engines.
    Paths,
    /// Path enumeration with the closed-form multiplicity engines.
    Closed,
    /// The degeneration recursion (triangle or rectangle).
    Ch,
    /// The irreducible-curve recursion.
    Irr,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Paths => "paths",
            Engine::Closed => "closed",
            Engine::Ch => "ch",
            Engine::Irr => "irr",
        }
    }

    pub fn from_str_tag(s: &str) -> Option<Engine> {
        match s {
            "paths" => Some(Engine::Paths),
            "closed" => Some(Engine::Closed),
            "ch" => Some(Engine::Ch),
            "irr" => Some(Engine::Irr),
            _ => None,
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Largest genus a degree can carry: the interior lattice point count.
pub fn max_genus(polygon: LatticePolygon) -> i64 {
    match polygon {
        LatticePolygon::Triangle { size } => {
            let d = size as i64;
            (d - 1) * (d - 2) / 2
        }
        LatticePolygon::Rectangle { width, height } => {
            (width as i64 - 1) * (height as i64 - 1)
        }
    }
}

/// Count engine with a shared memo table. All methods are callable from any
/// number of threads; the table has read-or-compute semantics (duplicate
/// computation possible, results identical).
pub struct Counter {
    memo: Mutex<HashMap<(CountKey, Engine), BigInt>>,
    memoize: bool,
    jobs: usize,
}

impl Default for Counter {
    fn default() -> Self {
        Counter::new()
    }
}

impl Counter {
    pub fn new() -> Self {
        Counter {
            memo: Mutex::new(HashMap::new()),
            memoize: true,
            jobs: 1,
        }
    }

    /// Disables the memo table; recursions recompute every subproblem.
    pub fn without_memoization() -> Self {
        Counter {
            memoize: false,
            ..Counter::new()
        }
    }

    /// Number of worker threads for path enumeration (1 = sequential).
    /// The result is identical at every level.
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    fn lookup(&self, key: &CountKey, engine: Engine) -> Option<BigInt> {
        if !self.memoize {
            return None;
        }
        self.memo
            .lock()
            .unwrap()
            .get(&(key.clone(), engine))
            .cloned()
    }

    fn store(&self, key: &CountKey, engine: Engine, value: &BigInt) {
        if self.memoize {
            self.memo
                .lock()
                .unwrap()
                .insert((key.clone(), engine), value.clone());
        }
    }

    /// `N_path`: sum of `mu_{alpha,beta}` over all qualifying paths, using
    /// the recursive multiplicity engines. Infeasible keys count zero.
    pub fn n_path(&self, key: &CountKey) -> Result<BigInt> {
        self.count_paths(key, MuRoute::Recursive, Engine::Paths)
    }

    /// `N_path` with the closed-form multiplicity engines.
    pub fn n_path_closed(&self, key: &CountKey) -> Result<BigInt> {
        self.count_paths(key, MuRoute::ClosedForm, Engine::Closed)
    }

    fn count_paths(&self, key: &CountKey, route: MuRoute, engine: Engine) -> Result<BigInt> {
        if let Some(v) = self.lookup(key, engine) {
            return Ok(v);
        }
        let steps = key.step_count();
        let value = if steps < 1 {
            BigInt::zero()
        } else {
            let poly = key.polygon();
            let start = LatticePoint::new(0, key.beta().weighted_sum() as i64);
            let end = poly.lambda_max();
            // Column-skip pruning is sound: skipping paths have multiplicity 0.
            let paths = || enumerate_paths(poly, start, end, steps as usize, true);
            let total: BigRational = if self.jobs > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(self.jobs)
                    .build()
                    .expect("thread pool");
                pool.install(|| {
                    paths()
                        .par_bridge()
                        .map_init(
                            || {
                                MultiplicityContext::new(poly, key.alpha(), key.beta(), route)
                                    .expect("key validated")
                            },
                            |ctx, path| ctx.evaluate(&path).map(|m| m.total),
                        )
                        .try_reduce(BigRational::zero, |a, b| Ok(a + b))
                })?
            } else {
                let mut ctx = MultiplicityContext::new(poly, key.alpha(), key.beta(), route)?;
                let mut acc = BigRational::zero();
                for path in paths() {
                    acc += ctx.evaluate(&path)?.total;
                }
                acc
            };
            if !total.denom().is_one() {
                return Err(Error::NonIntegralTotal {
                    key: key.to_string(),
                    value: total.to_string(),
                });
            }
            total.to_integer()
        };
        self.store(key, engine, &value);
        Ok(value)
    }

    /// The degeneration recursion for triangle keys. Degree at most 1 is
    /// delegated to path enumeration, which covers every base combination
    /// of genus and contact sequences uniformly.
    pub fn ch_count(&self, key: &CountKey) -> Result<BigInt> {
        let LatticePolygon::Triangle { size: d } = key.polygon() else {
            return Err(Error::InvalidKey(
                "ch_count needs a triangle key; use ch_count_rect for rectangles".into(),
            ));
        };
        if d <= 1 {
            return self.n_path(key);
        }
        if let Some(v) = self.lookup(key, Engine::Ch) {
            return Ok(v);
        }
        let mut total = BigInt::zero();

        // Turn one moving contact of weight k into a fixed one.
        total += self.fixing_sum(key, |child| self.ch_count(&child))?;

        // Drop the degree by one. beta' = beta + tau runs over all
        // extensions with I(alpha') + I(beta') = d - 1, and the genus
        // satisfies g - g' = |tau| - 1 <= d - 2.
        let inner = LatticePolygon::triangle(d - 1);
        let ibeta = key.beta().weighted_sum();
        for alpha_p in key.alpha().dominated() {
            let Some(extra) = (d as u64 - 1).checked_sub(alpha_p.weighted_sum() + ibeta) else {
                continue;
            };
            for tau in partition_sequences(extra) {
                let cut = tau.part_count() as i64;
                if cut - 1 > d as i64 - 2 {
                    continue;
                }
                let beta_p = key.beta() + &tau;
                let child =
                    CountKey::new(inner, key.genus() - (cut - 1), alpha_p.clone(), beta_p.clone())?;
                let coeff =
                    tau.weighted_power() * key.alpha().binom(&alpha_p) * beta_p.binom(key.beta());
                total += coeff * self.ch_count(&child)?;
            }
        }
        self.store(key, Engine::Ch, &total);
        Ok(total)
    }

    /// The analogous recursion for rectangle keys, recursing on the width.
    /// The side conditions mirror the triangle case: `alpha' <= alpha`,
    /// `beta' >= beta`, `I(alpha') + I(beta') = d`, `g - g' = |beta' - beta| - 1`
    /// and `g - g' <= d - 1`.
    pub fn ch_count_rect(&self, key: &CountKey) -> Result<BigInt> {
        let LatticePolygon::Rectangle { width, height } = key.polygon() else {
            return Err(Error::InvalidKey(
                "ch_count_rect needs a rectangle key; use ch_count for triangles".into(),
            ));
        };
        if width <= 1 {
            return self.n_path(key);
        }
        if let Some(v) = self.lookup(key, Engine::Ch) {
            return Ok(v);
        }
        let mut total = BigInt::zero();

        total += self.fixing_sum(key, |child| self.ch_count_rect(&child))?;

        let inner = LatticePolygon::rectangle(width - 1, height);
        let ibeta = key.beta().weighted_sum();
        for alpha_p in key.alpha().dominated() {
            let Some(extra) = (height as u64).checked_sub(alpha_p.weighted_sum() + ibeta) else {
                continue;
            };
            for tau in partition_sequences(extra) {
                let cut = tau.part_count() as i64;
                if cut - 1 > height as i64 - 1 {
                    continue;
                }
                let beta_p = key.beta() + &tau;
                let child =
                    CountKey::new(inner, key.genus() - (cut - 1), alpha_p.clone(), beta_p.clone())?;
                let coeff =
                    tau.weighted_power() * key.alpha().binom(&alpha_p) * beta_p.binom(key.beta());
                total += coeff * self.ch_count_rect(&child)?;
            }
        }
        self.store(key, Engine::Ch, &total);
        Ok(total)
    }

    /// First recursion sum, shared by all engines: `sum_k k * N(alpha + e_k,
    /// beta - e_k)` over the weights with `beta_k > 0`.
    fn fixing_sum<F>(&self, key: &CountKey, recurse: F) -> Result<BigInt>
    where
        F: Fn(CountKey) -> Result<BigInt>,
    {
        let mut total = BigInt::zero();
        for (k, _) in key.beta().weighted_entries() {
            let unit = Sequence::unit(k);
            let child = CountKey::new(
                key.polygon(),
                key.genus(),
                key.alpha() + &unit,
                key.beta().checked_sub(&unit)?,
            )?;
            total += BigInt::from(k) * recurse(child)?;
        }
        Ok(total)
    }

    /// The recursion for irreducible counts on triangle keys. The second sum
    /// runs over unordered collections of components `(d_j, g_j, alpha^j,
    /// beta^j, beta^j')` with `sum d_j = d - 1`, `sum alpha^j <= alpha`,
    /// `sum (beta^j - beta^j') = beta`, `|beta^j'| > 0` and
    /// `g = sum g_j + sum |beta^j'| - k`, weighted by the point-distribution
    /// multinomial, the sequence multinomial over alpha, the per-component
    /// factors and `1/sigma` for repeated identical components.
    pub fn irr_count(&self, key: &CountKey) -> Result<BigInt> {
        let LatticePolygon::Triangle { size: d } = key.polygon() else {
            return Err(Error::InvalidKey(
                "irr_count is defined for triangle keys only".into(),
            ));
        };
        if d <= 1 {
            // Every curve of degree 1 is irreducible.
            return self.n_path(key);
        }
        if let Some(v) = self.lookup(key, Engine::Irr) {
            return Ok(v);
        }
        let mut total = BigRational::zero();

        for (k, _) in key.beta().weighted_entries() {
            let unit = Sequence::unit(k);
            let child = CountKey::new(
                key.polygon(),
                key.genus(),
                key.alpha() + &unit,
                key.beta().checked_sub(&unit)?,
            )?;
            total += BigRational::from_integer(BigInt::from(k) * self.irr_count(&child)?);
        }

        let n_total = 2 * d as i64 + key.genus() + key.beta().part_count() as i64 - 2;
        let components = component_choices(d - 1);
        let mut chosen = Vec::new();
        self.irr_collections(
            &components,
            key,
            n_total,
            0,
            d - 1,
            &Sequence::zero(),
            &Sequence::zero(),
            0,
            &mut chosen,
            &mut total,
        )?;

        if !total.denom().is_one() {
            return Err(Error::NonIntegralTotal {
                key: key.to_string(),
                value: total.to_string(),
            });
        }
        let value = total.to_integer();
        self.store(key, Engine::Irr, &value);
        Ok(value)
    }

    #[allow(clippy::too_many_arguments)]
    fn irr_collections(
        &self,
        components: &[Component],
        key: &CountKey,
        n_total: i64,
        start: usize,
        degree_left: u32,
        alpha_used: &Sequence,
        net_used: &Sequence,
        genus_used: i64,
        chosen: &mut Vec<usize>,
        total: &mut BigRational,
    ) -> Result<()> {
        if degree_left == 0 {
            if !chosen.is_empty() && net_used == key.beta() && genus_used == key.genus() {
                *total += self.collection_term(components, chosen, key, n_total)?;
            }
            return Ok(());
        }
        for idx in start..components.len() {
            let c = &components[idx];
            if c.degree > degree_left {
                continue;
            }
            let alpha_next = alpha_used + &c.alpha;
            if !key.alpha().dominates(&alpha_next) {
                continue;
            }
            let net_next = net_used + &c.net;
            if !key.beta().dominates(&net_next) {
                continue;
            }
            // Each component contributes g_j + |beta^j'| - 1 >= 0.
            let genus_next = genus_used + c.genus + c.cut.part_count() as i64 - 1;
            if genus_next > key.genus() {
                continue;
            }
            chosen.push(idx);
            self.irr_collections(
                components,
                key,
                n_total,
                idx,
                degree_left - c.degree,
                &alpha_next,
                &net_next,
                genus_next,
                chosen,
                total,
            )?;
            chosen.pop();
        }
        Ok(())
    }

    fn collection_term(
        &self,
        components: &[Component],
        chosen: &[usize],
        key: &CountKey,
        n_total: i64,
    ) -> Result<BigRational> {
        let mut product = BigInt::one();
        let mut point_counts = Vec::with_capacity(chosen.len());
        for &idx in chosen {
            let c = &components[idx];
            let child =
                CountKey::triangle(c.degree, c.genus, c.alpha.clone(), c.beta.clone())?;
            let sub = self.irr_count(&child)?;
            if sub.is_zero() {
                return Ok(BigRational::zero());
            }
            product *= c.beta.binom(&c.net) * c.cut.weighted_power() * sub;
            point_counts.push(c.point_count());
        }
        debug_assert_eq!(point_counts.iter().sum::<u64>() as i64, n_total);
        if n_total < 0 {
            return Ok(BigRational::zero());
        }
        let alpha_parts: Vec<Sequence> =
            chosen.iter().map(|&i| components[i].alpha.clone()).collect();
        product *= multinomial(n_total as u64, &point_counts);
        product *= key.alpha().multinom(&alpha_parts);

        // sigma: product of the factorials of the multiplicities of repeated
        // identical components. chosen is nondecreasing, so count runs.
        let mut sigma = BigInt::one();
        let mut run = 1u64;
        for w in chosen.windows(2) {
            if w[0] == w[1] {
                run += 1;
                sigma *= BigInt::from(run);
            } else {
                run = 1;
            }
        }
        Ok(BigRational::new(product, sigma))
    }

    /// Disconnected counts rebuilt from irreducible ones: sum over unordered
    /// multisets of components `(d_i, g_i)` with `sum d_i = d` and
    /// `sum g_i - (k - 1) = g`, distributing the `3d + g - 1` points. A pure
    /// consistency oracle: must equal `n_path` with `alpha = (0)`,
    /// `beta = (d)`.
    pub fn connected_from_irreducible(&self, d: u32, genus: i64) -> Result<BigInt> {
        if d < 1 {
            return Err(Error::InvalidKey("degree must be at least 1".into()));
        }
        let n_total = 3 * d as i64 + genus - 1;
        let mut pieces = Vec::new();
        for deg in 1..=d {
            for g in 0..=max_genus(LatticePolygon::triangle(deg)) {
                pieces.push((deg, g));
            }
        }
        let mut total = BigRational::zero();
        let mut chosen = Vec::new();
        self.connected_collect(&pieces, genus, n_total, 0, d, 0, &mut chosen, &mut total)?;
        if !total.denom().is_one() {
            return Err(Error::NonIntegralTotal {
                key: format!("connected d={d} g={genus}"),
                value: total.to_string(),
            });
        }
        Ok(total.to_integer())
    }

    #[allow(clippy::too_many_arguments)]
    fn connected_collect(
        &self,
        pieces: &[(u32, i64)],
        genus: i64,
        n_total: i64,
        start: usize,
        degree_left: u32,
        genus_sum: i64,
        chosen: &mut Vec<usize>,
        total: &mut BigRational,
    ) -> Result<()> {
        if degree_left == 0 {
            let k = chosen.len() as i64;
            if k >= 1 && genus_sum - (k - 1) == genus {
                debug_assert!(n_total >= 0);
                let counts: Vec<u64> = chosen
                    .iter()
                    .map(|&i| (3 * pieces[i].0 as i64 + pieces[i].1 - 1) as u64)
                    .collect();
                debug_assert_eq!(counts.iter().sum::<u64>() as i64, n_total);
                let mut product = multinomial(n_total as u64, &counts);
                for &i in chosen.iter() {
                    let (deg, g) = pieces[i];
                    let key = CountKey::triangle(
                        deg,
                        g,
                        Sequence::zero(),
                        Sequence::new(vec![deg as u64]),
                    )?;
                    product *= self.irr_count(&key)?;
                    if product.is_zero() {
                        break;
                    }
                }
                let mut sigma = BigInt::one();
                let mut run = 1u64;
                for w in chosen.windows(2) {
                    if w[0] == w[1] {
                        run += 1;
                        sigma *= BigInt::from(run);
                    } else {
                        run = 1;
                    }
                }
                *total += BigRational::new(product, sigma);
            }
            return Ok(());
        }
        for idx in start..pieces.len() {
            let (deg, _g) = pieces[idx];
            if deg > degree_left {
                continue;
            }
            chosen.push(idx);
            self.connected_collect(
                pieces,
                genus,
                n_total,
                idx,
                degree_left - deg,
                genus_sum + pieces[idx].1,
                chosen,
                total,
            )?;
            chosen.pop();
        }
        Ok(())
    }

    /// Serializes the memo table as `key<TAB>value` lines with decimal
    /// values, in a deterministic order.
    pub fn save_cache<W: Write>(&self, mut writer: W) -> io::Result<usize> {
        let map = self.memo.lock().unwrap();
        let mut lines: Vec<String> = map
            .iter()
            .map(|((key, engine), value)| format!("{key}/{engine}\t{value}"))
            .collect();
        lines.sort();
        for line in &lines {
            writeln!(writer, "{line}")?;
        }
        Ok(lines.len())
    }

    /// Loads `key<TAB>value` lines into the memo table; lines that do not
    /// parse are skipped. Returns the number of entries loaded.
    pub fn load_cache<R: BufRead>(&self, reader: R) -> io::Result<usize> {
        let mut loaded = 0;
        let mut map = self.memo.lock().unwrap();
        for line in reader.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key_text, value_text)) = line.split_once('\t') else {
                continue;
            };
            let Some((key, engine)) = parse_memo_key(key_text) else {
                continue;
            };
            let Ok(value) = value_text.parse::<BigInt>() else {
                continue;
            };
            map.insert((key, engine), value);
            loaded += 1;
        }
        Ok(loaded)
    }

    /// Cross-checks every engine over all admissible keys up to `d_max`:
    /// path enumeration against the degeneration recursion, closed-form
    /// against recursive multiplicities path by path, and (for triangles)
    /// the disconnected oracle against the irreducible recursion.
    pub fn verify_engines(&self, d_max: u32, class: PolygonClass) -> Result<VerifyReport> {
        let polygons: Vec<LatticePolygon> = match class {
            PolygonClass::Triangle => (1..=d_max).map(LatticePolygon::triangle).collect(),
            PolygonClass::Rectangle => (1..=d_max)
                .flat_map(|w| (1..=d_max).map(move |h| LatticePolygon::rectangle(w, h)))
                .collect(),
        };

        let mut keys_exercised = 0usize;
        let mut recursion = EngineCheck::new(match class {
            PolygonClass::Triangle => "n_path = ch_count",
            PolygonClass::Rectangle => "n_path = ch_count_rect",
        });
        let mut mu_check = EngineCheck::new("closed-form mu = recursive mu per path");
        let mut irr_check = EngineCheck::new("connected_from_irreducible = n_path");

        for &poly in &polygons {
            for key in admissible_keys(poly) {
                let by_paths = self.n_path(&key)?;
                let by_recursion = match class {
                    PolygonClass::Triangle => self.ch_count(&key)?,
                    PolygonClass::Rectangle => self.ch_count_rect(&key)?,
                };
                if by_paths != by_recursion {
                    recursion
                        .failures
                        .push(format!("{key}: paths={by_paths} recursion={by_recursion}"));
                }
                keys_exercised += 1;
            }
            self.check_multiplicity_engines(poly, &mut mu_check)?;
        }

        if class == PolygonClass::Triangle {
            for d in 1..=d_max {
                let lo = 2 - 3 * (d as i64) - 1;
                let hi = max_genus(LatticePolygon::triangle(d)) + 1;
                for g in lo..=hi {
                    let key = CountKey::triangle(
                        d,
                        g,
                        Sequence::zero(),
                        Sequence::new(vec![d as u64]),
                    )?;
                    let direct = self.n_path(&key)?;
                    let assembled = self.connected_from_irreducible(d, g)?;
                    if direct != assembled {
                        irr_check.failures.push(format!(
                            "d={d} g={g}: paths={direct} assembled={assembled}"
                        ));
                    }
                    keys_exercised += 1;
                }
            }
        }

        let mut checks = vec![recursion, mu_check];
        if class == PolygonClass::Triangle {
            checks.push(irr_check);
        }
        Ok(VerifyReport {
            checks,
            keys_exercised,
        })
    }

    /// Compares the two multiplicity routes on every path of every
    /// admissible `(alpha, beta)` of the polygon, across all step counts
    /// that an admissible key can request, column-skipping paths included.
    fn check_multiplicity_engines(
        &self,
        poly: LatticePolygon,
        check: &mut EngineCheck,
    ) -> Result<()> {
        let height = poly.height() as u64;
        let base = match poly {
            LatticePolygon::Triangle { size } => 2 * size as i64,
            LatticePolygon::Rectangle { width, height } => 2 * width as i64 + height as i64,
        };
        for (alpha, beta) in alpha_beta_pairs(height) {
            let start = LatticePoint::new(0, beta.weighted_sum() as i64);
            let max_steps = base + max_genus(poly) + 1 + beta.part_count() as i64 - 1;
            let mut recursive =
                MultiplicityContext::new(poly, &alpha, &beta, MuRoute::Recursive)?;
            let mut closed = MultiplicityContext::new(poly, &alpha, &beta, MuRoute::ClosedForm)?;
            for steps in 1..=max_steps.max(1) {
                for path in enumerate_paths(poly, start, poly.lambda_max(), steps as usize, false)
                {
                    let r = recursive.evaluate(&path)?;
                    let c = closed.evaluate(&path)?;
                    if r != c {
                        check.failures.push(format!(
                            "{}/alpha={alpha}/beta={beta}: path {:?}: recursive ({}, {}) vs closed ({}, {})",
                            polygon_tag(poly),
                            path.points(),
                            r.positive,
                            r.negative,
                            c.positive,
                            c.negative,
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Polygon family for `verify_engines`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PolygonClass {
    Triangle,
    Rectangle,
}

/// One component choice for the irreducible recursion's second sum.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Component {
    degree: u32,
    genus: i64,
    alpha: Sequence,
    beta: Sequence,
    /// `beta^j'`: the ends merged into the left part; nonempty.
    cut: Sequence,
    /// `beta^j - beta^j'`: the ends the component keeps.
    net: Sequence,
}

impl Component {
    /// Points fixing this component: `2d_j + g_j + |beta^j| - 1`.
    fn point_count(&self) -> u64 {
        (2 * self.degree as i64 + self.genus + self.beta.part_count() as i64 - 1) as u64
    }
}

/// Every admissible component of degree up to `max_degree`, sorted.
fn component_choices(max_degree: u32) -> Vec<Component> {
    let mut out = Vec::new();
    for degree in 1..=max_degree {
        let gmax = max_genus(LatticePolygon::triangle(degree));
        for genus in 0..=gmax {
            for (alpha, beta) in alpha_beta_pairs(degree as u64) {
                for cut in beta.dominated() {
                    if cut.part_count() == 0 {
                        continue;
                    }
                    let net = beta.checked_sub(&cut).expect("cut dominated by beta");
                    out.push(Component {
                        degree,
                        genus,
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                        cut,
                        net,
                    });
                }
            }
        }
    }
    out.sort();
    out
}

/// All keys of a polygon worth checking: every `(alpha, beta)` splitting of
/// the height, with the genus running from just below the smallest value
/// with a positive step count to just above the interior-point bound (the
/// out-of-range endpoints exercise the zero cases).
pub fn admissible_keys(polygon: LatticePolygon) -> Vec<CountKey> {
    let height = polygon.height() as u64;
    let base = match polygon {
        LatticePolygon::Triangle { size } => 2 * size as i64,
        LatticePolygon::Rectangle { width, height } => 2 * width as i64 + height as i64,
    };
    let gmax = max_genus(polygon);
    let mut keys = Vec::new();
    for (alpha, beta) in alpha_beta_pairs(height) {
        let gmin = 2 - base - beta.part_count() as i64;
        for g in (gmin - 1)..=(gmax + 1) {
            keys.push(
                CountKey::new(polygon, g, alpha.clone(), beta.clone())
                    .expect("pairs split the height"),
            );
        }
    }
    keys
}

/// Result of one engine comparison.
#[derive(Clone, Debug, Serialize)]
pub struct EngineCheck {
    pub name: String,
    pub failures: Vec<String>,
}

impl EngineCheck {
    fn new(name: &str) -> Self {
        EngineCheck {
            name: name.to_string(),
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Structured pass/fail report of `verify_engines`.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<EngineCheck>,
    pub keys_exercised: usize,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }
}

fn parse_memo_key(s: &str) -> Option<(CountKey, Engine)> {
    let parts: Vec<&str> = s.split('/').collect();
    let [shape, genus, alpha, beta, engine] = parts[..] else {
        return None;
    };
    let polygon = parse_polygon_tag(shape)?;
    let genus: i64 = genus.parse().ok()?;
    let alpha: Sequence = alpha.parse().ok()?;
    let beta: Sequence = beta.parse().ok()?;
    let engine = Engine::from_str_tag(engine)?;
    let key = CountKey::new(polygon, genus, alpha, beta).ok()?;
    Some((key, engine))
}
