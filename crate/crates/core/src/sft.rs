//! Subshifts of finite type, admissible words, and locally constant
//! potentials.
//!
//! Symbols are 0-indexed internally. Anywhere a word is read from or shown
//! to a human (digit strings, `Display`), symbols are 1-indexed to match
//! the usual alphabet convention `{1, 2, ...}`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math;

/// Errors raised by system and potential construction and word evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum SftError {
    /// Adjacency matrix is not square of the stated size.
    NonSquare,
    /// Adjacency entry outside {0, 1}.
    BadEntry { row: usize, col: usize },
    /// A row or column of zeros: the symbol can never occur.
    StrandedSymbol { symbol: usize },
    /// Word count exceeds the exact integer range.
    Overflow,
    /// Potential table lacks an admissible word of the stated depth.
    MissingEntry(Word),
    /// Potential table carries a key that is not an admissible depth-word.
    ExtraEntry(Word),
    /// Potential value is NaN or infinite.
    NonFinite(Word),
    /// Word too short for the requested evaluation.
    TooShort,
    /// Word (or its periodic wraparound) violates the transition matrix.
    Inadmissible,
    /// Operands built over different systems.
    SystemMismatch,
    /// Unparsable word string (symbols are the digits 1-9).
    BadWordString(String),
}

impl fmt::Display for SftError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SftError::NonSquare => write!(f, "adjacency matrix is not square of the stated size"),
            SftError::BadEntry { row, col } => {
                write!(f, "adjacency entry ({row},{col}) is not 0 or 1")
            }
            SftError::StrandedSymbol { symbol } => {
                write!(f, "symbol {} has an all-zero row or column", symbol + 1)
            }
            SftError::Overflow => write!(f, "word count exceeds the exact integer range"),
            SftError::MissingEntry(w) => write!(f, "potential table misses admissible word {w}"),
            SftError::ExtraEntry(w) => write!(f, "potential table has non-admissible key {w}"),
            SftError::NonFinite(w) => write!(f, "potential value at {w} is not finite"),
            SftError::TooShort => write!(f, "word too short for the requested evaluation"),
            SftError::Inadmissible => write!(f, "word is not admissible for the system"),
            SftError::SystemMismatch => write!(f, "operands belong to different systems"),
            SftError::BadWordString(s) => write!(f, "cannot parse word string {s:?}"),
        }
    }
}

impl core::error::Error for SftError {}

/// A one-sided subshift of finite type: the sequences over `{0..N-1}`
/// allowed by a 0/1 transition matrix, together with its strongly-connected
/// structure and primitivity flag computed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SftSystem {
    alphabet_size: usize,
    adjacency: Vec<u8>,
    scc_id: Vec<usize>,
    scc_count: usize,
    is_primitive: bool,
}

/// Builds an [`SftSystem`], validating the matrix and computing the SCC
/// decomposition and primitivity (irreducible plus aperiodic).
pub fn make_sft(alphabet_size: usize, adjacency: &[Vec<u8>]) -> Result<SftSystem, SftError> {
    let n = alphabet_size;
    if n == 0 || adjacency.len() != n {
        return Err(SftError::NonSquare);
    }
    let mut flat = vec![0u8; n * n];
    for (i, row) in adjacency.iter().enumerate() {
        if row.len() != n {
            return Err(SftError::NonSquare);
        }
        for (j, &e) in row.iter().enumerate() {
            if e > 1 {
                return Err(SftError::BadEntry { row: i, col: j });
            }
            flat[i * n + j] = e;
        }
    }
    for s in 0..n {
        let row_empty = (0..n).all(|j| flat[s * n + j] == 0);
        let col_empty = (0..n).all(|i| flat[i * n + s] == 0);
        if row_empty || col_empty {
            return Err(SftError::StrandedSymbol { symbol: s });
        }
    }
    let (scc_id, scc_count) = scc_decompose(&flat, n);
    let is_primitive = scc_count == 1 && graph_period(&flat, n, &scc_id, 0) == 1;
    Ok(SftSystem {
        alphabet_size: n,
        adjacency: flat,
        scc_id,
        scc_count,
        is_primitive,
    })
}

/// The golden mean shift: two symbols, `22` forbidden.
pub fn golden_mean() -> SftSystem {
    make_sft(2, &[vec![1, 1], vec![1, 0]]).expect("golden mean matrix is valid")
}

/// The full shift on `n` symbols (all transitions allowed).
pub fn full_shift(n: usize) -> SftSystem {
    make_sft(n, &vec![vec![1u8; n]; n]).expect("full shift matrix is valid")
}

/// Kosaraju's algorithm with iterative DFS. Components are relabelled so
/// that component ids increase with their smallest member symbol.
fn scc_decompose(adj: &[u8], n: usize) -> (Vec<usize>, usize) {
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        seen[start] = true;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            let mut advanced = false;
            while *next < n {
                let v = *next;
                *next += 1;
                if adj[u * n + v] == 1 && !seen[v] {
                    seen[v] = true;
                    stack.push((v, 0));
                    advanced = true;
                    break;
                }
            }
            if !advanced && matches!(stack.last(), Some(&(uu, nx)) if uu == u && nx >= n) {
                order.push(u);
                stack.pop();
            }
        }
    }
    let mut id = vec![usize::MAX; n];
    let mut count = 0;
    for &start in order.iter().rev() {
        if id[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        id[start] = count;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if adj[v * n + u] == 1 && id[v] == usize::MAX {
                    id[v] = count;
                    stack.push(v);
                }
            }
        }
        count += 1;
    }
    // relabel by smallest member for deterministic component order
    let mut min_member = vec![usize::MAX; count];
    for s in 0..n {
        min_member[id[s]] = min_member[id[s]].min(s);
    }
    let mut by_min: Vec<usize> = (0..count).collect();
    by_min.sort_unstable_by_key(|&c| min_member[c]);
    let mut relabel = vec![0usize; count];
    for (new, &old) in by_min.iter().enumerate() {
        relabel[old] = new;
    }
    for s in 0..n {
        id[s] = relabel[id[s]];
    }
    (id, count)
}

/// Period of one strongly connected component: the gcd of
/// `level(u) + 1 - level(v)` over intra-component edges from a BFS root.
/// Returns 0 for a component with no internal edge (a transient symbol).
fn graph_period(adj: &[u8], n: usize, scc_id: &[usize], component: usize) -> u64 {
    let root = match (0..n).find(|&s| scc_id[s] == component) {
        Some(r) => r,
        None => return 0,
    };
    let mut level = vec![i64::MIN; n];
    level[root] = 0;
    let mut queue = vec![root];
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        for v in 0..n {
            if adj[u * n + v] == 1 && scc_id[v] == component && level[v] == i64::MIN {
                level[v] = level[u] + 1;
                queue.push(v);
            }
        }
    }
    let mut g: u64 = 0;
    for u in 0..n {
        if scc_id[u] != component || level[u] == i64::MIN {
            continue;
        }
        for v in 0..n {
            if adj[u * n + v] == 1 && scc_id[v] == component {
                let d = level[u] + 1 - level[v];
                g = math::gcd(g, d.unsigned_abs());
            }
        }
    }
    g
}

impl SftSystem {
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn scc_count(&self) -> usize {
        self.scc_count
    }

    pub fn is_primitive(&self) -> bool {
        self.is_primitive
    }

    /// Component id of a symbol (ids ordered by smallest member).
    pub fn scc_of(&self, symbol: usize) -> usize {
        self.scc_id[symbol]
    }

    #[inline]
    pub fn is_edge(&self, from: usize, to: usize) -> bool {
        self.adjacency[from * self.alphabet_size + to] == 1
    }

    pub fn adjacency_rows(&self) -> Vec<Vec<u8>> {
        (0..self.alphabet_size)
            .map(|i| self.adjacency[i * self.alphabet_size..(i + 1) * self.alphabet_size].to_vec())
            .collect()
    }

    pub fn is_admissible(&self, symbols: &[usize]) -> bool {
        if symbols.iter().any(|&s| s >= self.alphabet_size) {
            return false;
        }
        symbols.windows(2).all(|w| self.is_edge(w[0], w[1]))
    }

    /// Exact number of admissible words of length `n`, by `n - 1`
    /// matrix-vector products in checked 128-bit arithmetic.
    pub fn count_admissible_words(&self, n: usize) -> Result<u128, SftError> {
        assert!(n >= 1, "word length must be at least 1");
        let size = self.alphabet_size;
        let mut v = vec![1u128; size];
        for _ in 1..n {
            let mut next = vec![0u128; size];
            for i in 0..size {
                let mut acc: u128 = 0;
                for j in 0..size {
                    if self.adjacency[i * size + j] == 1 {
                        acc = acc.checked_add(v[j]).ok_or(SftError::Overflow)?;
                    }
                }
                next[i] = acc;
            }
            v = next;
        }
        let mut total: u128 = 0;
        for x in v {
            total = total.checked_add(x).ok_or(SftError::Overflow)?;
        }
        Ok(total)
    }

    /// `log` of the admissible word count, in log-space float arithmetic.
    /// Usable far past the exact-integer range (lengths up to ~10^6).
    pub fn log_admissible_word_count(&self, n: usize) -> f64 {
        assert!(n >= 1, "word length must be at least 1");
        let size = self.alphabet_size;
        let mut v = vec![0.0f64; size];
        let mut terms = Vec::with_capacity(size);
        for _ in 1..n {
            let mut next = vec![f64::NEG_INFINITY; size];
            for i in 0..size {
                terms.clear();
                for j in 0..size {
                    if self.adjacency[i * size + j] == 1 {
                        terms.push(v[j]);
                    }
                }
                next[i] = math::log_sum_exp(&terms);
            }
            v = next;
        }
        math::log_sum_exp(&v)
    }

    /// All admissible words of length `n`, in lexicographic order. Meant for
    /// small `n`; enumeration cost is the word count itself.
    pub fn admissible_words(&self, n: usize) -> Vec<Word> {
        assert!(n >= 1, "word length must be at least 1");
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(n);
        self.enumerate_into(n, &mut prefix, &mut out);
        out
    }

    fn enumerate_into(&self, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Word>) {
        if prefix.len() == n {
            out.push(Word::new(prefix.clone()));
            return;
        }
        for s in 0..self.alphabet_size {
            if let Some(&last) = prefix.last() {
                if !self.is_edge(last, s) {
                    continue;
                }
            }
            prefix.push(s);
            self.enumerate_into(n, prefix, out);
            prefix.pop();
        }
    }
}

/// A finite word over the alphabet, the cylinder representative used for
/// Birkhoff sums and potential tables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    symbols: Vec<usize>,
}

impl Word {
    pub fn new(symbols: Vec<usize>) -> Self {
        Word { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    /// Parses a 1-indexed digit string: `"121"` is symbol 1, then 2, then 1
    /// (internally 0, 1, 0).
    pub fn parse_digits(s: &str) -> Result<Self, SftError> {
        let mut symbols = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c.to_digit(10) {
                Some(d) if d >= 1 => symbols.push((d - 1) as usize),
                _ => return Err(SftError::BadWordString(String::from(s))),
            }
        }
        if symbols.is_empty() {
            return Err(SftError::BadWordString(String::from(s)));
        }
        Ok(Word { symbols })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.iter().all(|&s| s < 9) {
            for &s in &self.symbols {
                write!(f, "{}", s + 1)?;
            }
            Ok(())
        } else {
            let mut first = true;
            for &s in &self.symbols {
                if !first {
                    write!(f, "-")?;
                }
                write!(f, "{}", s + 1)?;
                first = false;
            }
            Ok(())
        }
    }
}

/// A depth-`k` locally constant potential: one finite value per admissible
/// `k`-word. The table is validated to cover exactly the admissible words.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    system: SftSystem,
    depth: usize,
    table: BTreeMap<Vec<usize>, f64>,
}

/// Validates and wraps a potential table over the admissible depth-words.
pub fn make_potential(
    system: &SftSystem,
    depth: usize,
    table: BTreeMap<Vec<usize>, f64>,
) -> Result<Potential, SftError> {
    assert!(depth >= 1, "potential depth must be at least 1");
    for (key, &value) in &table {
        if key.len() != depth || !system.is_admissible(key) {
            return Err(SftError::ExtraEntry(Word::new(key.clone())));
        }
        if !value.is_finite() {
            return Err(SftError::NonFinite(Word::new(key.clone())));
        }
    }
    for word in system.admissible_words(depth) {
        if !table.contains_key(word.symbols()) {
            return Err(SftError::MissingEntry(word));
        }
    }
    Ok(Potential {
        system: system.clone(),
        depth,
        table,
    })
}

impl Potential {
    /// The identically-zero depth-1 potential; its pressure is the
    /// topological entropy.
    pub fn zero(system: &SftSystem) -> Self {
        Self::constant(system, 0.0)
    }

    pub fn constant(system: &SftSystem, c: f64) -> Self {
        let table = (0..system.alphabet_size()).map(|s| (vec![s], c)).collect();
        Potential {
            system: system.clone(),
            depth: 1,
            table,
        }
    }

    /// Depth-1 potential from per-symbol weights.
    pub fn symbol_weights(system: &SftSystem, weights: &[f64]) -> Result<Self, SftError> {
        if weights.len() != system.alphabet_size() {
            return Err(SftError::NonSquare);
        }
        let table: BTreeMap<Vec<usize>, f64> = weights
            .iter()
            .enumerate()
            .map(|(s, &w)| (vec![s], w))
            .collect();
        make_potential(system, 1, table)
    }

    /// The indicator of the cylinder `[x0 = symbol]` (0-indexed symbol).
    pub fn symbol_indicator(system: &SftSystem, symbol: usize) -> Self {
        let table = (0..system.alphabet_size())
            .map(|s| (vec![s], if s == symbol { 1.0 } else { 0.0 }))
            .collect();
        Potential {
            system: system.clone(),
            depth: 1,
            table,
        }
    }

    /// Tabulates `f` over the admissible depth-words.
    pub fn from_fn(
        system: &SftSystem,
        depth: usize,
        mut f: impl FnMut(&[usize]) -> f64,
    ) -> Result<Self, SftError> {
        let table = system
            .admissible_words(depth)
            .into_iter()
            .map(|w| {
                let v = f(w.symbols());
                (w.symbols().to_vec(), v)
            })
            .collect();
        make_potential(system, depth, table)
    }

    /// Builds a potential from 1-indexed digit-string keys, e.g.
    /// `[("11", 0.3), ("12", -1.0), ("21", 0.0)]`.
    pub fn from_digit_table(
        system: &SftSystem,
        depth: usize,
        entries: &[(&str, f64)],
    ) -> Result<Self, SftError> {
        let mut table = BTreeMap::new();
        for (key, value) in entries {
            let word = Word::parse_digits(key)?;
            table.insert(word.symbols().to_vec(), *value);
        }
        make_potential(system, depth, table)
    }

    pub fn system(&self) -> &SftSystem {
        &self.system
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn value(&self, word: &[usize]) -> Option<f64> {
        self.table.get(word).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.table.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn max_value(&self) -> f64 {
        self.table
            .values()
            .fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    pub fn min_value(&self) -> f64 {
        self.table.values().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Sup-norm distance between two potentials of equal depth.
    pub fn sup_distance(&self, other: &Potential) -> Result<f64, SftError> {
        if self.system != other.system {
            return Err(SftError::SystemMismatch);
        }
        let d = self.depth.max(other.depth);
        let a = self.extend_depth(d);
        let b = other.extend_depth(d);
        let mut m = 0.0f64;
        for (k, v) in a.iter() {
            let w = b.value(k).unwrap_or(0.0);
            m = m.max(math::abs(v - w));
        }
        Ok(m)
    }

    /// Re-expresses the potential over admissible `new_depth`-words; values
    /// depend on the leading `depth` symbols only.
    pub fn extend_depth(&self, new_depth: usize) -> Potential {
        assert!(new_depth >= self.depth);
        if new_depth == self.depth {
            return self.clone();
        }
        let table = self
            .system
            .admissible_words(new_depth)
            .into_iter()
            .map(|w| {
                let v = self.table[&w.symbols()[..self.depth]];
                (w.symbols().to_vec(), v)
            })
            .collect();
        Potential {
            system: self.system.clone(),
            depth: new_depth,
            table,
        }
    }

    /// `self + coeff * direction`, extended to the common depth.
    pub fn add_scaled(&self, coeff: f64, direction: &Potential) -> Result<Potential, SftError> {
        if self.system != direction.system {
            return Err(SftError::SystemMismatch);
        }
        let d = self.depth.max(direction.depth);
        let a = self.extend_depth(d);
        let b = direction.extend_depth(d);
        let table = a
            .table
            .iter()
            .map(|(k, &v)| (k.clone(), v + coeff * b.table[k]))
            .collect();
        Ok(Potential {
            system: self.system.clone(),
            depth: d,
            table,
        })
    }

    pub fn add_constant(&self, c: f64) -> Potential {
        let table = self
            .table
            .iter()
            .map(|(k, &v)| (k.clone(), v + c))
            .collect();
        Potential {
            system: self.system.clone(),
            depth: self.depth,
            table,
        }
    }

    pub fn scale(&self, coeff: f64) -> Potential {
        let table = self
            .table
            .iter()
            .map(|(k, &v)| (k.clone(), coeff * v))
            .collect();
        Potential {
            system: self.system.clone(),
            depth: self.depth,
            table,
        }
    }

    /// The coboundary-plus-constant `u o shift - u + c` of a depth-1
    /// observable `u`, as a depth-2 potential. Adding one to a potential
    /// leaves the pressure at `P + c`; its asymptotic variance is zero.
    pub fn coboundary(u: &Potential, c: f64) -> Result<Potential, SftError> {
        assert_eq!(
            u.depth, 1,
            "coboundaries are built from depth-1 observables"
        );
        Potential::from_fn(&u.system, 2, |w| u.table[&w[1..2]] - u.table[&w[0..1]] + c)
    }

    /// Birkhoff sum of the first `n` shifts. Words shorter than
    /// `n + depth - 1` are read periodically; the wraparound must be
    /// admissible.
    pub fn birkhoff_sum(&self, word: &Word, n: usize) -> Result<f64, SftError> {
        assert!(n >= 1, "summand count must be at least 1");
        let symbols = word.symbols();
        if symbols.is_empty() {
            return Err(SftError::TooShort);
        }
        if !self.system.is_admissible(symbols) {
            return Err(SftError::Inadmissible);
        }
        let len = symbols.len();
        let needed = n + self.depth - 1;
        let mut window = vec![0usize; self.depth];
        if len >= needed {
            let mut acc = 0.0;
            for k in 0..n {
                window.copy_from_slice(&symbols[k..k + self.depth]);
                acc += self.table[&window];
            }
            Ok(acc)
        } else {
            // periodic reading: the word closes into a loop
            if !self.system.is_edge(symbols[len - 1], symbols[0]) {
                return Err(SftError::Inadmissible);
            }
            let mut acc = 0.0;
            for k in 0..n {
                for (d, slot) in window.iter_mut().enumerate() {
                    *slot = symbols[(k + d) % len];
                }
                acc += self
                    .table
                    .get(&window)
                    .copied()
                    .ok_or(SftError::Inadmissible)?;
            }
            Ok(acc)
        }
    }

    /// Standard higher-block presentation: a depth-`k` potential (k >= 3)
    /// becomes a depth-2 potential on the system whose symbols are the
    /// admissible `(k-1)`-words, with adjacency given by overlap. Depths 1
    /// and 2 pass through unchanged. Pressure and equilibrium state are
    /// preserved; `n`-words of the recoded system biject with
    /// `(n + k - 2)`-words of the original.
    pub fn higher_block_recode(&self) -> (SftSystem, Potential) {
        if self.depth <= 2 {
            return (self.system.clone(), self.clone());
        }
        let k = self.depth;
        let blocks: Vec<Word> = self.system.admissible_words(k - 1);
        let m = blocks.len();
        let mut adjacency = vec![vec![0u8; m]; m];
        for (a, wa) in blocks.iter().enumerate() {
            for (b, wb) in blocks.iter().enumerate() {
                if wa.symbols()[1..] == wb.symbols()[..k - 2] {
                    adjacency[a][b] = 1;
                }
            }
        }
        let system = make_sft(m, &adjacency).expect("higher-block system is valid");
        let mut table = BTreeMap::new();
        let mut word = vec![0usize; k];
        for (a, wa) in blocks.iter().enumerate() {
            for (b, wb) in blocks.iter().enumerate() {
                if adjacency[a][b] == 1 {
                    word[..k - 1].copy_from_slice(wa.symbols());
                    word[k - 1] = wb.symbols()[k - 2];
                    table.insert(vec![a, b], self.table[&word]);
                }
            }
        }
        let potential = Potential {
            system: system.clone(),
            depth: 2,
            table,
        };
        (system, potential)
    }
}

/// Full block recode: all potentials (over one system) become depth-1 on
/// the system whose symbols are the admissible `k`-words, `k` the maximal
/// depth. A depth-2 potential on the golden mean lands on the three-symbol
/// system `{11, 12, 21}`. `n`-words of the recoded system biject with
/// `(n + k - 1)`-words of the original.
pub fn one_block_recode(
    potentials: &[&Potential],
) -> Result<(SftSystem, Vec<Potential>), SftError> {
    assert!(!potentials.is_empty(), "need at least one potential");
    let system = &potentials[0].system;
    for p in potentials {
        if &p.system != system {
            return Err(SftError::SystemMismatch);
        }
    }
    let k = potentials.iter().map(|p| p.depth).max().unwrap();
    if k <= 1 {
        return Ok((
            system.clone(),
            potentials.iter().map(|p| (*p).clone()).collect(),
        ));
    }
    let extended: Vec<Potential> = potentials.iter().map(|p| p.extend_depth(k)).collect();
    let blocks: Vec<Word> = system.admissible_words(k);
    let m = blocks.len();
    let mut adjacency = vec![vec![0u8; m]; m];
    for (a, wa) in blocks.iter().enumerate() {
        for (b, wb) in blocks.iter().enumerate() {
            if wa.symbols()[1..] == wb.symbols()[..k - 1] {
                adjacency[a][b] = 1;
            }
        }
    }
    let new_system = make_sft(m, &adjacency).expect("block system is valid");
    let recoded = extended
        .iter()
        .map(|p| {
            let table = blocks
                .iter()
                .enumerate()
                .map(|(a, w)| (vec![a], p.table[w.symbols()]))
                .collect();
            Potential {
                system: new_system.clone(),
                depth: 1,
                table,
            }
        })
        .collect();
    Ok((new_system, recoded))
}
