use std::collections::HashMap;

use super::FinCategory;

const UNSET: usize = usize::MAX;

/// A composition table with identities `0..k` (identity of object `a` is
/// `a`) followed by the other morphisms.
#[derive(Clone)]
struct Table {
    k: usize,
    dom: Vec<usize>,
    cod: Vec<usize>,
    /// `comp[g * m + f]`, `UNSET` when not composable.
    comp: Vec<usize>,
}

impl Table {
    fn m(&self) -> usize {
        self.dom.len()
    }

    fn is_id(&self, f: usize) -> bool {
        f < self.k
    }

    fn get(&self, g: usize, f: usize) -> Option<usize> {
        if self.is_id(g) {
            Some(f)
        } else if self.is_id(f) {
            Some(g)
        } else {
            Some(self.comp[g * self.m() + f]).filter(|&h| h != UNSET)
        }
    }

    fn from_category(c: &FinCategory) -> Table {
        let k = c.num_objects();
        let mut order: Vec<usize> = (0..k).map(|x| c.identity(x)).collect();
        order.extend((0..c.num_morphisms()).filter(|&f| !c.is_identity(f)));
        let mut new = vec![0; c.num_morphisms()];
        for (i, &f) in order.iter().enumerate() {
            new[f] = i;
        }
        let m = order.len();
        let mut comp = vec![UNSET; m * m];
        for (gi, &g) in order.iter().enumerate() {
            for (fi, &f) in order.iter().enumerate() {
                if let Some(h) = c.composite(g, f) {
                    comp[gi * m + fi] = new[h];
                }
            }
        }
        Table {
            k,
            dom: order.iter().map(|&f| c.dom(f)).collect(),
            cod: order.iter().map(|&f| c.cod(f)).collect(),
            comp,
        }
    }

    fn hom_counts(&self, perm: &[usize]) -> Vec<usize> {
        // perm: new object -> old object
        let k = self.k;
        let mut inv = vec![0; k];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut h = vec![0; k * k];
        for f in k..self.m() {
            h[inv[self.dom[f]] * k + inv[self.cod[f]]] += 1;
        }
        h
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

struct Canonicalizer {
    perms: Vec<Vec<Vec<usize>>>,
}

impl Canonicalizer {
    fn new() -> Self {
        Canonicalizer { perms: (0..=6).map(permutations).collect() }
    }

    fn perms(&self, n: usize) -> std::borrow::Cow<'_, [Vec<usize>]> {
        match self.perms.get(n) {
            Some(p) => std::borrow::Cow::Borrowed(p),
            None => std::borrow::Cow::Owned(permutations(n)),
        }
    }

    /// Lexicographically least code over all relabelings, with the
    /// relabeling (old morphism -> new) and object order achieving it.
    fn canonical(&self, t: &Table) -> (Vec<u32>, Vec<usize>, Vec<usize>) {
        let k = t.k;
        let m = t.m();
        let object_perms = self.perms(k);
        let best_h = object_perms.iter().map(|p| t.hom_counts(p)).min().unwrap_or_default();
        let mut best: Option<(Vec<u32>, Vec<usize>, Vec<usize>)> = None;
        for sigma in object_perms.iter().filter(|p| t.hom_counts(p) == best_h) {
            // groups of old non-identity morphisms per new hom cell
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for a in 0..k {
                for b in 0..k {
                    let g: Vec<usize> = (k..m).filter(|&f| t.dom[f] == sigma[a] && t.cod[f] == sigma[b]).collect();
                    if !g.is_empty() {
                        groups.push(g);
                    }
                }
            }
            let mut label = vec![0; m];
            for (new, &old) in sigma.iter().enumerate() {
                label[old] = new;
            }
            let mut prefix: Vec<u32> = vec![k as u32];
            prefix.extend(best_h.iter().map(|&h| h as u32));
            self.relabel_groups(t, &groups, 0, k, &mut label, &prefix, sigma, &mut best);
        }
        best.unwrap_or_else(|| (vec![0], Vec::new(), Vec::new()))
    }

    #[allow(clippy::too_many_arguments)]
    fn relabel_groups(
        &self,
        t: &Table,
        groups: &[Vec<usize>],
        at: usize,
        next: usize,
        label: &mut Vec<usize>,
        prefix: &[u32],
        sigma: &[usize],
        best: &mut Option<(Vec<u32>, Vec<usize>, Vec<usize>)>,
    ) {
        if at == groups.len() {
            let code = encode(t, label, prefix, best.as_ref().map(|b| b.0.as_slice()));
            if let Some(code) = code {
                *best = Some((code, label.clone(), sigma.to_vec()));
            }
            return;
        }
        let g = &groups[at];
        for p in self.perms(g.len()).iter() {
            for (i, &pi) in p.iter().enumerate() {
                label[g[pi]] = next + i;
            }
            self.relabel_groups(t, groups, at + 1, next + g.len(), label, prefix, sigma, best);
        }
    }
}

/// The code of `t` under `label`, if it is smaller than `bound`.
fn encode(t: &Table, label: &[usize], prefix: &[u32], bound: Option<&[u32]>) -> Option<Vec<u32>> {
    let m = t.m();
    let mut inv = vec![0; m];
    for (old, &new) in label.iter().enumerate() {
        inv[new] = old;
    }
    let mut code = prefix.to_vec();
    let mut tie = bound.is_some();
    if let Some(b) = bound {
        match code.as_slice().cmp(&b[..code.len().min(b.len())]) {
            std::cmp::Ordering::Greater => return None,
            std::cmp::Ordering::Less => tie = false,
            std::cmp::Ordering::Equal => {}
        }
    }
    for gn in t.k..m {
        for fn_ in t.k..m {
            let (g, f) = (inv[gn], inv[fn_]);
            if t.cod[f] != t.dom[g] {
                continue;
            }
            let v = label[t.comp[g * m + f]] as u32;
            if tie {
                let b = bound.unwrap()[code.len()];
                if v > b {
                    return None;
                }
                if v < b {
                    tie = false;
                }
            }
            code.push(v);
        }
    }
    if tie {
        None
    } else {
        Some(code)
    }
}

/// An isomorphism invariant of a valid category: equal codes exactly for
/// isomorphic categories.
pub fn canonical_code(c: &FinCategory) -> Vec<u32> {
    Canonicalizer::new().canonical(&Table::from_category(c)).0
}

fn object_name(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("X{i}")
    }
}

fn to_category(t: &Table, label: &[usize], sigma: &[usize]) -> FinCategory {
    let k = t.k;
    let m = t.m();
    let mut inv_obj = vec![0; k];
    for (new, &old) in sigma.iter().enumerate() {
        inv_obj[old] = new;
    }
    let mut inv = vec![0; m];
    for (old, &new) in label.iter().enumerate() {
        inv[new] = old;
    }
    let objects: Vec<String> = (0..k).map(object_name).collect();
    let morphisms = (0..m)
        .map(|new| {
            let old = inv[new];
            let name = if new < k { format!("id{}", objects[new]) } else { format!("m{}", new - k + 1) };
            (name, inv_obj[t.dom[old]], inv_obj[t.cod[old]])
        })
        .collect();
    let mut composites = Vec::new();
    for g in 0..m {
        for f in 0..m {
            if t.cod[f] == t.dom[g] {
                let h = t.get(g, f).expect("complete table");
                composites.push((label[g], label[f], label[h]));
            }
        }
    }
    FinCategory::new(objects, morphisms, (0..k).collect(), &composites).expect("enumerated table is well formed")
}

/// Hom-count matrices (non-identity arrows) on `k` objects summing to `r`,
/// one per orbit under relabeling of objects.
fn shapes(k: usize, r: usize, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    fn fill(cells: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == cells {
            if r == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=r {
            cur.push(v);
            fill(cells, r - v, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    fill(k * k, r, &mut Vec::new(), &mut all);
    all.into_iter()
        .filter(|h| {
            perms.iter().all(|p| {
                let image: Vec<usize> = (0..k * k).map(|i| h[p[i / k] * k + p[i % k]]).collect();
                image >= *h
            })
        })
        .collect()
}

struct Search<'a> {
    t: Table,
    cells: Vec<(usize, usize)>,
    canon: &'a Canonicalizer,
    seen: HashMap<Vec<u32>, (Vec<usize>, Vec<usize>, Table)>,
}

impl Search<'_> {
    fn run(&mut self, at: usize) {
        if at == self.cells.len() {
            let (code, label, sigma) = self.canon.canonical(&self.t);
            self.seen.entry(code).or_insert_with(|| (label, sigma, self.t.clone()));
            return;
        }
        let (g, f) = self.cells[at];
        let m = self.t.m();
        let (d, c) = (self.t.dom[f], self.t.cod[g]);
        for h in 0..m {
            if self.t.dom[h] != d || self.t.cod[h] != c {
                continue;
            }
            self.t.comp[g * m + f] = h;
            if self.consistent(g, f, h) {
                self.run(at + 1);
            }
        }
        self.t.comp[g * m + f] = UNSET;
    }

    /// Associativity of every triple whose four lookups became known with
    /// the new cell `g ∘ f = v`.
    fn consistent(&self, p: usize, q: usize, v: usize) -> bool {
        let t = &self.t;
        let m = t.m();
        let agree = |a: Option<usize>, b: Option<usize>| match (a, b) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        };
        let nonid = t.k..m;
        // (x, p, q): x ∘ v against (x ∘ p) ∘ q
        for x in nonid.clone() {
            if t.dom[x] == t.cod[p] {
                let xp = t.get(x, p);
                if !agree(t.get(x, v), xp.and_then(|xp| t.get(xp, q))) {
                    return false;
                }
            }
        }
        // (p, q, z): p ∘ (q ∘ z) against v ∘ z
        for z in nonid.clone() {
            if t.cod[z] == t.dom[q] {
                let qz = t.get(q, z);
                if !agree(qz.and_then(|qz| t.get(p, qz)), t.get(v, z)) {
                    return false;
                }
            }
        }
        for y in nonid.clone() {
            for z in nonid.clone() {
                if t.cod[z] != t.dom[y] {
                    continue;
                }
                let yz = t.comp[y * m + z];
                // (p, y, z) with y ∘ z = q: p ∘ q = v against (p ∘ y) ∘ z
                if yz == q && t.dom[p] == t.cod[y] && !agree(Some(v), t.get(p, y).and_then(|py| t.get(py, z))) {
                    return false;
                }
                // (y, z, q) with y ∘ z = p: y ∘ (z ∘ q) against p ∘ q = v
                if yz == p && t.cod[q] == t.dom[z] && !agree(t.get(z, q).and_then(|zq| t.get(y, zq)), Some(v)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Every category with at most `max_morphisms` morphisms and at most
/// `max_objects` objects, one per isomorphism class, each relabeled into its
/// canonical form and sorted by size and canonical code.
pub fn enumerate_categories(max_morphisms: usize, max_objects: usize) -> Vec<FinCategory> {
    let canon = Canonicalizer::new();
    let mut out: Vec<(usize, Vec<u32>, FinCategory)> = Vec::new();
    for total in 0..=max_morphisms {
        for k in 0..=total.min(max_objects) {
            let r = total - k;
            let perms = canon.perms(k).into_owned();
            for shape in shapes(k, r, &perms) {
                let mut dom: Vec<usize> = (0..k).collect();
                let mut cod: Vec<usize> = (0..k).collect();
                for a in 0..k {
                    for b in 0..k {
                        for _ in 0..shape[a * k + b] {
                            dom.push(a);
                            cod.push(b);
                        }
                    }
                }
                let m = dom.len();
                let mut cells = Vec::new();
                for g in k..m {
                    for f in k..m {
                        if cod[f] == dom[g] {
                            cells.push((g, f));
                        }
                    }
                }
                let mut search = Search {
                    t: Table { k, dom, cod, comp: vec![UNSET; m * m] },
                    cells,
                    canon: &canon,
                    seen: HashMap::new(),
                };
                search.run(0);
                for (code, (label, sigma, table)) in search.seen {
                    out.push((total, code, to_category(&table, &label, &sigma)));
                }
            }
        }
    }
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.into_iter().map(|(_, _, c)| c).collect()
}

#[cfg(test)]
mod tests {
    use super::super::validate_category;
    use super::*;

    fn count(n: usize, max_objects: usize) -> usize {
        enumerate_categories(n, max_objects).iter().filter(|c| c.num_morphisms() == n).count()
    }

    #[test]
    fn published_category_counts() {
        // finite categories with n morphisms, up to isomorphism
        let counts: Vec<usize> = (0..=5).map(|n| count(n, n)).collect();
        assert_eq!(counts, [1, 1, 3, 11, 55, 329]);
    }

    /// Smallest relabelled table over every permutation of the morphisms,
    /// with objects named by their identities.
    fn brute_code(c: &FinCategory) -> Vec<usize> {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..n {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = c.num_morphisms();
        let mut best: Option<Vec<usize>> = None;
        for sigma in perms(n) {
            let mut inv = vec![0; n];
            for (i, &s) in sigma.iter().enumerate() {
                inv[s] = i;
            }
            let mut code = Vec::new();
            for new in 0..n {
                let f = inv[new];
                code.push(usize::from(c.is_identity(f)));
                code.push(sigma[c.identity(c.dom(f))]);
                code.push(sigma[c.identity(c.cod(f))]);
            }
            for ng in 0..n {
                for nf in 0..n {
                    code.push(c.composite(inv[ng], inv[nf]).map_or(n, |h| sigma[h]));
                }
            }
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
        best.unwrap_or_default()
    }

    /// Every labelled category with `n` morphisms, deduplicated by
    /// [`brute_code`].
    fn brute_count(n: usize) -> usize {
        let mut classes = std::collections::HashSet::new();
        for k in 1..=n {
            let extra = n - k;
            for ends in 0..(k * k).pow(extra as u32) {
                let mut e = ends;
                let mut morphisms: Vec<(String, usize, usize)> = (0..k).map(|x| (format!("i{x}"), x, x)).collect();
                for m in 0..extra {
                    let v = e % (k * k);
                    e /= k * k;
                    morphisms.push((format!("m{m}"), v / k, v % k));
                }
                let pairs: Vec<(usize, usize)> = (k..n)
                    .flat_map(|g| (k..n).map(move |f| (g, f)))
                    .filter(|&(g, f)| morphisms[f].2 == morphisms[g].1)
                    .collect();
                let options: Vec<Vec<usize>> = pairs
                    .iter()
                    .map(|&(g, f)| (0..n).filter(|&h| morphisms[h].1 == morphisms[f].1 && morphisms[h].2 == morphisms[g].2).collect())
                    .collect();
                if options.iter().any(Vec::is_empty) {
                    continue;
                }
                let total: usize = options.iter().map(Vec::len).product();
                for mut choice in 0..total {
                    let table: Vec<(usize, usize, usize)> = pairs
                        .iter()
                        .zip(&options)
                        .map(|(&(g, f), opts)| {
                            let h = opts[choice % opts.len()];
                            choice /= opts.len();
                            (g, f, h)
                        })
                        .collect();
                    let objects = (0..k).map(|x| format!("O{x}")).collect();
                    let c = FinCategory::new(objects, morphisms.clone(), (0..k).collect(), &table)
                        .unwrap()
                        .with_identity_composites();
                    if validate_category(&c).is_empty() {
                        classes.insert(brute_code(&c));
                    }
                }
            }
        }
        classes.len() + usize::from(n == 0)
    }

    #[test]
    fn counts_match_brute_force() {
        for n in 0..=4 {
            assert_eq!(count(n, n), brute_count(n), "n = {n}");
        }
    }

    #[test]
    fn published_monoid_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| count(n, 1)).collect();
        assert_eq!(counts, [1, 2, 7, 35, 228]);
    }

    #[test]
    fn enumerated_categories_are_valid_and_distinct() {
        let cats = enumerate_categories(4, 4);
        let mut codes = std::collections::HashSet::new();
        for c in &cats {
            assert!(validate_category(c).is_empty(), "{:?}", c.to_json());
            assert!(codes.insert(canonical_code(c)));
        }
    }

    #[test]
    fn canonical_code_ignores_labels() {
        let a = FinCategory::new(
            vec!["P".into(), "Q".into()],
            vec![("f".into(), 1, 0), ("1P".into(), 0, 0), ("1Q".into(), 1, 1)],
            vec![1, 2],
            &[],
        )
        .unwrap()
        .with_identity_composites();
        let b = FinCategory::total_order(2);
        assert_eq!(canonical_code(&a), canonical_code(&b));
        assert_ne!(canonical_code(&b), canonical_code(&FinCategory::discrete(["A", "B"])));
    }
}
