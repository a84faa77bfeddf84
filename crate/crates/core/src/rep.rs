//! Representations of algebras with a multiplicative path basis.
//!
//! A [`Presentation`] describes a basic algebra by points, generating arrows
//! and a basis of monomials closed under multiplication (a product of two
//! monomials is a monomial or zero). Monomial bound quiver algebras `kQ/I`
//! are the one-factor case; `A ⊗ kQ/I` is the two-factor case whose
//! monomials are pairs of nonzero paths. No normal forms are ever needed:
//! a monomial is identified by its tuple of paths.
//!
//! A [`Rep`] assigns a vector space to each point and a matrix to each
//! arrow. All homological algebra (covers, syzygies, resolutions, Hom
//! complexes, `Hom(-, regular)` duals, chain-map lifts) lives here and is
//! shared by [`crate::bqa`] and [`crate::layered`].

use std::collections::HashMap;

use rand::Rng;

use crate::exactla::{Fp, Matrix, Subspace};
use crate::quiver::{BoundQuiver, Path};

/// Identifies a monomial: one nonzero path per tensor factor.
pub type MonoKey = Vec<Path>;

#[derive(Debug, Clone)]
pub struct Monomial {
    pub source: usize,
    pub target: usize,
    pub key: MonoKey,
    /// Generating arrows in traversal order.
    pub word: Vec<usize>,
}

impl Monomial {
    pub fn is_trivial(&self) -> bool {
        self.word.is_empty()
    }
}

/// A basic algebra given by points, arrows and a multiplicative monomial basis.
#[derive(Debug, Clone)]
pub struct Presentation {
    fp: Fp,
    points: usize,
    arrows: Vec<(usize, usize)>,
    monomials: Vec<Monomial>,
    trivial: Vec<usize>,
    buckets: Vec<Vec<Vec<usize>>>,
    slot: Vec<usize>,
    left: Vec<Vec<Option<usize>>>,
    right: Vec<Vec<Option<usize>>>,
    keys: HashMap<MonoKey, usize>,
    // per factor: vertex count and stride in the point index
    factor_vertices: Vec<usize>,
    factor_arrow_offsets: Vec<usize>,
    factor_arrow_counts: Vec<usize>,
}

impl Presentation {
    /// Tensor product of monomial bound quiver algebras (one factor gives the algebra itself).
    ///
    /// Points are vertex tuples with the first factor varying fastest. Arrows are
    /// grouped by factor; inside factor `f` the arrow `a` placed at the tuple `c`
    /// of the other factors' vertices gets index `offset_f + c * |arrows_f| + a`.
    pub fn product(fp: Fp, factors: &[&BoundQuiver]) -> Presentation {
        assert!(!factors.is_empty());
        let nf = factors.len();
        let factor_vertices: Vec<usize> = factors.iter().map(|b| b.quiver().vertex_count()).collect();
        let points: usize = factor_vertices.iter().product();
        let point_of = |vs: &[usize]| -> usize {
            let mut idx = 0;
            for f in (0..nf).rev() {
                idx = idx * factor_vertices[f] + vs[f];
            }
            idx
        };
        let coords_of = |mut p: usize| -> Vec<usize> {
            let mut vs = vec![0; nf];
            for f in 0..nf {
                vs[f] = p % factor_vertices[f];
                p /= factor_vertices[f];
            }
            vs
        };
        // index of the tuple of the other factors' vertices
        let other_index = |f: usize, vs: &[usize]| -> usize {
            let mut idx = 0;
            for g in (0..nf).rev() {
                if g != f {
                    idx = idx * factor_vertices[g] + vs[g];
                }
            }
            idx
        };
        let mut arrows = Vec::new();
        let mut factor_arrow_offsets = Vec::with_capacity(nf);
        let mut factor_arrow_counts = Vec::with_capacity(nf);
        for f in 0..nf {
            factor_arrow_offsets.push(arrows.len());
            let q = factors[f].quiver();
            factor_arrow_counts.push(q.arrows().len());
            let others: usize = points / factor_vertices[f];
            let mut block = vec![(0, 0); others * q.arrows().len()];
            for p in 0..points {
                let vs = coords_of(p);
                let c = other_index(f, &vs);
                for (a, arrow) in q.arrows().iter().enumerate() {
                    if vs[f] != arrow.source {
                        continue;
                    }
                    let mut ts = vs.clone();
                    ts[f] = arrow.target;
                    block[c * q.arrows().len() + a] = (p, point_of(&ts));
                }
            }
            arrows.extend(block);
        }

        // Monomials: all tuples of nonzero paths.
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for b in factors {
            let n = b.nonzero_paths().len();
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |i| {
                        let mut t = t.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        let total_len = |t: &[usize]| -> usize {
            t.iter().enumerate().map(|(f, &i)| factors[f].nonzero_paths()[i].len()).sum()
        };
        tuples.sort_by(|a, b| {
            total_len(a)
                .cmp(&total_len(b))
                .then_with(|| a.iter().rev().cmp(b.iter().rev()))
        });
        let mut monomials = Vec::with_capacity(tuples.len());
        let mut keys = HashMap::with_capacity(tuples.len());
        for t in &tuples {
            let key: MonoKey = t
                .iter()
                .enumerate()
                .map(|(f, &i)| factors[f].nonzero_paths()[i].clone())
                .collect();
            let src: Vec<usize> = key.iter().map(|p| p.source).collect();
            let tgt: Vec<usize> = key.iter().map(|p| p.target).collect();
            keys.insert(key.clone(), monomials.len());
            monomials.push(Monomial {
                source: point_of(&src),
                target: point_of(&tgt),
                key,
                word: Vec::new(),
            });
        }

        let arrow_index = |f: usize, a: usize, vs: &[usize]| -> usize {
            factor_arrow_offsets[f] + other_index(f, vs) * factor_arrow_counts[f] + a
        };
        let nm = monomials.len();
        let mut left = vec![vec![None; nm]; arrows.len()];
        let mut right = vec![vec![None; nm]; arrows.len()];
        for (m, mono) in monomials.iter().enumerate() {
            let tv = coords_of(mono.target);
            let sv = coords_of(mono.source);
            for f in 0..nf {
                let bq = factors[f];
                let q = bq.quiver();
                // left: arrow applied after the monomial
                for a in q.arrows_out_of(tv[f]) {
                    let ext = mono.key[f].then(a, q.arrow(a).target);
                    if bq.in_ideal(&ext) {
                        continue;
                    }
                    let mut key = mono.key.clone();
                    key[f] = ext;
                    let idx = arrow_index(f, a, &tv);
                    left[idx][m] = Some(keys[&key]);
                }
                // right: arrow applied before the monomial
                for a in q.arrows_into(sv[f]) {
                    let mut arrows_seq = vec![a];
                    arrows_seq.extend_from_slice(&mono.key[f].arrows);
                    let ext = Path {
                        source: q.arrow(a).source,
                        target: mono.key[f].target,
                        arrows: arrows_seq,
                    };
                    if bq.in_ideal(&ext) {
                        continue;
                    }
                    let mut key = mono.key.clone();
                    key[f] = ext;
                    let idx = arrow_index(f, a, &sv);
                    right[idx][m] = Some(keys[&key]);
                }
            }
        }

        Self::assemble(
            fp,
            points,
            arrows,
            monomials,
            left,
            right,
            keys,
            factor_vertices,
            factor_arrow_offsets,
            factor_arrow_counts,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        fp: Fp,
        points: usize,
        arrows: Vec<(usize, usize)>,
        mut monomials: Vec<Monomial>,
        left: Vec<Vec<Option<usize>>>,
        right: Vec<Vec<Option<usize>>>,
        keys: HashMap<MonoKey, usize>,
        factor_vertices: Vec<usize>,
        factor_arrow_offsets: Vec<usize>,
        factor_arrow_counts: Vec<usize>,
    ) -> Presentation {
        let nm = monomials.len();
        let mut trivial = vec![usize::MAX; points];
        for (m, mono) in monomials.iter().enumerate() {
            if mono.key.iter().all(Path::is_trivial) {
                trivial[mono.source] = m;
            }
        }
        // words: monomials are sorted by length, so every prefix is already done
        let mut words: Vec<Option<Vec<usize>>> = vec![None; nm];
        for &t in &trivial {
            words[t] = Some(Vec::new());
        }
        for m in 0..nm {
            let Some(w) = words[m].clone() else {
                panic!("monomial without factorization");
            };
            for (a, row) in left.iter().enumerate() {
                if let Some(m2) = row[m] {
                    if words[m2].is_none() {
                        let mut w2 = w.clone();
                        w2.push(a);
                        words[m2] = Some(w2);
                    }
                }
            }
        }
        for (mono, w) in monomials.iter_mut().zip(words) {
            mono.word = w.unwrap();
        }
        let mut buckets = vec![vec![Vec::new(); points]; points];
        let mut slot = vec![0; nm];
        for (m, mono) in monomials.iter().enumerate() {
            let b = &mut buckets[mono.source][mono.target];
            slot[m] = b.len();
            b.push(m);
        }
        Presentation {
            fp,
            points,
            arrows,
            monomials,
            trivial,
            buckets,
            slot,
            left,
            right,
            keys,
            factor_vertices,
            factor_arrow_offsets,
            factor_arrow_counts,
        }
    }

    pub fn field(&self) -> Fp {
        self.fp
    }

    pub fn point_count(&self) -> usize {
        self.points
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn trivial(&self, point: usize) -> usize {
        self.trivial[point]
    }

    /// Monomials from `source` to `target`, in basis order.
    pub fn bucket(&self, source: usize, target: usize) -> &[usize] {
        &self.buckets[source][target]
    }

    /// Position of a monomial inside its (source, target) bucket.
    pub fn slot(&self, m: usize) -> usize {
        self.slot[m]
    }

    pub fn monomial_index(&self, key: &MonoKey) -> Option<usize> {
        self.keys.get(key).copied()
    }

    /// `arrow · m` (the arrow applied after `m`).
    pub fn left_mul(&self, arrow: usize, m: usize) -> Option<usize> {
        self.left[arrow][m]
    }

    /// `m · arrow` (the arrow applied before `m`).
    pub fn right_mul(&self, m: usize, arrow: usize) -> Option<usize> {
        self.right[arrow][m]
    }

    /// `outer · inner`: first `inner`, then `outer`.
    pub fn compose(&self, outer: usize, inner: usize) -> Option<usize> {
        if self.monomials[outer].source != self.monomials[inner].target {
            return None;
        }
        let mut cur = inner;
        for &a in &self.monomials[outer].word {
            cur = self.left[a][cur]?;
        }
        Some(cur)
    }

    pub fn factor_vertex_counts(&self) -> &[usize] {
        &self.factor_vertices
    }

    /// Index of arrow `a` of factor `f` placed at the point whose vertex tuple is `vs`.
    pub fn factor_arrow(&self, f: usize, a: usize, vs: &[usize]) -> usize {
        let mut idx = 0;
        for g in (0..self.factor_vertices.len()).rev() {
            if g != f {
                idx = idx * self.factor_vertices[g] + vs[g];
            }
        }
        self.factor_arrow_offsets[f] + idx * self.factor_arrow_counts[f] + a
    }

    pub fn point(&self, vs: &[usize]) -> usize {
        let mut idx = 0;
        for f in (0..self.factor_vertices.len()).rev() {
            idx = idx * self.factor_vertices[f] + vs[f];
        }
        idx
    }

    /// For each monomial, its counterpart (all paths reversed) in the opposite presentation.
    pub fn opposite_correspondence(&self, op: &Presentation) -> Vec<usize> {
        self.monomials
            .iter()
            .map(|m| {
                let key: MonoKey = m.key.iter().map(Path::reversed).collect();
                op.monomial_index(&key).expect("opposite presentation is missing a monomial")
            })
            .collect()
    }

    // ------------------------------------------------------------------
    // Representations

    pub fn zero_rep(&self) -> Rep {
        Rep {
            dims: vec![0; self.points],
            maps: self.arrows.iter().map(|_| Matrix::zeros(self.fp, 0, 0)).collect(),
        }
    }

    /// Checks matrix shapes against the dimension vector.
    pub fn shapes_ok(&self, rep: &Rep) -> bool {
        rep.dims.len() == self.points
            && rep.maps.len() == self.arrows.len()
            && self
                .arrows
                .iter()
                .zip(&rep.maps)
                .all(|(&(s, t), m)| m.shape() == (rep.dims[t], rep.dims[s]))
    }

    /// Matrices of every monomial acting on `rep`.
    pub fn actions(&self, rep: &Rep) -> Vec<Matrix> {
        let mut out: Vec<Option<Matrix>> = vec![None; self.monomials.len()];
        for (m, mono) in self.monomials.iter().enumerate() {
            let mat = if mono.word.is_empty() {
                Matrix::identity(self.fp, rep.dims[mono.source])
            } else {
                // word is sorted by length; the prefix is computed already
                let last = *mono.word.last().unwrap();
                let prefix = self.prefix(m);
                rep.maps[last].mul(out[prefix].as_ref().unwrap())
            };
            out[m] = Some(mat);
        }
        out.into_iter().map(Option::unwrap).collect()
    }

    fn prefix(&self, m: usize) -> usize {
        let mono = &self.monomials[m];
        let mut cur = self.trivial[mono.source];
        for &a in &mono.word[..mono.word.len() - 1] {
            cur = self.left[a][cur].unwrap();
        }
        cur
    }

    /// Indecomposable projective `P(x)`: basis = monomials starting at `x`.
    pub fn projective(&self, x: usize) -> Rep {
        FreeModule::new(vec![x]).rep(self)
    }

    /// The regular module, one copy of each `P(x)`.
    pub fn regular(&self) -> Rep {
        FreeModule::new((0..self.points).collect()).rep(self)
    }

    pub fn simple(&self, x: usize) -> Rep {
        let mut r = self.zero_rep();
        r.dims[x] = 1;
        r.reshape_zero(self);
        r
    }

    /// Vector-space dual, a representation of the opposite presentation.
    pub fn dual(&self, rep: &Rep) -> Rep {
        Rep {
            dims: rep.dims.clone(),
            maps: rep.maps.iter().map(Matrix::transpose).collect(),
        }
    }

    pub fn direct_sum(&self, reps: &[&Rep]) -> Rep {
        let dims = (0..self.points).map(|x| reps.iter().map(|r| r.dims[x]).sum()).collect();
        let maps = (0..self.arrows.len())
            .map(|a| {
                let blocks: Vec<Matrix> = reps.iter().map(|r| r.maps[a].clone()).collect();
                Matrix::block_diag(self.fp, &blocks)
            })
            .collect();
        Rep { dims, maps }
    }

    /// Basis of `Hom(m, n)` as per-point matrix families, from the naturality equations.
    pub fn hom_space(&self, m: &Rep, n: &Rep) -> Vec<Vec<Matrix>> {
        let layout = HomLayout::new(m, n);
        if layout.total == 0 {
            return Vec::new();
        }
        let eq_rows: usize = self.arrows.iter().map(|&(s, t)| n.dims[t] * m.dims[s]).sum();
        let mut sys = Matrix::zeros(self.fp, eq_rows, layout.total);
        let fp = self.fp;
        let mut row0 = 0;
        for (a, &(s, t)) in self.arrows.iter().enumerate() {
            let (na, ma) = (&n.maps[a], &m.maps[a]);
            // N_a f_s - f_t M_a = 0, entry (r, c) with r < n_t, c < m_s
            for r in 0..n.dims[t] {
                for c in 0..m.dims[s] {
                    let row = row0 + r * m.dims[s] + c;
                    for k in 0..n.dims[s] {
                        let v = na.get(r, k);
                        if v != 0 {
                            let col = layout.index(s, k, c);
                            sys.set(row, col, fp.add(sys.get(row, col), v));
                        }
                    }
                    for k in 0..m.dims[t] {
                        let v = ma.get(k, c);
                        if v != 0 {
                            let col = layout.index(t, r, k);
                            sys.set(row, col, fp.sub(sys.get(row, col), v));
                        }
                    }
                }
            }
            row0 += n.dims[t] * m.dims[s];
        }
        sys.kernel()
            .basis_vectors()
            .iter()
            .map(|v| layout.unflatten(self.fp, v))
            .collect()
    }

    pub fn is_hom(&self, m: &Rep, n: &Rep, f: &[Matrix]) -> bool {
        f.len() == self.points
            && (0..self.points).all(|x| f[x].shape() == (n.dims[x], m.dims[x]))
            && self
                .arrows
                .iter()
                .enumerate()
                .all(|(a, &(s, t))| n.maps[a].mul(&f[s]) == f[t].mul(&m.maps[a]))
    }

    /// Radical: at each point the sum of the images of the incoming arrows.
    pub fn radical(&self, rep: &Rep) -> Vec<Subspace> {
        let mut parts: Vec<Vec<Subspace>> = vec![Vec::new(); self.points];
        for (a, &(_, t)) in self.arrows.iter().enumerate() {
            parts[t].push(rep.maps[a].image());
        }
        parts
            .iter()
            .enumerate()
            .map(|(x, ps)| Subspace::sum(self.fp, rep.dims[x], ps).unwrap())
            .collect()
    }

    /// Span of the submodule generated by the given elements `(point, vector)`.
    pub fn generated(&self, rep: &Rep, elements: &[(usize, Vec<u32>)]) -> Vec<Subspace> {
        let acts = self.actions(rep);
        let mut vectors: Vec<Vec<Vec<u32>>> = vec![Vec::new(); self.points];
        for (x, v) in elements {
            for y in 0..self.points {
                for &m in self.bucket(*x, y) {
                    let w = acts[m].mul_vec(v);
                    if w.iter().any(|&e| e != 0) {
                        vectors[y].push(w);
                    }
                }
            }
        }
        vectors
            .iter()
            .enumerate()
            .map(|(y, vs)| Subspace::from_vectors(self.fp, rep.dims[y], vs))
            .collect()
    }

    /// Subrepresentation on the given (invariant) subspaces, with its inclusion.
    pub fn subrep(&self, rep: &Rep, subs: &[Subspace]) -> (Rep, Vec<Matrix>) {
        let incl: Vec<Matrix> = subs.iter().map(Subspace::basis_columns).collect();
        let maps = self
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| subs[t].coords_matrix(&rep.maps[a].mul(&incl[s])))
            .collect();
        let dims = subs.iter().map(Subspace::dim).collect();
        (Rep { dims, maps }, incl)
    }

    /// Quotient by the given (invariant) subspaces, with its projection.
    /// The quotient basis is the image of the standard vectors at non-pivot positions.
    pub fn quotient(&self, rep: &Rep, subs: &[Subspace]) -> (Rep, Vec<Matrix>) {
        let fp = self.fp;
        let mut proj = Vec::with_capacity(self.points);
        let mut lifts = Vec::with_capacity(self.points);
        for (x, sub) in subs.iter().enumerate() {
            let n = rep.dims[x];
            let comp = sub.complement_positions();
            let mut pi = Matrix::zeros(fp, comp.len(), n);
            for c in 0..n {
                let mut e = vec![0u32; n];
                e[c] = 1;
                let r = sub.reduce(&e);
                for (j, &pos) in comp.iter().enumerate() {
                    pi.set(j, c, r[pos]);
                }
            }
            let mut lift = Matrix::zeros(fp, n, comp.len());
            for (j, &pos) in comp.iter().enumerate() {
                lift.set(pos, j, 1);
            }
            proj.push(pi);
            lifts.push(lift);
        }
        let maps = self
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| proj[t].mul(&rep.maps[a]).mul(&lifts[s]))
            .collect();
        let dims = proj.iter().map(Matrix::rows).collect();
        (Rep { dims, maps }, proj)
    }

    pub fn kernel(&self, m: &Rep, f: &[Matrix]) -> (Rep, Vec<Matrix>) {
        let subs: Vec<Subspace> = f.iter().map(Matrix::kernel).collect();
        self.subrep(m, &subs)
    }

    pub fn image(&self, n: &Rep, f: &[Matrix]) -> (Rep, Vec<Matrix>) {
        let subs: Vec<Subspace> = f.iter().map(Matrix::image).collect();
        self.subrep(n, &subs)
    }

    pub fn cokernel(&self, n: &Rep, f: &[Matrix]) -> (Rep, Vec<Matrix>) {
        let subs: Vec<Subspace> = f.iter().map(Matrix::image).collect();
        self.quotient(n, &subs)
    }

    /// Top generators: at each point the standard vectors completing the radical.
    pub fn top_generators(&self, rep: &Rep) -> Vec<(usize, Vec<u32>)> {
        let rad = self.radical(rep);
        let mut gens = Vec::new();
        for (x, r) in rad.iter().enumerate() {
            for c in r.complement_positions() {
                let mut e = vec![0u32; rep.dims[x]];
                e[c] = 1;
                gens.push((x, e));
            }
        }
        gens
    }

    /// Map from a free module sending generator `j` to `images[j]`.
    pub fn map_from_free(&self, free: &FreeModule, images: &[Vec<u32>], target: &Rep, target_acts: &[Matrix]) -> Vec<Matrix> {
        (0..self.points)
            .map(|y| {
                let dim = free.dim_at(self, y);
                let mut out = Matrix::zeros(self.fp, target.dims[y], dim);
                let mut col = 0;
                for (j, &x) in free.gens.iter().enumerate() {
                    for &m in self.bucket(x, y) {
                        let v = target_acts[m].mul_vec(&images[j]);
                        for (r, &e) in v.iter().enumerate() {
                            out.set(r, col, e);
                        }
                        col += 1;
                    }
                }
                out
            })
            .collect()
    }

    /// Minimal projective cover.
    pub fn cover(&self, rep: &Rep) -> Cover {
        self.cover_padded(rep, &[])
    }

    /// Projective cover with extra summands `P(x)` mapped to zero (a non-minimal cover).
    pub fn cover_padded(&self, rep: &Rep, pad: &[usize]) -> Cover {
        let mut gens = self.top_generators(rep);
        for &x in pad {
            gens.push((x, vec![0; rep.dims[x]]));
        }
        let free = FreeModule::new(gens.iter().map(|g| g.0).collect());
        let images: Vec<Vec<u32>> = gens.into_iter().map(|g| g.1).collect();
        let acts = self.actions(rep);
        let epi = self.map_from_free(&free, &images, rep, &acts);
        Cover { free, images, epi }
    }

    /// First syzygy: the kernel of the minimal cover.
    pub fn syzygy(&self, rep: &Rep) -> Rep {
        let cover = self.cover(rep);
        let free_rep = cover.free.rep(self);
        self.kernel(&free_rep, &cover.epi).0
    }

    /// Minimal projective resolution with terms `P_0, ..., P_length` (fewer if it stops).
    pub fn resolution(&self, rep: &Rep, length: usize) -> Resolution {
        self.resolution_padded(rep, length, &[])
    }

    /// Resolution whose zeroth cover is padded with the given extra summands.
    pub fn resolution_padded(&self, rep: &Rep, length: usize, pad: &[usize]) -> Resolution {
        let cover = self.cover_padded(rep, pad);
        let mut free_rep = cover.free.rep(self);
        let (mut kernel, mut incl) = self.kernel(&free_rep, &cover.epi);
        let mut terms = vec![cover.free];
        let augmentation = cover.epi;
        let mut differentials = Vec::new();
        let mut term_reps = vec![free_rep];
        for _ in 1..=length {
            if kernel.is_zero() {
                break;
            }
            let c = self.cover(&kernel);
            let d: Vec<Matrix> = incl.iter().zip(&c.epi).map(|(i, e)| i.mul(e)).collect();
            free_rep = c.free.rep(self);
            let (k2, i2) = self.kernel(&free_rep, &c.epi);
            terms.push(c.free);
            differentials.push(d);
            term_reps.push(free_rep);
            kernel = k2;
            incl = i2;
        }
        Resolution {
            complete: kernel.is_zero(),
            terms,
            term_reps,
            augmentation,
            differentials,
            last_syzygy: kernel,
        }
    }

    /// Matrix of `φ ↦ φ ∘ g` from `Hom(free_tgt, n)` to `Hom(free_src, n)`, where
    /// `g` sends generator `j` of `free_src` to `elements[j]` in `free_tgt`.
    /// Homs out of a free module are recorded by the images of generators.
    pub fn pullback(&self, free_src: &FreeModule, free_tgt: &FreeModule, elements: &[Vec<u32>], n: &Rep, n_acts: &[Matrix]) -> Matrix {
        let rows: usize = free_src.gens.iter().map(|&x| n.dims[x]).sum();
        let cols: usize = free_tgt.gens.iter().map(|&x| n.dims[x]).sum();
        let mut out = Matrix::zeros(self.fp, rows, cols);
        let col_off: Vec<usize> = prefix_sums(free_tgt.gens.iter().map(|&x| n.dims[x]));
        let mut r0 = 0;
        for (g, &x) in free_src.gens.iter().enumerate() {
            let elem = &elements[g];
            let mut pos = 0;
            for (h, &xh) in free_tgt.gens.iter().enumerate() {
                for &m in self.bucket(xh, x) {
                    let c = elem[pos];
                    pos += 1;
                    if c == 0 {
                        continue;
                    }
                    out.add_block(r0, col_off[h], &n_acts[m].scale(c));
                }
            }
            r0 += n.dims[x];
        }
        out
    }

    /// Coboundaries `δ^k : Hom(P_k, n) -> Hom(P_{k+1}, n)` for every available `k`.
    pub fn hom_complex(&self, res: &Resolution, n: &Rep) -> HomComplex {
        let acts = self.actions(n);
        let mut deltas = Vec::new();
        for k in 0..res.differentials.len() {
            let elems = res.generator_images(self, k + 1);
            deltas.push(self.pullback(&res.terms[k + 1], &res.terms[k], &elems, n, &acts));
        }
        let dims = res
            .terms
            .iter()
            .map(|t| t.gens.iter().map(|&x| n.dims[x]).sum())
            .collect();
        HomComplex {
            dims,
            deltas,
            complete: res.complete,
        }
    }

    /// Lifts `f : m -> m'` to a chain map between resolutions, levels `0..=levels`.
    /// Returns per level the images of the generators of `P_k` in `P'_k`.
    pub fn lift(&self, res: &Resolution, res2: &Resolution, f: &[Matrix], levels: usize) -> Vec<Vec<Vec<u32>>> {
        let mut out: Vec<Vec<Vec<u32>>> = Vec::new();
        let mut prev_full: Vec<Matrix> = Vec::new();
        for k in 0..=levels.min(res.terms.len().saturating_sub(1)) {
            let src = &res.terms[k];
            let mut gen_images = Vec::with_capacity(src.gens.len());
            for (g, &x) in src.gens.iter().enumerate() {
                let col = src.offset(self, g, x) + self.slot(self.trivial(x));
                let target_vec = if k == 0 {
                    f[x].mul_vec(&res.augmentation[x].column(col))
                } else {
                    prev_full[x].mul_vec(&res.differentials[k - 1][x].column(col))
                };
                let w = if k < res2.terms.len() {
                    let map = if k == 0 { &res2.augmentation[x] } else { &res2.differentials[k - 1][x] };
                    map.solve(&target_vec).expect("chain map lift must exist")
                } else {
                    assert!(target_vec.iter().all(|&e| e == 0), "chain map lift must exist");
                    Vec::new()
                };
                gen_images.push(w);
            }
            if k < res2.terms.len() {
                let tgt = &res2.terms[k];
                let acts = self.actions(&res2.term_reps[k]);
                prev_full = self.map_from_free(src, &gen_images, &res2.term_reps[k], &acts);
                let _ = tgt;
            } else {
                prev_full = (0..self.points)
                    .map(|y| Matrix::zeros(self.fp, 0, src.dim_at(self, y)))
                    .collect();
            }
            out.push(gen_images);
        }
        out
    }

    /// `Hom(m, Λ)` as a representation of the opposite presentation.
    ///
    /// At op-point `y` the space is `Hom(m, P(y))`; arrow `a : s -> t` acts on the
    /// op side `t -> s` by right multiplication with `a`.
    pub fn star(&self, rep: &Rep) -> StarModule {
        let mut bases = Vec::with_capacity(self.points);
        let mut layouts = Vec::with_capacity(self.points);
        let projectives: Vec<Rep> = (0..self.points).map(|y| self.projective(y)).collect();
        for (y, py) in projectives.iter().enumerate() {
            let layout = HomLayout::new(rep, py);
            let homs = self.hom_space(rep, py);
            let vectors: Vec<Vec<u32>> = homs.iter().map(|h| layout.flatten(h)).collect();
            bases.push(Subspace::from_vectors(self.fp, layout.total, &vectors));
            layouts.push(layout);
            let _ = y;
        }
        let dims: Vec<usize> = bases.iter().map(Subspace::dim).collect();
        let mut maps = Vec::with_capacity(self.arrows.len());
        for (a, &(s, t)) in self.arrows.iter().enumerate() {
            // right multiplication P(t) -> P(s) at each point z
            let rmul: Vec<Matrix> = (0..self.points)
                .map(|z| {
                    let mut r = Matrix::zeros(self.fp, self.bucket(s, z).len(), self.bucket(t, z).len());
                    for (j, &q) in self.bucket(t, z).iter().enumerate() {
                        if let Some(q2) = self.right_mul(q, a) {
                            r.set(self.slot(q2), j, 1);
                        }
                    }
                    r
                })
                .collect();
            let mut mat = Matrix::zeros(self.fp, dims[s], dims[t]);
            for (b, v) in bases[t].basis_vectors().iter().enumerate() {
                let phi = layouts[t].unflatten(self.fp, v);
                let composed: Vec<Matrix> = (0..self.points).map(|z| rmul[z].mul(&phi[z])).collect();
                let coords = bases[s]
                    .coords(&layouts[s].flatten(&composed))
                    .expect("right multiple of a hom is a hom");
                for (r, &c) in coords.iter().enumerate() {
                    mat.set(r, b, c);
                }
            }
            maps.push(mat);
        }
        StarModule {
            rep: Rep { dims, maps },
            bases,
            layouts,
        }
    }

    /// Canonical evaluation `m -> m**` together with `m**` itself.
    pub fn evaluation(&self, op: &Presentation, rep: &Rep) -> (Rep, Vec<Matrix>) {
        let star1 = self.star(rep);
        let star2 = op.star(&star1.rep);
        let corr = self.opposite_correspondence(op);
        let mut ev = Vec::with_capacity(self.points);
        for x in 0..self.points {
            let layout2 = &star2.layouts[x];
            let mut mat = Matrix::zeros(self.fp, star2.rep.dims[x], rep.dims[x]);
            for c in 0..rep.dims[x] {
                // ev(e_c) : m* -> P^op(x), at op-point y: φ ↦ φ_x(e_c)
                let family: Vec<Matrix> = (0..self.points)
                    .map(|y| {
                        let rows = op.bucket(x, y).len();
                        let mut f = Matrix::zeros(self.fp, rows, star1.rep.dims[y]);
                        for (b, v) in star1.bases[y].basis_vectors().iter().enumerate() {
                            let phi = star1.layouts[y].unflatten(self.fp, v);
                            let val = phi[x].column(c);
                            for (i, &q) in self.bucket(y, x).iter().enumerate() {
                                f.set(op.slot(corr[q]), b, val[i]);
                            }
                        }
                        f
                    })
                    .collect();
                let coords = star2.bases[x]
                    .coords(&layout2.flatten(&family))
                    .expect("evaluation is a hom");
                for (r, &e) in coords.iter().enumerate() {
                    mat.set(r, c, e);
                }
            }
            ev.push(mat);
        }
        (star2.rep, ev)
    }

    /// Minimal left approximation by projectives, `m -> ⊕ P(y_j)`, built from
    /// generators of `m*` over the opposite presentation.
    pub fn left_projective_approximation(&self, op: &Presentation, rep: &Rep) -> (FreeModule, Vec<Matrix>) {
        let star = self.star(rep);
        let gens = op.top_generators(&star.rep);
        let free = FreeModule::new(gens.iter().map(|g| g.0).collect());
        let homs: Vec<Vec<Matrix>> = gens
            .iter()
            .map(|(y, coords)| {
                let mut v = vec![0u32; star.layouts[*y].total];
                for (b, basis) in star.bases[*y].basis_vectors().iter().enumerate() {
                    for (o, &e) in v.iter_mut().zip(basis) {
                        *o = self.fp.add(*o, self.fp.mul(coords[b], e));
                    }
                }
                star.layouts[*y].unflatten(self.fp, &v)
            })
            .collect();
        let maps = (0..self.points)
            .map(|x| {
                let mut rows = Matrix::zeros(self.fp, 0, rep.dims[x]);
                for h in &homs {
                    rows = rows.vstack(&h[x]);
                }
                rows
            })
            .collect();
        (free, maps)
    }

    /// Pushout of `P_0 ⊇ Ω m --f--> n`: the extension `0 -> n -> E -> m -> 0` of class `[f]`.
    pub fn extension(&self, m: &Rep, n: &Rep, coeffs: impl FnMut(usize) -> u32) -> Rep {
        let cover = self.cover(m);
        let p0 = cover.free.rep(self);
        let (omega, incl) = self.kernel(&p0, &cover.epi);
        let homs = self.hom_space(&omega, n);
        let mut coeffs = coeffs;
        let mut f: Vec<Matrix> = (0..self.points)
            .map(|x| Matrix::zeros(self.fp, n.dims[x], omega.dims[x]))
            .collect();
        for (i, h) in homs.iter().enumerate() {
            let c = coeffs(i);
            if c == 0 {
                continue;
            }
            for x in 0..self.points {
                f[x] = f[x].add(&h[x].scale(c));
            }
        }
        // E = (n ⊕ P_0) / {(f(k), -k)}
        let sum = self.direct_sum(&[n, &p0]);
        let subs: Vec<Subspace> = (0..self.points)
            .map(|x| {
                let neg_incl = incl[x].scale(self.fp.neg(1) % self.fp.p());
                let stacked = f[x].vstack(&neg_incl);
                stacked.image()
            })
            .collect();
        self.quotient(&sum, &subs).0
    }

    /// Random quotient of a random free module by the submodule generated by
    /// random radical elements.
    pub fn random_module<R: Rng + ?Sized>(&self, budget: usize, rng: &mut R) -> Rep {
        let budget = budget.max(1);
        let summands = rng.gen_range(1..=budget);
        let gens: Vec<usize> = (0..summands).map(|_| rng.gen_range(0..self.points)).collect();
        let relations = rng.gen_range(0..=budget);
        self.random_quotient(&FreeModule::new(gens), relations, rng)
    }

    /// Quotient of `free` by `relations` random elements of its radical.
    pub fn random_quotient<R: Rng + ?Sized>(&self, free: &FreeModule, relations: usize, rng: &mut R) -> Rep {
        let frep = free.rep(self);
        let p = self.fp.p();
        let mut elems = Vec::new();
        for _ in 0..relations {
            let y = rng.gen_range(0..self.points);
            let mut v = vec![0u32; frep.dims[y]];
            let mut pos = 0;
            let mut any = false;
            for &x in &free.gens {
                for &m in self.bucket(x, y) {
                    if !self.monomials[m].is_trivial() {
                        v[pos] = rng.gen_range(0..p);
                        any |= v[pos] != 0;
                    }
                    pos += 1;
                }
            }
            if any {
                elems.push((y, v));
            }
        }
        let subs = self.generated(&frep, &elems);
        self.quotient(&frep, &subs).0
    }
}

fn prefix_sums(it: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = 0;
    it.map(|d| {
        let o = acc;
        acc += d;
        o
    })
    .collect()
}

/// Dimension vector plus one matrix per arrow (shape `dim target x dim source`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rep {
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix>,
}

impl Rep {
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    fn reshape_zero(&mut self, pres: &Presentation) {
        self.maps = pres
            .arrows
            .iter()
            .map(|&(s, t)| Matrix::zeros(pres.fp, self.dims[t], self.dims[s]))
            .collect();
    }
}

/// A finite direct sum of indecomposable projectives, one per generator point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeModule {
    pub gens: Vec<usize>,
}

impl FreeModule {
    pub fn new(gens: Vec<usize>) -> Self {
        FreeModule { gens }
    }

    pub fn dim_at(&self, pres: &Presentation, y: usize) -> usize {
        self.gens.iter().map(|&x| pres.bucket(x, y).len()).sum()
    }

    /// Position of the first basis element `(g, ·)` at point `y`.
    pub fn offset(&self, pres: &Presentation, g: usize, y: usize) -> usize {
        self.gens[..g].iter().map(|&x| pres.bucket(x, y).len()).sum()
    }

    pub fn rep(&self, pres: &Presentation) -> Rep {
        let dims: Vec<usize> = (0..pres.points).map(|y| self.dim_at(pres, y)).collect();
        let maps = pres
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let mut mat = Matrix::zeros(pres.fp, dims[t], dims[s]);
                let (mut cs, mut ct) = (0, 0);
                for &x in &self.gens {
                    for &m in pres.bucket(x, s) {
                        if let Some(m2) = pres.left_mul(a, m) {
                            mat.set(ct + pres.slot(m2), cs + pres.slot(m), 1);
                        }
                    }
                    cs += pres.bucket(x, s).len();
                    ct += pres.bucket(x, t).len();
                }
                mat
            })
            .collect();
        Rep { dims, maps }
    }
}

#[derive(Debug, Clone)]
pub struct Cover {
    pub free: FreeModule,
    /// Image of each generator in the covered module.
    pub images: Vec<Vec<u32>>,
    pub epi: Vec<Matrix>,
}

#[derive(Debug, Clone)]
pub struct Resolution {
    pub terms: Vec<FreeModule>,
    pub term_reps: Vec<Rep>,
    /// `P_0 -> m` at each point.
    pub augmentation: Vec<Matrix>,
    /// `differentials[k-1]` is `d_k : P_k -> P_{k-1}` at each point.
    pub differentials: Vec<Vec<Matrix>>,
    /// True when the resolution ends: the last computed syzygy is zero.
    pub complete: bool,
    /// Kernel of the last map computed.
    pub last_syzygy: Rep,
}

impl Resolution {
    /// Images of the generators of `P_k` under `d_k` (as vectors of `P_{k-1}`).
    pub fn generator_images(&self, pres: &Presentation, k: usize) -> Vec<Vec<u32>> {
        let term = &self.terms[k];
        term.gens
            .iter()
            .enumerate()
            .map(|(g, &x)| {
                let col = term.offset(pres, g, x) + pres.slot(pres.trivial(x));
                self.differentials[k - 1][x].column(col)
            })
            .collect()
    }

    /// Projective dimension if the resolution ended within the computed range.
    pub fn projective_dimension(&self) -> Option<usize> {
        self.complete.then(|| self.terms.len() - 1)
    }
}

/// Cochain complex `Hom(P_•, n)` given by its coboundary matrices.
#[derive(Debug, Clone)]
pub struct HomComplex {
    pub dims: Vec<usize>,
    pub deltas: Vec<Matrix>,
    pub complete: bool,
}

impl HomComplex {
    fn rank_delta(&self, k: usize) -> usize {
        self.deltas.get(k).map_or(0, Matrix::rank)
    }

    /// Dimension of the `k`-th cohomology. Panics if the resolution is too short.
    pub fn cohomology_dim(&self, k: usize) -> usize {
        if k >= self.dims.len() {
            assert!(self.complete, "resolution too short for degree {k}");
            return 0;
        }
        assert!(
            k < self.deltas.len() || self.complete,
            "resolution too short for degree {k}"
        );
        let kernel = self.dims[k] - self.rank_delta(k);
        let boundary = if k == 0 { 0 } else { self.rank_delta(k - 1) };
        kernel - boundary
    }

    /// Cocycles in degree `k`.
    pub fn cocycles(&self, fp: Fp, k: usize) -> Subspace {
        match self.deltas.get(k) {
            Some(d) => d.kernel(),
            None => Subspace::full(fp, self.dims.get(k).copied().unwrap_or(0)),
        }
    }

    /// Coboundaries in degree `k`.
    pub fn coboundaries(&self, fp: Fp, k: usize) -> Subspace {
        if k == 0 || k > self.deltas.len() {
            return Subspace::zero(fp, self.dims.get(k).copied().unwrap_or(0));
        }
        self.deltas[k - 1].image()
    }
}

/// Rank of the map induced on degree-`k` cohomology by the cochain map `t`
/// from `target` (the complex of the codomain) to `source`.
pub fn induced_rank(fp: Fp, target: &HomComplex, source: &HomComplex, t: &Matrix, k: usize) -> usize {
    let z = target.cocycles(fp, k);
    let b = source.coboundaries(fp, k);
    if z.dim() == 0 {
        return 0;
    }
    let images = t.mul(&z.basis_columns()).transpose();
    let img = Subspace::from_matrix(images);
    let total = img.plus(&b).unwrap();
    total.dim() - b.dim()
}

/// `Hom(m, Λ)` over the opposite presentation, with the hom bases that realize it.
#[derive(Debug, Clone)]
pub struct StarModule {
    pub rep: Rep,
    /// At op-point `y`, an echelon basis of flattened homs `m -> P(y)`.
    pub bases: Vec<Subspace>,
    pub layouts: Vec<HomLayout>,
}

/// Flattening of a per-point family of `dim n_x x dim m_x` matrices into one vector.
#[derive(Debug, Clone)]
pub struct HomLayout {
    rows: Vec<usize>,
    cols: Vec<usize>,
    offsets: Vec<usize>,
    pub total: usize,
}

impl HomLayout {
    pub fn new(m: &Rep, n: &Rep) -> Self {
        let mut offsets = Vec::with_capacity(m.dims.len());
        let mut total = 0;
        for x in 0..m.dims.len() {
            offsets.push(total);
            total += n.dims[x] * m.dims[x];
        }
        HomLayout {
            rows: n.dims.clone(),
            cols: m.dims.clone(),
            offsets,
            total,
        }
    }

    #[inline]
    fn index(&self, x: usize, r: usize, c: usize) -> usize {
        self.offsets[x] + r * self.cols[x] + c
    }

    pub fn flatten(&self, family: &[Matrix]) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.total);
        for f in family {
            v.extend_from_slice(f.data());
        }
        v
    }

    pub fn unflatten(&self, fp: Fp, v: &[u32]) -> Vec<Matrix> {
        (0..self.rows.len())
            .map(|x| {
                let len = self.rows[x] * self.cols[x];
                Matrix::from_data(fp, self.rows[x], self.cols[x], v[self.offsets[x]..self.offsets[x] + len].to_vec())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{Arrow, MonomialIdeal, Quiver};

    fn q3() -> BoundQuiver {
        let q = Quiver::new(3, vec![Arrow::new("a", 2, 1), Arrow::new("b", 1, 0)]).unwrap();
        let rel = q.path_from_names(&["b", "a"]).unwrap();
        BoundQuiver::new(q, MonomialIdeal::new(vec![rel]).unwrap()).unwrap()
    }

    fn kx2() -> BoundQuiver {
        let q = Quiver::new(1, vec![Arrow::new("x", 0, 0)]).unwrap();
        let rel = q.path(&[0, 0]).unwrap();
        BoundQuiver::new(q, MonomialIdeal::new(vec![rel]).unwrap()).unwrap()
    }

    #[test]
    fn projective_dimension_vectors() {
        let pres = Presentation::product(Fp::two(), &[&q3()]);
        assert_eq!(pres.projective(0).dims, vec![1, 0, 0]);
        assert_eq!(pres.projective(1).dims, vec![1, 1, 0]);
        assert_eq!(pres.projective(2).dims, vec![0, 1, 1]);
    }

    #[test]
    fn tensor_presentation_sizes() {
        let a = kx2();
        let b = q3();
        let pres = Presentation::product(Fp::two(), &[&a, &b]);
        assert_eq!(pres.point_count(), 3);
        assert_eq!(pres.dim(), 2 * 5);
        // one loop per Q-vertex plus one Q-arrow per A-vertex
        assert_eq!(pres.arrows().len(), 3 + 2);
    }

    #[test]
    fn free_modules_are_reps_of_the_relations() {
        let a = kx2();
        let b = q3();
        let pres = Presentation::product(Fp::two(), &[&a, &b]);
        let reg = pres.regular();
        assert_eq!(reg.total_dim(), pres.dim());
        // commutativity: x acts after a Q-arrow the same as before it
        let acts = pres.actions(&reg);
        for (m, mono) in pres.monomials().iter().enumerate() {
            assert_eq!(acts[m].shape(), (reg.dims[mono.target], reg.dims[mono.source]));
        }
        for q_arrow in 0..2 {
            for v in 0..1 {
                let arrow = pres.factor_arrow(1, q_arrow, &[v, 0]);
                let (s, t) = pres.arrows()[arrow];
                let x_s = pres.factor_arrow(0, 0, &[0, s]);
                let x_t = pres.factor_arrow(0, 0, &[0, t]);
                assert_eq!(
                    reg.maps[arrow].mul(&reg.maps[x_s]),
                    reg.maps[x_t].mul(&reg.maps[arrow])
                );
            }
        }
    }

    #[test]
    fn hom_and_ext_agree_in_degree_zero() {
        let pres = Presentation::product(Fp::two(), &[&q3()]);
        let mods: Vec<Rep> = (0..3)
            .flat_map(|x| [pres.projective(x), pres.simple(x)])
            .collect();
        for m in &mods {
            let res = pres.resolution(m, 2);
            for n in &mods {
                let cx = pres.hom_complex(&res, n);
                assert_eq!(cx.cohomology_dim(0), pres.hom_space(m, n).len());
            }
        }
    }

    #[test]
    fn padded_resolution_gives_same_ext() {
        let pres = Presentation::product(Fp::two(), &[&q3()]);
        let s3 = pres.simple(2);
        for n in [pres.simple(1), pres.regular(), pres.simple(0)] {
            let a = pres.hom_complex(&pres.resolution(&s3, 4), &n);
            let b = pres.hom_complex(&pres.resolution_padded(&s3, 4, &[1]), &n);
            for k in 0..3 {
                assert_eq!(a.cohomology_dim(k), b.cohomology_dim(k));
            }
        }
    }
}
