//! The three factorisation systems on finite categories and the
//! orthogonality checkers, decided by exhaustive enumeration.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{
    classify, compose_functors, quotient_by_congruence, Congruence, Enumerator, FinCategory,
    Functor, Mor, MorphismInfo, NatTransformation, Obj, Side, UnionFind,
};
use crate::fincat::whisker;
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum System {
    /// (bijective on objects and full, faithful)
    Bof,
    /// (bijective on objects, fully faithful)
    BoFf,
    /// (surjective on objects, injective on objects and fully faithful)
    SoIoff,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Bof => "bof",
            System::BoFf => "bo",
            System::SoIoff => "so",
        }
    }

    pub fn left_class(self) -> &'static str {
        match self {
            System::Bof => "bo_full",
            System::BoFf => "bo",
            System::SoIoff => "so",
        }
    }

    pub fn right_class(self) -> &'static str {
        match self {
            System::Bof => "faithful",
            System::BoFf => "ff",
            System::SoIoff => "ioff",
        }
    }

    /// Class predicates of the left and right class.
    pub fn in_left(self, f: &Functor) -> bool {
        let c = classify(f);
        match self {
            System::Bof => c.bo_full,
            System::BoFf => c.bo,
            System::SoIoff => c.so,
        }
    }

    pub fn in_right(self, f: &Functor) -> bool {
        let c = classify(f);
        match self {
            System::Bof => c.faithful,
            System::BoFf => c.ff,
            System::SoIoff => c.ioff,
        }
    }

    pub fn factor(self, f: &Functor) -> Factorisation {
        match self {
            System::Bof => factor_bof(f),
            System::BoFf => factor_bo_ff(f),
            System::SoIoff => factor_so_ioff(f),
        }
    }

    pub const ALL: [System; 3] = [System::Bof, System::BoFf, System::SoIoff];
}

impl std::str::FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bof" => Ok(System::Bof),
            "bo" | "bo_ff" => Ok(System::BoFf),
            "so" | "so_ioff" => Ok(System::SoIoff),
            other => Err(Error::Parse {
                path: "--system".into(),
                message: format!("unknown factorisation system {other}"),
            }),
        }
    }
}

/// `original = right ∘ left`, through `middle`.
#[derive(Clone, Debug)]
pub struct Factorisation {
    pub original: Functor,
    pub left: Functor,
    pub right: Functor,
    pub middle: Arc<FinCategory>,
}

impl Factorisation {
    pub fn composes(&self) -> bool {
        compose_functors(&self.right, &self.left).is_ok_and(|c| c == self.original)
    }
}

/// Quotient by the kernel congruence `u ~ v ⇔ f u = f v`; image morphisms
/// are named by their least preimage.
pub fn factor_bof(f: &Functor) -> Factorisation {
    let s = f.source();
    let mut uf = UnionFind::new(s.morphism_count());
    let mut seen: HashMap<Mor, Mor> = HashMap::new();
    for a in s.object_indices() {
        for b in s.object_indices() {
            seen.clear();
            for &m in s.hom(a, b) {
                if let Some(&prev) = seen.get(&f.mor(m)) {
                    uf.union(prev.0, m.0);
                } else {
                    seen.insert(f.mor(m), m);
                }
            }
        }
    }
    // The kernel of a functor is already closed under composition.
    let cong = Congruence::from_union_find(s, &mut uf);
    debug_assert!(cong.validate().is_ok());
    let q = quotient_by_congruence(&cong);
    let right = q.induced(f).expect("f is constant on its own kernel");
    Factorisation {
        original: f.clone(),
        left: q.projection,
        right,
        middle: q.category,
    }
}

/// Middle hom-sets are the target's `hom(f a, f a′)`. A middle morphism keeps
/// the id of its image when that id is used once, else it is tagged
/// `id@a:a′`.
pub fn factor_bo_ff(f: &Functor) -> Factorisation {
    let (s, t) = (f.source(), f.target());
    let mut triples = Vec::new();
    for a in s.object_indices() {
        for b in s.object_indices() {
            for &m in t.hom(f.obj(a), f.obj(b)) {
                triples.push((a, b, m));
            }
        }
    }
    let mut uses = vec![0usize; t.morphism_count()];
    for &(_, _, m) in &triples {
        uses[m.0] += 1;
    }
    let index: HashMap<(Obj, Obj, Mor), Mor> =
        triples.iter().enumerate().map(|(i, &k)| (k, Mor(i))).collect();
    let morphisms = triples
        .iter()
        .map(|&(a, b, m)| MorphismInfo {
            id: if uses[m.0] == 1 {
                t.morphism_id(m).to_string()
            } else {
                format!("{}@{}:{}", t.morphism_id(m), s.object_id(a), s.object_id(b))
            },
            dom: a,
            cod: b,
        })
        .collect();
    let identities = s
        .object_indices()
        .map(|a| index[&(a, a, t.identity(f.obj(a)))])
        .collect();
    let middle = Arc::new(FinCategory::from_parts(
        s.object_ids().to_vec(),
        morphisms,
        identities,
        |g, h| {
            let (a, _, x) = triples[h.0];
            let (_, c, y) = triples[g.0];
            index[&(a, c, t.compose(y, x))]
        },
    ));
    let left = Functor::new_unchecked(
        s.clone(),
        middle.clone(),
        s.object_indices().collect(),
        s.morphism_indices()
            .map(|m| index[&(s.dom(m), s.cod(m), f.mor(m))])
            .collect(),
    );
    let right = Functor::new_unchecked(
        middle.clone(),
        t.clone(),
        f.object_map().to_vec(),
        triples.iter().map(|&(_, _, m)| m).collect(),
    );
    Factorisation {
        original: f.clone(),
        left,
        right,
        middle,
    }
}

/// Middle is the full subcategory of the target on the image objects.
pub fn factor_so_ioff(f: &Functor) -> Factorisation {
    let t = f.target();
    let mut keep = vec![false; t.object_count()];
    for &o in f.object_map() {
        keep[o.0] = true;
    }
    let (middle, inclusion) = full_subcategory(t, &keep);
    let mut back_obj = vec![Obj(usize::MAX); t.object_count()];
    for (i, &o) in inclusion.object_map().iter().enumerate() {
        back_obj[o.0] = Obj(i);
    }
    let mut back_mor = vec![Mor(usize::MAX); t.morphism_count()];
    for (i, &m) in inclusion.morphism_map().iter().enumerate() {
        back_mor[m.0] = Mor(i);
    }
    let left = Functor::new_unchecked(
        f.source().clone(),
        middle.clone(),
        f.object_map().iter().map(|o| back_obj[o.0]).collect(),
        f.morphism_map().iter().map(|m| back_mor[m.0]).collect(),
    );
    Factorisation {
        original: f.clone(),
        left,
        right: inclusion,
        middle,
    }
}

/// The full subcategory on the marked objects, with its inclusion.
pub fn full_subcategory(c: &Arc<FinCategory>, keep: &[bool]) -> (Arc<FinCategory>, Functor) {
    let objects: Vec<Obj> = c.object_indices().filter(|o| keep[o.0]).collect();
    let mut new_obj = vec![usize::MAX; c.object_count()];
    for (i, o) in objects.iter().enumerate() {
        new_obj[o.0] = i;
    }
    let kept: Vec<Mor> = c
        .morphism_indices()
        .filter(|&m| keep[c.dom(m).0] && keep[c.cod(m).0])
        .collect();
    let mut new_mor = vec![usize::MAX; c.morphism_count()];
    for (i, m) in kept.iter().enumerate() {
        new_mor[m.0] = i;
    }
    let sub = Arc::new(FinCategory::from_parts(
        objects.iter().map(|&o| c.object_id(o).to_string()).collect(),
        kept.iter()
            .map(|&m| MorphismInfo {
                id: c.morphism_id(m).to_string(),
                dom: Obj(new_obj[c.dom(m).0]),
                cod: Obj(new_obj[c.cod(m).0]),
            })
            .collect(),
        objects.iter().map(|&o| Mor(new_mor[c.identity(o).0])).collect(),
        |g, f| Mor(new_mor[c.compose(kept[g.0], kept[f.0]).0]),
    ));
    let inclusion = Functor::new_unchecked(sub.clone(), c.clone(), objects, kept);
    (sub, inclusion)
}

/// Why an orthogonality check failed.
#[derive(Clone, Debug)]
pub enum OrthogonalityWitness {
    /// A commuting square `y ∘ f = g ∘ x` with no diagonal, or more than one.
    Square { x: Functor, y: Functor, diagonals: usize },
    /// A compatible pair of 2-cells between the boundaries of two squares
    /// lifting to `lifts` 2-cells between the diagonals (should be one).
    TwoCell {
        alpha: NatTransformation,
        beta: NatTransformation,
        lifts: usize,
    },
    /// A functor `A → C` with `factorisations` extensions along `f`.
    Functor { g: Functor, factorisations: usize },
    /// A 2-cell `A → C` with `lifts` preimages under whiskering by `f`.
    Nat { alpha: NatTransformation, lifts: usize },
    /// A composite `h ∘ f` outside the class it was meant to land in.
    Inadmissible { composite: Functor },
}

impl fmt::Display for OrthogonalityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrthogonalityWitness::Square { x, y, diagonals } => write!(
                f,
                "square x = {x:?}, y = {y:?} has {diagonals} diagonals"
            ),
            OrthogonalityWitness::TwoCell { alpha, beta, lifts } => write!(
                f,
                "2-cell pair alpha = {alpha:?}, beta = {beta:?} has {lifts} lifts"
            ),
            OrthogonalityWitness::Functor { g, factorisations } => {
                write!(f, "functor {g:?} factors in {factorisations} ways")
            }
            OrthogonalityWitness::Nat { alpha, lifts } => {
                write!(f, "2-cell {alpha:?} has {lifts} lifts")
            }
            OrthogonalityWitness::Inadmissible { composite } => {
                write!(f, "composite {composite:?} is not admissible")
            }
        }
    }
}

type MapKey = (Vec<Obj>, Vec<Mor>);

fn key(f: &Functor) -> MapKey {
    (f.object_map().to_vec(), f.morphism_map().to_vec())
}

/// A square `y ∘ f = g ∘ x` together with every diagonal.
#[derive(Clone, Debug)]
pub struct Square {
    pub x: Functor,
    pub y: Functor,
    pub diagonals: Vec<Functor>,
}

/// Every commuting square from `f` to `g`, with its diagonals.
pub fn squares(f: &Functor, g: &Functor, en: &dyn Enumerator) -> Result<Vec<Square>> {
    let (a, b) = (f.source(), f.target());
    let (c, d) = (g.source(), g.target());
    let xs = en.functors(a, c)?;
    let ys = en.functors(b, d)?;
    let ds = en.functors(b, c)?;
    let mut by_gx: HashMap<MapKey, Vec<&Functor>> = HashMap::new();
    for x in xs.iter() {
        by_gx.entry(key(&compose_functors(g, x)?)).or_default().push(x);
    }
    let mut diag: HashMap<(MapKey, MapKey), Vec<&Functor>> = HashMap::new();
    for dg in ds.iter() {
        diag.entry((key(&compose_functors(dg, f)?), key(&compose_functors(g, dg)?)))
            .or_default()
            .push(dg);
    }
    let mut out = Vec::new();
    for y in ys.iter() {
        if let Some(xs) = by_gx.get(&key(&compose_functors(y, f)?)) {
            for &x in xs {
                let diagonals = diag
                    .get(&(key(x), key(y)))
                    .map(|v| v.iter().map(|&d| d.clone()).collect())
                    .unwrap_or_default();
                out.push(Square {
                    x: x.clone(),
                    y: y.clone(),
                    diagonals,
                });
            }
        }
    }
    Ok(out)
}

/// Unique diagonal fill-in for 1-cells and for 2-cells between squares.
pub fn check_orthogonal_morphisms(
    f: &Functor,
    g: &Functor,
    en: &dyn Enumerator,
) -> Result<Verdict<OrthogonalityWitness>> {
    let sq = squares(f, g, en)?;
    for s in &sq {
        if s.diagonals.len() != 1 {
            return Ok(Verdict::Fails(OrthogonalityWitness::Square {
                x: s.x.clone(),
                y: s.y.clone(),
                diagonals: s.diagonals.len(),
            }));
        }
    }
    for s in &sq {
        for s2 in &sq {
            if let Some(w) = two_cell_clause(f, g, s, s2, en)? {
                return Ok(Verdict::Fails(w));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// `δ ↦ (δ ∗ f, g ∗ δ)` must biject `Nat(d, d′)` onto the pairs
/// `(α: x ⇒ x′, β: y ⇒ y′)` with `g ∗ α = β ∗ f`.
fn two_cell_clause(
    f: &Functor,
    g: &Functor,
    s: &Square,
    s2: &Square,
    en: &dyn Enumerator,
) -> Result<Option<OrthogonalityWitness>> {
    let alphas = en.nats(&s.x, &s2.x)?;
    if alphas.is_empty() {
        // Any δ would restrict to some α.
        return Ok(None);
    }
    let betas = en.nats(&s.y, &s2.y)?;
    let deltas = en.nats(&s.diagonals[0], &s2.diagonals[0])?;
    let mut hits: HashMap<(Vec<Mor>, Vec<Mor>), usize> = HashMap::new();
    for delta in deltas.iter() {
        let a = whisker(f, delta, Side::Right)?;
        let b = whisker(g, delta, Side::Left)?;
        *hits.entry((a.components().to_vec(), b.components().to_vec())).or_default() += 1;
    }
    for alpha in alphas.iter() {
        for beta in betas.iter() {
            let compatible = f
                .source()
                .object_indices()
                .all(|o| g.mor(alpha.component(o)) == beta.component(f.obj(o)));
            if !compatible {
                continue;
            }
            let lifts = hits
                .get(&(alpha.components().to_vec(), beta.components().to_vec()))
                .copied()
                .unwrap_or(0);
            if lifts != 1 {
                return Ok(Some(OrthogonalityWitness::TwoCell {
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                    lifts,
                }));
            }
        }
    }
    // Every δ restricts to a compatible pair, so an injective hit map into
    // the compatible pairs that covers them all is a bijection.
    Ok(None)
}

/// Precomposition with `f: A → B` is a bijection `Cat(B, C) → Cat(A, C)` and
/// on the 2-cells between corresponding functors.
pub fn check_orthogonal_object(
    f: &Functor,
    c: &Arc<FinCategory>,
    en: &dyn Enumerator,
) -> Result<Verdict<OrthogonalityWitness>> {
    precomposition_bijective(f, c, en, |_| true)
}

/// Precomposition with `f: A → B` bijects `Cat(B, C)` onto the functors
/// `A → C` accepted by `admissible`, and `Nat(h, h′)` onto `Nat(hf, h′f)`.
pub fn precomposition_bijective(
    f: &Functor,
    c: &Arc<FinCategory>,
    en: &dyn Enumerator,
    admissible: impl Fn(&Functor) -> bool,
) -> Result<Verdict<OrthogonalityWitness>> {
    let hs = en.functors(f.target(), c)?;
    let gs = en.functors(f.source(), c)?;
    let mut fibres: HashMap<MapKey, usize> = HashMap::new();
    for h in hs.iter() {
        let hf = compose_functors(h, f)?;
        if !admissible(&hf) {
            return Ok(Verdict::Fails(OrthogonalityWitness::Inadmissible { composite: hf }));
        }
        *fibres.entry(key(&hf)).or_default() += 1;
    }
    for g in gs.iter().filter(|g| admissible(g)) {
        let n = fibres.get(&key(g)).copied().unwrap_or(0);
        if n != 1 {
            return Ok(Verdict::Fails(OrthogonalityWitness::Functor {
                g: g.clone(),
                factorisations: n,
            }));
        }
    }
    for h in hs.iter() {
        for h2 in hs.iter() {
            let hf = compose_functors(h, f)?;
            let h2f = compose_functors(h2, f)?;
            let mut hits: HashMap<Vec<Mor>, usize> = HashMap::new();
            for beta in en.nats(h, h2)?.iter() {
                *hits
                    .entry(whisker(f, beta, Side::Right)?.components().to_vec())
                    .or_default() += 1;
            }
            for alpha in en.nats(&hf, &h2f)?.iter() {
                let lifts = hits.get(alpha.components()).copied().unwrap_or(0);
                if lifts != 1 {
                    return Ok(Verdict::Fails(OrthogonalityWitness::Nat {
                        alpha: alpha.clone(),
                        lifts,
                    }));
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Diagonal comparison between two factorisations of the same functor in
/// the same system: the unique `d` with `d ∘ e₁ = e₂` and `m₂ ∘ d = m₁`.
pub fn comparison(
    first: &Factorisation,
    second: &Factorisation,
    en: &dyn Enumerator,
) -> Result<Option<Functor>> {
    if first.original != second.original {
        return Err(Error::BoundaryMismatch(
            "factorisations of different functors".into(),
        ));
    }
    let ds = en.functors(&first.middle, &second.middle)?;
    let mut found = None;
    for d in ds.iter() {
        if compose_functors(d, &first.left)? == second.left
            && compose_functors(&second.right, d)? == first.right
        {
            if found.is_some() {
                return Ok(None);
            }
            found = Some(d.clone());
        }
    }
    Ok(found)
}

/// Copy of `c` with every id prefixed, and the isomorphism onto it.
pub fn relabelled(c: &Arc<FinCategory>, prefix: &str) -> Functor {
    let copy = Arc::new(FinCategory::from_parts(
        c.object_ids().iter().map(|o| format!("{prefix}{o}")).collect(),
        c.morphism_indices()
            .map(|m| MorphismInfo {
                id: format!("{prefix}{}", c.morphism_id(m)),
                dom: c.dom(m),
                cod: c.cod(m),
            })
            .collect(),
        c.object_indices().map(|o| c.identity(o)).collect(),
        |g, f| c.compose(g, f),
    ));
    Functor::new_unchecked(
        c.clone(),
        copy,
        c.object_indices().collect(),
        c.morphism_indices().collect(),
    )
}

/// The same factorisation pushed through an isomorphic copy of its middle.
pub fn transported(fact: &Factorisation) -> Factorisation {
    let iso = relabelled(&fact.middle, "'");
    let inv = iso.inverse().expect("relabelling is invertible");
    Factorisation {
        original: fact.original.clone(),
        left: compose_functors(&iso, &fact.left).expect("boundaries match"),
        right: compose_functors(&fact.right, &inv).expect("boundaries match"),
        middle: iso.target().clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{find_isomorphism, named, Fresh, SearchLimit};

    #[test]
    fn bof_of_the_collapse_is_the_collapse() {
        let e = named::collapse();
        let fact = factor_bof(&e);
        assert!(fact.composes());
        assert_eq!(*fact.middle, *named::arrow());
        assert!(fact.right.is_isomorphism());
        assert!(classify(&fact.left).bo_full);
    }

    #[test]
    fn identities_factor_trivially() {
        for c in [named::arrow(), named::z2_pair(), named::chain3()] {
            let id = Functor::identity(&c);
            for sys in System::ALL {
                let fact = sys.factor(&id);
                assert!(fact.composes());
                assert!(fact.left.is_isomorphism() && fact.right.is_isomorphism());
            }
        }
    }

    #[test]
    fn bof_of_arrow_to_point() {
        let (two, one) = (named::arrow(), named::terminal());
        let f = Functor::constant(&two, &one, Obj(0));
        let fact = factor_bof(&f);
        assert!(fact.left.is_isomorphism());
        assert!(classify(&fact.right).faithful);
    }

    #[test]
    fn bo_ff_fills_in_missing_arrows() {
        let (d2, two) = (named::discrete2(), named::arrow());
        let f = Functor::new(d2.clone(), two.clone(), vec![Obj(0), Obj(1)], vec![two.identity(Obj(0)), two.identity(Obj(1))]).unwrap();
        let fact = factor_bo_ff(&f);
        assert!(fact.composes());
        assert!(find_isomorphism(&fact.middle, &two, SearchLimit::default()).unwrap().is_some());
        assert!(fact.right.is_isomorphism());
        let one = named::terminal();
        let pick = Functor::constant(&one, &two, Obj(0));
        let fact = factor_bo_ff(&pick);
        assert_eq!(fact.middle.morphism_count(), 1);
        assert!(classify(&fact.left).bo);
    }

    #[test]
    fn so_ioff_corestricts() {
        let (one, d2) = (named::terminal(), named::discrete2());
        let pick = Functor::constant(&one, &d2, Obj(0));
        let fact = factor_so_ioff(&pick);
        assert_eq!(fact.middle.object_count(), 1);
        assert!(classify(&fact.right).ioff && !classify(&fact.right).so);
        let bang = Functor::constant(&d2, &one, Obj(0));
        let fact = factor_so_ioff(&bang);
        assert!(fact.right.is_identity());
        assert_eq!(fact.left, bang);
    }

    #[test]
    fn bo_ff_names_repeated_images_apart() {
        let (d2, one) = (named::discrete2(), named::terminal());
        let bang = Functor::constant(&d2, &one, Obj(0));
        let fact = factor_bo_ff(&bang);
        assert_eq!(fact.middle.morphism_count(), 4);
        assert!(fact.middle.find_morphism("id_*@a:b").is_some());
        assert!(classify(&fact.right).ff);
    }

    #[test]
    fn collapse_is_not_orthogonal_to_itself() {
        let e = named::collapse();
        let v = check_orthogonal_morphisms(&e, &e, &Fresh::default()).unwrap();
        assert!(!v.holds());
        assert!(matches!(v.witness(), Some(OrthogonalityWitness::Square { diagonals: 0, .. })));
    }

    #[test]
    fn identities_are_orthogonal_to_everything() {
        let id = Functor::identity(&named::parallel());
        let e = named::collapse();
        assert!(check_orthogonal_morphisms(&id, &e, &Fresh::default()).unwrap().holds());
        for c in [named::arrow(), named::z2(), named::chain3()] {
            assert!(check_orthogonal_object(&id, &c, &Fresh::default()).unwrap().holds());
        }
    }

    #[test]
    fn collapse_against_objects() {
        let e = named::collapse();
        assert!(check_orthogonal_object(&e, &named::arrow(), &Fresh::default()).unwrap().holds());
        let v = check_orthogonal_object(&e, &named::parallel(), &Fresh::default()).unwrap();
        assert!(matches!(v.witness(), Some(OrthogonalityWitness::Functor { factorisations: 0, .. })));
    }

    #[test]
    fn comparison_with_a_transported_copy_is_an_isomorphism() {
        let e = named::collapse();
        for sys in System::ALL {
            let fact = sys.factor(&e);
            let other = transported(&fact);
            assert!(other.composes());
            let d = comparison(&fact, &other, &Fresh::default()).unwrap().unwrap();
            assert!(d.is_isomorphism());
        }
    }

    #[test]
    fn two_cell_clause_can_fail_alone() {
        // D2 → 1 lifts functors into Z2 uniquely but not 2-cells: a pair of
        // independent components at a and b has no single preimage.
        let (d2, one, z2) = (named::discrete2(), named::terminal(), named::z2());
        let bang = Functor::constant(&d2, &one, Obj(0));
        let v = check_orthogonal_object(&bang, &z2, &Fresh::default()).unwrap();
        assert!(matches!(v.witness(), Some(OrthogonalityWitness::Nat { lifts: 0, .. })));
        let g = Functor::constant(&z2, &one, Obj(0));
        let v = check_orthogonal_morphisms(&bang, &g, &Fresh::default()).unwrap();
        assert!(matches!(v.witness(), Some(OrthogonalityWitness::TwoCell { lifts: 0, .. })));
    }
}
