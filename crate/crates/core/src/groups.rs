//! Vertex and edge groups, their elements, embeddings and canonical left transversals.
//!
//! Supported groups: `Z^n`, `Z/m`, `Z/m ⋊ Z/2` (inversion action) and free groups `F_r`.
//! An [`Embedding`] is a validated monomorphism `G_e -> G_v` together with a
//! canonical choice of coset representatives for `G_v / α(G_e)`.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{IMatrix, Int, Lattice, Residues};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDesc {
    FreeAbelian(usize),
    Cyclic(u64),
    /// `Z/m ⋊ Z/2` with the generator of `Z/2` acting by inversion.
    CyclicSemiZ2(u64),
    Free(usize),
}

/// Group element. A `Word` holds freely reduced syllables `(generator, exponent)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Vector(Vec<Int>),
    Residue(u64),
    /// `(a, ε)` in `Z/m ⋊ Z/2`.
    Dihedral(u64, bool),
    Word(Vec<(usize, i64)>),
}

fn elem_err(msg: impl Into<String>) -> Error {
    Error::Element(msg.into())
}

fn mod_u64(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

fn free_mul(a: &[(usize, i64)], b: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut out = a.to_vec();
    for &(g, e) in b {
        match out.last_mut() {
            Some(last) if last.0 == g => {
                last.1 += e;
                if last.1 == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e)),
        }
    }
    out
}

fn free_inv(a: &[(usize, i64)]) -> Vec<(usize, i64)> {
    a.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

pub fn generator_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i}")
    }
}

fn parse_generator(s: &str, rank: usize) -> Option<usize> {
    let i = if s.len() == 1 && s.as_bytes()[0].is_ascii_lowercase() {
        (s.as_bytes()[0] - b'a') as usize
    } else {
        s.strip_prefix('x')?.parse().ok()?
    };
    (i < rank).then_some(i)
}

fn parse_int(s: &str) -> Result<Int> {
    s.trim()
        .parse::<Int>()
        .map_err(|_| elem_err(format!("expected an integer, got `{}`", s.trim())))
}

fn parse_tuple(s: &str) -> Result<Vec<Int>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| elem_err(format!("expected a tuple `(..)`, got `{s}`")))?;
    inner.split(',').map(parse_int).collect()
}

impl GroupDesc {
    pub fn identity(&self) -> Elem {
        match self {
            GroupDesc::FreeAbelian(n) => Elem::Vector(vec![Int::zero(); *n]),
            GroupDesc::Cyclic(_) => Elem::Residue(0),
            GroupDesc::CyclicSemiZ2(_) => Elem::Dihedral(0, false),
            GroupDesc::Free(_) => Elem::Word(Vec::new()),
        }
    }

    pub fn is_identity(&self, g: &Elem) -> bool {
        *g == self.identity()
    }

    pub fn contains(&self, g: &Elem) -> bool {
        match (self, g) {
            (GroupDesc::FreeAbelian(n), Elem::Vector(v)) => v.len() == *n,
            (GroupDesc::Cyclic(m), Elem::Residue(a)) => a < m,
            (GroupDesc::CyclicSemiZ2(m), Elem::Dihedral(a, _)) => a < m,
            (GroupDesc::Free(r), Elem::Word(w)) => {
                w.iter().all(|&(g, e)| g < *r && e != 0)
                    && w.windows(2).all(|p| p[0].0 != p[1].0)
            }
            _ => false,
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (GroupDesc::FreeAbelian(_), Elem::Vector(x), Elem::Vector(y)) => {
                Elem::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (GroupDesc::Cyclic(m), Elem::Residue(x), Elem::Residue(y)) => {
                Elem::Residue(mod_u64(*x as i128 + *y as i128, *m))
            }
            (GroupDesc::CyclicSemiZ2(m), Elem::Dihedral(a, e), Elem::Dihedral(b, d)) => {
                let b = if *e { -(*b as i128) } else { *b as i128 };
                Elem::Dihedral(mod_u64(*a as i128 + b, *m), e ^ d)
            }
            (GroupDesc::Free(_), Elem::Word(x), Elem::Word(y)) => Elem::Word(free_mul(x, y)),
            _ => panic!("mul: {a:?} * {b:?} outside {self}"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        match (self, a) {
            (GroupDesc::FreeAbelian(_), Elem::Vector(x)) => {
                Elem::Vector(x.iter().map(|p| -p).collect())
            }
            (GroupDesc::Cyclic(m), Elem::Residue(x)) => Elem::Residue(mod_u64(-(*x as i128), *m)),
            (GroupDesc::CyclicSemiZ2(m), Elem::Dihedral(a, e)) => {
                if *e {
                    Elem::Dihedral(*a, true)
                } else {
                    Elem::Dihedral(mod_u64(-(*a as i128), *m), false)
                }
            }
            (GroupDesc::Free(_), Elem::Word(x)) => Elem::Word(free_inv(x)),
            _ => panic!("inv: {a:?} outside {self}"),
        }
    }

    pub fn pow(&self, a: &Elem, k: &Int) -> Elem {
        if let (GroupDesc::FreeAbelian(_), Elem::Vector(x)) = (self, a) {
            return Elem::Vector(x.iter().map(|p| p * k).collect());
        }
        let mut base = if k.is_negative() { self.inv(a) } else { a.clone() };
        let mut e = k.abs();
        let mut acc = self.identity();
        let two = Int::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e /= &two;
        }
        acc
    }

    pub fn conj(&self, g: &Elem, h: &Elem) -> Elem {
        self.mul(&self.mul(&self.inv(g), h), g)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GroupDesc::Cyclic(_) | GroupDesc::CyclicSemiZ2(_))
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupDesc::FreeAbelian(_) | GroupDesc::Cyclic(_) => true,
            GroupDesc::CyclicSemiZ2(m) => *m <= 2,
            GroupDesc::Free(r) => *r <= 1,
        }
    }

    /// Every supported group except a free group of rank at least 2 is amenable.
    pub fn is_amenable(&self) -> bool {
        !matches!(self, GroupDesc::Free(r) if *r >= 2)
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            GroupDesc::Cyclic(m) => Some(*m),
            GroupDesc::CyclicSemiZ2(m) => Some(2 * m),
            _ => None,
        }
    }

    /// All elements of a finite group in canonical order: residues ascending;
    /// for the semidirect product, rotations before reflections.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        match self {
            GroupDesc::Cyclic(m) => Some((0..*m).map(Elem::Residue).collect()),
            GroupDesc::CyclicSemiZ2(m) => Some(
                [false, true]
                    .into_iter()
                    .flat_map(|e| (0..*m).map(move |a| Elem::Dihedral(a, e)))
                    .collect(),
            ),
            _ => None,
        }
    }

    pub fn generators(&self) -> Vec<Elem> {
        match self {
            GroupDesc::FreeAbelian(n) => (0..*n)
                .map(|i| {
                    let mut v = vec![Int::zero(); *n];
                    v[i] = Int::one();
                    Elem::Vector(v)
                })
                .collect(),
            GroupDesc::Cyclic(m) => vec![Elem::Residue(1 % m)],
            GroupDesc::CyclicSemiZ2(m) => vec![Elem::Dihedral(1 % m, false), Elem::Dihedral(0, true)],
            GroupDesc::Free(r) => (0..*r).map(|i| Elem::Word(vec![(i, 1)])).collect(),
        }
    }

    /// Normalizes a possibly non-canonical element (e.g. residues out of range).
    pub fn canonical(&self, g: &Elem) -> Result<Elem> {
        let bad = || elem_err(format!("{g:?} is not an element of {self}"));
        match (self, g) {
            (GroupDesc::Cyclic(m), Elem::Residue(a)) => Ok(Elem::Residue(a % m)),
            (GroupDesc::CyclicSemiZ2(m), Elem::Dihedral(a, e)) => Ok(Elem::Dihedral(a % m, *e)),
            (GroupDesc::Free(_), Elem::Word(w)) => {
                let e = Elem::Word(free_mul(&[], w));
                if self.contains(&e) {
                    Ok(e)
                } else {
                    Err(bad())
                }
            }
            _ if self.contains(g) => Ok(g.clone()),
            _ => Err(bad()),
        }
    }

    /// Element literals: `(1,-2)` or `3` in `Z^n`, `3` in `Z/m`, `(3,1)` in
    /// `Z/m ⋊ Z/2`, `a.b^-1.a^2` or `1` in a free group.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        match self {
            GroupDesc::FreeAbelian(n) => {
                let v = if s.starts_with('(') {
                    parse_tuple(s)?
                } else {
                    vec![parse_int(s)?]
                };
                if v.len() != *n {
                    return Err(elem_err(format!("`{s}` does not have {n} coordinates")));
                }
                Ok(Elem::Vector(v))
            }
            GroupDesc::Cyclic(m) => {
                let a = parse_int(s)?;
                let r = a.mod_floor(&Int::from(*m));
                Ok(Elem::Residue(r.to_u64().expect("residue fits")))
            }
            GroupDesc::CyclicSemiZ2(m) => {
                let v = parse_tuple(s)?;
                if v.len() != 2 || !(v[1].is_zero() || v[1].is_one()) {
                    return Err(elem_err(format!("expected `(a,0)` or `(a,1)`, got `{s}`")));
                }
                let a = v[0].mod_floor(&Int::from(*m)).to_u64().expect("residue fits");
                Ok(Elem::Dihedral(a, v[1].is_one()))
            }
            GroupDesc::Free(r) => {
                if s == "1" || s.is_empty() {
                    return Ok(Elem::Word(Vec::new()));
                }
                let mut w = Vec::new();
                for tok in s.split('.') {
                    let tok = tok.trim();
                    let (g, e) = match tok.split_once('^') {
                        Some((g, e)) => (
                            g,
                            e.parse::<i64>()
                                .map_err(|_| elem_err(format!("bad exponent in `{tok}`")))?,
                        ),
                        None => (tok, 1),
                    };
                    let g = parse_generator(g, *r)
                        .ok_or_else(|| elem_err(format!("unknown generator `{g}` in F{r}")))?;
                    w = free_mul(&w, &[(g, e)]);
                }
                Ok(Elem::Word(w))
            }
        }
    }

    pub fn render(&self, g: &Elem) -> String {
        render_elem(g)
    }
}

pub fn render_elem(g: &Elem) -> String {
    match g {
        Elem::Vector(v) => {
            let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
            format!("({})", parts.join(","))
        }
        Elem::Residue(a) => a.to_string(),
        Elem::Dihedral(a, e) => format!("({a},{})", u8::from(*e)),
        Elem::Word(w) if w.is_empty() => "1".into(),
        Elem::Word(w) => w
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    generator_name(g)
                } else {
                    format!("{}^{e}", generator_name(g))
                }
            })
            .collect::<Vec<_>>()
            .join("."),
    }
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDesc::FreeAbelian(n) => write!(f, "Z^{n}"),
            GroupDesc::Cyclic(m) => write!(f, "Z/{m}"),
            GroupDesc::CyclicSemiZ2(m) => write!(f, "Z/{m}:Z2"),
            GroupDesc::Free(r) => write!(f, "F{r}"),
        }
    }
}

impl std::str::FromStr for GroupDesc {
    type Err = Error;

    /// `Z^<n>`, `Z/<m>`, `Z/<m>:Z2`, `F<r>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || elem_err(format!("unknown group `{s}`"));
        let s = s.trim();
        let num = |t: &str| t.parse::<u64>().ok().filter(|&x| x >= 1).ok_or_else(bad);
        if let Some(t) = s.strip_prefix("Z^") {
            return Ok(GroupDesc::FreeAbelian(num(t)? as usize));
        }
        if s == "Z" {
            return Ok(GroupDesc::FreeAbelian(1));
        }
        if let Some(t) = s.strip_prefix("Z/") {
            return match t.strip_suffix(":Z2") {
                Some(m) => Ok(GroupDesc::CyclicSemiZ2(num(m)?)),
                None => Ok(GroupDesc::Cyclic(num(t)?)),
            };
        }
        if let Some(t) = s.strip_prefix('F') {
            return Ok(GroupDesc::Free(num(t)? as usize));
        }
        Err(bad())
    }
}

/// A monomorphism as written in a graph description.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mono {
    /// `α(x) = A x`; column `j` is the image of the `j`-th generator.
    Matrix(IMatrix),
    /// Multiplication by an integer on `Z^n`, or `1 ↦ k` on `Z/m`.
    Scalar(Int),
    /// Images of the domain generators.
    Images(Vec<Elem>),
}

impl Mono {
    pub fn scalar(k: i64) -> Self {
        Mono::Scalar(Int::from(k))
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Linear { matrix: IMatrix, lattice: Lattice },
    /// `Z -> F_r`, `1 ↦ x_gen^power`.
    FreePower { gen: usize, power: i64 },
    Finite {
        image: HashMap<Elem, Elem>,
        reps: Vec<Elem>,
        split: HashMap<Elem, (usize, Elem)>,
    },
}

/// A validated monomorphism `α: domain -> codomain` with its canonical transversal Σ.
#[derive(Clone, Debug)]
pub struct Embedding {
    domain: GroupDesc,
    codomain: GroupDesc,
    mono: Mono,
    kind: Kind,
}

fn not_injective(msg: String) -> Error {
    Error::graph("E_NOT_INJECTIVE", msg)
}

fn bad_domain(msg: String) -> Error {
    Error::graph("E_MONO_DOMAIN", msg)
}

impl Embedding {
    pub fn new(domain: &GroupDesc, codomain: &GroupDesc, mono: &Mono) -> Result<Self> {
        use GroupDesc::*;
        let kind = match (domain, codomain, mono) {
            (FreeAbelian(k), FreeAbelian(n), Mono::Matrix(a)) => {
                if a.rows() != *n || a.cols() != *k {
                    return Err(bad_domain(format!(
                        "a {}x{} matrix cannot map {domain} into {codomain}",
                        a.rows(),
                        a.cols()
                    )));
                }
                let lattice = Lattice::new(a)
                    .map_err(|_| not_injective(format!("matrix {a} has rank below {k}")))?;
                Kind::Linear {
                    matrix: a.clone(),
                    lattice,
                }
            }
            (FreeAbelian(k), FreeAbelian(n), Mono::Scalar(s)) => {
                if k != n {
                    return Err(bad_domain(format!(
                        "a scalar cannot map {domain} into {codomain}"
                    )));
                }
                if s.is_zero() {
                    return Err(not_injective("scalar 0".into()));
                }
                let matrix = IMatrix::scalar(*n, s);
                let lattice = Lattice::new(&matrix)?;
                Kind::Linear { matrix, lattice }
            }
            (FreeAbelian(1), Free(r), Mono::Images(imgs)) => {
                let [Elem::Word(w)] = imgs.as_slice() else {
                    return Err(bad_domain(format!("Z -> F{r} needs exactly one word image")));
                };
                match w.as_slice() {
                    [(g, p)] if *g < *r && *p != 0 => Kind::FreePower {
                        gen: *g,
                        power: *p,
                    },
                    [] => return Err(not_injective("trivial image".into())),
                    _ => {
                        return Err(Error::Unsupported(
                            "Z into a free group must land in a generator's powers".into(),
                        ))
                    }
                }
            }
            (Cyclic(_) | CyclicSemiZ2(_), Cyclic(_) | CyclicSemiZ2(_), _) => {
                let imgs = match mono {
                    Mono::Images(v) => v.clone(),
                    Mono::Scalar(s) => match codomain {
                        Cyclic(m) => vec![Elem::Residue(
                            s.mod_floor(&Int::from(*m)).to_u64().expect("fits"),
                        )],
                        _ => return Err(bad_domain("scalar into a non-cyclic group".into())),
                    },
                    Mono::Matrix(_) => {
                        return Err(bad_domain("matrix on a finite group".into()))
                    }
                };
                finite_kind(domain, codomain, &imgs)?
            }
            _ => {
                return Err(bad_domain(format!(
                    "no supported monomorphism {domain} -> {codomain} of this form"
                )))
            }
        };
        Ok(Embedding {
            domain: domain.clone(),
            codomain: codomain.clone(),
            mono: mono.clone(),
            kind,
        })
    }

    /// Builds an embedding from generator images, choosing the natural `Mono` form.
    pub fn from_generator_images(
        domain: &GroupDesc,
        codomain: &GroupDesc,
        imgs: Vec<Elem>,
    ) -> Result<Self> {
        let mono = match (domain, codomain) {
            (GroupDesc::FreeAbelian(1), GroupDesc::FreeAbelian(1)) => match &imgs[0] {
                Elem::Vector(v) => Mono::Scalar(v[0].clone()),
                _ => return Err(bad_domain("image outside Z".into())),
            },
            (GroupDesc::FreeAbelian(_), GroupDesc::FreeAbelian(n)) => {
                let cols: Vec<Vec<Int>> = imgs
                    .iter()
                    .map(|g| match g {
                        Elem::Vector(v) => Ok(v.clone()),
                        _ => Err(bad_domain("image outside Z^n".into())),
                    })
                    .collect::<Result<_>>()?;
                Mono::Matrix(IMatrix::from_columns(&cols, *n)?)
            }
            _ => Mono::Images(imgs),
        };
        Embedding::new(domain, codomain, &mono)
    }

    pub fn domain(&self) -> &GroupDesc {
        &self.domain
    }

    pub fn codomain(&self) -> &GroupDesc {
        &self.codomain
    }

    pub fn mono(&self) -> &Mono {
        &self.mono
    }

    /// The matrix of a map between free abelian groups.
    pub fn matrix(&self) -> Option<&IMatrix> {
        match &self.kind {
            Kind::Linear { matrix, .. } => Some(matrix),
            _ => None,
        }
    }

    /// The integer `λ` of a map `Z -> Z`.
    pub fn label(&self) -> Option<Int> {
        match &self.kind {
            Kind::Linear { matrix, .. } if matrix.rows() == 1 && matrix.cols() == 1 => {
                Some(matrix.get(0, 0).clone())
            }
            _ => None,
        }
    }

    pub fn apply(&self, x: &Elem) -> Elem {
        match (&self.kind, x) {
            (Kind::Linear { matrix, .. }, Elem::Vector(v)) => {
                Elem::Vector(matrix.mul_vec(v).expect("domain checked"))
            }
            (Kind::FreePower { gen, power }, Elem::Vector(v)) => {
                if v[0].is_zero() {
                    return Elem::Word(Vec::new());
                }
                let e = (&v[0] * Int::from(*power))
                    .to_i64()
                    .expect("free-group exponent overflow");
                Elem::Word(vec![(*gen, e)])
            }
            (Kind::Finite { image, .. }, _) => image[x].clone(),
            _ => panic!("apply: {x:?} outside {}", self.domain),
        }
    }

    pub fn generator_images(&self) -> Vec<Elem> {
        self.domain
            .generators()
            .iter()
            .map(|g| self.apply(g))
            .collect()
    }

    /// `g = σ · α(h)` with `σ` the canonical representative of `g α(G_e)`.
    pub fn decompose(&self, g: &Elem) -> (Elem, Elem) {
        match (&self.kind, g) {
            (Kind::Linear { lattice, .. }, Elem::Vector(v)) => {
                let (r, h) = lattice.decompose(v);
                (Elem::Vector(r), Elem::Vector(h))
            }
            (Kind::FreePower { gen, power }, Elem::Word(w)) => {
                let (head, j) = match w.last() {
                    Some(&(x, e)) if x == *gen => (&w[..w.len() - 1], e),
                    _ => (&w[..], 0),
                };
                let k = power.abs();
                let r = j.rem_euclid(k);
                let q = (j - r) / k * power.signum();
                let sigma = free_mul(head, &[(*gen, r)].into_iter().filter(|p| p.1 != 0).collect::<Vec<_>>());
                (Elem::Word(sigma), Elem::Vector(vec![Int::from(q)]))
            }
            (Kind::Finite { reps, split, .. }, _) => {
                let (i, h) = &split[g];
                (reps[*i].clone(), h.clone())
            }
            _ => panic!("decompose: {g:?} outside {}", self.codomain),
        }
    }

    pub fn in_image(&self, g: &Elem) -> bool {
        let (s, _) = self.decompose(g);
        self.codomain.is_identity(&s)
    }

    /// The preimage of `g`, when `g` lies in the image.
    pub fn preimage(&self, g: &Elem) -> Option<Elem> {
        let (s, h) = self.decompose(g);
        self.codomain.is_identity(&s).then_some(h)
    }

    pub fn is_rep(&self, g: &Elem) -> bool {
        self.decompose(g).0 == *g
    }

    /// `[G_v : α(G_e)]`, `None` when infinite.
    pub fn index(&self) -> Option<u64> {
        match &self.kind {
            Kind::Linear { lattice, .. } => lattice.index().map(|i| i.to_u64().expect("index fits")),
            Kind::FreePower { .. } => None,
            Kind::Finite { reps, .. } => Some(reps.len() as u64),
        }
    }

    pub fn is_surjective(&self) -> bool {
        self.index() == Some(1)
    }

    /// Representatives in canonical order; the identity comes first.
    pub fn reps(&self) -> Reps<'_> {
        match &self.kind {
            Kind::Linear { lattice, .. } => Reps::Lattice(lattice.residues()),
            Kind::FreePower { gen, power } => Reps::Free(FreeReps::new(
                match self.codomain {
                    GroupDesc::Free(r) => r,
                    _ => unreachable!(),
                },
                *gen,
                power.unsigned_abs(),
            )),
            Kind::Finite { reps, .. } => Reps::Finite(reps.iter()),
        }
    }

    /// The first non-identity representative.
    pub fn nontrivial_rep(&self) -> Option<Elem> {
        self.reps().nth(1)
    }
}

fn finite_kind(domain: &GroupDesc, codomain: &GroupDesc, imgs: &[Elem]) -> Result<Kind> {
    let gens = domain.generators();
    if imgs.len() != gens.len() {
        return Err(bad_domain(format!(
            "{domain} has {} generators but {} images were given",
            gens.len(),
            imgs.len()
        )));
    }
    let imgs: Vec<Elem> = imgs
        .iter()
        .map(|g| codomain.canonical(g))
        .collect::<Result<_>>()?;
    let one = codomain.identity();
    let hom_ok = match domain {
        GroupDesc::Cyclic(m) => codomain.pow(&imgs[0], &Int::from(*m)) == one,
        GroupDesc::CyclicSemiZ2(m) => {
            let (x, y) = (&imgs[0], &imgs[1]);
            codomain.pow(x, &Int::from(*m)) == one
                && codomain.mul(y, y) == one
                && codomain.mul(&codomain.conj(&codomain.inv(y), x), x) == one
        }
        _ => false,
    };
    if !hom_ok {
        return Err(bad_domain(format!(
            "images do not define a homomorphism {domain} -> {codomain}"
        )));
    }
    let mut image = HashMap::new();
    for x in domain.elements().expect("finite") {
        let y = match &x {
            Elem::Residue(a) => codomain.pow(&imgs[0], &Int::from(*a)),
            Elem::Dihedral(a, e) => {
                let r = codomain.pow(&imgs[0], &Int::from(*a));
                if *e {
                    codomain.mul(&r, &imgs[1])
                } else {
                    r
                }
            }
            _ => unreachable!(),
        };
        image.insert(x, y);
    }
    let mut seen: Vec<&Elem> = image.values().collect();
    seen.sort();
    seen.dedup();
    if seen.len() != image.len() {
        return Err(not_injective(format!("{domain} -> {codomain} has a kernel")));
    }
    let mut reps = Vec::new();
    let mut split = HashMap::new();
    let dom_elems = domain.elements().expect("finite");
    for g in codomain.elements().expect("finite") {
        if split.contains_key(&g) {
            continue;
        }
        let i = reps.len();
        for x in &dom_elems {
            split.insert(codomain.mul(&g, &image[x]), (i, x.clone()));
        }
        reps.push(g);
    }
    Ok(Kind::Finite { image, reps, split })
}

/// Iterator over transversal representatives.
pub enum Reps<'a> {
    Lattice(Residues),
    Free(FreeReps),
    Finite(std::slice::Iter<'a, Elem>),
}

impl Iterator for Reps<'_> {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        match self {
            Reps::Lattice(r) => r.next().map(Elem::Vector),
            Reps::Free(r) => r.next(),
            Reps::Finite(r) => r.next().cloned(),
        }
    }
}

/// Shortlex enumeration of reduced words not ending in `x_gen^{±1}`, each
/// followed by `x_gen^r` for `0 <= r < k`.
pub struct FreeReps {
    rank: usize,
    gen: usize,
    k: u64,
    letters: Vec<usize>,
    started: bool,
    suffix: u64,
}

impl FreeReps {
    fn new(rank: usize, gen: usize, k: u64) -> Self {
        FreeReps {
            rank,
            gen,
            k,
            letters: Vec::new(),
            started: false,
            suffix: 0,
        }
    }

    // letter 2i is x_i, 2i+1 is x_i^-1
    fn acceptable(&self) -> bool {
        let ok_reduced = self
            .letters
            .windows(2)
            .all(|p| p[0] / 2 != p[1] / 2 || p[0] == p[1]);
        ok_reduced && self.letters.last().is_none_or(|&l| l / 2 != self.gen)
    }

    fn advance_word(&mut self) {
        loop {
            let mut i = self.letters.len();
            let mut carried = true;
            while i > 0 {
                i -= 1;
                self.letters[i] += 1;
                if self.letters[i] < 2 * self.rank {
                    carried = false;
                    break;
                }
                self.letters[i] = 0;
            }
            if carried {
                self.letters = vec![0; self.letters.len() + 1];
            }
            if self.acceptable() {
                return;
            }
        }
    }

    fn current(&self) -> Elem {
        let mut w: Vec<(usize, i64)> = Vec::new();
        for &l in &self.letters {
            let e = if l % 2 == 0 { 1 } else { -1 };
            w = free_mul(&w, &[(l / 2, e)]);
        }
        if self.suffix > 0 {
            w = free_mul(&w, &[(self.gen, self.suffix as i64)]);
        }
        Elem::Word(w)
    }
}

impl Iterator for FreeReps {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        self.suffix += 1;
        if self.suffix >= self.k {
            self.suffix = 0;
            self.advance_word();
        }
        Some(self.current())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::int;

    fn vecz(xs: &[i64]) -> Elem {
        Elem::Vector(xs.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn scalar_three_on_z() {
        let z = GroupDesc::FreeAbelian(1);
        let e = Embedding::new(&z, &z, &Mono::scalar(3)).unwrap();
        assert_eq!(e.index(), Some(3));
        let reps: Vec<_> = e.reps().collect();
        assert_eq!(reps, vec![vecz(&[0]), vecz(&[1]), vecz(&[2])]);
        assert_eq!(e.decompose(&vecz(&[7])), (vecz(&[1]), vecz(&[2])));
        assert_eq!(e.decompose(&vecz(&[-1])), (vecz(&[2]), vecz(&[-1])));
    }

    #[test]
    fn rotation_matrix_embedding() {
        let z2 = GroupDesc::FreeAbelian(2);
        let a = IMatrix::from_rows(&[vec![3, -4], vec![4, 3]]);
        let e = Embedding::new(&z2, &z2, &Mono::Matrix(a)).unwrap();
        assert_eq!(e.apply(&vecz(&[1, 0])), vecz(&[3, 4]));
        assert_eq!(e.index(), Some(25));
    }

    #[test]
    fn cyclic_into_semidirect() {
        let d = GroupDesc::Cyclic(2);
        let c = GroupDesc::CyclicSemiZ2(4);
        let e = Embedding::new(&d, &c, &Mono::Images(vec![Elem::Dihedral(2, false)])).unwrap();
        assert_eq!(e.index(), Some(4));
        let reps: Vec<_> = e.reps().collect();
        assert_eq!(reps[0], Elem::Dihedral(0, false));
        for g in c.elements().unwrap() {
            let (s, h) = e.decompose(&g);
            assert_eq!(c.mul(&s, &e.apply(&h)), g);
            assert!(reps.contains(&s));
        }
    }

    #[test]
    fn rejects_non_injective() {
        let z = GroupDesc::FreeAbelian(1);
        assert_eq!(
            Embedding::new(&z, &z, &Mono::scalar(0)).unwrap_err().code(),
            "E_NOT_INJECTIVE"
        );
        let c = GroupDesc::Cyclic(4);
        let err = Embedding::new(&c, &c, &Mono::Images(vec![Elem::Residue(2)])).unwrap_err();
        assert_eq!(err.code(), "E_NOT_INJECTIVE");
        let err = Embedding::new(&GroupDesc::Cyclic(3), &c, &Mono::Images(vec![Elem::Residue(1)]))
            .unwrap_err();
        assert_eq!(err.code(), "E_MONO_DOMAIN");
        let err = Embedding::new(&GroupDesc::Cyclic(2), &c, &Mono::Images(vec![Elem::Residue(0)]))
            .unwrap_err();
        assert_eq!(err.code(), "E_NOT_INJECTIVE");
    }

    #[test]
    fn semidirect_law() {
        let g = GroupDesc::CyclicSemiZ2(4);
        let phi = Elem::Dihedral(1, false);
        let iota = Elem::Dihedral(0, true);
        let c = g.mul(&g.mul(&phi, &iota), &g.inv(&phi));
        assert_eq!(c, Elem::Dihedral(2, true));
        assert_eq!(g.mul(&iota, &iota), g.identity());
    }

    #[test]
    fn free_literals_roundtrip() {
        let f = GroupDesc::Free(2);
        let w = f.parse_elem("a.b^-1.a^2").unwrap();
        assert_eq!(render_elem(&w), "a.b^-1.a^2");
        assert_eq!(f.parse_elem("a.a^-1").unwrap(), f.identity());
        assert!(f.parse_elem("c").is_err());
    }

    #[test]
    fn free_transversal_strips_generator_suffix() {
        let z = GroupDesc::FreeAbelian(1);
        let f = GroupDesc::Free(2);
        let e = Embedding::new(&z, &f, &Mono::Images(vec![f.parse_elem("a").unwrap()])).unwrap();
        let w = f.parse_elem("b.a^3").unwrap();
        let (s, h) = e.decompose(&w);
        assert_eq!(render_elem(&s), "b");
        assert_eq!(h, vecz(&[3]));
        let reps: Vec<_> = e.reps().take(4).map(|g| render_elem(&g)).collect();
        assert_eq!(reps, vec!["1", "b", "b^-1", "a.b"]);
        let sq = Embedding::new(&z, &f, &Mono::Images(vec![f.parse_elem("a^-2").unwrap()])).unwrap();
        let (s, h) = sq.decompose(&f.parse_elem("b.a^3").unwrap());
        assert_eq!(render_elem(&s), "b.a");
        assert_eq!(h, vecz(&[-1]));
    }

    #[test]
    fn group_spec_roundtrip() {
        for s in ["Z^2", "Z/4", "Z/6:Z2", "F2"] {
            let g: GroupDesc = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert!("Z/0".parse::<GroupDesc>().is_err());
    }
}
