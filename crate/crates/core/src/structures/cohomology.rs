//! Cohomology of `(H, l_1 + n_{0,1})` and contractions onto it.

use crate::error::{Error, Result};
use crate::graded::{int, GradedSpace, MultiMap, Scalar, Sector, SectorTag, Vector};
use crate::linalg::{EchelonSpan, Matrix};

/// Deformation retract of one sector onto its cohomology: `π∘ι = 1`,
/// `d h + h d = 1 − ι π`, `h h = 0`, `h ι = 0`, `π h = 0`.
///
/// Linear maps are stored as tables of images of basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorContraction {
    pub sector: Sector,
    pub big: GradedSpace,
    pub small: GradedSpace,
    pub differential: Vec<Vector>,
    pub inclusion: Vec<Vector>,
    pub projection: Vec<Vector>,
    pub homotopy: Vec<Vector>,
}

/// Contractions of both sectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Contraction {
    pub closed: SectorContraction,
    pub open: SectorContraction,
}

impl Contraction {
    pub fn sector(&self, sector: Sector) -> &SectorContraction {
        match sector {
            Sector::Closed => &self.closed,
            Sector::Open => &self.open,
        }
    }

    pub fn check(&self) -> Result<()> {
        self.closed.check()?;
        self.open.check()
    }
}

/// Applies a linear map given by basis images.
pub fn apply_table(table: &[Vector], v: &Vector) -> Vector {
    let mut out = Vector::zero();
    for (i, c) in v.iter() {
        out.add_scaled(&table[i], c);
    }
    out
}

fn compose(outer: &[Vector], inner: &[Vector]) -> Vec<Vector> {
    inner.iter().map(|v| apply_table(outer, v)).collect()
}

/// Images of basis vectors under a unary map, zero when absent.
pub fn unary_table(map: Option<&MultiMap>, sector: Sector, dim: usize) -> Vec<Vector> {
    (0..dim)
        .map(|i| match (map, sector) {
            (None, _) => Vector::zero(),
            (Some(m), Sector::Closed) => m.on_basis(&[i], &[], &[]),
            (Some(m), Sector::Open) => m.on_basis(&[], &[i], &[]),
        })
        .collect()
}

impl SectorContraction {
    pub fn include(&self, v: &Vector) -> Vector {
        apply_table(&self.inclusion, v)
    }

    pub fn project(&self, v: &Vector) -> Vector {
        apply_table(&self.projection, v)
    }

    pub fn homotope(&self, v: &Vector) -> Vector {
        apply_table(&self.homotopy, v)
    }

    pub fn differentiate(&self, v: &Vector) -> Vector {
        apply_table(&self.differential, v)
    }

    /// Verifies every contraction identity, naming the first that fails.
    pub fn check(&self) -> Result<()> {
        let n = self.big.dim();
        let fail = |what: &str| Err(Error::Axiom { axiom: what.into(), detail: format!("{} sector", self.sector) });
        let d = &self.differential;
        if compose(d, d).iter().any(|v| !v.is_zero()) {
            return Err(Error::NotDifferential);
        }
        for (i, v) in compose(&self.projection, &self.inclusion).iter().enumerate() {
            if *v != Vector::basis(i) {
                return fail("pi iota = 1");
            }
        }
        let dh = compose(d, &self.homotopy);
        let hd = compose(&self.homotopy, d);
        let ip = compose(&self.inclusion, &self.projection);
        for i in 0..n {
            let mut lhs = dh[i].clone();
            lhs.add(&hd[i]);
            let mut rhs = Vector::basis(i);
            rhs.add_scaled(&ip[i], &int(-1));
            if lhs != rhs {
                return fail("dh + hd = 1 - iota pi");
            }
        }
        if compose(&self.homotopy, &self.homotopy).iter().any(|v| !v.is_zero()) {
            return fail("hh = 0");
        }
        if compose(&self.homotopy, &self.inclusion).iter().any(|v| !v.is_zero()) {
            return fail("h iota = 0");
        }
        if compose(&self.projection, &self.homotopy).iter().any(|v| !v.is_zero()) {
            return fail("pi h = 0");
        }
        if compose(d, &self.inclusion).iter().any(|v| !v.is_zero()) {
            return fail("d iota = 0");
        }
        if compose(&self.projection, d).iter().any(|v| !v.is_zero()) {
            return fail("pi d = 0");
        }
        Ok(())
    }

    /// Dimension of the cohomology per degree, ascending.
    pub fn betti(&self) -> Vec<(i32, usize)> {
        self.small.degree_range().into_iter().map(|d| (d, self.small.of_degree(d).len())).collect()
    }

    /// `ι` as a degree-zero unary map from the small space.
    pub fn inclusion_map(&self) -> MultiMap {
        unary_map(self.sector, &self.inclusion)
    }

    pub fn projection_map(&self) -> MultiMap {
        unary_map(self.sector, &self.projection)
    }
}

fn unary_map(sector: Sector, table: &[Vector]) -> MultiMap {
    let mut m = match sector {
        Sector::Closed => MultiMap::new(1, 0, Sector::Closed, 0),
        Sector::Open => MultiMap::new(0, 1, Sector::Open, 0),
    };
    for (i, v) in table.iter().enumerate() {
        if !v.is_zero() {
            m.insert_raw(vec![i], v.clone());
        }
    }
    m
}

fn check_square_zero(table: &[Vector]) -> Result<()> {
    if compose(table, table).iter().any(|v| !v.is_zero()) {
        return Err(Error::NotDifferential);
    }
    Ok(())
}

/// Cohomology of `(space, d)` with a deterministic Hodge decomposition:
/// the complement `Y` takes the lowest-index basis vectors with independent
/// images, and representatives prefer basis cocycles, then kernel vectors.
pub fn cohomology(space: &GradedSpace, sector: Sector, differential: Option<&MultiMap>) -> Result<SectorContraction> {
    let d = unary_table(differential, sector, space.dim());
    check_square_zero(&d)?;
    let mut reps = Vec::new();
    let mut complement = Vec::new();
    for degree in space.degree_range() {
        let indices = space.of_degree(degree);
        let mut images = EchelonSpan::new();
        for &i in &indices {
            if !d[i].is_zero() && images.insert(&d[i]) {
                complement.push(Vector::basis(i));
            }
        }
        let mut span = EchelonSpan::new();
        for y in &complement {
            let b = apply_table(&d, y);
            if b.support().next().is_some_and(|j| space.degree(j) == degree) {
                span.insert(&b);
            }
        }
        let columns: Vec<Vector> = indices.iter().map(|&i| d[i].clone()).collect();
        let target_dim = space.dim();
        let kernel = Matrix::from_columns(target_dim, &columns).kernel();
        let mut candidates: Vec<Vector> = indices.iter().filter(|&&i| d[i].is_zero()).map(|&i| Vector::basis(i)).collect();
        for k in kernel {
            candidates.push(Vector::from_pairs(k.into_iter().enumerate().map(|(j, c)| (indices[j], c))));
        }
        for c in candidates {
            if span.insert(&c) {
                reps.push(c);
            }
        }
    }
    build(space, sector, d, reps, complement)
}

/// Contraction from user-chosen cohomology representatives and complement
/// `Y` (both lists of homogeneous vectors).
pub fn hodge_decompose_custom(
    space: &GradedSpace,
    sector: Sector,
    differential: Option<&MultiMap>,
    representatives: &[Vector],
    complement: &[Vector],
) -> Result<SectorContraction> {
    let d = unary_table(differential, sector, space.dim());
    check_square_zero(&d)?;
    for r in representatives {
        if !apply_table(&d, r).is_zero() {
            return Err(Error::Precondition("representative is not a cocycle".into()));
        }
    }
    build(space, sector, d, representatives.to_vec(), complement.to_vec())
}

fn homogeneous_degree(space: &GradedSpace, v: &Vector) -> Result<i32> {
    v.degree_in(space.degrees())?.ok_or_else(|| Error::Invalid("zero vector in a decomposition".into()))
}

fn build(space: &GradedSpace, sector: Sector, d: Vec<Vector>, reps: Vec<Vector>, complement: Vec<Vector>) -> Result<SectorContraction> {
    let n = space.dim();
    let mut small_basis: Vec<(String, i32)> = Vec::new();
    let mut rep_degrees = Vec::new();
    for r in &reps {
        let deg = homogeneous_degree(space, r)?;
        rep_degrees.push(deg);
        let lead = r.support().next().expect("nonzero");
        let base = if *r == Vector::basis(lead) { space.name(lead).to_string() } else { format!("[{}]", space.name(lead)) };
        let mut name = base.clone();
        let mut k = 1;
        while small_basis.iter().any(|(s, _)| *s == name) {
            k += 1;
            name = format!("{base}{k}");
        }
        small_basis.push((name, deg));
    }
    let small = GradedSpace::new(SectorTag::Plain, small_basis.clone())?.with_tag(space.tag());
    // Small basis is re-sorted by (degree, name); map representative order to it.
    let rep_to_small: Vec<usize> = small_basis.iter().map(|(name, _)| small.lookup(name).expect("present")).collect();

    let mut inclusion = vec![Vector::zero(); small.dim()];
    for (r, v) in reps.iter().enumerate() {
        inclusion[rep_to_small[r]] = v.clone();
    }
    let mut projection = vec![Vector::zero(); n];
    let mut homotopy = vec![Vector::zero(); n];

    let complement_degrees: Vec<i32> = complement.iter().map(|y| homogeneous_degree(space, y)).collect::<Result<_>>()?;
    for degree in space.degree_range() {
        let indices = space.of_degree(degree);
        let mut columns = Vec::new();
        let mut roles = Vec::new();
        for (r, v) in reps.iter().enumerate() {
            if rep_degrees[r] == degree {
                columns.push(v.clone());
                roles.push(Role::Rep(rep_to_small[r]));
            }
        }
        for (y, v) in complement.iter().enumerate() {
            if complement_degrees[y] + 1 == degree {
                let b = apply_table(&d, v);
                if b.is_zero() {
                    return Err(Error::Precondition("complement vector is a cocycle".into()));
                }
                columns.push(b);
                roles.push(Role::Boundary(v.clone()));
            }
        }
        for (y, v) in complement.iter().enumerate() {
            if complement_degrees[y] == degree {
                columns.push(v.clone());
                roles.push(Role::Complement);
            }
        }
        if columns.len() != indices.len() {
            return Err(Error::Precondition(format!(
                "degree {degree}: decomposition has {} vectors for a {}-dimensional space",
                columns.len(),
                indices.len()
            )));
        }
        let local: Vec<Vector> = columns
            .iter()
            .map(|v| Vector::from_pairs(v.iter().map(|(i, c)| (indices.iter().position(|&j| j == i).expect("homogeneous"), c.clone()))))
            .collect();
        let m = Matrix::from_columns(indices.len(), &local);
        let inv = m.inverse().ok_or_else(|| Error::Precondition(format!("degree {degree}: decomposition is not a basis")))?;
        for (local_i, &i) in indices.iter().enumerate() {
            for (col, role) in roles.iter().enumerate() {
                let c: Scalar = inv.get(col, local_i).clone();
                if c == int(0) {
                    continue;
                }
                match role {
                    Role::Rep(s) => projection[i].add_term(*s, c),
                    Role::Boundary(y) => homotopy[i].add_scaled(y, &c),
                    Role::Complement => {}
                }
            }
        }
    }
    let out = SectorContraction { sector, big: space.clone(), small, differential: d, inclusion, projection, homotopy };
    out.check()?;
    Ok(out)
}

enum Role {
    Rep(usize),
    Boundary(Vector),
    Complement,
}
