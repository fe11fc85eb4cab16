//! On-disk JSON documents for structures, morphisms and Maurer–Cartan
//! elements. Degrees are in the suspended convention (structure maps of
//! degree +1); coefficients are exact rationals written as `"p/q"` strings,
//! or arrays of them (coefficients of `ħ^0, ħ^1, …`) in formal documents.
//! The schema is described in `docs/document-format.md`.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::deformation::McPair;
use crate::error::{Error, Result};
use crate::graded::{canonicalize_block, format_scalar, parse_scalar, BasisElement, GradedSpace, MapFamily, Ring, Scalar, Sector, SectorTag, Trunc, Vector};
use crate::structures::{OchaMorphism, OchaStructure, Pairing, SymplecticPair};

pub const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Structure,
    Morphism,
    Mc,
}

/// A coefficient: a rational, or a polynomial in `ħ` given lowest power first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Scalar(String),
    Series(Vec<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    L,
    N,
    M,
    F,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub closed: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub open: Vec<String>,
    pub output: BTreeMap<String, Coefficient>,
}

/// Structure constants of one map. Symmetric closed blocks are given only on
/// inputs in basis order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapTable {
    pub kind: TableKind,
    pub closed: usize,
    pub open: usize,
    /// Output sector; only morphism tables (`f`) carry it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<Sector>,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingDocument {
    pub closed_degree: i32,
    pub open_degree: i32,
    pub closed: Vec<PairEntry>,
    pub open: Vec<PairEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationDocument {
    pub degree: i32,
    pub maps: Vec<MapTable>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDocument {
    pub format: Format,
    pub version: u32,
    /// Suspension shift that was applied to classical input data to produce
    /// this document (informational; the stored degrees are already shifted).
    #[serde(default)]
    pub shift: i32,
    /// Formal order `N`: coefficients live in `ℚ[ħ]/(ħ^N)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub bound: usize,
    #[serde(default)]
    pub weak: bool,
    pub closed: Vec<BasisElement>,
    pub open: Vec<BasisElement>,
    #[serde(default)]
    pub maps: Vec<MapTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<DerivationDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDocument {
    pub format: Format,
    pub version: u32,
    #[serde(default)]
    pub weak: bool,
    pub source: StructureDocument,
    pub target: StructureDocument,
    pub maps: Vec<MapTable>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McDocument {
    pub format: Format,
    pub version: u32,
    pub order: usize,
    #[serde(default)]
    pub closed: BTreeMap<String, Coefficient>,
    #[serde(default)]
    pub open: BTreeMap<String, Coefficient>,
}

/// Coefficient rings that documents can carry.
pub trait DocumentRing: Ring {
    fn read(c: &Coefficient, order: Option<usize>) -> std::result::Result<Self, String>;
    fn write(&self) -> Coefficient;
}

fn scalar(text: &str) -> std::result::Result<Scalar, String> {
    parse_scalar(text).ok_or_else(|| format!("`{text}` is not an exact rational"))
}

impl DocumentRing for Scalar {
    fn read(c: &Coefficient, _order: Option<usize>) -> std::result::Result<Self, String> {
        match c {
            Coefficient::Scalar(s) => scalar(s),
            Coefficient::Series(_) => Err("ħ-series coefficient in a document without `order`".into()),
        }
    }

    fn write(&self) -> Coefficient {
        Coefficient::Scalar(format_scalar(self))
    }
}

impl DocumentRing for Trunc {
    fn read(c: &Coefficient, order: Option<usize>) -> std::result::Result<Self, String> {
        let order = order.ok_or("formal coefficient needs the document `order`")?;
        match c {
            Coefficient::Scalar(s) => Ok(Trunc::new(vec![scalar(s)?], order)),
            Coefficient::Series(v) => {
                if v.len() > order {
                    return Err(format!("series has {} terms but the order is {order}", v.len()));
                }
                Ok(Trunc::new(v.iter().map(|s| scalar(s)).collect::<std::result::Result<_, _>>()?, order))
            }
        }
    }

    fn write(&self) -> Coefficient {
        match self.coeffs() {
            [c] => Coefficient::Scalar(format_scalar(c)),
            cs => Coefficient::Series(cs.iter().map(format_scalar).collect()),
        }
    }
}

/// Parses JSON, anchoring syntax and shape errors to a line.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

/// The `format` field of a document, read without parsing the rest.
pub fn sniff_format(text: &str) -> Result<Format> {
    #[derive(Deserialize)]
    struct Head {
        format: Format,
    }
    parse::<Head>(text).map(|h| h.format)
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn expect_format(found: Format, wanted: Format) -> Result<()> {
    if found != wanted {
        return Err(Error::Invalid(format!("expected a {wanted:?} document, found {found:?}").to_lowercase()));
    }
    Ok(())
}

fn expect_version(version: u32) -> Result<()> {
    if version != VERSION {
        return Err(Error::Invalid(format!("unsupported document version {version}")));
    }
    Ok(())
}

fn space(tag: SectorTag, basis: &[BasisElement]) -> Result<GradedSpace> {
    GradedSpace::new(tag, basis.iter().map(|b| (b.name.clone(), b.degree)))
}

fn at(context: &str, e: Error) -> Error {
    match e {
        Error::Invalid(m) => Error::Invalid(format!("{context}: {m}")),
        Error::UnknownBasis(n) => Error::Invalid(format!("{context}: unknown basis element `{n}`")),
        other => other,
    }
}

fn read_vector<R: DocumentRing>(
    space: &GradedSpace,
    output: &BTreeMap<String, Coefficient>,
    order: Option<usize>,
) -> Result<Vector<R>> {
    let mut v = Vector::zero();
    for (name, c) in output {
        let value = R::read(c, order).map_err(Error::Invalid)?;
        v.add_term(space.lookup(name)?, value);
    }
    Ok(v)
}

fn write_vector<R: DocumentRing>(space: &GradedSpace, v: &Vector<R>) -> BTreeMap<String, Coefficient> {
    v.iter().map(|(i, c)| (space.name(i).to_string(), c.write())).collect()
}

struct Spaces<'a> {
    closed: &'a GradedSpace,
    open: &'a GradedSpace,
    closed_out: &'a GradedSpace,
    open_out: &'a GradedSpace,
}

fn read_table<R: DocumentRing>(
    table: &MapTable,
    family: &mut MapFamily<R>,
    spaces: &Spaces<'_>,
    order: Option<usize>,
    morphism: bool,
    context: &str,
) -> Result<()> {
    let output = match (table.kind, morphism) {
        (TableKind::L, false) => Sector::Closed,
        (TableKind::N, false) => Sector::Open,
        (TableKind::M, false) if table.closed == 0 => Sector::Open,
        (TableKind::M, false) => return Err(Error::Invalid(format!("{context}: an `m` table has no closed inputs"))),
        (TableKind::F, true) => table.output.ok_or_else(|| Error::Invalid(format!("{context}: `f` table needs `output`")))?,
        (kind, _) => return Err(Error::Invalid(format!("{context}: table kind {kind:?} not allowed here").to_lowercase())),
    };
    if output == Sector::Closed && table.open != 0 {
        return Err(Error::Invalid(format!("{context}: closed-valued maps have no open inputs")));
    }
    let cdeg = spaces.closed.degrees();
    let map = match output {
        Sector::Closed => family.closed_mut(table.closed),
        Sector::Open => family.open_mut(table.closed, table.open),
    };
    let out_space = match output {
        Sector::Closed => spaces.closed_out,
        Sector::Open => spaces.open_out,
    };
    for (k, entry) in table.entries.iter().enumerate() {
        let ctx = format!("{context}.entries[{k}]");
        if entry.closed.len() != table.closed || entry.open.len() != table.open {
            return Err(Error::Invalid(format!("{ctx}: expected {} closed and {} open inputs", table.closed, table.open)));
        }
        let closed: Vec<usize> = entry.closed.iter().map(|n| spaces.closed.lookup(n)).collect::<Result<_>>().map_err(|e| at(&ctx, e))?;
        let open: Vec<usize> = entry.open.iter().map(|n| spaces.open.lookup(n)).collect::<Result<_>>().map_err(|e| at(&ctx, e))?;
        match canonicalize_block(&closed, cdeg) {
            None => return Err(Error::Invalid(format!("{ctx}: repeated odd closed input vanishes by symmetry"))),
            Some((sorted, _)) if sorted != closed => {
                return Err(Error::Invalid(format!("{ctx}: closed inputs must be listed in basis order")));
            }
            Some(_) => {}
        }
        let mut key = closed;
        key.extend(open);
        if map.raw(&key).is_some() {
            return Err(Error::Invalid(format!("{ctx}: duplicate inputs")));
        }
        let value = read_vector(out_space, &entry.output, order).map_err(|e| at(&ctx, e))?;
        map.insert_raw(key, value);
    }
    Ok(())
}

fn write_tables<R: DocumentRing>(family: &MapFamily<R>, spaces: &Spaces<'_>, morphism: bool) -> Vec<MapTable> {
    let mut out = Vec::new();
    let entry = |key: &[usize], p: usize, v: &Vector<R>, out_space: &GradedSpace| Entry {
        closed: key[..p].iter().map(|&i| spaces.closed.name(i).to_string()).collect(),
        open: key[p..].iter().map(|&i| spaces.open.name(i).to_string()).collect(),
        output: write_vector(out_space, v),
    };
    for (&k, map) in &family.closed {
        let entries: Vec<Entry> = map.entries().filter(|(_, v)| !v.is_zero()).map(|(key, v)| entry(key, k, v, spaces.closed_out)).collect();
        if !entries.is_empty() {
            let (kind, output) = if morphism { (TableKind::F, Some(Sector::Closed)) } else { (TableKind::L, None) };
            out.push(MapTable { kind, closed: k, open: 0, output, entries });
        }
    }
    for (&(p, q), map) in &family.open {
        let entries: Vec<Entry> = map.entries().filter(|(_, v)| !v.is_zero()).map(|(key, v)| entry(key, p, v, spaces.open_out)).collect();
        if !entries.is_empty() {
            let (kind, output) = match (morphism, p) {
                (true, _) => (TableKind::F, Some(Sector::Open)),
                (false, 0) => (TableKind::M, None),
                (false, _) => (TableKind::N, None),
            };
            out.push(MapTable { kind, closed: p, open: q, output, entries });
        }
    }
    out
}

fn read_pairing(doc: &PairingDocument, s: &OchaStructure) -> Result<SymplecticPair> {
    let mut w = SymplecticPair { closed: Pairing::new(doc.closed_degree), open: Pairing::new(doc.open_degree) };
    for (sector, entries, pairing) in [(Sector::Closed, &doc.closed, &mut w.closed), (Sector::Open, &doc.open, &mut w.open)] {
        let sp = s.space(sector);
        let mut seen = BTreeSet::new();
        for (k, e) in entries.iter().enumerate() {
            let ctx = format!("pairing.{sector}[{k}]");
            let (i, j) = (sp.lookup(&e.left).map_err(|x| at(&ctx, x))?, sp.lookup(&e.right).map_err(|x| at(&ctx, x))?);
            if !seen.insert((i, j)) {
                return Err(Error::Invalid(format!("{ctx}: duplicate entry")));
            }
            pairing.set(i, j, scalar(&e.value).map_err(|m| Error::Invalid(format!("{ctx}: {m}")))?);
        }
    }
    Ok(w)
}

fn write_pairing(w: &SymplecticPair, s: &OchaStructure) -> PairingDocument {
    let entries = |p: &Pairing, sp: &GradedSpace| {
        p.table
            .iter()
            .map(|(&(i, j), v)| PairEntry { left: sp.name(i).into(), right: sp.name(j).into(), value: format_scalar(v) })
            .collect()
    };
    PairingDocument {
        closed_degree: w.closed.degree,
        open_degree: w.open.degree,
        closed: entries(&w.closed, &s.closed),
        open: entries(&w.open, &s.open),
    }
}

impl StructureDocument {
    pub fn from_structure<R: DocumentRing>(s: &OchaStructure<R>, order: Option<usize>) -> Self {
        let spaces = Spaces { closed: &s.closed, open: &s.open, closed_out: &s.closed, open_out: &s.open };
        StructureDocument {
            format: Format::Structure,
            version: VERSION,
            shift: 0,
            order,
            bound: s.bound,
            weak: s.weak,
            closed: s.closed.basis().to_vec(),
            open: s.open.basis().to_vec(),
            maps: write_tables(&s.maps, &spaces, false),
            derivation: None,
            pairing: None,
        }
    }

    pub fn with_pairing(mut self, w: &SymplecticPair, s: &OchaStructure) -> Self {
        self.pairing = Some(write_pairing(w, s));
        self
    }

    pub fn with_derivation<R: DocumentRing>(mut self, theta: &MapFamily<R>, s: &OchaStructure<R>) -> Self {
        let spaces = Spaces { closed: &s.closed, open: &s.open, closed_out: &s.closed, open_out: &s.open };
        self.derivation = Some(DerivationDocument { degree: theta.degree, maps: write_tables(theta, &spaces, false) });
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        expect_format(sniff_format(text)?, Format::Structure)?;
        let doc: StructureDocument = parse(text)?;
        expect_version(doc.version)?;
        Ok(doc)
    }

    /// The structure, validated (degrees, symmetry, bound, weak flag).
    pub fn to_structure<R: DocumentRing>(&self) -> Result<OchaStructure<R>> {
        let closed = space(SectorTag::Closed, &self.closed)?;
        let open = space(SectorTag::Open, &self.open)?;
        let mut s: OchaStructure<R> = OchaStructure::new(closed, open, self.bound);
        s.weak = self.weak;
        let spaces = Spaces { closed: &s.closed, open: &s.open, closed_out: &s.closed, open_out: &s.open };
        let mut family = MapFamily::new(1);
        for (k, table) in self.maps.iter().enumerate() {
            read_table(table, &mut family, &spaces, self.order, false, &format!("maps[{k}]"))?;
        }
        s.maps = family.pruned();
        s.validate()?;
        Ok(s)
    }

    pub fn derivation_family<R: DocumentRing>(&self, s: &OchaStructure<R>) -> Result<Option<MapFamily<R>>> {
        let Some(d) = &self.derivation else { return Ok(None) };
        let spaces = Spaces { closed: &s.closed, open: &s.open, closed_out: &s.closed, open_out: &s.open };
        let mut family = MapFamily::new(d.degree);
        for (k, table) in d.maps.iter().enumerate() {
            read_table(table, &mut family, &spaces, self.order, false, &format!("derivation.maps[{k}]"))?;
        }
        let family = family.pruned();
        family.validate(s.degrees(), s.degrees())?;
        Ok(Some(family))
    }

    pub fn symplectic_pair(&self, s: &OchaStructure) -> Result<Option<SymplecticPair>> {
        self.pairing.as_ref().map(|p| read_pairing(p, s)).transpose()
    }
}

impl MorphismDocument {
    pub fn from_morphism(f: &OchaMorphism) -> Self {
        let spaces = Spaces { closed: &f.source.closed, open: &f.source.open, closed_out: &f.target.closed, open_out: &f.target.open };
        MorphismDocument {
            format: Format::Morphism,
            version: VERSION,
            weak: f.weak,
            source: StructureDocument::from_structure(&f.source, None),
            target: StructureDocument::from_structure(&f.target, None),
            maps: write_tables(&f.maps, &spaces, true),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        expect_format(sniff_format(text)?, Format::Morphism)?;
        let doc: MorphismDocument = parse(text)?;
        expect_version(doc.version)?;
        Ok(doc)
    }

    pub fn to_morphism(&self) -> Result<OchaMorphism> {
        let source: OchaStructure = self.source.to_structure()?;
        let target: OchaStructure = self.target.to_structure()?;
        let mut f = OchaMorphism::new(source, target);
        f.weak = self.weak;
        let spaces = Spaces { closed: &f.source.closed, open: &f.source.open, closed_out: &f.target.closed, open_out: &f.target.open };
        let mut family = MapFamily::new(0);
        for (k, table) in self.maps.iter().enumerate() {
            read_table(table, &mut family, &spaces, None, true, &format!("maps[{k}]"))?;
        }
        f.maps = family.pruned();
        f.validate()?;
        Ok(f)
    }
}

impl McDocument {
    pub fn from_pair(x: &McPair, s: &OchaStructure<impl Ring>) -> Self {
        McDocument {
            format: Format::Mc,
            version: VERSION,
            order: x.order,
            closed: write_vector(&s.closed, &x.closed),
            open: write_vector(&s.open, &x.open),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        expect_format(sniff_format(text)?, Format::Mc)?;
        let doc: McDocument = parse(text)?;
        expect_version(doc.version)?;
        Ok(doc)
    }

    pub fn to_pair(&self, s: &OchaStructure<impl Ring>) -> Result<McPair> {
        Ok(McPair {
            closed: read_vector(&s.closed, &self.closed, Some(self.order)).map_err(|e| at("closed", e))?,
            open: read_vector(&s.open, &self.open, Some(self.order)).map_err(|e| at("open", e))?,
            order: self.order,
        })
    }
}

/// Parses `name@power=coeff` terms separated by commas, e.g.
/// `Z@1, x@2=-1/2`; the coefficient defaults to 1.
pub fn parse_formal(space: &GradedSpace, text: &str, order: usize) -> Result<Vector<Trunc>> {
    let mut v = Vector::zero();
    for term in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let bad = || Error::Invalid(format!("cannot read formal term `{term}` (expected name@power[=p/q])"));
        let (lhs, coeff) = match term.split_once('=') {
            Some((l, c)) => (l.trim(), parse_scalar(c.trim()).ok_or_else(bad)?),
            None => (term, crate::graded::int(1)),
        };
        let (name, power) = lhs.split_once('@').ok_or_else(bad)?;
        let power: usize = power.trim().parse().map_err(|_| bad())?;
        v.add_term(space.lookup(name.trim())?, Trunc::monomial(coeff, power, order));
    }
    Ok(v)
}

/// Parses `name=p/q` terms separated by commas (coefficient defaults to 1).
pub fn parse_scalar_vector(space: &GradedSpace, text: &str) -> Result<Vector> {
    let mut v = Vector::zero();
    for term in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (name, coeff) = match term.split_once('=') {
            Some((n, c)) => (n.trim(), parse_scalar(c.trim()).ok_or_else(|| Error::Invalid(format!("bad coefficient in `{term}`")))?),
            None => (term, crate::graded::int(1)),
        };
        v.add_term(space.lookup(name)?, coeff);
    }
    Ok(v)
}

/// Table entries of a single map, used by reports.
pub fn describe_vector<R: DocumentRing>(space: &GradedSpace, v: &Vector<R>) -> BTreeMap<String, Coefficient> {
    write_vector(space, v)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{solve_mc, McSolve};
    use crate::fixtures;
    use crate::structures::{check_ocha, identity_morphism, Contraction};

    fn round_trip(s: &OchaStructure) {
        let text = to_json(&StructureDocument::from_structure(s, None));
        let back: OchaStructure = StructureDocument::parse(&text).unwrap().to_structure().unwrap();
        assert_eq!(&back, s);
    }

    #[test]
    fn structures_round_trip() {
        round_trip(&fixtures::massey_algebra(4).unwrap());
        round_trip(&fixtures::leibniz_ocha(4).unwrap());
        round_trip(&fixtures::extended_leibniz_ocha(4).unwrap());
        round_trip(&fixtures::small_dg_lie().to_l_infinity(3).unwrap());
    }

    #[test]
    fn pairing_round_trip() {
        let (s, w) = fixtures::frobenius_ocha().unwrap();
        let doc = StructureDocument::from_structure(&s, None).with_pairing(&w, &s);
        let doc = StructureDocument::parse(&to_json(&doc)).unwrap();
        let s2: OchaStructure = doc.to_structure().unwrap();
        assert_eq!(doc.symplectic_pair(&s2).unwrap().unwrap(), w);
    }

    #[test]
    fn morphism_round_trip() {
        let f = identity_morphism(&fixtures::leibniz_ocha(3).unwrap());
        let back = MorphismDocument::parse(&to_json(&MorphismDocument::from_morphism(&f))).unwrap().to_morphism().unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn formal_structure_round_trip() {
        let s = fixtures::small_dg_lie().to_l_infinity(3).unwrap();
        let order = 3;
        let x = parse_formal(&s.closed, "x@1, x@2=-1/2", order).unwrap();
        let twisted = crate::deformation::twist_l_infinity(&s, &x, order).unwrap();
        let text = to_json(&StructureDocument::from_structure(&twisted, Some(order)));
        assert!(text.contains('['), "series coefficients are written as arrays");
        let back: OchaStructure<Trunc> = StructureDocument::parse(&text).unwrap().to_structure().unwrap();
        assert_eq!(back, twisted);
    }

    #[test]
    fn mc_round_trip() {
        let s = fixtures::exact_square_lie().to_l_infinity(3).unwrap();
        let seed = parse_scalar_vector(&s.closed, "x").unwrap();
        let contraction = Contraction { closed: crate::structures::cohomology(&s.closed, Sector::Closed, s.l(1)).unwrap(), open: crate::structures::cohomology(&s.open, Sector::Open, None).unwrap() };
        let McSolve::Solved(x) = solve_mc(&s, &seed, &contraction.closed, 4).unwrap() else { panic!("unobstructed") };
        let pair = McPair::closed_only(x, 4);
        let back = McDocument::parse(&to_json(&McDocument::from_pair(&pair, &s))).unwrap().to_pair(&s).unwrap();
        assert_eq!(back, pair);
        assert!(check_ocha(&s, 3, 0).is_valid());
    }

    const SMALL: &str = r#"{
  "format": "structure", "version": 1, "bound": 2,
  "closed": [], "open": [{"name": "a", "degree": -1}, {"name": "b", "degree": 0}],
  "maps": [{"kind": "m", "closed": 0, "open": 1, "entries": [ENTRIES]}]
}"#;

    fn small(entries: &str) -> Result<OchaStructure> {
        StructureDocument::parse(&SMALL.replace("ENTRIES", entries))?.to_structure()
    }

    #[test]
    fn accepts_valid_table() {
        let s = small(r#"{"open": ["a"], "output": {"b": "2/4"}}"#).unwrap();
        let a = s.open.lookup("a").unwrap();
        assert_eq!(s.n(0, 1).unwrap().on_basis(&[], &[a], &[]), Vector::from_pairs([(s.open.lookup("b").unwrap(), crate::graded::ratio(1, 2))]));
    }

    #[test]
    fn rejects_bad_tables_with_context() {
        let duplicate = small(r#"{"open": ["a"], "output": {"b": "1"}}, {"open": ["a"], "output": {"b": "1"}}"#).unwrap_err();
        assert!(duplicate.to_string().contains("maps[0].entries[1]"), "{duplicate}");
        let unknown = small(r#"{"open": ["c"], "output": {"b": "1"}}"#).unwrap_err();
        assert!(unknown.to_string().contains("`c`"), "{unknown}");
        let inexact = small(r#"{"open": ["a"], "output": {"b": "0.5"}}"#).unwrap_err();
        assert!(inexact.to_string().contains("exact rational"), "{inexact}");
        let degree = small(r#"{"open": ["b"], "output": {"b": "1"}}"#).unwrap_err();
        assert!(matches!(degree, Error::Degree(_)), "{degree}");
    }

    #[test]
    fn rejects_non_canonical_closed_inputs() {
        let text = r#"{"format": "structure", "version": 1, "bound": 2, "open": [],
          "closed": [{"name": "x", "degree": 0}, {"name": "y", "degree": 0}, {"name": "z", "degree": -1}, {"name": "u", "degree": 1}],
          "maps": [{"kind": "l", "closed": 2, "open": 0, "entries": [{"closed": [ORDER], "output": {"u": "1"}}]}]}"#;
        let read = |order: &str| StructureDocument::parse(&text.replace("ORDER", order)).and_then(|d| d.to_structure::<Scalar>());
        read(r#""x", "y""#).unwrap();
        assert!(read(r#""y", "x""#).unwrap_err().to_string().contains("basis order"));
        assert!(read(r#""z", "z""#).unwrap_err().to_string().contains("odd"));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = StructureDocument::parse("{\n  \"format\": \"structure\",\n  oops\n}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = McDocument::parse(&to_json(&StructureDocument::from_structure(&fixtures::massey_algebra(2).unwrap(), None))).unwrap_err();
        assert!(err.to_string().contains("expected a mc document"), "{err}");
    }

    #[test]
    fn series_need_an_order() {
        let err = small(r#"{"open": ["a"], "output": {"b": ["1", "2"]}}"#).unwrap_err();
        assert!(err.to_string().contains("order"), "{err}");
        assert_eq!(Trunc::read(&Coefficient::Series(vec!["1".into(), "2".into()]), Some(3)).unwrap().write(), Coefficient::Series(vec!["1".into(), "2".into()]));
        assert!(Trunc::read(&Coefficient::Series(vec!["1".into(); 4]), Some(3)).is_err());
    }

    #[test]
    fn formal_flag_syntax() {
        let s = fixtures::small_dg_lie().to_l_infinity(2).unwrap();
        let v = parse_formal(&s.closed, "x@1, w@2=3/2", 3).unwrap();
        assert_eq!(v.iter().count(), 2);
        assert!(parse_formal(&s.closed, "x1", 3).is_err());
        assert!(parse_formal(&s.closed, "q@1", 3).is_err());
    }
}
