//! Formal contexts and the derivation operators between object and
//! attribute sets.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bitset::{self, BitSet};
use crate::error::{Error, Result};

/// Largest number of objects or attributes a context may hold.
pub const MAX_DIMENSION: usize = 64_000;

macro_rules! index_set {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, Debug)]
        pub struct $name(pub(crate) BitSet);

        impl $name {
            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn contains(&self, i: usize) -> bool {
                self.0.contains(i)
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                self.0.universe() == other.0.universe() && self.0.is_subset(&other.0)
            }

            pub fn iter(&self) -> bitset::Iter<'_> {
                self.0.iter()
            }

            pub fn as_bits(&self) -> &BitSet {
                &self.0
            }

            pub fn intersection(&self, other: &Self) -> Self {
                $name(self.0.intersection(&other.0))
            }

            pub fn union(&self, other: &Self) -> Self {
                $name(self.0.union(&other.0))
            }

            pub fn difference(&self, other: &Self) -> Self {
                $name(self.0.difference(&other.0))
            }
        }

        impl<'a> IntoIterator for &'a $name {
            type Item = usize;
            type IntoIter = bitset::Iter<'a>;

            fn into_iter(self) -> Self::IntoIter {
                self.0.iter()
            }
        }
    };
}

index_set!(
    /// A subset of a context's objects, by canonical index.
    ObjectSet
);
index_set!(
    /// A subset of a context's attributes, by canonical index.
    AttributeSet
);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContextFormat {
    Csv,
    Json,
}

impl ContextFormat {
    /// `.json` files are JSON, everything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => ContextFormat::Json,
            _ => ContextFormat::Csv,
        }
    }
}

/// JSON wire form of a context. `incidence[i]` lists the indices (into
/// `attributes`) owned by `objects[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextDocument {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    pub incidence: Vec<Vec<usize>>,
}

/// A binary object × attribute table.
///
/// Objects and attributes are stored sorted by name, so two contexts that
/// differ only in row or column order are equal. The incidence relation is
/// kept twice: one bit row per object and one bit column per attribute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<BitSet>,
    columns: Vec<BitSet>,
    object_index: HashMap<String, usize>,
    attribute_index: HashMap<String, usize>,
}

fn check_names(kind: &'static str, names: &[String]) -> Result<()> {
    if names.is_empty() {
        return Err(Error::EmptyContext(if kind == "object" {
            "objects"
        } else {
            "attributes"
        }));
    }
    if names.len() > MAX_DIMENSION {
        return Err(Error::CapacityExceeded(format!(
            "{} {kind}s exceeds the limit of {MAX_DIMENSION}",
            names.len()
        )));
    }
    let mut seen = std::collections::HashSet::with_capacity(names.len());
    for name in names {
        if name.is_empty() {
            return Err(Error::MalformedTable(format!("empty {kind} name")));
        }
        if !seen.insert(name.as_str()) {
            return Err(Error::DuplicateName {
                kind,
                name: name.clone(),
            });
        }
    }
    Ok(())
}

fn sorted_order(names: &[String]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    order
}

impl FormalContext {
    /// Builds a context from names and, per object, the indices of the
    /// attributes it owns (relative to the given `attributes` order).
    pub fn from_rows(objects: Vec<String>, attributes: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Self> {
        check_names("object", &objects)?;
        check_names("attribute", &attributes)?;
        if rows.len() != objects.len() {
            return Err(Error::MalformedTable(format!(
                "{} incidence rows for {} objects",
                rows.len(),
                objects.len()
            )));
        }

        let obj_order = sorted_order(&objects);
        let attr_order = sorted_order(&attributes);
        let mut attr_rank = vec![0; attributes.len()];
        for (rank, &orig) in attr_order.iter().enumerate() {
            attr_rank[orig] = rank;
        }

        let n_attrs = attributes.len();
        let mut sorted_rows = Vec::with_capacity(objects.len());
        for &orig in &obj_order {
            let mut row = BitSet::empty(n_attrs);
            for &a in &rows[orig] {
                if a >= n_attrs {
                    return Err(Error::MalformedTable(format!(
                        "object `{}` references attribute index {a}, but there are only {n_attrs} attributes",
                        objects[orig]
                    )));
                }
                row.insert(attr_rank[a]);
            }
            sorted_rows.push(row);
        }

        let objects: Vec<String> = obj_order.iter().map(|&i| objects[i].clone()).collect();
        let attributes: Vec<String> = attr_order.iter().map(|&i| attributes[i].clone()).collect();
        Ok(Self::assemble(objects, attributes, sorted_rows))
    }

    /// Builds a context from a dense boolean matrix (`incidence[o][a]`).
    pub fn from_matrix(objects: Vec<String>, attributes: Vec<String>, incidence: &[Vec<bool>]) -> Result<Self> {
        let mut rows = Vec::with_capacity(incidence.len());
        for (i, cells) in incidence.iter().enumerate() {
            if cells.len() != attributes.len() {
                return Err(Error::MalformedTable(format!(
                    "row {i} has {} cells, expected {}",
                    cells.len(),
                    attributes.len()
                )));
            }
            rows.push(cells.iter().enumerate().filter(|(_, &c)| c).map(|(a, _)| a).collect());
        }
        Self::from_rows(objects, attributes, rows)
    }

    fn assemble(objects: Vec<String>, attributes: Vec<String>, rows: Vec<BitSet>) -> Self {
        let mut columns = vec![BitSet::empty(objects.len()); attributes.len()];
        for (o, row) in rows.iter().enumerate() {
            for a in row {
                columns[a].insert(o);
            }
        }
        let object_index = objects.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let attribute_index = attributes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        FormalContext {
            objects,
            attributes,
            rows,
            columns,
            object_index,
            attribute_index,
        }
    }

    pub fn parse(source: &str, format: ContextFormat) -> Result<Self> {
        match format {
            ContextFormat::Csv => parse_csv(source.as_bytes()),
            ContextFormat::Json => {
                let doc: ContextDocument = serde_json::from_str(source)?;
                Self::from_document(doc)
            }
        }
    }

    pub fn from_reader<R: Read>(mut reader: R, format: ContextFormat) -> Result<Self> {
        let mut source = String::new();
        reader.read_to_string(&mut source)?;
        Self::parse(&source, format)
    }

    /// Reads a context file, picking the format from its extension.
    pub fn from_path(path: &Path) -> Result<Self> {
        let source = std::fs::read_to_string(path)?;
        Self::parse(&source, ContextFormat::from_path(path))
    }

    pub fn from_document(doc: ContextDocument) -> Result<Self> {
        Self::from_rows(doc.objects, doc.attributes, doc.incidence)
    }

    pub fn to_document(&self) -> ContextDocument {
        ContextDocument {
            objects: self.objects.clone(),
            attributes: self.attributes.clone(),
            incidence: self.rows.iter().map(|r| r.iter().collect()).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = csv::Writer::from_writer(Vec::new());
        let mut header = vec![String::new()];
        header.extend(self.attributes.iter().cloned());
        // Writing to a Vec cannot fail.
        out.write_record(&header).expect("in-memory csv");
        for (o, name) in self.objects.iter().enumerate() {
            let mut record = vec![name.clone()];
            record.extend(
                (0..self.attributes.len()).map(|a| if self.rows[o].contains(a) { "x" } else { "" }.to_string()),
            );
            out.write_record(&record).expect("in-memory csv");
        }
        String::from_utf8(out.into_inner().expect("in-memory csv")).expect("utf-8 names")
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    /// Number of (object, attribute) pairs in the relation.
    pub fn incidence_count(&self) -> usize {
        self.rows.iter().map(BitSet::len).sum()
    }

    pub fn has(&self, object: usize, attribute: usize) -> bool {
        self.rows[object].contains(attribute)
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.object_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn attribute_index(&self, name: &str) -> Result<usize> {
        self.attribute_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    /// Attributes owned by one object.
    pub fn row(&self, object: usize) -> &BitSet {
        &self.rows[object]
    }

    /// Objects owning one attribute.
    pub fn column(&self, attribute: usize) -> &BitSet {
        &self.columns[attribute]
    }

    pub fn object_set<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<ObjectSet> {
        BitSet::from_indices(self.objects.len(), indices)
            .map(ObjectSet)
            .ok_or_else(|| Error::InvalidSet(format!("object index out of range (|O| = {})", self.objects.len())))
    }

    pub fn attribute_set<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<AttributeSet> {
        BitSet::from_indices(self.attributes.len(), indices)
            .map(AttributeSet)
            .ok_or_else(|| {
                Error::InvalidSet(format!(
                    "attribute index out of range (|A| = {})",
                    self.attributes.len()
                ))
            })
    }

    pub fn objects_named<S: AsRef<str>>(&self, names: &[S]) -> Result<ObjectSet> {
        let idx = names
            .iter()
            .map(|n| self.object_index(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.object_set(idx)
    }

    pub fn attributes_named<S: AsRef<str>>(&self, names: &[S]) -> Result<AttributeSet> {
        let idx = names
            .iter()
            .map(|n| self.attribute_index(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.attribute_set(idx)
    }

    pub fn all_objects(&self) -> ObjectSet {
        ObjectSet(BitSet::full(self.objects.len()))
    }

    pub fn all_attributes(&self) -> AttributeSet {
        AttributeSet(BitSet::full(self.attributes.len()))
    }

    pub fn object_names<'a>(&'a self, set: &'a ObjectSet) -> impl Iterator<Item = &'a str> + 'a {
        set.iter().map(move |i| self.objects[i].as_str())
    }

    pub fn attribute_names<'a>(&'a self, set: &'a AttributeSet) -> impl Iterator<Item = &'a str> + 'a {
        set.iter().map(move |i| self.attributes[i].as_str())
    }

    fn check_objects(&self, objs: &ObjectSet) -> Result<()> {
        if objs.0.universe() != self.objects.len() {
            return Err(Error::InvalidSet(format!(
                "object set over {} objects used with a context of {}",
                objs.0.universe(),
                self.objects.len()
            )));
        }
        Ok(())
    }

    fn check_attributes(&self, attrs: &AttributeSet) -> Result<()> {
        if attrs.0.universe() != self.attributes.len() {
            return Err(Error::InvalidSet(format!(
                "attribute set over {} attributes used with a context of {}",
                attrs.0.universe(),
                self.attributes.len()
            )));
        }
        Ok(())
    }

    /// Attributes shared by every object of `objs`; all attributes for the empty set.
    pub fn alpha(&self, objs: &ObjectSet) -> Result<AttributeSet> {
        self.check_objects(objs)?;
        Ok(AttributeSet(self.common_attributes(&objs.0)))
    }

    /// Objects owning every attribute of `attrs`; all objects for the empty set.
    pub fn beta(&self, attrs: &AttributeSet) -> Result<ObjectSet> {
        self.check_attributes(attrs)?;
        Ok(ObjectSet(self.common_objects(&attrs.0)))
    }

    pub fn closure_attributes(&self, attrs: &AttributeSet) -> Result<AttributeSet> {
        self.check_attributes(attrs)?;
        Ok(AttributeSet(self.common_attributes(&self.common_objects(&attrs.0))))
    }

    pub fn closure_objects(&self, objs: &ObjectSet) -> Result<ObjectSet> {
        self.check_objects(objs)?;
        Ok(ObjectSet(self.common_objects(&self.common_attributes(&objs.0))))
    }

    pub(crate) fn common_attributes(&self, objs: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.attributes.len());
        for o in objs {
            out.intersect_with(&self.rows[o]);
        }
        out
    }

    pub(crate) fn common_objects(&self, attrs: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.objects.len());
        for a in attrs {
            out.intersect_with(&self.columns[a]);
        }
        out
    }
}

fn truthy(cell: &str) -> Option<bool> {
    let cell = cell.trim();
    if cell.is_empty() || cell == "0" || cell.eq_ignore_ascii_case("false") {
        Some(false)
    } else if cell.eq_ignore_ascii_case("x") || cell == "1" || cell.eq_ignore_ascii_case("true") {
        Some(true)
    } else {
        None
    }
}

fn parse_csv(source: &[u8]) -> Result<FormalContext> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(source);
    let mut records = reader.records();

    let header = match records.next() {
        Some(r) => r.map_err(|e| Error::MalformedTable(e.to_string()))?,
        None => return Err(Error::EmptyContext("attributes")),
    };
    // The corner cell is a free-form label.
    let attributes: Vec<String> = header.iter().skip(1).map(|s| s.trim().to_string()).collect();
    if attributes.is_empty() {
        return Err(Error::EmptyContext("attributes"));
    }

    let mut objects = Vec::new();
    let mut rows = Vec::new();
    for (line, record) in records.enumerate() {
        let record = record.map_err(|e| Error::MalformedTable(e.to_string()))?;
        if record.iter().all(|c| c.trim().is_empty()) {
            continue;
        }
        if record.len() != attributes.len() + 1 {
            return Err(Error::MalformedTable(format!(
                "row {} has {} cells, expected {}",
                line + 2,
                record.len(),
                attributes.len() + 1
            )));
        }
        let name = record[0].trim().to_string();
        let mut owned = Vec::new();
        for (a, cell) in record.iter().skip(1).enumerate() {
            match truthy(cell) {
                Some(true) => owned.push(a),
                Some(false) => {}
                None => {
                    return Err(Error::MalformedTable(format!(
                        "unrecognised cell `{cell}` at row {}, column {}",
                        line + 2,
                        a + 2
                    )))
                }
            }
        }
        objects.push(name);
        rows.push(owned);
    }
    FormalContext::from_rows(objects, attributes, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const K_DM: &str = include_str!("../fixtures/k_dm.csv");

    fn k_dm() -> FormalContext {
        FormalContext::parse(K_DM, ContextFormat::Csv).unwrap()
    }

    fn names<'a>(it: impl Iterator<Item = &'a str>) -> Vec<&'a str> {
        let mut v: Vec<_> = it.collect();
        v.sort();
        v
    }

    #[test]
    fn parses_table_one() {
        let ctx = k_dm();
        assert_eq!(ctx.object_count(), 5);
        assert_eq!(ctx.attribute_count(), 7);
        assert_eq!(ctx.incidence_count(), 23);
        assert_eq!(ctx.objects()[0], "Astah");
        assert_eq!(ctx.attributes()[0], "DM:Conceptual");
    }

    #[test]
    fn single_row_context() {
        let ctx = FormalContext::parse(",a1,a2\no1,x,\n", ContextFormat::Csv).unwrap();
        assert_eq!(
            (ctx.object_count(), ctx.attribute_count(), ctx.incidence_count()),
            (1, 2, 1)
        );
        assert!(ctx.has(0, 0));
    }

    #[test]
    fn duplicate_object_rejected() {
        let err = FormalContext::parse(",a\nAstah,x\nAstah,\n", ContextFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::DuplicateName { kind: "object", .. }), "{err}");
        let err = FormalContext::parse(",a,a\no,x,\n", ContextFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::DuplicateName { kind: "attribute", .. }), "{err}");
    }

    #[test]
    fn ragged_and_bad_cells_rejected() {
        let err = FormalContext::parse(",a,b\no,x\n", ContextFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::MalformedTable(_)), "{err}");
        let err = FormalContext::parse(",a\no,maybe\n", ContextFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::MalformedTable(_)), "{err}");
    }

    #[test]
    fn empty_contexts_rejected() {
        assert!(matches!(
            FormalContext::parse(",a,b\n", ContextFormat::Csv),
            Err(Error::EmptyContext(_))
        ));
        assert!(matches!(
            FormalContext::parse("corner\no\n", ContextFormat::Csv),
            Err(Error::EmptyContext(_))
        ));
        assert!(matches!(
            FormalContext::parse("", ContextFormat::Csv),
            Err(Error::EmptyContext(_))
        ));
    }

    #[test]
    fn truthiness_variants() {
        let ctx = FormalContext::parse(",a,b,c,d\no, X ,TRUE,1,false\np,0,,x,\n", ContextFormat::Csv).unwrap();
        assert_eq!(ctx.row(0).iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(ctx.row(1).iter().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn quoted_fields() {
        let ctx = FormalContext::parse(",\"a,1\",b\n\"o \"\"q\"\"\",x,\n", ContextFormat::Csv).unwrap();
        assert_eq!(ctx.attributes(), ["a,1", "b"]);
        assert_eq!(ctx.objects(), ["o \"q\""]);
    }

    #[test]
    fn json_matches_csv() {
        let json = r#"{"objects":["b","a"],"attributes":["y","x"],"incidence":[[0],[0,1]]}"#;
        let ctx = FormalContext::parse(json, ContextFormat::Json).unwrap();
        let csv = FormalContext::parse(",x,y\na,x,x\nb,,x\n", ContextFormat::Csv).unwrap();
        assert_eq!(ctx, csv);
        let back = FormalContext::from_document(ctx.to_document()).unwrap();
        assert_eq!(back, ctx);
        assert_eq!(FormalContext::parse(&ctx.to_csv(), ContextFormat::Csv).unwrap(), ctx);
    }

    #[test]
    fn json_bad_index() {
        let json = r#"{"objects":["a"],"attributes":["x"],"incidence":[[3]]}"#;
        assert!(matches!(
            FormalContext::parse(json, ContextFormat::Json),
            Err(Error::MalformedTable(_))
        ));
    }

    #[test]
    fn capacity_limit() {
        let attrs: Vec<String> = (0..=MAX_DIMENSION).map(|i| format!("a{i}")).collect();
        let err = FormalContext::from_rows(vec!["o".into()], attrs, vec![vec![]]).unwrap_err();
        assert!(matches!(err, Error::CapacityExceeded(_)));
    }

    #[test]
    fn alpha_examples() {
        let ctx = k_dm();
        let objs = ctx.objects_named(&["Erwin-DM", "ER-Studio"]).unwrap();
        let a = ctx.alpha(&objs).unwrap();
        assert_eq!(
            names(ctx.attribute_names(&a)),
            ["DM:Conceptual", "DM:Logical", "DM:Physical", "OS:Windows"]
        );
        let none = ctx.object_set([]).unwrap();
        assert_eq!(ctx.alpha(&none).unwrap().len(), 7);
        let all = ctx.alpha(&ctx.all_objects()).unwrap();
        assert_eq!(names(ctx.attribute_names(&all)), ["OS:Windows"]);
    }

    #[test]
    fn beta_examples() {
        let ctx = k_dm();
        let attrs = ctx.attributes_named(&["OS:Linux", "DM:Conceptual"]).unwrap();
        let b = ctx.beta(&attrs).unwrap();
        assert_eq!(names(ctx.object_names(&b)), ["Astah", "Magic-Draw"]);
        assert_eq!(ctx.beta(&ctx.attribute_set([]).unwrap()).unwrap().len(), 5);
        let etl = ctx.attributes_named(&["DM:ETL"]).unwrap();
        assert_eq!(names(ctx.object_names(&ctx.beta(&etl).unwrap())), ["ER-Studio"]);
    }

    #[test]
    fn closure_examples() {
        let ctx = k_dm();
        let wm = ctx.attributes_named(&["OS:Windows", "OS:Mac"]).unwrap();
        let c = ctx.closure_attributes(&wm).unwrap();
        assert_eq!(names(ctx.attribute_names(&c)), ["OS:Linux", "OS:Mac", "OS:Windows"]);
        assert_eq!(ctx.closure_attributes(&c).unwrap(), c);
        let empty = ctx.closure_attributes(&ctx.attribute_set([]).unwrap()).unwrap();
        assert_eq!(names(ctx.attribute_names(&empty)), ["OS:Windows"]);

        let objs = ctx.objects_named(&["Erwin-DM", "ER-Studio"]).unwrap();
        let c = ctx.closure_objects(&objs).unwrap();
        assert_eq!(names(ctx.object_names(&c)), ["ER-Studio", "Erwin-DM", "Magic-Draw"]);
        assert_eq!(ctx.closure_objects(&ctx.all_objects()).unwrap(), ctx.all_objects());
        let astah = ctx.objects_named(&["Astah"]).unwrap();
        let c = ctx.closure_objects(&astah).unwrap();
        assert_eq!(names(ctx.object_names(&c)), ["Astah", "Magic-Draw"]);
    }

    #[test]
    fn foreign_sets_rejected() {
        let ctx = k_dm();
        let other = FormalContext::parse(",a\no,x\n", ContextFormat::Csv).unwrap();
        let foreign = other.all_attributes();
        assert!(matches!(ctx.beta(&foreign), Err(Error::InvalidSet(_))));
        assert!(matches!(ctx.alpha(&other.all_objects()), Err(Error::InvalidSet(_))));
        assert!(matches!(ctx.attribute_set([7]), Err(Error::InvalidSet(_))));
        assert!(matches!(
            ctx.attributes_named(&["OS:Beos"]),
            Err(Error::UnknownAttribute(_))
        ));
    }

    #[test]
    fn row_order_does_not_matter() {
        let shuffled = ",DM:ETL,OS:Mac,OS:Windows,DM:Physical,DM:Logical,OS:Linux,DM:Conceptual
MySQL-Workbench,,x,x,x,,x,
ER-Studio,x,,x,x,x,,x
Astah,,x,x,,,x,x
Magic-Draw,,x,x,x,x,x,x
Erwin-DM,,,x,x,x,,x
";
        let ctx = FormalContext::parse(shuffled, ContextFormat::Csv).unwrap();
        assert_eq!(ctx, k_dm());
    }
}
