//! JSON file format for relations, systems in both formulations and
//! trajectories.
//!
//! Every document carries `format_version` (always 1), `field`
//! (`"real"` or `"complex"`) and `kind`. Matrices are stored as
//! `{rows, cols, data}` with `data` row-major; real files hold plain
//! numbers, complex files hold `[re, im]` pairs. Floats are written in
//! shortest round-trip form, so `parse(print(doc)) == doc` bit for bit.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phcore::{Channel, DescriptorPH, GeometricPH, Trajectory};
use crate::relations::{Field, LinearRelation, Mat, Vector, C64};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldTag {
    Real,
    Complex,
}

impl From<Field> for FieldTag {
    fn from(f: Field) -> Self {
        match f {
            Field::Real => FieldTag::Real,
            Field::Complex => FieldTag::Complex,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixData {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Entry>,
}

impl MatrixData {
    pub fn from_mat(m: &Mat, field: FieldTag) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push(match field {
                    FieldTag::Real => Entry::Real(z.re),
                    FieldTag::Complex => Entry::Complex([z.re, z.im]),
                });
            }
        }
        MatrixData {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    fn check(&self, field: FieldTag, what: &str) -> Result<()> {
        if self.rows.checked_mul(self.cols) != Some(self.data.len()) {
            return Err(Error::Format(format!(
                "{what}: declared {}x{} but has {} entries",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        for e in &self.data {
            let (ok, finite) = match (field, e) {
                (FieldTag::Real, Entry::Real(x)) => (true, x.is_finite()),
                (FieldTag::Complex, Entry::Complex([a, b])) => (true, a.is_finite() && b.is_finite()),
                _ => (false, true),
            };
            if !ok {
                let msg = match field {
                    FieldTag::Real => "real file contains a [re, im] pair",
                    FieldTag::Complex => "complex file entries must be [re, im] pairs",
                };
                return Err(Error::Format(format!("{what}: {msg}")));
            }
            if !finite {
                return Err(Error::Format(format!("{what}: non-finite entry")));
            }
        }
        Ok(())
    }

    pub fn to_mat(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| match self.data[i * self.cols + j] {
            Entry::Real(x) => C64::new(x, 0.0),
            Entry::Complex([a, b]) => C64::new(a, b),
        })
    }

    fn expect_shape(&self, rows: usize, cols: usize, what: &str) -> Result<()> {
        if (self.rows, self.cols) != (rows, cols) {
            return Err(Error::Format(format!(
                "{what} is {}x{}, expected {rows}x{cols}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    /// the relation is the column span of the matrix
    Image,
    /// the relation is the null space of the matrix
    Kernel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationBlock {
    pub representation: Representation,
    pub matrix: MatrixData,
}

impl RelationBlock {
    pub fn from_relation(a: &LinearRelation, field: FieldTag) -> Self {
        RelationBlock {
            representation: Representation::Image,
            matrix: MatrixData::from_mat(a.image_basis(), field),
        }
    }

    fn to_relation(&self, n_left: usize, n_right: usize, field: FieldTag, what: &str) -> Result<LinearRelation> {
        self.matrix.check(field, what)?;
        let total = n_left + n_right;
        let m = self.matrix.to_mat();
        match self.representation {
            Representation::Image => {
                if self.matrix.rows != total {
                    return Err(Error::Format(format!(
                        "{what}: image matrix has {} rows, expected {total}",
                        self.matrix.rows
                    )));
                }
                LinearRelation::from_image(&m, n_left, n_right)
            }
            Representation::Kernel => {
                if self.matrix.cols != total {
                    return Err(Error::Format(format!(
                        "{what}: kernel matrix has {} columns, expected {total}",
                        self.matrix.cols
                    )));
                }
                LinearRelation::from_kernel(&m, n_left, n_right)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDims {
    pub n_left: usize,
    pub n_right: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricDims {
    pub n: usize,
    pub r: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescriptorMatrices {
    pub e: MatrixData,
    pub j: MatrixData,
    pub r: MatrixData,
    pub q: MatrixData,
    pub b: MatrixData,
    pub p: MatrixData,
    pub s: MatrixData,
    pub n: MatrixData,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Body {
    Relation {
        dims: RelationDims,
        relation: RelationBlock,
    },
    Geometric {
        dims: GeometricDims,
        d: RelationBlock,
        l: RelationBlock,
        r: RelationBlock,
    },
    Descriptor(DescriptorMatrices),
    /// each channel is a matrix with one row per grid point
    Trajectory {
        grid: Vec<f64>,
        channels: BTreeMap<String, MatrixData>,
    },
}

/// A parsed document. Conversions to library types validate shapes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub format_version: u32,
    pub field: FieldTag,
    #[serde(flatten)]
    pub body: Body,
    /// free-form annotations, e.g. conversion dimensions
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl SystemFile {
    fn new(field: FieldTag, body: Body) -> Self {
        SystemFile {
            format_version: FORMAT_VERSION,
            field,
            body,
            metadata: None,
        }
    }

    pub fn with_metadata(mut self, metadata: serde_json::Value) -> Self {
        self.metadata = Some(metadata);
        self
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::Relation { .. } => "relation",
            Body::Geometric { .. } => "geometric",
            Body::Descriptor(_) => "descriptor",
            Body::Trajectory { .. } => "trajectory",
        }
    }

    /// Parses and checks the header, shapes and field consistency.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: SystemFile =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("invalid document: {e}")))?;
        doc.check()?;
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| Error::Format(format!("cannot write {}: {e}", path.display())))
    }

    fn check(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format_version {}, expected {FORMAT_VERSION}",
                self.format_version
            )));
        }
        let f = self.field;
        match &self.body {
            Body::Relation { relation, .. } => relation.matrix.check(f, "relation"),
            Body::Geometric { d, l, r, .. } => {
                d.matrix.check(f, "D")?;
                l.matrix.check(f, "L")?;
                r.matrix.check(f, "R")
            }
            Body::Descriptor(m) => {
                for (name, data) in m.named() {
                    data.check(f, name)?;
                }
                Ok(())
            }
            Body::Trajectory { grid, channels } => {
                if grid.iter().any(|t| !t.is_finite()) {
                    return Err(Error::Format("grid has non-finite times".into()));
                }
                for (name, data) in channels {
                    data.check(f, name)?;
                    if data.rows != grid.len() {
                        return Err(Error::Format(format!(
                            "channel `{name}` has {} samples, grid has {}",
                            data.rows,
                            grid.len()
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn from_relation(a: &LinearRelation) -> Self {
        let field = a.field().into();
        Self::new(
            field,
            Body::Relation {
                dims: RelationDims {
                    n_left: a.n_left(),
                    n_right: a.n_right(),
                },
                relation: RelationBlock::from_relation(a, field),
            },
        )
    }

    pub fn to_relation(&self) -> Result<LinearRelation> {
        match &self.body {
            Body::Relation { dims, relation } => {
                relation.to_relation(dims.n_left, dims.n_right, self.field, "relation")
            }
            _ => Err(self.wrong_kind("relation")),
        }
    }

    pub fn from_geometric(sys: &GeometricPH) -> Self {
        let field = sys.field().into();
        Self::new(
            field,
            Body::Geometric {
                dims: GeometricDims {
                    n: sys.n(),
                    r: sys.r_dim(),
                    m: sys.m(),
                },
                d: RelationBlock::from_relation(sys.d(), field),
                l: RelationBlock::from_relation(sys.l(), field),
                r: RelationBlock::from_relation(sys.r(), field),
            },
        )
    }

    pub fn to_geometric(&self) -> Result<GeometricPH> {
        match &self.body {
            Body::Geometric { dims, d, l, r } => {
                let p = dims.n + dims.r + dims.m;
                let d = d.to_relation(p, p, self.field, "D")?;
                let l = l.to_relation(dims.n, dims.n, self.field, "L")?;
                let r = r.to_relation(dims.r, dims.r, self.field, "R")?;
                GeometricPH::new(d, l, r)
            }
            _ => Err(self.wrong_kind("geometric")),
        }
    }

    pub fn from_descriptor(sys: &DescriptorPH) -> Self {
        let field = sys.field().into();
        let m = |x: &Mat| MatrixData::from_mat(x, field);
        Self::new(
            field,
            Body::Descriptor(DescriptorMatrices {
                e: m(sys.e()),
                j: m(sys.j()),
                r: m(sys.r()),
                q: m(sys.q()),
                b: m(sys.b()),
                p: m(sys.p()),
                s: m(sys.s()),
                n: m(sys.n()),
            }),
        )
    }

    pub fn to_descriptor(&self) -> Result<DescriptorPH> {
        match &self.body {
            Body::Descriptor(d) => {
                let n = d.e.rows;
                let m = d.b.cols;
                for (name, data) in [("E", &d.e), ("J", &d.j), ("R", &d.r), ("Q", &d.q)] {
                    data.expect_shape(n, n, name)?;
                }
                d.b.expect_shape(n, m, "B")?;
                d.p.expect_shape(n, m, "P")?;
                d.s.expect_shape(m, m, "S")?;
                d.n.expect_shape(m, m, "N")?;
                DescriptorPH::new(
                    d.e.to_mat(),
                    d.j.to_mat(),
                    d.r.to_mat(),
                    d.q.to_mat(),
                    d.b.to_mat(),
                    d.p.to_mat(),
                    d.s.to_mat(),
                    d.n.to_mat(),
                )
            }
            _ => Err(self.wrong_kind("descriptor")),
        }
    }

    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let complex = traj
            .channels()
            .flat_map(|(_, s)| s.iter())
            .any(|v| v.iter().any(|z| z.im != 0.0));
        let field = if complex { FieldTag::Complex } else { FieldTag::Real };
        let channels = traj
            .channels()
            .map(|(c, samples)| {
                let dim = samples.first().map_or(0, |v| v.len());
                let m = Mat::from_fn(samples.len(), dim, |k, i| samples[k][i]);
                (c.name().to_string(), MatrixData::from_mat(&m, field))
            })
            .collect();
        Self::new(
            field,
            Body::Trajectory {
                grid: traj.grid().to_vec(),
                channels,
            },
        )
    }

    pub fn to_trajectory(&self) -> Result<Trajectory> {
        match &self.body {
            Body::Trajectory { grid, channels } => {
                let mut traj = Trajectory::new(grid.clone())?;
                for (name, data) in channels {
                    let channel = Channel::from_name(name)
                        .ok_or_else(|| Error::Format(format!("unknown channel `{name}`")))?;
                    let m = data.to_mat();
                    let samples: Vec<Vector> = (0..m.nrows()).map(|k| m.row(k).transpose()).collect();
                    traj.set(channel, samples)?;
                }
                Ok(traj)
            }
            _ => Err(self.wrong_kind("trajectory")),
        }
    }

    fn wrong_kind(&self, expected: &str) -> Error {
        Error::Format(format!("expected a {expected} file, got kind `{}`", self.kind()))
    }
}

impl DescriptorMatrices {
    fn named(&self) -> [(&'static str, &MatrixData); 8] {
        [
            ("E", &self.e),
            ("J", &self.j),
            ("R", &self.r),
            ("Q", &self.q),
            ("B", &self.b),
            ("P", &self.p),
            ("S", &self.s),
            ("N", &self.n),
        ]
    }
}
