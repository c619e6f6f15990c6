//! JSON interchange: algebra input files, Gröbner bases, chain tables and
//! degree tables.
//!
//! Paths are lists of arrow names. Coefficients are strings: integers,
//! `num/den`, or finite decimals.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::betti::{BettiRow, BettiTable, Method};
use crate::chains::{Chain, ChainTable};
use crate::field::{Field, FieldError};
use crate::freealg::{AdmissibleOrder, AlgebraElement, FreeAlgError, OrderKind};
use crate::groebner::{GroebnerBasis, GroebnerError, TipSet};
use crate::quiver::{Path, Quiver, QuiverError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] FreeAlgError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("relation {0} is not homogeneous")]
    Inhomogeneous(usize),
    #[error("relation {0} has a term of length < 2")]
    ShortRelation(usize),
    #[error("inconsistent table: {0}")]
    Table(String),
}

impl FormatError {
    /// Well-formed input that violates a mathematical precondition.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            FormatError::Inhomogeneous(_)
                | FormatError::ShortRelation(_)
                | FormatError::Groebner(GroebnerError::Inhomogeneous(_) | GroebnerError::DegreeTooLow(..))
        )
    }
}

fn json_err(e: serde_json::Error) -> FormatError {
    FormatError::Json(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDto {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderDto {
    pub kind: String,
    /// Arrow names, highest priority first; declaration order if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priority: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDto {
    pub coeff: String,
    pub path: Vec<String>,
}

/// A relation: explicit terms, or a bare path standing for a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RelationDto {
    Path(Vec<String>),
    Terms(Vec<TermDto>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraInput {
    #[serde(default = "default_field")]
    pub field: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderDto>,
    #[serde(default)]
    pub relations: Vec<RelationDto>,
}

fn default_field() -> String {
    "rational".to_string()
}

/// A parsed path algebra with relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    pub quiver: Quiver,
    pub field: Field,
    pub order: AdmissibleOrder,
    pub relations: Vec<AlgebraElement>,
}

impl Algebra {
    /// Each relation homogeneous, every term of length at least two.
    pub fn check_relations(&self) -> Result<(), FormatError> {
        for (i, r) in self.relations.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let d = r.degree().ok_or(FormatError::Inhomogeneous(i))?;
            if d < 2 {
                return Err(FormatError::ShortRelation(i));
            }
        }
        Ok(())
    }

    pub fn to_input(&self) -> AlgebraInput {
        let q = &self.quiver;
        AlgebraInput {
            field: self.field.to_string(),
            vertices: q.vertex_ids().map(|v| q.vertex_name(v).to_string()).collect(),
            arrows: q
                .arrow_ids()
                .map(|a| {
                    let ar = q.arrow(a);
                    ArrowDto {
                        name: ar.name.clone(),
                        source: q.vertex_name(ar.source).to_string(),
                        target: q.vertex_name(ar.target).to_string(),
                    }
                })
                .collect(),
            order: Some(order_dto(q, &self.order)),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    if r.num_terms() == 1 && r.terms().all(|(_, c)| c.is_one()) {
                        RelationDto::Path(r.support().flat_map(|p| q.arrow_names(p)).collect())
                    } else {
                        RelationDto::Terms(terms_dto(q, &self.order, r))
                    }
                })
                .collect(),
        }
    }
}

pub fn order_dto(q: &Quiver, order: &AdmissibleOrder) -> OrderDto {
    OrderDto {
        kind: order.kind().name().to_string(),
        priority: Some(order.priority().iter().map(|&a| q.arrow(a).name.clone()).collect()),
    }
}

pub fn order_from_dto(q: &Quiver, dto: &OrderDto) -> Result<AdmissibleOrder, FormatError> {
    let kind = OrderKind::parse(&dto.kind)?;
    match &dto.priority {
        None => Ok(AdmissibleOrder::declaration(q, kind)),
        Some(names) => {
            let ids = names.iter().map(|n| q.arrow_id(n)).collect::<Result<Vec<_>, _>>()?;
            Ok(AdmissibleOrder::new(kind, ids, q.num_arrows())?)
        }
    }
}

fn terms_dto(q: &Quiver, order: &AdmissibleOrder, x: &AlgebraElement) -> Vec<TermDto> {
    order
        .sorted_terms(x)
        .into_iter()
        .map(|(p, c)| TermDto {
            coeff: c.to_string(),
            path: q.arrow_names(p),
        })
        .collect()
}

fn element_from_terms(q: &Quiver, field: Field, terms: &[TermDto]) -> Result<AlgebraElement, FormatError> {
    let mut x = AlgebraElement::zero();
    for t in terms {
        let p = q.path(&t.path)?;
        x.add_term(p, &field.parse(&t.coeff)?);
    }
    Ok(x)
}

/// Parses an input file. `field` and `order` override the file's choices.
pub fn parse_algebra(text: &str, field: Option<Field>, order: Option<OrderKind>) -> Result<Algebra, FormatError> {
    let input: AlgebraInput = serde_json::from_str(text).map_err(json_err)?;
    algebra_from_input(&input, field, order)
}

pub fn algebra_from_input(
    input: &AlgebraInput,
    field: Option<Field>,
    order: Option<OrderKind>,
) -> Result<Algebra, FormatError> {
    let quiver = Quiver::new(
        input.vertices.iter().cloned(),
        input
            .arrows
            .iter()
            .map(|a| (a.name.clone(), a.source.clone(), a.target.clone())),
    )?;
    let field = match field {
        Some(f) => f,
        None => input.field.parse()?,
    };
    let mut dto = input.order.clone().unwrap_or(OrderDto {
        kind: OrderKind::DegLex.name().to_string(),
        priority: None,
    });
    if let Some(k) = order {
        dto.kind = k.name().to_string();
    }
    let order = order_from_dto(&quiver, &dto)?;
    let relations = input
        .relations
        .iter()
        .map(|r| match r {
            RelationDto::Path(names) => Ok(AlgebraElement::from_path(quiver.path(names)?, field)),
            RelationDto::Terms(t) => element_from_terms(&quiver, field, t),
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok(Algebra {
        quiver,
        field,
        order,
        relations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerDto {
    pub field: String,
    pub order: OrderDto,
    pub valid_to_degree: usize,
    pub complete: bool,
    /// Monic elements, terms listed largest first.
    pub elements: Vec<Vec<TermDto>>,
}

pub fn groebner_to_dto(q: &Quiver, field: Field, gb: &GroebnerBasis) -> GroebnerDto {
    GroebnerDto {
        field: field.to_string(),
        order: order_dto(q, gb.order()),
        valid_to_degree: gb.valid_to_degree(),
        complete: gb.is_complete(),
        elements: gb.elements().iter().map(|g| terms_dto(q, gb.order(), g)).collect(),
    }
}

pub fn groebner_from_dto(q: &Quiver, dto: &GroebnerDto) -> Result<(Field, GroebnerBasis), FormatError> {
    let field: Field = dto.field.parse()?;
    let order = order_from_dto(q, &dto.order)?;
    let elements = dto
        .elements
        .iter()
        .map(|t| element_from_terms(q, field, t))
        .collect::<Result<Vec<_>, _>>()?;
    let gb = GroebnerBasis::from_parts(q, elements, order, dto.valid_to_degree, dto.complete)?;
    Ok((field, gb))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDto {
    pub source: String,
    pub word: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDto {
    pub n: usize,
    pub truncated: bool,
    pub chains: Vec<ChainDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainTableDto {
    pub rho: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_cap: Option<usize>,
    #[serde(default)]
    pub duplicates: usize,
    pub levels: Vec<LevelDto>,
}

pub fn chains_to_dto(q: &Quiver, t: &ChainTable) -> ChainTableDto {
    ChainTableDto {
        rho: t.rho().paths().iter().map(|p| q.arrow_names(p)).collect(),
        word_cap: t.word_cap(),
        duplicates: t.duplicate_count(),
        levels: t
            .levels()
            .iter()
            .enumerate()
            .map(|(n, level)| LevelDto {
                n,
                truncated: t.is_truncated(n),
                chains: level
                    .iter()
                    .map(|c| ChainDto {
                        source: q.vertex_name(c.word.source()).to_string(),
                        word: q.arrow_names(&c.word),
                        parent: c.parent,
                    })
                    .collect(),
            })
            .collect(),
    }
}

fn path_or_vertex(q: &Quiver, source: &str, names: &[String]) -> Result<Path, FormatError> {
    if names.is_empty() {
        Ok(q.vertex_path(q.vertex_id(source)?))
    } else {
        let p = q.path(names)?;
        if q.vertex_name(p.source()) != source {
            return Err(FormatError::Table(format!("path {} does not start at {source}", names.join(" "))));
        }
        Ok(p)
    }
}

pub fn chains_from_dto(q: &Quiver, dto: &ChainTableDto) -> Result<ChainTable, FormatError> {
    let rho_paths = dto.rho.iter().map(|p| q.path(p)).collect::<Result<Vec<_>, _>>()?;
    let rho = TipSet::new(q, rho_paths)?;
    let mut levels: Vec<Vec<Chain>> = Vec::new();
    for (n, l) in dto.levels.iter().enumerate() {
        if l.n != n {
            return Err(FormatError::Table(format!("level {} listed at position {n}", l.n)));
        }
        let mut level = Vec::new();
        for c in &l.chains {
            let word = path_or_vertex(q, &c.source, &c.word)?;
            let prefix = match (n, c.parent) {
                (0, _) => word.clone(),
                (_, Some(p)) => {
                    let parent = levels[n - 1]
                        .get(p)
                        .ok_or_else(|| FormatError::Table(format!("dangling parent {p} at level {n}")))?;
                    if parent.word.len() >= word.len() {
                        return Err(FormatError::Table(format!("parent not shorter at level {n}")));
                    }
                    q.subpath(&word, 0, word.len() - parent.word.len())
                }
                (_, None) => return Err(FormatError::Table(format!("missing parent at level {n}"))),
            };
            let relation = if n >= 2 { rho.prefix_of(word.arrows()) } else { None };
            level.push(Chain {
                word,
                level: n,
                parent: c.parent,
                prefix,
                relation,
            });
        }
        levels.push(level);
    }
    let truncated = dto.levels.iter().map(|l| l.truncated).collect();
    let t = ChainTable::from_levels(rho, levels, dto.word_cap, truncated)
        .ok_or_else(|| FormatError::Table("parent links do not match words".into()))?;
    Ok(t.with_duplicate_count(dto.duplicates))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDto {
    pub vertex: String,
    pub degree: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDto {
    pub n: usize,
    pub entries: Vec<EntryDto>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiDto {
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    pub rows: Vec<RowDto>,
}

pub fn betti_to_dto(q: &Quiver, t: &BettiTable) -> BettiDto {
    BettiDto {
        method: t.method.name().to_string(),
        max_degree: t.max_degree,
        rows: t
            .rows
            .iter()
            .enumerate()
            .map(|(n, r)| RowDto {
                n,
                entries: r
                    .entries
                    .iter()
                    .map(|(&(v, degree), &multiplicity)| EntryDto {
                        vertex: q.vertex_name(v).to_string(),
                        degree,
                        multiplicity,
                    })
                    .collect(),
                truncated: r.truncated,
            })
            .collect(),
    }
}

pub fn betti_from_dto(q: &Quiver, dto: &BettiDto) -> Result<BettiTable, FormatError> {
    let method = match dto.method.as_str() {
        "chains" => Method::Chains,
        "oracle" => Method::Oracle,
        other => return Err(FormatError::Table(format!("unknown method `{other}`"))),
    };
    let mut t = BettiTable::new(method, dto.max_degree, 0);
    for (n, r) in dto.rows.iter().enumerate() {
        if r.n != n {
            return Err(FormatError::Table(format!("row {} listed at position {n}", r.n)));
        }
        let mut row = BettiRow {
            truncated: r.truncated,
            ..BettiRow::default()
        };
        for e in &r.entries {
            if e.multiplicity == 0 || row.entries.contains_key(&(q.vertex_id(&e.vertex)?, e.degree)) {
                return Err(FormatError::Table(format!("bad entry in row {n}")));
            }
            row.add(q.vertex_id(&e.vertex)?, e.degree, e.multiplicity);
        }
        t.rows.push(row);
    }
    Ok(t)
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("DTOs serialize")
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(json_err)
}
