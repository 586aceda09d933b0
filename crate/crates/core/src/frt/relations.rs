use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AlgebraElement, Gen, Word};
use crate::error::Error;
use crate::params::{ParameterSet, Sign};
use crate::rmat::RMatrixPair;
use crate::tensor::SpinorMetric;

/// Which sign of the dotted/undotted exchange relations is imposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossRelations {
    Plus,
    Minus,
    Both,
}

impl CrossRelations {
    pub fn signs(self) -> &'static [Sign] {
        match self {
            CrossRelations::Plus => &[Sign::Plus],
            CrossRelations::Minus => &[Sign::Minus],
            CrossRelations::Both => &Sign::BOTH,
        }
    }

    pub fn matched(s: Sign) -> Self {
        match s {
            Sign::Plus => CrossRelations::Plus,
            Sign::Minus => CrossRelations::Minus,
        }
    }
}

impl fmt::Display for CrossRelations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrossRelations::Plus => "plus",
            CrossRelations::Minus => "minus",
            CrossRelations::Both => "both",
        })
    }
}

impl FromStr for CrossRelations {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "plus" | "+" => Ok(CrossRelations::Plus),
            "minus" | "-" => Ok(CrossRelations::Minus),
            "both" => Ok(CrossRelations::Both),
            other => Err(Error::Config(format!("unknown cross relation choice {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    Exchange { dotted: bool, sign: Sign },
    Unimodular { dotted: bool },
    Cross(Sign),
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub kind: RelationKind,
    /// The element that must vanish.
    pub element: AlgebraElement,
}

#[derive(Clone, Debug)]
pub struct RelationSet {
    pub cross: CrossRelations,
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn iter(&self) -> impl Iterator<Item = &Relation> {
        self.relations.iter()
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Relations whose words use only dotted (or only undotted) letters.
    pub fn sector(&self, dotted: bool) -> impl Iterator<Item = &AlgebraElement> {
        self.relations.iter().filter_map(move |r| match r.kind {
            RelationKind::Exchange { dotted: d, .. } | RelationKind::Unimodular { dotted: d } if d == dotted => {
                Some(&r.element)
            }
            _ => None,
        })
    }

    pub fn cross_relations(&self) -> impl Iterator<Item = &AlgebraElement> {
        self.relations.iter().filter(|r| matches!(r.kind, RelationKind::Cross(_))).map(|r| &r.element)
    }
}

fn pair(a: Gen, b: Gen) -> Word {
    Word::new(vec![a, b])
}

/// Exchange, unimodularity and cross relations, with coefficients pruned at
/// the drop threshold.
pub fn build_relations(p: &ParameterSet, m: &SpinorMetric, rm: &RMatrixPair, cross: CrossRelations) -> RelationSet {
    let prec = p.prec;
    let drop = p.drop_threshold();
    let u = Gen::undotted;
    let mut undotted = Vec::new();
    for s in Sign::BOTH {
        let r = rm.r(s);
        for al in 0..2 {
            for be in 0..2 {
                for ga in 0..2 {
                    for de in 0..2 {
                        let mut x = AlgebraElement::zero(prec);
                        for si in 0..2 {
                            for rh in 0..2 {
                                x.add_term(pair(u(ga, si), u(de, rh)), r.get(&[al, be, si, rh]));
                                x.add_term(pair(u(si, al), u(rh, be)), &-r.get(&[si, rh, ga, de]));
                            }
                        }
                        undotted.push(Relation {
                            kind: RelationKind::Exchange { dotted: false, sign: s },
                            element: x.prune(&drop),
                        });
                    }
                }
            }
        }
    }
    for ga in 0..2 {
        for de in 0..2 {
            let mut x = AlgebraElement::scalar(-m.eps_lower.get(&[ga, de]));
            for al in 0..2 {
                for be in 0..2 {
                    x.add_term(pair(u(ga, al), u(de, be)), m.eps_lower.get(&[al, be]));
                }
            }
            undotted.push(Relation { kind: RelationKind::Unimodular { dotted: false }, element: x.prune(&drop) });
        }
    }
    for al in 0..2 {
        for be in 0..2 {
            let mut x = AlgebraElement::scalar(-m.eps_upper.get(&[al, be]));
            for ga in 0..2 {
                for de in 0..2 {
                    x.add_term(pair(u(ga, al), u(de, be)), m.eps_upper.get(&[ga, de]));
                }
            }
            undotted.push(Relation { kind: RelationKind::Unimodular { dotted: false }, element: x.prune(&drop) });
        }
    }
    let mut relations: Vec<Relation> = undotted
        .iter()
        .map(|r| Relation {
            kind: match r.kind {
                RelationKind::Exchange { sign, .. } => RelationKind::Exchange { dotted: true, sign },
                _ => RelationKind::Unimodular { dotted: true },
            },
            element: r.element.star(),
        })
        .collect();
    relations.splice(0..0, undotted);
    for &s in cross.signs() {
        let rdu = rm.dotted_undotted(s);
        for al in 0..2 {
            for be in 0..2 {
                for si in 0..2 {
                    for rh in 0..2 {
                        let mut x = AlgebraElement::zero(prec);
                        for ga in 0..2 {
                            for de in 0..2 {
                                x.add_term(pair(u(al, ga), Gen::dotted_gen(si, de)), rdu.get(&[rh, be, ga, de]));
                                x.add_term(pair(Gen::dotted_gen(de, rh), u(ga, be)), &-rdu.get(&[de, ga, al, si]));
                            }
                        }
                        relations.push(Relation { kind: RelationKind::Cross(s), element: x.prune(&drop) });
                    }
                }
            }
        }
    }
    relations.retain(|r| !r.element.is_empty());
    RelationSet { cross, relations }
}
