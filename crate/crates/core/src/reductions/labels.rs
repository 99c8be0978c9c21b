//! Structured names for the vertices and edges of generated instances.

use std::fmt;
use std::str::FromStr;

/// One literal slot of a clause: clause index and slot within it, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub clause: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainAnchor {
    /// Prefix chain ending at `v_{i,1}`.
    First(usize),
    /// Prefix chain ending at `v_{i,2}`.
    Second(usize),
    /// Prefix chain ending at the first member vertex of set `j`.
    Set(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    /// `s_i`
    Source(usize),
    /// `t_i`
    Terminal(usize),
    /// `v_{i,α}`
    Hub(usize, Occurrence),
    /// `u_{i,α}`
    Join(usize, Occurrence),
    /// `y_{i,α}`
    Pos(usize, Occurrence),
    /// `ȳ_{i,α}`
    Neg(usize, Occurrence),
    /// Subdivision vertex `t_{i,α,r}`, r ∈ {1, 2}.
    Sub(usize, Occurrence, usize),
    /// `z_{j,r}`, r ∈ {0, 1, 2}.
    Clause(usize, usize),
    /// `v_{i,r}` of element `i`, r ∈ 1..=4.
    Element(usize, usize),
    /// `u_{j,x}`: member vertex of element `x` in set `j`.
    Member(usize, usize),
    /// `u_j`
    SetSink(usize),
    /// Step `r` (1-based, from the chain's start) of an appended prefix chain.
    Chain(ChainAnchor, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeRole {
    Subdivision,
    VToY,
    VToYbar,
    TypeUPos,
    TypeUNeg,
    TypeT,
    ClauseSpine,
    ClauseConnector,
    ElementEdge,
    SetChain,
    Membership,
    Prefix,
}

const ROLE_NAMES: [(EdgeRole, &str); 12] = [
    (EdgeRole::Subdivision, "subdivision"),
    (EdgeRole::VToY, "v-to-y"),
    (EdgeRole::VToYbar, "v-to-ybar"),
    (EdgeRole::TypeUPos, "type-U-pos"),
    (EdgeRole::TypeUNeg, "type-U-neg"),
    (EdgeRole::TypeT, "type-T"),
    (EdgeRole::ClauseSpine, "clause-spine"),
    (EdgeRole::ClauseConnector, "clause-connector"),
    (EdgeRole::ElementEdge, "element"),
    (EdgeRole::SetChain, "set-chain"),
    (EdgeRole::Membership, "membership"),
    (EdgeRole::Prefix, "prefix"),
];

impl fmt::Display for EdgeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = ROLE_NAMES.iter().find(|(r, _)| r == self).unwrap().1;
        f.write_str(name)
    }
}

impl FromStr for EdgeRole {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ROLE_NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(r, _)| *r)
            .ok_or_else(|| format!("unknown edge role `{s}`"))
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.clause, self.slot)
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use VertexLabel::*;
        match self {
            Source(i) => write!(f, "s({i})"),
            Terminal(i) => write!(f, "t({i})"),
            Hub(i, a) => write!(f, "v({i},{a})"),
            Join(i, a) => write!(f, "u({i},{a})"),
            Pos(i, a) => write!(f, "y({i},{a})"),
            Neg(i, a) => write!(f, "ybar({i},{a})"),
            Sub(i, a, r) => write!(f, "sub({i},{a},{r})"),
            Clause(j, r) => write!(f, "z({j},{r})"),
            Element(i, r) => write!(f, "elem({i},{r})"),
            Member(j, x) => write!(f, "member({j},{x})"),
            SetSink(j) => write!(f, "sink({j})"),
            Chain(ChainAnchor::First(i), r) => write!(f, "chain(v1:{i},{r})"),
            Chain(ChainAnchor::Second(i), r) => write!(f, "chain(v2:{i},{r})"),
            Chain(ChainAnchor::Set(j), r) => write!(f, "chain(set:{j},{r})"),
        }
    }
}

impl FromStr for VertexLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("malformed vertex label `{s}`");
        let (tag, rest) = s.split_once('(').ok_or_else(bad)?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        let args: Vec<&str> = body.split(',').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let occ = |t: &str| -> Result<Occurrence, String> {
            let (c, p) = t.split_once('.').ok_or_else(bad)?;
            Ok(Occurrence {
                clause: num(c)?,
                slot: num(p)?,
            })
        };
        use VertexLabel::*;
        let label = match (tag, args.as_slice()) {
            ("s", [i]) => Source(num(i)?),
            ("t", [i]) => Terminal(num(i)?),
            ("v", [i, a]) => Hub(num(i)?, occ(a)?),
            ("u", [i, a]) => Join(num(i)?, occ(a)?),
            ("y", [i, a]) => Pos(num(i)?, occ(a)?),
            ("ybar", [i, a]) => Neg(num(i)?, occ(a)?),
            ("sub", [i, a, r]) => Sub(num(i)?, occ(a)?, num(r)?),
            ("z", [j, r]) => Clause(num(j)?, num(r)?),
            ("elem", [i, r]) => Element(num(i)?, num(r)?),
            ("member", [j, x]) => Member(num(j)?, num(x)?),
            ("sink", [j]) => SetSink(num(j)?),
            ("chain", [anchor, r]) => {
                let (kind, idx) = anchor.split_once(':').ok_or_else(bad)?;
                let idx = num(idx)?;
                let anchor = match kind {
                    "v1" => ChainAnchor::First(idx),
                    "v2" => ChainAnchor::Second(idx),
                    "set" => ChainAnchor::Set(idx),
                    _ => return Err(bad()),
                };
                Chain(anchor, num(r)?)
            }
            _ => return Err(bad()),
        };
        Ok(label)
    }
}
