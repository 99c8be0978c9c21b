use std::collections::BTreeSet;
use std::fmt;

use crate::format::FormatError;

use super::ReductionError;

/// A (3,2) set-cover instance: every set has three distinct elements and
/// every element lies in exactly two sets. Elements and sets are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    element_count: usize,
    sets: Vec<[usize; 3]>,
    tau: usize,
    /// The two sets holding each element, ascending.
    owners: Vec<(usize, usize)>,
}

impl SetCoverInstance {
    pub fn new(element_count: usize, sets: Vec<[usize; 3]>, tau: usize) -> Result<Self, ReductionError> {
        let bad = |m: String| Err(ReductionError::InvalidSetCover(m));
        let mut sorted = Vec::with_capacity(sets.len());
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); element_count];
        for (j, set) in sets.iter().enumerate() {
            let mut s = *set;
            s.sort_unstable();
            if s[0] == s[1] || s[1] == s[2] {
                return bad(format!("set {} repeats an element", j + 1));
            }
            for &x in &s {
                if x == 0 || x > element_count {
                    return bad(format!("set {} mentions element {x} outside 1..={element_count}", j + 1));
                }
                holders[x - 1].push(j + 1);
            }
            sorted.push(s);
        }
        let mut owners = Vec::with_capacity(element_count);
        for (x, h) in holders.iter().enumerate() {
            match h.as_slice() {
                &[a, b] => owners.push((a, b)),
                _ => return bad(format!("element {} lies in {} sets, expected 2", x + 1, h.len())),
            }
        }
        if tau == 0 || tau > sets.len() {
            return bad(format!("tau {tau} outside 1..={}", sets.len()));
        }
        Ok(Self {
            element_count,
            sets: sorted,
            tau,
            owners,
        })
    }

    pub fn element_count(&self) -> usize {
        self.element_count
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Same sets, different budget.
    pub fn with_tau(&self, tau: usize) -> Result<Self, ReductionError> {
        Self::new(self.element_count, self.sets.clone(), tau)
    }

    /// Elements of set `j`, ascending.
    pub fn set(&self, j: usize) -> [usize; 3] {
        self.sets[j - 1]
    }

    pub fn sets(&self) -> &[[usize; 3]] {
        &self.sets
    }

    /// The two sets containing element `x`, ascending.
    pub fn owners(&self, x: usize) -> (usize, usize) {
        self.owners[x - 1]
    }

    pub fn first_uncovered(&self, c: &Cover) -> Option<usize> {
        (1..=self.element_count).find(|&x| {
            let (a, b) = self.owners(x);
            !c.contains(a) && !c.contains(b)
        })
    }

    /// Errors unless `c` covers every element within the budget.
    pub fn check_cover(&self, c: &Cover) -> Result<(), ReductionError> {
        if let Some(&j) = c.sets().iter().find(|&&j| j == 0 || j > self.set_count()) {
            return Err(ReductionError::Precondition(format!("cover names unknown set {j}")));
        }
        if let Some(element) = self.first_uncovered(c) {
            return Err(ReductionError::NotACover { element });
        }
        if c.len() > self.tau {
            return Err(ReductionError::CoverTooLarge {
                size: c.len(),
                tau: self.tau,
            });
        }
        Ok(())
    }
}

/// A set of 1-based set indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Cover(BTreeSet<usize>);

impl Cover {
    pub fn new(sets: impl IntoIterator<Item = usize>) -> Self {
        Self(sets.into_iter().collect())
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.contains(&j)
    }

    pub fn insert(&mut self, j: usize) {
        self.0.insert(j);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sets(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `p setcover <n> <m> <tau>` then `s <j> <e1> <e2> <e3>` for every set.
pub fn parse_setcover(text: &str) -> Result<SetCoverInstance, FormatError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut sets: Vec<Option<[usize; 3]>> = Vec::new();
    let mut last_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let nums = |xs: &[&str]| -> Result<Vec<usize>, FormatError> {
            xs.iter()
                .map(|t| t.parse().map_err(|_| FormatError::new(line_no, format!("bad number `{t}`"))))
                .collect()
        };
        match fields.as_slice() {
            ["p", "setcover", rest @ ..] if rest.len() == 3 => {
                if header.is_some() {
                    return Err(FormatError::new(line_no, "duplicate header"));
                }
                let v = nums(rest)?;
                header = Some((v[0], v[1], v[2]));
                sets = vec![None; v[1]];
            }
            ["s", rest @ ..] if rest.len() == 4 => {
                if header.is_none() {
                    return Err(FormatError::new(line_no, "set before `p setcover` header"));
                }
                let v = nums(rest)?;
                let j = v[0];
                if j == 0 || j > sets.len() {
                    return Err(FormatError::new(line_no, format!("set index {j} outside 1..={}", sets.len())));
                }
                if sets[j - 1].replace([v[1], v[2], v[3]]).is_some() {
                    return Err(FormatError::new(line_no, format!("set {j} defined twice")));
                }
            }
            _ => {
                return Err(FormatError::new(
                    line_no,
                    "expected `p setcover <n> <m> <tau>` or `s <j> <e1> <e2> <e3>`",
                ))
            }
        }
    }
    let (n, _, tau) = header.ok_or_else(|| FormatError::new(last_line, "missing `p setcover` header"))?;
    let sets: Vec<[usize; 3]> = sets
        .into_iter()
        .enumerate()
        .map(|(j, s)| s.ok_or_else(|| FormatError::new(last_line, format!("set {} missing", j + 1))))
        .collect::<Result<_, _>>()?;
    SetCoverInstance::new(n, sets, tau).map_err(|e| FormatError::new(last_line, e.to_string()))
}

pub fn write_setcover(sc: &SetCoverInstance) -> String {
    let mut out = format!("p setcover {} {} {}\n", sc.element_count(), sc.set_count(), sc.tau());
    for (j, s) in sc.sets().iter().enumerate() {
        out.push_str(&format!("s {} {} {} {}\n", j + 1, s[0], s[1], s[2]));
    }
    out
}
