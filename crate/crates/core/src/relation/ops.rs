//! The 27-operation query algebra.

use std::fmt;
use std::str::FromStr;

use super::{Pair, RelationDims};
use crate::error::{Error, Result};

/// Kind of a query argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    /// A label, accepted in `[0, sigma + 1]`.
    Label,
    /// An object, accepted in `[0, n + 1]`.
    Object,
    /// A 1-based ordinal.
    Ordinal,
}

use Param::{Label as L, Object as O, Ordinal as J};

macro_rules! ops {
    ($($variant:ident => $name:literal, [$($p:expr),*];)*) => {
        /// Operation identifiers. Argument order follows each operation's
        /// formal signature, e.g. `RelSelLabFst(alpha, j, x, y)`.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Op {
            $($variant,)*
        }

        impl Op {
            pub const ALL: [Op; 27] = [$(Op::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Op::$variant => $name,)*
                }
            }

            pub fn params(self) -> &'static [Param] {
                match self {
                    $(Op::$variant => &[$($p),*],)*
                }
            }
        }
    };
}

ops! {
    RelAcc => "rel_acc", [L, L, O, O];
    RelSelLabFst => "rel_sel_lab_fst", [L, J, O, O];
    RelMinLabFst => "rel_min_lab_fst", [L, O, O, O];
    RelSelObjFst => "rel_sel_obj_fst", [L, L, O, J];
    RelMinObjFst => "rel_min_obj_fst", [L, L, L, O];
    RelNum => "rel_num", [L, L, O, O];
    RelRnk => "rel_rnk", [L, O];
    RelRnkLabFst => "rel_rnk_lab_fst", [L, O, O, O];
    RelRnkObjFst => "rel_rnk_obj_fst", [L, L, L, O];
    LabAcc => "lab_acc", [L, L, O, O];
    LabAccOne => "lab_acc_one", [L, L, O];
    LabSel => "lab_sel", [L, J, O, O];
    LabSelOne => "lab_sel_one", [L, J, O];
    LabMin => "lab_min", [L, O, O];
    LabMinOne => "lab_min_one", [L, O];
    LabNum => "lab_num", [L, L, O, O];
    LabRnk => "lab_rnk", [L, O, O];
    LabRnkOne => "lab_rnk_one", [L, O];
    ObjAcc => "obj_acc", [L, L, O, O];
    ObjAccOne => "obj_acc_one", [L, O, O];
    ObjSel => "obj_sel", [L, L, O, J];
    ObjSelOne => "obj_sel_one", [L, O, J];
    ObjMin => "obj_min", [L, L, O];
    ObjMinOne => "obj_min_one", [L, O];
    ObjNum => "obj_num", [L, L, O, O];
    ObjRnk => "obj_rnk", [L, L, O];
    ObjRnkOne => "obj_rnk_one", [L, O];
}

impl Op {
    pub fn arity(self) -> usize {
        self.params().len()
    }

    #[inline]
    pub(crate) fn bit(self) -> u32 {
        1 << self as u32
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Op {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Op::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| Error::UnknownOp(s.to_string()))
    }
}

/// A set of operations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpSet(u32);

impl OpSet {
    pub const fn empty() -> Self {
        Self(0)
    }

    pub const fn all() -> Self {
        Self((1 << 27) - 1)
    }

    pub fn of(ops: &[Op]) -> Self {
        ops.iter().copied().collect()
    }

    pub fn contains(self, op: Op) -> bool {
        self.0 & op.bit() != 0
    }

    pub fn insert(&mut self, op: Op) {
        self.0 |= op.bit();
    }

    pub fn remove(&mut self, op: Op) {
        self.0 &= !op.bit();
    }

    pub fn with(mut self, op: Op) -> Self {
        self.insert(op);
        self
    }

    pub fn without(mut self, op: Op) -> Self {
        self.remove(op);
        self
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Op> {
        Op::ALL.into_iter().filter(move |&op| self.contains(op))
    }
}

impl FromIterator<Op> for OpSet {
    fn from_iter<I: IntoIterator<Item = Op>>(iter: I) -> Self {
        let mut s = Self::empty();
        for op in iter {
            s.insert(op);
        }
        s
    }
}

/// An operation with its arguments; unused trailing slots are zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub op: Op,
    pub args: [usize; 4],
}

impl Query {
    /// Builds a query, checking only the argument count.
    pub fn new(op: Op, args: &[usize]) -> Result<Self> {
        if args.len() != op.arity() {
            return Err(Error::Arity {
                op: op.name(),
                expected: op.arity(),
                got: args.len(),
            });
        }
        let mut a = [0; 4];
        a[..args.len()].copy_from_slice(args);
        Ok(Self { op, args: a })
    }

    #[inline]
    pub(crate) fn raw(op: Op, args: [usize; 4]) -> Self {
        Self { op, args }
    }

    /// Checks every argument against the universe bounds of `dims`.
    pub fn validate(&self, dims: &RelationDims) -> Result<()> {
        for (&p, &v) in self.op.params().iter().zip(&self.args) {
            match p {
                Param::Label if v > dims.sigma + 1 => {
                    return Err(Error::OutOfRange {
                        what: "label",
                        value: v,
                        lo: 0,
                        hi: dims.sigma + 1,
                    })
                }
                Param::Object if v > dims.n + 1 => {
                    return Err(Error::OutOfRange {
                        what: "object",
                        value: v,
                        lo: 0,
                        hi: dims.n + 1,
                    })
                }
                Param::Ordinal if v == 0 => return Err(Error::ZeroOrdinal),
                _ => {}
            }
        }
        Ok(())
    }

    pub fn args(&self) -> &[usize] {
        &self.args[..self.op.arity()]
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.op.name())?;
        for a in self.args() {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// The result of a query. Sets are sorted: pairs label-major, labels and
/// objects ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Count(usize),
    Pair(Option<Pair>),
    Label(Option<usize>),
    Object(Option<usize>),
    Pairs(Vec<Pair>),
    Labels(Vec<usize>),
    Objects(Vec<usize>),
}

impl Answer {
    pub fn count(&self) -> usize {
        match self {
            Answer::Count(c) => *c,
            other => panic!("expected a count, got {other:?}"),
        }
    }

    pub fn pair(&self) -> Option<Pair> {
        match self {
            Answer::Pair(p) => *p,
            other => panic!("expected a pair, got {other:?}"),
        }
    }

    pub fn label(&self) -> Option<usize> {
        match self {
            Answer::Label(l) => *l,
            other => panic!("expected a label, got {other:?}"),
        }
    }

    pub fn object(&self) -> Option<usize> {
        match self {
            Answer::Object(o) => *o,
            other => panic!("expected an object, got {other:?}"),
        }
    }

    pub fn into_pairs(self) -> Vec<Pair> {
        match self {
            Answer::Pairs(p) => p,
            other => panic!("expected pairs, got {other:?}"),
        }
    }

    pub fn into_labels(self) -> Vec<usize> {
        match self {
            Answer::Labels(l) => l,
            other => panic!("expected labels, got {other:?}"),
        }
    }

    pub fn into_objects(self) -> Vec<usize> {
        match self {
            Answer::Objects(o) => o,
            other => panic!("expected objects, got {other:?}"),
        }
    }

    /// The neutral answer of `op`: zero, none or the empty set.
    pub fn empty(op: Op) -> Self {
        use Op::*;
        match op {
            RelAcc => Answer::Pairs(Vec::new()),
            RelSelLabFst | RelMinLabFst | RelSelObjFst | RelMinObjFst => Answer::Pair(None),
            RelNum | RelRnk | RelRnkLabFst | RelRnkObjFst | LabNum | LabRnk | LabRnkOne
            | ObjNum | ObjRnk | ObjRnkOne => Answer::Count(0),
            LabAcc | LabAccOne => Answer::Labels(Vec::new()),
            LabSel | LabSelOne | LabMin | LabMinOne => Answer::Label(None),
            ObjAcc | ObjAccOne => Answer::Objects(Vec::new()),
            ObjSel | ObjSelOne | ObjMin | ObjMinOne => Answer::Object(None),
        }
    }
}

/// One line per element; `none` for an empty selection; nothing for an
/// empty set.
impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Count(c) => writeln!(f, "{c}"),
            Answer::Pair(Some(p)) => writeln!(f, "{} {}", p.label, p.object),
            Answer::Label(Some(v)) | Answer::Object(Some(v)) => writeln!(f, "{v}"),
            Answer::Pair(None) | Answer::Label(None) | Answer::Object(None) => writeln!(f, "none"),
            Answer::Pairs(ps) => ps
                .iter()
                .try_for_each(|p| writeln!(f, "{} {}", p.label, p.object)),
            Answer::Labels(vs) | Answer::Objects(vs) => {
                vs.iter().try_for_each(|v| writeln!(f, "{v}"))
            }
        }
    }
}
