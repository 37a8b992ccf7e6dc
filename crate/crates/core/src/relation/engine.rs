//! Completes a representation's native operations to the full algebra.
//!
//! Every derived operation has one or more strategies, each expressing it
//! through other operations. [`Plan`] picks, for each operation, the cheapest
//! strategy reachable from the native set (constant-factor rewrites cost 1,
//! iterations 8, binary searches 32). Because a strategy always costs more
//! than each of its inputs, the chosen plan never loops.
//!
//! Before an operation reaches a native implementation or a strategy its
//! arguments are normalized: ranges are clipped to the universe, empty
//! ranges short-circuit to the neutral answer, and the two-band minimum
//! queries are rewritten so that their first band is well formed. The
//! normalized forms are:
//!
//! * counts, sets and `rel_sel_*`: `1 <= alpha <= beta <= sigma` and
//!   `1 <= x <= y <= n` for whichever bounds the operation has;
//! * `rel_min_lab_fst(alpha, x, y, z)`: `x <= z <= y`;
//! * `rel_min_obj_fst(alpha, beta, gamma, x)`: `alpha <= gamma <= beta`;
//! * `rel_rnk_lab_fst` and `rel_rnk_obj_fst` keep their literal meaning, with
//!   the pivot label and object clipped into the universe.

use super::ops::{Answer, Op, OpSet, Query};
use super::{ObjectMajorOrder, Pair, RelationDims};
use crate::error::{Error, Result};
use crate::trace::Trace;

/// A representation answering some operations directly.
pub trait NativeOps {
    fn dims(&self) -> RelationDims;

    fn native_ops(&self) -> OpSet;

    /// Answers an operation of [`native_ops`](Self::native_ops) whose
    /// arguments are in normalized form.
    fn native(&self, q: &Query, trace: &mut Trace) -> Answer;
}

macro_rules! strategies {
    ($($variant:ident: $target:ident <- [$($src:ident),*] @ $w:expr;)*) => {
        /// How an operation is obtained.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum Strategy {
            Native,
            $($variant,)*
        }

        impl Strategy {
            /// Every derivation, in order of preference among equal costs.
            pub const DERIVED: &'static [Strategy] = &[$(Strategy::$variant,)*];

            /// The operation this strategy produces; `None` for [`Strategy::Native`].
            pub fn target(self) -> Option<Op> {
                match self {
                    Strategy::Native => None,
                    $(Strategy::$variant => Some(Op::$target),)*
                }
            }

            pub fn sources(self) -> &'static [Op] {
                match self {
                    Strategy::Native => &[],
                    $(Strategy::$variant => &[$(Op::$src),*],)*
                }
            }

            pub fn weight(self) -> u64 {
                match self {
                    Strategy::Native => 1,
                    $(Strategy::$variant => $w,)*
                }
            }
        }
    };
}

const REWRITE: u64 = 1;
const ITERATE: u64 = 8;
const SEARCH: u64 = 32;

strategies! {
    RelNumFromRelRnk: RelNum <- [RelRnk] @ REWRITE;
    RelNumFromRnkLabFst: RelNum <- [RelRnkLabFst] @ REWRITE;
    RelNumFromRnkObjFst: RelNum <- [RelRnkObjFst] @ REWRITE;
    RelNumFromRelAcc: RelNum <- [RelAcc] @ ITERATE;
    RelRnkFromRelNum: RelRnk <- [RelNum] @ REWRITE;
    RelRnkLabFstFromRelNum: RelRnkLabFst <- [RelNum] @ REWRITE;
    RelRnkLabFstBySearch: RelRnkLabFst <- [RelSelLabFst] @ SEARCH;
    RelRnkObjFstFromRelNum: RelRnkObjFst <- [RelNum] @ REWRITE;
    RelRnkObjFstBySearch: RelRnkObjFst <- [RelSelObjFst] @ SEARCH;
    RelAccByMinLabFst: RelAcc <- [RelMinLabFst] @ ITERATE;
    RelAccByMinObjFst: RelAcc <- [RelMinObjFst] @ ITERATE;
    RelSelLabFstByMin: RelSelLabFst <- [RelMinLabFst] @ ITERATE;
    RelSelLabFstBySearch: RelSelLabFst <- [RelRnkLabFst] @ SEARCH;
    RelMinLabFstFromSel: RelMinLabFst <- [RelSelLabFst] @ REWRITE;
    RelSelObjFstByMin: RelSelObjFst <- [RelMinObjFst] @ ITERATE;
    RelSelObjFstBySearch: RelSelObjFst <- [RelRnkObjFst] @ SEARCH;
    RelMinObjFstFromSel: RelMinObjFst <- [RelSelObjFst] @ REWRITE;
    LabAccByMin: LabAcc <- [LabMin] @ ITERATE;
    LabAccFromRelAcc: LabAcc <- [RelAcc] @ ITERATE;
    LabAccOneFromLabAcc: LabAccOne <- [LabAcc] @ REWRITE;
    LabAccOneFromRelAcc: LabAccOne <- [RelAcc] @ ITERATE;
    LabAccOneByMinOne: LabAccOne <- [LabMinOne] @ ITERATE;
    LabSelByMin: LabSel <- [LabMin] @ ITERATE;
    LabSelBySearch: LabSel <- [LabNum] @ SEARCH;
    LabSelOneFromLabSel: LabSelOne <- [LabSel] @ REWRITE;
    LabSelOneFromRelSel: LabSelOne <- [RelSelLabFst] @ REWRITE;
    LabMinFromLabSel: LabMin <- [LabSel] @ REWRITE;
    LabMinFromRelMin: LabMin <- [RelMinLabFst] @ REWRITE;
    LabMinOneFromLabMin: LabMinOne <- [LabMin] @ REWRITE;
    LabMinOneFromSelOne: LabMinOne <- [LabSelOne] @ REWRITE;
    LabNumFromLabAcc: LabNum <- [LabAcc] @ ITERATE;
    LabNumBySearch: LabNum <- [LabSel] @ SEARCH;
    LabNumPerLabel: LabNum <- [RelNum] @ ITERATE;
    LabRnkFromLabNum: LabRnk <- [LabNum] @ REWRITE;
    LabRnkOneFromLabRnk: LabRnkOne <- [LabRnk] @ REWRITE;
    LabRnkOneFromRelNum: LabRnkOne <- [RelNum] @ REWRITE;
    ObjAccByMin: ObjAcc <- [ObjMin] @ ITERATE;
    ObjAccFromRelAcc: ObjAcc <- [RelAcc] @ ITERATE;
    ObjAccOneFromObjAcc: ObjAccOne <- [ObjAcc] @ REWRITE;
    ObjAccOneFromRelAcc: ObjAccOne <- [RelAcc] @ ITERATE;
    ObjAccOneByMinOne: ObjAccOne <- [ObjMinOne] @ ITERATE;
    ObjSelByMin: ObjSel <- [ObjMin] @ ITERATE;
    ObjSelBySearch: ObjSel <- [ObjNum] @ SEARCH;
    ObjSelOneFromObjSel: ObjSelOne <- [ObjSel] @ REWRITE;
    ObjSelOneFromRelSel: ObjSelOne <- [RelSelObjFst] @ REWRITE;
    ObjMinFromObjSel: ObjMin <- [ObjSel] @ REWRITE;
    ObjMinFromRelMin: ObjMin <- [RelMinObjFst] @ REWRITE;
    ObjMinOneFromObjMin: ObjMinOne <- [ObjMin] @ REWRITE;
    ObjMinOneFromSelOne: ObjMinOne <- [ObjSelOne] @ REWRITE;
    ObjNumFromObjAcc: ObjNum <- [ObjAcc] @ ITERATE;
    ObjNumBySearch: ObjNum <- [ObjSel] @ SEARCH;
    ObjNumPerObject: ObjNum <- [RelNum] @ ITERATE;
    ObjRnkFromObjNum: ObjRnk <- [ObjNum] @ REWRITE;
    ObjRnkOneFromObjRnk: ObjRnkOne <- [ObjRnk] @ REWRITE;
    ObjRnkOneFromRelNum: ObjRnkOne <- [RelNum] @ REWRITE;
}

impl Strategy {
    /// Derivations producing `op`, most preferred first.
    pub fn for_op(op: Op) -> impl Iterator<Item = Strategy> {
        Strategy::DERIVED
            .iter()
            .copied()
            .filter(move |s| s.target() == Some(op))
    }
}

/// The strategy chosen for every operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    choice: [Strategy; 27],
    cost: [u64; 27],
}

impl Plan {
    /// Cheapest derivation of every operation from `natives`, honoring
    /// `forced` choices.
    pub fn build(natives: OpSet, forced: &[(Op, Strategy)]) -> Result<Self> {
        const INF: u64 = u64::MAX;
        let forced_for = |op: Op| forced.iter().rev().find(|(o, _)| *o == op).map(|&(_, s)| s);
        let mut cost = [INF; 27];
        let mut choice = [Strategy::Native; 27];
        for op in Op::ALL {
            if let Some(s) = forced_for(op) {
                if s == Strategy::Native && !natives.contains(op) {
                    return Err(Error::Unreachable(op.name()));
                }
                if s.target().is_some_and(|t| t != op) {
                    return Err(Error::Unreachable(op.name()));
                }
            }
            let allowed = forced_for(op).is_none_or(|s| s == Strategy::Native);
            if natives.contains(op) && allowed {
                cost[op as usize] = Strategy::Native.weight();
            }
        }
        loop {
            let mut changed = false;
            for &s in Strategy::DERIVED {
                let op = s.target().unwrap();
                if forced_for(op).is_some_and(|f| f != s) {
                    continue;
                }
                let mut c = s.weight();
                for &src in s.sources() {
                    c = c.saturating_add(cost[src as usize]);
                }
                if c < cost[op as usize] {
                    cost[op as usize] = c;
                    choice[op as usize] = s;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if let Some(op) = Op::ALL.into_iter().find(|&op| cost[op as usize] == INF) {
            return Err(Error::Unreachable(op.name()));
        }
        Ok(Self { choice, cost })
    }

    pub fn strategy(&self, op: Op) -> Strategy {
        self.choice[op as usize]
    }

    /// Static cost estimate; natives cost 1.
    pub fn cost(&self, op: Op) -> u64 {
        self.cost[op as usize]
    }
}

/// A representation completed to all 27 operations.
#[derive(Clone, Debug)]
pub struct Relation<R> {
    repr: R,
    dims: RelationDims,
    natives: OpSet,
    forced: Vec<(Op, Strategy)>,
    plan: Plan,
}

macro_rules! typed {
    ($($(#[$m:meta])* $name:ident($($arg:ident),*) -> $ret:ty = $op:ident, $conv:ident;)*) => {
        $(
            $(#[$m])*
            pub fn $name(&self, $($arg: usize),*) -> Result<$ret> {
                Ok(self.query(&Query::new(Op::$op, &[$($arg),*])?)?.$conv())
            }
        )*
    };
}

impl<R: NativeOps> Relation<R> {
    pub fn new(repr: R) -> Result<Self> {
        let natives = repr.native_ops();
        let plan = Plan::build(natives, &[])?;
        Ok(Self {
            dims: repr.dims(),
            repr,
            natives,
            forced: Vec::new(),
            plan,
        })
    }

    /// Restricts the natives used to those also in `ops`.
    pub fn with_natives(mut self, ops: OpSet) -> Result<Self> {
        self.natives = self.repr.native_ops().intersection(ops);
        self.plan = Plan::build(self.natives, &self.forced)?;
        Ok(self)
    }

    /// Forces `op` to be obtained through `strategy`.
    pub fn with_strategy(mut self, op: Op, strategy: Strategy) -> Result<Self> {
        self.forced.push((op, strategy));
        self.plan = Plan::build(self.natives, &self.forced)?;
        Ok(self)
    }

    pub fn repr(&self) -> &R {
        &self.repr
    }

    pub fn into_inner(self) -> R {
        self.repr
    }

    pub fn dims(&self) -> RelationDims {
        self.dims
    }

    pub fn natives(&self) -> OpSet {
        self.natives
    }

    pub fn plan(&self) -> &Plan {
        &self.plan
    }

    pub fn query(&self, q: &Query) -> Result<Answer> {
        self.query_traced(q, &mut Trace::new())
    }

    pub fn query_traced(&self, q: &Query, trace: &mut Trace) -> Result<Answer> {
        if q.args().len() != q.op.arity() {
            return Err(Error::Arity {
                op: q.op.name(),
                expected: q.op.arity(),
                got: q.args().len(),
            });
        }
        q.validate(&self.dims)?;
        Ok(self.eval(*q, trace))
    }

    typed! {
        rel_acc(alpha, beta, x, y) -> Vec<Pair> = RelAcc, into_pairs;
        rel_sel_lab_fst(alpha, j, x, y) -> Option<Pair> = RelSelLabFst, pair;
        rel_min_lab_fst(alpha, x, y, z) -> Option<Pair> = RelMinLabFst, pair;
        rel_sel_obj_fst(alpha, beta, x, j) -> Option<Pair> = RelSelObjFst, pair;
        rel_min_obj_fst(alpha, beta, gamma, x) -> Option<Pair> = RelMinObjFst, pair;
        rel_num(alpha, beta, x, y) -> usize = RelNum, count;
        rel_rnk(alpha, x) -> usize = RelRnk, count;
        rel_rnk_lab_fst(alpha, x, y, z) -> usize = RelRnkLabFst, count;
        rel_rnk_obj_fst(alpha, beta, gamma, x) -> usize = RelRnkObjFst, count;
        lab_acc(alpha, beta, x, y) -> Vec<usize> = LabAcc, into_labels;
        lab_acc_one(alpha, beta, x) -> Vec<usize> = LabAccOne, into_labels;
        lab_sel(alpha, j, x, y) -> Option<usize> = LabSel, label;
        lab_sel_one(alpha, j, x) -> Option<usize> = LabSelOne, label;
        lab_min(alpha, x, y) -> Option<usize> = LabMin, label;
        lab_min_one(alpha, x) -> Option<usize> = LabMinOne, label;
        lab_num(alpha, beta, x, y) -> usize = LabNum, count;
        lab_rnk(alpha, x, y) -> usize = LabRnk, count;
        lab_rnk_one(alpha, x) -> usize = LabRnkOne, count;
        obj_acc(alpha, beta, x, y) -> Vec<usize> = ObjAcc, into_objects;
        obj_acc_one(alpha, x, y) -> Vec<usize> = ObjAccOne, into_objects;
        obj_sel(alpha, beta, x, j) -> Option<usize> = ObjSel, object;
        obj_sel_one(alpha, x, j) -> Option<usize> = ObjSelOne, object;
        obj_min(alpha, beta, x) -> Option<usize> = ObjMin, object;
        obj_min_one(alpha, x) -> Option<usize> = ObjMinOne, object;
        obj_num(alpha, beta, x, y) -> usize = ObjNum, count;
        obj_rnk(alpha, beta, x) -> usize = ObjRnk, count;
        obj_rnk_one(alpha, x) -> usize = ObjRnkOne, count;
    }

    fn eval(&self, q: Query, tr: &mut Trace) -> Answer {
        match self.normalize(q, tr) {
            Ok(clean) => match self.plan.strategy(clean.op) {
                Strategy::Native => self.repr.native(&clean, tr),
                s => self.derive(s, &clean, tr),
            },
            Err(done) => done,
        }
    }

    /// Clean query, or the final answer when normalization settles it.
    fn normalize(&self, q: Query, tr: &mut Trace) -> Result<Query, Answer> {
        use Op::*;
        let (n, s) = (self.dims.n, self.dims.sigma);
        let empty = Answer::empty(q.op);
        if self.dims.t == 0 {
            return Err(empty);
        }
        let [a0, a1, a2, a3] = q.args;
        let clean = |args: [usize; 4]| Ok(Query::raw(q.op, args));
        match q.op {
            RelAcc | RelNum | LabAcc | LabNum | ObjAcc | ObjNum => {
                let (a, b, x, y) = (a0.max(1), a1.min(s), a2.max(1), a3.min(n));
                if a > b || x > y {
                    return Err(empty);
                }
                clean([a, b, x, y])
            }
            RelRnk => {
                let (a, x) = (a0.min(s), a1.min(n));
                if a == 0 || x == 0 {
                    return Err(empty);
                }
                clean([a, x, 0, 0])
            }
            RelRnkLabFst => {
                let (x, y, z) = (a1.max(1), a2.min(n), a3.min(n));
                match a0 {
                    0 => Err(empty),
                    a if a > s => clean([s, x, y, y]),
                    a => clean([a, x, y, z]),
                }
            }
            RelRnkObjFst => {
                let (a, b, g) = (a0.max(1), a1.min(s), a2.min(s));
                match a3 {
                    0 => Err(empty),
                    x if x > n => {
                        if a > b {
                            Err(empty)
                        } else {
                            clean([a, b, b, n])
                        }
                    }
                    x => clean([a, b, g, x]),
                }
            }
            RelSelLabFst | LabSel => {
                let (a, x, y) = (a0.max(1), a2.max(1), a3.min(n));
                if a > s || x > y {
                    return Err(empty);
                }
                clean([a, a1, x, y])
            }
            RelSelObjFst | ObjSel => {
                let (a, b, x) = (a0.max(1), a1.min(s), a2.max(1));
                if a > b || x > n {
                    return Err(empty);
                }
                clean([a, b, x, a3])
            }
            RelMinLabFst => self.normalize_min_lab_fst(q, tr),
            RelMinObjFst => self.normalize_min_obj_fst(q, tr),
            LabAccOne => {
                let (a, b) = (a0.max(1), a1.min(s));
                if a > b || a2 == 0 || a2 > n {
                    return Err(empty);
                }
                clean([a, b, a2, 0])
            }
            LabSelOne => {
                let a = a0.max(1);
                if a > s || a2 == 0 || a2 > n {
                    return Err(empty);
                }
                clean([a, a1, a2, 0])
            }
            LabMin => {
                let (a, x, y) = (a0.max(1), a1.max(1), a2.min(n));
                if a > s || x > y {
                    return Err(empty);
                }
                clean([a, x, y, 0])
            }
            LabMinOne => {
                let a = a0.max(1);
                if a > s || a1 == 0 || a1 > n {
                    return Err(empty);
                }
                clean([a, a1, 0, 0])
            }
            LabRnk => {
                let (a, x, y) = (a0.min(s), a1.max(1), a2.min(n));
                if a == 0 || x > y {
                    return Err(empty);
                }
                clean([a, x, y, 0])
            }
            LabRnkOne => {
                let a = a0.min(s);
                if a == 0 || a1 == 0 || a1 > n {
                    return Err(empty);
                }
                clean([a, a1, 0, 0])
            }
            ObjAccOne => {
                let (x, y) = (a1.max(1), a2.min(n));
                if a0 == 0 || a0 > s || x > y {
                    return Err(empty);
                }
                clean([a0, x, y, 0])
            }
            ObjSelOne => {
                let x = a1.max(1);
                if a0 == 0 || a0 > s || x > n {
                    return Err(empty);
                }
                clean([a0, x, a2, 0])
            }
            ObjMin => {
                let (a, b, x) = (a0.max(1), a1.min(s), a2.max(1));
                if a > b || x > n {
                    return Err(empty);
                }
                clean([a, b, x, 0])
            }
            ObjMinOne => {
                let x = a1.max(1);
                if a0 == 0 || a0 > s || x > n {
                    return Err(empty);
                }
                clean([a0, x, 0, 0])
            }
            ObjRnk => {
                let (a, b, x) = (a0.max(1), a1.min(s), a2.min(n));
                if a > b || x == 0 {
                    return Err(empty);
                }
                clean([a, b, x, 0])
            }
            ObjRnkOne => {
                let x = a1.min(n);
                if a0 == 0 || a0 > s || x == 0 {
                    return Err(empty);
                }
                clean([a0, x, 0, 0])
            }
        }
    }

    fn normalize_min_lab_fst(&self, q: Query, tr: &mut Trace) -> Result<Query, Answer> {
        let (n, s) = (self.dims.n, self.dims.sigma);
        let [a, x, y, z] = q.args;
        let (x, y, z) = (x.max(1), y.min(n), z.max(1));
        if a == 0 {
            // Only the second band, over every label.
            if x > y {
                return Err(Answer::Pair(None));
            }
            return Ok(Query::raw(Op::RelMinLabFst, [1, x, y, x]));
        }
        if a > s {
            return Err(Answer::Pair(None));
        }
        let first_band = |this: &Self, tr: &mut Trace| {
            this.rmlf(a, z, y, z, tr).filter(|p| p.label == a)
        };
        if x > y {
            if z > y {
                return Err(Answer::Pair(None));
            }
            return Err(Answer::Pair(first_band(self, tr)));
        }
        if z > y {
            return Err(Answer::Pair(self.rmlf(a + 1, x, y, x, tr)));
        }
        if z < x {
            let p = first_band(self, tr).or_else(|| self.rmlf(a + 1, x, y, x, tr));
            return Err(Answer::Pair(p));
        }
        Ok(Query::raw(Op::RelMinLabFst, [a, x, y, z]))
    }

    fn normalize_min_obj_fst(&self, q: Query, tr: &mut Trace) -> Result<Query, Answer> {
        let (n, s) = (self.dims.n, self.dims.sigma);
        let [a, b, g, x] = q.args;
        let (a, b, g) = (a.max(1), b.min(s), g.max(1));
        if x == 0 {
            // Only the second band, over every object.
            if a > b {
                return Err(Answer::Pair(None));
            }
            return Ok(Query::raw(Op::RelMinObjFst, [a, b, a, 1]));
        }
        if x > n {
            return Err(Answer::Pair(None));
        }
        let first_band = |this: &Self, tr: &mut Trace| {
            this.rmof(g, b, g, x, tr).filter(|p| p.object == x)
        };
        if a > b {
            if g > b {
                return Err(Answer::Pair(None));
            }
            return Err(Answer::Pair(first_band(self, tr)));
        }
        if g > b {
            return Err(Answer::Pair(self.rmof(a, b, a, x + 1, tr)));
        }
        if g < a {
            let p = first_band(self, tr).or_else(|| self.rmof(a, b, a, x + 1, tr));
            return Err(Answer::Pair(p));
        }
        Ok(Query::raw(Op::RelMinObjFst, [a, b, g, x]))
    }

    fn ask(&self, op: Op, args: [usize; 4], tr: &mut Trace) -> Answer {
        self.eval(Query::raw(op, args), tr)
    }

    fn num(&self, a: usize, b: usize, x: usize, y: usize, tr: &mut Trace) -> usize {
        self.ask(Op::RelNum, [a, b, x, y], tr).count()
    }

    fn rnk(&self, a: usize, x: usize, tr: &mut Trace) -> usize {
        self.ask(Op::RelRnk, [a, x, 0, 0], tr).count()
    }

    fn rrlf(&self, a: usize, x: usize, y: usize, z: usize, tr: &mut Trace) -> usize {
        self.ask(Op::RelRnkLabFst, [a, x, y, z], tr).count()
    }

    fn rrof(&self, a: usize, b: usize, g: usize, x: usize, tr: &mut Trace) -> usize {
        self.ask(Op::RelRnkObjFst, [a, b, g, x], tr).count()
    }

    fn rslf(&self, a: usize, j: usize, x: usize, y: usize, tr: &mut Trace) -> Option<Pair> {
        self.ask(Op::RelSelLabFst, [a, j, x, y], tr).pair()
    }

    fn rsof(&self, a: usize, b: usize, x: usize, j: usize, tr: &mut Trace) -> Option<Pair> {
        self.ask(Op::RelSelObjFst, [a, b, x, j], tr).pair()
    }

    fn rmlf(&self, a: usize, x: usize, y: usize, z: usize, tr: &mut Trace) -> Option<Pair> {
        self.ask(Op::RelMinLabFst, [a, x, y, z], tr).pair()
    }

    fn rmof(&self, a: usize, b: usize, g: usize, x: usize, tr: &mut Trace) -> Option<Pair> {
        self.ask(Op::RelMinObjFst, [a, b, g, x], tr).pair()
    }

    fn relacc(&self, a: usize, b: usize, x: usize, y: usize, tr: &mut Trace) -> Vec<Pair> {
        self.ask(Op::RelAcc, [a, b, x, y], tr).into_pairs()
    }

    fn derive(&self, s: Strategy, q: &Query, tr: &mut Trace) -> Answer {
        use Strategy::*;
        let [a0, a1, a2, a3] = q.args;
        let sigma = self.dims.sigma;
        let n = self.dims.n;
        match s {
            Native => unreachable!("native operations are dispatched directly"),

            RelNumFromRelRnk => {
                let (a, b, x, y) = (a0, a1, a2, a3);
                let c = self.rnk(b, y, tr) + self.rnk(a - 1, x - 1, tr);
                Answer::Count(c - self.rnk(a - 1, y, tr) - self.rnk(b, x - 1, tr))
            }
            RelNumFromRnkLabFst => {
                let (a, b, x, y) = (a0, a1, a2, a3);
                Answer::Count(self.rrlf(b, x, y, y, tr) - self.rrlf(a - 1, x, y, y, tr))
            }
            RelNumFromRnkObjFst => {
                let (a, b, x, y) = (a0, a1, a2, a3);
                Answer::Count(self.rrof(a, b, b, y, tr) - self.rrof(a, b, b, x - 1, tr))
            }
            RelNumFromRelAcc => Answer::Count(self.relacc(a0, a1, a2, a3, tr).len()),

            RelRnkFromRelNum => Answer::Count(self.num(1, a0, 1, a1, tr)),

            RelRnkLabFstFromRelNum => {
                let (a, x, y, z) = (a0, a1, a2, a3);
                Answer::Count(self.num(1, a - 1, x, y, tr) + self.num(a, a, x, z, tr))
            }
            RelRnkLabFstBySearch => {
                let (a, x, y, z) = (a0, a1, a2, a3);
                let mut c = 0;
                if x <= y {
                    // Pairs of the whole band [x, y] up to (a, min(z, y)).
                    let key = Pair::new(a, z.min(y));
                    c += last_true((y - x + 1) * sigma, |j| {
                        self.rslf(1, j, x, y, tr).is_some_and(|p| p <= key)
                    });
                }
                if z > y {
                    // Row `a` beyond the band, up to z.
                    let from = x.max(y + 1);
                    if from <= z {
                        c += last_true(z - from + 1, |j| {
                            self.rslf(a, j, from, z, tr).is_some_and(|p| p.label == a)
                        });
                    }
                }
                Answer::Count(c)
            }
            RelRnkObjFstFromRelNum => {
                let (a, b, g, x) = (a0, a1, a2, a3);
                Answer::Count(self.num(a, b, 1, x - 1, tr) + self.num(a, g, x, x, tr))
            }
            RelRnkObjFstBySearch => {
                let (a, b, g, x) = (a0, a1, a2, a3);
                let mut c = 0;
                if a <= b {
                    let key = Pair::new(g.min(b), x);
                    c += last_true(x * (b - a + 1), |j| {
                        self.rsof(a, b, 1, j, tr)
                            .is_some_and(|p| ObjectMajorOrder::cmp(&p, &key).is_le())
                    });
                }
                if g > b {
                    let from = a.max(b + 1);
                    if from <= g {
                        c += last_true(g - from + 1, |j| {
                            self.rsof(from, g, x, j, tr).is_some_and(|p| p.object == x)
                        });
                    }
                }
                Answer::Count(c)
            }

            RelAccByMinLabFst => {
                let (a, b, x, y) = (a0, a1, a2, a3);
                let mut out = Vec::new();
                let mut cur = self.rmlf(a, x, y, x, tr);
                while let Some(p) = cur.filter(|p| p.label <= b) {
                    out.push(p);
                    cur = self.rmlf(p.label, x, y, p.object + 1, tr);
                }
                Answer::Pairs(out)
            }
            RelAccByMinObjFst => {
                let (a, b, x, y) = (a0, a1, a2, a3);
                let mut out = Vec::new();
                let mut cur = self.rmof(a, b, a, x, tr);
                while let Some(p) = cur.filter(|p| p.object <= y) {
                    out.push(p);
                    cur = self.rmof(a, b, p.label + 1, p.object, tr);
                }
                out.sort_unstable();
                Answer::Pairs(out)
            }
            RelSelLabFstByMin => {
                let (a, j, x, y) = (a0, a1, a2, a3);
                let mut cur = self.rmlf(a, x, y, x, tr);
                for _ in 1..j {
                    let Some(p) = cur else { break };
                    cur = self.rmlf(p.label, x, y, p.object + 1, tr);
                }
                Answer::Pair(cur)
            }
            RelSelLabFstBySearch => {
                let (a, j, x, y) = (a0, a1, a2, a3);
                let target = self.rrlf(a, x, y, x - 1, tr) + j;
                if self.rrlf(sigma, x, y, y, tr) < target {
                    return Answer::Pair(None);
                }
                // Cells of [a, sigma] x [x, y] in label-major order.
                let width = y - x + 1;
                let cell = |i: usize| Pair::new(a + i / width, x + i % width);
                let i = first_true((sigma - a + 1) * width, |i| {
                    let c = cell(i);
                    self.rrlf(c.label, x, y, c.object, tr) >= target
                });
                Answer::Pair(Some(cell(i)))
            }
            RelMinLabFstFromSel => {
                let (a, x, y, z) = (a0, a1, a2, a3);
                let p = self
                    .rslf(a, 1, z, y, tr)
                    .filter(|p| p.label == a)
                    .or_else(|| self.rslf(a + 1, 1, x, y, tr));
                Answer::Pair(p)
            }
            RelSelObjFstByMin => {
                let (a, b, x, j) = (a0, a1, a2, a3);
                let mut cur = self.rmof(a, b, a, x, tr);
                for _ in 1..j {
                    let Some(p) = cur else { break };
                    cur = self.rmof(a, b, p.label + 1, p.object, tr);
                }
                Answer::Pair(cur)
            }
            RelSelObjFstBySearch => {
                let (a, b, x, j) = (a0, a1, a2, a3);
                let target = self.rrof(a, b, b, x - 1, tr) + j;
                if self.rrof(a, b, b, n, tr) < target {
                    return Answer::Pair(None);
                }
                // Cells of [x, n] x [a, b] in object-major order.
                let height = b - a + 1;
                let cell = |i: usize| Pair::new(a + i % height, x + i / height);
                let i = first_true((n - x + 1) * height, |i| {
                    let c = cell(i);
                    self.rrof(a, b, c.label, c.object, tr) >= target
                });
                Answer::Pair(Some(cell(i)))
            }
            RelMinObjFstFromSel => {
                let (a, b, g, x) = (a0, a1, a2, a3);
                let p = self
                    .rsof(g, b, x, 1, tr)
                    .filter(|p| p.object == x)
                    .or_else(|| self.rsof(a, b, x + 1, 1, tr));
                Answer::Pair(p)
            }

            LabAccByMin => {
                let (a, b, x, y) = (a0, a1, a2, a3);
                Answer::Labels(self.iterate_labels(a, b, tr, |this, g, tr| {
                    this.ask(Op::LabMin, [g, x, y, 0], tr).label()
                }))
            }
            LabAccFromRelAcc => {
                let mut v: Vec<usize> = self.relacc(a0, a1, a2, a3, tr).iter().map(|p| p.label).collect();
                v.dedup();
                Answer::Labels(v)
            }
            LabAccOneFromLabAcc => self.ask(Op::LabAcc, [a0, a1, a2, a2], tr),
            LabAccOneFromRelAcc => {
                let v = self.relacc(a0, a1, a2, a2, tr).iter().map(|p| p.label).collect();
                Answer::Labels(v)
            }
            LabAccOneByMinOne => {
                let (a, b, x) = (a0, a1, a2);
                Answer::Labels(self.iterate_labels(a, b, tr, |this, g, tr| {
                    this.ask(Op::LabMinOne, [g, x, 0, 0], tr).label()
                }))
            }
            LabSelByMin => {
                let (a, j, x, y) = (a0, a1, a2, a3);
                let mut cur = self.ask(Op::LabMin, [a, x, y, 0], tr).label();
                for _ in 1..j {
                    let Some(g) = cur else { break };
                    cur = self.ask(Op::LabMin, [g + 1, x, y, 0], tr).label();
                }
                Answer::Label(cur)
            }
            LabSelBySearch => {
                let (a, j, x, y) = (a0, a1, a2, a3);
                let count = |b: usize, tr: &mut Trace| self.ask(Op::LabNum, [a, b, x, y], tr).count();
                if count(sigma, tr) < j {
                    return Answer::Label(None);
                }
                let i = first_true(sigma - a + 1, |i| count(a + i, tr) >= j);
                Answer::Label(Some(a + i))
            }
            LabSelOneFromLabSel => self.ask(Op::LabSel, [a0, a1, a2, a2], tr),
            LabSelOneFromRelSel => Answer::Label(self.rslf(a0, a1, a2, a2, tr).map(|p| p.label)),
            LabMinFromLabSel => self.ask(Op::LabSel, [a0, 1, a1, a2], tr),
            LabMinFromRelMin => Answer::Label(self.rmlf(a0, a1, a2, a1, tr).map(|p| p.label)),
            LabMinOneFromLabMin => self.ask(Op::LabMin, [a0, a1, a1, 0], tr),
            LabMinOneFromSelOne => self.ask(Op::LabSelOne, [a0, 1, a1, 0], tr),
            LabNumFromLabAcc => Answer::Count(self.ask(Op::LabAcc, q.args, tr).into_labels().len()),
            LabNumBySearch => {
                let (a, b, x, y) = (a0, a1, a2, a3);
                Answer::Count(last_true(b - a + 1, |j| {
                    self.ask(Op::LabSel, [a, j, x, y], tr)
                        .label()
                        .is_some_and(|g| g <= b)
                }))
            }
            LabNumPerLabel => {
                let (a, b, x, y) = (a0, a1, a2, a3);
                Answer::Count((a..=b).filter(|&g| self.num(g, g, x, y, tr) > 0).count())
            }
            LabRnkFromLabNum => self.ask(Op::LabNum, [1, a0, a1, a2], tr),
            LabRnkOneFromLabRnk => self.ask(Op::LabRnk, [a0, a1, a1, 0], tr),
            LabRnkOneFromRelNum => Answer::Count(self.num(1, a0, a1, a1, tr)),

            ObjAccByMin => {
                let (a, b, x, y) = (a0, a1, a2, a3);
                Answer::Objects(self.iterate_objects(x, y, tr, |this, z, tr| {
                    this.ask(Op::ObjMin, [a, b, z, 0], tr).object()
                }))
            }
            ObjAccFromRelAcc => {
                let mut v: Vec<usize> = self.relacc(a0, a1, a2, a3, tr).iter().map(|p| p.object).collect();
                v.sort_unstable();
                v.dedup();
                Answer::Objects(v)
            }
            ObjAccOneFromObjAcc => self.ask(Op::ObjAcc, [a0, a0, a1, a2], tr),
            ObjAccOneFromRelAcc => {
                let v = self.relacc(a0, a0, a1, a2, tr).iter().map(|p| p.object).collect();
                Answer::Objects(v)
            }
            ObjAccOneByMinOne => {
                let (a, x, y) = (a0, a1, a2);
                Answer::Objects(self.iterate_objects(x, y, tr, |this, z, tr| {
                    this.ask(Op::ObjMinOne, [a, z, 0, 0], tr).object()
                }))
            }
            ObjSelByMin => {
                let (a, b, x, j) = (a0, a1, a2, a3);
                let mut cur = self.ask(Op::ObjMin, [a, b, x, 0], tr).object();
                for _ in 1..j {
                    let Some(z) = cur else { break };
                    cur = self.ask(Op::ObjMin, [a, b, z + 1, 0], tr).object();
                }
                Answer::Object(cur)
            }
            ObjSelBySearch => {
                let (a, b, x, j) = (a0, a1, a2, a3);
                let count = |y: usize, tr: &mut Trace| self.ask(Op::ObjNum, [a, b, x, y], tr).count();
                if count(n, tr) < j {
                    return Answer::Object(None);
                }
                let i = first_true(n - x + 1, |i| count(x + i, tr) >= j);
                Answer::Object(Some(x + i))
            }
            ObjSelOneFromObjSel => self.ask(Op::ObjSel, [a0, a0, a1, a2], tr),
            ObjSelOneFromRelSel => Answer::Object(self.rsof(a0, a0, a1, a2, tr).map(|p| p.object)),
            ObjMinFromObjSel => self.ask(Op::ObjSel, [a0, a1, a2, 1], tr),
            ObjMinFromRelMin => Answer::Object(self.rmof(a0, a1, a0, a2, tr).map(|p| p.object)),
            ObjMinOneFromObjMin => self.ask(Op::ObjMin, [a0, a0, a1, 0], tr),
            ObjMinOneFromSelOne => self.ask(Op::ObjSelOne, [a0, a1, 1, 0], tr),
            ObjNumFromObjAcc => Answer::Count(self.ask(Op::ObjAcc, q.args, tr).into_objects().len()),
            ObjNumBySearch => {
                let (a, b, x, y) = (a0, a1, a2, a3);
                Answer::Count(last_true(y - x + 1, |j| {
                    self.ask(Op::ObjSel, [a, b, x, j], tr)
                        .object()
                        .is_some_and(|z| z <= y)
                }))
            }
            ObjNumPerObject => {
                let (a, b, x, y) = (a0, a1, a2, a3);
                Answer::Count((x..=y).filter(|&z| self.num(a, b, z, z, tr) > 0).count())
            }
            ObjRnkFromObjNum => self.ask(Op::ObjNum, [a0, a1, 1, a2], tr),
            ObjRnkOneFromObjRnk => self.ask(Op::ObjRnk, [a0, a0, a1, 0], tr),
            ObjRnkOneFromRelNum => Answer::Count(self.num(a0, a0, 1, a1, tr)),
        }
    }

    /// Labels `<= b` produced by repeatedly asking for the next one from `a`.
    fn iterate_labels(
        &self,
        a: usize,
        b: usize,
        tr: &mut Trace,
        next: impl Fn(&Self, usize, &mut Trace) -> Option<usize>,
    ) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = next(self, a, tr);
        while let Some(g) = cur.filter(|&g| g <= b) {
            out.push(g);
            cur = next(self, g + 1, tr);
        }
        out
    }

    fn iterate_objects(
        &self,
        x: usize,
        y: usize,
        tr: &mut Trace,
        next: impl Fn(&Self, usize, &mut Trace) -> Option<usize>,
    ) -> Vec<usize> {
        self.iterate_labels(x, y, tr, next)
    }
}

/// Largest `j` in `[0, hi]` with `pred(j)`, for `pred` true on a prefix of
/// `[1, hi]`.
fn last_true(hi: usize, mut pred: impl FnMut(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, hi);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Smallest `i` in `[0, len)` with `pred(i)`, for `pred` monotone and true
/// at `len - 1`.
fn first_true(len: usize, mut pred: impl FnMut(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, len - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::NaiveRelation;

    fn r0() -> NaiveRelation {
        let pairs: Vec<Pair> = [(1, 2), (1, 5), (2, 1), (2, 4), (3, 1), (3, 3), (3, 5), (4, 5)]
            .into_iter()
            .map(Pair::from)
            .collect();
        NaiveRelation::new(&pairs, 5, 4).unwrap()
    }

    #[test]
    fn every_strategy_targets_a_different_op_than_its_sources() {
        for &s in Strategy::DERIVED {
            assert!(!s.sources().contains(&s.target().unwrap()), "{s:?}");
        }
        for op in Op::ALL {
            assert!(op == Op::RelNum || Strategy::for_op(op).next().is_some() || op == Op::RelRnk);
        }
    }

    #[test]
    fn unreachable_reported() {
        assert!(matches!(Plan::build(OpSet::empty(), &[]), Err(Error::Unreachable(_))));
        assert!(Plan::build(OpSet::of(&[Op::RelNum, Op::RelMinLabFst, Op::RelMinObjFst]), &[]).is_ok());
    }

    #[test]
    fn isolated_edges_match_oracle() {
        let oracle = r0();
        for &s in Strategy::DERIVED {
            let op = s.target().unwrap();
            let rel = Relation::new(oracle.clone())
                .unwrap()
                .with_natives(OpSet::all().without(op))
                .unwrap()
                .with_strategy(op, s)
                .unwrap();
            assert_eq!(rel.plan().strategy(op), s);
            let d = rel.dims();
            let mut args = [0usize; 4];
            let bounds: Vec<usize> = op
                .params()
                .iter()
                .map(|p| match p {
                    super::super::Param::Label => d.sigma + 2,
                    super::super::Param::Object => d.n + 2,
                    super::super::Param::Ordinal => 10,
                })
                .collect();
            let total: usize = bounds.iter().product();
            for mut code in 0..total {
                for (slot, &b) in bounds.iter().enumerate() {
                    args[slot] = code % b;
                    code /= b;
                }
                if op.params().iter().zip(&args).any(|(p, &v)| *p == super::super::Param::Ordinal && v == 0) {
                    continue;
                }
                let q = Query::new(op, &args[..op.arity()]).unwrap();
                assert_eq!(rel.query(&q).unwrap(), oracle.answer(&q), "{s:?} on {q}");
            }
        }
    }

    /// Every argument combination of `op` over the extended universe.
    fn all_queries(op: Op, d: RelationDims) -> Vec<Query> {
        use super::super::Param;
        let bounds: Vec<usize> = op
            .params()
            .iter()
            .map(|p| match p {
                Param::Label => d.sigma + 2,
                Param::Object => d.n + 2,
                Param::Ordinal => d.n.max(d.sigma) + 2,
            })
            .collect();
        let total: usize = bounds.iter().product();
        let mut out = Vec::new();
        for mut code in 0..total {
            let mut args = vec![0; bounds.len()];
            for (slot, &b) in bounds.iter().enumerate() {
                args[slot] = code % b;
                code /= b;
            }
            let q = Query::new(op, &args).unwrap();
            if q.validate(&d).is_ok() {
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn representation_native_sets_match_oracle() {
        use Op::*;
        let sets = [
            OpSet::of(&[RelNum, LabNum, ObjNum, RelSelLabFst, RelSelObjFst, LabSelOne, ObjSelOne, ObjRnkOne]),
            OpSet::of(&[RelRnk, RelSelLabFst, RelSelObjFst, RelMinObjFst, ObjSelOne, LabNum, ObjRnkOne]),
            OpSet::of(&[RelNum, RelMinLabFst, RelMinObjFst, ObjSelOne, LabNum]),
            OpSet::of(&[RelNum, RelSelLabFst, RelSelObjFst]),
            OpSet::of(&[RelRnk, RelMinLabFst, RelMinObjFst]),
            OpSet::of(&[RelRnkLabFst, RelRnkObjFst]),
        ];
        let oracle = r0();
        for set in sets {
            let rel = Relation::new(oracle.clone()).unwrap().with_natives(set).unwrap();
            for op in Op::ALL {
                for q in all_queries(op, rel.dims()) {
                    assert_eq!(rel.query(&q).unwrap(), oracle.answer(&q), "{set:?} {q}");
                }
            }
        }
    }

    #[test]
    fn rel_num_inclusion_exclusion() {
        let rel = Relation::new(r0())
            .unwrap()
            .with_natives(OpSet::all().without(Op::RelNum))
            .unwrap()
            .with_strategy(Op::RelNum, Strategy::RelNumFromRelRnk)
            .unwrap();
        assert_eq!(rel.rel_num(2, 3, 1, 3).unwrap(), 3);
        assert_eq!(rel.rel_num(2, 3, 4, 3).unwrap(), 0);
        let lm = Relation::new(r0())
            .unwrap()
            .with_natives(OpSet::all().without(Op::LabMin))
            .unwrap()
            .with_strategy(Op::LabMin, Strategy::LabMinFromRelMin)
            .unwrap();
        assert_eq!(lm.lab_min(2, 3, 5).unwrap(), Some(2));
    }
}
