//! The elimination loop on uniform-box subproblems and the drivers around it.

mod ffun;
mod pipeline;
mod speclu;

use std::fmt;

pub use ffun::{eval_f, FArgs, FEval};
pub use pipeline::{default_cap, solve, solve_multi, SolveOptions, SolveOutcome, Status, SubReport};
pub use speclu::{
    classify, initialize, iterate_case, solve_speclu, SizeClass, SolverState, SpecOutcome, SpecResult, Step,
};

use crate::rational::Rational;
use crate::sets::ElemSet;

/// Leaf of the case analysis that produced a step or a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    C1_1,
    C1_2_1,
    C1_2_2,
    /// Equal measure and identical free part: no deviation can change the gap.
    C1Degenerate,
    C2_1_1,
    C2_1_2_1,
    C2_1_2_2,
    C2_2_1,
    C2_2_2_1,
    C2_2_2_2,
    C3_1_1,
    C3_1_2_1,
    C3_1_2_2,
    C3_2_1,
    C3_2_2_1,
    C3_2_2_2,
    C4_1_1,
    C4_1_2_1,
    C4_1_2_2,
    C4_2_1,
    C4_2_2_1,
    C4_2_2_2,
    C5_1_1,
    C5_1_2_1,
    C5_1_2_2,
    C5_2_1,
    C5_2_2_1,
    C5_2_2_2,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 28] = [
        CaseLabel::C1_1,
        CaseLabel::C1_2_1,
        CaseLabel::C1_2_2,
        CaseLabel::C1Degenerate,
        CaseLabel::C2_1_1,
        CaseLabel::C2_1_2_1,
        CaseLabel::C2_1_2_2,
        CaseLabel::C2_2_1,
        CaseLabel::C2_2_2_1,
        CaseLabel::C2_2_2_2,
        CaseLabel::C3_1_1,
        CaseLabel::C3_1_2_1,
        CaseLabel::C3_1_2_2,
        CaseLabel::C3_2_1,
        CaseLabel::C3_2_2_1,
        CaseLabel::C3_2_2_2,
        CaseLabel::C4_1_1,
        CaseLabel::C4_1_2_1,
        CaseLabel::C4_1_2_2,
        CaseLabel::C4_2_1,
        CaseLabel::C4_2_2_1,
        CaseLabel::C4_2_2_2,
        CaseLabel::C5_1_1,
        CaseLabel::C5_1_2_1,
        CaseLabel::C5_1_2_2,
        CaseLabel::C5_2_1,
        CaseLabel::C5_2_2_1,
        CaseLabel::C5_2_2_2,
    ];

    pub fn as_str(self) -> &'static str {
        use CaseLabel::*;
        match self {
            C1_1 => "1.1",
            C1_2_1 => "1.2.1",
            C1_2_2 => "1.2.2",
            C1Degenerate => "1.0",
            C2_1_1 => "2.1.1",
            C2_1_2_1 => "2.1.2.1",
            C2_1_2_2 => "2.1.2.2",
            C2_2_1 => "2.2.1",
            C2_2_2_1 => "2.2.2.1",
            C2_2_2_2 => "2.2.2.2",
            C3_1_1 => "3.1.1",
            C3_1_2_1 => "3.1.2.1",
            C3_1_2_2 => "3.1.2.2",
            C3_2_1 => "3.2.1",
            C3_2_2_1 => "3.2.2.1",
            C3_2_2_2 => "3.2.2.2",
            C4_1_1 => "4.1.1",
            C4_1_2_1 => "4.1.2.1",
            C4_1_2_2 => "4.1.2.2",
            C4_2_1 => "4.2.1",
            C4_2_2_1 => "4.2.2.1",
            C4_2_2_2 => "4.2.2.2",
            C5_1_1 => "5.1.1",
            C5_1_2_1 => "5.1.2.1",
            C5_1_2_2 => "5.1.2.2",
            C5_2_1 => "5.2.1",
            C5_2_2_1 => "5.2.2.1",
            C5_2_2_2 => "5.2.2.2",
        }
    }

    pub fn parse(s: &str) -> Option<CaseLabel> {
        CaseLabel::ALL.iter().copied().find(|l| l.as_str() == s)
    }

    /// Leaves that stop the loop without a step.
    pub fn is_infeasible(self) -> bool {
        use CaseLabel::*;
        matches!(
            self,
            C1_2_2
                | C1Degenerate
                | C2_1_2_2
                | C2_2_2_2
                | C3_1_2_2
                | C3_2_2_2
                | C4_1_2_2
                | C4_2_2_2
                | C5_1_2_2
                | C5_2_2_2
        )
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A remembered bad set and the cost index it was found under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadSet {
    pub set: ElemSet,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub i: u64,
    pub label: CaseLabel,
    /// Cost index under which `set` was found.
    pub j: usize,
    pub set: ElemSet,
    pub delta: Rational,
    pub big_delta: Rational,
    pub d: Rational,
    pub big_d: Rational,
    pub x: Option<BadSet>,
    pub y: Option<BadSet>,
    pub z: Option<BadSet>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveTrace {
    pub d0: Rational,
    pub big_d0: Rational,
    pub steps: Vec<TraceStep>,
    /// Set on an infeasible verdict: the leaf, the cost index and the offending set.
    pub verdict: Option<(CaseLabel, usize, ElemSet)>,
    pub iterations: u64,
    pub oracle_calls: u64,
}
