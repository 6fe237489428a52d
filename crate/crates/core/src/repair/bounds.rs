//! Cut-set lower bound and the per-construction upper bounds on `b`.

use std::fmt;

use num_rational::Ratio;

use crate::constructions::{Layout, Mode};
use crate::rs_code::NodeId;

/// Which upper bound applies to a failed node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCase {
    /// `b < (n̄+1)l/r̄` for the `r̄`-ary layout.
    RaryLayout,
    /// Multi-base case (i), `w ∈ [1, n'−3]`.
    CaseI,
    /// Case (i) formula applied at `w = 0`, which the stated range omits.
    CaseIExtended,
    /// Multi-base case (ii), `w = n'−2`.
    CaseII,
    /// Multi-base case (iii), `w = n'−1`.
    CaseIII,
    /// `m ∤ n̄`: the case formula is reported but not enforced.
    Informational(InfoCase),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfoCase {
    I,
    II,
    III,
}

impl fmt::Display for BoundCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundCase::RaryLayout => "rary",
            BoundCase::CaseI => "i",
            BoundCase::CaseIExtended => "i-ext",
            BoundCase::CaseII => "ii",
            BoundCase::CaseIII => "iii",
            BoundCase::Informational(InfoCase::I) => "info-i",
            BoundCase::Informational(InfoCase::II) => "info-ii",
            BoundCase::Informational(InfoCase::III) => "info-iii",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundSet {
    /// `(n̄−1)l/r̄` with the code's true `r̄`.
    pub b_min: Ratio<u64>,
    /// `(n̄−1)l/r̄'` in Cor7 mode.
    pub b_min_eff: Option<Ratio<u64>>,
    /// Strict upper bound that `b` must stay below, when one applies.
    pub upper: Option<Ratio<u64>>,
    /// Case-formula value reported without being enforced.
    pub informational_upper: Option<Ratio<u64>>,
    pub case: BoundCase,
}

impl BoundSet {
    /// The upper value to display, enforced or not.
    pub fn shown_upper(&self) -> Option<Ratio<u64>> {
        self.upper.or(self.informational_upper)
    }

    pub fn lower_ok(&self, b: u64) -> bool {
        Ratio::from_integer(b) >= self.b_min
    }

    pub fn upper_ok(&self, b: u64) -> Option<bool> {
        self.upper.map(|u| Ratio::from_integer(b) < u)
    }
}

fn multi_base_upper(layout: &Layout, case: InfoCase) -> Ratio<u64> {
    let n_bar = layout.n_bar as u64;
    let r = layout.r_bar_eff;
    let m = layout.m as u64;
    let l = layout.l as u64;
    let numerator = match case {
        InfoCase::I => (n_bar - 1) + 3 * r + 3 * m + 1,
        InfoCase::II => (n_bar - 1) + (m + 3) * r + 4,
        InfoCase::III => (n_bar - 1) + (m + 1) * r + 2,
    };
    Ratio::new(numerator * l, r)
}

pub fn bounds(layout: &Layout, failed: NodeId) -> BoundSet {
    let n_bar = layout.n_bar as u64;
    let l = layout.l as u64;
    let b_min = Ratio::new((n_bar - 1) * l, layout.r_bar);
    let b_min_eff =
        (layout.mode == Mode::Cor7).then(|| Ratio::new((n_bar - 1) * l, layout.r_bar_eff));
    if !layout.is_multi_base() {
        return BoundSet {
            b_min,
            b_min_eff,
            upper: Some(Ratio::new((n_bar + 1) * l, layout.r_bar_eff)),
            informational_upper: None,
            case: BoundCase::RaryLayout,
        };
    }
    let (w, _) = layout.rack_label(failed.rack);
    let n_prime = layout.n_prime;
    let info = if w + 1 >= n_prime {
        InfoCase::III
    } else if w + 2 == n_prime {
        InfoCase::II
    } else {
        InfoCase::I
    };
    let value = multi_base_upper(layout, info);
    if layout.h != 0 {
        return BoundSet {
            b_min,
            b_min_eff,
            upper: None,
            informational_upper: Some(value),
            case: BoundCase::Informational(info),
        };
    }
    let case = match info {
        InfoCase::I if w == 0 => BoundCase::CaseIExtended,
        InfoCase::I => BoundCase::CaseI,
        InfoCase::II => BoundCase::CaseII,
        InfoCase::III => BoundCase::CaseIII,
    };
    BoundSet { b_min, b_min_eff, upper: Some(value), informational_upper: None, case }
}
