use serde::{Deserialize, Serialize};

/// Bond taxonomy of the fast-diagonals model; a partition of all bonds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum BondType {
    NormalZigzag,
    SinglyTerminal,
    DoublyTerminal,
    Meeting,
    Intersection,
    EntryExit,
    IntersectionAdjacent,
    Skimming,
    NormalBoundary,
    HvOnly,
    Backroad,
}

impl BondType {
    pub const ALL: [BondType; 11] = [
        BondType::NormalZigzag,
        BondType::SinglyTerminal,
        BondType::DoublyTerminal,
        BondType::Meeting,
        BondType::Intersection,
        BondType::EntryExit,
        BondType::IntersectionAdjacent,
        BondType::Skimming,
        BondType::NormalBoundary,
        BondType::HvOnly,
        BondType::Backroad,
    ];

    pub fn from_u8(v: u8) -> BondType {
        BondType::ALL[v as usize]
    }

    pub fn label(self) -> &'static str {
        match self {
            BondType::NormalZigzag => "normal-zigzag",
            BondType::SinglyTerminal => "singly-terminal",
            BondType::DoublyTerminal => "doubly-terminal",
            BondType::Meeting => "meeting",
            BondType::Intersection => "intersection",
            BondType::EntryExit => "entry-exit",
            BondType::IntersectionAdjacent => "intersection-adjacent",
            BondType::Skimming => "skimming",
            BondType::NormalBoundary => "normal-boundary",
            BondType::HvOnly => "hv-only",
            BondType::Backroad => "backroad",
        }
    }

    pub fn is_zigzag(self) -> bool {
        (self as u8) <= BondType::Intersection as u8
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, BondType::EntryExit | BondType::IntersectionAdjacent | BondType::Skimming | BondType::NormalBoundary)
    }

    pub fn is_semislow(self) -> bool {
        matches!(self, BondType::EntryExit | BondType::IntersectionAdjacent)
    }

    /// Compensated core time of a non-slow bond, in tenths.
    pub fn core_tenths(self, hv: bool) -> u8 {
        match self {
            BondType::Intersection => 5,
            BondType::NormalZigzag => 7,
            BondType::Meeting | BondType::SinglyTerminal => 8,
            BondType::DoublyTerminal | BondType::HvOnly => 9,
            BondType::Skimming => {
                if hv {
                    9
                } else {
                    10
                }
            }
            BondType::Backroad | BondType::NormalBoundary => 10,
            BondType::EntryExit | BondType::IntersectionAdjacent => 11,
        }
    }

    /// Raw core time of a non-slow bond, in tenths.
    pub fn raw_tenths(self, hv: bool) -> u8 {
        if self.is_zigzag() {
            7
        } else if hv {
            9
        } else {
            10
        }
    }

    /// Fill colour used by the SVG layer.
    pub fn colour(self) -> &'static str {
        match self {
            BondType::NormalZigzag => "#1f77b4",
            BondType::SinglyTerminal => "#17becf",
            BondType::DoublyTerminal => "#9edae5",
            BondType::Meeting => "#ff7f0e",
            BondType::Intersection => "#d62728",
            BondType::EntryExit => "#9467bd",
            BondType::IntersectionAdjacent => "#c5b0d5",
            BondType::Skimming => "#2ca02c",
            BondType::NormalBoundary => "#98df8a",
            BondType::HvOnly => "#7f7f7f",
            BondType::Backroad => "#e8e8e8",
        }
    }
}

pub const SLOW_CORE_TENTHS: u8 = 13;
pub const SLOW_RAW_TENTHS: u8 = 12;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_and_values() {
        for (i, t) in BondType::ALL.iter().enumerate() {
            assert_eq!(BondType::from_u8(i as u8), *t);
            let kinds = t.is_zigzag() as u8 + t.is_boundary() as u8 + matches!(t, BondType::HvOnly | BondType::Backroad) as u8;
            assert_eq!(kinds, 1, "{t:?}");
            for hv in [false, true] {
                assert!([5, 7, 8, 9, 10, 11].contains(&t.core_tenths(hv)));
            }
        }
        assert_eq!(BondType::Intersection.core_tenths(true), 5);
        assert_eq!(BondType::EntryExit.core_tenths(false), 11);
        assert_eq!(BondType::Backroad.core_tenths(false), 10);
    }
}
