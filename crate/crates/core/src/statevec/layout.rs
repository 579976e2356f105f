use serde::Serialize;

use crate::error::{arg, Result};

/// Contiguous run of qubits `[offset, offset + width)`. Qubit 0 is the
/// least-significant bit of a basis index, so a segment reads as an
/// unsigned integer with its lowest qubit as bit 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Segment {
    pub offset: usize,
    pub width: usize,
}

impl Segment {
    pub const fn new(offset: usize, width: usize) -> Self {
        Self { offset, width }
    }

    pub const fn end(&self) -> usize {
        self.offset + self.width
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.offset..self.end()
    }

    /// Qubit holding bit `bit` of the segment's value.
    pub fn qubit(&self, bit: usize) -> usize {
        debug_assert!(bit < self.width);
        self.offset + bit
    }

    pub fn mask(&self) -> usize {
        if self.width == 0 {
            0
        } else {
            ((1usize << self.width) - 1) << self.offset
        }
    }

    pub fn extract(&self, index: usize) -> u64 {
        ((index & self.mask()) >> self.offset) as u64
    }

    pub fn place(&self, value: u64) -> usize {
        (value as usize) << self.offset
    }

    pub fn overlaps(&self, other: &Segment) -> bool {
        self.offset < other.end() && other.offset < self.end()
    }
}

/// Named registers of the protocol's working state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Register {
    Index,
    PriceA,
    PriceB,
    Flag,
    Ancilla,
    Counting,
}

impl Register {
    pub const ALL: [Register; 6] = [
        Register::Index,
        Register::PriceA,
        Register::PriceB,
        Register::Flag,
        Register::Ancilla,
        Register::Counting,
    ];
}

/// Which price register sits directly above the index register.
///
/// The party that receives the other's state appends its own price register
/// second, so Bob works on `|i⟩|a_i⟩|b_i⟩` and Alice on `|i⟩|b_i⟩|a_i⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PriceOrder {
    BuyerFirst,
    SellerFirst,
}

/// Segment map for `index | first price | second price | flag | ancilla | counting`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegisterLayout {
    pub index: Segment,
    pub price_a: Segment,
    pub price_b: Segment,
    pub flag: Segment,
    pub ancilla: Segment,
    pub counting: Segment,
}

impl RegisterLayout {
    /// Standard packing with registers laid out from qubit 0 upward.
    pub fn packed(n: usize, d: usize, order: PriceOrder, ancilla: usize, counting: usize) -> Self {
        let index = Segment::new(0, n);
        let first = Segment::new(n, d);
        let second = Segment::new(n + d, d);
        let flag = Segment::new(n + 2 * d, 1);
        let ancilla = Segment::new(flag.end(), ancilla);
        let counting = Segment::new(ancilla.end(), counting);
        let (price_a, price_b) = match order {
            PriceOrder::BuyerFirst => (first, second),
            PriceOrder::SellerFirst => (second, first),
        };
        Self { index, price_a, price_b, flag, ancilla, counting }
    }

    /// Layout from explicit segments; rejects overlaps.
    pub fn from_segments(
        index: Segment,
        price_a: Segment,
        price_b: Segment,
        flag: Segment,
        ancilla: Segment,
        counting: Segment,
    ) -> Result<Self> {
        let layout = Self { index, price_a, price_b, flag, ancilla, counting };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        let segs: Vec<(Register, Segment)> =
            Register::ALL.iter().map(|&r| (r, self.segment(r))).collect();
        for (i, (ra, a)) in segs.iter().enumerate() {
            for (rb, b) in &segs[i + 1..] {
                if !a.is_empty() && !b.is_empty() && a.overlaps(b) {
                    return arg(format!("registers {ra:?} and {rb:?} overlap"));
                }
            }
        }
        if self.flag.width > 1 {
            return arg("flag register must be a single qubit");
        }
        if self.price_a.width != self.price_b.width {
            return arg("price registers must have equal width");
        }
        Ok(())
    }

    pub fn segment(&self, reg: Register) -> Segment {
        match reg {
            Register::Index => self.index,
            Register::PriceA => self.price_a,
            Register::PriceB => self.price_b,
            Register::Flag => self.flag,
            Register::Ancilla => self.ancilla,
            Register::Counting => self.counting,
        }
    }

    pub fn n(&self) -> usize {
        self.index.width
    }

    pub fn d(&self) -> usize {
        self.price_a.width
    }

    pub fn flag_qubit(&self) -> usize {
        self.flag.offset
    }

    /// Qubits spanned by every non-empty register.
    pub fn total_qubits(&self) -> usize {
        Register::ALL.iter().map(|&r| self.segment(r)).filter(|s| !s.is_empty()).map(|s| s.end()).max().unwrap_or(0)
    }

    /// Qubits excluding the counting register.
    pub fn system_qubits(&self) -> usize {
        Register::ALL
            .iter()
            .filter(|&&r| r != Register::Counting)
            .map(|&r| self.segment(r))
            .filter(|s| !s.is_empty())
            .map(|s| s.end())
            .max()
            .unwrap_or(0)
    }

    /// Basis index with the given register contents and everything else zero.
    pub fn basis_index(&self, values: &[(Register, u64)]) -> usize {
        values.iter().fold(0, |acc, &(r, v)| acc | self.segment(r).place(v))
    }
}

/// `⌈log₂(x)⌉` for `x ≥ 1`.
pub fn ceil_log2(x: u64) -> usize {
    assert!(x >= 1, "ceil_log2 of zero");
    (u64::BITS - (x - 1).leading_zeros()) as usize
}
