//! The concrete track machines.

use super::phase::{Phase, PhaseSpace};
use super::product::{pack, unpack, Core, TrackMachine};
use super::window::{rewrite_a, rewrite_b, rewrite_c};

fn is_first(at: Phase) -> bool {
    at == Phase::At { index: 1, periodic: false }
}

/// Digit constraints of a representation, given whether the previous digit
/// was maximal. Returns whether this one is.
fn valid_step(space: &PhaseSpace, at: Phase, prev_max: bool, d: u32) -> Option<bool> {
    let a = space.quotient(at, 0);
    let ok = d <= a && (!prev_max || d == 0) && (!is_first(at) || d < a);
    ok.then_some(d == a)
}

/// Ostrowski representations with leading zeros.
pub struct ValidRep<'a> {
    pub space: &'a PhaseSpace,
}

impl TrackMachine for ValidRep<'_> {
    fn arity(&self) -> usize {
        1
    }

    fn initial(&self, _top: Phase) -> Vec<Core> {
        vec![0]
    }

    fn step(&self, at: Phase, core: Core, letter: &[u32], out: &mut Vec<Core>) {
        if let Some(max) = valid_step(self.space, at, core == 1, letter[0]) {
            out.push(Core::from(max));
        }
    }

    fn accepting(&self, _core: Core) -> bool {
        true
    }

    fn describe(&self, core: Core) -> String {
        format!("max={core}")
    }
}

/// Digits bounded by the partial quotient, optionally strictly at position 1.
pub struct QuotientBound<'a> {
    pub space: &'a PhaseSpace,
    pub strict_first: bool,
}

impl TrackMachine for QuotientBound<'_> {
    fn arity(&self) -> usize {
        1
    }

    fn initial(&self, _top: Phase) -> Vec<Core> {
        vec![0]
    }

    fn step(&self, at: Phase, _core: Core, letter: &[u32], out: &mut Vec<Core>) {
        let a = self.space.quotient(at, 0);
        if letter[0] <= a && !(self.strict_first && is_first(at) && letter[0] == a) {
            out.push(0);
        }
    }

    fn accepting(&self, _core: Core) -> bool {
        true
    }

    fn describe(&self, _core: Core) -> String {
        String::new()
    }
}

/// `(x, y, u)` with `x`, `y` representations and `u` their digitwise sum.
pub struct DigitSum<'a> {
    pub space: &'a PhaseSpace,
}

impl TrackMachine for DigitSum<'_> {
    fn arity(&self) -> usize {
        3
    }

    fn initial(&self, _top: Phase) -> Vec<Core> {
        vec![0]
    }

    fn step(&self, at: Phase, core: Core, letter: &[u32], out: &mut Vec<Core>) {
        let [x, y, u] = [letter[0], letter[1], letter[2]];
        if x + y != u {
            return;
        }
        let (Some(mx), Some(my)) = (valid_step(self.space, at, core & 1 == 1, x), valid_step(self.space, at, core & 2 == 2, y)) else {
            return;
        };
        out.push(Core::from(mx) | Core::from(my) << 1);
    }

    fn accepting(&self, _core: Core) -> bool {
        true
    }

    fn describe(&self, core: Core) -> String {
        format!("max={:02b}", core)
    }
}

/// `(x, x)` for representations `x`.
pub struct Equal<'a> {
    pub space: &'a PhaseSpace,
}

impl TrackMachine for Equal<'_> {
    fn arity(&self) -> usize {
        2
    }

    fn initial(&self, _top: Phase) -> Vec<Core> {
        vec![0]
    }

    fn step(&self, at: Phase, core: Core, letter: &[u32], out: &mut Vec<Core>) {
        if letter[0] == letter[1] {
            if let Some(max) = valid_step(self.space, at, core == 1, letter[0]) {
                out.push(Core::from(max));
            }
        }
    }

    fn accepting(&self, _core: Core) -> bool {
        true
    }

    fn describe(&self, core: Core) -> String {
        format!("max={core}")
    }
}

/// `(x, y)` with `x < y`. Equal-length representations compare like their
/// digit strings, most significant digit first.
pub struct Less<'a> {
    pub space: &'a PhaseSpace,
}

const LESS_DECIDED: Core = 4;

impl TrackMachine for Less<'_> {
    fn arity(&self) -> usize {
        2
    }

    fn initial(&self, _top: Phase) -> Vec<Core> {
        vec![0]
    }

    fn step(&self, at: Phase, core: Core, letter: &[u32], out: &mut Vec<Core>) {
        let [x, y] = [letter[0], letter[1]];
        let decided = core & LESS_DECIDED != 0;
        if !decided && x > y {
            return;
        }
        let (Some(mx), Some(my)) = (valid_step(self.space, at, core & 1 == 1, x), valid_step(self.space, at, core & 2 == 2, y)) else {
            return;
        };
        let decided = decided || x < y;
        out.push(Core::from(mx) | Core::from(my) << 1 | if decided { LESS_DECIDED } else { 0 });
    }

    fn accepting(&self, core: Core) -> bool {
        core & LESS_DECIDED != 0
    }

    fn describe(&self, core: Core) -> String {
        format!("max={:02b} lt={}", core & 3, u8::from(core & LESS_DECIDED != 0))
    }
}

/// `(x, V(x))`: `y` is the representation of the least `q_k` with a nonzero
/// coefficient in `x`, and of 1 when `x = 0`.
pub struct LeastTerm<'a> {
    pub space: &'a PhaseSpace,
}

// Core layout: bit 0 previous x digit maximal, bit 1 x nonzero so far,
// bits 2-3 mode.
const MODE_OPEN: Core = 0;
const MODE_MARKED: Core = 1;
const MODE_ZERO: Core = 2;

impl TrackMachine for LeastTerm<'_> {
    fn arity(&self) -> usize {
        2
    }

    fn initial(&self, _top: Phase) -> Vec<Core> {
        vec![0]
    }

    fn step(&self, at: Phase, core: Core, letter: &[u32], out: &mut Vec<Core>) {
        let [x, y] = [letter[0], letter[1]];
        let Some(max) = valid_step(self.space, at, core & 1 == 1, x) else {
            return;
        };
        let nonzero = core & 2 != 0 || x != 0;
        let mode = core >> 2;
        // the one in V(0) sits at position 1 unless a_1 = 1
        let zero_target = if self.space.params().a(1) >= 2 { 1 } else { 2 };
        let next_mode = match (mode, y) {
            (MODE_OPEN, 0) => Some(MODE_OPEN),
            (MODE_OPEN, 1) if x != 0 => Some(MODE_MARKED),
            (MODE_OPEN, 1) if !nonzero && at == (Phase::At { index: zero_target, periodic: false }) => Some(MODE_ZERO),
            (MODE_MARKED | MODE_ZERO, 0) if x == 0 => Some(mode),
            _ => None,
        };
        if let Some(mode) = next_mode {
            out.push(Core::from(max) | Core::from(nonzero) << 1 | mode << 2);
        }
    }

    fn accepting(&self, core: Core) -> bool {
        core >> 2 != MODE_OPEN
    }

    fn describe(&self, core: Core) -> String {
        format!("max={} nz={} mode={}", core & 1, (core >> 1) & 1, core >> 2)
    }
}

/// Input and output of the width-four pass run on the input preceded by a
/// zero. The pending window holds the three positions above the letter being
/// read and the buffer the three output digits still to be checked.
pub struct FirstPass<'a> {
    pub space: &'a PhaseSpace,
    pub bound: u32,
}

impl TrackMachine for FirstPass<'_> {
    fn arity(&self) -> usize {
        2
    }

    fn initial(&self, _top: Phase) -> Vec<Core> {
        vec![0]
    }

    fn step(&self, at: Phase, core: Core, letter: &[u32], out: &mut Vec<Core>) {
        let [v1, v2, v3, w1, w2, w3] = unpack::<6>(core);
        let [x, y] = [letter[0], letter[1]];
        // the step whose window ends at this position starts three above it
        let q = |d| self.space.quotient(at, d);
        let Some([o, n1, n2, n3]) = rewrite_a([q(3), q(2), q(1), q(0)], [v1, v2, v3, x], self.bound) else {
            return;
        };
        if o == w1 {
            out.push(pack(&[n1, n2, n3, w2, w3, y]));
        }
    }

    fn accepting(&self, core: Core) -> bool {
        let [v1, v2, v3, w1, w2, w3] = unpack::<6>(core);
        let a = |k| self.space.params().a(k);
        rewrite_b([a(3), a(2), a(1)], [v1, v2, v3], self.bound) == Some([w1, w2, w3])
    }

    fn describe(&self, core: Core) -> String {
        let [v1, v2, v3, w1, w2, w3] = unpack::<6>(core);
        format!("v=({v1},{v2},{v3}) w=({w1},{w2},{w3})")
    }
}

/// Input and output of the right-to-left pass run on the input preceded by a
/// zero. Reading from the top, the machine guesses the pair each step
/// receives from the step below it (`c`) and keeps the two output digits
/// already fixed but not yet read (`p`).
pub struct SecondPass<'a> {
    pub space: &'a PhaseSpace,
    pub bound: u32,
}

impl TrackMachine for SecondPass<'_> {
    fn arity(&self) -> usize {
        2
    }

    fn initial(&self, top: Phase) -> Vec<Core> {
        let mut out = Vec::new();
        match top {
            Phase::End => out.push(0),
            Phase::At { index: 1, periodic: false } => {
                out.extend((0..=self.bound).map(|g| pack(&[g, 0, g, 0])));
            }
            _ => {
                // the step just above the top letter sees a zero on its left
                let q = |d| self.space.quotient(top, d);
                for c0 in 0..=self.bound {
                    for c1 in 0..=self.bound {
                        let [o0, o1, o2] = rewrite_c([q(1), q(0), q(-1)], [0, c0, c1]);
                        if o0 == 0 {
                            out.push(pack(&[c0, c1, o1, o2]));
                        }
                    }
                }
            }
        }
        out
    }

    fn step(&self, at: Phase, core: Core, letter: &[u32], out: &mut Vec<Core>) {
        let [c0, c1, p0, p1] = unpack::<4>(core);
        let [x, y] = [letter[0], letter[1]];
        if y != p0 {
            return;
        }
        match at {
            Phase::At { index: 1 | 2, periodic: false } => {
                if x != c0 {
                    return;
                }
                if at == (Phase::At { index: 2, periodic: false }) {
                    out.push(pack(&[c1, 0, p1, 0]));
                } else {
                    out.push(0);
                }
            }
            _ => {
                let q = |d| self.space.quotient(at, d);
                let u = [q(0), q(-1), q(-2)];
                for g0 in 0..=self.bound {
                    for g1 in 0..=self.bound {
                        let [r0, r1, o] = rewrite_c(u, [x, g0, g1]);
                        if r0 == c0 && r1 == c1 && o <= self.bound {
                            out.push(pack(&[g0, g1, p1, o]));
                        }
                    }
                }
            }
        }
    }

    fn accepting(&self, _core: Core) -> bool {
        true
    }

    fn describe(&self, core: Core) -> String {
        let [c0, c1, p0, p1] = unpack::<4>(core);
        format!("c=({c0},{c1}) p=({p0},{p1})")
    }
}

/// Input and output of the left-to-right width-three pass run on the input
/// preceded by a zero.
pub struct ThirdPass<'a> {
    pub space: &'a PhaseSpace,
}

impl TrackMachine for ThirdPass<'_> {
    fn arity(&self) -> usize {
        2
    }

    fn initial(&self, _top: Phase) -> Vec<Core> {
        vec![0]
    }

    fn step(&self, at: Phase, core: Core, letter: &[u32], out: &mut Vec<Core>) {
        let [v1, v2, w1, w2] = unpack::<4>(core);
        let [x, y] = [letter[0], letter[1]];
        let q = |d| self.space.quotient(at, d);
        let [o, n1, n2] = rewrite_c([q(2), q(1), q(0)], [v1, v2, x]);
        if o == w1 {
            out.push(pack(&[n1, n2, w2, y]));
        }
    }

    fn accepting(&self, core: Core) -> bool {
        let [v1, v2, w1, w2] = unpack::<4>(core);
        [v1, v2] == [w1, w2]
    }

    fn describe(&self, core: Core) -> String {
        let [v1, v2, w1, w2] = unpack::<4>(core);
        format!("v=({v1},{v2}) w=({w1},{w2})")
    }
}
