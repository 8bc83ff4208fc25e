/// Triangular round robin: stage `t` gives one step to each of tasks `0..=t`.
///
/// Task `j`'s `s`-th own step (1-based) falls in stage `j + s - 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Schedule {
    stage: u64,
    pos: u64,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(stage: u64, pos: u64) -> Self {
        Schedule { stage, pos }
    }

    pub fn stage(&self) -> u64 {
        self.stage
    }

    pub fn pos(&self) -> u64 {
        self.pos
    }

    /// The task owed the next step.
    pub fn current(&self) -> u64 {
        self.pos
    }

    pub fn advance(&mut self) {
        if self.pos == self.stage {
            self.stage += 1;
            self.pos = 0;
        } else {
            self.pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn visits_prefix_each_stage() {
        let mut s = Schedule::new();
        let mut seen = Vec::new();
        while s.stage() < 3 {
            seen.push((s.stage(), s.current()));
            s.advance();
        }
        assert_eq!(seen, vec![(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]);
    }
}
