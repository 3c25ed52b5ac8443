//! Two-copy deamortized rebuilding.
//!
//! The active copy counts its updates in `c`, starting at `8m/32`. At
//! `9m/32` the current state is snapshotted and a second copy is built in
//! slices over the next `m/32` updates while edits queue up. Afterwards
//! every update is applied to the active copy and up to four queued ones
//! to the new copy; once the queue drains both copies receive every
//! update until the new copy has seen `8m'/32` of them, and it becomes
//! active.

use std::collections::VecDeque;

use crate::error::Result;

/// Construction split into bounded slices of work.
pub trait IncrementalBuild {
    type Output;
    /// Work units left.
    fn remaining(&self) -> usize;
    /// Performs up to `work` units.
    fn advance(&mut self, work: usize);
    /// Completes whatever is left.
    fn finish(self) -> Self::Output;
}

/// A structure that can be rebuilt from its own current state.
pub trait Rebuild: Sized {
    type Edit: Clone;
    type Report;
    type Builder: IncrementalBuild<Output = Self>;

    fn snapshot(&self) -> Self::Builder;
    fn apply(&mut self, edit: &Self::Edit) -> Result<Self::Report>;
    /// The length `m` the schedule's counters are measured against.
    fn scale(&self) -> usize;
}

/// A builder whose work was done eagerly.
pub struct Ready<T>(pub T);

impl<T> IncrementalBuild for Ready<T> {
    type Output = T;

    fn remaining(&self) -> usize {
        0
    }

    fn advance(&mut self, _work: usize) {}

    fn finish(self) -> T {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchedulePhase {
    Idle,
    Building,
    CatchUp,
    Mirror,
}

enum Phase<T: Rebuild> {
    Idle,
    Building { builder: T::Builder, quota: usize },
    CatchUp { shadow: T },
    Mirror { shadow: T },
}

pub struct RebuildScheduler<T: Rebuild> {
    active: T,
    phase: Phase<T>,
    c_active: usize,
    m_active: usize,
    c_shadow: usize,
    m_shadow: usize,
    queue: VecDeque<T::Edit>,
    swaps: usize,
    max_queue: usize,
}

/// `32 c >= k m`, the schedule's thresholds without rounding.
fn reached(c: usize, k: usize, m: usize) -> bool {
    32 * c >= k * m
}

impl<T: Rebuild> RebuildScheduler<T> {
    pub fn new(active: T) -> Self {
        let m = active.scale();
        RebuildScheduler {
            active,
            phase: Phase::Idle,
            c_active: 8 * m / 32,
            m_active: m,
            c_shadow: 0,
            m_shadow: 0,
            queue: VecDeque::new(),
            swaps: 0,
            max_queue: 0,
        }
    }

    pub fn active(&self) -> &T {
        &self.active
    }

    /// The copy under construction or catching up, if any.
    pub fn shadow(&self) -> Option<&T> {
        match &self.phase {
            Phase::CatchUp { shadow } | Phase::Mirror { shadow } => Some(shadow),
            _ => None,
        }
    }

    pub fn phase(&self) -> SchedulePhase {
        match self.phase {
            Phase::Idle => SchedulePhase::Idle,
            Phase::Building { .. } => SchedulePhase::Building,
            Phase::CatchUp { .. } => SchedulePhase::CatchUp,
            Phase::Mirror { .. } => SchedulePhase::Mirror,
        }
    }

    pub fn swaps(&self) -> usize {
        self.swaps
    }

    /// Updates seen by the active copy since its snapshot.
    pub fn active_counter(&self) -> usize {
        self.c_active
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    pub fn max_queue_len(&self) -> usize {
        self.max_queue
    }

    /// Applies `edit` to the active copy and advances the schedule by one
    /// step. The report comes from the active copy.
    pub fn step(&mut self, edit: T::Edit) -> Result<T::Report> {
        let report = self.active.apply(&edit)?;
        self.c_active += 1;
        let phase = std::mem::replace(&mut self.phase, Phase::Idle);
        self.phase = match phase {
            Phase::Idle => {
                if reached(self.c_active, 9, self.m_active) {
                    let builder = self.active.snapshot();
                    self.m_shadow = self.active.scale();
                    self.c_shadow = 0;
                    self.queue.clear();
                    let steps = self.m_active.div_ceil(32).max(1);
                    let quota = builder.remaining().div_ceil(steps);
                    Phase::Building { builder, quota }
                } else {
                    Phase::Idle
                }
            }
            Phase::Building { mut builder, quota } => {
                self.queue.push_back(edit);
                builder.advance(quota);
                if reached(self.c_active, 10, self.m_active) {
                    Phase::CatchUp { shadow: builder.finish() }
                } else {
                    Phase::Building { builder, quota }
                }
            }
            Phase::CatchUp { mut shadow } => {
                self.queue.push_back(edit);
                for _ in 0..4 {
                    let Some(e) = self.queue.pop_front() else { break };
                    shadow.apply(&e)?;
                    self.c_shadow += 1;
                }
                if self.queue.is_empty() {
                    Phase::Mirror { shadow }
                } else {
                    Phase::CatchUp { shadow }
                }
            }
            Phase::Mirror { mut shadow } => {
                shadow.apply(&edit)?;
                self.c_shadow += 1;
                Phase::Mirror { shadow }
            }
        };
        self.max_queue = self.max_queue.max(self.queue.len());
        if matches!(self.phase, Phase::Mirror { .. }) && reached(self.c_shadow, 8, self.m_shadow) {
            let Phase::Mirror { shadow } = std::mem::replace(&mut self.phase, Phase::Idle) else { unreachable!() };
            self.active = shadow;
            self.c_active = self.c_shadow;
            self.m_active = self.m_shadow;
            self.swaps += 1;
        }
        Ok(report)
    }
}
