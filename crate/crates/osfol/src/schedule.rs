//! Drivers for the report procedure: the sequential reference order, a
//! seeded permutation of it, and a threaded scheduler.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use osfol_core::network::AgentNetwork;
use osfol_core::report::{ReportConfig, ReportError, ReportOutcome, ReportSession};
use osfol_core::saturation::Interrupt;
use osfol_core::syntax::Formula;

/// Fires once the wall clock passes the deadline.
#[derive(Debug, Clone, Copy)]
pub struct Deadline(pub Option<Instant>);

impl Interrupt for Deadline {
    fn interrupted(&self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Schedule {
    /// Shuffles agents of equal distance; `None` keeps id order.
    pub seed: Option<u64>,
    /// Runs agents of equal distance on separate threads.
    pub concurrent: bool,
}

/// Runs the report procedure. Messages of one distance level are
/// delivered in the (possibly permuted) agent order before the next level
/// starts.
pub fn run_report(
    net: &AgentNetwork,
    q: &Formula,
    config: ReportConfig,
    schedule: Schedule,
    deadline: Deadline,
) -> Result<ReportOutcome, ReportError> {
    let mut session = ReportSession::new(net, q, config)?;
    let mut rng = schedule.seed.map(ChaCha8Rng::seed_from_u64);
    for mut level in session.schedule() {
        if let Some(rng) = rng.as_mut() {
            level.shuffle(rng);
        }
        let runs = if schedule.concurrent && level.len() > 1 {
            let s = &session;
            std::thread::scope(|scope| {
                let handles: Vec<_> =
                    level.iter().map(|a| scope.spawn(move || s.process_agent(a, &deadline))).collect();
                handles.into_iter().map(|h| h.join().expect("agent thread panicked")).collect::<Vec<_>>()
            })
        } else {
            level.iter().map(|a| session.process_agent(a, &deadline)).collect()
        };
        for run in runs {
            if let Err(e) = session.deliver(run) {
                return Ok(session.fail(e));
            }
        }
    }
    Ok(session.finish(&deadline))
}
