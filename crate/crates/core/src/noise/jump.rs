//! Event-driven point-process noises.
//!
//! Events are generated once in continuous time on `[t0, tf]` and then read off at
//! the mesh nodes, so every mesh resolution sees the same realization. Node values
//! are right-continuous: an event at exactly `t_j` is visible at node `j`.

use crate::dist::DistributionSpec;
use crate::error::Result;
use crate::mesh::{SamplePath, TimeMesh};
use crate::rng::RngStream;

/// Event times with the process value just after each event.
struct Events {
    times: Vec<f64>,
    marks: Vec<f64>,
}

impl Events {
    /// Evaluates a right-continuous step path at the mesh nodes. `between` maps
    /// `(last_event_time, last_mark, t)` to the value at `t`; before the first event
    /// `initial(t)` is used.
    fn read_at_nodes(
        &self,
        mesh: &TimeMesh,
        initial: impl Fn(f64) -> f64,
        between: impl Fn(f64, f64, f64) -> f64,
    ) -> SamplePath {
        let mut values = Vec::with_capacity(mesh.len());
        let mut k = 0;
        for t in mesh.nodes() {
            while k < self.times.len() && self.times[k] <= t {
                k += 1;
            }
            values.push(if k == 0 {
                initial(t)
            } else {
                between(self.times[k - 1], self.marks[k - 1], t)
            });
        }
        SamplePath::from_parts_unchecked(*mesh, 1, values)
    }
}

/// Homogeneous Poisson event times on `(t0, tf]`, each followed by a draw from `law`.
fn poisson_events(rate: f64, law: &DistributionSpec, mesh: &TimeMesh, rng: &mut RngStream) -> Result<Events> {
    let mut times = Vec::new();
    let mut marks = Vec::new();
    let mut t = mesh.t0() + rng.exponential(1.0 / rate);
    while t <= mesh.tf() {
        times.push(t);
        marks.push(law.sample(rng)?);
        t += rng.exponential(1.0 / rate);
    }
    Ok(Events { times, marks })
}

pub(super) fn compound_poisson(
    rate: f64,
    jump: &DistributionSpec,
    mesh: &TimeMesh,
    rng: &mut RngStream,
) -> Result<SamplePath> {
    let mut events = poisson_events(rate, jump, mesh, rng)?;
    let mut acc = 0.0;
    for m in &mut events.marks {
        acc += *m;
        *m = acc;
    }
    Ok(events.read_at_nodes(mesh, |_| 0.0, |_, s, _| s))
}

pub(super) fn poisson_step(
    rate: f64,
    step: &DistributionSpec,
    mesh: &TimeMesh,
    rng: &mut RngStream,
) -> Result<SamplePath> {
    let events = poisson_events(rate, step, mesh, rng)?;
    Ok(events.read_at_nodes(mesh, |_| 0.0, |_, s, _| s))
}

/// Intensity of a self-exciting process with exponential kernel,
/// `lambda_t = a + (lambda_tau - a) exp(-delta (t - tau))` after the last event `tau`,
/// jumping by a draw from `jump` at each event. Events come from Ogata thinning.
pub(super) fn hawkes(
    lambda0: f64,
    base: f64,
    decay: f64,
    jump: &DistributionSpec,
    mesh: &TimeMesh,
    rng: &mut RngStream,
) -> Result<SamplePath> {
    let relax = |from: f64, level: f64, t: f64| base + (level - base) * (-decay * (t - from)).exp();
    let t0 = mesh.t0();
    let mut times = Vec::new();
    let mut marks = Vec::new();
    let (mut anchor_t, mut anchor_level) = (t0, lambda0);
    let mut t = t0;
    loop {
        // between events the intensity moves monotonically toward `base`
        let current = relax(anchor_t, anchor_level, t);
        let bound = current.max(base);
        if bound <= 0.0 {
            break;
        }
        t += rng.exponential(1.0 / bound);
        if t > mesh.tf() {
            break;
        }
        let candidate = relax(anchor_t, anchor_level, t);
        if rng.uniform() * bound <= candidate {
            anchor_level = candidate + jump.sample(rng)?;
            anchor_t = t;
            times.push(t);
            marks.push(anchor_level);
        }
    }
    let events = Events { times, marks };
    Ok(events.read_at_nodes(mesh, |t| relax(t0, lambda0, t), relax))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::make_mesh;

    #[test]
    fn node_on_event_time_reads_post_jump_value() {
        let mesh = make_mesh(0.0, 1.0, 4).unwrap();
        let events = Events {
            times: vec![0.25, 0.6],
            marks: vec![1.0, 3.0],
        };
        let p = events.read_at_nodes(&mesh, |_| 0.0, |_, s, _| s);
        assert_eq!(p.values(), &[0.0, 1.0, 1.0, 3.0, 3.0]);
    }
}
