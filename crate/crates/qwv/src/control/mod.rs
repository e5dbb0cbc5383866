//! Driving fields: analytic sin² pulse sequences, the closed-loop
//! local-control law, the composed pump–dump "four-state" schedule, and the
//! [`FieldSource`] trait every variant implements.

mod lct;
mod pulses;
mod schedule;
mod source;

pub use lct::{lct_field, seed_initial_state, ControlPolicy, SeededState};
pub use pulses::{pi_pulse_amplitude, PulseSequence, PulseSpec};
pub use schedule::{four_state_schedule, FourStateSchedule, ScheduleOptions};
pub use source::{FieldSource, NoField, ReplayField};
