//! Small numeric helpers shared across modules.

/// Clamps an inverse-trig argument to `[-1, 1]`.
///
/// Arguments may drift past the legal domain by rounding; anything more
/// than 1e-9 outside is a logic error upstream, which debug builds trap.
#[inline]
pub(crate) fn clamp_unit(x: f64) -> f64 {
    debug_assert!(
        (-1.0 - 1e-9..=1.0 + 1e-9).contains(&x),
        "inverse-trig argument {x} far outside [-1, 1]"
    );
    x.clamp(-1.0, 1.0)
}
