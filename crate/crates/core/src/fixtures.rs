//! Small reference structures in the model text format.
//!
//! `SAMPLE` is an eight state structure whose left part (`s`..`s4`) is
//! simulated by its right part (`t`, `t1`, `t2`) up to a relative weight
//! deviation of one half. `SAMPLE_PARAM` is the right part with the edge
//! `t2 -> t1` made parametric.

pub const SAMPLE: &str = "\
states: s s1 s2 s3 s4 t t1 t2
label s a
label s1 a
label s2 a
label s3 b
label s4 b
label t a
label t1 b
label t2 a
trans s 1 s1
trans s 2 s2
trans s1 2 s2
trans s1 1 s3
trans s1 3 s4
trans s2 5 s4
trans t 2 t1
trans t 1 t2
trans t2 2 t2
trans t2 1 t1
";

pub const SAMPLE_LEFT: &str = "\
states: s s1 s2 s3 s4
label s a
label s1 a
label s2 a
label s3 b
label s4 b
trans s 1 s1
trans s 2 s2
trans s1 2 s2
trans s1 1 s3
trans s1 3 s4
trans s2 5 s4
";

pub const SAMPLE_RIGHT: &str = "\
states: t t1 t2
label t a
label t1 b
label t2 a
trans t 2 t1
trans t 1 t2
trans t2 2 t2
trans t2 1 t1
";

pub const SAMPLE_PARAM: &str = "\
states: t t1 t2
params: p
label t a
label t1 b
label t2 a
trans t 2 t1
trans t 1 t2
trans t2 2 t2
trans t2 p t1
";

/// Distance from `s` to `t` for `SAMPLE_LEFT` against `SAMPLE_PARAM`, as a
/// MAX of MINs. Exact for `p ≤ 2`; above that the true distance is capped
/// at 1 by answering `s -1-> s1` with the empty sequence.
pub const SAMPLE_PARAM_EXPR: &str = "\
(max (reldiff 3/2 1)
     (reldiff p 1)
     (min (reldiff p 5) (reldiff (+ p 2) 5) (reldiff (+ p 4) 5))
     (min (reldiff p 3) (reldiff (+ p 2) 3)))";
