//! Sample programs used by the examples and tests.

pub const DFT: &str = include_str!("dft.qcl");
/// `cond qufunct inc(qureg x)`
pub const INC: &str = include_str!("inc.qcl");
pub const PARITY: &str = include_str!("parity.qcl");
/// The explicit conditional increment `cinc(x, e)`.
pub const CINC: &str = include_str!("cinc.qcl");
pub const DEMUX: &str = include_str!("demux.qcl");
/// `sparity(x, y, s)`, a parity qufunct with a scratch register.
pub const SCRATCH_PARITY: &str = include_str!("scratch_parity.qcl");
/// `procedure nonzero(int n)`, a measure-and-retry loop.
pub const RETRY: &str = include_str!("retry.qcl");

pub const ALL: [(&str, &str); 7] = [
    ("dft", DFT),
    ("inc", INC),
    ("parity", PARITY),
    ("cinc", CINC),
    ("demux", DEMUX),
    ("sparity", SCRATCH_PARITY),
    ("retry", RETRY),
];
