//! Published reference values for the benchmark parameter sets.
//!
//! Values are kept as printed so that the number of reported decimals is
//! available for digit-level comparisons.

use num_complex::Complex64;

/// Couplings of the bound-only benchmark.
pub const BOUND_ONLY_U: [f64; 3] = [1.0, -50.0, 2.0];
/// Couplings of the benchmark with bound states and resonances.
pub const RESONANT_U: [f64; 3] = [2.0, -80.0, 120.0];

/// A decimal number as printed, e.g. `"27.878950096074"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Printed(pub &'static str);

impl Printed {
    pub fn value(&self) -> f64 {
        self.0.parse().expect("reference literal")
    }

    /// Number of printed decimals.
    pub fn decimals(&self) -> usize {
        self.0.split_once('.').map_or(0, |(_, frac)| frac.len())
    }

    /// One unit in the last printed digit.
    pub fn last_digit_unit(&self) -> f64 {
        10f64.powi(-(self.decimals() as i32))
    }

    /// `|x − value| ≤ one unit in the last printed digit` (with a small
    /// allowance for binary rounding of the literal).
    pub fn agrees_within_last_digit(&self, x: f64) -> bool {
        (x - self.value()).abs() <= self.last_digit_unit() * (1.0 + 1e-9)
    }

    /// `x` rounded to the printed number of decimals.
    pub fn round_like(&self, x: f64) -> String {
        format!("{:.*}", self.decimals(), x)
    }
}

/// Basis sizes of the convergence table.
pub const TABLE1_SIZES: [usize; 4] = [4, 6, 10, 100];

/// `−ε_m` for levels `m = 0…3` (rows) at each basis size (columns).
pub const TABLE1: [[Printed; 4]; 4] = [
    [
        Printed("27.878950096075"),
        Printed("27.878950096074"),
        Printed("27.878950096074"),
        Printed("27.878950096074"),
    ],
    [
        Printed("14.799140053549"),
        Printed("14.799140053574"),
        Printed("14.799140053574"),
        Printed("14.799140053574"),
    ],
    [
        Printed("5.854540858323"),
        Printed("5.854541479288"),
        Printed("5.854541479288"),
        Printed("5.854541479288"),
    ],
    [
        Printed("0.994844848888"),
        Printed("0.996376819202"),
        Printed("0.996376819225"),
        Printed("0.996376819225"),
    ],
];

/// Basis size of the method comparison.
pub const TABLE2_SIZE: usize = 50;

/// `−ε_m` per method at `N = 50`.
pub struct Table2Row {
    pub pps: Printed,
    pub hd: Printed,
    pub cs: Printed,
}

pub const TABLE2: [Table2Row; 4] = [
    Table2Row {
        pps: Printed("27.878950096074"),
        hd: Printed("27.878950096074"),
        cs: Printed("27.878950096074"),
    },
    Table2Row {
        pps: Printed("14.799140053574"),
        hd: Printed("14.79914005357"),
        cs: Printed("14.799140053574"),
    },
    Table2Row {
        pps: Printed("5.854541479288"),
        hd: Printed("5.85454148"),
        cs: Printed("5.854541479288"),
    },
    Table2Row {
        pps: Printed("0.996376819225"),
        hd: Printed("0.9967"),
        cs: Printed("0.996376819"),
    },
];

/// A resonance as printed, `re − i·im_abs`, with the `ρ` used for it.
#[derive(Debug, Clone, Copy)]
pub struct PrintedResonance {
    pub re: Printed,
    pub im_abs: Printed,
    pub rho: f64,
}

impl PrintedResonance {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), -self.im_abs.value())
    }
}

/// One angular momentum of the resonance table.
#[derive(Debug, Clone, Copy)]
pub struct Table3Entry {
    pub ell: u32,
    pub bound: &'static [Printed],
    pub bound_rho: f64,
    pub resonances: &'static [PrintedResonance],
}

/// Scaling angle used for resonances; bound states use zero.
pub const TABLE3_THETA: f64 = 0.8;
pub const TABLE3_SIZE: usize = 50;

const fn res(re: &'static str, im_abs: &'static str, rho: f64) -> PrintedResonance {
    PrintedResonance {
        re: Printed(re),
        im_abs: Printed(im_abs),
        rho,
    }
}

pub const TABLE3: [Table3Entry; 4] = [
    Table3Entry {
        ell: 0,
        bound: &[Printed("-27.66703017245"), Printed("-4.96995355885")],
        bound_rho: 40.0,
        resonances: &[
            res("5.1432", "1.73656", 40.0),
            res("5.7767", "12.3187", 40.0),
            res("1.61", "29.27", 40.0),
        ],
    },
    Table3Entry {
        ell: 1,
        bound: &[Printed("-21.21593606495"), Printed("-0.8517865495")],
        bound_rho: 25.0,
        resonances: &[
            res("6.2706", "3.4478", 40.0),
            res("6.038", "15.8152", 40.0),
            res("1.154", "33.87", 40.0),
        ],
    },
    Table3Entry {
        ell: 2,
        bound: &[Printed("-11.585302647445")],
        bound_rho: 50.0,
        resonances: &[
            res("4.3251234", "0.244407", 50.0),
            res("7.998469", "7.512996", 50.0),
            res("6.5784", "22.0054", 50.0),
            res("0.53", "41.6", 50.0),
        ],
    },
    Table3Entry {
        ell: 3,
        bound: &[Printed("-1.44701935596")],
        bound_rho: 30.0,
        resonances: &[
            res("8.59697", "2.2622", 35.0),
            res("10.2802", "13.407", 35.0),
            res("7.414", "29.9473", 35.0),
        ],
    },
];
