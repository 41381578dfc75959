//! Published monthly parameter tables used as numeric cross-checks.
//!
//! Values are retyped as printed (three decimals for rates and ratios, one
//! decimal for the derived summary columns, integers for pulse counts); the
//! gamma rate is published as the mean `alpha/nu`.

pub struct BlrpRow {
    pub month: u8,
    pub lambda: f64,
    pub mu_x: f64,
    pub beta: f64,
    pub gamma: f64,
    pub eta: f64,
    pub msit: f64,
    pub msd: f64,
    pub mcit: f64,
    pub mcd: f64,
    pub mcs: f64,
}

pub const BLRP_TABLE: [BlrpRow; 12] = [
    BlrpRow { month: 1, lambda: 0.022, mu_x: 0.960, beta: 5.422, gamma: 0.231, eta: 5.975, msit: 45.0, msd: 4.3, mcit: 11.1, mcd: 10.0, mcs: 24.5 },
    BlrpRow { month: 2, lambda: 0.021, mu_x: 0.942, beta: 5.142, gamma: 0.260, eta: 5.310, msit: 47.1, msd: 3.8, mcit: 11.7, mcd: 11.3, mcs: 20.7 },
    BlrpRow { month: 3, lambda: 0.021, mu_x: 1.334, beta: 4.478, gamma: 0.262, eta: 7.061, msit: 47.2, msd: 3.8, mcit: 13.4, mcd: 8.5, mcs: 18.1 },
    BlrpRow { month: 4, lambda: 0.022, mu_x: 1.944, beta: 3.829, gamma: 0.271, eta: 8.387, msit: 45.7, msd: 3.7, mcit: 15.7, mcd: 7.2, mcs: 15.1 },
    BlrpRow { month: 5, lambda: 0.023, mu_x: 3.662, beta: 3.157, gamma: 0.370, eta: 9.239, msit: 44.3, msd: 2.7, mcit: 19.0, mcd: 6.5, mcs: 9.5 },
    BlrpRow { month: 6, lambda: 0.025, mu_x: 6.431, beta: 2.694, gamma: 0.413, eta: 11.154, msit: 39.2, msd: 2.4, mcit: 22.3, mcd: 5.4, mcs: 7.5 },
    BlrpRow { month: 7, lambda: 0.023, mu_x: 10.136, beta: 1.672, gamma: 0.356, eta: 12.011, msit: 43.5, msd: 2.8, mcit: 35.9, mcd: 5.0, mcs: 5.7 },
    BlrpRow { month: 8, lambda: 0.023, mu_x: 7.072, beta: 2.411, gamma: 0.408, eta: 11.066, msit: 43.4, msd: 2.5, mcit: 24.9, mcd: 5.4, mcs: 6.9 },
    BlrpRow { month: 9, lambda: 0.021, mu_x: 5.306, beta: 2.945, gamma: 0.379, eta: 10.470, msit: 47.1, msd: 2.6, mcit: 20.4, mcd: 5.7, mcs: 8.8 },
    BlrpRow { month: 10, lambda: 0.019, mu_x: 2.209, beta: 4.071, gamma: 0.275, eta: 8.104, msit: 53.3, msd: 3.6, mcit: 14.7, mcd: 7.4, mcs: 15.8 },
    BlrpRow { month: 11, lambda: 0.023, mu_x: 1.207, beta: 5.884, gamma: 0.276, eta: 6.741, msit: 42.8, msd: 3.6, mcit: 10.2, mcd: 8.9, mcs: 22.3 },
    BlrpRow { month: 12, lambda: 0.024, mu_x: 1.059, beta: 5.475, gamma: 0.265, eta: 5.906, msit: 41.1, msd: 3.8, mcit: 11.0, mcd: 10.2, mcs: 21.7 },
];

pub struct BliprRow {
    pub month: u8,
    pub lambda: f64,
    pub mu_x: f64,
    pub alpha: f64,
    pub alpha_over_nu: f64,
    pub kappa: f64,
    pub phi: f64,
    pub omega: f64,
    pub msit: f64,
    pub msd: f64,
    pub mcit: f64,
    pub mcd: f64,
    pub mcs: f64,
    pub mpc: f64,
}

impl BliprRow {
    pub fn nu(&self) -> f64 {
        self.alpha / self.alpha_over_nu
    }
}

pub const BLIPR_TABLE: [BliprRow; 12] = [
    BliprRow { month: 1, lambda: 0.024, mu_x: 0.001, alpha: 2.147, alpha_over_nu: 4.591, kappa: 1.027, phi: 0.046, omega: 173.0, msit: 42.3, msd: 8.9, mcit: 23.8, mcd: 24.5, mcs: 22.4, mpc: 165.0 },
    BliprRow { month: 2, lambda: 0.023, mu_x: 0.001, alpha: 3.680, alpha_over_nu: 4.394, kappa: 1.096, phi: 0.058, omega: 187.0, msit: 42.6, msd: 5.4, mcit: 17.1, mcd: 18.8, mcs: 18.8, mpc: 177.0 },
    BliprRow { month: 3, lambda: 0.023, mu_x: 0.001, alpha: 2.000, alpha_over_nu: 5.525, kappa: 0.712, phi: 0.043, omega: 204.0, msit: 44.1, msd: 8.3, mcit: 30.5, mcd: 21.7, mcs: 16.4, mpc: 195.0 },
    BliprRow { month: 4, lambda: 0.024, mu_x: 0.001, alpha: 2.000, alpha_over_nu: 6.740, kappa: 0.517, phi: 0.039, omega: 248.0, msit: 41.7, msd: 7.7, mcit: 34.4, mcd: 17.8, mcs: 13.4, mpc: 239.0 },
    BliprRow { month: 5, lambda: 0.027, mu_x: 0.001, alpha: 2.000, alpha_over_nu: 7.760, kappa: 0.437, phi: 0.054, omega: 413.0, msit: 37.3, msd: 4.8, mcit: 35.4, mcd: 15.5, mcs: 8.1, mpc: 392.0 },
    BliprRow { month: 6, lambda: 0.031, mu_x: 0.001, alpha: 2.000, alpha_over_nu: 9.607, kappa: 0.310, phi: 0.050, omega: 606.0, msit: 32.1, msd: 4.1, mcit: 40.3, mcd: 12.5, mcs: 6.2, mpc: 576.0 },
    BliprRow { month: 7, lambda: 0.030, mu_x: 0.001, alpha: 2.000, alpha_over_nu: 10.413, kappa: 0.167, phi: 0.039, omega: 908.0, msit: 33.4, msd: 4.9, mcit: 69.2, mcd: 11.5, mcs: 4.2, mpc: 874.0 },
    BliprRow { month: 8, lambda: 0.029, mu_x: 0.001, alpha: 2.000, alpha_over_nu: 9.683, kappa: 0.293, phi: 0.053, omega: 663.0, msit: 34.4, msd: 3.9, mcit: 42.2, mcd: 12.4, mcs: 5.6, mpc: 630.0 },
    BliprRow { month: 9, lambda: 0.025, mu_x: 0.001, alpha: 2.000, alpha_over_nu: 8.901, kappa: 0.345, phi: 0.047, omega: 534.0, msit: 40.1, msd: 4.8, mcit: 39.1, mcd: 13.5, mcs: 7.4, mpc: 510.0 },
    BliprRow { month: 10, lambda: 0.021, mu_x: 0.001, alpha: 2.126, alpha_over_nu: 6.698, kappa: 0.580, phi: 0.041, omega: 286.0, msit: 48.4, msd: 6.9, mcit: 29.2, mcd: 16.9, mcs: 14.3, mpc: 274.0 },
    BliprRow { month: 11, lambda: 0.025, mu_x: 0.001, alpha: 2.000, alpha_over_nu: 5.389, kappa: 1.055, phi: 0.049, omega: 182.0, msit: 39.9, msd: 7.6, mcit: 21.1, mcd: 22.3, mcs: 21.5, mpc: 173.0 },
    BliprRow { month: 12, lambda: 0.026, mu_x: 0.001, alpha: 2.035, alpha_over_nu: 4.584, kappa: 1.093, phi: 0.054, omega: 188.0, msit: 37.9, msd: 7.9, mcit: 23.6, mcd: 25.7, mcs: 20.1, mpc: 179.0 },
];

pub struct BlrprxRow {
    pub month: u8,
    pub lambda: f64,
    pub iota: f64,
    pub alpha: f64,
    pub alpha_over_nu: f64,
    pub kappa: f64,
    pub phi: f64,
    pub msit: f64,
    pub msd: f64,
    pub mcit: f64,
    pub mcd: f64,
    pub mcs: f64,
}

impl BlrprxRow {
    pub fn nu(&self) -> f64 {
        self.alpha / self.alpha_over_nu
    }
}

pub const BLRPRX_TABLE: [BlrprxRow; 12] = [
    BlrprxRow { month: 1, lambda: 0.022, iota: 0.164, alpha: 2.075, alpha_over_nu: 5.014, kappa: 0.996, phi: 0.042, msit: 46.2, msd: 9.1, mcit: 23.2, mcd: 23.1, mcs: 24.6 },
    BlrprxRow { month: 2, lambda: 0.021, iota: 0.177, alpha: 3.451, alpha_over_nu: 4.818, kappa: 1.063, phi: 0.053, msit: 47.5, msd: 5.5, mcit: 16.5, mcd: 17.5, mcs: 20.9 },
    BlrprxRow { month: 3, lambda: 0.020, iota: 0.196, alpha: 2.000, alpha_over_nu: 5.910, kappa: 0.695, phi: 0.041, msit: 48.8, msd: 8.3, mcit: 29.2, mcd: 20.3, mcs: 18.0 },
    BlrprxRow { month: 4, lambda: 0.022, iota: 0.241, alpha: 2.000, alpha_over_nu: 7.083, kappa: 0.509, phi: 0.037, msit: 46.5, msd: 7.6, mcit: 33.3, mcd: 16.9, mcs: 14.8 },
    BlrprxRow { month: 5, lambda: 0.023, iota: 0.400, alpha: 2.000, alpha_over_nu: 8.127, kappa: 0.434, phi: 0.052, msit: 43.9, msd: 4.7, mcit: 34.0, mcd: 14.8, mcs: 9.4 },
    BlrprxRow { month: 6, lambda: 0.026, iota: 0.586, alpha: 2.000, alpha_over_nu: 10.015, kappa: 0.311, phi: 0.049, msit: 38.9, msd: 4.1, mcit: 38.5, mcd: 12.0, mcs: 7.3 },
    BlrprxRow { month: 7, lambda: 0.024, iota: 0.879, alpha: 2.000, alpha_over_nu: 10.777, kappa: 0.173, phi: 0.040, msit: 42.3, msd: 4.6, mcit: 64.3, mcd: 11.1, mcs: 5.3 },
    BlrprxRow { month: 8, lambda: 0.024, iota: 0.639, alpha: 2.000, alpha_over_nu: 10.109, kappa: 0.299, phi: 0.052, msit: 42.3, msd: 3.8, mcit: 39.7, mcd: 11.9, mcs: 6.8 },
    BlrprxRow { month: 9, lambda: 0.021, iota: 0.518, alpha: 2.000, alpha_over_nu: 9.257, kappa: 0.343, phi: 0.045, msit: 47.4, msd: 4.8, mcit: 37.7, mcd: 13.0, mcs: 8.6 },
    BlrprxRow { month: 10, lambda: 0.019, iota: 0.277, alpha: 2.051, alpha_over_nu: 7.006, kappa: 0.575, phi: 0.039, msit: 53.8, msd: 7.1, mcit: 29.1, mcd: 16.7, mcs: 15.7 },
    BlrprxRow { month: 11, lambda: 0.023, iota: 0.175, alpha: 2.000, alpha_over_nu: 5.832, kappa: 1.018, phi: 0.045, msit: 43.9, msd: 7.6, mcit: 20.2, mcd: 20.6, mcs: 23.5 },
    BlrprxRow { month: 12, lambda: 0.024, iota: 0.179, alpha: 2.000, alpha_over_nu: 5.018, kappa: 1.056, phi: 0.050, msit: 42.0, msd: 8.0, mcit: 22.6, mcd: 23.9, mcs: 22.2 },
];

/// Last-digit quantum of the published rate/ratio columns.
pub const PARAM_QUANTUM: f64 = 0.001;
/// Last-digit quantum of the published derived columns.
pub const DERIVED_QUANTUM: f64 = 0.1;
/// Pulse-count columns are printed as integers.
pub const COUNT_QUANTUM: f64 = 1.0;
