/// Size limits for exhaustive operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest n for which 2^n points are enumerated.
    pub enum_n: usize,
    /// Largest number of constraint rows handed to the simplex engine.
    pub lp_rows: usize,
    /// Generic work budget for combinatorial checks (subsets times patterns, grid sizes).
    pub work: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enum_n: 24,
            lp_rows: 1 << 18,
            work: 1 << 32,
        }
    }
}

impl Caps {
    pub(crate) fn check_n(&self, n: usize) -> crate::Result<()> {
        if n > self.enum_n || n > 62 {
            return Err(crate::Error::CapExceeded {
                n,
                cap: self.enum_n.min(62),
            });
        }
        Ok(())
    }

    pub(crate) fn check_rows(&self, rows: usize) -> crate::Result<()> {
        if rows > self.lp_rows {
            return Err(crate::Error::LpCapExceeded {
                rows,
                cap: self.lp_rows,
            });
        }
        Ok(())
    }
}

/// Unspecified constants of the weight pipelines, all configurable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConstants {
    /// Junta-size factor: L = ceil(l_c * ln(1/eps)^2 / eps^2).
    pub l_c: f64,
    /// Head-size factor: K = k_c / eps^(2/3).
    pub k_c: f64,
    /// Range factor: R0 = ceil(r_c * sqrt(n) * ln(1/eps) / eps).
    pub r_c: f64,
    /// Number of rounding refinements tried before a shortfall is reported.
    pub budget: u32,
}

impl Default for PipelineConstants {
    fn default() -> Self {
        PipelineConstants {
            l_c: 2.0,
            k_c: 2.0,
            r_c: 2.0,
            budget: 8,
        }
    }
}
