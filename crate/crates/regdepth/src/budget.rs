//! Enumeration budget from the environment.
//!
//! `REGDEPTH_BUDGET=<max_subsets>` overrides the exact-enumeration caps:
//! the subset cap is set to the given value and the operation cap scales
//! by the default ratio (2000 estimated count operations per subset, the
//! same proportion as the built-in 5e6 / 1e10 defaults).

use regdepth_core::EnumerationBudget;

pub const ENV_VAR: &str = "REGDEPTH_BUDGET";
const OPS_PER_SUBSET: u128 = 2000;

/// The budget after applying any `REGDEPTH_BUDGET` override.
pub fn from_env() -> Result<EnumerationBudget, String> {
    match std::env::var(ENV_VAR) {
        Ok(v) => {
            let max_subsets: u128 = v
                .trim()
                .parse()
                .map_err(|_| format!("{ENV_VAR} must be a nonnegative integer, got {v:?}"))?;
            Ok(EnumerationBudget {
                max_subsets,
                max_ops: max_subsets.saturating_mul(OPS_PER_SUBSET),
            })
        }
        Err(_) => Ok(EnumerationBudget::default()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_budget_without_env() {
        // Only checks the fallback; the env-sensitive path is covered by
        // the CLI integration tests to avoid process-global races.
        std::env::remove_var(ENV_VAR);
        let b = from_env().unwrap();
        assert_eq!(b, EnumerationBudget::default());
    }
}
