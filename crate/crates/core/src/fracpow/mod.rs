//! Complex powers `P^alpha` of `P = (1/C)(d/dz + f)` for irregular `f`, acting on
//! `z^gamma Q((z^{1/r}))` through polynomial coefficients `p_i(alpha, beta)`.

pub mod checks;
pub mod symbol;
pub mod table;

pub use checks::{
    check_addition, check_heisenberg, heisenberg_depth, check_radon_intertwiner, AdditionReport, HeisenbergReport,
    IntertwinerReport,
};
pub use symbol::{symbol_from_connection, OperatorSymbol};
pub use table::{apply_power, apply_symbol, power_table, PowerTable, SpecializedPower};
