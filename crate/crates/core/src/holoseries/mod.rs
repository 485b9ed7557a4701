//! Truncated power series, forward expansion from recurrences, Cartier
//! sections, Lucas binomials and the named sequence catalog.

pub mod catalog;
mod expand;
pub mod guess;
mod lucas;
mod series;

pub use catalog::{op_cy210, op_cy26, Catalog, SeqGen, SeqKind};
pub use expand::{apply_operator, expand, expand_mod_p, expand_with};
pub use guess::guess_recurrence;
pub use lucas::{lucas_binom, p_lucas_by_series, p_lucas_check, p_lucas_check_reduced, p_lucas_check_terms, LucasReport};
pub use series::{cartier, compose_zpk, delta_series, reduce_series_mod_p, series_q, TruncSeries};
