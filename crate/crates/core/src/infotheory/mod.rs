mod channel;
mod empirical;
mod ensemble;
mod pmf;

pub use channel::{collision_probability, Channel, CollapseRuns, Code, Constant, Identity, Relabel, Symbols, Tabulated};
pub use empirical::{
    empirical_channel, quantize, random_resample_mapper, render_symbols, similarity_mapper, QUANT_SCALE,
};
pub use ensemble::{
    emit, information_report, push_channel, random_content_channel, random_ensemble, random_injective_channel,
    random_noisy_channel, report_csv, report_table, verify_theorem1, verify_theorem2, DiscreteEnsemble,
    EnsembleShape, InformationReport, Theorem, TheoremReport, MAX_SUPPORT, THEOREM_TOL,
};
pub use pmf::{entropy, mutual_information, DiscretePmf};
