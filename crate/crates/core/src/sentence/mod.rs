//! Sentences in the language `{≤, +, 0, 1}`: parsing, prenex forms,
//! evaluation and the bounded decision procedure.

pub mod ast;
pub mod cert;
pub mod decide;
pub mod eval;
pub mod parse;
pub mod prenex;
pub mod witness;

pub use ast::{Formula, Term};
pub use parse::{parse, parse_formula, ParseError};
pub use prenex::{prenex_pi2, prenex_sigma2, PrenexError, PrenexPi2, PrenexSigma2, Quantifier};
pub use eval::{eval_qf, eval_term, generated_substructure, CompiledMatrix, Env};
pub use witness::{
    decide_question1, enumerate_aee_extensions, enumerate_witness_structures, AeeExtension,
    WitnessStructure,
};
pub use decide::{
    decide, decide_pi2, decide_sigma2, Certificate, DecideError, ExtensionInstance, Instance,
    Pi2Certificate, PrefixClass, Sigma2Certificate,
};
pub use cert::CertificateDoc;
