//! Instance-level reductions, gadgets and pp-definitions.

mod between;
mod gadget;
mod mc;
mod pcsp;
mod ppdef;
mod psi;

pub use between::{between_vmcs, sentinel, FiniteHomDistribution, HomDistribution, SentinelPolicy};
pub use gadget::{
    flip_if_one, gadget_substitute, simple_gadget, tabulate_hom, verify_gadget_hom, Gadget, GadgetArg, GadgetHomReport, PadRow, SymbolLift,
};
pub use mc::{minion_search, McClassification, McInstance, McVar, MinorCondition, VmcInstance};
pub use pcsp::{
    between_mcs, classify_crisp, mc_to_pcsp, mc_witness, pcsp_to_mc, pcsp_to_vmc, vmc_to_pcsp, StrongPromise, SynthesisMemo, VmcReduction,
};
pub use ppdef::{synthesize_pp_definition, verify_pp_definition, NonDefinability, PPDefinition, PpMode, PpSynthesis};
pub use psi::{glue, PsiBuild};
