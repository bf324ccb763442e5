//! GKLS generators, their semigroups and Yosida approximants.

pub mod gkls;
pub mod superop;
pub mod yosida;

pub use gkls::{effective_zeno_generator, evolve, lindbladian, GklsGenerator};
pub use superop::{Flag, SuperopFlags, Superoperator, FLAG_TOL};
pub use yosida::{yosida, yosida_generator, yosida_lemma_check, YosidaApproximant, YosidaLemmaReport};
