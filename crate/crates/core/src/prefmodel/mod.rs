//! Preference models over property values: TCP-nets and GAI value functions.

mod compile;
mod file;
pub(crate) mod gai;
pub(crate) mod tcp;

pub use compile::{compile_tcpnet_to_gai, compile_tcpnet_to_gai_approx, CompileError};
pub use file::{ModelError, ModelFile};
pub use gai::{Factor, GaiError, GaiFunction};
pub use tcp::{
    preferred_value_order, topo_property_order, validate_tcpnet, TcpError, TcpNet, ValueOrder,
};

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    Tcp(TcpNet),
    Gai(GaiFunction),
}

/// A preference model plus an optional required subset size.
///
/// The size requirement is enforced as a hard constraint by every engine.
/// It dominates all other preferences: a subset of the wrong size is never
/// preferred to one of the right size.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceModel {
    pub kind: ModelKind,
    pub cardinality: Option<usize>,
}

impl PreferenceModel {
    pub fn tcp(net: TcpNet) -> Self {
        PreferenceModel {
            kind: ModelKind::Tcp(net),
            cardinality: None,
        }
    }

    pub fn gai(g: GaiFunction) -> Self {
        PreferenceModel {
            kind: ModelKind::Gai(g),
            cardinality: None,
        }
    }

    pub fn with_cardinality(mut self, k: usize) -> Self {
        self.cardinality = Some(k);
        self
    }

    pub fn as_tcp(&self) -> Option<&TcpNet> {
        match &self.kind {
            ModelKind::Tcp(n) => Some(n),
            ModelKind::Gai(_) => None,
        }
    }

    pub fn num_properties(&self) -> usize {
        match &self.kind {
            ModelKind::Tcp(n) => n.len(),
            ModelKind::Gai(g) => g.domains.len(),
        }
    }

    /// The GAI function itself, or the compiled one for a TCP-net.
    pub fn value_function(&self) -> Result<GaiFunction, CompileError> {
        match &self.kind {
            ModelKind::Tcp(n) => compile_tcpnet_to_gai(n),
            ModelKind::Gai(g) => Ok(g.clone()),
        }
    }
}
