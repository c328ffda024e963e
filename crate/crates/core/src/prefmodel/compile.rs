use thiserror::Error;

use super::gai::GaiFunction;
use super::tcp::{topo_property_order, validate_tcpnet, TcpError, TcpNet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("invalid net: {0:?}")]
    Invalid(Vec<TcpError>),
    #[error("value range too large for exact arithmetic (product of domain sizes exceeds 2^53)")]
    Overflow,
}

/// Additive value function whose order on full assignments is the
/// conditional-lexicographic order of `net`.
///
/// With `t_0, t_1, ...` the topological order, node `t_j` gets weight
/// `w_j = Π_{i>j} |dom(t_i)|` and the factor over `parents(t_j) ∪ {t_j}`
/// scores a value by `w_j · (|dom| - 1 - rank)`, rank 0 being the best value
/// in that parent context. Everything after `t_j` sums to at most `w_j - 1`,
/// so the first differing node in topological order decides any comparison.
/// Factors contained in another factor's scope are merged afterwards.
pub fn compile_tcpnet_to_gai(net: &TcpNet) -> Result<GaiFunction, CompileError> {
    compile(net, true)
}

/// As [`compile_tcpnet_to_gai`] but without the exactness limit. Past
/// `2^53` the low-order weights are absorbed by rounding, so assignments
/// differing only in late nodes may tie.
pub fn compile_tcpnet_to_gai_approx(net: &TcpNet) -> Result<GaiFunction, CompileError> {
    compile(net, false)
}

fn compile(net: &TcpNet, exact: bool) -> Result<GaiFunction, CompileError> {
    validate_tcpnet(net).map_err(CompileError::Invalid)?;
    let order = topo_property_order(net);
    let m = net.len();
    let mut weight = vec![0f64; m];
    let mut w = 1f64;
    for &p in order.iter().rev() {
        weight[p] = w;
        w *= net.domains[p].size() as f64;
        if exact && w > (1u64 << 53) as f64 {
            return Err(CompileError::Overflow);
        }
    }

    let mut g = GaiFunction::new(net.domains.clone());
    for &p in &order {
        let mut scope = net.cp_parents[p].clone();
        scope.push(p);
        let dom = net.domains[p];
        let len = g.table_len(&scope);
        let mut table = Vec::with_capacity(len);
        for e in 0..len {
            // last scope member is `p` itself
            let own = e % dom.size();
            let row = e / dom.size();
            let order = net.cp_tables[p][row].as_ref().expect("validated");
            let rank = order.rank(dom, own);
            table.push(weight[p] * (dom.size() - 1 - rank) as f64);
        }
        g.add_factor(scope, table);
    }
    g.merge_subsumed();
    Ok(g)
}
