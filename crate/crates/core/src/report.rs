//! The full analysis pipeline with every achieved value next to its bound.

use serde::{Deserialize, Serialize};

use crate::decomposition::{build_tree_decomposition, validate_td};
use crate::drawing::{crossing_profile, ConvexDrawing};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::separation::{build_separation, validate_separation};
use crate::triangulation::{triangulate, Method, Triangulation};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeOptions {
    /// Crossing bound to analyse against; the drawing's own local crossing
    /// number when absent.
    pub k: Option<usize>,
    /// Also run the outer min-k-planar pipeline with this `k`.
    pub min_k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodStats {
    pub method: Method,
    pub k: usize,
    pub edge_pn: usize,
    pub edge_pn_bound: usize,
    pub triangle_pn: usize,
    pub triangle_pn_bound: usize,
}

/// The bounds implied by `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedBounds {
    /// `⌊1.5k + 2⌋`.
    pub tw: usize,
    /// 4, present only for `k = 2`.
    pub tw_outer_2_planar: Option<usize>,
    /// `3k + 1` for outer min-k-planar graphs.
    pub tw_min_k: usize,
    /// `k + 2`.
    pub sn: usize,
    /// `2k + 1` for outer min-k-planar graphs.
    pub sn_min_k: usize,
    /// `0.75k + 1.75`.
    pub cop: f64,
}

impl DerivedBounds {
    pub fn for_k(k: usize) -> Self {
        DerivedBounds {
            tw: (3 * k + 4) / 2,
            tw_outer_2_planar: (k == 2).then_some(4),
            tw_min_k: 3 * k + 1,
            sn: k + 2,
            sn_min_k: 2 * k + 1,
            cop: 0.75 * k as f64 + 1.75,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinKReport {
    pub k: usize,
    pub triangulation: MethodStats,
    pub td_width: usize,
    pub td_width_bound: usize,
    pub separation_order: usize,
    pub separation_order_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub m: usize,
    pub lcr_of_drawing: usize,
    /// The `k` the report is computed for.
    pub k: usize,
    pub is_outer_k_planar: bool,
    /// Smallest `k` for which the drawing is outer min-k-planar.
    pub min_k_planar_k: usize,
    pub triangulations: Vec<MethodStats>,
    /// Method whose triangulation produced the tree decomposition.
    pub td_method: Option<Method>,
    pub td_width: usize,
    pub td_width_bound: usize,
    pub separation_order: usize,
    pub separation_balance: f64,
    pub separation_order_bound: usize,
    pub min_k: Option<MinKReport>,
    pub bounds: DerivedBounds,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// A short human-readable summary.
    pub fn pretty(&self) -> String {
        let mut s = format!(
            "n = {}, m = {}, local crossing number of the drawing = {}, min-k = {}\n",
            self.n, self.m, self.lcr_of_drawing, self.min_k_planar_k
        );
        s += &format!("analysed for k = {} (outer k-planar: {})\n", self.k, self.is_outer_k_planar);
        for t in &self.triangulations {
            s += &format!(
                "  {:<6} edge piercing {} <= {}, triangle piercing {} <= {}\n",
                t.method.name(),
                t.edge_pn,
                t.edge_pn_bound,
                t.triangle_pn,
                t.triangle_pn_bound
            );
        }
        s += &format!("tree decomposition width {} <= {}\n", self.td_width, self.td_width_bound);
        s += &format!(
            "separation order {} <= {}, balance {:.3}\n",
            self.separation_order, self.separation_order_bound, self.separation_balance
        );
        if let Some(m) = &self.min_k {
            s += &format!(
                "min-{}: width {} <= {}, separation order {} <= {}\n",
                m.k, m.td_width, m.td_width_bound, m.separation_order, m.separation_order_bound
            );
        }
        s += &format!(
            "cop number <= {:.2}; separation number and treewidth are within a factor 15 of each other\n",
            self.bounds.cop
        );
        s
    }
}

fn stats(t: &Triangulation, method: Method, k: usize) -> Result<MethodStats> {
    let p = t.piercing_stats();
    let (edge_pn_bound, triangle_pn_bound) = method.bounds(k);
    if p.edge_pn > edge_pn_bound || p.triangle_pn > triangle_pn_bound {
        return Err(Error::certificate(format!(
            "{} triangulation has piercing ({}, {}) above ({edge_pn_bound}, {triangle_pn_bound})",
            method.name(),
            p.edge_pn,
            p.triangle_pn
        )));
    }
    Ok(MethodStats { method, k, edge_pn: p.edge_pn, edge_pn_bound, triangle_pn: p.triangle_pn, triangle_pn_bound })
}

fn at_most(what: &str, value: usize, bound: usize) -> Result<()> {
    if value > bound {
        return Err(Error::certificate(format!("{what} {value} exceeds its bound {bound}")));
    }
    Ok(())
}

/// Width and separation order derived from `t`, both validated.
fn decompose(d: &ConvexDrawing, t: &Triangulation) -> Result<(usize, usize, f64)> {
    let td = build_tree_decomposition(d, t)?;
    if !validate_td(d, &td).valid {
        return Err(Error::certificate("tree decomposition fails validation"));
    }
    let sep = build_separation(d, t)?;
    let r = validate_separation(d, &sep);
    if !r.valid || !r.balanced {
        return Err(Error::certificate("separation fails validation"));
    }
    Ok((td.width(), sep.order, sep.balance))
}

/// Runs every applicable triangulation method, the tree decomposition and
/// the separation, and checks each against its bound. A drawing crossing
/// some edge more than the requested `k` times is a bound violation.
pub fn analyze(d: &ConvexDrawing, opts: AnalyzeOptions) -> Result<AnalysisReport> {
    let profile = crossing_profile(d);
    let n = d.n();
    let k = opts.k.unwrap_or(profile.max_count);
    let bounds = DerivedBounds::for_k(k);
    let mut report = AnalysisReport {
        n,
        m: d.edge_count(),
        lcr_of_drawing: profile.max_count,
        k,
        is_outer_k_planar: profile.max_count <= k,
        min_k_planar_k: profile.min_k_ok_for,
        triangulations: Vec::new(),
        td_method: None,
        td_width: n.saturating_sub(1),
        td_width_bound: bounds.tw,
        separation_order: n,
        separation_balance: 0.0,
        separation_order_bound: bounds.sn,
        min_k: None,
        bounds,
    };
    if n < 3 {
        return Ok(report);
    }

    let (strong, _) = triangulate(d, Method::Strong, k)?;
    report.triangulations.push(stats(&strong, Method::Strong, k)?);
    let (weak, _) = triangulate(d, Method::Weak, k)?;
    report.triangulations.push(stats(&weak, Method::Weak, k)?);
    let o2p = if k == 2 {
        let (t, _) = triangulate(d, Method::OuterTwoPlanar, 2)?;
        report.triangulations.push(stats(&t, Method::OuterTwoPlanar, 2)?);
        Some(t)
    } else {
        None
    };
    let (td_method, td_source) = match &o2p {
        Some(t) => (Method::OuterTwoPlanar, t),
        None => (Method::Strong, &strong),
    };

    let td = build_tree_decomposition(d, td_source)?;
    if !validate_td(d, &td).valid {
        return Err(Error::certificate("tree decomposition fails validation"));
    }
    let tw_bound = report.bounds.tw_outer_2_planar.unwrap_or(report.bounds.tw);
    at_most("tree decomposition width", td.width(), tw_bound)?;
    report.td_method = Some(td_method);
    report.td_width = td.width();
    report.td_width_bound = tw_bound;

    let sep = build_separation(d, &strong)?;
    at_most("separation order", sep.order, report.bounds.sn)?;
    report.separation_order = sep.order;
    report.separation_balance = sep.balance;

    if let Some(mk) = opts.min_k {
        let (t, _) = triangulate(d, Method::Min, mk)?;
        let triangulation = stats(&t, Method::Min, mk)?;
        let (width, order, _) = decompose(d, &t)?;
        let b = DerivedBounds::for_k(mk);
        at_most("min-k tree decomposition width", width, b.tw_min_k)?;
        at_most("min-k separation order", order, b.sn_min_k)?;
        report.min_k = Some(MinKReport {
            k: mk,
            triangulation,
            td_width: width,
            td_width_bound: b.tw_min_k,
            separation_order: order,
            separation_order_bound: b.sn_min_k,
        });
    }
    Ok(report)
}

/// [`analyze`] over many drawings; results keep the input order.
pub fn analyze_batch(exec: Exec, drawings: &[ConvexDrawing], opts: AnalyzeOptions) -> Vec<Result<AnalysisReport>> {
    par::map(exec, drawings, |d| analyze(d, opts))
}
