use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::PolygonSpec;

/// Contribution of one polygon edge to the lower-bound functional.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeBound {
    pub index: usize,
    pub length: f64,
    pub lambda: f64,
    /// `1/√(1+λ²)`, always in `[1/√2, 1]`.
    pub factor: f64,
    pub entropy: f64,
    pub contribution: f64,
}

/// Value of the surface-order lower bound, in nats per boundary site.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundValue {
    pub gamma: f64,
    pub per_edge: Vec<EdgeBound>,
}

/// `γ(π) = Σ_r (length_r / 4) · h_r / √(1+λ_r²)` over the edges of `π`.
///
/// Edge lengths are those of `π` itself. The droplet argument works with
/// the half-size polygon `½π` and a factor 1/8 per edge; halving the lengths
/// and doubling the factor gives this form, so no further rescaling applies.
pub fn bound_functional(poly: &PolygonSpec, edge_entropies: &[f64]) -> Result<BoundValue> {
    let edges = poly.edges();
    if edges.len() != edge_entropies.len() {
        return Err(Error::invalid(format!(
            "{} edge entropies given for a polygon with {} edges",
            edge_entropies.len(),
            edges.len()
        )));
    }
    if let Some(h) = edge_entropies.iter().find(|h| !h.is_finite()) {
        return Err(Error::invalid(format!("edge entropy {h} is not finite")));
    }
    let per_edge: Vec<EdgeBound> = edges
        .iter()
        .zip(edge_entropies)
        .map(|(e, &h)| {
            let factor = e.site_density();
            EdgeBound {
                index: e.index,
                length: e.length,
                lambda: e.lambda,
                factor,
                entropy: h,
                contribution: factor * e.length / 4.0 * h,
            }
        })
        .collect();
    let gamma = per_edge.iter().map(|e| e.contribution).sum();
    Ok(BoundValue { gamma, per_edge })
}

/// Box-shaped bound `√α · s`.
pub fn box_bound(alpha: f64, s: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::invalid(format!("entropy must be finite and non-negative, got {s}")));
    }
    Ok(alpha.sqrt() * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_matches_box() {
        let sq = PolygonSpec::square(0.25).unwrap();
        let b = bound_functional(&sq, &[1.0; 4]).unwrap();
        assert!((b.gamma - 0.5).abs() < 1e-12);
        assert!((box_bound(0.25, 1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn octagon_isotropic() {
        let side = (1.0 / (2.0 * (1.0 + 2f64.sqrt()))).sqrt();
        let expect = side * (4.0 + 4.0 / 2f64.sqrt()) / 4.0;
        let oct = PolygonSpec::regular(8, 1.0, std::f64::consts::PI / 8.0).unwrap();
        let b = bound_functional(&oct, &[1.0; 8]).unwrap();
        assert!((b.gamma - expect).abs() < 1e-12, "{} vs {expect}", b.gamma);
        assert!((b.gamma - 0.77690).abs() < 5e-5);
    }

    #[test]
    fn count_mismatch() {
        let sq = PolygonSpec::square(1.0).unwrap();
        assert!(bound_functional(&sq, &[1.0; 3]).is_err());
    }
}
