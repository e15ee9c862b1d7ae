//! Parameter bindings behind the published figures.

use super::{CatalogError, Values};

#[derive(Debug, Clone)]
pub struct Panel {
    pub overrides: Values,
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub number: u32,
    pub example: &'static str,
    pub caption: &'static str,
    pub panels: Vec<Panel>,
    pub grid: Vec<(f64, f64, usize)>,
}

impl Figure {
    /// Parameters whose value differs between panels, in first-seen order.
    pub fn varied(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for p in &self.panels {
            for (k, v) in p.overrides.iter() {
                let differs = self.panels.iter().any(|q| q.overrides.get(k) != Some(v));
                if differs && !names.iter().any(|n| n == k) {
                    names.push(k.to_string());
                }
            }
        }
        names
    }
}

fn panels(rows: &[&[(&str, f64)]]) -> Vec<Panel> {
    rows.iter().map(|r| Panel { overrides: Values::from_pairs(r.iter().copied()) }).collect()
}

pub fn figure_ids() -> Vec<u32> {
    (1..=6).collect()
}

pub fn figure(number: u32) -> Result<Figure, CatalogError> {
    let fig = match number {
        1 => Figure {
            number,
            example: "burgers-coupled",
            caption: "f and g of the Burgers power-law solution with M1 = 1",
            panels: panels(&[
                &[("alpha", 0.3), ("beta", 0.8), ("M1", 1.0)],
                &[("alpha", 0.7), ("beta", 0.8), ("M1", 1.0)],
                &[("alpha", 0.3), ("beta", 0.4), ("M1", 1.0)],
            ]),
            grid: vec![(0.5, 2.0, 50), (0.5, 2.0, 50)],
        },
        2 => Figure {
            number,
            example: "boussinesq-system",
            caption: "Boussinesq system solution from the initial data for several orders",
            panels: panels(&[
                &[("alpha1", 0.4), ("alpha2", 0.7), ("beta", 0.9)],
                &[("alpha1", 0.8), ("alpha2", 0.5), ("beta", 0.9)],
                &[("alpha1", 1.0), ("alpha2", 1.0), ("beta", 1.0)],
            ]),
            grid: vec![(0.0, 1.0, 21), (0.0, 2.0, 21)],
        },
        3 => Figure {
            number,
            example: "kdv-system",
            caption: "KdV system solution with M1 = 1, a1 = 2, a2 = 4, b = 3",
            panels: panels(&[
                &[("alpha", 1.0), ("beta", 1.0), ("M1", 1.0), ("a1", 2.0), ("a2", 4.0), ("b1", 1.0), ("b2", 2.0)],
                &[("alpha", 0.3), ("beta", 0.8), ("M1", 1.0), ("a1", 2.0), ("a2", 4.0), ("b1", 1.0), ("b2", 2.0)],
            ]),
            grid: vec![(0.1, 2.0, 20), (0.0, 2.0, 21)],
        },
        4 => Figure {
            number,
            example: "dispersive-kdv",
            caption: "dispersive KdV with n = 2, a1 = a2 = lambda1 = 1, lambda2 = 2 at t = 1",
            panels: panels(&[&[
                ("n", 2.0),
                ("alpha", 0.8),
                ("beta1", 0.7),
                ("beta2", 0.9),
                ("a1", 1.0),
                ("a2", 1.0),
                ("lambda1", 1.0),
                ("lambda2", 2.0),
            ]]),
            grid: vec![(1.0, 1.0, 1), (0.0, 2.0, 21), (0.0, 2.0, 21)],
        },
        5 => Figure {
            number,
            example: "boussinesq-2d",
            caption: "Boussinesq equation in 1+2 dimensions at t = 1 for several alpha, gamma",
            panels: panels(&[
                &[("alpha", 0.5), ("gamma", 0.5)],
                &[("alpha", 0.9), ("gamma", 0.6)],
                &[("alpha", 1.0), ("gamma", 1.0)],
            ]),
            grid: vec![(1.0, 1.0, 1), (0.0, 2.0, 21), (0.0, 2.0, 21)],
        },
        6 => Figure {
            number,
            example: "diffusion-like",
            caption: "diffusion-like equation at t = 1",
            panels: panels(&[
                &[("alpha", 0.7), ("beta", 0.8), ("gamma", 0.6)],
                &[("alpha", 1.0), ("beta", 1.0), ("gamma", 1.0)],
            ]),
            grid: vec![(1.0, 1.0, 1), (0.0, 2.0, 21), (0.0, 2.0, 21)],
        },
        _ => return Err(CatalogError::UnknownFigure(number)),
    };
    Ok(fig)
}
