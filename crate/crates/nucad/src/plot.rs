//! SVG pictures of 2-variable trees, drawn by locating the centre of every
//! pixel of a grid.

use std::fmt::Write as _;

use num_bigint::BigInt;

use nucad_core::{locate, Label, Location, NuCadTree, Rational, TreeError};

#[derive(Debug, thiserror::Error)]
pub enum PlotError {
    #[error("plots need a 2-variable tree, this one has {0}")]
    Dimension(usize),
    #[error("empty plot window")]
    Window,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Plot window `[x0, x1] x [y0, y1]` and grid size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotSpec {
    pub x: (Rational, Rational),
    pub y: (Rational, Rational),
    pub columns: usize,
    pub rows: usize,
}

/// FNV-1a, so that colours are stable across platforms and releases.
fn hue(label: &Label) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    for b in label.to_string().bytes() {
        h ^= u32::from(b);
        h = h.wrapping_mul(0x0100_0193);
    }
    h % 360
}

fn colour(loc: &Location) -> String {
    match loc {
        Location::Leaf { label, truth } => {
            let (s, l) = if *truth { (85, 50) } else { (30, 75) };
            format!("hsl({},{s}%,{l}%)", hue(label))
        }
        Location::Boundary { .. } => "#000000".into(),
    }
}

fn grid_point(lo: &Rational, hi: &Rational, i: usize, n: usize) -> Rational {
    let t = Rational::new(BigInt::from(2 * i + 1), BigInt::from(2 * n));
    lo + (hi - lo) * t
}

/// Renders the tree. Leaf colour hue comes from the label; true leaves are
/// saturated, false ones pale, boundary hits black.
pub fn render_svg(tree: &NuCadTree, spec: &PlotSpec) -> Result<String, PlotError> {
    if tree.dimension() != 2 {
        return Err(PlotError::Dimension(tree.dimension()));
    }
    if spec.x.0 >= spec.x.1 || spec.y.0 >= spec.y.1 || spec.columns == 0 || spec.rows == 0 {
        return Err(PlotError::Window);
    }
    let (w, h) = (spec.columns, spec.rows);
    let mut out = String::new();
    writeln!(
        out,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\" shape-rendering=\"crispEdges\">"
    )
    .expect("write to string");
    let xs: Vec<Rational> = (0..w).map(|i| grid_point(&spec.x.0, &spec.x.1, i, w)).collect();
    for row in 0..h {
        // Row 0 is the top of the picture.
        let y = grid_point(&spec.y.0, &spec.y.1, h - 1 - row, h);
        let mut run: Option<(usize, String)> = None;
        for (col, x) in xs.iter().enumerate() {
            let c = colour(&locate(tree, &[x.clone(), y.clone()])?);
            match &run {
                Some((_, rc)) if *rc == c => {}
                _ => {
                    if let Some((start, rc)) = run.take() {
                        rect(&mut out, start, col, row, &rc);
                    }
                    run = Some((col, c));
                }
            }
        }
        if let Some((start, rc)) = run {
            rect(&mut out, start, w, row, &rc);
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn rect(out: &mut String, start: usize, end: usize, row: usize, colour: &str) {
    writeln!(
        out,
        "<rect x=\"{start}\" y=\"{row}\" width=\"{}\" height=\"1\" fill=\"{colour}\"/>",
        end - start
    )
    .expect("write to string");
}
