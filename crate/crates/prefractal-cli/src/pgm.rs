//! Binary PGM (P5) exports of grid rasters.
//!
//! Rows are written top-down, so the image matches the scene with y up.
//! Occupancy uses maxval 255 with occupied cells white; the distance field
//! uses maxval 65535 big-endian, scaled so the largest distance maps to
//! 65535 (an empty range degenerates to all black).

use prefractal::raster::{DistanceField, Grid};

fn header(width: usize, height: usize, maxval: u32) -> Vec<u8> {
    format!("P5\n{width} {height}\n{maxval}\n").into_bytes()
}

/// Occupied cells white on black.
pub fn occupancy_pgm(grid: &Grid) -> Vec<u8> {
    let (w, h) = (grid.meta.width, grid.meta.height);
    let mut out = header(w, h, 255);
    out.reserve(w * h);
    for j in (0..h).rev() {
        for i in 0..w {
            out.push(if grid.occupied(i, j) { 255 } else { 0 });
        }
    }
    out
}

/// Distance to the occupied set, scaled to the full 16-bit range.
pub fn distance_pgm(field: &DistanceField) -> Vec<u8> {
    let (w, h) = (field.meta.width, field.meta.height);
    let max_sq = field.sq.iter().copied().max().unwrap_or(0);
    let max_dist = (max_sq as f64).sqrt();
    let mut out = header(w, h, 65535);
    out.reserve(2 * w * h);
    for j in (0..h).rev() {
        for i in 0..w {
            let sq = field.sq[field.meta.index(i, j)];
            let value = if max_sq == 0 {
                0u16
            } else {
                ((sq as f64).sqrt() / max_dist * 65535.0).round() as u16
            };
            out.extend_from_slice(&value.to_be_bytes());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use prefractal::ifs::{build_preset, generate_scene};
    use prefractal::raster::{distance_to_set, rasterize};

    fn carpet_grid() -> Grid {
        let scene = generate_scene(&build_preset("sierpinski-carpet").unwrap(), 1).unwrap();
        rasterize(&scene, 27).unwrap()
    }

    #[test]
    fn occupancy_has_p5_header_and_one_byte_per_cell() {
        let grid = carpet_grid();
        let bytes = occupancy_pgm(&grid);
        let header = format!("P5\n{} {}\n255\n", grid.meta.width, grid.meta.height);
        assert!(bytes.starts_with(header.as_bytes()));
        assert_eq!(bytes.len(), header.len() + grid.meta.cells());
        let white = bytes[header.len()..].iter().filter(|&&b| b == 255).count();
        assert_eq!(white, grid.occupied_count());
    }

    #[test]
    fn distance_is_sixteen_bit_and_peaks_at_maxval() {
        let grid = carpet_grid();
        let field = distance_to_set(&grid).unwrap();
        let bytes = distance_pgm(&field);
        let header = format!("P5\n{} {}\n65535\n", grid.meta.width, grid.meta.height);
        assert!(bytes.starts_with(header.as_bytes()));
        let body = &bytes[header.len()..];
        assert_eq!(body.len(), 2 * grid.meta.cells());
        let max = body
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .max()
            .unwrap();
        assert_eq!(max, 65535);
    }

    #[test]
    fn occupied_cells_render_at_zero_distance() {
        let grid = carpet_grid();
        let field = distance_to_set(&grid).unwrap();
        let bytes = distance_pgm(&field);
        let header_len = format!("P5\n{} {}\n65535\n", grid.meta.width, grid.meta.height).len();
        let body = &bytes[header_len..];
        // Top-left image pixel is cell (0, height - 1), a padding cell.
        let j = grid.meta.height - 1;
        for i in 0..grid.meta.width {
            let pixel = 2 * i;
            let value = u16::from_be_bytes([body[pixel], body[pixel + 1]]);
            let expected_zero = grid.occupied(i, j);
            assert_eq!(value == 0, expected_zero, "cell ({i}, {j})");
        }
    }

    #[test]
    fn exports_are_deterministic() {
        let grid = carpet_grid();
        let field = distance_to_set(&grid).unwrap();
        assert_eq!(occupancy_pgm(&grid), occupancy_pgm(&grid));
        assert_eq!(distance_pgm(&field), distance_pgm(&field));
    }
}
