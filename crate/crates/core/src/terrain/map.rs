use std::fmt::Write as _;

use nalgebra::Vector2;

use super::TerrainError;

/// Regular 2.5-D elevation grid.
///
/// Sample (col, row) sits at `origin + (col, row) · resolution`; row 0 is at
/// the origin and rows advance along +Y. Heights between samples are
/// bilinearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightMap {
    resolution: f64,
    origin: Vector2<f64>,
    cols: usize,
    rows: usize,
    data: Vec<f64>,
}

impl HeightMap {
    pub const DEFAULT_RESOLUTION: f64 = 0.04;

    pub fn new(
        resolution: f64,
        origin: Vector2<f64>,
        cols: usize,
        rows: usize,
        data: Vec<f64>,
    ) -> Result<Self, TerrainError> {
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(TerrainError::InvalidMap(format!("resolution must be positive, got {resolution}")));
        }
        if cols < 2 || rows < 2 {
            return Err(TerrainError::InvalidMap(format!("grid must be at least 2x2, got {cols}x{rows}")));
        }
        if data.len() != cols * rows {
            return Err(TerrainError::InvalidMap(format!(
                "expected {} elevations, got {}",
                cols * rows,
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|h| !h.is_finite()) {
            return Err(TerrainError::InvalidMap(format!("elevation {i} is not finite")));
        }
        if !origin.iter().all(|v| v.is_finite()) {
            return Err(TerrainError::InvalidMap("origin is not finite".into()));
        }
        Ok(Self { resolution, origin, cols, rows, data })
    }

    /// Map of the given extent sampled from `f(x, y)`.
    pub fn from_fn(
        resolution: f64,
        origin: Vector2<f64>,
        cols: usize,
        rows: usize,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self, TerrainError> {
        let mut data = Vec::with_capacity(cols * rows);
        for r in 0..rows {
            for c in 0..cols {
                let x = origin.x + c as f64 * resolution;
                let y = origin.y + r as f64 * resolution;
                data.push(f(x, y));
            }
        }
        Self::new(resolution, origin, cols, rows, data)
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn origin(&self) -> Vector2<f64> {
        self.origin
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn cell(&self, col: usize, row: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    /// Upper corner of the covered region.
    pub fn max_corner(&self) -> Vector2<f64> {
        self.origin
            + Vector2::new((self.cols - 1) as f64, (self.rows - 1) as f64) * self.resolution
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let hi = self.max_corner();
        x >= self.origin.x && y >= self.origin.y && x <= hi.x && y <= hi.y
    }

    /// Bilinear elevation at (x, y).
    pub fn height(&self, x: f64, y: f64) -> Result<f64, TerrainError> {
        if !self.contains(x, y) {
            return Err(TerrainError::OutOfBounds { x, y });
        }
        let u = (x - self.origin.x) / self.resolution;
        let v = (y - self.origin.y) / self.resolution;
        let c0 = (u.floor() as usize).min(self.cols - 2);
        let r0 = (v.floor() as usize).min(self.rows - 2);
        let (fu, fv) = (u - c0 as f64, v - r0 as f64);
        let h00 = self.cell(c0, r0);
        let h10 = self.cell(c0 + 1, r0);
        let h01 = self.cell(c0, r0 + 1);
        let h11 = self.cell(c0 + 1, r0 + 1);
        Ok(h00 * (1.0 - fu) * (1.0 - fv) + h10 * fu * (1.0 - fv) + h01 * (1.0 - fu) * fv + h11 * fu * fv)
    }

    /// Elevation at a planar point; same as [`HeightMap::height`].
    pub fn height_query(&self, xy: &Vector2<f64>) -> Result<f64, TerrainError> {
        self.height(xy.x, xy.y)
    }

    /// Parses the ASCII `heightmap v1` format.
    pub fn parse(text: &str) -> Result<Self, TerrainError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut header = |key: &str, n: usize| -> Result<(usize, Vec<String>), TerrainError> {
            let (line, raw) = lines
                .next()
                .ok_or(TerrainError::Parse { line: 0, msg: format!("missing `{key}` line") })?;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            if toks.first() != Some(&key) || toks.len() != n + 1 {
                return Err(TerrainError::Parse { line, msg: format!("expected `{key}` with {n} value(s)") });
            }
            Ok((line, toks[1..].iter().map(|s| s.to_string()).collect()))
        };
        let (line, magic) = header("heightmap", 1)?;
        if magic[0] != "v1" {
            return Err(TerrainError::Parse { line, msg: format!("unsupported version `{}`", magic[0]) });
        }
        let float = |line: usize, s: &str| {
            s.parse::<f64>().map_err(|_| TerrainError::Parse { line, msg: format!("invalid number `{s}`") })
        };
        let int = |line: usize, s: &str| {
            s.parse::<usize>().map_err(|_| TerrainError::Parse { line, msg: format!("invalid count `{s}`") })
        };
        let (line, res) = header("resolution", 1)?;
        let resolution = float(line, &res[0])?;
        let (line, org) = header("origin", 2)?;
        let origin = Vector2::new(float(line, &org[0])?, float(line, &org[1])?);
        let (line, size) = header("size", 2)?;
        let (cols, rows) = (int(line, &size[0])?, int(line, &size[1])?);

        let mut data = Vec::with_capacity(cols * rows);
        for (line, raw) in lines {
            for tok in raw.split_whitespace() {
                data.push(float(line, tok)?);
            }
        }
        Self::new(resolution, origin, cols, rows, data)
    }

    /// Writes the ASCII `heightmap v1` format, one grid row per line.
    ///
    /// Values use Rust's shortest round-trip float formatting, so
    /// `parse(to_text(m)) == m` bit for bit.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "heightmap v1");
        let _ = writeln!(s, "resolution {:?}", self.resolution);
        let _ = writeln!(s, "origin {:?} {:?}", self.origin.x, self.origin.y);
        let _ = writeln!(s, "size {} {}", self.cols, self.rows);
        for row in self.data.chunks(self.cols) {
            let line: Vec<String> = row.iter().map(|h| format!("{h:?}")).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }
}
