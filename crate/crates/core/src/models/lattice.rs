use std::fmt;
use std::str::FromStr;

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Torus,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Torus => "torus",
        })
    }
}

impl FromStr for Boundary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "open" => Ok(Boundary::Open),
            "torus" => Ok(Boundary::Torus),
            other => Err(format!("unknown boundary `{other}`")),
        }
    }
}

/// Hypercubic lattice of side `N` in `d` dimensions.
///
/// Sites are numbered row-major: coordinate `c[0]` is the slowest index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeGeometry {
    pub dim: u32,
    pub side: usize,
    pub boundary: Boundary,
}

impl LatticeGeometry {
    pub fn new(dim: u32, side: usize, boundary: Boundary) -> Result<Self, ModelError> {
        let geom = Self {
            dim,
            side,
            boundary,
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn chain(side: usize, boundary: Boundary) -> Result<Self, ModelError> {
        Self::new(1, side, boundary)
    }

    pub fn square(side: usize, boundary: Boundary) -> Result<Self, ModelError> {
        Self::new(2, side, boundary)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.dim == 0 {
            return Err(ModelError::Geometry("dimension must be positive".into()));
        }
        if self.side == 0 {
            return Err(ModelError::Geometry("side length must be positive".into()));
        }
        // A side-2 torus would wrap each edge onto itself and double the coupling.
        if self.boundary == Boundary::Torus && self.side < 3 {
            return Err(ModelError::Geometry(format!(
                "torus requires N >= 3, got N = {}",
                self.side
            )));
        }
        Ok(())
    }

    pub fn num_sites(&self) -> usize {
        self.side.pow(self.dim)
    }

    pub fn coords(&self, site: usize) -> Vec<usize> {
        let mut c = vec![0; self.dim as usize];
        let mut rest = site;
        for k in (0..self.dim as usize).rev() {
            c[k] = rest % self.side;
            rest /= self.side;
        }
        c
    }

    pub fn site(&self, coords: &[usize]) -> usize {
        coords.iter().fold(0, |acc, &c| acc * self.side + c)
    }

    /// Site at `origin + offset`, wrapped on the torus; `None` when it falls
    /// off an open lattice.
    pub fn offset_site(&self, origin: usize, offset: &[i64]) -> Option<usize> {
        let n = self.side as i64;
        let mut c = self.coords(origin);
        for (k, &o) in offset.iter().enumerate() {
            let v = c[k] as i64 + o;
            c[k] = match self.boundary {
                Boundary::Torus => v.rem_euclid(n) as usize,
                Boundary::Open if (0..n).contains(&v) => v as usize,
                Boundary::Open => return None,
            };
        }
        Some(self.site(&c))
    }

    /// Nearest-neighbor pairs `(i, j)` with `i` the site the bond leaves from
    /// in the positive direction.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in 0..self.num_sites() {
            for k in 0..self.dim as usize {
                let mut step = vec![0i64; self.dim as usize];
                step[k] = 1;
                if let Some(t) = self.offset_site(s, &step) {
                    out.push((s, t));
                }
            }
        }
        out
    }

    /// Sites whose coordinate sum is even.
    pub fn checkerboard(&self) -> Vec<usize> {
        (0..self.num_sites())
            .filter(|&s| self.coords(s).iter().sum::<usize>() % 2 == 0)
            .collect()
    }

    pub fn is_bipartite(&self) -> bool {
        self.boundary == Boundary::Open || self.side.is_multiple_of(2)
    }

    /// One-step translation along axis `axis` (torus only).
    pub fn translation(&self, axis: usize) -> Vec<usize> {
        let mut step = vec![0i64; self.dim as usize];
        step[axis] = 1;
        (0..self.num_sites())
            .map(|s| self.offset_site(s, &step).expect("torus translation"))
            .collect()
    }
}
