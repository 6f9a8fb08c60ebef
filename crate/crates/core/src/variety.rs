//! Tensor format specifications.
//!
//! A format is either a Segre–Veronese variety (product of projective spaces
//! embedded by a multidegree, with plain Segre and Veronese as special
//! cases) or the moment variety of a one-dimensional Gaussian. Construction
//! validates the combinatorics once, so every other module can assume a
//! well-formed format.

use std::fmt;

/// A validated tensor format.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VarietySpec {
    /// `P^{n_1} x ... x P^{n_s}` embedded by forms of multidegree
    /// `(d_1, ..., d_s)`.
    SegreVeronese { dims: Vec<u32>, degs: Vec<u32> },
    /// Moments `m_0, ..., m_d` of a univariate Gaussian, as a surface in
    /// `P^d` parameterized by mean and variance.
    GaussianMoment1D { d: u32 },
}

/// Ambient data of a format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AmbientInfo {
    /// Number of homogeneous coordinates (vector-space dimension of the
    /// linear span).
    pub coords: u64,
    /// Dimension of the projective variety itself.
    pub variety_dim: u64,
}

impl AmbientInfo {
    /// Dimension of the ambient projective space, `coords - 1`.
    pub fn projective_dim(&self) -> u64 {
        self.coords - 1
    }
}

/// Rejected format descriptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecError {
    NoFactors,
    ZeroDim { index: usize },
    ZeroDeg { index: usize },
    LengthMismatch { dims: usize, degs: usize },
    MomentDegreeTooSmall { d: u32 },
    FormatTooLarge,
    Degenerate { coords: u64, dim: u64 },
    Parse { offset: usize, message: String },
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::NoFactors => write!(f, "format has no factors"),
            SpecError::ZeroDim { index } => write!(
                f,
                "factor {index} has dimension 0; each projective factor needs dimension at least 1"
            ),
            SpecError::ZeroDeg { index } => write!(
                f,
                "factor {index} has degree 0; each embedding degree must be at least 1"
            ),
            SpecError::LengthMismatch { dims, degs } => {
                write!(f, "got {dims} dimensions but {degs} degrees")
            }
            SpecError::MomentDegreeTooSmall { d } => write!(
                f,
                "moment degree {d} is too small; the moment variety needs degree at least 3"
            ),
            SpecError::FormatTooLarge => {
                write!(f, "format too large: the coordinate count overflows 64 bits")
            }
            SpecError::Degenerate { coords, dim } => write!(
                f,
                "degenerate format: a variety of dimension {dim} needs at least {} coordinates, got {coords}",
                dim + 2
            ),
            SpecError::Parse { offset, message } => {
                write!(f, "parse error at byte {offset}: {message}")
            }
        }
    }
}

impl std::error::Error for SpecError {}

pub(crate) fn checked_binom(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut res: u64 = 1;
    for i in 1..=k {
        // Multiply then divide; the running product of i consecutive
        // integers is divisible by i!.
        let wide = res as u128 * (n - k + i) as u128 / i as u128;
        res = u64::try_from(wide).ok()?;
    }
    Some(res)
}

impl VarietySpec {
    pub fn segre_veronese(dims: Vec<u32>, degs: Vec<u32>) -> Result<Self, SpecError> {
        if dims.len() != degs.len() {
            return Err(SpecError::LengthMismatch { dims: dims.len(), degs: degs.len() });
        }
        if dims.is_empty() {
            return Err(SpecError::NoFactors);
        }
        if let Some(index) = dims.iter().position(|&n| n == 0) {
            return Err(SpecError::ZeroDim { index });
        }
        if let Some(index) = degs.iter().position(|&d| d == 0) {
            return Err(SpecError::ZeroDeg { index });
        }
        let spec = VarietySpec::SegreVeronese { dims, degs };
        spec.validated()
    }

    pub fn segre(dims: Vec<u32>) -> Result<Self, SpecError> {
        let degs = vec![1; dims.len()];
        VarietySpec::segre_veronese(dims, degs)
    }

    pub fn veronese(n: u32, d: u32) -> Result<Self, SpecError> {
        VarietySpec::segre_veronese(vec![n], vec![d])
    }

    pub fn gaussian_moment(d: u32) -> Result<Self, SpecError> {
        if d < 3 {
            return Err(SpecError::MomentDegreeTooSmall { d });
        }
        VarietySpec::GaussianMoment1D { d }.validated()
    }

    fn validated(self) -> Result<Self, SpecError> {
        let coords = self.try_coords().ok_or(SpecError::FormatTooLarge)?;
        let dim = self.dimension();
        if coords < dim + 2 {
            return Err(SpecError::Degenerate { coords, dim });
        }
        Ok(self)
    }

    fn try_coords(&self) -> Option<u64> {
        match self {
            VarietySpec::SegreVeronese { dims, degs } => {
                let mut coords: u64 = 1;
                for (&n, &d) in dims.iter().zip(degs) {
                    let b = checked_binom(u64::from(n) + u64::from(d), u64::from(d))?;
                    coords = coords.checked_mul(b)?;
                }
                Some(coords)
            }
            VarietySpec::GaussianMoment1D { d } => Some(u64::from(*d) + 1),
        }
    }

    /// Dimension of the variety as a projective variety.
    pub fn dimension(&self) -> u64 {
        match self {
            VarietySpec::SegreVeronese { dims, .. } => {
                dims.iter().map(|&n| u64::from(n)).sum()
            }
            VarietySpec::GaussianMoment1D { .. } => 2,
        }
    }

    pub fn ambient(&self) -> AmbientInfo {
        AmbientInfo {
            // Validated construction guarantees this fits.
            coords: self.try_coords().expect("validated format"),
            variety_dim: self.dimension(),
        }
    }

    /// Expected dimension of the `k`-th secant variety: the parameter count
    /// `k(n+1) - 1` capped by the ambient projective dimension.
    pub fn expected_secant_dim(&self, k: u64) -> u64 {
        let a = self.ambient();
        (k * (a.variety_dim + 1)).saturating_sub(1).min(a.projective_dim())
    }

    /// Whether a general point of the embedded variety lies on a line
    /// contained in it. Segre–Veronese embeddings carry lines exactly along
    /// degree-1 factors; the Gaussian moment surface is ruled by
    /// variance-direction lines only for moment degree 3, where the top
    /// moment is still linear in the variance.
    pub fn is_uniruled_by_lines(&self) -> bool {
        match self {
            VarietySpec::SegreVeronese { degs, .. } => degs.contains(&1),
            VarietySpec::GaussianMoment1D { d } => *d == 3,
        }
    }

    /// Factor data for product formats; `None` for the moment variety.
    pub fn factors(&self) -> Option<(&[u32], &[u32])> {
        match self {
            VarietySpec::SegreVeronese { dims, degs } => Some((dims, degs)),
            VarietySpec::GaussianMoment1D { .. } => None,
        }
    }

    /// True for product formats where every degree is 1.
    pub fn is_segre(&self) -> bool {
        matches!(self, VarietySpec::SegreVeronese { degs, .. } if degs.iter().all(|&d| d == 1))
    }
}

impl fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(xs: &[u32]) -> String {
            xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        }
        match self {
            VarietySpec::SegreVeronese { dims, degs } => {
                if degs.iter().all(|&d| d == 1) {
                    write!(f, "segre:{}", join(dims))
                } else if dims.len() == 1 {
                    write!(f, "veronese:{},{}", dims[0], degs[0])
                } else {
                    write!(f, "sv:{}/{}", join(dims), join(degs))
                }
            }
            VarietySpec::GaussianMoment1D { d } => write!(f, "gauss:{d}"),
        }
    }
}

fn parse_err(offset: usize, message: impl Into<String>) -> SpecError {
    SpecError::Parse { offset, message: message.into() }
}

/// Splits `tail` (located at byte `base` of the original input) on `sep` and
/// parses each piece as a `u32`, reporting offsets into the original input.
/// An empty tail yields an empty list.
fn parse_list(tail: &str, base: usize, sep: char) -> Result<Vec<u32>, SpecError> {
    if tail.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = base;
    for piece in tail.split(sep) {
        match piece.parse::<u32>() {
            Ok(v) => out.push(v),
            Err(_) => {
                let message = if piece.is_empty() {
                    "expected a number".to_string()
                } else {
                    format!("`{piece}` is not a valid number")
                };
                return Err(parse_err(offset, message));
            }
        }
        offset += piece.len() + sep.len_utf8();
    }
    Ok(out)
}

/// Parses a format description.
///
/// Grammar: `segre:n1,n2,...` | `veronese:n,d` | `sv:n1,.../d1,...` |
/// `gauss:d` | `shape:a1xa2x...` where `shape` gives tensor side lengths
/// (so `shape:2x2x3` is `segre:1,1,2`).
pub fn parse_spec(input: &str) -> Result<VarietySpec, SpecError> {
    let Some(colon) = input.find(':') else {
        return Err(parse_err(
            0,
            "expected `kind:...` where kind is segre, veronese, sv, gauss, or shape",
        ));
    };
    let kind = &input[..colon];
    let tail = &input[colon + 1..];
    let base = colon + 1;
    match kind {
        "segre" => VarietySpec::segre(parse_list(tail, base, ',')?),
        "veronese" => {
            let nums = parse_list(tail, base, ',')?;
            if nums.len() != 2 {
                return Err(parse_err(base, "expected exactly two numbers: n,d"));
            }
            VarietySpec::veronese(nums[0], nums[1])
        }
        "sv" => {
            let Some(slash) = tail.find('/') else {
                return Err(parse_err(base, "expected dims/degs, e.g. sv:1,1/3,3"));
            };
            let dims = parse_list(&tail[..slash], base, ',')?;
            let degs = parse_list(&tail[slash + 1..], base + slash + 1, ',')?;
            VarietySpec::segre_veronese(dims, degs)
        }
        "gauss" => {
            let nums = parse_list(tail, base, ',')?;
            if nums.len() != 1 {
                return Err(parse_err(base, "expected a single moment degree"));
            }
            VarietySpec::gaussian_moment(nums[0])
        }
        "shape" => {
            let sides = parse_list(tail, base, 'x')?;
            let mut offset = base;
            let mut dims = Vec::with_capacity(sides.len());
            for side in sides {
                if side < 2 {
                    return Err(parse_err(offset, "tensor side lengths must be at least 2"));
                }
                dims.push(side - 1);
                offset += side.to_string().len() + 1;
            }
            VarietySpec::segre(dims)
        }
        other => Err(parse_err(0, format!("unknown format kind `{other}`"))),
    }
}
