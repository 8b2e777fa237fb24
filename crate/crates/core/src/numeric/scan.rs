//! Non-vanishing scans of F, p16 and G over grids of points.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use astro_float::BigFloat;

use super::complex::ComplexF;
use super::eval::{alpha_value, NumPoint};
use super::roots::RootLab;
use crate::catalog::Catalog;
use crate::domain::Symbolic;
use crate::error::{EngineError, Result};
use crate::kernel::point::eval_at_angle;
use crate::kernel::rational::{parse_gaussian, parse_rational, rat};
use crate::kernel::{AlphaTag, Coeff, GaussianRational, Polynomial, QuadExt, Rational, Var};

/// One grid row: α tag, a (with ā = conj a), ρ, b.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    pub alpha: AlphaTag,
    pub a: GaussianRational,
    pub rho: Rational,
    pub b: Rational,
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={},a={},rho={},b={}", self.alpha, self.a, self.rho, self.b)
    }
}

impl GridPoint {
    pub fn new(alpha: AlphaTag, a: GaussianRational, rho: Rational, b: Rational) -> Result<Self> {
        if rho == Rational::ZERO {
            return Err(EngineError::Config("rho must be nonzero".into()));
        }
        if b <= Rational::ZERO {
            return Err(EngineError::Config("b must be positive".into()));
        }
        Ok(GridPoint { alpha, a, rho, b })
    }

    pub fn num_point(&self, p: usize) -> NumPoint {
        NumPoint::at_tag(&self.alpha, &self.a, &self.rho, &self.b, p)
    }
}

/// Parse `alpha_tag,a_re,a_im,rho,b` rows; `#` starts a comment.
pub fn parse_grid(text: &str) -> Result<Vec<GridPoint>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| EngineError::Config(format!("grid line {}: bad {what}", n + 1));
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 5 {
            return Err(bad("field count"));
        }
        let alpha: AlphaTag = f[0].parse().map_err(|_| bad("alpha tag"))?;
        let re = parse_rational(f[1]).ok_or_else(|| bad("a_re"))?;
        let im = parse_rational(f[2]).ok_or_else(|| bad("a_im"))?;
        let rho = parse_rational(f[3]).ok_or_else(|| bad("rho"))?;
        let b = parse_rational(f[4]).ok_or_else(|| bad("b"))?;
        out.push(GridPoint::new(alpha, GaussianRational::new(re, im), rho, b)?);
    }
    if out.is_empty() {
        return Err(EngineError::Config("empty grid".into()));
    }
    Ok(out)
}

pub const DEFAULT_RHOS: [(i64, i64); 5] = [(-2, 1), (-1, 1), (1, 2), (1, 1), (2, 1)];
pub const DEFAULT_BS: [(i64, i64); 3] = [(1, 2), (1, 1), (2, 1)];

/// (ρ, b) pairs of the default grid.
pub fn default_params() -> Vec<(Rational, Rational)> {
    let mut v = Vec::new();
    for (rn, rd) in DEFAULT_RHOS {
        for (bn, bd) in DEFAULT_BS {
            v.push((rat(rn, rd), rat(bn, bd)));
        }
    }
    v
}

/// a = 0 at the given angle over the default (ρ, b) pairs.
pub fn default_grid(alpha: AlphaTag) -> Vec<GridPoint> {
    default_params()
        .into_iter()
        .map(|(rho, b)| GridPoint {
            alpha: alpha.clone(),
            a: GaussianRational::zero(),
            rho,
            b,
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    F,
    P16,
    G,
}

impl FromStr for Target {
    type Err = EngineError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" => Ok(Target::F),
            "p16" => Ok(Target::P16),
            "G" => Ok(Target::G),
            o => Err(EngineError::Config(format!("unknown scan target `{o}`"))),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::F => "F",
            Target::P16 => "p16",
            Target::G => "G",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RowStatus {
    Nonzero,
    /// Exactly zero, or below the magnitude threshold for numeric rows.
    Zero,
    Pole,
    Error(String),
}

#[derive(Clone, Debug)]
pub struct ScanRow {
    pub target: Target,
    pub point: GridPoint,
    /// The p23 root for G rows.
    pub branch: Option<String>,
    pub value: String,
    pub magnitude: f64,
    pub exact: bool,
    pub status: RowStatus,
}

/// Scan one target over a grid. F and p16 are exact; G is numeric with `g_min` as threshold.
pub fn nonvanishing_scan(
    target: Target,
    grid: &[GridPoint],
    cat: &Catalog<Symbolic>,
    lab: &RootLab,
    g_min: f64,
) -> Result<Vec<ScanRow>> {
    match target {
        Target::F | Target::P16 => exact_scan(target, grid, cat),
        Target::G => {
            let rows: Vec<Vec<ScanRow>> = grid.par_iter().map(|pt| g_rows(pt, lab, g_min)).collect();
            Ok(rows.into_iter().flatten().collect())
        }
    }
}

/// Exact values of F or p16 over a grid; the special angles use quadratic extensions.
pub fn exact_scan(target: Target, grid: &[GridPoint], cat: &Catalog<Symbolic>) -> Result<Vec<ScanRow>> {
    let id = match target {
        Target::F => "F",
        Target::P16 => "p16",
        Target::G => return Err(EngineError::Config("G has no exact scan".into())),
    };
    let e = cat.get(id)?;
    Ok(grid
        .par_iter()
        .map(|pt| {
            let rho = GaussianRational::real(pt.rho.clone());
            let b = GaussianRational::real(pt.b.clone());
            let (value, magnitude, status) = match eval_at_angle(e, &pt.alpha, &pt.a, &rho, &b) {
                Ok(v) => {
                    let (re, im) = v.to_f64_pair();
                    let st = if Coeff::is_zero(&v) { RowStatus::Zero } else { RowStatus::Nonzero };
                    (v.to_string(), re.hypot(im), st)
                }
                Err(e) if e.is_pole() => (String::new(), f64::NAN, RowStatus::Pole),
                Err(e) => (String::new(), f64::NAN, RowStatus::Error(e.to_string())),
            };
            ScanRow {
                target,
                point: pt.clone(),
                branch: None,
                value,
                magnitude,
                exact: true,
                status,
            }
        })
        .collect())
}

fn g_rows(pt: &GridPoint, lab: &RootLab, g_min: f64) -> Vec<ScanRow> {
    let np = pt.num_point(lab.cfg.precision);
    let row = |branch: Option<String>, value: String, magnitude: f64, status| ScanRow {
        target: Target::G,
        point: pt.clone(),
        branch,
        value,
        magnitude,
        exact: false,
        status,
    };
    match lab.g_at(&np) {
        Ok(vals) => vals
            .into_iter()
            .map(|(c, g)| match g {
                Ok(g) => {
                    let m = g.abs_f64();
                    let st = if m > g_min { RowStatus::Nonzero } else { RowStatus::Zero };
                    row(Some(c.root.to_string()), g.to_string(), m, st)
                }
                Err(e) => row(Some(c.root.to_string()), String::new(), f64::NAN, RowStatus::Error(e.to_string())),
            })
            .collect(),
        Err(e) if e.is_pole() => vec![row(None, String::new(), f64::NAN, RowStatus::Pole)],
        Err(e) => vec![row(None, String::new(), f64::NAN, RowStatus::Error(e.to_string()))],
    }
}

/// Whether F(π/4, 0, 0) equals 15ρ/(8b) identically in ρ and b.
///
/// s and c are set to √2/2 and a = ā = 0 while ρ, b stay free, so the check
/// is 8b·N − 15ρ·D ≡ 0 for F = N/D over ℚ(i, √2)[ρ, b].
pub fn f_quarter_pi_identity(cat: &Catalog<Symbolic>) -> Result<bool> {
    let f = cat.get("F")?;
    let (s, c) = AlphaTag::Pi4.sin_cos();
    let zero = QuadExt::base(GaussianRational::zero());
    let vals = [Some(s), Some(c), Some(zero.clone()), Some(zero), None, None];
    let lift = |q: &GaussianRational| QuadExt::base(q.clone());
    let n = f.num().substitute(&vals, lift);
    let mut d: Polynomial<QuadExt> = Polynomial::one();
    for fac in f.den_factors() {
        d = d.mul(&fac.poly.substitute(&vals, lift).pow(fac.exp)?)?;
    }
    if d.is_zero() {
        return Err(EngineError::PoleAtPoint);
    }
    let k = |n: i64| Polynomial::constant(QuadExt::from_int(n));
    let lhs = k(8).mul(&Polynomial::var(Var::B))?.mul(&n)?;
    let rhs = k(15).mul(&Polynomial::var(Var::Rho))?.mul(&d)?;
    Ok(lhs.sub(&rhs)?.is_zero())
}

/// Parse a `k=v,...` point for α tag, a, ρ, b.
pub fn parse_point_spec(spec: &str) -> Result<GridPoint> {
    let mut alpha = AlphaTag::Pi4;
    let mut a = GaussianRational::zero();
    let mut rho = rat(1, 1);
    let mut b = rat(1, 1);
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| EngineError::Config(format!("expected key=value, got `{part}`")))?;
        let bad = || EngineError::Config(format!("bad value for `{k}`: `{v}`"));
        match k.trim() {
            "alpha" => alpha = v.parse()?,
            "a" => a = parse_gaussian(v).ok_or_else(bad)?,
            "rho" => rho = parse_rational(v).ok_or_else(bad)?,
            "b" => b = parse_rational(v).ok_or_else(bad)?,
            other => return Err(EngineError::Config(format!("unknown key `{other}`"))),
        }
    }
    GridPoint::new(alpha, a, rho, b)
}

/// A point given on the command line: α exact (tag) or a float in radians.
#[derive(Clone, Debug)]
pub struct AtSpec {
    pub tag: Option<AlphaTag>,
    pub alpha: BigFloat,
    pub a: GaussianRational,
    pub rho: Rational,
    pub b: Rational,
}

impl AtSpec {
    /// `alpha=pi/4|pi/3|<radians>` or `t=<rational>`, plus `a`, `rho`, `b` (defaults 0, 1, 1).
    pub fn parse(spec: &str, p: usize) -> Result<Self> {
        let mut tag = Some(AlphaTag::Pi4);
        let mut alpha = None;
        let mut a = GaussianRational::zero();
        let mut rho = rat(1, 1);
        let mut b = rat(1, 1);
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| EngineError::Config(format!("expected key=value, got `{part}`")))?;
            let v = v.trim();
            let bad = || EngineError::Config(format!("bad value for `{k}`: `{v}`"));
            match k.trim() {
                "alpha" => match v {
                    "pi/4" | "π/4" => tag = Some(AlphaTag::Pi4),
                    "pi/3" | "π/3" => tag = Some(AlphaTag::Pi3),
                    _ => {
                        let x = v.parse::<f64>().map_err(|_| bad())?;
                        if !x.is_finite() {
                            return Err(bad());
                        }
                        tag = None;
                        alpha = Some(ComplexF::parse(v, p).map_err(|_| bad())?.re().clone());
                    }
                },
                "t" => {
                    let t = parse_rational(v).filter(|t| *t != Rational::ZERO).ok_or_else(bad)?;
                    tag = Some(AlphaTag::T(t));
                }
                "a" => a = parse_gaussian(v).ok_or_else(bad)?,
                "rho" => rho = parse_rational(v).ok_or_else(bad)?,
                "b" => b = parse_rational(v).ok_or_else(bad)?,
                other => return Err(EngineError::Config(format!("unknown key `{other}`"))),
            }
        }
        if rho == Rational::ZERO {
            return Err(EngineError::Config("rho must be nonzero".into()));
        }
        if b <= Rational::ZERO {
            return Err(EngineError::Config("b must be positive".into()));
        }
        let alpha = match (&tag, alpha) {
            (Some(t), _) => alpha_value(t, p),
            (None, Some(x)) => x,
            (None, None) => unreachable!("alpha is set whenever the tag is cleared"),
        };
        Ok(AtSpec { tag, alpha, a, rho, b })
    }

    /// The exact grid point when α is a tag.
    pub fn grid_point(&self) -> Option<GridPoint> {
        self.tag.as_ref().map(|t| GridPoint {
            alpha: t.clone(),
            a: self.a.clone(),
            rho: self.rho.clone(),
            b: self.b.clone(),
        })
    }

    pub fn num_point(&self, p: usize) -> NumPoint {
        match &self.tag {
            Some(t) => NumPoint::at_tag(t, &self.a, &self.rho, &self.b, p),
            None => NumPoint::at_alpha(
                &self.alpha,
                &ComplexF::from_gaussian(&self.a, p),
                &ComplexF::from_rational(&self.rho, p),
                &ComplexF::from_rational(&self.b, p),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("# header\npi/4, 0, 0, 1, 1\npi/3,1/2,-1,-2,0.5 # tail\n\n3/7,0,0,1,2\n").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[1].alpha, AlphaTag::Pi3);
        assert_eq!(g[1].a, GaussianRational::new(rat(1, 2), rat(-1, 1)));
        assert_eq!(g[1].b, rat(1, 2));
        assert_eq!(g[2].alpha, AlphaTag::T(rat(3, 7)));
        assert!(parse_grid("pi/4,0,0,1").is_err());
        assert!(parse_grid("pi/4,0,0,0,1").is_err());
        assert!(parse_grid("pi/4,0,0,1,-1").is_err());
        assert!(parse_grid("# nothing\n").is_err());
    }

    #[test]
    fn point_specs() {
        let p = parse_point_spec("alpha=pi/3, a=1+2i, rho=-1, b=1/2").unwrap();
        assert_eq!(p.alpha, AlphaTag::Pi3);
        assert_eq!(p.a, GaussianRational::new(rat(1, 1), rat(2, 1)));
        assert_eq!(p.rho, rat(-1, 1));
        assert!(parse_point_spec("x=1").is_err());
        assert!(parse_point_spec("rho=0").is_err());
    }

    #[test]
    fn at_specs() {
        let s = AtSpec::parse("alpha=pi/3,a=1-i,rho=2", 128).unwrap();
        assert_eq!(s.tag, Some(AlphaTag::Pi3));
        assert_eq!(s.grid_point().unwrap().a, GaussianRational::new(rat(1, 1), rat(-1, 1)));
        let s = AtSpec::parse("alpha=1.25,b=1/2", 128).unwrap();
        assert!(s.tag.is_none() && s.grid_point().is_none());
        assert!((crate::numeric::complex::real_to_f64(&s.alpha) - 1.25).abs() < 1e-15);
        let s = AtSpec::parse("t=1/2", 128).unwrap();
        assert_eq!(s.tag, Some(AlphaTag::T(rat(1, 2))));
        assert!(AtSpec::parse("alpha=abc", 128).is_err());
        assert!(AtSpec::parse("t=0", 128).is_err());
        assert!(AtSpec::parse("b=-1", 128).is_err());
    }

    #[test]
    fn default_grid_size() {
        assert_eq!(default_grid(AlphaTag::Pi4).len(), 15);
    }
}
