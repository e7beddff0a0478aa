use std::f64::consts::PI;
use std::path::Path;

use super::{parse_design_file, SphericalDesign};
use crate::error::{Error, Result};
use crate::sphere::{PointSet, SpherePoint};

/// Names accepted by [`builtin_design`] besides `polygon(k)`.
pub const BUILTIN_NAMES: [&str; 5] = ["tetrahedron", "cube", "octahedron", "icosahedron", "dodecahedron"];

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        const BUNDLED: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../data/designs/", $name)))),*
        ];
    };
}

// Equal-weight designs on S², named `sfTTT.NNNNN` (general) and
// `ssTTT.NNNNN` (antipodally symmetric) after strength TTT and size NNNNN.
bundled!(
    "sf008.00042",
    "sf012.00086",
    "sf016.00146",
    "sf020.00222",
    "sf024.00314",
    "sf032.00546",
    "sf048.01202",
    "ss001.00002",
    "ss003.00006",
    "ss007.00032",
    "ss015.00122",
    "ss031.00498",
    "ss063.02018",
    "ss127.08192",
);

/// Names of the design files shipped with the crate.
pub fn bundled_design_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(name, _)| *name)
}

/// Raw text of a bundled design file.
pub fn bundled_file(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Strength encoded in a `sfTTT.NNNNN` / `ssTTT.NNNNN` file name.
pub(crate) fn strength_from_name(name: &str) -> Option<(usize, usize)> {
    let stem = Path::new(name).file_name()?.to_str()?;
    let rest = stem.strip_prefix("sf").or_else(|| stem.strip_prefix("ss"))?;
    let (t, n) = rest.split_once('.')?;
    Some((t.parse().ok()?, n.parse().ok()?))
}

fn points(rows: &[[f64; 3]]) -> Result<PointSet> {
    PointSet::new(
        rows.iter()
            .map(|r| SpherePoint::normalized(r.to_vec()))
            .collect::<Result<_>>()?,
    )
}

fn signs3(base: [f64; 3]) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                let p = [sx * base[0], sy * base[1], sz * base[2]];
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Vertices of the regular solids (on S²) and regular polygons (on S¹).
///
/// Claimed strengths: tetrahedron 2, cube and octahedron 3, icosahedron and
/// dodecahedron 5, `polygon(k)` k − 1.
pub fn builtin_design(name: &str) -> Result<SphericalDesign> {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let inv = 1.0 / golden;
    let name = name.trim();
    let (rows, strength): (Vec<[f64; 3]>, usize) = match name {
        "tetrahedron" => (
            vec![[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]],
            2,
        ),
        "cube" => (signs3([1.0, 1.0, 1.0]), 3),
        "octahedron" => (
            vec![
                [1.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, -1.0, 0.0],
                [0.0, 0.0, 1.0],
                [0.0, 0.0, -1.0],
            ],
            3,
        ),
        "icosahedron" => {
            let mut v = signs3([0.0, 1.0, golden]);
            v.extend(signs3([1.0, golden, 0.0]));
            v.extend(signs3([golden, 0.0, 1.0]));
            (v, 5)
        }
        "dodecahedron" => {
            let mut v = signs3([1.0, 1.0, 1.0]);
            v.extend(signs3([0.0, inv, golden]));
            v.extend(signs3([inv, golden, 0.0]));
            v.extend(signs3([golden, 0.0, inv]));
            (v, 5)
        }
        other => {
            let k = other
                .strip_prefix("polygon(")
                .and_then(|s| s.strip_suffix(')'))
                .and_then(|s| s.trim().parse::<usize>().ok())
                .ok_or_else(|| Error::UnknownDesign(other.to_string()))?;
            if k < 1 {
                return Err(Error::UnknownDesign(other.to_string()));
            }
            let pts = (0..k)
                .map(|i| SpherePoint::on_circle(2.0 * PI * i as f64 / k as f64))
                .collect();
            return Ok(SphericalDesign::new(PointSet::new(pts)?, k - 1));
        }
    };
    Ok(SphericalDesign::new(points(&rows)?, strength))
}

/// Looks a design up by built-in name, bundled file name, or file path.
///
/// The strength comes from `strength` when given, otherwise from the
/// built-in catalog or a `sfTTT.NNNNN`-style file name. Designs are returned
/// unverified; call [`SphericalDesign::verified`] to check them.
pub fn resolve_design(spec: &str, d: usize, strength: Option<usize>) -> Result<SphericalDesign> {
    let spec = spec.trim();
    if BUILTIN_NAMES.contains(&spec) || spec.starts_with("polygon(") {
        let design = builtin_design(spec)?;
        if design.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: design.dim(),
            });
        }
        return Ok(match strength {
            Some(t) => SphericalDesign::new(design.points().clone(), t),
            None => design,
        });
    }
    let path = Path::new(spec);
    let text = if path.exists() {
        std::fs::read_to_string(path)?
    } else if let Some(text) = bundled_file(spec) {
        if d != 2 {
            return Err(Error::DimensionMismatch { expected: d, found: 2 });
        }
        text.to_string()
    } else {
        return Err(Error::UnknownDesign(spec.to_string()));
    };
    let pts = parse_design_file(&text, d)?;
    let t = match (strength, strength_from_name(spec)) {
        (Some(t), _) => t,
        (None, Some((t, n))) => {
            if n != pts.len() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("{spec} names {n} points but contains {}", pts.len()),
                });
            }
            t
        }
        (None, None) => {
            return Err(Error::InvalidArgument(format!(
                "cannot infer the strength of {spec}; pass it explicitly"
            )))
        }
    };
    Ok(SphericalDesign::new(pts, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::DEFAULT_TOL;

    #[test]
    fn builtin_sizes_and_strengths() {
        for (name, n, t) in [
            ("tetrahedron", 4, 2),
            ("cube", 8, 3),
            ("octahedron", 6, 3),
            ("icosahedron", 12, 5),
            ("dodecahedron", 20, 5),
            ("polygon(11)", 11, 10),
        ] {
            let d = builtin_design(name).unwrap().verified(DEFAULT_TOL);
            assert_eq!(d.len(), n, "{name}");
            assert_eq!(d.strength(), t, "{name}");
            assert!(d.is_verified(), "{name}: {:?}", d.check());
            // and not one degree more
            let over = crate::designs::verify_design(d.points(), t + 1, DEFAULT_TOL);
            assert!(!over.verified, "{name}");
        }
        assert!(matches!(builtin_design("torus"), Err(Error::UnknownDesign(_))));
        assert!(builtin_design("polygon(0)").is_err());
        assert!(builtin_design("polygon(x)").is_err());
    }

    #[test]
    fn bundled_files_parse_with_named_sizes() {
        for name in bundled_design_names() {
            let (t, n) = strength_from_name(name).unwrap();
            let design = resolve_design(name, 2, None).unwrap();
            assert_eq!(design.len(), n);
            assert_eq!(design.strength(), t);
        }
    }

    #[test]
    fn resolve_errors() {
        assert!(matches!(resolve_design("nope.txt", 2, None), Err(Error::UnknownDesign(_))));
        assert!(resolve_design("octahedron", 1, None).is_err());
        assert_eq!(resolve_design("octahedron", 2, Some(1)).unwrap().strength(), 1);
    }
}
