//! Weight and diagonal sequences.
//!
//! A [`WeightSequence`] supplies the weights `w(i)` of a unilateral weighted
//! shift (or the entries `μ_i` of a diagonal operator). Built-in families
//! know their exact supremum and, where one exists in closed form, the
//! infimum of the geometric means `|w(0)···w(j-1)|^(1/j)`.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};

/// What an explicit list does when asked for an index past its end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutOfRange {
    #[default]
    Error,
    ZeroExtend,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightFamily {
    Explicit {
        values: Vec<Complex64>,
        policy: OutOfRange,
    },
    Constant(Complex64),
    /// `w(i) = a^{-i}` with `a >= 1`.
    Geometric(f64),
    /// `w(n) = sqrt((n+2)/(n+1))`.
    Dirichlet,
    /// `w(n) = sqrt((n+1)/(n+2))`.
    Bergman,
    /// `w(i) = δ_{i,i0}`.
    Kronecker(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    family: WeightFamily,
    bound: f64,
}

/// A finite-range scan of a sequence, paired with the exact value when the
/// family provides one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    /// Value over the scanned range only.
    pub finite: f64,
    /// Exact value over the whole sequence, when known.
    pub analytic: Option<f64>,
    /// Index (or `j` for geometric means) attaining `finite`.
    pub index: Option<usize>,
}

impl Aggregate {
    /// The analytic value when known, otherwise the finite-range one.
    pub fn value(&self) -> f64 {
        self.analytic.unwrap_or(self.finite)
    }

    /// True when [`Aggregate::value`] is only a finite-range estimate.
    pub fn is_estimate(&self) -> bool {
        self.analytic.is_none()
    }
}

impl WeightSequence {
    pub fn new(family: WeightFamily) -> Result<Self> {
        let bound = match &family {
            WeightFamily::Explicit { values, .. } => {
                if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                    return Err(Error::Invalid("non-finite weight in explicit list".into()));
                }
                values.iter().map(|v| v.norm()).fold(0.0, f64::max)
            }
            WeightFamily::Constant(c) => {
                if !c.re.is_finite() || !c.im.is_finite() {
                    return Err(Error::Invalid("non-finite constant weight".into()));
                }
                c.norm()
            }
            WeightFamily::Geometric(a) => {
                if !(a.is_finite() && *a >= 1.0) {
                    return Err(Error::GeometricBase(*a));
                }
                1.0
            }
            WeightFamily::Dirichlet => std::f64::consts::SQRT_2,
            WeightFamily::Bergman | WeightFamily::Kronecker(_) => 1.0,
        };
        Ok(Self { family, bound })
    }

    pub fn constant(c: f64) -> Self {
        Self::new(WeightFamily::Constant(Complex64::new(c, 0.0))).expect("finite constant")
    }

    pub fn geometric(a: f64) -> Result<Self> {
        Self::new(WeightFamily::Geometric(a))
    }

    pub fn dirichlet() -> Self {
        Self::new(WeightFamily::Dirichlet).unwrap()
    }

    pub fn bergman() -> Self {
        Self::new(WeightFamily::Bergman).unwrap()
    }

    pub fn kronecker(i0: usize) -> Self {
        Self::new(WeightFamily::Kronecker(i0)).unwrap()
    }

    /// Explicit list with the default (erroring) out-of-range policy.
    pub fn explicit(values: Vec<Complex64>) -> Result<Self> {
        Self::new(WeightFamily::Explicit {
            values,
            policy: OutOfRange::Error,
        })
    }

    pub fn explicit_real(values: &[f64]) -> Result<Self> {
        Self::explicit(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Opt into zero extension past the end of an explicit list. No effect on
    /// the other families.
    pub fn zero_extended(mut self) -> Self {
        if let WeightFamily::Explicit { policy, .. } = &mut self.family {
            *policy = OutOfRange::ZeroExtend;
        }
        self
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    /// Supremum of the moduli over the whole sequence. Always finite.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Number of indices at which the sequence is defined, `None` if all of them.
    pub fn defined_len(&self) -> Option<usize> {
        match &self.family {
            WeightFamily::Explicit {
                values,
                policy: OutOfRange::Error,
            } => Some(values.len()),
            _ => None,
        }
    }

    pub fn weight_at(&self, i: usize) -> Result<Complex64> {
        let re = |x: f64| Ok(Complex64::new(x, 0.0));
        match &self.family {
            WeightFamily::Explicit { values, policy } => match values.get(i) {
                Some(v) => Ok(*v),
                None => match policy {
                    OutOfRange::Error => Err(Error::OutOfRange {
                        index: i,
                        len: values.len(),
                    }),
                    OutOfRange::ZeroExtend => re(0.0),
                },
            },
            WeightFamily::Constant(c) => Ok(*c),
            WeightFamily::Geometric(a) => re(geometric_term(*a, i)),
            WeightFamily::Dirichlet => re(((i as f64 + 2.0) / (i as f64 + 1.0)).sqrt()),
            WeightFamily::Bergman => re(((i as f64 + 1.0) / (i as f64 + 2.0)).sqrt()),
            WeightFamily::Kronecker(i0) => re(if i == *i0 { 1.0 } else { 0.0 }),
        }
    }

    /// `|w(i)|`, the form in which weights enter the self-adjoint blocks.
    pub fn modulus_at(&self, i: usize) -> Result<f64> {
        self.weight_at(i).map(|w| w.norm())
    }

    /// Number of indices a scan over `[0, range)` can actually visit.
    fn scan_len(&self, range: usize) -> usize {
        self.defined_len().map_or(range, |len| range.min(len))
    }

    /// `max |w(i)|` for `0 <= i < range`, with the exact supremum attached
    /// for the families where it is attained at a known index.
    pub fn sup_modulus(&self, range: usize) -> Aggregate {
        let mut finite = 0.0;
        let mut index = None;
        for i in 0..self.scan_len(range) {
            let m = self.modulus_at(i).unwrap_or(0.0);
            if index.is_none() || m > finite {
                finite = m;
                index = Some(i);
            }
        }
        let analytic = match &self.family {
            // Monotone increasing towards 1: the supremum is never attained,
            // so only the range maximum is reported.
            WeightFamily::Bergman => None,
            WeightFamily::Explicit { .. }
            | WeightFamily::Constant(_)
            | WeightFamily::Geometric(_)
            | WeightFamily::Dirichlet
            | WeightFamily::Kronecker(_) => Some(self.bound),
        };
        Aggregate {
            finite,
            analytic,
            index,
        }
    }

    /// `min_{1<=j<=J} |w(0)···w(j-1)|^(1/j)`, with the infimum over all `j`
    /// attached where it is known in closed form.
    pub fn inf_geo_mean(&self, max_j: usize) -> Aggregate {
        let mut finite = f64::INFINITY;
        let mut index = None;
        let mut log_sum = 0.0;
        for j in 1..=self.scan_len(max_j) {
            let m = self.modulus_at(j - 1).unwrap_or(0.0);
            log_sum += m.ln();
            // j = 1 is the modulus itself, kept exact.
            let g = if j == 1 {
                m
            } else {
                (log_sum / j as f64).exp()
            };
            if g < finite {
                finite = g;
                index = Some(j);
            }
        }
        if index.is_none() {
            finite = 0.0;
        }
        let analytic = match &self.family {
            WeightFamily::Constant(c) => Some(c.norm()),
            WeightFamily::Geometric(a) => Some(if *a > 1.0 { 0.0 } else { 1.0 }),
            WeightFamily::Dirichlet => Some(1.0),
            WeightFamily::Bergman => Some(std::f64::consts::FRAC_1_SQRT_2),
            WeightFamily::Kronecker(_) => Some(0.0),
            WeightFamily::Explicit {
                policy: OutOfRange::ZeroExtend,
                ..
            } => Some(0.0),
            WeightFamily::Explicit { .. } => None,
        };
        Aggregate {
            finite,
            analytic,
            index,
        }
    }
}

fn geometric_term(a: f64, i: usize) -> f64 {
    if a == 1.0 {
        1.0
    } else {
        match i32::try_from(i) {
            Ok(i) => a.powi(-i),
            Err(_) => 0.0,
        }
    }
}

/// Parse `const:<c>`, `geom:<a>`, `dirichlet`, `bergman`, `kron:<i0>` or
/// `file:<path>`.
pub fn parse_weight_spec(spec: &str) -> Result<WeightSequence> {
    let spec = spec.trim();
    let malformed = || Error::MalformedSpec(spec.to_string());
    let number = |s: &str| -> Result<f64> {
        let v: f64 = s.trim().parse().map_err(|_| malformed())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(malformed())
        }
    };
    match spec.split_once(':') {
        None => match spec {
            "dirichlet" => Ok(WeightSequence::dirichlet()),
            "bergman" => Ok(WeightSequence::bergman()),
            _ => Err(malformed()),
        },
        Some(("const", c)) => Ok(WeightSequence::constant(number(c)?)),
        Some(("geom", a)) => WeightSequence::geometric(number(a)?),
        Some(("kron", i0)) => {
            let i0 = i0.trim().parse().map_err(|_| malformed())?;
            Ok(WeightSequence::kronecker(i0))
        }
        Some(("file", path)) if !path.is_empty() => read_weight_file(Path::new(path)),
        Some(_) => Err(malformed()),
    }
}

/// Read a flat JSON array of reals or of `[re, im]` pairs.
pub fn read_weight_file(path: &Path) -> Result<WeightSequence> {
    let fail = |reason: String| Error::WeightFile {
        path: path.display().to_string(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    let json: Value = serde_json::from_str(&text).map_err(|e| fail(e.to_string()))?;
    let items = json
        .as_array()
        .ok_or_else(|| fail("expected a JSON array".into()))?;
    if items.is_empty() {
        return Err(fail("empty weight list".into()));
    }
    let values = items
        .iter()
        .enumerate()
        .map(|(i, item)| match item {
            Value::Number(n) => n
                .as_f64()
                .map(|re| Complex64::new(re, 0.0))
                .ok_or_else(|| fail(format!("entry {i} is not a finite number"))),
            Value::Array(pair) => match pair.as_slice() {
                [re, im] => match (re.as_f64(), im.as_f64()) {
                    (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                    _ => Err(fail(format!("entry {i} is not a numeric [re, im] pair"))),
                },
                _ => Err(fail(format!("entry {i} is not a [re, im] pair"))),
            },
            _ => Err(fail(format!("entry {i} is neither a number nor a pair"))),
        })
        .collect::<Result<Vec<_>>>()?;
    WeightSequence::explicit(values)
}

impl std::str::FromStr for WeightSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_weight_spec(s)
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            WeightFamily::Explicit { values, policy } => {
                let tail = match policy {
                    OutOfRange::Error => "",
                    OutOfRange::ZeroExtend => ",zero-extended",
                };
                write!(f, "explicit[{}{tail}]", values.len())
            }
            WeightFamily::Constant(c) if c.im == 0.0 => write!(f, "const:{}", c.re),
            WeightFamily::Constant(c) => write!(f, "const:{}{:+}i", c.re, c.im),
            WeightFamily::Geometric(a) => write!(f, "geom:{a}"),
            WeightFamily::Dirichlet => f.write_str("dirichlet"),
            WeightFamily::Bergman => f.write_str("bergman"),
            WeightFamily::Kronecker(i0) => write!(f, "kron:{i0}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn family_values() {
        let g = WeightSequence::geometric(2.0).unwrap();
        assert_eq!(g.weight_at(3).unwrap().re, 0.125);
        let d = WeightSequence::dirichlet();
        assert!((d.weight_at(0).unwrap().re - 1.414_213_56).abs() < 1e-8);
        let k = WeightSequence::kronecker(1);
        assert_eq!(k.weight_at(1).unwrap().re, 1.0);
        assert_eq!(k.weight_at(0).unwrap().re, 0.0);
        let b = WeightSequence::bergman();
        assert_eq!(b.weight_at(0).unwrap().re, 0.5f64.sqrt());
    }

    #[test]
    fn geometric_one_is_unweighted() {
        let g = WeightSequence::geometric(1.0).unwrap();
        let c = WeightSequence::constant(1.0);
        for i in 0..1000 {
            assert_eq!(g.weight_at(i).unwrap(), c.weight_at(i).unwrap());
        }
    }

    #[test]
    fn explicit_out_of_range() {
        let w = WeightSequence::explicit_real(&[1.0, 0.5]).unwrap();
        assert_eq!(
            w.weight_at(2),
            Err(Error::OutOfRange { index: 2, len: 2 })
        );
        let z = w.zero_extended();
        assert_eq!(z.weight_at(7).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(
            parse_weight_spec("geom:2").unwrap().family(),
            &WeightFamily::Geometric(2.0)
        );
        assert_eq!(
            parse_weight_spec("const:1").unwrap().family(),
            &WeightFamily::Constant(Complex64::new(1.0, 0.0))
        );
        assert_eq!(
            parse_weight_spec("kron:3").unwrap().family(),
            &WeightFamily::Kronecker(3)
        );
        assert!(matches!(
            parse_weight_spec("geom:0.5"),
            Err(Error::GeometricBase(_))
        ));
        for bad in ["", "geom", "geom:", "const:abc", "kron:-1", "shift", "file:", "const:inf"] {
            assert!(
                matches!(parse_weight_spec(bad), Err(Error::MalformedSpec(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn parse_file_payloads() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, "[1, 0.5, 0.25]").unwrap();
        let w = parse_weight_spec(&format!("file:{}", f.path().display())).unwrap();
        match w.family() {
            WeightFamily::Explicit { values, policy } => {
                assert_eq!(values.len(), 3);
                assert_eq!(*policy, OutOfRange::Error);
                assert_eq!(values[2].re, 0.25);
            }
            other => panic!("unexpected family {other:?}"),
        }

        let mut g = tempfile::NamedTempFile::new().unwrap();
        write!(g, "[[1, 0], [0, -2]]").unwrap();
        let w = parse_weight_spec(&format!("file:{}", g.path().display())).unwrap();
        assert_eq!(w.weight_at(1).unwrap(), Complex64::new(0.0, -2.0));

        for bad in ["{}", "[]", "[1, \"x\"]", "[[1, 2, 3]]", "not json"] {
            let mut h = tempfile::NamedTempFile::new().unwrap();
            write!(h, "{bad}").unwrap();
            let r = parse_weight_spec(&format!("file:{}", h.path().display()));
            assert!(matches!(r, Err(Error::WeightFile { .. })), "{bad}");
        }
        assert!(matches!(
            parse_weight_spec("file:/nonexistent/weights.json"),
            Err(Error::WeightFile { .. })
        ));
    }

    #[test]
    fn sup_examples() {
        let s = WeightSequence::geometric(2.0).unwrap().sup_modulus(100);
        assert_eq!(s.value(), 1.0);
        assert!(!s.is_estimate());
        let s = WeightSequence::dirichlet().sup_modulus(100);
        assert_eq!(s.value(), std::f64::consts::SQRT_2);
        let s = WeightSequence::bergman().sup_modulus(100);
        assert!(s.is_estimate());
        assert!((s.value() - (100.0f64 / 101.0).sqrt()).abs() < 1e-15);
        assert_eq!(s.index, Some(99));
    }

    #[test]
    fn inf_examples() {
        let d = WeightSequence::dirichlet().inf_geo_mean(1000);
        assert_eq!(d.analytic, Some(1.0));
        assert!(d.finite > 1.0);
        let b = WeightSequence::bergman().inf_geo_mean(1000);
        assert_eq!(b.analytic, Some(std::f64::consts::FRAC_1_SQRT_2));
        assert_eq!(b.finite, 0.5f64.sqrt());
        assert_eq!(b.index, Some(1));
        let c = WeightSequence::constant(1.0).inf_geo_mean(50);
        assert_eq!(c.finite, 1.0);
        let g = WeightSequence::geometric(2.0).unwrap().inf_geo_mean(40);
        assert_eq!(g.analytic, Some(0.0));
        // (1/2)^((40-1)/2)
        assert!((g.finite - 0.5f64.powf(19.5)).abs() < 1e-15);
        let k = WeightSequence::kronecker(0).inf_geo_mean(10);
        assert_eq!(k.finite, 0.0);
    }

    #[test]
    fn explicit_scans_stop_at_list_end() {
        let w = WeightSequence::explicit_real(&[0.5, -3.0, 1.0]).unwrap();
        let s = w.sup_modulus(100);
        assert_eq!(s.finite, 3.0);
        assert_eq!(s.index, Some(1));
        assert!(!s.is_estimate());
        let g = w.inf_geo_mean(100);
        assert!(g.is_estimate());
        assert_eq!(g.finite, 0.5);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn family() -> impl Strategy<Value = WeightSequence> {
            prop_oneof![
                (-3.0f64..3.0).prop_map(WeightSequence::constant),
                (1.0f64..4.0).prop_map(|a| WeightSequence::geometric(a).unwrap()),
                Just(WeightSequence::dirichlet()),
                Just(WeightSequence::bergman()),
                (0usize..50).prop_map(WeightSequence::kronecker),
                proptest::collection::vec(-2.0f64..2.0, 1..40)
                    .prop_map(|v| WeightSequence::explicit_real(&v).unwrap().zero_extended()),
            ]
        }

        proptest! {
            #[test]
            fn moduli_below_sup(w in family()) {
                let sup = w.sup_modulus(10_000).value();
                for i in 0..10_000 {
                    prop_assert!(w.modulus_at(i).unwrap() <= sup + 1e-15);
                }
            }

            #[test]
            fn inf_geo_mean_non_increasing(w in family(), j in 1usize..200) {
                let a = w.inf_geo_mean(j).finite;
                let b = w.inf_geo_mean(j + 1).finite;
                prop_assert!(b <= a);
            }
        }
    }
}
